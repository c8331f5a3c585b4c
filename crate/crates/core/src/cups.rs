//! Cup diagrams.
//!
//! The full picture lives on the `4n` points `-2n..-1, 1..2n`: the sign
//! sequence of `w` is extended antisymmetrically to the left and by frozen
//! signs on both ends, matched into cups, and pairs of cups crossing the
//! middle are linked. Cutting the full picture at `0` and at `n + 1/2` gives
//! a decorated cup diagram on `n` points with dotted cups and edges.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::weyl::{enumerate_wp, PMSequence, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Up,
    Down,
}

impl Label {
    pub fn flip(self) -> Label {
        match self {
            Label::Up => Label::Down,
            Label::Down => Label::Up,
        }
    }

    /// `+` is `Down`, `-` is `Up`.
    pub fn of_sign(s: Sign) -> Label {
        match s {
            Sign::Plus => Label::Down,
            Sign::Minus => Label::Up,
        }
    }
}

/// Position of point `p` in `0..4n`, left to right.
pub fn point_index(n: usize, p: i32) -> usize {
    let n = n as i32;
    debug_assert!(p != 0 && p.abs() <= 2 * n);
    if p < 0 {
        (p + 2 * n) as usize
    } else {
        (p + 2 * n - 1) as usize
    }
}

/// Inverse of [`point_index`].
pub fn index_point(n: usize, idx: usize) -> i32 {
    let (n, idx) = (n as i32, idx as i32);
    if idx < 2 * n {
        idx - 2 * n
    } else {
        idx - 2 * n + 1
    }
}

/// The extended `±`-sequence on all `4n` points, in [`point_index`] order.
pub fn extended_signs(alpha: &PMSequence) -> Vec<Sign> {
    let n = alpha.n();
    let mut out = Vec::with_capacity(4 * n);
    out.extend(std::iter::repeat_n(Sign::Plus, n));
    out.extend(alpha.signs().iter().rev().map(|s| s.flip()));
    out.extend(alpha.signs().iter().copied());
    out.extend(std::iter::repeat_n(Sign::Minus, n));
    out
}

/// An extended weight: `Up`/`Down` labels on all `4n` points, frozen `Down`
/// on `-2n..-(n+1)`, frozen `Up` on `n+1..2n`, antisymmetric in between.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    n: usize,
    labels: Vec<Label>,
}

impl Weight {
    pub fn of(v: &PMSequence) -> Weight {
        Weight {
            n: v.n(),
            labels: extended_signs(v).into_iter().map(Label::of_sign).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn at(&self, p: i32) -> Label {
        self.labels[point_index(self.n, p)]
    }

    /// The core sequence on `1..n`.
    pub fn sequence(&self) -> PMSequence {
        let signs = (1..=self.n as i32)
            .map(|p| match self.at(p) {
                Label::Down => Sign::Plus,
                Label::Up => Sign::Minus,
            })
            .collect();
        PMSequence::new(signs).expect("weights are even")
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.sequence().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Weight::of(&PMSequence::deserialize(deserializer)?))
    }
}

/// An arc `(left, right)` of a full cup diagram, `left < right`.
pub type ArcEnds = (i32, i32);

/// Mirror image of an arc under `p -> -p`.
pub fn mirror(arc: ArcEnds) -> ArcEnds {
    (-arc.1, -arc.0)
}

/// The planar matching of the extended sequence of `alpha`, each arc
/// joining a `+` on its left end to a `-` on its right end. Sorted by left end.
pub fn matching(alpha: &PMSequence) -> Vec<ArcEnds> {
    let n = alpha.n();
    let mut open = Vec::new();
    let mut arcs = Vec::with_capacity(2 * n);
    for (idx, s) in extended_signs(alpha).into_iter().enumerate() {
        match s {
            Sign::Plus => open.push(idx),
            Sign::Minus => {
                let left = open.pop().expect("extended sequences are always matchable");
                arcs.push((index_point(n, left), index_point(n, idx)));
            }
        }
    }
    arcs.sort();
    arcs
}

/// The symmetric cup diagram `C(w)` with linked pairs stored by arc index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FullCupDiagram {
    n: usize,
    arcs: Vec<ArcEnds>,
    linked: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Oriented, with the given number of clockwise arcs.
    Oriented(usize),
    NotOriented,
}

impl FullCupDiagram {
    pub fn of(w: &PMSequence) -> FullCupDiagram {
        let n = w.n();
        let matched = matching(w);
        let mut crossing: Vec<ArcEnds> = matched.iter().copied().filter(|(l, r)| *l < 0 && *r > 0).collect();
        // innermost first
        crossing.sort_by_key(|(l, _)| std::cmp::Reverse(*l));
        debug_assert!(crossing.len().is_multiple_of(2));

        let mut arcs: Vec<ArcEnds> = matched.iter().copied().filter(|(l, r)| !(*l < 0 && *r > 0)).collect();
        let mut pairs = Vec::new();
        for chunk in crossing.chunks(2) {
            let ((a1, b1), (a2, b2)) = (chunk[0], chunk[1]);
            pairs.push(((a1, b2), (a2, b1)));
            arcs.push((a1, b2));
            arcs.push((a2, b1));
        }
        arcs.sort();
        let find = |a: ArcEnds| arcs.binary_search(&a).expect("arc present");
        let linked = pairs.into_iter().map(|(x, y)| (find(x), find(y))).collect();
        FullCupDiagram { n, arcs, linked }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[ArcEnds] {
        &self.arcs
    }

    /// Linked pairs as indices into [`arcs`](Self::arcs).
    pub fn linked_pairs(&self) -> &[(usize, usize)] {
        &self.linked
    }

    pub fn linked_arcs(&self) -> impl Iterator<Item = (ArcEnds, ArcEnds)> + '_ {
        self.linked.iter().map(|&(a, b)| (self.arcs[a], self.arcs[b]))
    }

    pub fn is_linked(&self, arc: usize) -> bool {
        self.linked.iter().any(|&(a, b)| a == arc || b == arc)
    }

    /// `partner[point_index(p)]` is the point index joined to `p`.
    pub fn partners(&self) -> Vec<usize> {
        let mut partner = vec![0; 4 * self.n];
        for &(l, r) in &self.arcs {
            let (il, ir) = (point_index(self.n, l), point_index(self.n, r));
            partner[il] = ir;
            partner[ir] = il;
        }
        partner
    }

    /// `arc_of[point_index(p)]` is the index of the arc through `p`.
    pub fn arc_of_point(&self) -> Vec<usize> {
        let mut arc_of = vec![0; 4 * self.n];
        for (k, &(l, r)) in self.arcs.iter().enumerate() {
            arc_of[point_index(self.n, l)] = k;
            arc_of[point_index(self.n, r)] = k;
        }
        arc_of
    }

    /// Orients the diagram by raw labels on all `4n` points. Decorations
    /// play no role; every arc needs one `Up` and one `Down`, and an arc is
    /// clockwise when its left end is `Up`.
    pub fn orient_labels(&self, labels: &[Label]) -> Orientation {
        let mut clockwise = 0;
        for &(l, r) in &self.arcs {
            let (a, b) = (labels[point_index(self.n, l)], labels[point_index(self.n, r)]);
            match (a, b) {
                (Label::Up, Label::Down) => clockwise += 1,
                (Label::Down, Label::Up) => {}
                _ => return Orientation::NotOriented,
            }
        }
        Orientation::Oriented(clockwise)
    }

    pub fn orient(&self, v: &Weight) -> Orientation {
        assert_eq!(v.n(), self.n, "weight and diagram ranks differ");
        self.orient_labels(v.labels())
    }

    /// Cuts the full picture down to the points `1..n`.
    pub fn cut(&self) -> DecoratedCupDiagram {
        let n = self.n as i32;
        let inside = |p: i32| (1..=n).contains(&p);
        let mut cups = Vec::new();
        let mut edges = Vec::new();
        for (k, &(l, r)) in self.arcs.iter().enumerate() {
            if self.is_linked(k) {
                continue;
            }
            match (inside(l), inside(r)) {
                (true, true) => cups.push(Cup {
                    from: l as usize,
                    to: r as usize,
                    dotted: false,
                }),
                (true, false) if r > n => edges.push(Edge {
                    at: l as usize,
                    dotted: false,
                }),
                _ => {}
            }
        }
        for ((_, r1), (_, r2)) in self.linked_arcs() {
            let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
            match (inside(lo), inside(hi)) {
                (true, true) => cups.push(Cup {
                    from: lo as usize,
                    to: hi as usize,
                    dotted: true,
                }),
                (true, false) => edges.push(Edge {
                    at: lo as usize,
                    dotted: true,
                }),
                _ => {}
            }
        }
        DecoratedCupDiagram::from_parts(self.n, cups, edges)
    }
}

/// `C(w)`
pub fn cup_diagram(w: &PMSequence) -> FullCupDiagram {
    FullCupDiagram::of(w)
}

/// `n_{v,w}` read off the cup diagram: `q^{cl/2}` when the weight of `v`
/// orients `C(w)`, zero otherwise.
pub fn kl_poly_diagrammatic(v: &PMSequence, w: &PMSequence) -> LaurentPoly {
    assert_eq!(v.n(), w.n(), "ranks differ");
    match cup_diagram(w).orient(&Weight::of(v)) {
        Orientation::Oriented(cl) => {
            debug_assert!(cl % 2 == 0);
            LaurentPoly::monomial(1, (cl / 2) as i64)
        }
        Orientation::NotOriented => LaurentPoly::zero(),
    }
}

/// Every `v` orienting `C(w)` with its clockwise count.
pub fn orientations_of(w: &PMSequence) -> Vec<(PMSequence, usize)> {
    let c = cup_diagram(w);
    enumerate_wp(w.n())
        .expect("rank is positive")
        .into_iter()
        .filter_map(|v| match c.orient(&Weight::of(&v)) {
            Orientation::Oriented(cl) => Some((v, cl)),
            Orientation::NotOriented => None,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cup {
    pub from: usize,
    pub to: usize,
    pub dotted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub at: usize,
    pub dotted: bool,
}

/// A decorated cup diagram on the points `1..n`: non-crossing cups and
/// edges running down to the bottom face, each possibly carrying a dot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecoratedCupDiagram {
    n: usize,
    cups: Vec<Cup>,
    edges: Vec<Edge>,
}

impl DecoratedCupDiagram {
    fn from_parts(n: usize, mut cups: Vec<Cup>, mut edges: Vec<Edge>) -> Self {
        cups.sort();
        edges.sort();
        DecoratedCupDiagram { n, cups, edges }
    }

    /// Builds and validates a diagram; see [`validate`](Self::validate).
    pub fn new(n: usize, cups: Vec<Cup>, edges: Vec<Edge>) -> Result<Self> {
        let d = DecoratedCupDiagram::from_parts(n, cups, edges);
        d.validate()?;
        Ok(d)
    }

    /// The direct construction from `w`: join neighbouring `+-` pairs by
    /// plain cups, pair the remaining minuses left to right by dotted cups,
    /// and put edges on what is left, dotted under a minus.
    pub fn of(w: &PMSequence) -> Self {
        let n = w.n();
        let mut cups = Vec::new();
        let mut open: Vec<usize> = Vec::new();
        let mut rest: Vec<(usize, Sign)> = Vec::new();
        for (k, s) in w.signs().iter().enumerate() {
            let p = k + 1;
            match s {
                Sign::Plus => open.push(p),
                Sign::Minus => match open.pop() {
                    Some(from) => cups.push(Cup {
                        from,
                        to: p,
                        dotted: false,
                    }),
                    None => rest.push((p, Sign::Minus)),
                },
            }
        }
        rest.extend(open.into_iter().map(|p| (p, Sign::Plus)));
        rest.sort();
        let minuses: Vec<usize> = rest
            .iter()
            .filter(|(_, s)| *s == Sign::Minus)
            .map(|(p, _)| *p)
            .collect();
        let mut edges = Vec::new();
        for pair in minuses.chunks(2) {
            match *pair {
                [a, b] => cups.push(Cup {
                    from: a,
                    to: b,
                    dotted: true,
                }),
                [a] => edges.push(Edge { at: a, dotted: true }),
                _ => unreachable!(),
            }
        }
        edges.extend(
            rest.iter()
                .filter(|(_, s)| *s == Sign::Plus)
                .map(|(p, _)| Edge { at: *p, dotted: false }),
        );
        DecoratedCupDiagram::from_parts(n, cups, edges)
    }

    /// Every diagram on `n` points satisfying the invariants of
    /// [`validate`](Self::validate), in sorted order. Built without
    /// reference to sign sequences.
    pub fn enumerate(n: usize) -> Vec<DecoratedCupDiagram> {
        let mut out = BTreeSet::new();
        for (cups, edges) in noncrossing_partial_matchings(n) {
            let cup_slots = cups.len();
            let slots = cup_slots + edges.len();
            for mask in 0u64..(1u64 << slots) {
                let cs = cups
                    .iter()
                    .enumerate()
                    .map(|(k, &(from, to))| Cup {
                        from,
                        to,
                        dotted: mask >> k & 1 == 1,
                    })
                    .collect();
                let es = edges
                    .iter()
                    .enumerate()
                    .map(|(k, &at)| Edge {
                        at,
                        dotted: mask >> (cup_slots + k) & 1 == 1,
                    })
                    .collect();
                if let Ok(d) = DecoratedCupDiagram::new(n, cs, es) {
                    out.insert(d);
                }
            }
        }
        out.into_iter().collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cups(&self) -> &[Cup] {
        &self.cups
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of through edges, the cell index `λ`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn plain_cup_count(&self) -> usize {
        self.cups.iter().filter(|c| !c.dotted).count()
    }

    pub fn dotted_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.dotted).count()
    }

    /// Dotted edges plus plain cups is even.
    pub fn is_even(&self) -> bool {
        (self.dotted_edge_count() + self.plain_cup_count()).is_multiple_of(2)
    }

    fn first_edge(&self) -> Option<usize> {
        self.edges.iter().map(|e| e.at).min()
    }

    fn is_nested(&self, cup: &Cup) -> bool {
        self.cups.iter().any(|o| o.from < cup.from && cup.to < o.to)
    }

    /// Checks planarity, evenness, the single dotted edge and that every dot
    /// can be reached from the left wall.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        let mut seen = vec![false; self.n + 1];
        let points = self
            .cups
            .iter()
            .flat_map(|c| [c.from, c.to])
            .chain(self.edges.iter().map(|e| e.at));
        for p in points {
            if p == 0 || p > self.n || seen[p] {
                return bad(format!("point {p} missing, out of range or used twice"));
            }
            seen[p] = true;
        }
        if seen.iter().skip(1).any(|s| !s) {
            return bad("cups and edges do not cover 1..n".into());
        }
        for c in &self.cups {
            if c.from >= c.to {
                return bad(format!("cup ({}, {}) is not ordered", c.from, c.to));
            }
            for o in &self.cups {
                if c.from < o.from && o.from < c.to && c.to < o.to {
                    return bad(format!("cups ({}, {}) and ({}, {}) cross", c.from, c.to, o.from, o.to));
                }
            }
            if self.edges.iter().any(|e| c.from < e.at && e.at < c.to) {
                return bad(format!("an edge passes under cup ({}, {})", c.from, c.to));
            }
        }
        if !self.is_even() {
            return bad("odd number of dotted edges plus plain cups".into());
        }
        if self.dotted_edge_count() > 1 {
            return bad("more than one dotted edge".into());
        }
        let first = self.first_edge();
        for c in self.cups.iter().filter(|c| c.dotted) {
            if self.is_nested(c) || first.is_some_and(|e| e < c.from) {
                return bad(format!(
                    "dot on cup ({}, {}) is not reachable from the left",
                    c.from, c.to
                ));
            }
        }
        for e in self.edges.iter().filter(|e| e.dotted) {
            if Some(e.at) != first {
                return bad(format!("dot on edge {} is not reachable from the left", e.at));
            }
        }
        Ok(())
    }

    /// Orients the diagram by the weight of `v` on `1..n`. Returns the
    /// degree (number of clockwise cups) when oriented.
    ///
    /// Plain cups need opposite labels and are clockwise for `(Up, Down)`;
    /// dotted cups need equal labels and are clockwise for `(Down, Down)`.
    /// Plain edges need `Down`, dotted edges `Up`, both of degree zero.
    pub fn orient(&self, v: &PMSequence) -> Option<usize> {
        assert_eq!(v.n(), self.n, "ranks differ");
        let lab = |p: usize| Label::of_sign(v.at(p));
        let mut degree = 0;
        for c in &self.cups {
            match (c.dotted, lab(c.from), lab(c.to)) {
                (false, Label::Up, Label::Down) | (true, Label::Down, Label::Down) => degree += 1,
                (false, Label::Down, Label::Up) | (true, Label::Up, Label::Up) => {}
                _ => return None,
            }
        }
        for e in &self.edges {
            let need = if e.dotted { Label::Up } else { Label::Down };
            if lab(e.at) != need {
                return None;
            }
        }
        Some(degree)
    }

    /// Two-row picture: point labels, then `(`/`)` for cup ends, `|` for
    /// edges and `*` right after a dotted cup's left end or a dotted edge.
    pub fn render_ascii(&self) -> String {
        let width = 2 * self.n;
        let mut labels = vec![' '; width];
        let mut arcs = vec![' '; width];
        for p in 1..=self.n {
            let digit = std::char::from_digit((p % 10) as u32, 10).unwrap_or('?');
            labels[2 * (p - 1)] = digit;
        }
        for c in &self.cups {
            arcs[2 * (c.from - 1)] = '(';
            arcs[2 * (c.to - 1)] = ')';
            if c.dotted {
                arcs[2 * (c.from - 1) + 1] = '*';
            }
        }
        for e in &self.edges {
            arcs[2 * (e.at - 1)] = '|';
            if e.dotted {
                arcs[2 * (e.at - 1) + 1] = '*';
            }
        }
        let row = |v: Vec<char>| v.into_iter().collect::<String>().trim_end().to_string();
        format!("{}\n{}", row(labels), row(arcs))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// Parses the JSON form and validates it.
    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let raw: DecoratedCupDiagram = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        DecoratedCupDiagram::new(raw.n, raw.cups, raw.edges)
    }
}

impl fmt::Display for DecoratedCupDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_ascii())
    }
}

/// `w̲`, the decorated cup diagram of `w`.
pub fn decorated_cup(w: &PMSequence) -> DecoratedCupDiagram {
    DecoratedCupDiagram::of(w)
}

/// Cups and the uncovered points left as edges.
type PartialMatching = (Vec<(usize, usize)>, Vec<usize>);

/// All non-crossing partial matchings of `1..n` whose unmatched points are
/// not covered by any cup.
fn noncrossing_partial_matchings(n: usize) -> Vec<PartialMatching> {
    fn rec(lo: usize, hi: usize) -> Vec<PartialMatching> {
        // points lo..=hi, lo > hi means empty
        if lo > hi {
            return vec![(Vec::new(), Vec::new())];
        }
        let mut out = Vec::new();
        // lo is an edge
        for (cups, mut edges) in rec(lo + 1, hi) {
            edges.insert(0, lo);
            out.push((cups, edges));
        }
        // lo is the left end of a cup closing at j; the inside is fully matched
        let mut j = lo + 1;
        while j <= hi {
            for (inner, inner_edges) in rec(lo + 1, j - 1) {
                if !inner_edges.is_empty() {
                    continue;
                }
                for (outer, outer_edges) in rec(j + 1, hi) {
                    let mut cups = vec![(lo, j)];
                    cups.extend(inner.iter().copied());
                    cups.extend(outer);
                    out.push((cups, outer_edges));
                }
            }
            j += 2;
        }
        out
    }
    rec(1, n)
}
