//! Decorated tangles, the quotient algebra they span, its action on
//! decorated cup diagrams and the cellular structure.
//!
//! A tangle has `m` bottom and `n` top boundary points, numbered `1..=m`
//! along the bottom and `m+1..=m+n` along the top, both left to right.
//! Products stack: `x * y` is `y` drawn on top of `x`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cups::{decorated_cup, Cup, DecoratedCupDiagram, Edge};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::weyl::{enumerate_wp, GeneratorIndex};

/// Reduction rules used when stacking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Dots only cancel in pairs; a loop with one dot survives and absorbs
    /// every other dot.
    TL,
    /// A loop with one dot is zero, and for even rank so is every tangle
    /// without through-strands and with an odd number of plain top cups.
    TLhat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strand {
    pub a: usize,
    pub b: usize,
    pub dotted: bool,
}

/// A crossing-free tangle in normal form: each strand carries at most one
/// dot and every dot is reachable from the left wall.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecoratedTangle {
    m: usize,
    n: usize,
    strands: Vec<Strand>,
    dotted_loop: bool,
}

/// A scalar multiple of something, or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scaled<T> {
    Zero,
    Term(LaurentPoly, T),
}

impl<T> Scaled<T> {
    pub fn is_zero(&self) -> bool {
        matches!(self, Scaled::Zero)
    }

    pub fn term(self) -> Option<(LaurentPoly, T)> {
        match self {
            Scaled::Zero => None,
            Scaled::Term(c, t) => Some((c, t)),
        }
    }

    fn of(coeff: LaurentPoly, value: T) -> Self {
        if coeff.is_zero() {
            Scaled::Zero
        } else {
            Scaled::Term(coeff, value)
        }
    }
}

pub type TangleScalarPair = Scaled<DecoratedTangle>;

/// Non-crossing perfect matchings of `0..2k`.
fn perfect_matchings(points: usize) -> Vec<Vec<(usize, usize)>> {
    type Memo = BTreeMap<(usize, usize), Vec<Vec<(usize, usize)>>>;
    fn rec(lo: usize, hi: usize, memo: &mut Memo) -> Vec<Vec<(usize, usize)>> {
        if lo >= hi {
            return vec![Vec::new()];
        }
        if let Some(v) = memo.get(&(lo, hi)) {
            return v.clone();
        }
        let mut out = Vec::new();
        let mut j = lo + 1;
        while j < hi {
            for inner in rec(lo + 1, j, memo) {
                for outer in rec(j + 1, hi, memo) {
                    let mut m = vec![(lo, j)];
                    m.extend(inner.iter().copied());
                    m.extend(outer);
                    out.push(m);
                }
            }
            j += 2;
        }
        memo.insert((lo, hi), out.clone());
        out
    }
    if points % 2 == 1 {
        return Vec::new();
    }
    rec(0, points, &mut BTreeMap::new())
}

/// Paths and loops of a graph where outer vertices have degree one and all
/// others degree two. Paths are `(start, end, odd)`, loops are `odd`.
fn trace(outer: &[bool], edges: &[(usize, usize, bool)]) -> (Vec<(usize, usize, bool)>, Vec<bool>) {
    let mut incident = vec![Vec::new(); outer.len()];
    for (k, &(u, v, _)) in edges.iter().enumerate() {
        incident[u].push(k);
        incident[v].push(k);
    }
    let mut used = vec![false; edges.len()];
    let other = |e: usize, at: usize| if edges[e].0 == at { edges[e].1 } else { edges[e].0 };

    let mut paths = Vec::new();
    for start in (0..outer.len()).filter(|&v| outer[v]) {
        let first = incident[start][0];
        if used[first] {
            continue;
        }
        let (mut at, mut e, mut odd) = (start, first, false);
        loop {
            used[e] = true;
            odd ^= edges[e].2;
            at = other(e, at);
            if outer[at] {
                break;
            }
            e = *incident[at]
                .iter()
                .find(|&&f| f != e)
                .expect("inner vertices have degree two");
        }
        paths.push((start, at, odd));
    }

    let mut loops = Vec::new();
    for first in 0..edges.len() {
        if used[first] {
            continue;
        }
        let start = edges[first].0;
        let (mut at, mut e, mut odd) = (start, first, false);
        loop {
            used[e] = true;
            odd ^= edges[e].2;
            at = other(e, at);
            if at == start {
                break;
            }
            e = *incident[at]
                .iter()
                .find(|&&f| f != e)
                .expect("inner vertices have degree two");
        }
        loops.push(odd);
    }
    (paths, loops)
}

impl DecoratedTangle {
    /// Builds and validates a tangle. Strands may be given in any order
    /// and with either end first.
    pub fn new(m: usize, n: usize, strands: Vec<Strand>) -> Result<Self> {
        let t = DecoratedTangle::normalized(m, n, strands, false);
        t.validate()?;
        Ok(t)
    }

    fn normalized(m: usize, n: usize, strands: Vec<Strand>, dotted_loop: bool) -> Self {
        let mut strands: Vec<Strand> = strands
            .into_iter()
            .map(|s| {
                if s.a <= s.b {
                    s
                } else {
                    Strand {
                        a: s.b,
                        b: s.a,
                        dotted: s.dotted,
                    }
                }
            })
            .collect();
        strands.sort();
        DecoratedTangle {
            m,
            n,
            strands,
            dotted_loop,
        }
    }

    pub fn identity(n: usize) -> Self {
        let strands = (1..=n)
            .map(|i| Strand {
                a: i,
                b: n + i,
                dotted: false,
            })
            .collect();
        DecoratedTangle {
            m: n,
            n,
            strands,
            dotted_loop: false,
        }
    }

    pub fn bottom(&self) -> usize {
        self.m
    }

    pub fn top(&self) -> usize {
        self.n
    }

    pub fn strands(&self) -> &[Strand] {
        &self.strands
    }

    /// Only possible in [`Mode::TL`].
    pub fn has_dotted_loop(&self) -> bool {
        self.dotted_loop
    }

    fn is_top(&self, p: usize) -> bool {
        p > self.m
    }

    /// Position of boundary point `p` when walking the boundary clockwise
    /// from the bottom-left corner.
    fn linear(&self, p: usize) -> usize {
        if p <= self.m {
            p - 1
        } else {
            2 * self.m + self.n - p
        }
    }

    fn linear_span(&self, s: &Strand) -> (usize, usize) {
        let (x, y) = (self.linear(s.a), self.linear(s.b));
        (x.min(y), x.max(y))
    }

    pub fn through_strands(&self) -> impl Iterator<Item = &Strand> + '_ {
        self.strands
            .iter()
            .filter(move |s| !self.is_top(s.a) && self.is_top(s.b))
    }

    pub fn through_count(&self) -> usize {
        self.through_strands().count()
    }

    pub fn top_cups(&self) -> impl Iterator<Item = &Strand> + '_ {
        self.strands.iter().filter(move |s| self.is_top(s.a))
    }

    pub fn bottom_caps(&self) -> impl Iterator<Item = &Strand> + '_ {
        self.strands.iter().filter(move |s| !self.is_top(s.b))
    }

    pub fn dot_count(&self) -> usize {
        self.strands.iter().filter(|s| s.dotted).count()
    }

    fn is_accessible(&self, s: &Strand) -> bool {
        let (x, y) = self.linear_span(s);
        !self.strands.iter().any(|o| {
            let (u, v) = self.linear_span(o);
            u < x && y < v
        })
    }

    /// Planar perfect pairing of the boundary, accessible dots, even total.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        let total = self.m + self.n;
        let mut seen = vec![false; total + 1];
        for s in &self.strands {
            for p in [s.a, s.b] {
                if p == 0 || p > total || seen[p] {
                    return bad(format!("boundary point {p} missing, out of range or used twice"));
                }
                seen[p] = true;
            }
        }
        if seen.iter().skip(1).any(|s| !s) {
            return bad("strands do not cover the boundary".into());
        }
        let spans: Vec<_> = self.strands.iter().map(|s| self.linear_span(s)).collect();
        for &(x, y) in &spans {
            if spans.iter().any(|&(u, v)| x < u && u < y && y < v) {
                return bad("strands cross".into());
            }
        }
        for s in self.strands.iter().filter(|s| s.dotted) {
            if !self.is_accessible(s) {
                return bad(format!(
                    "dot on strand ({}, {}) is not reachable from the left",
                    s.a, s.b
                ));
            }
        }
        if self.dot_count() % 2 == 1 {
            return bad("odd number of dots".into());
        }
        Ok(())
    }

    /// Reflection in a horizontal line: bottom point `i` and top point `i`
    /// trade places.
    pub fn star(&self) -> DecoratedTangle {
        let (m, n) = (self.m, self.n);
        let flip = |p: usize| if p <= m { n + p } else { p - m };
        let strands = self
            .strands
            .iter()
            .map(|s| Strand {
                a: flip(s.a),
                b: flip(s.b),
                dotted: s.dotted,
            })
            .collect();
        DecoratedTangle::normalized(n, m, strands, self.dotted_loop)
    }

    /// No through-strands and an odd number of plain top cups.
    pub fn is_in_ideal(&self) -> bool {
        self.m == self.n
            && self.n.is_multiple_of(2)
            && self.through_count() == 0
            && self.top_cups().filter(|s| !s.dotted).count() % 2 == 1
    }

    /// Three rows: point numbers, the top boundary and the bottom boundary.
    /// `(`/`)` mark cup and cap ends, `|` through-strand ends, and `*`
    /// follows the left end of a dotted strand.
    pub fn render_ascii(&self) -> String {
        let width = self.m.max(self.n);
        let mut labels = vec![' '; 2 * width];
        for p in 1..=width {
            labels[2 * (p - 1)] = std::char::from_digit((p % 10) as u32, 10).unwrap_or('?');
        }
        let mut top = vec![' '; 2 * width];
        let mut bottom = vec![' '; 2 * width];
        for s in &self.strands {
            let (ta, tb) = (self.is_top(s.a), self.is_top(s.b));
            match (ta, tb) {
                (true, true) => {
                    let (i, j) = (s.a - self.m, s.b - self.m);
                    top[2 * (i - 1)] = '(';
                    top[2 * (j - 1)] = ')';
                    if s.dotted {
                        top[2 * (i - 1) + 1] = '*';
                    }
                }
                (false, false) => {
                    bottom[2 * (s.a - 1)] = '(';
                    bottom[2 * (s.b - 1)] = ')';
                    if s.dotted {
                        bottom[2 * (s.a - 1) + 1] = '*';
                    }
                }
                _ => {
                    let j = s.b - self.m;
                    top[2 * (j - 1)] = '|';
                    bottom[2 * (s.a - 1)] = '|';
                    if s.dotted {
                        top[2 * (j - 1) + 1] = '*';
                    }
                }
            }
        }
        let row = |v: Vec<char>| v.into_iter().collect::<String>().trim_end().to_string();
        let mut out = format!("{}\n{}\n{}", row(labels), row(top), row(bottom));
        if self.dotted_loop {
            out.push_str("\n(dotted loop)");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TangleJson::from(self)).expect("serializable")
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self> {
        let raw: TangleJson = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        let strands = raw
            .strands
            .iter()
            .map(|s| Strand {
                a: s.ends[0],
                b: s.ends[1],
                dotted: s.dotted,
            })
            .collect();
        let t = DecoratedTangle::normalized(raw.m, raw.n, strands, raw.dotted_loop);
        t.validate()?;
        Ok(t)
    }
}

impl fmt::Display for DecoratedTangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_ascii())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StrandJson {
    ends: [usize; 2],
    dotted: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TangleJson {
    m: usize,
    n: usize,
    strands: Vec<StrandJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    dotted_loop: bool,
}

impl From<&DecoratedTangle> for TangleJson {
    fn from(t: &DecoratedTangle) -> Self {
        TangleJson {
            m: t.m,
            n: t.n,
            strands: t
                .strands
                .iter()
                .map(|s| StrandJson {
                    ends: [s.a, s.b],
                    dotted: s.dotted,
                })
                .collect(),
            dotted_loop: t.dotted_loop,
        }
    }
}

/// `e_i` on `n` strands: a cup joining top points `i, i+1`, a cap joining
/// bottom points `i, i+1`, vertical strands elsewhere. `e_0` is `e_1` with
/// a dot on the cup and on the cap.
pub fn generator(n: usize, i: GeneratorIndex) -> Result<DecoratedTangle> {
    if n < 2 {
        return Err(Error::RankTooSmall { n, min: 2 });
    }
    if i.get() >= n {
        return Err(Error::GeneratorOutOfRange { index: i.get(), n });
    }
    let (k, dotted) = if i.get() == 0 { (1, true) } else { (i.get(), false) };
    let mut strands = vec![
        Strand { a: k, b: k + 1, dotted },
        Strand {
            a: n + k,
            b: n + k + 1,
            dotted,
        },
    ];
    strands.extend((1..=n).filter(|&p| p != k && p != k + 1).map(|p| Strand {
        a: p,
        b: n + p,
        dotted: false,
    }));
    Ok(DecoratedTangle::normalized(n, n, strands, false))
}

/// Stacks `b` on top of `a` and reduces to normal form.
pub fn concat_reduce(a: &DecoratedTangle, b: &DecoratedTangle, mode: Mode) -> Result<TangleScalarPair> {
    if a.n != b.m {
        return Err(Error::SizeMismatch { left: a.n, right: b.m });
    }
    let (ma, mid, nb) = (a.m, a.n, b.n);
    // vertices: a's bottom, the middle row, b's top
    let total = ma + mid + nb;
    let outer: Vec<bool> = (0..total).map(|v| v < ma || v >= ma + mid).collect();
    let va = |p: usize| p - 1;
    let vb = |p: usize| if p <= b.m { ma + p - 1 } else { ma + mid + (p - b.m - 1) };
    let mut edges: Vec<(usize, usize, bool)> = a.strands.iter().map(|s| (va(s.a), va(s.b), s.dotted)).collect();
    edges.extend(b.strands.iter().map(|s| (vb(s.a), vb(s.b), s.dotted)));

    let (paths, loops) = trace(&outer, &edges);
    let point = |v: usize| if v < ma { v + 1 } else { ma + (v - ma - mid) + 1 };
    let mut strands: Vec<Strand> = paths
        .into_iter()
        .map(|(u, v, odd)| Strand {
            a: point(u),
            b: point(v),
            dotted: odd,
        })
        .collect();

    let odd_loops = loops.iter().filter(|&&o| o).count() + usize::from(a.dotted_loop) + usize::from(b.dotted_loop);
    let mut plain_loops = loops.iter().filter(|&&o| !o).count();
    let mut dotted_loop = false;
    if odd_loops > 0 {
        match mode {
            Mode::TLhat => return Ok(Scaled::Zero),
            Mode::TL => {
                dotted_loop = true;
                plain_loops += odd_loops - 1;
                for s in &mut strands {
                    s.dotted = false;
                }
            }
        }
    }
    let t = DecoratedTangle::normalized(ma, nb, strands, dotted_loop);
    if mode == Mode::TLhat && t.is_in_ideal() {
        return Ok(Scaled::Zero);
    }
    Ok(Scaled::of(LaurentPoly::loop_value().pow(plain_loops as u32), t))
}

/// `t` drawn on top of `d`: the right action on decorated cup diagrams.
/// Plain closed loops give `q + q^-1`, loops with one dot give zero, and a
/// path joining two edges of `d` gives zero when plain and is removed when
/// dotted.
pub fn act(t: &DecoratedTangle, d: &DecoratedCupDiagram) -> Result<Scaled<DecoratedCupDiagram>> {
    if t.m != d.n() {
        return Err(Error::SizeMismatch {
            left: d.n(),
            right: t.m,
        });
    }
    if t.dotted_loop {
        return Ok(Scaled::Zero);
    }
    let (n, top) = (t.m, t.n);
    // vertices: the points of d, t's top, one floor vertex per edge of d
    let floors = d.edge_count();
    let total = n + top + floors;
    let outer: Vec<bool> = (0..total).map(|v| v >= n).collect();
    let vt = |p: usize| p - 1;
    let mut edges: Vec<(usize, usize, bool)> = t.strands.iter().map(|s| (vt(s.a), vt(s.b), s.dotted)).collect();
    edges.extend(d.cups().iter().map(|c| (c.from - 1, c.to - 1, c.dotted)));
    edges.extend(
        d.edges()
            .iter()
            .enumerate()
            .map(|(k, e)| (e.at - 1, n + top + k, e.dotted)),
    );

    let (paths, loops) = trace(&outer, &edges);
    if loops.iter().any(|&o| o) {
        return Ok(Scaled::Zero);
    }
    let is_floor = |v: usize| v >= n + top;
    let top_point = |v: usize| v - n + 1;
    let (mut cups, mut new_edges) = (Vec::new(), Vec::new());
    for (u, v, odd) in paths {
        match (is_floor(u), is_floor(v)) {
            (true, true) if !odd => return Ok(Scaled::Zero),
            (true, true) => {}
            (false, false) => {
                let (x, y) = (top_point(u).min(top_point(v)), top_point(u).max(top_point(v)));
                cups.push(Cup {
                    from: x,
                    to: y,
                    dotted: odd,
                });
            }
            (false, true) => new_edges.push(Edge {
                at: top_point(u),
                dotted: odd,
            }),
            (true, false) => new_edges.push(Edge {
                at: top_point(v),
                dotted: odd,
            }),
        }
    }
    let result = DecoratedCupDiagram::new(top, cups, new_edges)?;
    Ok(Scaled::of(LaurentPoly::loop_value().pow(loops.len() as u32), result))
}

fn check_tlhat_rank(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::RankTooSmall { n, min: 3 })
    } else {
        Ok(())
    }
}

/// Every normal-form `(n, n)` tangle, ideal members included.
pub fn normal_form_tangles(n: usize) -> Vec<DecoratedTangle> {
    let from_linear = |x: usize| if x < n { x + 1 } else { 3 * n - x };
    let mut out = BTreeSet::new();
    for matching in perfect_matchings(2 * n) {
        let strands: Vec<Strand> = matching
            .iter()
            .map(|&(x, y)| Strand {
                a: from_linear(x),
                b: from_linear(y),
                dotted: false,
            })
            .collect();
        let plain = DecoratedTangle::normalized(n, n, strands, false);
        let accessible: Vec<usize> = (0..plain.strands.len())
            .filter(|&k| plain.is_accessible(&plain.strands[k]))
            .collect();
        for mask in 0u64..(1u64 << accessible.len()) {
            if mask.count_ones() % 2 == 1 {
                continue;
            }
            let mut t = plain.clone();
            for (bit, &k) in accessible.iter().enumerate() {
                t.strands[k].dotted = mask >> bit & 1 == 1;
            }
            out.insert(t);
        }
    }
    out.into_iter().collect()
}

/// Basis of the quotient algebra on `n` strands, `n >= 3`.
pub fn tlhat_basis(n: usize) -> Result<Vec<DecoratedTangle>> {
    check_tlhat_rank(n)?;
    Ok(normal_form_tangles(n)
        .into_iter()
        .filter(|t| !t.is_in_ideal())
        .collect())
}

/// The normal-form tangles killed in the quotient for even `n`.
pub fn ideal_elements(n: usize) -> Vec<DecoratedTangle> {
    normal_form_tangles(n).into_iter().filter(|t| t.is_in_ideal()).collect()
}

/// An `L`-linear combination of normal-form tangles.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TLElement {
    terms: BTreeMap<DecoratedTangle, LaurentPoly>,
}

impl TLElement {
    pub fn zero() -> Self {
        TLElement::default()
    }

    pub fn basis(t: DecoratedTangle) -> Self {
        let mut x = TLElement::zero();
        x.add_term(t, LaurentPoly::one());
        x
    }

    pub fn generator(n: usize, i: GeneratorIndex) -> Result<Self> {
        Ok(TLElement::basis(generator(n, i)?))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<DecoratedTangle, LaurentPoly> {
        &self.terms
    }

    pub fn add_term(&mut self, t: DecoratedTangle, c: LaurentPoly) {
        let slot = self.terms.entry(t.clone()).or_insert_with(LaurentPoly::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&t);
        }
    }

    /// `self * other`, i.e. `other` on top.
    pub fn mul(&self, other: &TLElement, mode: Mode) -> Result<TLElement> {
        let mut out = TLElement::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Scaled::Term(c, t) = concat_reduce(a, b, mode)? {
                    out.add_term(t, &(ca * cb) * &c);
                }
            }
        }
        Ok(out)
    }

    pub fn star(&self) -> TLElement {
        let mut out = TLElement::zero();
        for (t, c) in &self.terms {
            out.add_term(t.star(), c.clone());
        }
        out
    }

    /// Acts on a diagram, returning the coefficient of each result.
    pub fn act(&self, d: &DecoratedCupDiagram) -> Result<BTreeMap<DecoratedCupDiagram, LaurentPoly>> {
        let mut out: BTreeMap<DecoratedCupDiagram, LaurentPoly> = BTreeMap::new();
        for (t, c) in &self.terms {
            if let Scaled::Term(k, r) = act(t, d)? {
                *out.entry(r).or_insert_with(LaurentPoly::zero) += &(c * &k);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

/// The diagrams `decorated_cup(w)` in enumeration order of `w`.
pub fn dc_basis(n: usize) -> Result<Vec<DecoratedCupDiagram>> {
    Ok(enumerate_wp(n)?.iter().map(decorated_cup).collect())
}

/// Matrix of `x` on the span of all even decorated cup diagrams: entry
/// `[r][c]` is the coefficient of diagram `r` in `x` acting on diagram `c`.
pub fn representation_matrix(n: usize, x: &TLElement) -> Result<Vec<Vec<LaurentPoly>>> {
    let basis = dc_basis(n)?;
    let index: BTreeMap<&DecoratedCupDiagram, usize> = basis.iter().enumerate().map(|(k, d)| (d, k)).collect();
    let mut m = vec![vec![LaurentPoly::zero(); basis.len()]; basis.len()];
    for (c, d) in basis.iter().enumerate() {
        for (r, coeff) in x.act(d)? {
            let row = *index
                .get(&r)
                .ok_or_else(|| Error::InvalidDiagram(format!("result outside the basis: {r:?}")))?;
            m[row][c] = coeff;
        }
    }
    Ok(m)
}

/// The tangle with `alpha` as its top half and the reflection of `beta` as
/// its bottom half. The `k`-th edge of `alpha` is joined to the `k`-th edge
/// of `beta`; dots on joined edges combine.
pub fn cell_tangle(alpha: &DecoratedCupDiagram, beta: &DecoratedCupDiagram) -> Result<DecoratedTangle> {
    let n = alpha.n();
    if beta.n() != n {
        return Err(Error::SizeMismatch {
            left: beta.n(),
            right: n,
        });
    }
    if alpha.edge_count() != beta.edge_count() {
        return Err(Error::InvalidDiagram(format!(
            "halves have {} and {} edges",
            alpha.edge_count(),
            beta.edge_count()
        )));
    }
    let mut strands: Vec<Strand> = alpha
        .cups()
        .iter()
        .map(|c| Strand {
            a: n + c.from,
            b: n + c.to,
            dotted: c.dotted,
        })
        .collect();
    strands.extend(beta.cups().iter().map(|c| Strand {
        a: c.from,
        b: c.to,
        dotted: c.dotted,
    }));
    strands.extend(alpha.edges().iter().zip(beta.edges()).map(|(top, bottom)| Strand {
        a: bottom.at,
        b: n + top.at,
        dotted: top.dotted ^ bottom.dotted,
    }));
    DecoratedTangle::new(n, n, strands)
}

/// Splits a square tangle into its top and bottom halves, placing the dot
/// of the leftmost through-strand so that both halves are even.
pub fn cut_tangle(t: &DecoratedTangle) -> Result<(DecoratedCupDiagram, DecoratedCupDiagram)> {
    if t.m != t.n {
        return Err(Error::SizeMismatch { left: t.n, right: t.m });
    }
    let n = t.n;
    let top_cups: Vec<Cup> = t
        .top_cups()
        .map(|s| Cup {
            from: s.a - n,
            to: s.b - n,
            dotted: s.dotted,
        })
        .collect();
    let bottom_cups: Vec<Cup> = t
        .bottom_caps()
        .map(|s| Cup {
            from: s.a,
            to: s.b,
            dotted: s.dotted,
        })
        .collect();
    let through: Vec<&Strand> = t.through_strands().collect();
    let odd_plain = |cups: &[Cup]| cups.iter().filter(|c| !c.dotted).count() % 2 == 1;
    let (top_dot, bottom_dot) = (odd_plain(&top_cups), odd_plain(&bottom_cups));
    if through.is_empty() && (top_dot || bottom_dot) {
        return Err(Error::InvalidDiagram("halves without edges must be even".into()));
    }
    if let Some(first) = through.first() {
        if first.dotted != (top_dot ^ bottom_dot) {
            return Err(Error::InvalidDiagram(
                "dot on the through-strand cannot be split evenly".into(),
            ));
        }
    }
    let edges = |dot: bool, end: &dyn Fn(&Strand) -> usize| -> Vec<Edge> {
        through
            .iter()
            .enumerate()
            .map(|(k, s)| Edge {
                at: end(s),
                dotted: k == 0 && dot,
            })
            .collect()
    };
    let alpha = DecoratedCupDiagram::new(n, top_cups, edges(top_dot, &|s: &Strand| s.b - n))?;
    let beta = DecoratedCupDiagram::new(n, bottom_cups, edges(bottom_dot, &|s: &Strand| s.a))?;
    Ok((alpha, beta))
}

/// `(λ, α, β)` labelling an element of the cellular basis.
pub type CellIndex = (usize, DecoratedCupDiagram, DecoratedCupDiagram);

/// The cellular datum: cell modules `M(λ)` indexed by the number of edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDatum {
    n: usize,
    cells: BTreeMap<usize, Vec<DecoratedCupDiagram>>,
}

impl CellDatum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambdas(&self) -> Vec<usize> {
        self.cells.keys().copied().collect()
    }

    pub fn cell(&self, lambda: usize) -> &[DecoratedCupDiagram] {
        self.cells.get(&lambda).map_or(&[], |v| v.as_slice())
    }

    pub fn cells(&self) -> &BTreeMap<usize, Vec<DecoratedCupDiagram>> {
        &self.cells
    }

    /// `C^λ_{α,β}` for every λ and every pair in `M(λ)`.
    pub fn c_map(&self) -> Result<Vec<(CellIndex, DecoratedTangle)>> {
        let mut out = Vec::new();
        for (&lambda, m) in &self.cells {
            for alpha in m {
                for beta in m {
                    out.push(((lambda, alpha.clone(), beta.clone()), cell_tangle(alpha, beta)?));
                }
            }
        }
        Ok(out)
    }

    /// Coefficients `r_x(α', α)` of `x` acting on `α ∈ M(λ)`, computed by
    /// stacking `x` on `C^λ_{α,β}` and discarding results with fewer than
    /// `λ` through-strands.
    pub fn cell_module_action(
        &self,
        lambda: usize,
        x: &TLElement,
        alpha: &DecoratedCupDiagram,
        beta: &DecoratedCupDiagram,
    ) -> Result<BTreeMap<DecoratedCupDiagram, LaurentPoly>> {
        let m = self.cell(lambda);
        if !m.contains(alpha) || !m.contains(beta) {
            return Err(Error::InvalidDiagram(format!("diagram is not in M({lambda})")));
        }
        let c = cell_tangle(alpha, beta)?;
        let mut out: BTreeMap<DecoratedCupDiagram, LaurentPoly> = BTreeMap::new();
        for (t, coeff) in x.terms() {
            let Scaled::Term(k, r) = concat_reduce(&c, t, Mode::TLhat)? else {
                continue;
            };
            if r.through_count() < lambda {
                continue;
            }
            let (top, bottom) = cut_tangle(&r)?;
            if &bottom != beta {
                return Err(Error::InvalidDiagram(
                    "bottom half changed under the cell action".into(),
                ));
            }
            *out.entry(top).or_insert_with(LaurentPoly::zero) += &(coeff * &k);
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Matrix of `x` on `M(λ)`: entry `[r][c]` is `r_x(M[r], M[c])`.
    pub fn cell_matrix(
        &self,
        lambda: usize,
        x: &TLElement,
        beta: &DecoratedCupDiagram,
    ) -> Result<Vec<Vec<LaurentPoly>>> {
        let m = self.cell(lambda);
        let mut out = vec![vec![LaurentPoly::zero(); m.len()]; m.len()];
        for (c, alpha) in m.iter().enumerate() {
            for (d, coeff) in self.cell_module_action(lambda, x, alpha, beta)? {
                let r = m.iter().position(|y| *y == d).expect("results stay in the cell");
                out[r][c] = coeff;
            }
        }
        Ok(out)
    }
}

pub fn cell_datum(n: usize) -> Result<CellDatum> {
    check_tlhat_rank(n)?;
    let mut cells: BTreeMap<usize, Vec<DecoratedCupDiagram>> = BTreeMap::new();
    for d in DecoratedCupDiagram::enumerate(n) {
        cells.entry(d.edge_count()).or_default().push(d);
    }
    Ok(CellDatum { n, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{kl_basis, kl_table};
    use crate::weyl::PMSequence;

    fn seq(s: &str) -> PMSequence {
        s.parse().unwrap()
    }

    fn gen(n: usize, i: usize) -> DecoratedTangle {
        generator(n, GeneratorIndex::new(i, n).unwrap()).unwrap()
    }

    fn scaled(c: LaurentPoly, t: DecoratedTangle) -> TangleScalarPair {
        Scaled::Term(c, t)
    }

    #[test]
    fn generators_are_valid_and_star_fixed() {
        for n in 2..=6 {
            for i in 0..n {
                let e = gen(n, i);
                e.validate().unwrap();
                assert_eq!(e.star(), e);
                assert_eq!(e.through_count(), n - 2);
            }
        }
        let e0 = gen(4, 0);
        assert_eq!(e0.render_ascii(), "1 2 3 4\n(*) | |\n(*) | |");
        assert_eq!(gen(4, 2).render_ascii(), "1 2 3 4\n| ( ) |\n| ( ) |");
        assert!(generator(4, GeneratorIndex::new(4, 5).unwrap()).is_err());
        assert!(generator(1, GeneratorIndex::new(0, 1).unwrap()).is_err());
    }

    #[test]
    fn stacking_examples() {
        let ql = LaurentPoly::loop_value();
        for mode in [Mode::TL, Mode::TLhat] {
            assert_eq!(
                concat_reduce(&gen(4, 1), &gen(4, 1), mode).unwrap(),
                scaled(ql.clone(), gen(4, 1))
            );
            assert_eq!(
                concat_reduce(&gen(4, 0), &gen(4, 0), mode).unwrap(),
                scaled(ql.clone(), gen(4, 0))
            );
        }
        assert!(concat_reduce(&gen(4, 0), &gen(4, 1), Mode::TLhat).unwrap().is_zero());
        let Scaled::Term(c, t) = concat_reduce(&gen(4, 0), &gen(4, 1), Mode::TL).unwrap() else {
            panic!("one-dotted loop survives without the quotient");
        };
        assert!(c.is_one());
        assert!(t.has_dotted_loop());
        assert_eq!(t.dot_count(), 0);
        assert!(concat_reduce(&gen(4, 0), &gen(3, 1), Mode::TL).is_err());
    }

    #[test]
    fn temperley_lieb_relations() {
        for n in 3..=6 {
            for mode in [Mode::TL, Mode::TLhat] {
                let g: Vec<TLElement> = (0..n).map(|i| TLElement::basis(gen(n, i))).collect();
                for i in 0..n {
                    let sq = g[i].mul(&g[i], mode).unwrap();
                    let mut want = TLElement::zero();
                    want.add_term(gen(n, i), LaurentPoly::loop_value());
                    assert_eq!(sq, want);
                    for j in 0..n {
                        if i == j {
                            continue;
                        }
                        match crate::weyl::coxeter_m(i, j) {
                            2 => assert_eq!(
                                g[i].mul(&g[j], mode).unwrap(),
                                g[j].mul(&g[i], mode).unwrap(),
                                "{i} {j}"
                            ),
                            3 => {
                                let iji = g[i].mul(&g[j], mode).unwrap().mul(&g[i], mode).unwrap();
                                assert_eq!(iji, g[i], "n={n} {i} {j} {mode:?}");
                            }
                            _ => unreachable!(),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(tlhat_basis(3).unwrap().len(), 10);
        assert_eq!(tlhat_basis(4).unwrap().len(), 26);
        assert!(tlhat_basis(2).is_err());
        let b3 = tlhat_basis(3).unwrap();
        assert!(b3.contains(&DecoratedTangle::identity(3)));
        for i in 0..3 {
            assert!(b3.contains(&gen(3, i)));
        }
        for n in 3..=5 {
            for t in tlhat_basis(n).unwrap() {
                t.validate().unwrap();
                assert!(!t.has_dotted_loop());
            }
        }
        assert!(ideal_elements(3).is_empty());
        assert!(!ideal_elements(4).is_empty());
    }

    #[test]
    fn action_examples() {
        let id = decorated_cup(&seq("++++"));
        let s0 = decorated_cup(&seq("--++"));
        assert_eq!(
            act(&gen(4, 0), &id).unwrap(),
            Scaled::Term(LaurentPoly::one(), s0.clone())
        );
        assert!(act(&gen(4, 1), &id).unwrap().is_zero());
        assert_eq!(
            act(&gen(4, 0), &s0).unwrap(),
            Scaled::Term(LaurentPoly::loop_value(), s0.clone())
        );
        assert_eq!(
            act(&DecoratedTangle::identity(4), &s0).unwrap(),
            Scaled::Term(LaurentPoly::one(), s0)
        );
    }

    #[test]
    fn action_preserves_even_diagrams() {
        for n in 2..=6 {
            let all: BTreeSet<_> = dc_basis(n).unwrap().into_iter().collect();
            for d in &all {
                for i in 0..n {
                    if let Scaled::Term(c, r) = act(&gen(n, i), d).unwrap() {
                        assert!(all.contains(&r));
                        assert!(r.is_even());
                        assert!(c.is_monomial() || c == LaurentPoly::loop_value());
                    }
                }
            }
        }
    }

    fn phi(x: &BTreeMap<PMSequence, LaurentPoly>) -> BTreeMap<DecoratedCupDiagram, LaurentPoly> {
        x.iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(w, c)| (decorated_cup(w), c.clone()))
            .collect()
    }

    #[test]
    fn action_commutes_with_hecke_action() {
        for n in 2..=6 {
            let table = kl_table(n).unwrap();
            for w in table.order() {
                let d = decorated_cup(w);
                for i in GeneratorIndex::all(n) {
                    let algebraic = phi(&kl_basis(w).cs_action(i).in_kl_basis(&table));
                    let diagrammatic = TLElement::basis(generator(n, i).unwrap()).act(&d).unwrap();
                    assert_eq!(diagrammatic, algebraic, "n={n} w={w} i={}", i.get());
                }
            }
        }
    }

    #[test]
    fn ideal_acts_by_zero() {
        for t in ideal_elements(4) {
            for d in dc_basis(4).unwrap() {
                assert!(act(&t, &d).unwrap().is_zero(), "{t:?} on {d:?}");
            }
        }
    }

    #[test]
    fn star_is_an_anti_automorphism() {
        for n in 3..=4 {
            let b = tlhat_basis(n).unwrap();
            for x in &b {
                assert_eq!(x.star().star(), *x);
                for y in &b {
                    let lhs = match concat_reduce(x, y, Mode::TLhat).unwrap() {
                        Scaled::Zero => Scaled::Zero,
                        Scaled::Term(c, t) => Scaled::Term(c, t.star()),
                    };
                    let rhs = concat_reduce(&y.star(), &x.star(), Mode::TLhat).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn products_stay_in_basis() {
        for n in 3..=4 {
            let b: BTreeSet<_> = tlhat_basis(n).unwrap().into_iter().collect();
            for x in &b {
                for i in 0..n {
                    if let Scaled::Term(_, t) = concat_reduce(x, &gen(n, i), Mode::TLhat).unwrap() {
                        assert!(b.contains(&t), "{t:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn cell_datum_counts() {
        let c3 = cell_datum(3).unwrap();
        assert_eq!(c3.lambdas(), vec![1, 3]);
        assert_eq!(c3.cell(3), &[decorated_cup(&seq("+++"))]);
        assert_eq!(c3.cell(1).len(), 3);
        let c4 = cell_datum(4).unwrap();
        assert_eq!(c4.lambdas(), vec![0, 2, 4]);
        assert_eq!([c4.cell(4).len(), c4.cell(2).len(), c4.cell(0).len()], [1, 4, 3]);
        for n in 3..=5 {
            let c = cell_datum(n).unwrap();
            let sizes: Vec<usize> = c.cells().values().map(Vec::len).collect();
            assert_eq!(sizes.iter().sum::<usize>(), 1 << (n - 1));
            assert_eq!(
                sizes.iter().map(|s| s * s).sum::<usize>(),
                tlhat_basis(n).unwrap().len()
            );
        }
    }

    #[test]
    fn c_map_is_a_bijection_onto_basis() {
        for n in 3..=5 {
            let c = cell_datum(n).unwrap();
            let image: Vec<_> = c.c_map().unwrap();
            let tangles: BTreeSet<_> = image.iter().map(|(_, t)| t.clone()).collect();
            assert_eq!(tangles.len(), image.len());
            let basis: BTreeSet<_> = tlhat_basis(n).unwrap().into_iter().collect();
            assert_eq!(tangles, basis);
            for ((lambda, alpha, beta), t) in &image {
                assert_eq!(t.through_count(), *lambda);
                assert_eq!(cut_tangle(t).unwrap(), (alpha.clone(), beta.clone()));
                assert_eq!(t.star(), cell_tangle(beta, alpha).unwrap());
            }
        }
    }

    #[test]
    fn cell_action_examples() {
        let c = cell_datum(3).unwrap();
        let m1 = c.cell(1).to_vec();
        let dotted = DecoratedCupDiagram::new(
            3,
            vec![Cup {
                from: 1,
                to: 2,
                dotted: true,
            }],
            vec![Edge { at: 3, dotted: false }],
        )
        .unwrap();
        let e0 = TLElement::basis(gen(3, 0));
        let r = c.cell_module_action(1, &e0, &dotted, &m1[0]).unwrap();
        assert_eq!(r, BTreeMap::from([(dotted.clone(), LaurentPoly::loop_value())]));
        let one = TLElement::basis(DecoratedTangle::identity(3));
        for a in &m1 {
            assert_eq!(
                c.cell_module_action(1, &one, a, &m1[1]).unwrap(),
                BTreeMap::from([(a.clone(), LaurentPoly::one())])
            );
        }
        for i in 0..3 {
            let m = c.cell_matrix(1, &TLElement::basis(gen(3, i)), &m1[0]).unwrap();
            assert_eq!(m.len(), 3);
            assert!(m.iter().all(|row| row.len() == 3));
        }
    }

    #[test]
    fn cell_action_is_independent_of_beta() {
        for n in 3..=4 {
            let c = cell_datum(n).unwrap();
            for lambda in c.lambdas() {
                let m = c.cell(lambda);
                for i in 0..n {
                    let x = TLElement::basis(gen(n, i));
                    let first = c.cell_matrix(lambda, &x, &m[0]).unwrap();
                    for beta in m {
                        assert_eq!(c.cell_matrix(lambda, &x, beta).unwrap(), first);
                    }
                }
            }
        }
    }

    #[test]
    fn cell_action_matches_module_action_modulo_lower_cells() {
        for n in 3..=5 {
            let c = cell_datum(n).unwrap();
            for lambda in c.lambdas() {
                let m = c.cell(lambda);
                for i in 0..n {
                    let x = TLElement::basis(gen(n, i));
                    for alpha in m {
                        let mut direct = x.act(alpha).unwrap();
                        direct.retain(|d, _| d.edge_count() == lambda);
                        assert_eq!(c.cell_module_action(lambda, &x, alpha, &m[0]).unwrap(), direct);
                    }
                }
            }
        }
    }

    #[test]
    fn representation_matrix_of_identity() {
        let m = representation_matrix(4, &TLElement::basis(DecoratedTangle::identity(4))).unwrap();
        for (r, row) in m.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                assert_eq!(x.is_one(), r == c);
                assert!(r == c || x.is_zero());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        for t in tlhat_basis(4).unwrap() {
            assert_eq!(DecoratedTangle::from_json(t.to_json()).unwrap(), t);
        }
        let v = gen(2, 0).to_json();
        assert_eq!(
            v,
            serde_json::json!({"m": 2, "n": 2, "strands": [
                {"ends": [1, 2], "dotted": true}, {"ends": [3, 4], "dotted": true}]})
        );
        let crossing = serde_json::json!({"m": 2, "n": 2, "strands": [
            {"ends": [1, 4], "dotted": false}, {"ends": [2, 3], "dotted": false}]});
        assert!(DecoratedTangle::from_json(crossing).is_err());
    }
}
