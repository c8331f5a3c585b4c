//! Circle diagrams: the cap diagram of `w'` glued on top of the cup diagram
//! of `w`, the black/red/green coloring of its circles, Hom dimensions and
//! graded Poincaré polynomials.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cups::{cup_diagram, decorated_cup, index_point, point_index, FullCupDiagram, Label, Orientation, Weight};
use crate::error::Result;
use crate::laurent::LaurentPoly;
use crate::weyl::{enumerate_wp, PMSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CircleColor {
    Black,
    Red,
    Green,
}

impl CircleColor {
    /// How many ways a single circle of this color can be oriented.
    pub fn orientation_count(self) -> usize {
        match self {
            CircleColor::Black => 2,
            CircleColor::Green => 1,
            CircleColor::Red => 0,
        }
    }
}

/// One closed curve of a circle diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    /// Points in the order the curve visits them, starting with a cup.
    pub points: Vec<i32>,
    pub upper_outer: usize,
    pub lower_outer: usize,
    /// Distinct linked pairs touched, cups and caps counted separately.
    pub linked_pairs: usize,
    /// Contains both arcs of some linked pair.
    pub self_intersecting: bool,
    pub color: CircleColor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredCircleDiagram {
    n: usize,
    circles: Vec<Circle>,
}

fn color_of(upper_outer: usize, lower_outer: usize, linked_pairs: usize) -> CircleColor {
    if upper_outer > 1 || lower_outer > 1 || linked_pairs % 2 == 1 {
        CircleColor::Red
    } else if upper_outer == 0 && lower_outer == 0 {
        CircleColor::Black
    } else {
        CircleColor::Green
    }
}

fn linked_stats(diagram: &FullCupDiagram, arcs_used: &BTreeSet<usize>) -> (usize, bool) {
    let mut touched = 0;
    let mut both = false;
    for &(a, b) in diagram.linked_pairs() {
        let (ha, hb) = (arcs_used.contains(&a), arcs_used.contains(&b));
        if ha || hb {
            touched += 1;
        }
        both |= ha && hb;
    }
    (touched, both)
}

/// Glues the cap diagram of `wprime` on top of the cup diagram of `w` and
/// colors each resulting circle.
pub fn circle_diagram(wprime: &PMSequence, w: &PMSequence) -> ColoredCircleDiagram {
    assert_eq!(w.n(), wprime.n(), "ranks differ");
    let n = w.n();
    let (cups, caps) = (cup_diagram(w), cup_diagram(wprime));
    let (cup_partner, cap_partner) = (cups.partners(), caps.partners());
    let (cup_arc, cap_arc) = (cups.arc_of_point(), caps.arc_of_point());

    let mut seen = vec![false; 4 * n];
    let mut circles = Vec::new();
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        let mut points = Vec::new();
        let (mut used_cups, mut used_caps) = (BTreeSet::new(), BTreeSet::new());
        let mut at = start;
        loop {
            seen[at] = true;
            points.push(index_point(n, at));
            used_cups.insert(cup_arc[at]);
            let across = cup_partner[at];
            seen[across] = true;
            points.push(index_point(n, across));
            used_caps.insert(cap_arc[across]);
            at = cap_partner[across];
            if at == start {
                break;
            }
        }
        let bound = n as i32;
        let upper_outer = points.iter().filter(|&&p| p > bound).count();
        let lower_outer = points.iter().filter(|&&p| p < -bound).count();
        let (cup_links, cup_self) = linked_stats(&cups, &used_cups);
        let (cap_links, cap_self) = linked_stats(&caps, &used_caps);
        let linked_pairs = cup_links + cap_links;
        circles.push(Circle {
            points,
            upper_outer,
            lower_outer,
            linked_pairs,
            self_intersecting: cup_self || cap_self,
            color: color_of(upper_outer, lower_outer, linked_pairs),
        });
    }
    ColoredCircleDiagram { n, circles }
}

impl ColoredCircleDiagram {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    fn count(&self, color: CircleColor) -> usize {
        self.circles.iter().filter(|c| c.color == color).count()
    }

    pub fn black(&self) -> usize {
        self.count(CircleColor::Black)
    }

    pub fn red(&self) -> usize {
        self.count(CircleColor::Red)
    }

    pub fn green(&self) -> usize {
        self.count(CircleColor::Green)
    }

    /// `2^(bk/2) * 0^rd` with `0^0 = 1`.
    pub fn hom_dim(&self) -> u64 {
        if self.red() > 0 {
            0
        } else {
            1u64 << (self.black() / 2)
        }
    }

    /// Orientations of a single circle on its own: labels alternate along
    /// the curve, outer points carry their frozen label and points `p`, `-p`
    /// on the same circle carry opposite labels.
    pub fn circle_orientation_count(&self, circle: &Circle) -> usize {
        let n = self.n as i32;
        let members: BTreeMap<i32, usize> = circle.points.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        [Label::Up, Label::Down]
            .into_iter()
            .filter(|&first| {
                let label = |k: usize| if k.is_multiple_of(2) { first } else { first.flip() };
                circle.points.iter().enumerate().all(|(k, &p)| {
                    let frozen_ok = if p > n {
                        label(k) == Label::Up
                    } else if p < -n {
                        label(k) == Label::Down
                    } else {
                        true
                    };
                    let mirror_ok = members.get(&-p).is_none_or(|&j| label(j) != label(k));
                    frozen_ok && mirror_ok
                })
            })
            .count()
    }

    pub fn report(&self) -> CircleReport {
        CircleReport {
            circles: self
                .circles
                .iter()
                .map(|c| CircleReportEntry {
                    color: c.color,
                    upper_outer: c.upper_outer,
                    lower_outer: c.lower_outer,
                    linked_pairs: c.linked_pairs,
                })
                .collect(),
        }
    }

    /// Two-row picture of the points with a circle number under each.
    pub fn render_ascii(&self) -> String {
        let n = self.n;
        let mut owner = vec![0usize; 4 * n];
        for (k, c) in self.circles.iter().enumerate() {
            for &p in &c.points {
                owner[point_index(n, p)] = k;
            }
        }
        let width = (0..4 * n)
            .map(|i| index_point(n, i).to_string().len())
            .max()
            .unwrap_or(1)
            .max(2);
        let mut labels = String::new();
        let mut marks = String::new();
        for (i, &o) in owner.iter().enumerate() {
            labels.push_str(&format!("{:>w$} ", index_point(n, i), w = width));
            let c = &self.circles[o];
            let tag = match c.color {
                CircleColor::Black => 'B',
                CircleColor::Red => 'R',
                CircleColor::Green => 'G',
            };
            marks.push_str(&format!("{:>w$} ", format!("{tag}{}", owner[i]), w = width));
        }
        format!("{}\n{}", labels.trim_end(), marks.trim_end())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleReportEntry {
    pub color: CircleColor,
    pub upper_outer: usize,
    pub lower_outer: usize,
    pub linked_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleReport {
    pub circles: Vec<CircleReportEntry>,
}

/// Hom-space dimension between the projectives of `w` and `wprime`.
pub fn hom_dim(w: &PMSequence, wprime: &PMSequence) -> u64 {
    circle_diagram(wprime, w).hom_dim()
}

/// Number of weights orienting both `C(w)` and `C(wprime)`, by enumeration.
pub fn brute_force_hom_dim(w: &PMSequence, wprime: &PMSequence) -> u64 {
    let (a, b) = (cup_diagram(w), cup_diagram(wprime));
    enumerate_wp(w.n())
        .expect("rank is positive")
        .iter()
        .map(Weight::of)
        .filter(|v| matches!(a.orient(v), Orientation::Oriented(_)) && matches!(b.orient(v), Orientation::Oriented(_)))
        .count() as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedCircleDiagram {
    pub w: PMSequence,
    pub wprime: PMSequence,
    pub v: PMSequence,
    pub degree: usize,
}

/// One entry per weight orienting the circle diagram, with its degree read
/// off the cut pictures of `w` and `wprime`.
pub fn oriented_basis(w: &PMSequence, wprime: &PMSequence) -> Vec<OrientedCircleDiagram> {
    assert_eq!(w.n(), wprime.n(), "ranks differ");
    let (a, b) = (decorated_cup(w), decorated_cup(wprime));
    enumerate_wp(w.n())
        .expect("rank is positive")
        .into_iter()
        .filter_map(|v| {
            let degree = a.orient(&v)? + b.orient(&v)?;
            Some(OrientedCircleDiagram {
                w: w.clone(),
                wprime: wprime.clone(),
                v,
                degree,
            })
        })
        .collect()
}

/// `Σ_{w'} Σ q^deg` over the oriented circle diagrams with `w` at the bottom.
pub fn graded_poincare(w: &PMSequence) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for wprime in enumerate_wp(w.n()).expect("rank is positive") {
        for b in oriented_basis(w, &wprime) {
            p += &LaurentPoly::monomial(1, b.degree as i64);
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomMatrix {
    pub n: usize,
    pub order: Vec<PMSequence>,
    pub dims: Vec<Vec<u64>>,
}

pub fn hom_matrix(n: usize) -> Result<HomMatrix> {
    let order = enumerate_wp(n)?;
    let dims = order
        .iter()
        .map(|w| order.iter().map(|x| hom_dim(w, x)).collect())
        .collect();
    Ok(HomMatrix { n, order, dims })
}

/// `w -> graded_poincare(w)` for every `w`.
pub fn poincare_table(n: usize) -> Result<BTreeMap<PMSequence, LaurentPoly>> {
    Ok(enumerate_wp(n)?
        .into_iter()
        .map(|w| {
            let p = graded_poincare(&w);
            (w, p)
        })
        .collect())
}

/// Dimension of the endomorphism algebra of the sum of all projectives.
pub fn dim_endomorphism_algebra(n: usize) -> Result<u64> {
    Ok(hom_matrix(n)?.dims.iter().flatten().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::kl_table;

    fn seq(s: &str) -> PMSequence {
        s.parse().unwrap()
    }

    #[test]
    fn identity_pair_has_eight_green_circles() {
        let e = seq("++++");
        let d = circle_diagram(&e, &e);
        assert_eq!(d.circles().len(), 8);
        for c in d.circles() {
            assert_eq!(c.color, CircleColor::Green);
            assert_eq!(c.upper_outer + c.lower_outer, 1);
        }
        assert_eq!(d.hom_dim(), 1);
    }

    #[test]
    fn s0_pair_has_black_circles() {
        let s = seq("--++");
        let d = circle_diagram(&s, &s);
        assert!(d.black() > 0);
        assert!(d.green() > 0);
        assert_eq!(d.red(), 0);
        assert_eq!(d.hom_dim(), brute_force_hom_dim(&s, &s));
    }

    #[test]
    fn coloring_rule_is_exact() {
        assert_eq!(color_of(0, 0, 0), CircleColor::Black);
        assert_eq!(color_of(0, 0, 2), CircleColor::Black);
        assert_eq!(color_of(0, 0, 1), CircleColor::Red);
        assert_eq!(color_of(2, 0, 0), CircleColor::Red);
        assert_eq!(color_of(0, 2, 0), CircleColor::Red);
        assert_eq!(color_of(1, 1, 0), CircleColor::Green);
        assert_eq!(color_of(1, 0, 2), CircleColor::Green);
        assert_eq!(color_of(1, 0, 3), CircleColor::Red);
    }

    #[test]
    fn circles_partition_the_points() {
        for n in 1..=5 {
            let all = enumerate_wp(n).unwrap();
            for w in &all {
                for x in &all {
                    let d = circle_diagram(x, w);
                    let mut pts: Vec<i32> = d.circles().iter().flat_map(|c| c.points.iter().copied()).collect();
                    pts.sort();
                    let expected: Vec<i32> = (0..4 * n).map(|i| index_point(n, i)).collect();
                    assert_eq!(pts, expected);
                }
            }
        }
    }

    #[test]
    fn coloring_theorem_and_circle_lemmas() {
        for n in 1..=5 {
            let all = enumerate_wp(n).unwrap();
            for w in &all {
                for x in &all {
                    let d = circle_diagram(x, w);
                    assert_eq!(d.hom_dim(), brute_force_hom_dim(w, x), "w={w} x={x}");
                    assert_eq!(d.black() % 2, 0);
                    for c in d.circles() {
                        assert_eq!(
                            d.circle_orientation_count(c),
                            c.color.orientation_count(),
                            "w={w} x={x} {c:?}"
                        );
                        if c.self_intersecting {
                            assert_eq!(c.color, CircleColor::Red);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hom_dim_is_symmetric_and_matches_kl() {
        for n in 1..=6 {
            let t = kl_table(n).unwrap();
            let all = t.order();
            for w in all {
                for x in all {
                    let h = hom_dim(w, x);
                    assert_eq!(h, hom_dim(x, w));
                    let via_kl: i64 = all
                        .iter()
                        .map(|v| {
                            let a = t.entry(v, w).eval_at_one();
                            let b = t.entry(v, x).eval_at_one();
                            i64::try_from(a * b).unwrap()
                        })
                        .sum();
                    assert_eq!(h as i64, via_kl, "n={n} w={w} x={x}");
                }
            }
        }
    }

    #[test]
    fn n4_endomorphism_dimension() {
        assert_eq!(dim_endomorphism_algebra(1).unwrap(), 1);
        assert_eq!(dim_endomorphism_algebra(4).unwrap(), 67);
    }

    #[test]
    fn n4_poincare_table() {
        let want = [
            ("++++", "1 + q + q^2"),
            ("--++", "1 + 3q + 2q^2 + q^3"),
            ("-+-+", "1 + 4q + 3q^2 + q^3"),
            ("-++-", "1 + 2q + 3q^2 + q^3"),
            ("+--+", "1 + 2q + 3q^2 + q^3"),
            ("+-+-", "1 + 3q + 3q^2 + 3q^3 + q^4"),
            ("++--", "1 + 3q + 5q^2 + 3q^3 + q^4"),
            ("----", "1 + 2q + 4q^2 + 2q^3 + q^4"),
        ];
        let table = poincare_table(4).unwrap();
        for (w, p) in want {
            assert_eq!(table[&seq(w)], p.parse::<LaurentPoly>().unwrap(), "w={w}");
        }
        let total: i64 = table.values().map(|p| i64::try_from(p.eval_at_one()).unwrap()).sum();
        assert_eq!(total, 67);
    }

    #[test]
    fn oriented_basis_examples() {
        let e = seq("++++");
        let b = oriented_basis(&e, &e);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].degree, 0);

        let w = seq("-+-+");
        let mut degrees: Vec<usize> = enumerate_wp(4)
            .unwrap()
            .iter()
            .flat_map(|x| oriented_basis(&w, x))
            .map(|b| b.degree)
            .collect();
        degrees.sort();
        assert_eq!(degrees, vec![0, 1, 1, 1, 1, 2, 2, 2, 3]);
    }

    #[test]
    fn oriented_basis_degree_matches_full_picture() {
        for n in 1..=5 {
            let all = enumerate_wp(n).unwrap();
            for w in &all {
                for x in &all {
                    let basis = oriented_basis(w, x);
                    assert_eq!(basis.len() as u64, hom_dim(w, x));
                    let (a, b) = (cup_diagram(w), cup_diagram(x));
                    for o in basis {
                        let v = Weight::of(&o.v);
                        let (Orientation::Oriented(ca), Orientation::Oriented(cb)) = (a.orient(&v), b.orient(&v))
                        else {
                            panic!("basis weight does not orient");
                        };
                        assert_eq!(o.degree, (ca + cb) / 2);
                    }
                }
            }
        }
    }

    #[test]
    fn red_circles_give_empty_basis() {
        for n in 1..=4 {
            let all = enumerate_wp(n).unwrap();
            for w in &all {
                for x in &all {
                    if circle_diagram(x, w).red() > 0 {
                        assert!(oriented_basis(w, x).is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn report_json_shape() {
        let s = seq("-+-+");
        let v = serde_json::to_value(circle_diagram(&s, &s).report()).unwrap();
        let circles = v["circles"].as_array().unwrap();
        assert!(!circles.is_empty());
        for c in circles {
            assert!(c["color"].is_string());
            assert!(c["upper_outer"].is_u64());
            assert!(c["lower_outer"].is_u64());
            assert!(c["linked_pairs"].is_u64());
        }
        let m = serde_json::to_value(hom_matrix(2).unwrap()).unwrap();
        assert_eq!(m["n"], 2);
        assert_eq!(m["order"], serde_json::json!(["++", "--"]));
    }
}
