//! Exhaustive consistency checks, grouped into suites.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::circles::{brute_force_hom_dim, circle_diagram};
use crate::cups::{cup_diagram, decorated_cup, kl_poly_diagrammatic, Label, Orientation, Weight};
use crate::error::{Error, Result};
use crate::hecke::{kl_basis, kl_table, product_along};
use crate::laurent::LaurentPoly;
use crate::linalg::{eval_rows, rank, ratio};
use crate::tangles::{
    act, cell_datum, cell_tangle, concat_reduce, cut_tangle, dc_basis, generator, ideal_elements,
    representation_matrix, tlhat_basis, Mode, Scaled, TLElement,
};
use crate::weyl::{coxeter_m, GeneratorIndex, PMSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Kl,
    Homdim,
    Commute,
    Cellular,
    Faithful,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Kl,
        Suite::Homdim,
        Suite::Commute,
        Suite::Cellular,
        Suite::Faithful,
    ];

    /// Inclusive range of admissible ranks.
    pub fn bounds(self) -> (usize, usize) {
        match self {
            Suite::Kl | Suite::Homdim | Suite::All => (1, 6),
            Suite::Commute => (2, 6),
            Suite::Cellular | Suite::Faithful => (3, 5),
        }
    }

    pub fn check_rank(self, n: usize) -> Result<()> {
        let (lo, hi) = self.bounds();
        if n < lo {
            Err(Error::RankTooSmall { n, min: lo })
        } else if n > hi {
            Err(Error::RankTooLarge { n, max: hi })
        } else {
            Ok(())
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Kl => "kl",
            Suite::Homdim => "homdim",
            Suite::Commute => "commute",
            Suite::Cellular => "cellular",
            Suite::Faithful => "faithful",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// Outcome of one named check: how many cases ran and the first failure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    /// Summary values worth showing even on success.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub info: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub n: usize,
    pub checks: Vec<Check>,
    /// Suites left out of `all` because `n` is outside their range.
    pub skipped: Vec<Suite>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {}/{} n={} ({} cases)\n",
                c.suite, c.name, self.n, c.cases
            ));
            if let Some(x) = &c.info {
                out.push_str(&format!("  {x}\n"));
            }
            if let Some(x) = &c.counterexample {
                out.push_str(&format!("  counterexample: {x}\n"));
            }
        }
        for s in &self.skipped {
            out.push_str(&format!("SKIP {s} n={} (outside {:?})\n", self.n, s.bounds()));
        }
        out
    }
}

struct Checker {
    suite: Suite,
    name: &'static str,
    cases: usize,
    counterexample: Option<Value>,
    info: Option<Value>,
}

impl Checker {
    fn new(suite: Suite, name: &'static str) -> Self {
        Checker {
            suite,
            name,
            cases: 0,
            counterexample: None,
            info: None,
        }
    }

    fn case(&mut self, ok: bool, dump: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(dump());
        }
    }

    fn done(self) -> Check {
        Check {
            suite: self.suite,
            name: self.name.to_string(),
            passed: self.counterexample.is_none(),
            cases: self.cases,
            counterexample: self.counterexample,
            info: self.info,
        }
    }
}

fn s<T: fmt::Display>(x: T) -> Value {
    Value::String(x.to_string())
}

/// Runs one suite, or every suite admitting `n` for [`Suite::All`].
pub fn run(suite: Suite, n: usize) -> Result<Report> {
    suite.check_rank(n)?;
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    for x in suites {
        if x.check_rank(n).is_err() {
            skipped.push(x);
            continue;
        }
        checks.extend(match x {
            Suite::Kl => kl_checks(n)?,
            Suite::Homdim => homdim_checks(n)?,
            Suite::Commute => commute_checks(n)?,
            Suite::Cellular => cellular_checks(n)?,
            Suite::Faithful => faithful_checks(n)?,
            Suite::All => unreachable!(),
        });
    }
    Ok(Report { n, checks, skipped })
}

pub fn kl_checks(n: usize) -> Result<Vec<Check>> {
    let table = kl_table(n)?;
    let order = table.order();
    let mut equal = Checker::new(Suite::Kl, "diagrammatic-equals-recursion");
    let mut mono = Checker::new(Suite::Kl, "monomial");
    for w in order {
        for v in order {
            let d = kl_poly_diagrammatic(v, w);
            let h = table.entry(v, w);
            equal.case(
                d == h,
                || json!({"v": s(v), "w": s(w), "diagram": s(&d), "recursion": s(&h)}),
            );
            mono.case(
                h.is_zero() || h.is_monomial(),
                || json!({"v": s(v), "w": s(w), "poly": s(&h)}),
            );
        }
    }
    let mut tri = Checker::new(Suite::Kl, "triangular-without-corrections");
    tri.case(
        table.is_triangular() && table.correction_count() == 0,
        || json!({"corrections": table.correction_count()}),
    );
    let mut deodhar = Checker::new(Suite::Kl, "deodhar-every-reduced-word");
    for w in order {
        let target = kl_basis(w);
        for word in w.all_reduced_words() {
            let got = product_along(n, &word)?;
            deodhar.case(
                got == target,
                || json!({"w": s(w), "word": crate::weyl::format_word(&word)}),
            );
        }
    }
    Ok(vec![equal.done(), mono.done(), tri.done(), deodhar.done()])
}

pub fn homdim_checks(n: usize) -> Result<Vec<Check>> {
    let table = kl_table(n)?;
    let order = table.order();
    let mut formula = Checker::new(Suite::Homdim, "coloring-formula-equals-brute-force");
    let mut per_circle = Checker::new(Suite::Homdim, "per-circle-orientation-counts");
    let mut even = Checker::new(Suite::Homdim, "black-count-even");
    let mut selfint = Checker::new(Suite::Homdim, "self-intersecting-circles-red");
    let mut via_kl = Checker::new(Suite::Homdim, "hom-dim-equals-kl-sum");
    let mut sym = Checker::new(Suite::Homdim, "hom-dim-symmetric");
    let mut dims: BTreeMap<(&PMSequence, &PMSequence), u64> = BTreeMap::new();
    for w in order {
        for x in order {
            let d = circle_diagram(x, w);
            let h = d.hom_dim();
            dims.insert((w, x), h);
            let brute = brute_force_hom_dim(w, x);
            let pair = || json!({"w": s(w), "wprime": s(x)});
            formula.case(
                h == brute,
                || json!({"w": s(w), "wprime": s(x), "formula": h, "brute_force": brute}),
            );
            even.case(d.black().is_multiple_of(2), pair);
            for c in d.circles() {
                per_circle.case(
                    d.circle_orientation_count(c) == c.color.orientation_count(),
                    || json!({"w": s(w), "wprime": s(x), "points": c.points, "color": format!("{:?}", c.color)}),
                );
                if c.self_intersecting {
                    selfint.case(
                        c.color == crate::circles::CircleColor::Red,
                        || json!({"w": s(w), "wprime": s(x), "points": c.points}),
                    );
                }
            }
            let expected = order.iter().fold(num_bigint::BigInt::from(0), |acc, v| {
                acc + table.entry(v, w).eval_at_one() * table.entry(v, x).eval_at_one()
            });
            via_kl.case(
                num_bigint::BigInt::from(h) == expected,
                || json!({"w": s(w), "wprime": s(x), "coloring": h, "kl": s(&expected)}),
            );
        }
    }
    for (&(w, x), &h) in &dims {
        sym.case(dims[&(x, w)] == h, || json!({"w": s(w), "wprime": s(x)}));
    }

    let mut degrees = Checker::new(Suite::Homdim, "cut-degree-equals-half-clockwise");
    let mut weights = Checker::new(Suite::Homdim, "orienting-weights-even");
    for w in order {
        let full = cup_diagram(w);
        let cut = decorated_cup(w);
        for v in order {
            let expected = match full.orient(&Weight::of(v)) {
                Orientation::Oriented(cl) => Some(cl / 2),
                Orientation::NotOriented => None,
            };
            degrees.case(cut.orient(v) == expected, || json!({"v": s(v), "w": s(w)}));
        }
        for bits in 0u64..(1u64 << n) {
            let core: Vec<Label> = (0..n)
                .map(|k| if bits >> k & 1 == 1 { Label::Up } else { Label::Down })
                .collect();
            let mut labels = vec![Label::Down; n];
            labels.extend(core.iter().rev().map(|l| l.flip()));
            labels.extend(core.iter().copied());
            labels.extend(std::iter::repeat_n(Label::Up, n));
            if let Orientation::Oriented(_) = full.orient_labels(&labels) {
                weights.case(bits.count_ones() % 2 == 0, || json!({"w": s(w), "up_mask": bits}));
            }
        }
    }
    Ok(vec![
        formula.done(),
        per_circle.done(),
        even.done(),
        selfint.done(),
        via_kl.done(),
        sym.done(),
        degrees.done(),
        weights.done(),
    ])
}

fn phi(x: &BTreeMap<PMSequence, LaurentPoly>) -> BTreeMap<crate::cups::DecoratedCupDiagram, LaurentPoly> {
    x.iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (decorated_cup(w), c.clone()))
        .collect()
}

pub fn commute_checks(n: usize) -> Result<Vec<Check>> {
    let table = kl_table(n)?;
    let mut square = Checker::new(Suite::Commute, "tangle-action-equals-hecke-action");
    for w in table.order() {
        let d = decorated_cup(w);
        for i in GeneratorIndex::all(n) {
            let algebraic = phi(&kl_basis(w).cs_action(i).in_kl_basis(&table));
            let diagrammatic = TLElement::generator(n, i)?.act(&d)?;
            square.case(algebraic == diagrammatic, || {
                let show = |m: &BTreeMap<crate::cups::DecoratedCupDiagram, LaurentPoly>| {
                    m.iter()
                        .map(|(d, c)| json!({"diagram": d.to_json(), "coeff": s(c)}))
                        .collect::<Vec<_>>()
                };
                json!({"w": s(w), "i": i.get(), "hecke": show(&algebraic), "tangle": show(&diagrammatic)})
            });
        }
    }

    let mut closed = Checker::new(Suite::Commute, "even-diagrams-map-to-even-diagrams");
    let all: BTreeSet<_> = dc_basis(n)?.into_iter().collect();
    for d in &all {
        for i in GeneratorIndex::all(n) {
            let ok = match act(&generator(n, i)?, d) {
                Ok(Scaled::Zero) => true,
                Ok(Scaled::Term(_, r)) => all.contains(&r),
                Err(_) => false,
            };
            closed.case(ok, || json!({"diagram": d.to_json(), "i": i.get()}));
        }
    }

    // the quotient only exists from rank 3 on
    let modes: &[Mode] = if n >= 3 { &[Mode::TL, Mode::TLhat] } else { &[Mode::TL] };
    let mut rel = Checker::new(Suite::Commute, "temperley-lieb-relations");
    let g: Vec<TLElement> = GeneratorIndex::all(n)
        .map(|i| TLElement::generator(n, i))
        .collect::<Result<_>>()?;
    for &mode in modes {
        for i in 0..n {
            let mut want = TLElement::zero();
            want.add_term(generator(n, GeneratorIndex::new(i, n)?)?, LaurentPoly::loop_value());
            rel.case(
                g[i].mul(&g[i], mode)? == want,
                || json!({"relation": "square", "i": i, "mode": format!("{mode:?}")}),
            );
            for j in (0..n).filter(|&j| j != i) {
                let ok = match coxeter_m(i, j) {
                    2 => g[i].mul(&g[j], mode)? == g[j].mul(&g[i], mode)?,
                    _ => g[i].mul(&g[j], mode)?.mul(&g[i], mode)? == g[i],
                };
                rel.case(
                    ok,
                    || json!({"relation": coxeter_m(i, j), "i": i, "j": j, "mode": format!("{mode:?}")}),
                );
            }
        }
    }
    Ok(vec![square.done(), closed.done(), rel.done()])
}

pub fn cellular_checks(n: usize) -> Result<Vec<Check>> {
    let basis = tlhat_basis(n)?;
    let datum = cell_datum(n)?;

    let mut star = Checker::new(Suite::Cellular, "star-anti-automorphism");
    for x in &basis {
        for y in &basis {
            let lhs = match concat_reduce(x, y, Mode::TLhat)? {
                Scaled::Zero => Scaled::Zero,
                Scaled::Term(c, t) => Scaled::Term(c, t.star()),
            };
            let rhs = concat_reduce(&y.star(), &x.star(), Mode::TLhat)?;
            star.case(lhs == rhs, || json!({"x": x.to_json(), "y": y.to_json()}));
        }
    }

    let mut bij = Checker::new(Suite::Cellular, "c-map-bijective-onto-basis");
    let image = datum.c_map()?;
    let tangles: BTreeSet<_> = image.iter().map(|(_, t)| t.clone()).collect();
    let basis_set: BTreeSet<_> = basis.iter().cloned().collect();
    bij.case(tangles.len() == image.len(), || json!({"reason": "not injective"}));
    bij.case(tangles == basis_set, || {
        json!({"missing": basis_set.difference(&tangles).map(|t| t.to_json()).collect::<Vec<_>>(),
               "extra": tangles.difference(&basis_set).map(|t| t.to_json()).collect::<Vec<_>>()})
    });
    for ((_, alpha, beta), t) in &image {
        let ok = cut_tangle(t).ok() == Some((alpha.clone(), beta.clone()))
            && cell_tangle(beta, alpha).ok().as_ref() == Some(&t.star());
        bij.case(ok, || json!({"alpha": alpha.to_json(), "beta": beta.to_json()}));
    }

    let mut indep = Checker::new(Suite::Cellular, "structure-constants-independent-of-beta");
    for lambda in datum.lambdas() {
        let m = datum.cell(lambda);
        for i in GeneratorIndex::all(n) {
            let x = TLElement::generator(n, i)?;
            let first = datum.cell_matrix(lambda, &x, &m[0])?;
            for beta in &m[1..] {
                indep.case(
                    datum.cell_matrix(lambda, &x, beta)? == first,
                    || json!({"lambda": lambda, "i": i.get(), "beta": beta.to_json()}),
                );
            }
        }
    }

    let mut counts = Checker::new(Suite::Cellular, "filtration-counts");
    let sizes: Vec<usize> = datum.cells().values().map(Vec::len).collect();
    let linear: usize = sizes.iter().sum();
    let squares: usize = sizes.iter().map(|k| k * k).sum();
    let by_lambda: BTreeMap<String, usize> = datum.cells().iter().map(|(l, m)| (l.to_string(), m.len())).collect();
    counts.info = Some(json!({"cell_dims": by_lambda, "basis": basis.len()}));
    counts.case(
        linear == 1 << (n - 1) && squares == basis.len(),
        || json!({"cell_sizes": sizes, "basis": basis.len()}),
    );
    Ok(vec![star.done(), bij.done(), indep.done(), counts.done()])
}

/// Generic points tried in turn; full rank at any one of them is full rank
/// over the field of fractions.
pub const GENERIC_POINTS: [(i64, i64); 2] = [(97, 89), (101, 103)];

/// Rank of the stacked representation matrices of the basis at the first
/// generic point giving full rank, else the best seen.
pub fn faithfulness_rank(n: usize) -> Result<(usize, usize)> {
    let basis = tlhat_basis(n)?;
    let mut rows = Vec::with_capacity(basis.len());
    for t in &basis {
        let m = representation_matrix(n, &TLElement::basis(t.clone()))?;
        rows.push(m.into_iter().flatten().collect::<Vec<_>>());
    }
    let mut best = 0;
    for (num, den) in GENERIC_POINTS {
        best = best.max(rank(eval_rows(&rows, &ratio(num, den))?));
        if best == basis.len() {
            break;
        }
    }
    Ok((best, basis.len()))
}

pub fn faithful_checks(n: usize) -> Result<Vec<Check>> {
    let mut full = Checker::new(Suite::Faithful, "stacked-matrices-full-rank");
    let (r, size) = faithfulness_rank(n)?;
    full.info = Some(json!({"rank": r, "basis": size}));
    full.case(r == size, || json!({"rank": r, "basis": size}));
    let mut checks = vec![full.done()];
    if n.is_multiple_of(2) {
        let mut ideal = Checker::new(Suite::Faithful, "ideal-elements-act-by-zero");
        let diagrams = dc_basis(n)?;
        for t in ideal_elements(n) {
            for d in &diagrams {
                ideal.case(
                    act(&t, d)?.is_zero(),
                    || json!({"tangle": t.to_json(), "diagram": d.to_json()}),
                );
            }
        }
        checks.push(ideal.done());
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse_and_bound() {
        assert_eq!("kl".parse::<Suite>().unwrap(), Suite::Kl);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("nope".parse::<Suite>().is_err());
        assert!(run(Suite::Kl, 7).is_err());
        assert!(run(Suite::Faithful, 6).is_err());
        assert!(run(Suite::Cellular, 2).is_err());
        assert!(run(Suite::Kl, 0).is_err());
    }

    #[test]
    fn all_suites_pass_small() {
        for n in 1..=4 {
            let r = run(Suite::All, n).unwrap();
            assert!(r.passed(), "{}", r.render_text());
        }
        let r = run(Suite::All, 2).unwrap();
        assert_eq!(r.skipped, vec![Suite::Cellular, Suite::Faithful]);
    }

    #[test]
    fn faithful_at_three_and_four() {
        assert_eq!(faithfulness_rank(3).unwrap(), (10, 10));
        assert_eq!(faithfulness_rank(4).unwrap(), (26, 26));
    }
}
