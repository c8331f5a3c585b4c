//! The parabolic Hecke module `N` with its standard basis `N_w` and the
//! Kazhdan–Lusztig basis computed by the length induction
//! `N̲_w = N̲_{ws} C_s - Σ m_z(0) N̲_z`.
//!
//! Nothing here knows about diagrams; it is the algebraic reference the
//! diagram calculus is checked against.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::weyl::{enumerate_wp, GeneratorIndex, Move, PMSequence};

/// An element `Σ c_w N_w` of the parabolic module.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NModElement {
    coeffs: BTreeMap<PMSequence, LaurentPoly>,
}

impl NModElement {
    pub fn zero() -> Self {
        NModElement::default()
    }

    /// The standard basis vector `N_w`.
    pub fn standard(w: PMSequence) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(w, LaurentPoly::one());
        NModElement { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, w: &PMSequence) -> LaurentPoly {
        self.coeffs.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PMSequence, &LaurentPoly)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &PMSequence> {
        self.coeffs.keys()
    }

    pub fn add_term(&mut self, w: PMSequence, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(w.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &NModElement, c: &LaurentPoly) {
        for (w, p) in &other.coeffs {
            self.add_term(w.clone(), &(p * c));
        }
    }

    /// Right action of `C_{s_i}` on the standard basis, extended linearly:
    /// `N_w C_s = N_{ws} + q N_w` if `ws > w`, `N_{ws} + q^-1 N_w` if
    /// `ws < w`, and `0` if `ws` leaves `W^p`.
    pub fn cs_action(&self, i: GeneratorIndex) -> NModElement {
        let q = LaurentPoly::q();
        let q_inv = LaurentPoly::monomial(1, -1);
        let mut out = NModElement::zero();
        for (w, c) in &self.coeffs {
            match w.apply_generator(i) {
                Move::Longer(ws) => {
                    out.add_term(ws, c);
                    out.add_term(w.clone(), &(c * &q));
                }
                Move::Shorter(ws) => {
                    out.add_term(ws, c);
                    out.add_term(w.clone(), &(c * &q_inv));
                }
                Move::NotInQuotient => {}
            }
        }
        out
    }

    /// Checked variant of [`cs_action`](Self::cs_action) for a raw index.
    pub fn cs_action_checked(&self, i: usize, n: usize) -> Result<NModElement> {
        Ok(self.cs_action(GeneratorIndex::new(i, n)?))
    }

    /// Rewrites the element in the Kazhdan–Lusztig basis by peeling off the
    /// longest support element; the result maps `z` to the coefficient of `N̲_z`.
    pub fn in_kl_basis(&self, table: &KLTable) -> BTreeMap<PMSequence, LaurentPoly> {
        let mut rest = self.clone();
        let mut out = BTreeMap::new();
        while let Some(top) = rest.support().max_by_key(|w| (w.length(), (*w).clone())).cloned() {
            let c = rest.coeff(&top);
            rest.add_scaled(table.row(&top), &(-&c));
            out.insert(top, c);
        }
        out
    }
}

/// The Kazhdan–Lusztig basis of `N` for one rank `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KLTable {
    n: usize,
    order: Vec<PMSequence>,
    rows: BTreeMap<PMSequence, NModElement>,
    corrections: usize,
}

impl KLTable {
    /// Builds every `N̲_w` in order of increasing length, using the smallest
    /// descent at each step.
    pub fn build(n: usize) -> Result<Self> {
        let order = enumerate_wp(n)?;
        let mut by_length: Vec<&PMSequence> = order.iter().collect();
        by_length.sort_by_key(|w| w.length());

        let mut rows: BTreeMap<PMSequence, NModElement> = BTreeMap::new();
        let mut corrections = 0;
        for w in by_length {
            let (row, fixes) = match w.descents().first() {
                None => (NModElement::standard(w.clone()), 0),
                Some(&i) => recursion_step(w, i, &rows),
            };
            corrections += fixes;
            rows.insert(w.clone(), row);
        }
        Ok(KLTable {
            n,
            order,
            rows,
            corrections,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Row keys in enumeration order.
    pub fn order(&self) -> &[PMSequence] {
        &self.order
    }

    /// `N̲_w`
    pub fn row(&self, w: &PMSequence) -> &NModElement {
        &self.rows[w]
    }

    /// `n_{v,w}`, the coefficient of `N_v` in `N̲_w`.
    pub fn entry(&self, v: &PMSequence, w: &PMSequence) -> LaurentPoly {
        self.rows[w].coeff(v)
    }

    /// How many `m_z(0) N̲_z` corrections were subtracted while building.
    pub fn correction_count(&self) -> usize {
        self.corrections
    }

    /// The length step recomputed with the given descent of `w`, for
    /// checking that the result does not depend on the choice.
    pub fn recompute_with(&self, w: &PMSequence, i: GeneratorIndex) -> Option<NModElement> {
        if !matches!(w.apply_generator(i), Move::Shorter(_)) {
            return None;
        }
        Some(recursion_step(w, i, &self.rows).0)
    }

    /// True if every row has coefficient `1` on the diagonal and
    /// nonnegative coefficients supported in positive degrees elsewhere.
    pub fn is_triangular(&self) -> bool {
        self.rows.iter().all(|(w, row)| {
            row.coeff(w).is_one()
                && row
                    .terms()
                    .filter(|(v, _)| *v != w)
                    .all(|(_, p)| p.min_exp().is_some_and(|e| e >= 1) && p.terms().all(|(_, c)| !c.is_negative()))
        })
    }

    pub fn to_json(&self) -> KLTableJson {
        KLTableJson {
            n: self.n,
            rows: self
                .order
                .iter()
                .map(|w| KLRowJson {
                    w: w.clone(),
                    terms: self
                        .order
                        .iter()
                        .filter_map(|v| {
                            let poly = self.entry(v, w);
                            (!poly.is_zero()).then(|| KLTermJson {
                                wprime: v.clone(),
                                poly,
                            })
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn recursion_step(w: &PMSequence, i: GeneratorIndex, rows: &BTreeMap<PMSequence, NModElement>) -> (NModElement, usize) {
    let shorter = match w.apply_generator(i) {
        Move::Shorter(ws) => ws,
        _ => unreachable!("recursion step needs a descent"),
    };
    let mut out = rows[&shorter].cs_action(i);
    let wl = w.length();
    let fixes: Vec<(PMSequence, BigInt)> = out
        .terms()
        .filter(|(z, _)| z.length() < wl)
        .map(|(z, m)| (z.clone(), m.constant_term()))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    for (z, c) in &fixes {
        out.add_scaled(&rows[z], &LaurentPoly::monomial(-c, 0));
    }
    (out, fixes.len())
}

/// `N̲_w` from the memoized table of its rank.
pub fn kl_basis(w: &PMSequence) -> NModElement {
    kl_table(w.n()).expect("rank is positive").row(w).clone()
}

/// The memoized KL table of rank `n`.
pub fn kl_table(n: usize) -> Result<Arc<KLTable>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<KLTable>>>> = OnceLock::new();
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("kl cache poisoned").get(&n) {
        return Ok(t.clone());
    }
    let table = Arc::new(KLTable::build(n)?);
    cache
        .lock()
        .expect("kl cache poisoned")
        .entry(n)
        .or_insert_with(|| table.clone());
    Ok(table)
}

/// `N_e C_{s_{i1}} ... C_{s_{ik}}` along `word`.
pub fn product_along(n: usize, word: &[GeneratorIndex]) -> Result<NModElement> {
    let mut x = NModElement::standard(PMSequence::identity(n)?);
    for &i in word {
        x = x.cs_action(i);
    }
    Ok(x)
}

/// The product of `C_s` along [`PMSequence::reduced_word`].
pub fn deodhar_product(w: &PMSequence) -> NModElement {
    product_along(w.n(), &w.reduced_word()).expect("reduced word replays")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KLTableJson {
    pub n: usize,
    pub rows: Vec<KLRowJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KLRowJson {
    pub w: PMSequence,
    pub terms: Vec<KLTermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KLTermJson {
    pub wprime: PMSequence,
    pub poly: LaurentPoly,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> PMSequence {
        s.parse().unwrap()
    }

    fn elem(terms: &[(&str, &str)]) -> NModElement {
        let mut x = NModElement::zero();
        for (w, p) in terms {
            x.add_term(seq(w), &p.parse().unwrap());
        }
        x
    }

    fn gen(i: usize, n: usize) -> GeneratorIndex {
        GeneratorIndex::new(i, n).unwrap()
    }

    #[test]
    fn action_cases() {
        let e = NModElement::standard(seq("++++"));
        assert!(e.cs_action(gen(1, 4)).is_zero());
        assert_eq!(e.cs_action(gen(0, 4)), elem(&[("--++", "1"), ("++++", "q")]));
        let s0 = NModElement::standard(seq("--++"));
        assert_eq!(s0.cs_action(gen(0, 4)), elem(&[("++++", "1"), ("--++", "q^-1")]));
        assert!(e.cs_action_checked(4, 4).is_err());
    }

    #[test]
    fn small_kl_elements() {
        assert_eq!(kl_basis(&seq("++++")), NModElement::standard(seq("++++")));
        assert_eq!(kl_basis(&seq("--++")), elem(&[("--++", "1"), ("++++", "q")]));
        assert_eq!(kl_basis(&seq("-+-+")), elem(&[("-+-+", "1"), ("--++", "q")]));
        let t1 = kl_table(1).unwrap();
        assert_eq!(t1.order().len(), 1);
        assert_eq!(t1.row(&seq("+")), &NModElement::standard(seq("+")));
    }

    #[test]
    fn table_shape_and_monomials() {
        let t = kl_table(4).unwrap();
        assert_eq!(t.order().len(), 8);
        assert!(t.is_triangular());
        for w in t.order() {
            for (_, p) in t.row(w).terms() {
                assert!(p.is_monomial());
            }
        }
    }

    #[test]
    fn corrections_never_fire() {
        for n in 1..=7 {
            assert_eq!(kl_table(n).unwrap().correction_count(), 0, "n = {n}");
        }
    }

    fn operator_on_basis(n: usize, word: &[usize]) -> Vec<NModElement> {
        enumerate_wp(n)
            .unwrap()
            .into_iter()
            .map(|w| {
                let mut x = NModElement::standard(w);
                for &i in word {
                    x = x.cs_action(gen(i, n));
                }
                x
            })
            .collect()
    }

    fn scaled(xs: &[NModElement], c: &LaurentPoly) -> Vec<NModElement> {
        xs.iter()
            .map(|x| {
                let mut y = NModElement::zero();
                y.add_scaled(x, c);
                y
            })
            .collect()
    }

    fn diff(a: &[NModElement], b: &[NModElement]) -> Vec<NModElement> {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let mut z = x.clone();
                z.add_scaled(y, &LaurentPoly::from(-1));
                z
            })
            .collect()
    }

    #[test]
    fn hecke_relations_on_module() {
        let v = LaurentPoly::loop_value();
        for n in 2..=6 {
            for i in 0..n {
                assert_eq!(operator_on_basis(n, &[i, i]), scaled(&operator_on_basis(n, &[i]), &v));
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    match crate::weyl::coxeter_m(i, j) {
                        2 => assert_eq!(operator_on_basis(n, &[i, j]), operator_on_basis(n, &[j, i])),
                        _ => {
                            let lhs = diff(&operator_on_basis(n, &[i, j, i]), &operator_on_basis(n, &[i]));
                            let rhs = diff(&operator_on_basis(n, &[j, i, j]), &operator_on_basis(n, &[j]));
                            assert_eq!(lhs, rhs, "n={n} i={i} j={j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn descent_choice_does_not_matter() {
        for n in 1..=5 {
            let t = kl_table(n).unwrap();
            for w in t.order() {
                for i in w.descents() {
                    assert_eq!(t.recompute_with(w, i).as_ref(), Some(t.row(w)), "w={w} i={i}");
                }
            }
        }
    }

    #[test]
    fn deodhar() {
        assert_eq!(deodhar_product(&seq("++++")), NModElement::standard(seq("++++")));
        assert_eq!(deodhar_product(&seq("--++")), elem(&[("--++", "1"), ("++++", "q")]));
        assert_eq!(deodhar_product(&seq("----")), kl_basis(&seq("----")));
        for n in 1..=6 {
            for w in enumerate_wp(n).unwrap() {
                assert_eq!(deodhar_product(&w), kl_basis(&w));
            }
        }
    }

    #[test]
    fn kl_basis_expansion_inverts_rows() {
        let t = kl_table(5).unwrap();
        for w in t.order() {
            let expanded = t.row(w).in_kl_basis(&t);
            assert_eq!(expanded.len(), 1);
            assert!(expanded[w].is_one());
        }
    }

    #[test]
    fn json_dump_is_ordered() {
        let json = kl_table(4).unwrap().to_json();
        assert_eq!(json.rows.len(), 8);
        assert_eq!(json.rows[0].w, seq("++++"));
        let text = serde_json::to_string(&json).unwrap();
        let back: KLTableJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, json);
    }
}
