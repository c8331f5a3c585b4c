use std::collections::BTreeMap;

use proptest::prelude::*;

use dkl_core::circles::brute_force_hom_dim;
use dkl_core::tangles::dc_basis;
use dkl_core::{
    act, circle_diagram, concat_reduce, cup_diagram, decorated_cup, hom_dim, tlhat_basis, DecoratedCupDiagram,
    DecoratedTangle, GeneratorIndex, LaurentPoly, Mode, Move, PMSequence, Scaled, Sign, SymYoungDiagram,
};

fn sequence(max_n: usize) -> impl Strategy<Value = PMSequence> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n).prop_map(|bits| {
            let mut signs: Vec<Sign> = bits.iter().map(|&b| if b { Sign::Minus } else { Sign::Plus }).collect();
            if signs.iter().filter(|s| **s == Sign::Minus).count() % 2 == 1 {
                signs[0] = signs[0].flip();
            }
            PMSequence::new(signs).unwrap()
        })
    })
}

fn same_rank_pair(max_n: usize) -> impl Strategy<Value = (PMSequence, PMSequence)> {
    (1..=max_n).prop_flat_map(|n| (sequence_of(n), sequence_of(n)))
}

fn sequence_of(n: usize) -> impl Strategy<Value = PMSequence> {
    let all = dkl_core::enumerate_wp(n).unwrap();
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn basis_tangles(n: usize) -> impl Strategy<Value = DecoratedTangle> {
    let basis = tlhat_basis(n).unwrap();
    (0..basis.len()).prop_map(move |k| basis[k].clone())
}

fn diagram(n: usize) -> impl Strategy<Value = DecoratedCupDiagram> {
    let all = dc_basis(n).unwrap();
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn scale<T>(c: &LaurentPoly, x: Scaled<T>) -> Scaled<T> {
    match x {
        Scaled::Zero => Scaled::Zero,
        Scaled::Term(k, t) => {
            let p = c * &k;
            if p.is_zero() {
                Scaled::Zero
            } else {
                Scaled::Term(p, t)
            }
        }
    }
}

proptest! {
    #[test]
    fn generator_moves_are_involutive(w in sequence(9), i in 0usize..9) {
        prop_assume!(i < w.n());
        let s = GeneratorIndex::new(i, w.n()).unwrap();
        match w.apply_generator(s) {
            Move::Longer(x) => {
                prop_assert_eq!(x.length(), w.length() + 1);
                prop_assert_eq!(x.apply_generator(s), Move::Shorter(w.clone()));
            }
            Move::Shorter(x) => {
                prop_assert_eq!(x.length() + 1, w.length());
                prop_assert_eq!(x.apply_generator(s), Move::Longer(w.clone()));
            }
            Move::NotInQuotient => {}
        }
    }

    #[test]
    fn reduced_words_replay(w in sequence(10)) {
        let word = w.reduced_word();
        prop_assert_eq!(word.len(), w.length());
        prop_assert_eq!(PMSequence::from_word(w.n(), &word).unwrap(), w.clone());
        let y: SymYoungDiagram = w.young_diagram();
        prop_assert_eq!(y.to_sequence(), w.clone());
        prop_assert_eq!(y.diagonal_count(), w.minus_count());
    }

    #[test]
    fn sequences_round_trip_through_text_and_json(w in sequence(12)) {
        prop_assert_eq!(w.to_string().parse::<PMSequence>().unwrap(), w.clone());
        let json = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<PMSequence>(&json).unwrap(), w);
    }

    #[test]
    fn decorated_cups_are_valid_cuts(w in sequence(10)) {
        let d = decorated_cup(&w);
        d.validate().unwrap();
        prop_assert_eq!(cup_diagram(&w).cut(), d.clone());
        prop_assert!(d.dotted_edge_count() <= 1);
        prop_assert_eq!(DecoratedCupDiagram::from_json(d.to_json()).unwrap(), d);
    }

    #[test]
    fn hom_dims_are_symmetric_and_counted((w, x) in same_rank_pair(6)) {
        let h = hom_dim(&w, &x);
        prop_assert_eq!(h, hom_dim(&x, &w));
        prop_assert_eq!(h, brute_force_hom_dim(&w, &x));
        let d = circle_diagram(&x, &w);
        prop_assert_eq!(d.black() % 2, 0);
        for c in d.circles() {
            if c.self_intersecting {
                prop_assert_eq!(c.color, dkl_core::CircleColor::Red);
            }
        }
    }

    #[test]
    fn stacking_is_associative(a in basis_tangles(4), b in basis_tangles(4), c in basis_tangles(4)) {
        let left = match concat_reduce(&a, &b, Mode::TLhat).unwrap() {
            Scaled::Zero => Scaled::Zero,
            Scaled::Term(k, ab) => scale(&k, concat_reduce(&ab, &c, Mode::TLhat).unwrap()),
        };
        let right = match concat_reduce(&b, &c, Mode::TLhat).unwrap() {
            Scaled::Zero => Scaled::Zero,
            Scaled::Term(k, bc) => scale(&k, concat_reduce(&a, &bc, Mode::TLhat).unwrap()),
        };
        prop_assert_eq!(left, right);
    }

    #[test]
    fn star_reverses_products(a in basis_tangles(5), b in basis_tangles(5)) {
        let lhs = match concat_reduce(&a, &b, Mode::TLhat).unwrap() {
            Scaled::Zero => Scaled::Zero,
            Scaled::Term(k, t) => Scaled::Term(k, t.star()),
        };
        prop_assert_eq!(lhs, concat_reduce(&b.star(), &a.star(), Mode::TLhat).unwrap());
    }

    #[test]
    fn action_is_a_right_module((n, x, y, d) in (3usize..=5).prop_flat_map(|n| (Just(n), basis_tangles(n), basis_tangles(n), diagram(n)))) {
        prop_assert_eq!(d.n(), n);
        // (d . x) . y == d . (x * y), where x * y puts y on top of x
        let stepwise = match act(&x, &d).unwrap() {
            Scaled::Zero => Scaled::Zero,
            Scaled::Term(k, dx) => scale(&k, act(&y, &dx).unwrap()),
        };
        let at_once = match concat_reduce(&x, &y, Mode::TLhat).unwrap() {
            Scaled::Zero => Scaled::Zero,
            Scaled::Term(k, xy) => scale(&k, act(&xy, &d).unwrap()),
        };
        prop_assert_eq!(stepwise, at_once);
    }

    #[test]
    fn tangles_round_trip_through_json(t in basis_tangles(5)) {
        prop_assert_eq!(DecoratedTangle::from_json(t.to_json()).unwrap(), t.clone());
        prop_assert_eq!(t.star().star(), t);
    }
}

#[test]
fn e0_matrix_on_n4_diagrams() {
    // arrows labelled e_0: identity -> --++, a q + q^-1 loop on --++
    let e0 = dkl_core::TLElement::generator(4, GeneratorIndex::new(0, 4).unwrap()).unwrap();
    let m = dkl_core::representation_matrix(4, &e0).unwrap();
    let order = dkl_core::enumerate_wp(4).unwrap();
    let idx: BTreeMap<PMSequence, usize> = order.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
    let (e, s0) = (idx[&"++++".parse().unwrap()], idx[&"--++".parse().unwrap()]);
    assert!(m[s0][e].is_one());
    assert_eq!(m[s0][s0], LaurentPoly::loop_value());
    let nonzero_in_e_column = (0..order.len()).filter(|&r| !m[r][e].is_zero()).count();
    assert_eq!(nonzero_in_e_column, 1);
}
