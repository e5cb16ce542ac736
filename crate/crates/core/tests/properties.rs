use bmhad_core::exactfield::int;
use bmhad_core::invariants::haagerup_of_family;
use bmhad_core::nomura::JonesGraph;
use bmhad_core::pell::{is_r_integer, sequence_element, PellProblem};
use bmhad_core::scheme::build_petersen_line_scheme;
use bmhad_core::typeii::{family_coefficients, is_type_ii, phi, reconstruct_weights, Case, TypeIIMatrix};
use num_bigint::BigInt;
use proptest::prelude::*;

fn case_strategy() -> impl Strategy<Value = Case> {
    prop::sample::select(Case::ALL.to_vec())
}

fn sign() -> impl Strategy<Value = i8> {
    prop::sample::select(vec![1i8, -1])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn families_are_type_ii(case in case_strategy(), half_q in 2i64..60, branch in sign(), r_sign in sign()) {
        let f = family_coefficients(case, &int(2 * half_q), r_sign, branch).unwrap();
        prop_assert!(f.weights[0].is_one());
        prop_assert!(is_type_ii(&TypeIIMatrix::from_family(&f)).holds());
    }

    #[test]
    fn weights_are_recovered_from_their_ratio_sums(case in case_strategy(), half_q in 2i64..40, branch in sign()) {
        let f = family_coefficients(case, &int(2 * half_q), 1, branch).unwrap();
        let a = phi(&f.weights).unwrap();
        let p = case.pivot();
        let back = reconstruct_weights(&a, 0, p, (&f.weights[0], &f.weights[p])).unwrap();
        prop_assert_eq!(back, f.weights);
    }

    #[test]
    fn haagerup_sets_are_inversion_closed(case in case_strategy(), half_q in 2i64..30, branch in sign(), r_sign in sign()) {
        let f = family_coefficients(case, &int(2 * half_q), r_sign, branch).unwrap();
        let h = haagerup_of_family(&f).unwrap();
        prop_assert!(h.contains_one());
        prop_assert!(h.inversion_closed());
        for w in h.h_set.iter().filter(|w| !w.is_one()) {
            prop_assert!(h.contains_k(&(w + &w.inv().unwrap())));
        }
    }

    #[test]
    fn sequence_keeps_the_norm(n in -6i64..6) {
        let p = PellProblem::seventeen();
        let s = sequence_element(n);
        prop_assert_eq!(s.norm(17), BigInt::from(64));
        prop_assert!(p.is_solution(&s.conj()) || p.is_solution(&s));
    }

    #[test]
    fn integral_r_matches_the_sequence(n in -4i64..4) {
        let t: BigInt = sequence_element(n).trace() + 18;
        let q = t / 34;
        let r = is_r_integer(&q).unwrap();
        prop_assert!(r.is_some());
        let r = r.unwrap();
        prop_assert_eq!(&r * &r, (&q * 17 - 1) * (&q - 1));
    }
}

#[test]
fn jones_graph_adjacency_is_symmetric() {
    let s = build_petersen_line_scheme().unwrap();
    for case in Case::ALL {
        let f = family_coefficients(case, &int(4), 1, 1).unwrap();
        let d = TypeIIMatrix::from_family(&f).with_scheme(s.clone()).dense().unwrap();
        let g = JonesGraph::build(&d).unwrap();
        assert!(g.is_symmetric(), "{case}");
        assert!(g.diagonal_connected(), "{case}");
    }
}
