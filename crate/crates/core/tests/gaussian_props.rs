mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sub_vacuum_states_are_rejected(st in state1(), shrink in 0.5f64..0.9999999) {
        check_heisenberg(&st, shrink)?;
    }

    #[test]
    fn decomposition_round_trip(st in state1()) {
        check_round_trip(&st)?;
    }

    #[test]
    fn single_mode_purity_is_symplectic_invariant(
        st in state1_moderate(), a in -3.2f64..3.2, r in -0.5f64..0.5, b in -3.2f64..3.2,
    ) {
        check_basis_invariance_1d(&st, a, r, b)?;
    }

    #[test]
    fn two_mode_purity_is_symplectic_invariant(st in state2(), s in sympl4()) {
        check_basis_invariance_2d(&st, &s)?;
    }

    #[test]
    fn symplectic_purity_matches_determinant(st in state2()) {
        check_symplectic_vs_det(&st)?;
    }

    #[test]
    fn product_states_factorize(a in state1(), b in state1()) {
        check_block_diagonal(&a, &b)?;
    }

    #[test]
    fn reduced_formula_matches_general(
        nb in 0.0f64..10.0, nd in 0.0f64..10.0, r in -1.0f64..1.0, t in -3.2f64..3.2, hbar in 0.1f64..10.0,
    ) {
        check_reduced_formula(nb, nd, r, t, hbar)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn wavefunctions_are_orthonormal(st in state1(), x0 in -5.0f64..5.0) {
        check_orthonormality(&st, x0)?;
    }
}
