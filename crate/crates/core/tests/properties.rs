//! Property tests of the structural invariants of the blade arithmetic.

use cdybe_core::blade::{blade_grade, GeneratorSystem, MultiVector, System};
use proptest::prelude::*;

fn arb_system() -> impl Strategy<Value = System> {
    // diagonal pairings with mixed signature and a possible extension block
    (2usize..=5, prop::collection::vec(-2.0f64..2.0, 5), 0usize..=2).prop_map(
        |(n, diag, ext)| {
            let total = n + ext;
            let mut b = nalgebra::DMatrix::zeros(total, total);
            for i in 0..n {
                let d = diag[i];
                b[(i, i)] = if d.abs() < 0.3 { d.signum().max(0.5) } else { d };
            }
            let mut mask = vec![false; n];
            mask.extend(std::iter::repeat(true).take(ext));
            GeneratorSystem::new(b, mask).expect("construction is valid")
        },
    )
}

fn arb_mv(sys: &System, max_terms: usize) -> impl Strategy<Value = MultiVector> {
    let blades = sys.blade_count() as u32;
    let sys = sys.clone();
    prop::collection::vec((0..blades, -2.0f64..2.0), 1..=max_terms)
        .prop_map(move |terms| MultiVector::from_terms(&sys, terms))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_graded_commutative(
        (sys, seed) in arb_system().prop_flat_map(|s| {
            let pair = (arb_mv(&s, 6), arb_mv(&s, 6));
            (Just(s), pair)
        })
    ) {
        let (x, y) = seed;
        // check on homogeneous parts: x_k ∧ y_l = (-1)^{kl} y_l ∧ x_k
        let n = sys.generator_count() as u32;
        for k in 0..=n {
            for l in 0..=n {
                let xk = x.grade_part(k);
                let yl = y.grade_part(l);
                if xk.is_zero() || yl.is_zero() {
                    continue;
                }
                let ab = xk.wedge(&yl).unwrap();
                let ba = yl.wedge(&xk).unwrap();
                let sign = if (k * l) % 2 == 0 { 1.0 } else { -1.0 };
                prop_assert!((&ab - &ba.scale(sign)).coeff_norm() < 1e-10);
            }
        }
    }

    #[test]
    fn products_preserve_parity(
        (sys, pair) in arb_system().prop_flat_map(|s| {
            let pair = (arb_mv(&s, 6), arb_mv(&s, 6));
            (Just(s), pair)
        })
    ) {
        let _ = &sys;
        let (x, y) = pair;
        for (a, b) in [(x.even_part(), y.even_part()), (x.odd_part(), y.odd_part())] {
            // even·even and odd·odd are even, under both products
            let w = a.wedge(&b).unwrap();
            let c = a.clifford_product(&b).unwrap();
            prop_assert!(w.is_even());
            prop_assert!(c.is_even());
        }
        let mixed = x.even_part().clifford_product(&y.odd_part()).unwrap();
        prop_assert!(mixed.terms().all(|(m, _)| blade_grade(m) % 2 == 1));
    }

    #[test]
    fn clifford_is_associative(
        (sys, triple) in arb_system().prop_flat_map(|s| {
            let triple = (arb_mv(&s, 5), arb_mv(&s, 5), arb_mv(&s, 5));
            (Just(s), triple)
        })
    ) {
        let _ = &sys;
        let (x, y, z) = triple;
        let lhs = x.clifford_product(&y).unwrap().clifford_product(&z).unwrap();
        let rhs = x.clifford_product(&y.clifford_product(&z).unwrap()).unwrap();
        let scale = lhs.coeff_norm().max(rhs.coeff_norm()).max(1.0);
        prop_assert!((&lhs - &rhs).coeff_norm() < 1e-11 * scale);
    }

    #[test]
    fn quantize_and_symbol_are_inverse(
        (sys, x) in arb_system().prop_flat_map(|s| {
            let m = arb_mv(&s, 8);
            (Just(s), m)
        })
    ) {
        let _ = &sys;
        let there = x.quantize().symbol();
        prop_assert!((&there - &x).coeff_norm() < 1e-11 * x.coeff_norm().max(1.0));
        let back = x.symbol().quantize();
        prop_assert!((&back - &x).coeff_norm() < 1e-11 * x.coeff_norm().max(1.0));
    }

    #[test]
    fn contraction_squares_to_zero(
        (sys, x, v) in arb_system().prop_flat_map(|s| {
            let n = s.generator_count();
            let m = arb_mv(&s, 6);
            (Just(s), m, prop::collection::vec(-1.0f64..1.0, n))
        })
    ) {
        let vec = nalgebra::DVector::from_vec(v);
        let once = x.contract_vector(&vec).unwrap();
        let twice = once.contract_vector(&vec).unwrap();
        prop_assert!(twice.coeff_norm() < 1e-11 * x.coeff_norm().max(1.0));
        let _ = &sys;
    }
}
