//! Property-based invariants across the library: sandwich soundness on raw
//! vectors, symmetry/invariance laws of the bound families, and the
//! reduction identities tying the n-observable form to the two-observable
//! families.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

use varbound::bounds;
use varbound::geometry;
use varbound::hilbert::{self, Observable, PureState, UnitCoeff};
use varbound::multi::{self, MultiObsSpec};

fn vec_from(parts: Vec<(f64, f64)>) -> DVector<C64> {
    DVector::from_iterator(parts.len(), parts.into_iter().map(|(re, im)| C64::new(re, im)))
}

fn raw_vector(dim: usize) -> impl Strategy<Value = DVector<C64>> {
    prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), dim)
        .prop_map(vec_from)
        .prop_filter("nonzero", |v| v.norm() > 1e-6)
}

fn state(dim: usize) -> impl Strategy<Value = PureState> {
    raw_vector(dim).prop_map(|v| PureState::normalized(v).expect("filtered nonzero"))
}

fn hermitian(dim: usize) -> impl Strategy<Value = Observable> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), dim * dim).prop_map(move |parts| {
        let g = DMatrix::from_iterator(
            dim,
            dim,
            parts.into_iter().map(|(re, im)| C64::new(re, im)),
        );
        let h = (&g + g.adjoint()).map(|z| z * 0.5);
        Observable::new(h).expect("symmetrized")
    })
}

/// (A, B, psi) triples where both observables have healthy variance.
fn nondegenerate_pair(
    dim: usize,
) -> impl Strategy<Value = (Observable, Observable, PureState)> {
    (hermitian(dim), hermitian(dim), state(dim)).prop_filter("nondegenerate", |(a, b, psi)| {
        hilbert::std_dev(a, psi).unwrap() > 1e-3 && hilbert::std_dev(b, psi).unwrap() > 1e-3
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn maligranda_sandwich_sound((x1, x2) in (raw_vector(4), raw_vector(4))) {
        let r = geometry::maligranda_sandwich(&x1, &x2).unwrap();
        prop_assert!(r.linear_lower_slack() >= -1e-9);
        prop_assert!(r.linear_upper_slack() >= -1e-9);
        prop_assert!(r.sandwich_lower_slack >= -1e-9);
        prop_assert!(r.sandwich_upper_slack >= -1e-9);
    }

    #[test]
    fn maligranda_swap_invariant((x1, x2) in (raw_vector(3), raw_vector(3))) {
        let a = geometry::maligranda_sandwich(&x1, &x2).unwrap();
        let b = geometry::maligranda_sandwich(&x2, &x1).unwrap();
        prop_assert!((a.angular_distance - b.angular_distance).abs() <= 1e-12);
        prop_assert!((a.f_l - b.f_l).abs() <= 1e-9);
        prop_assert!((a.f_r - b.f_r).abs() <= 1e-9);
    }

    #[test]
    fn angular_distance_scale_invariant(
        (x1, x2) in (raw_vector(3), raw_vector(3)),
        s1 in 0.1f64..10.0,
        s2 in 0.1f64..10.0,
    ) {
        let d = geometry::angular_distance(&x1, &x2).unwrap();
        let scaled = geometry::angular_distance(
            &(&x1 * C64::new(s1, 0.0)),
            &(&x2 * C64::new(s2, 0.0)),
        )
        .unwrap();
        prop_assert!((d - scaled).abs() <= 1e-10);
    }

    #[test]
    fn kato_sandwich_sound(
        xs in prop::collection::vec(raw_vector(4), 2..=5),
    ) {
        let k = geometry::kato_sandwich(&xs).unwrap();
        prop_assert!(k.lower_slack() >= -1e-9);
        prop_assert!(k.upper_slack() >= -1e-9);
        prop_assert!(k.xi >= 0.0 && k.xi <= xs.len() as f64);
    }

    #[test]
    fn cauchy_schwarz_and_schrodinger((a, b, psi) in nondegenerate_pair(4)) {
        let m = hilbert::moments(&a, &b, &psi).unwrap();
        prop_assert!(m.cov.abs() <= m.std_a * m.std_b + 1e-10);
        prop_assert!(0.5 * m.comm_exp.norm() <= m.std_a * m.std_b + 1e-10);
        let schr = bounds::schrodinger(&a, &b, &psi).unwrap();
        prop_assert!(schr <= m.var_a * m.var_b + 1e-9);
    }

    #[test]
    fn families_bracket_the_sum((a, b, psi) in nondegenerate_pair(3)) {
        let m = hilbert::moments(&a, &b, &psi).unwrap();
        let sum = m.var_a + m.var_b;
        for set in [
            bounds::family1(&a, &b, &psi).unwrap(),
            bounds::family3(&a, &b, &psi).unwrap(),
        ] {
            prop_assert!(set.lower_plus <= sum + 1e-9);
            prop_assert!(set.lower_minus <= sum + 1e-9);
            prop_assert!(set.upper_plus >= sum - 1e-9);
            prop_assert!(set.upper_minus >= sum - 1e-9);
        }
    }

    #[test]
    fn family1_swap_symmetric((a, b, psi) in nondegenerate_pair(3)) {
        let ab = bounds::family1(&a, &b, &psi).unwrap();
        let ba = bounds::family1(&b, &a, &psi).unwrap();
        prop_assert!((ab.lower_plus - ba.lower_plus).abs() <= 1e-9);
        prop_assert!((ab.lower_minus - ba.lower_minus).abs() <= 1e-9);
        prop_assert!((ab.upper_plus - ba.upper_plus).abs() <= 1e-9);
        prop_assert!((ab.upper_minus - ba.upper_minus).abs() <= 1e-9);
    }

    #[test]
    fn family3_swap_exchanges_branches((a, b, psi) in nondegenerate_pair(3)) {
        let ab = bounds::family3(&a, &b, &psi).unwrap();
        let ba = bounds::family3(&b, &a, &psi).unwrap();
        prop_assert!((ab.lower_plus - ba.lower_minus).abs() <= 1e-9);
        prop_assert!((ab.upper_plus - ba.upper_minus).abs() <= 1e-9);
        prop_assert!((ab.lower_minus - ba.lower_plus).abs() <= 1e-9);
        prop_assert!((ab.upper_minus - ba.upper_plus).abs() <= 1e-9);
    }

    #[test]
    fn shift_invariance((a, b, psi) in nondegenerate_pair(3), c in -4.0f64..4.0) {
        let shifted = a.shifted(c);
        let before = bounds::family1(&a, &b, &psi).unwrap();
        let after = bounds::family1(&shifted, &b, &psi).unwrap();
        prop_assert!((before.lower_plus - after.lower_plus).abs() <= 1e-10);
        prop_assert!((before.upper_minus - after.upper_minus).abs() <= 1e-10);
        let rb = bounds::reverse_cov(&a, &b, &psi);
        let ra = bounds::reverse_cov(&shifted, &b, &psi);
        if let (Ok(rb), Ok(ra)) = (rb, ra) {
            prop_assert!((rb - ra).abs() <= 1e-8 * (1.0 + rb.abs()));
        }
    }

    #[test]
    fn family1_equals_maligranda_of_deviation_vectors((a, b, psi) in nondegenerate_pair(4)) {
        let set = bounds::family1(&a, &b, &psi).unwrap();
        let x1 = hilbert::deviation_vector(&a, &psi, UnitCoeff::One).unwrap().components;
        let x2 = hilbert::deviation_vector(&b, &psi, UnitCoeff::One).unwrap().components;
        let r = geometry::maligranda_sandwich(&x1, &x2).unwrap();
        prop_assert!((set.lower_plus - 0.5 * r.f_r).abs() <= 1e-9);
        prop_assert!((set.upper_plus - (r.f_l - 2.0 * r.norm1 * r.norm2)).abs() <= 1e-9);
    }

    #[test]
    fn family3_equals_maligranda_of_rotated_deviation_vectors((a, b, psi) in nondegenerate_pair(4)) {
        let set = bounds::family3(&a, &b, &psi).unwrap();
        let x1 = hilbert::deviation_vector(&a, &psi, UnitCoeff::One).unwrap().components;
        let x2 = hilbert::deviation_vector(&b, &psi, UnitCoeff::MinusI).unwrap().components;
        let r = geometry::maligranda_sandwich(&x1, &x2).unwrap();
        prop_assert!((set.lower_minus - 0.5 * r.f_r).abs() <= 1e-9);
        prop_assert!((set.upper_minus - (r.f_l - 2.0 * r.norm1 * r.norm2)).abs() <= 1e-9);
    }

    #[test]
    fn construct_orthogonal_is_orthogonal((a, b, psi) in nondegenerate_pair(4)) {
        let perp = bounds::construct_orthogonal(&a, &b, &psi, bounds::OrthogonalMode::Auto).unwrap();
        prop_assert!(hilbert::orthogonality_check(&psi, &perp).unwrap() <= 1e-10);
        let set2 = bounds::family2(&a, &b, &psi, &perp).unwrap();
        let set4 = bounds::family4(&a, &b, &psi, &perp).unwrap();
        let m = hilbert::moments(&a, &b, &psi).unwrap();
        let sum = m.var_a + m.var_b;
        for set in [set2, set4] {
            prop_assert!(set.best_lower() <= sum + 1e-9);
            prop_assert!(set.best_upper() >= sum - 1e-9);
        }
    }

    #[test]
    fn multi_reduces_to_families(
        (a, b, psi) in nondegenerate_pair(3),
        idx in 0usize..4,
    ) {
        let coeff = UnitCoeff::ALL[idx];
        let spec = MultiObsSpec::new(vec![a.clone(), b.clone()], vec![UnitCoeff::One, coeff]).unwrap();
        let r = multi::multi_bounds(&spec, &psi).unwrap();
        let (expected_lower, expected_upper) = match coeff {
            UnitCoeff::One => {
                let s = bounds::family1(&a, &b, &psi).unwrap();
                (s.lower_plus, s.upper_plus)
            }
            UnitCoeff::MinusOne => {
                let s = bounds::family1(&a, &b, &psi).unwrap();
                (s.lower_minus, s.upper_minus)
            }
            UnitCoeff::PlusI => {
                let s = bounds::family3(&a, &b, &psi).unwrap();
                (s.lower_plus, s.upper_plus)
            }
            UnitCoeff::MinusI => {
                let s = bounds::family3(&a, &b, &psi).unwrap();
                (s.lower_minus, s.upper_minus)
            }
        };
        prop_assert!((r.lower - expected_lower).abs() <= 1e-12 * (1.0 + expected_lower.abs()));
        prop_assert!((r.upper - expected_upper).abs() <= 1e-12 * (1.0 + expected_upper.abs()));
    }

    #[test]
    fn multi_global_phase_invariance(
        obs in prop::collection::vec(hermitian(3), 3),
        psi in state(3),
        coeff_idx in prop::collection::vec(0usize..4, 3),
        phase in 0usize..4,
    ) {
        let coeffs: Vec<UnitCoeff> = coeff_idx.iter().map(|&i| UnitCoeff::ALL[i]).collect();
        let stds_ok = obs.iter().all(|o| hilbert::std_dev(o, &psi).unwrap() > 1e-3);
        prop_assume!(stds_ok);
        // multiply every coefficient by i^phase
        let rotate = |c: UnitCoeff| {
            let pos = UnitCoeff::ALL.iter().position(|&x| x == c).unwrap();
            UnitCoeff::ALL[(pos + phase) % 4]
        };
        let rotated: Vec<UnitCoeff> = coeffs.iter().map(|&c| rotate(c)).collect();
        let base = multi::multi_bounds(
            &MultiObsSpec::new(obs.clone(), coeffs).unwrap(), &psi).unwrap();
        let turned = multi::multi_bounds(
            &MultiObsSpec::new(obs, rotated).unwrap(), &psi).unwrap();
        prop_assert!((base.lower - turned.lower).abs() <= 1e-10 * (1.0 + base.lower.abs()));
        prop_assert!((base.upper - turned.upper).abs() <= 1e-10 * (1.0 + base.upper.abs()));
        prop_assert!((base.moments.combined_dev - turned.moments.combined_dev).abs() <= 1e-10);
        prop_assert!((base.moments.g_param - turned.moments.g_param).abs() <= 1e-10);
    }

    #[test]
    fn maccone_pati_below_sum((a, b, psi) in nondegenerate_pair(4)) {
        let perp = bounds::construct_orthogonal(&a, &b, &psi, bounds::OrthogonalMode::Auto).unwrap();
        let (mp_plus, mp_minus) = bounds::maccone_pati(&a, &b, &psi, &perp).unwrap();
        let m = hilbert::moments(&a, &b, &psi).unwrap();
        let sum = m.var_a + m.var_b;
        prop_assert!(mp_plus <= sum + 1e-9);
        prop_assert!(mp_minus <= sum + 1e-9);
    }

    #[test]
    fn reverse_cov_above_sum((a, b, psi) in nondegenerate_pair(4)) {
        if let Ok(upper) = bounds::reverse_cov(&a, &b, &psi) {
            let m = hilbert::moments(&a, &b, &psi).unwrap();
            prop_assert!(upper >= m.var_a + m.var_b - 1e-9);
        }
    }
}
