use num_complex::Complex64;
use proptest::prelude::*;

use zeno_qft::bubble::free_chain;
use zeno_qft::expsum::{chain_integral, chain_value, chain_value_bidiagonal};
use zeno_qft::open_oyster::{open_oyster_chain, open_oyster_single, EnergyChain};
use zeno_qft::resummation::{geometric_partial_sums, zeno_resum_bubble, zeno_resum_divergent, PartialSums};
use zeno_qft::spectral::{classify_cut, ft_free_chain, SpectralKind};
use zeno_qft::InteractionSpec;

fn freq() -> impl Strategy<Value = f64> {
    -4.0..4.0f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_and_propagated_chain_agree(freqs in prop::collection::vec(freq(), 1..7), dt in 0.0..3.0f64) {
        let stable = chain_value_bidiagonal(&freqs, dt).unwrap();
        let chosen = chain_value(&freqs, dt).unwrap();
        prop_assert!((stable - chosen).norm() <= 1e-12 * (1.0 + stable.norm()));
        if let Ok(sum) = chain_integral(&freqs) {
            let closed = sum.evaluate(dt).unwrap();
            prop_assert!((closed - stable).norm() <= 1e-13 * (1.0 + sum.magnitude_bound(dt)));
        }
    }

    #[test]
    fn chain_magnitude_is_at_most_simplex_volume(freqs in prop::collection::vec(freq(), 1..7), dt in 0.0..3.0f64) {
        let n = freqs.len() as i32;
        let volume = dt.powi(n) / (1..=n).map(f64::from).product::<f64>();
        prop_assert!(chain_value(&freqs, dt).unwrap().norm() <= volume * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn open_oyster_ignores_interior_order_and_end_swap(
        levels in prop::collection::vec(freq(), 4..7),
        v in 0.0..=1.0f64,
        dt in 0.1..2.0f64,
    ) {
        let base = open_oyster_chain(v, &EnergyChain::new(levels.clone()).unwrap(), dt).unwrap();
        let mut interior = levels.clone();
        let last = interior.len() - 1;
        interior[1..last].reverse();
        let mut swapped = levels.clone();
        swapped.swap(0, last);
        for other in [interior, swapped] {
            let z = open_oyster_chain(v, &EnergyChain::new(other).unwrap(), dt).unwrap();
            prop_assert!((z - base).norm() <= 1e-12);
        }
    }

    #[test]
    fn single_oyster_is_continuous_through_confluence(
        e in freq(), v in 0.0..=1.0f64, dt in 0.1..3.0f64, exponent in 3.0..12.0f64,
    ) {
        let gap = 10f64.powf(-exponent);
        let near = open_oyster_single(v, e, e + gap, dt).unwrap();
        let at = open_oyster_single(v, e, e, dt).unwrap();
        prop_assert!((near - at).norm() <= 2.0 * gap * dt * dt * v + 1e-15);
    }

    #[test]
    fn free_chain_has_unit_modulus(n in 1u32..5000, eps in -100.0..100.0f64, dt in 0.0..50.0f64) {
        let spec = InteractionSpec::bubble(0.3, eps, dt, n).unwrap();
        prop_assert!((free_chain(&spec).norm_sqr() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn classification_follows_distance(omega in -5.0..5.0f64, eps in -2.0..2.0f64) {
        let c = classify_cut(omega, eps, 1e-9).unwrap();
        let d = (omega - eps).abs();
        let expected = if d <= 1e-9 {
            SpectralKind::Pole
        } else if (d - 1.0).abs() <= 1e-9 {
            SpectralKind::Boundary
        } else if d < 1.0 {
            SpectralKind::InsideCut
        } else {
            SpectralKind::Outside
        };
        prop_assert_eq!(c.kind, expected);
        prop_assert_eq!(c.growth_exponent > 0.0, d < 1.0);
    }

    #[test]
    fn log_space_powers_match_direct_powers(omega in -3.0..3.0f64, delta in 1e-3..1.0f64, n in 1u64..8) {
        let polar = ft_free_chain(omega, 0.0, delta, n).unwrap().to_complex().unwrap();
        let direct = Complex64::new(omega, delta).inv().powu(n as u32);
        prop_assert!((polar - direct).norm() <= 1e-12 * direct.norm());
    }

    #[test]
    fn geometric_sum_matches_closed_form(re in -0.9..0.9f64, im in -0.4..0.4f64) {
        let x = Complex64::new(re, im);
        prop_assume!(x.norm() < 0.95);
        let closed = zeno_resum_bubble(x, Complex64::new(1.0, 0.0)).unwrap().regularized;
        match geometric_partial_sums(x, 10_000) {
            PartialSums::Converged { value, .. } => prop_assert!((value - closed).norm() <= 1e-10),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn continuation_does_not_depend_on_m(m in 1.000001..1e6f64, re in -2.0..2.0f64) {
        let p = Complex64::new(re, 0.5);
        let r = zeno_resum_divergent(m, p).unwrap();
        prop_assert_eq!(r.regularized, p - 1.0);
    }
}
