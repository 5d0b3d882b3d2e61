#![allow(clippy::excessive_precision)]

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zeno_qft::expsum::chain_value;
use zeno_qft::open_oyster::{open_oyster_chain, EnergyChain, GapRule};
use zeno_qft::oracle::{chain_quadrature, damped_halfline_quadrature, integrate, nested_simplex_quadrature};
use zeno_qft::propagator::phase;
use zeno_qft::spectral::ft_free_chain;
use zeno_qft::sweep::{run_bubble_sweep, run_oyster_sweep, Cell, Mode, SweepConfig};

fn oyster_oracle(v: f64, chain: &EnergyChain, dt: f64) -> Complex64 {
    let q = chain_quadrature(&chain.chain_freqs(), dt, 1e-11).unwrap();
    q.value * phase(chain.last() * dt) * v.powi(chain.reps() as i32)
}

fn real_cell(cell: &Cell) -> f64 {
    match cell {
        Cell::Real(x) => *x,
        other => panic!("expected a real cell, got {other:?}"),
    }
}

#[test]
fn shrinking_gap_rows_match_quadrature() {
    for n in [2usize, 3] {
        let chain = GapRule::ShrinkingGap.chain(n).unwrap();
        let exact = open_oyster_chain(1.0, &chain, 1.0).unwrap();
        assert!((exact - oyster_oracle(1.0, &chain, 1.0)).norm() < 1e-8);
    }
}

#[test]
fn sweep_rows_match_quadrature() {
    let bubble = run_bubble_sweep(&SweepConfig::default()).unwrap();
    let ln3 = real_cell(&bubble.rows[2][1]);
    let q = chain_quadrature(&[1.0, 0.0, 0.0], 1.0, 1e-11).unwrap();
    assert!((ln3 - q.value.norm()).abs() < 1e-8);

    let cfg = SweepConfig {
        mode: Mode::OysterSweep,
        n_max: 3,
        ..SweepConfig::default()
    };
    let oyster = run_oyster_sweep(&cfg).unwrap();
    let ln2 = real_cell(&oyster.rows[1][1]);
    let chain = EnergyChain::shrinking(cfg.energy, 1.0, 2).unwrap();
    assert!((ln2 - oyster_oracle(1.0, &chain, 1.0).norm()).abs() < 1e-8);
}

#[test]
fn transform_matches_damped_quadrature_for_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..10 {
        let omega = rng.gen_range(-3.0..3.0);
        let eps = rng.gen_range(-3.0..3.0);
        let delta = rng.gen_range(0.01..1.0);
        let q = damped_halfline_quadrature(omega - eps, delta, 1e-8).unwrap();
        let closed = ft_free_chain(omega, eps, delta, 1).unwrap().to_complex().unwrap();
        let numeric = Complex64::new(0.0, -1.0) * q.value;
        assert!((closed - numeric).norm() <= 2.0 * q.error_bound.max(1e-8), "{closed} vs {numeric}");
    }
}

#[test]
fn error_bounds_are_honest() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut honest = 0;
    for _ in 0..100 {
        let w = rng.gen_range(-20.0..20.0);
        let b = rng.gen_range(0.5..3.0);
        let tol = 10f64.powf(-rng.gen_range(4.0..12.0));
        let r = integrate(|x| Complex64::new(0.0, -w * x).exp(), 0.0, b, tol).unwrap();
        let exact = if w == 0.0 {
            Complex64::new(b, 0.0)
        } else {
            (Complex64::new(0.0, -w * b).exp() - 1.0) / Complex64::new(0.0, -w)
        };
        let err = r.value - exact;
        if err.re.abs() <= r.error_bound && err.im.abs() <= r.error_bound {
            honest += 1;
        }
    }
    assert!(honest >= 99, "only {honest}/100 bounds held");
}

#[test]
fn four_fold_quadrature_stays_within_cost_ceiling() {
    let freqs = [0.9, -1.4, 2.0, 0.3];
    let start = Instant::now();
    let q = chain_quadrature(&freqs, 2.0, 1e-6).unwrap();
    assert!(start.elapsed() < Duration::from_secs(60));
    assert!((q.value - chain_value(&freqs, 2.0).unwrap()).norm() <= 1e-6);
    let volume = nested_simplex_quadrature(|_| Complex64::new(1.0, 0.0), 4, 1.0, 1e-10).unwrap();
    assert!((volume.value.re - 1.0 / 24.0).abs() < 1e-10);
}

#[test]
fn frozen_chain_values() {
    // Independent high-precision quadrature values.
    let cases: [(&[f64], f64, Complex64); 2] = [
        (&[1.0, 2.0], 1.0, Complex64::new(-0.044742586073422707742, -0.40760871072621844033)),
        (&[-0.2, 0.7], 2.0, chain_quadrature(&[-0.2, 0.7], 2.0, 1e-12).unwrap().value),
    ];
    for (freqs, dt, expected) in cases {
        assert!((chain_value(freqs, dt).unwrap() - expected).norm() < 1e-11);
    }
}
