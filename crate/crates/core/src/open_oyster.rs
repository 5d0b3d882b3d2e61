//! Open-oyster (exchange-scattering) amplitudes where every repetition starts
//! in the state the previous one ended in.
//!
//! A chain of levels `ε_{k_0}, …, ε_{k_n}` gives the nested integral
//! `Vⁿ e^{-iε_{k_n}Δt} ∫₀^Δt dt₁ e^{-iΔ₁t₁} ∫₀^{t₁} dt₂ e^{-iΔ₂t₂} …` with
//! `Δ_j = ε_{k_{j-1}} - ε_{k_j}`. Its value depends on the levels only through
//! the multiset `{ε_{k_0} + ε_{k_n} - ε_{k_j}}`: reordering interior levels, or
//! swapping the two ends, leaves it unchanged.

use num_complex::Complex64;

use crate::error::{invalid, Result, ZenoError};
use crate::expsum::{self, ExpPolySum, CONFLUENCE_THRESHOLD};
use crate::propagator::{ensure_finite, minus_i_pow, phase, I};

/// Ordered levels visited by an open-oyster chain; `n = len - 1`
/// interactions.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyChain {
    levels: Vec<f64>,
}

impl EnergyChain {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(invalid("levels", "an energy chain needs at least two levels"));
        }
        if levels.iter().any(|e| !e.is_finite()) {
            return Err(invalid("levels", "levels must be finite"));
        }
        Ok(Self { levels })
    }

    /// `n + 1` levels `start + j·gap`.
    pub fn uniform(start: f64, gap: f64, n: usize) -> Result<Self> {
        Self::new((0..=n).map(|j| start + gap * j as f64).collect())
    }

    /// `n + 1` levels spanning `[start, start + span]` with spacing `span/n`.
    pub fn shrinking(start: f64, span: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "must be at least 1"));
        }
        Self::new((0..=n).map(|j| start + span * j as f64 / n as f64).collect())
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn reps(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn first(&self) -> f64 {
        self.levels[0]
    }

    pub fn last(&self) -> f64 {
        self.levels[self.levels.len() - 1]
    }

    pub fn min_neighbor_gap(&self) -> f64 {
        self.levels
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Chain frequencies innermost first: `[Δ_n, …, Δ_1]`.
    pub fn chain_freqs(&self) -> Vec<f64> {
        self.levels.windows(2).rev().map(|w| w[0] - w[1]).collect()
    }
}

fn check_inputs(v: f64, dt: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(invalid("v", format!("{v} is outside [0, 1]")));
    }
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(invalid("dt", "must be finite and >= 0"));
    }
    Ok(())
}

/// Single open-oyster interaction
/// `V (e^{-iε_kΔt} - e^{-iε_lΔt}) / (-i(ε_k - ε_l))`, with the confluent limit
/// `V Δt e^{-iε_kΔt}` when the levels coincide.
///
/// Evaluated as `V Δt e^{-iε_lΔt} (e^{-ix} - 1)/(-ix)` with `x = (ε_k - ε_l)Δt`
/// and `e^{-ix} - 1 = -2 sin²(x/2) - i sin x`, which stays accurate as the
/// gap closes.
pub fn open_oyster_single(v: f64, eps_k: f64, eps_l: f64, dt: f64) -> Result<Complex64> {
    check_inputs(v, dt)?;
    let gap = eps_k - eps_l;
    if gap.abs() <= CONFLUENCE_THRESHOLD || dt == 0.0 {
        return Ok(phase(eps_k * dt) * (v * dt));
    }
    let x = gap * dt;
    let half = (0.5 * x).sin();
    let numerator = Complex64::new(-2.0 * half * half, -x.sin());
    let kernel = numerator / (-I * x);
    ensure_finite(phase(eps_l * dt) * kernel * (v * dt), "open_oyster_single")
}

/// Closed form of the n-fold chain in `τ = Δt`, with the outer phase
/// `e^{-iε_{k_n}τ}` folded into the term frequencies.
pub fn open_oyster_closed_form(v: f64, chain: &EnergyChain) -> Result<ExpPolySum> {
    check_inputs(v, 0.0)?;
    let n = chain.reps() as i32;
    expsum::chain_integral(&chain.chain_freqs())?
        .shift_freq(chain.last())?
        .scale(Complex64::new(v.powi(n), 0.0))
}

/// n-fold open-oyster amplitude for equal neighbour potentials `V`.
pub fn open_oyster_chain(v: f64, chain: &EnergyChain, dt: f64) -> Result<Complex64> {
    check_inputs(v, dt)?;
    let n = chain.reps() as i32;
    let nested = expsum::chain_value(&chain.chain_freqs(), dt)?;
    ensure_finite(nested * phase(chain.last() * dt) * v.powi(n), "open_oyster_chain")
}

/// The n-group reduction, with the sign exponent read as the summation
/// index `m`:
/// `Vⁿ Σ_m (-1)^m (e^{-i(ε_0 + ε_n - ε_{n-m})Δt} - e^{-iε_nΔt}) /
///   ((-i)ⁿ Π_{i=0}^{n-m-1}(ε_i - ε_{n-m}) Π_{i=n-m}^{n-1}(ε_{n-m} - ε_{i+1}))`.
///
/// This is the divided-difference expansion of the chain over the nodes
/// `ε_0 + ε_n - ε_j`, so it agrees with [`open_oyster_chain`] whenever the
/// levels are pairwise distinct. It fails otherwise, and loses accuracy as
/// neighbouring levels approach each other.
pub fn open_oyster_grouped(v: f64, chain: &EnergyChain, dt: f64) -> Result<Complex64> {
    check_inputs(v, dt)?;
    let e = chain.levels();
    let n = chain.reps();
    let mut total = Complex64::new(0.0, 0.0);
    for m in 0..n {
        let pivot = e[n - m];
        let mut denominator = 1.0;
        for &level in &e[..n - m] {
            denominator *= level - pivot;
        }
        for i in (n - m)..n {
            denominator *= pivot - e[i + 1];
        }
        if denominator.abs() <= CONFLUENCE_THRESHOLD {
            return Err(invalid("levels", "grouped form needs distinct levels"));
        }
        let numerator = phase((e[0] + e[n] - pivot) * dt) - phase(e[n] * dt);
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        total += numerator * sign / (minus_i_pow(n as u64) * denominator);
    }
    ensure_finite(total * v.powi(n as i32), "open_oyster_grouped")
}

/// How chain levels are laid out when the repetition count grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapRule {
    /// Neighbours a fixed distance apart, so the span grows with `n`.
    FixedGap(f64),
    /// Total span 1, neighbours `1/n` apart.
    ShrinkingGap,
}

impl GapRule {
    pub fn chain(&self, n: usize) -> Result<EnergyChain> {
        match *self {
            GapRule::FixedGap(gap) => EnergyChain::uniform(0.0, gap, n),
            GapRule::ShrinkingGap => EnergyChain::shrinking(0.0, 1.0, n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub magnitude: std::result::Result<f64, ZenoError>,
}

/// `|Lⁿ|` for `n = 1..=n_max` on chains laid out by `rule`. A failing row
/// (overflow) is kept in the table rather than aborting it.
pub fn chain_growth_profile(v: f64, dt: f64, n_max: usize, rule: GapRule) -> Result<Vec<GrowthRow>> {
    check_inputs(v, dt)?;
    if n_max < 2 {
        return Err(invalid("n_max", "must be at least 2"));
    }
    use rayon::prelude::*;
    let rows = (1..=n_max)
        .into_par_iter()
        .map(|n| GrowthRow {
            n,
            magnitude: rule
                .chain(n)
                .and_then(|chain| open_oyster_chain(v, &chain, dt))
                .map(|z| z.norm()),
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn chain_construction() {
        assert!(EnergyChain::new(vec![1.0]).is_err());
        assert!(EnergyChain::new(vec![1.0, f64::INFINITY]).is_err());
        let c = EnergyChain::shrinking(0.0, 1.0, 4).unwrap();
        assert_eq!(c.reps(), 4);
        assert!((c.min_neighbor_gap() - 0.25).abs() < 1e-15);
        assert_eq!(EnergyChain::new(vec![0.0, 1.0, 2.5]).unwrap().chain_freqs(), vec![-1.5, -1.0]);
    }

    #[test]
    fn single_confluent_limit() {
        let (v, e, dt) = (0.4, 1.3, 2.0);
        let z = open_oyster_single(v, e, e, dt).unwrap();
        assert!(close(z, phase(e * dt) * (v * dt), 1e-16));
    }

    #[test]
    fn single_zero_potential() {
        assert_eq!(open_oyster_single(0.0, 1.0, 2.0, 1.0).unwrap().norm(), 0.0);
    }

    #[test]
    fn single_matches_frozen_quadrature() {
        let expected = Complex64::new(0.04747850941244963212, -0.66951439969069747308);
        let z = open_oyster_single(0.7, 1.0, 2.0, 1.0).unwrap();
        assert!(close(z, expected, 1e-15));
    }

    #[test]
    fn single_rejects_bad_inputs() {
        assert!(open_oyster_single(1.2, 0.0, 1.0, 1.0).is_err());
        assert!(open_oyster_single(0.2, 0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn chain_of_one_is_single() {
        for &(a, b, dt) in &[(1.0, 2.0, 1.0), (-0.3, 0.9, 2.0), (0.5, 0.5, 1.5)] {
            let chain = EnergyChain::new(vec![a, b]).unwrap();
            let z = open_oyster_chain(0.8, &chain, dt).unwrap();
            let s = open_oyster_single(0.8, a, b, dt).unwrap();
            assert!(close(z, s, 1e-15), "{z} vs {s}");
        }
    }

    #[test]
    fn equal_levels_give_simplex_volume() {
        let (v, e, dt) = (0.9, 0.7, 1.3);
        let chain = EnergyChain::new(vec![e; 4]).unwrap();
        let z = open_oyster_chain(v, &chain, dt).unwrap();
        let expected = phase(e * dt) * (v * dt).powi(3) / 6.0;
        assert!(close(z, expected, 1e-15));
    }

    #[test]
    fn two_fold_chain_matches_frozen_quadrature() {
        let expected = Complex64::new(0.081768620337766095054, -0.34474231807650748864);
        let chain = EnergyChain::new(vec![0.0, 1.0, 2.5]).unwrap();
        assert!(close(open_oyster_chain(0.9, &chain, 1.0).unwrap(), expected, 1e-15));
        let closed = open_oyster_closed_form(0.9, &chain).unwrap();
        assert!(close(closed.evaluate(1.0).unwrap(), expected, 1e-15));
    }

    #[test]
    fn interior_order_and_end_swap_do_not_matter() {
        let base = EnergyChain::new(vec![0.0, 1.0, 2.5, 0.4]).unwrap();
        let interior = EnergyChain::new(vec![0.0, 2.5, 1.0, 0.4]).unwrap();
        let ends = EnergyChain::new(vec![0.4, 1.0, 2.5, 0.0]).unwrap();
        let z = open_oyster_chain(1.0, &base, 1.0).unwrap();
        assert!(close(z, open_oyster_chain(1.0, &interior, 1.0).unwrap(), 1e-14));
        assert!(close(z, open_oyster_chain(1.0, &ends, 1.0).unwrap(), 1e-14));
    }

    #[test]
    fn moving_an_interior_level_to_an_end_changes_the_value() {
        let base = EnergyChain::new(vec![0.0, 1.0, 2.5, 0.4]).unwrap();
        let moved = EnergyChain::new(vec![1.0, 0.0, 2.5, 0.4]).unwrap();
        let a = open_oyster_chain(1.0, &base, 1.0).unwrap();
        let b = open_oyster_chain(1.0, &moved, 1.0).unwrap();
        assert!((a - b).norm() > 1e-3);
    }

    #[test]
    fn grouped_form_matches_chain_for_distinct_levels() {
        let chains = [vec![0.3, 1.4], vec![0.0, 1.0, 2.5], vec![0.0, 1.0, 2.5, 0.4]];
        for levels in chains {
            let chain = EnergyChain::new(levels).unwrap();
            let grouped = open_oyster_grouped(0.8, &chain, 1.2).unwrap();
            let exact = open_oyster_chain(0.8, &chain, 1.2).unwrap();
            assert!(close(grouped, exact, 1e-13), "{grouped} vs {exact}");
        }
        let repeated = EnergyChain::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert!(open_oyster_grouped(1.0, &repeated, 1.0).is_err());
    }

    #[test]
    fn fixed_zero_gap_profile_decreases_like_factorial() {
        let rows = chain_growth_profile(1.0, 1.0, 10, GapRule::FixedGap(0.0)).unwrap();
        let mut fact = 1.0;
        for row in &rows {
            fact *= row.n as f64;
            let m = *row.magnitude.as_ref().unwrap();
            assert!((m - 1.0 / fact).abs() <= 1e-14 / fact);
        }
        for w in rows.windows(2) {
            assert!(w[1].magnitude.as_ref().unwrap() < w[0].magnitude.as_ref().unwrap());
        }
    }

    #[test]
    fn zero_potential_profile_is_zero() {
        let rows = chain_growth_profile(0.0, 1.0, 6, GapRule::ShrinkingGap).unwrap();
        assert!(rows.iter().all(|r| *r.magnitude.as_ref().unwrap() == 0.0));
        assert!(chain_growth_profile(1.0, 1.0, 1, GapRule::ShrinkingGap).is_err());
    }
}
