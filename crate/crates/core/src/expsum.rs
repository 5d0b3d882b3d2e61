//! Exact algebra for nested time-ordered chain integrals.
//!
//! Every chain integral of exponentials is a finite sum of terms
//! `c · τ^d · e^{-i α τ}`. That class is closed under `g(τ) = ∫₀^τ e^{-iws} f(s) ds`,
//! so an n-fold nested integral is built by applying [`integrate_step`] n times.
//! When a frequency cancels exactly the step raises the polynomial degree
//! instead of dividing, which gives the confluent limits for free.
//!
//! Closed forms with nearly cancelling frequencies carry huge coefficients of
//! opposite sign. [`chain_value`] detects that loss of significance and falls
//! back to [`chain_value_bidiagonal`], which propagates the same integral as a
//! linear system `g' = (i·diag(A) + L) g` with the cumulative frequencies `A`
//! on the diagonal. Both routes are exact in exact arithmetic.

use num_complex::Complex64;

use crate::error::{Result, ZenoError};
use crate::propagator::{ensure_finite, OVERFLOW_LIMIT, I, ONE, ZERO};

/// Frequencies closer than this are equal: a cancelling sum takes the
/// degree-raising branch and canonicalization merges the terms.
pub const CONFLUENCE_THRESHOLD: f64 = 1e-12;

/// [`chain_value`] keeps the closed form while `Σ|c|·τ^d` stays within this
/// factor of the result (about four digits lost at worst).
pub const CONDITION_LIMIT: f64 = 1e4;

/// One term `coeff · τ^degree · e^{-i freq τ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpPolyTerm {
    pub coeff: Complex64,
    pub degree: u32,
    pub freq: f64,
}

impl ExpPolyTerm {
    pub fn new(coeff: Complex64, degree: u32, freq: f64) -> Self {
        Self { coeff, degree, freq }
    }

    pub fn evaluate(&self, tau: f64) -> Complex64 {
        let angle = self.freq * tau;
        self.coeff * tau.powi(self.degree as i32) * Complex64::new(angle.cos(), -angle.sin())
    }
}

/// A canonical sum of [`ExpPolyTerm`]s: sorted by `(freq, degree)`, no two
/// terms sharing a key, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpPolySum {
    terms: Vec<ExpPolyTerm>,
}

impl ExpPolySum {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant 1.
    pub fn one() -> Self {
        Self {
            terms: vec![ExpPolyTerm::new(ONE, 0, 0.0)],
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ExpPolyTerm>) -> Result<Self> {
        let terms = canonicalize(terms.into_iter().collect())?;
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[ExpPolyTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.degree).max().unwrap_or(0)
    }

    pub fn evaluate(&self, tau: f64) -> Result<Complex64> {
        let value = self.terms.iter().map(|t| t.evaluate(tau)).sum();
        ensure_finite(value, "ExpPolySum::evaluate")
    }

    /// `Σ |c| τ^d`, an upper bound on the partial sums. Its ratio to
    /// `|evaluate(τ)|` measures cancellation.
    pub fn magnitude_bound(&self, tau: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.norm() * tau.abs().powi(t.degree as i32))
            .sum()
    }

    pub fn scale(&self, factor: Complex64) -> Result<Self> {
        Self::from_terms(self.terms.iter().map(|t| ExpPolyTerm {
            coeff: t.coeff * factor,
            ..*t
        }))
    }

    /// Multiplies by `e^{-i shift τ}`.
    pub fn shift_freq(&self, shift: f64) -> Result<Self> {
        Self::from_terms(self.terms.iter().map(|t| ExpPolyTerm {
            freq: t.freq + shift,
            ..*t
        }))
    }
}

fn canonicalize(mut terms: Vec<ExpPolyTerm>) -> Result<Vec<ExpPolyTerm>> {
    for t in &terms {
        let magnitude = t.coeff.norm();
        if !magnitude.is_finite() || magnitude > OVERFLOW_LIMIT || !t.freq.is_finite() {
            return Err(ZenoError::Overflow {
                context: "ExpPolySum coefficient",
                magnitude,
                limit: OVERFLOW_LIMIT,
            });
        }
    }
    terms.sort_by(|a, b| a.freq.total_cmp(&b.freq));

    // Snap each frequency to the first member of its cluster.
    let mut anchor = f64::NAN;
    for t in terms.iter_mut() {
        if (t.freq - anchor).abs() <= CONFLUENCE_THRESHOLD {
            t.freq = anchor;
        } else {
            anchor = t.freq;
        }
    }
    terms.sort_by(|a, b| a.freq.total_cmp(&b.freq).then(a.degree.cmp(&b.degree)));

    let mut merged: Vec<ExpPolyTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match merged.last_mut() {
            Some(last) if last.freq == t.freq && last.degree == t.degree => last.coeff += t.coeff,
            _ => merged.push(t),
        }
    }
    merged.retain(|t| t.coeff != ZERO);
    Ok(merged)
}

/// `g(τ) = ∫₀^τ e^{-i·weight_freq·s} f(s) ds` in closed form.
///
/// For a term `c s^d e^{-iβs}` (β = freq + weight_freq) with `k = -iβ`:
/// `∫₀^τ s^d e^{ks} ds = e^{kτ} Σ_j (-1)^j d!/(d-j)! τ^{d-j}/k^{j+1} - (-1)^d d!/k^{d+1}`,
/// and `c τ^{d+1}/(d+1)` when β cancels.
pub fn integrate_step(f: &ExpPolySum, weight_freq: f64) -> Result<ExpPolySum> {
    let mut out = Vec::with_capacity(2 * f.len() + 1);
    for t in &f.terms {
        let beta = t.freq + weight_freq;
        let d = t.degree;
        if beta.abs() <= CONFLUENCE_THRESHOLD {
            out.push(ExpPolyTerm::new(t.coeff / f64::from(d + 1), d + 1, 0.0));
            continue;
        }
        let inv_k = ONE / (-I * beta);
        // falling factorial d!/(d-j)! times 1/k^{j+1}, with the alternating sign
        let mut factor = t.coeff * inv_k;
        for j in 0..=d {
            out.push(ExpPolyTerm::new(factor, d - j, beta));
            if j < d {
                factor *= -f64::from(d - j) * inv_k;
            }
        }
        // `factor` now holds c (-1)^d d!/k^{d+1}
        out.push(ExpPolyTerm::new(-factor, 0, 0.0));
    }
    ExpPolySum::from_terms(out)
}

/// The n-fold nested integral
/// `∫₀^τ dt₁ e^{-iΔ₁t₁} ∫₀^{t₁} dt₂ e^{-iΔ₂t₂} … ∫₀^{t_{n-1}} dt_n e^{-iΔ_n t_n}`
/// with `freqs = [Δ_n, …, Δ₁]` (innermost first). `n = freqs.len()`.
pub fn chain_integral(freqs: &[f64]) -> Result<ExpPolySum> {
    freqs
        .iter()
        .try_fold(ExpPolySum::one(), |acc, &w| integrate_step(&acc, w))
}

pub fn evaluate(f: &ExpPolySum, dt: f64) -> Result<Complex64> {
    f.evaluate(dt)
}

/// Numerical value of [`chain_integral`] at `dt`, switching to
/// [`chain_value_bidiagonal`] when the closed form is ill-conditioned or
/// overflows.
pub fn chain_value(freqs: &[f64], dt: f64) -> Result<Complex64> {
    if let Ok(sum) = chain_integral(freqs) {
        if let Ok(value) = sum.evaluate(dt) {
            if sum.magnitude_bound(dt) <= CONDITION_LIMIT * value.norm() {
                return Ok(value);
            }
        }
    }
    chain_value_bidiagonal(freqs, dt)
}

/// Chain integral by exact propagation of its generating linear system.
///
/// With cumulative sums `A_0 = 0, A_k = A_{k-1} + freqs[k-1]`, the functions
/// `g_k = e^{iA_k τ} f_k` obey `g_k' = i A_k g_k + g_{k-1}`, `g(0) = e_0`, and the
/// chain integral is `e^{-iA_n τ} g_n(τ)`. The system is stepped with a Taylor
/// propagator on steps where the generator norm is at most 1/2, so no
/// frequency difference ever appears in a denominator.
pub fn chain_value_bidiagonal(freqs: &[f64], dt: f64) -> Result<Complex64> {
    if dt < 0.0 || !dt.is_finite() {
        return Err(crate::error::invalid("dt", "must be finite and >= 0"));
    }
    let n = freqs.len();
    let mut cumulative = Vec::with_capacity(n + 1);
    cumulative.push(0.0);
    for &w in freqs {
        let last = *cumulative.last().unwrap();
        cumulative.push(last + w);
    }
    if n == 0 {
        return Ok(ONE);
    }
    if dt == 0.0 {
        return Ok(ZERO);
    }
    let lo = cumulative.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = cumulative.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let center = 0.5 * (lo + hi);
    let radius = 0.5 * (hi - lo);

    let steps = (2.0 * dt * (radius + 1.0)).ceil().max(1.0) as usize;
    let h = dt / steps as f64;
    let diagonal: Vec<Complex64> = cumulative
        .iter()
        .map(|a| I * ((a - center) * h))
        .collect();
    let taylor_terms = n + 32;

    let mut state = vec![ZERO; n + 1];
    state[0] = ONE;
    let mut term = vec![ZERO; n + 1];
    let mut next = vec![ZERO; n + 1];
    for _ in 0..steps {
        term.copy_from_slice(&state);
        for k in 1..=taylor_terms {
            // next = B·term / k with B = diag + h·(sub-diagonal ones)
            let inv_k = 1.0 / k as f64;
            next[0] = diagonal[0] * term[0] * inv_k;
            for j in 1..=n {
                next[j] = (diagonal[j] * term[j] + term[j - 1] * h) * inv_k;
            }
            std::mem::swap(&mut term, &mut next);
            for (s, t) in state.iter_mut().zip(&term) {
                *s += t;
            }
        }
    }
    let angle = (cumulative[n] - center) * dt;
    let value = state[n] * Complex64::new(angle.cos(), -angle.sin());
    ensure_finite(value, "chain_value_bidiagonal")
}
