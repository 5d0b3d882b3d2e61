//! Bubble-process amplitudes: the vacuum series and its exponential
//! resummation, the connected n-fold bubble with free propagators between
//! repetitions, the free chain, and the linked-cluster ground-state energy.

use num_complex::Complex64;
use statrs::function::factorial::ln_factorial;

use crate::error::{invalid, Result};
use crate::expsum;
use crate::interaction::InteractionSpec;
use crate::propagator::{ensure_finite, minus_i_pow, phase, I};

/// Partial sums of the vacuum series stop once the next term is below this
/// fraction of the running sum.
pub const SERIES_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq)]
pub struct VacuumAmplitudeResult {
    /// Partial sums `1, 1 + x, 1 + x + x²/2!, …` of the outer series.
    pub order_terms: Vec<Complex64>,
    /// `exp(x)` with `x = (VΔt)ⁿ/n!`.
    pub resummed: Complex64,
    pub probability: f64,
}

/// `xⁿ/n!` for `x ≥ 0`, in log space once `n` exceeds 20.
pub(crate) fn power_over_factorial(x: f64, n: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if x == 0.0 {
        return 0.0;
    }
    if n <= 20 {
        let fact: f64 = (1..=n).map(f64::from).product();
        return x.powi(n as i32) / fact;
    }
    (f64::from(n) * x.ln() - ln_factorial(u64::from(n))).exp()
}

/// `(VΔt)ⁿ/n!` with the `(-iG⁻) = 1` normalization; `n = 0` gives 1.
pub fn vacuum_bubble_term(potential: f64, delta_t: f64, n: u32) -> f64 {
    power_over_factorial(potential * delta_t, n)
}

/// n-th order vacuum bubble amplitude for `spec.reps = n`.
pub fn vacuum_bubble_order_n(spec: &InteractionSpec) -> Complex64 {
    Complex64::new(vacuum_bubble_term(spec.potential, spec.delta_t, spec.reps), 0.0)
}

/// Resums the series `1 + x + x²/2! + …` of repeated n-th order bubbles.
///
/// At most `orders` partial sums are tabulated; tabulation stops early once the
/// next term is negligible.
pub fn vacuum_zeno_amplitude(spec: &InteractionSpec, orders: usize) -> Result<VacuumAmplitudeResult> {
    if orders < 1 {
        return Err(invalid("orders", "must be at least 1"));
    }
    let x = vacuum_bubble_term(spec.potential, spec.delta_t, spec.reps);
    let resummed = ensure_finite(Complex64::new(x.exp(), 0.0), "vacuum_zeno_amplitude")?;

    let mut order_terms = Vec::with_capacity(orders.min(64));
    let mut partial = 1.0;
    let mut term = 1.0;
    order_terms.push(Complex64::new(partial, 0.0));
    for k in 1..orders {
        term *= x / k as f64;
        if term <= SERIES_CUTOFF * partial {
            break;
        }
        partial += term;
        order_terms.push(Complex64::new(partial, 0.0));
    }
    Ok(VacuumAmplitudeResult {
        order_terms,
        resummed,
        probability: resummed.norm_sqr(),
    })
}

/// Inner chain frequencies of the connected bubble: only the innermost
/// integration variable carries `ε_k`.
fn bubble_chain_freqs(energy: f64, n: u32) -> Vec<f64> {
    let mut freqs = vec![0.0; n as usize];
    freqs[0] = energy;
    freqs
}

/// Connected n-fold bubble `Lⁿ = Vⁿ ∫…∫ e^{-iε_k(t_n - t₀)}` over the ordered
/// simplex, which equals `Vⁿ Σ_{m≥n} (-iε_k)^{m-n} Δtᵐ/m!`.
pub fn connected_bubble_ln(spec: &InteractionSpec) -> Result<Complex64> {
    let n = spec.reps;
    let chain = expsum::chain_value(&bubble_chain_freqs(spec.energy, n), spec.delta_t)?;
    ensure_finite(chain * spec.potential.powi(n as i32), "connected_bubble_ln")
}

/// The printed closed form with one fewer power of `(-iε_k)` in every
/// denominator: `Vⁿ (e^{-iεΔt}/(-iε)^{n-1} - Σ_{m<n} Δtᵐ/(m!(-iε)^{n-1-m}))`.
///
/// Kept for the verification report, which shows its gap to the nested
/// integral. It equals `(-iε)·Lⁿ`.
pub fn connected_bubble_ln_printed(spec: &InteractionSpec) -> Result<Complex64> {
    let n = spec.reps as i32;
    if spec.energy == 0.0 {
        return Err(invalid("energy", "printed form is singular at ε = 0"));
    }
    let k = -I * spec.energy;
    let dt = spec.delta_t;
    let mut value = phase(spec.energy * dt) / k.powi(n - 1);
    let mut fact = 1.0;
    for m in 0..n {
        if m > 0 {
            fact *= f64::from(m);
        }
        value -= dt.powi(m) / (fact * k.powi(n - 1 - m));
    }
    ensure_finite(value * spec.potential.powi(n), "connected_bubble_ln_printed")
}

/// `((-i) e^{-iε_kΔt/n})ⁿ = (-i)ⁿ e^{-iε_kΔt}`, which has unit modulus.
pub fn free_chain(spec: &InteractionSpec) -> Complex64 {
    minus_i_pow(u64::from(spec.reps)) * phase(spec.energy * spec.delta_t)
}

/// `W₀ + i d/dt ln R(t)` for `R = exp((V(t - t₀))ⁿ/n!)`, i.e.
/// `W₀ + i Vⁿ Δt^{n-1}/(n-1)!`.
pub fn linked_cluster_energy(spec: &InteractionSpec, w0: f64) -> Result<Complex64> {
    if spec.delta_t <= 0.0 {
        return Err(invalid("delta_t", "must be > 0 for the energy derivative"));
    }
    let n = spec.reps;
    if spec.potential == 0.0 {
        return Ok(Complex64::new(w0, 0.0));
    }
    // n Vⁿ Δt^{n-1}/n! = V · (VΔt)^{n-1}/(n-1)!
    let slope = spec.potential * power_over_factorial(spec.potential * spec.delta_t, n - 1);
    ensure_finite(Complex64::new(w0, 0.0) + I * slope, "linked_cluster_energy")
}

/// `ln R(t) = (V(t - t₀))ⁿ/n!`, exposed for derivative checks.
pub fn vacuum_log_amplitude(potential: f64, delta_t: f64, n: u32) -> f64 {
    vacuum_bubble_term(potential, delta_t, n)
}
