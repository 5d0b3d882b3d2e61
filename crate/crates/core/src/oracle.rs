//! Brute-force quadrature used to check every closed form.
//!
//! One-dimensional integrals use an adaptive 7/15-point Gauss–Kronrod pair
//! with the real and imaginary parts converged independently. Ordered-simplex
//! and hypercube integrals recurse on it, one coordinate per level, with the
//! inner error bounds integrated into the outer bound.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{invalid, Result, ZenoError};
use crate::propagator::ZERO;

/// Hard evaluation ceiling for a single quadrature.
pub const EVALUATION_BUDGET: u64 = 100_000_000;

/// Damped half-line integrals are truncated where `e^{-δτ}` drops below this.
pub const ENVELOPE_CUTOFF: f64 = 1e-9;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Value of a quadrature together with an error bound that holds for each
/// component separately (`|re error| ≤ bound` and `|im error| ≤ bound`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_bound: f64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err_re: f64,
    err_im: f64,
    /// False once the Gauss/Kronrod difference is below the roundoff floor,
    /// where bisecting cannot lower the bound any further.
    reducible: bool,
}

impl Panel {
    fn worst(&self) -> f64 {
        self.err_re.max(self.err_im)
    }
}

/// Integrand paired with an error bound of its own (used by nested levels).
struct Sample {
    value: Complex64,
    err: f64,
}

struct Budget {
    used: Cell<u64>,
}

impl Budget {
    fn new() -> Self {
        Self { used: Cell::new(0) }
    }

    fn charge(&self, evaluations: u64) -> Result<()> {
        let used = self.used.get() + evaluations;
        self.used.set(used);
        if used > EVALUATION_BUDGET {
            return Err(ZenoError::NotConverged {
                error_bound: f64::INFINITY,
                tolerance: 0.0,
                evaluations: used,
            });
        }
        Ok(())
    }
}

fn kronrod_panel<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<Sample>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = ZERO;
    let mut gauss = ZERO;
    let mut abs_re = 0.0;
    let mut abs_im = 0.0;
    let mut inherited = 0.0;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let points: &[f64] = if x == 0.0 { &[0.0] } else { &[x, -x] };
        for &s in points {
            let sample = f(center + half * s)?;
            kronrod += sample.value * w;
            abs_re += w * sample.value.re.abs();
            abs_im += w * sample.value.im.abs();
            inherited += w * sample.err;
            if j % 2 == 1 {
                gauss += sample.value * WG[j / 2];
            }
        }
    }
    let half_abs = half.abs();
    let diff = (kronrod - gauss) * half;
    // Roundoff floor so that exactly integrated panels still report a bound.
    let floor = 50.0 * f64::EPSILON;
    let (floor_re, floor_im) = (floor * abs_re * half_abs, floor * abs_im * half_abs);
    let err_re = diff.re.abs().max(floor_re) + inherited * half_abs;
    let err_im = diff.im.abs().max(floor_im) + inherited * half_abs;
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        err_re,
        err_im,
        reducible: diff.re.abs() > floor_re || diff.im.abs() > floor_im,
    })
}

/// Heap entry ordering panels by their larger component error.
struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ByError {}

impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.worst().total_cmp(&other.0.worst())
    }
}

/// Adaptive bisection until both component error sums are within `tol`.
///
/// Panels whose error is already at the roundoff floor are set aside; if
/// only those remain and the sum still exceeds `tol`, the call fails.
fn adaptive<F>(
    f: &mut F,
    breakpoints: &[f64],
    tol: f64,
    budget: &Budget,
) -> Result<(Complex64, f64)>
where
    F: FnMut(f64) -> Result<Sample>,
{
    let mut active = BinaryHeap::with_capacity(breakpoints.len() + 16);
    let (mut settled, mut settled_re, mut settled_im) = (ZERO, 0.0, 0.0);
    let (mut err_re, mut err_im) = (0.0, 0.0);
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            budget.charge(15)?;
            let p = kronrod_panel(f, w[0], w[1])?;
            err_re += p.err_re;
            err_im += p.err_im;
            if p.reducible {
                active.push(ByError(p));
            } else {
                settled += p.value;
                settled_re += p.err_re;
                settled_im += p.err_im;
            }
        }
    }
    let mut steps: u64 = 0;
    loop {
        if err_re <= tol && err_im <= tol {
            let value = settled + active.iter().map(|p| p.0.value).sum::<Complex64>();
            return Ok((value, err_re.max(err_im)));
        }
        let not_converged = |err_re: f64, err_im: f64| ZenoError::NotConverged {
            error_bound: err_re.max(err_im),
            tolerance: tol,
            evaluations: budget.used.get(),
        };
        let Some(ByError(worst)) = active.pop() else {
            return Err(not_converged(err_re, err_im));
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(not_converged(err_re, err_im));
        }
        budget.charge(30).map_err(|_| not_converged(err_re, err_im))?;
        let left = kronrod_panel(f, worst.a, mid)?;
        let right = kronrod_panel(f, mid, worst.b)?;
        err_re += left.err_re + right.err_re - worst.err_re;
        err_im += left.err_im + right.err_im - worst.err_im;
        for p in [left, right] {
            if p.reducible {
                active.push(ByError(p));
            } else {
                settled += p.value;
                settled_re += p.err_re;
                settled_im += p.err_im;
            }
        }
        steps += 1;
        // Re-add the totals now and then so the running sums cannot drift.
        if steps.is_multiple_of(256) {
            err_re = settled_re + active.iter().map(|p| p.0.err_re).sum::<f64>();
            err_im = settled_im + active.iter().map(|p| p.0.err_im).sum::<f64>();
        }
    }
}

/// Adaptive quadrature of a complex function over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_with_breakpoints(&mut f, &[a, b], tol)
}

/// Like [`integrate`], with initial panels split at the given sorted points.
pub fn integrate_with_breakpoints<F>(
    f: &mut F,
    breakpoints: &[f64],
    tol: f64,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Complex64,
{
    check_tol(tol)?;
    let budget = Budget::new();
    let mut sampled = |x: f64| {
        Ok(Sample {
            value: f(x),
            err: 0.0,
        })
    };
    let (value, error_bound) = adaptive(&mut sampled, breakpoints, tol, &budget)?;
    Ok(QuadratureResult {
        value,
        error_bound,
        evaluations: budget.used.get(),
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid("tol", "must be finite and > 0"));
    }
    Ok(())
}

/// Integral over the ordered simplex `0 ≤ t_n ≤ … ≤ t_1 ≤ dt`.
///
/// The integrand receives `[t_1, …, t_n]` (outermost first). When `tol` cannot
/// be met within [`EVALUATION_BUDGET`] the call fails with `NotConverged`.
pub fn nested_simplex_quadrature<F>(
    integrand: F,
    n: usize,
    dt: f64,
    tol: f64,
) -> Result<QuadratureResult>
where
    F: Fn(&[f64]) -> Complex64,
{
    if !(1..=4).contains(&n) {
        return Err(invalid("n", format!("{n} is outside 1..=4")));
    }
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(invalid("dt", "must be finite and >= 0"));
    }
    check_tol(tol)?;
    let budget = Budget::new();
    let mut coords = vec![0.0; n];
    let (value, error_bound) =
        nested_level(&integrand, &mut coords, 0, dt, tol, &budget, Region::Simplex)?;
    Ok(QuadratureResult {
        value,
        error_bound,
        evaluations: budget.used.get(),
    })
}

/// Integral over the full hypercube `[0, dt]^n`. Each inner level splits its
/// interval at the coordinates already fixed, so integrands with kinks on the
/// diagonals `t_i = t_j` stay piecewise smooth on every panel.
pub fn hypercube_quadrature<F>(
    integrand: F,
    n: usize,
    dt: f64,
    tol: f64,
) -> Result<QuadratureResult>
where
    F: Fn(&[f64]) -> Complex64,
{
    if !(1..=4).contains(&n) {
        return Err(invalid("n", format!("{n} is outside 1..=4")));
    }
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(invalid("dt", "must be finite and >= 0"));
    }
    check_tol(tol)?;
    let budget = Budget::new();
    let mut coords = vec![0.0; n];
    let (value, error_bound) =
        nested_level(&integrand, &mut coords, 0, dt, tol, &budget, Region::Cube)?;
    Ok(QuadratureResult {
        value,
        error_bound,
        evaluations: budget.used.get(),
    })
}

#[derive(Clone, Copy)]
enum Region {
    Simplex,
    Cube,
}

fn nested_level<F>(
    integrand: &F,
    coords: &mut [f64],
    level: usize,
    upper: f64,
    tol: f64,
    budget: &Budget,
    region: Region,
) -> Result<(Complex64, f64)>
where
    F: Fn(&[f64]) -> Complex64,
{
    let n = coords.len();
    let mut breakpoints = vec![0.0, upper];
    if let Region::Cube = region {
        breakpoints.extend(coords[..level].iter().copied().filter(|&c| c > 0.0 && c < upper));
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
    }
    if level + 1 == n {
        let mut leaf = |x: f64| {
            coords[level] = x;
            Ok(Sample {
                value: integrand(coords),
                err: 0.0,
            })
        };
        return adaptive(&mut leaf, &breakpoints, tol, budget);
    }
    // Inner errors are carried into each panel's bound, so the levels below
    // get half the budget (spread over the interval) and this level the rest.
    let inner_tol = 0.5 * tol / upper.max(f64::MIN_POSITIVE);
    let mut scratch = coords.to_vec();
    let mut inner = |x: f64| {
        scratch[level] = x;
        let next_upper = match region {
            Region::Simplex => x,
            Region::Cube => upper,
        };
        if next_upper <= 0.0 {
            return Ok(Sample {
                value: ZERO,
                err: 0.0,
            });
        }
        let (value, err) = nested_level(
            integrand,
            &mut scratch,
            level + 1,
            next_upper,
            inner_tol,
            budget,
            region,
        )?;
        Ok(Sample { value, err })
    };
    adaptive(&mut inner, &breakpoints, tol, budget)
}

/// Simplex quadrature of the chain integrand `Π_j e^{-iΔ_j t_j}` for
/// `freqs = [Δ_n, …, Δ₁]` (innermost first), the numeric counterpart of
/// `expsum::chain_integral`.
pub fn chain_quadrature(freqs: &[f64], dt: f64, tol: f64) -> Result<QuadratureResult> {
    let n = freqs.len();
    let integrand = |t: &[f64]| -> Complex64 {
        let exponent: f64 = t.iter().zip(freqs.iter().rev()).map(|(&tj, &w)| w * tj).sum();
        Complex64::new(0.0, -exponent).exp()
    };
    nested_simplex_quadrature(integrand, n, dt, tol)
}

/// `∫₀^∞ e^{i·freq·τ} e^{-δτ} dτ`, truncated where the envelope falls below
/// [`ENVELOPE_CUTOFF`] (or further out if `tol` needs a smaller tail). The
/// tail bound `e^{-δT}/δ` is included in the reported error.
pub fn damped_halfline_quadrature(freq: f64, delta: f64, tol: f64) -> Result<QuadratureResult> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid("delta", "must be finite and > 0"));
    }
    if !freq.is_finite() {
        return Err(invalid("freq", "must be finite"));
    }
    check_tol(tol)?;
    let envelope = ENVELOPE_CUTOFF.min(0.25 * tol * delta);
    let horizon = -envelope.ln() / delta;
    let tail = envelope / delta;

    // Initial panels: about one oscillation or one decay length each, whichever is shorter.
    let scale = freq.abs().max(delta);
    let panels = ((horizon * scale / std::f64::consts::PI).ceil() as usize).clamp(1, 1_000_000);
    let breakpoints: Vec<f64> = (0..=panels)
        .map(|k| horizon * k as f64 / panels as f64)
        .collect();
    let mut f = |tau: f64| Complex64::new(0.0, freq * tau).exp() * (-delta * tau).exp();
    let body = integrate_with_breakpoints(&mut f, &breakpoints, 0.75 * tol)?;
    Ok(QuadratureResult {
        value: body.value,
        error_bound: body.error_bound + tail,
        evaluations: body.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_weights_integrate_constants() {
        let total: f64 = WGK.iter().enumerate().map(|(j, w)| if j == 7 { *w } else { 2.0 * w }).sum();
        assert!((total - 2.0).abs() < 1e-15);
        let gauss: f64 = WG.iter().enumerate().map(|(j, w)| if j == 3 { *w } else { 2.0 * w }).sum();
        assert!((gauss - 2.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        let r = integrate(|x| Complex64::new(x.powi(13), 3.0 * x.powi(6)), 0.0, 1.0, 1e-14).unwrap();
        assert!((r.value.re - 1.0 / 14.0).abs() < 1e-15);
        assert!((r.value.im - 3.0 / 7.0).abs() < 1e-15);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn oscillatory_integral() {
        let r = integrate(|x| Complex64::new(0.0, -20.0 * x).exp(), 0.0, 2.0, 1e-12).unwrap();
        let exact = (Complex64::new(0.0, -40.0).exp() - 1.0) / Complex64::new(0.0, -20.0);
        assert!((r.value - exact).norm() < 1e-12);
        assert!(r.error_bound <= 1e-12);
    }

    #[test]
    fn simplex_volume() {
        let r = nested_simplex_quadrature(|_| Complex64::new(1.0, 0.0), 3, 1.0, 1e-10).unwrap();
        assert!((r.value.re - 1.0 / 6.0).abs() <= r.error_bound.max(1e-15));
        assert!(r.value.im.abs() < 1e-15);
        assert!(r.evaluations > 0);
    }

    #[test]
    fn hypercube_volume_with_kinks() {
        let r = hypercube_quadrature(
            |t| Complex64::new((t[0] - t[1]).abs(), 0.0),
            2,
            1.0,
            1e-12,
        )
        .unwrap();
        assert!((r.value.re - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_contract_dimension() {
        assert!(nested_simplex_quadrature(|_| ZERO, 5, 1.0, 1e-6).is_err());
        assert!(nested_simplex_quadrature(|_| ZERO, 0, 1.0, 1e-6).is_err());
        assert!(integrate(|_| ZERO, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn unreachable_tolerance_reports_not_converged() {
        // a jump discontinuity with a tolerance far below roundoff
        let err = integrate(
            |x| Complex64::new(if x < 0.3 { 1.0 } else { 2.0 }, 0.0),
            0.0,
            1.0,
            1e-300,
        )
        .unwrap_err();
        assert!(matches!(err, ZenoError::NotConverged { .. }));
    }

    #[test]
    fn damped_real_exponential() {
        let r = damped_halfline_quadrature(0.0, 0.1, 1e-8).unwrap();
        assert!((r.value - Complex64::new(10.0, 0.0)).norm() <= r.error_bound);
    }

    #[test]
    fn damped_oscillation() {
        let (freq, delta) = (1.0, 0.01);
        let r = damped_halfline_quadrature(freq, delta, 1e-8).unwrap();
        let exact = 1.0 / Complex64::new(delta, -freq);
        assert!((r.value - exact).norm() <= 2.0 * r.error_bound, "{} vs {exact}", r.value);
        assert!(r.error_bound <= 1e-8);
    }
}
