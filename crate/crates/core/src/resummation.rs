//! All-orders summations: the time-ordering identity check, geometric
//! resummation of repeated processes, and the explicit regularization used when
//! the geometric series diverges.

use num_complex::Complex64;

use crate::error::{invalid, Result, ZenoError};
use crate::oracle;
use crate::propagator::{ensure_finite, ONE};

/// Partial sums larger than this are declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

/// Distance from `|x| = 1` at which the geometric series is refused.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesValue {
    Finite(Complex64),
    Divergent,
}

/// How a divergent interaction series was assigned a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularization {
    /// The series converged; no rule was applied.
    None,
    /// The series `1 + x + x² + …` with `|x| > 1` is given the value of
    /// `1/(1 - x)` in the limit `|x| → ∞`, namely 0.
    ZenoLimitContinuation,
}

impl Regularization {
    pub fn label(&self) -> &'static str {
        match self {
            Regularization::None => "none",
            Regularization::ZenoLimitContinuation => "zeno_limit_continuation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoSumResult {
    /// Amplitude of the interaction-free process.
    pub base_term: Complex64,
    pub series: SeriesValue,
    /// `base_term - 1 + series`, or `base_term - 1` under the continuation.
    pub regularized: Complex64,
    pub probability: f64,
    pub regularization: Regularization,
}

impl ZenoSumResult {
    fn finite(base_term: Complex64, series: Complex64) -> Result<Self> {
        let regularized = ensure_finite(base_term - ONE + series, "zeno resummation")?;
        Ok(Self {
            base_term,
            series: SeriesValue::Finite(series),
            regularized,
            probability: regularized.norm_sqr(),
            regularization: Regularization::None,
        })
    }

    fn continued(base_term: Complex64) -> Self {
        let regularized = base_term - ONE;
        Self {
            base_term,
            series: SeriesValue::Divergent,
            regularized,
            probability: regularized.norm_sqr(),
            regularization: Regularization::ZenoLimitContinuation,
        }
    }
}

/// Sums `1 + l_n + l_n² + …` and combines it with the free amplitude.
///
/// For `|l_n| < 1` the series is `1/(1 - l_n)`. For `|l_n| > 1` the result is
/// marked divergent and carries the Zeno-limit continuation. Within
/// [`BOUNDARY_TOLERANCE`] of the unit circle it fails with `GeometricBoundary`.
pub fn zeno_resum_bubble(l_n: Complex64, l_free: Complex64) -> Result<ZenoSumResult> {
    if !(l_n.re.is_finite() && l_n.im.is_finite() && l_free.re.is_finite() && l_free.im.is_finite()) {
        return Err(invalid("l_n", "amplitudes must be finite"));
    }
    let modulus = l_n.norm();
    if (modulus - 1.0).abs() <= BOUNDARY_TOLERANCE {
        return Err(ZenoError::GeometricBoundary { modulus });
    }
    if modulus > 1.0 {
        return Ok(ZenoSumResult::continued(l_free));
    }
    ZenoSumResult::finite(l_free, ONE / (ONE - l_n))
}

/// The divergent case `Σ_k m^{kn}` with `m > 1`: the series is replaced by its
/// continuation value, leaving `p_free - 1`. The result does not depend on `m`.
pub fn zeno_resum_divergent(m: f64, p_free: Complex64) -> Result<ZenoSumResult> {
    if !(m > 1.0 && m.is_finite()) {
        return Err(invalid("m", format!("{m} must be finite and > 1")));
    }
    Ok(ZenoSumResult::continued(p_free))
}

/// Zeno limit of an open-oyster chain whose amplitude grows without bound, so
/// only the continuation applies.
pub fn zeno_limit_open_oyster(p_free: Complex64) -> ZenoSumResult {
    ZenoSumResult::continued(p_free)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartialSums {
    /// The next term fell below `1e-16` of the running sum.
    Converged { value: Complex64, terms: usize },
    /// The running sum exceeded [`DIVERGENCE_THRESHOLD`].
    Divergent { terms: usize, magnitude: f64 },
    /// Neither happened within the allowed number of terms.
    Undecided { value: Complex64, terms: usize },
}

/// Direct evaluation of `1 + x + x² + …` term by term.
pub fn geometric_partial_sums(x: Complex64, max_terms: usize) -> PartialSums {
    let mut value = ONE;
    let mut term = ONE;
    for terms in 1..max_terms {
        term *= x;
        value += term;
        let magnitude = value.norm();
        if magnitude > DIVERGENCE_THRESHOLD || !magnitude.is_finite() {
            return PartialSums::Divergent {
                terms: terms + 1,
                magnitude,
            };
        }
        if term.norm() <= 1e-16 * magnitude {
            return PartialSums::Converged {
                value,
                terms: terms + 1,
            };
        }
    }
    PartialSums::Undecided {
        value,
        terms: max_terms,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DysonCheck {
    pub nested: Complex64,
    pub symmetrized: Complex64,
    pub gap: f64,
    /// Sum of the two quadrature error bounds.
    pub error_bound: f64,
}

/// Compares the ordered-simplex integral of `Π_j e^{-iω_j t_j}` with `1/n!`
/// times the hypercube integral of its time-ordered product, where the
/// factor `e^{-iω_j ·}` is applied to the `j`-th largest time.
pub fn dyson_identity_check(freqs: &[f64], dt: f64, tol: f64) -> Result<DysonCheck> {
    let n = freqs.len();
    if !(2..=3).contains(&n) {
        return Err(invalid("freqs", format!("needs 2 or 3 frequencies, got {n}")));
    }
    let ordered = |t: &[f64]| -> Complex64 {
        t.iter()
            .zip(freqs)
            .map(|(&tj, &w)| Complex64::new(0.0, -w * tj).exp())
            .product()
    };
    let nested = oracle::nested_simplex_quadrature(ordered, n, dt, tol)?;
    let time_ordered = |t: &[f64]| {
        let mut sorted = t.to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        ordered(&sorted)
    };
    let cube = oracle::hypercube_quadrature(time_ordered, n, dt, tol)?;
    let factorial = if n == 2 { 2.0 } else { 6.0 };
    let symmetrized = cube.value / factorial;
    Ok(DysonCheck {
        nested: nested.value,
        symmetrized,
        gap: (nested.value - symmetrized).norm(),
        error_bound: nested.error_bound + cube.error_bound / factorial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bubble::{connected_bubble_ln, free_chain};
    use crate::interaction::InteractionSpec;

    #[test]
    fn empty_series_returns_free_amplitude() {
        let l_free = Complex64::new(0.3, -0.4);
        let r = zeno_resum_bubble(Complex64::new(0.0, 0.0), l_free).unwrap();
        assert!((r.regularized - l_free).norm() < 1e-15);
        assert_eq!(r.regularization, Regularization::None);
    }

    #[test]
    fn half_gives_two() {
        let r = zeno_resum_bubble(Complex64::new(0.5, 0.0), ONE).unwrap();
        assert!((r.regularized - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(r.series, SeriesValue::Finite(Complex64::new(2.0, 0.0)));
    }

    #[test]
    fn boundary_is_refused() {
        let err = zeno_resum_bubble(Complex64::new(0.0, 1.0), ONE).unwrap_err();
        assert!(matches!(err, ZenoError::GeometricBoundary { .. }));
    }

    #[test]
    fn outside_unit_circle_is_continued_explicitly() {
        let r = zeno_resum_bubble(Complex64::new(3.0, 0.0), ONE).unwrap();
        assert_eq!(r.series, SeriesValue::Divergent);
        assert_eq!(r.regularization, Regularization::ZenoLimitContinuation);
        assert_eq!(r.regularized, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn twenty_five_fold_bubble_keeps_unit_probability() {
        let spec = InteractionSpec::bubble(1.0, 1.0, 1.0, 25).unwrap();
        let r = zeno_resum_bubble(connected_bubble_ln(&spec).unwrap(), free_chain(&spec)).unwrap();
        assert!((r.probability - 1.0).abs() < 1e-6);
    }

    #[test]
    fn divergent_rule_is_independent_of_m() {
        for m in [1.0001, 2.0, 10.0] {
            let r = zeno_resum_divergent(m, Complex64::new(0.0, 0.0)).unwrap();
            assert_eq!(r.regularized, Complex64::new(-1.0, 0.0));
            assert_eq!(r.probability, 1.0);
            assert_eq!(r.series, SeriesValue::Divergent);
        }
        assert!(zeno_resum_divergent(1.0, ONE).is_err());
        assert!(zeno_resum_divergent(0.5, ONE).is_err());
    }

    #[test]
    fn partial_sums_detect_divergence() {
        // m = 2, n = 3: ratio 8, and 8^14 > 1e12.
        match geometric_partial_sums(Complex64::new(8.0, 0.0), 100) {
            PartialSums::Divergent { terms, magnitude } => {
                assert!(magnitude > DIVERGENCE_THRESHOLD);
                assert_eq!(terms, 15);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn partial_sums_converge_to_closed_form() {
        let x = Complex64::new(0.3, 0.4);
        let needed = ((1e-10f64).ln() / x.norm().ln()).ceil() as usize;
        let mut sum = ONE;
        let mut term = ONE;
        for _ in 1..=needed {
            term *= x;
            sum += term;
        }
        assert!((sum - ONE / (ONE - x)).norm() < 1e-10 / (1.0 - x.norm()));
        match geometric_partial_sums(x, 1000) {
            PartialSums::Converged { value, .. } => assert!((value - ONE / (ONE - x)).norm() < 1e-14),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dyson_trivial_case() {
        let c = dyson_identity_check(&[0.0, 0.0], 1.0, 1e-10).unwrap();
        assert!((c.nested - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        assert!(c.gap < 1e-10);
    }

    #[test]
    fn dyson_distinct_frequencies() {
        let c = dyson_identity_check(&[1.0, -0.5], 1.0, 1e-9).unwrap();
        assert!(c.gap < 1e-8, "gap {}", c.gap);
        let c3 = dyson_identity_check(&[0.3, 0.3, 0.3], 2.0, 1e-8).unwrap();
        assert!(c3.gap < 1e-7, "gap {}", c3.gap);
        assert!(dyson_identity_check(&[1.0], 1.0, 1e-8).is_err());
    }
}
