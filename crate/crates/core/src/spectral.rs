//! Frequency-domain view of the Zeno-limit propagators.
//!
//! Powers of the transformed free propagator are kept as (log-magnitude,
//! phase) pairs so that cut diagnostics at large `n` never overflow.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Result, ZenoError};
use crate::propagator::{ComplexAmplitude, OVERFLOW_LIMIT};

/// Half-width of the band around `|ω - ε_k| = 1` classified as the cut edge.
pub const CUT_EDGE_TOLERANCE: f64 = 1e-9;

/// A complex number `e^{log_magnitude + i·phase}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarAmplitude {
    pub log_magnitude: f64,
    /// Wrapped to `(-π, π]`.
    pub phase: f64,
}

impl PolarAmplitude {
    pub fn from_complex(z: Complex64) -> Self {
        Self {
            log_magnitude: z.norm().ln(),
            phase: z.arg(),
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.log_magnitude.exp()
    }

    /// Converts back, failing when the magnitude exceeds the overflow limit.
    pub fn to_complex(&self) -> Result<ComplexAmplitude> {
        if self.log_magnitude > OVERFLOW_LIMIT.ln() {
            return Err(ZenoError::Overflow {
                context: "PolarAmplitude::to_complex",
                magnitude: self.magnitude(),
                limit: OVERFLOW_LIMIT,
            });
        }
        Ok(Complex64::from_polar(self.magnitude(), self.phase))
    }

    pub fn powu(&self, n: u64) -> Self {
        let phase = (self.phase * n as f64 + PI).rem_euclid(2.0 * PI) - PI;
        Self {
            log_magnitude: self.log_magnitude * n as f64,
            phase: if phase == -PI { PI } else { phase },
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(invalid("delta", "must be finite and > 0"));
    }
    Ok(())
}

/// `(1/((ω + iδ) - ε_k))ⁿ`, the transform of `n` chained free propagators.
pub fn ft_free_chain(omega: f64, eps_k: f64, delta: f64, n: u64) -> Result<PolarAmplitude> {
    check_delta(delta)?;
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let base = Complex64::new(omega - eps_k, delta).inv();
    Ok(PolarAmplitude::from_complex(base).powu(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectralKind {
    /// `|ω - ε_k|` within the pole tolerance.
    Pole,
    /// `|ω - ε_k| < 1`: powers of the propagator grow with `n`.
    InsideCut,
    /// `|ω - ε_k| = 1` up to [`CUT_EDGE_TOLERANCE`].
    Boundary,
    /// `|ω - ε_k| > 1`: powers decay.
    Outside,
}

impl SpectralKind {
    pub fn label(&self) -> &'static str {
        match self {
            SpectralKind::Pole => "pole",
            SpectralKind::InsideCut => "inside_cut",
            SpectralKind::Boundary => "boundary",
            SpectralKind::Outside => "outside",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralClassification {
    pub omega: f64,
    pub kind: SpectralKind,
    /// `-ln|ω - ε_k|`, with the distance floored at the pole tolerance.
    pub growth_exponent: f64,
}

impl SpectralClassification {
    /// True for every point of the open interval `|ω - ε_k| < 1`, the pole
    /// included.
    pub fn is_inside_cut(&self) -> bool {
        matches!(self.kind, SpectralKind::Pole | SpectralKind::InsideCut)
    }
}

/// Classifies `ω` relative to the cut `|ω - ε_k| < 1`. No potential enters.
pub fn classify_cut(omega: f64, eps_k: f64, tolerance: f64) -> Result<SpectralClassification> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(invalid("tolerance", "must be finite and > 0"));
    }
    if !(omega.is_finite() && eps_k.is_finite()) {
        return Err(invalid("omega", "omega and eps_k must be finite"));
    }
    let distance = (omega - eps_k).abs();
    let kind = if distance <= tolerance {
        SpectralKind::Pole
    } else if (distance - 1.0).abs() <= CUT_EDGE_TOLERANCE {
        SpectralKind::Boundary
    } else if distance < 1.0 {
        SpectralKind::InsideCut
    } else {
        SpectralKind::Outside
    };
    Ok(SpectralClassification {
        omega,
        kind,
        growth_exponent: -distance.max(tolerance).ln(),
    })
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn omega_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(invalid("steps", "an omega grid needs at least 2 points"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(invalid("omega range", "needs finite lo < hi"));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| lo + (hi - lo) * i as f64 / last).collect())
}

/// The Hartree pole `ε_k + V - iδ`.
pub fn hartree_pole(eps_k: f64, v: f64, delta: f64) -> Result<ComplexAmplitude> {
    check_delta(delta)?;
    Ok(Complex64::new(eps_k + v, -delta))
}

/// The once-performed bubble summed to all orders, `G₀/(1 - V G₀)` with
/// `G₀ = 1/((ω + iδ) - ε_k)`.
pub fn resummed_once_performed(omega: f64, eps_k: f64, v: f64, delta: f64) -> Complex64 {
    let g0 = Complex64::new(omega - eps_k, delta).inv();
    g0 / (1.0 - v * g0)
}

/// Locates the peak of `|G₀/(1 - V G₀)|` on `[ε_k - 2, ε_k + V + 2]` by
/// golden-section search and returns its real position.
pub fn hartree_peak_search(eps_k: f64, v: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let f = |w: f64| resummed_once_performed(w, eps_k, v, delta).norm();
    // Bracket around the best point of a scan at spacing δ/4 so a peak of
    // width δ cannot be stepped over.
    let (lo, hi) = (eps_k - 2.0, eps_k + v + 2.0);
    let samples = (((hi - lo) / delta).ceil() as usize * 4).clamp(64, 10_000_000);
    let step = (hi - lo) / samples as f64;
    let best = (0..=samples)
        .map(|k| lo + step * k as f64)
        .max_by(|a, b| f(*a).total_cmp(&f(*b)))
        .unwrap_or(lo);
    let (mut a, mut b) = ((best - step).max(lo), (best + step).min(hi));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    while (b - a).abs() > 1e-13 * (1.0 + best.abs()) {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - ratio * (b - a);
        d = a + ratio * (b - a);
    }
    Ok(0.5 * (a + b))
}

/// Transform of the Zeno-limit open-oyster amplitude, `1/(ω + iδ)`, with its
/// single pole at `ω = -iδ`.
pub fn ft_open_oyster_zeno(omega: f64, delta: f64) -> Result<ComplexAmplitude> {
    check_delta(delta)?;
    Ok(Complex64::new(omega, delta).inv())
}

/// Pole of the Zeno-limit open-oyster transform.
pub fn open_oyster_zeno_pole(delta: f64) -> Result<ComplexAmplitude> {
    check_delta(delta)?;
    Ok(Complex64::new(0.0, -delta))
}

/// Pole of the conventional open oyster with the physical interaction `V`:
/// `ε_k + V - iδ`, the same as the Hartree pole.
pub fn conventional_open_oyster_pole(eps_k: f64, v: f64, delta: f64) -> Result<ComplexAmplitude> {
    hartree_pole(eps_k, v, delta)
}

/// Lifetime `-1/Im(pole)` of a quasi-particle pole.
pub fn lifetime(pole: ComplexAmplitude) -> Result<f64> {
    if pole.im.is_nan() || pole.im >= 0.0 {
        return Err(invalid("pole", "needs a negative imaginary part"));
    }
    Ok(-1.0 / pole.im)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub points: Vec<SpectralClassification>,
    pub hartree_pole: ComplexAmplitude,
    pub conventional_pole: ComplexAmplitude,
    pub open_oyster_pole: ComplexAmplitude,
    pub lifetime: f64,
}

pub fn spectrum_report(
    omegas: &[f64],
    eps_k: f64,
    v: f64,
    delta: f64,
    tolerance: f64,
) -> Result<SpectrumReport> {
    let points = omegas
        .par_iter()
        .map(|&w| classify_cut(w, eps_k, tolerance))
        .collect::<Result<Vec<_>>>()?;
    let hartree = hartree_pole(eps_k, v, delta)?;
    Ok(SpectrumReport {
        points,
        hartree_pole: hartree,
        conventional_pole: conventional_open_oyster_pole(eps_k, v, delta)?,
        open_oyster_pole: open_oyster_zeno_pole(delta)?,
        lifetime: lifetime(hartree)?,
    })
}
