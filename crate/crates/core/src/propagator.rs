//! Scalar amplitudes and the two primitive propagator values.
//!
//! Everything works in natural units (hbar = 1): energies and times are plain
//! reals and every amplitude is a dimensionless complex number.

use num_complex::Complex64;

use crate::error::{Result, ZenoError};

/// A probability amplitude. Operations never hand out NaN or infinite parts;
/// overflow is reported through [`ZenoError::Overflow`].
pub type ComplexAmplitude = Complex64;

/// Magnitude above which a coefficient or amplitude counts as overflowed.
pub const OVERFLOW_LIMIT: f64 = 1e300;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Rejects non-finite values and magnitudes above [`OVERFLOW_LIMIT`].
pub fn ensure_finite(value: Complex64, context: &'static str) -> Result<Complex64> {
    let magnitude = value.norm();
    if !value.re.is_finite() || !value.im.is_finite() || magnitude > OVERFLOW_LIMIT {
        return Err(ZenoError::Overflow {
            context,
            magnitude,
            limit: OVERFLOW_LIMIT,
        });
    }
    Ok(value)
}

/// `(-i)^n` without rounding: cycles through `1, -i, -1, i`.
pub fn minus_i_pow(n: u64) -> Complex64 {
    match n % 4 {
        0 => ONE,
        1 => -I,
        2 => -ONE,
        _ => I,
    }
}

/// `e^{-i x}`.
pub fn phase(x: f64) -> Complex64 {
    Complex64::new(x.cos(), -x.sin())
}

/// Free (bare) propagator `-i Θ(dt) e^{-i ε dt}`.
///
/// The step function vanishes for `dt <= 0`, so the equal-time value is 0
/// (some textbooks use 1/2 there).
pub fn free_propagator(epsilon: f64, dt: f64) -> ComplexAmplitude {
    if dt > 0.0 {
        -I * phase(epsilon * dt)
    } else {
        ZERO
    }
}

/// Equal-time hole correlator `G⁻`, normalized so that `(-i) G⁻ = 1`.
///
/// With that normalization `i G⁻ = -1` as well, so both conventions agree on
/// `G⁻ = i`.
pub fn point_correlator() -> ComplexAmplitude {
    I
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn free_propagator_values() {
        assert_eq!(free_propagator(0.0, 1.0), -I);
        assert_eq!(free_propagator(5.0, 0.0), ZERO);
        assert_eq!(free_propagator(5.0, -1.0), ZERO);
        assert!(close(free_propagator(PI, 1.0), I, 1e-15));
    }

    #[test]
    fn free_propagator_unit_modulus() {
        for &(e, dt) in &[(0.3, 0.1), (-7.0, 3.0), (100.0, 1e-3), (1e3, 17.0)] {
            assert!((free_propagator(e, dt).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn point_correlator_normalization() {
        let g = point_correlator();
        assert_eq!(I * g, -ONE);
        assert_eq!(-I * g, ONE);
    }

    #[test]
    fn minus_i_powers() {
        let mut acc = ONE;
        for n in 0..12 {
            assert!(close(minus_i_pow(n), acc, 0.0));
            acc *= -I;
        }
    }

    #[test]
    fn overflow_is_an_error() {
        assert!(ensure_finite(Complex64::new(1e301, 0.0), "t").is_err());
        assert!(ensure_finite(Complex64::new(f64::NAN, 0.0), "t").is_err());
        assert!(ensure_finite(Complex64::new(1.0, -2.0), "t").is_ok());
    }
}
