//! Coefficient systems for the interference-bearing segments.
//!
//! `CoeffsA` closes the 5-equation t-segment (TWRC A–R₁–R₂ beside a unicast
//! R₄↔B link); `CoeffsB` closes the symmetric s-segment (two TWRCs A–R₁–R₂
//! and R₄–R₅–B sharing the slot pair).

use crate::error::{Error, Result};
use crate::scalar::{lit, sinr_target, to_f64, Scalar};

/// Dimensionless functions of (R, α) closing the t-segment system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffsA<T> {
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub a4: T,
    pub a5: T,
    pub a6: T,
    pub a7: T,
    pub a8: T,
}

/// Dimensionless functions of (R, α) closing the s-segment system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffsB<T> {
    pub b1: T,
    pub b2: T,
    pub b3: T,
    pub b4: T,
    pub b5: T,
    pub b6: T,
    pub b7: T,
}

fn check_inputs<T: Scalar>(rate: T, alpha: T) -> Result<()> {
    if !(rate > T::zero()) {
        return Err(Error::ZeroRate);
    }
    if !(alpha > T::zero()) {
        return Err(Error::domain("path-loss exponent must be positive"));
    }
    Ok(())
}

fn infeasible<T: Scalar>(what: &'static str, rate: T, reason: String) -> Error {
    Error::Infeasible {
        what,
        rate: to_f64(rate),
        reason,
    }
}

/// Gain ratio of an interferer `n` hops away, `n^(−α)`.
#[inline]
fn hop_ratio<T: Scalar>(n: f64, alpha: T) -> T {
    lit::<T>(n).powf(-alpha)
}

/// t-segment coefficients.
///
/// `a1`/`a2` weigh P_B in the A and R₂ equations respectively. In `a5`–`a7`
/// the A-side terms carry the 5-hop factor (A is five hops from B) and the
/// R₂-side terms the 3-hop factor.
pub fn coeffs_a<T: Scalar>(rate: T, alpha: T) -> Result<CoeffsA<T>> {
    check_inputs(rate, alpha)?;
    let one = T::one();
    let two = lit::<T>(2.0);
    let q = sinr_target(rate);
    let p = two.powf(rate);
    let big_q = two * p - one;
    let c3 = lit::<T>(3.0).powf(alpha);
    let i3 = hop_ratio(3.0, alpha);
    let i5 = hop_ratio(5.0, alpha);
    let i9 = hop_ratio(9.0, alpha);
    let i27 = hop_ratio(27.0, alpha);
    let i45 = hop_ratio(45.0, alpha);

    let a1 = -q * q * i5 + p * q * i3 + c3;
    let a2 = p * q * i5 - q * q * i3 + c3;
    let a3 = q * q / big_q * (one - c3) * (two * i3 + (i45 + i27) * q) + q;
    let a4 = i9 * q * q + i3 * q;
    let a5 = q / big_q * (a1 * (i3 + i45 * q) + a2 * (i3 + i27 * q));

    let one_m_a5 = one - a5;
    if !(one_m_a5 > T::zero()) {
        return Err(infeasible(
            "t-segment",
            rate,
            format!("1 - a5 = {} <= 0", to_f64(one_m_a5)),
        ));
    }

    let side_a = one + q * i5;
    let side_r2 = one + q * i3;
    let pb_weight = c3 / q + one;
    let a6 = (a1 * a4 * side_a + a2 * a4 * side_r2) / (big_q * one_m_a5) + q - c3 + a3 / one_m_a5 * pb_weight;
    let a7 = q * (one - c3) / big_q * (two + q * (i3 + i5))
        + a1 * a3 * side_a / (one_m_a5 * big_q)
        + a2 * a3 * side_r2 / (one_m_a5 * big_q);
    let a8 = a4 / one_m_a5 * pb_weight;

    Ok(CoeffsA {
        a1,
        a2,
        a3,
        a4,
        a5,
        a6,
        a7,
        a8,
    })
}

/// s-segment coefficients.
pub fn coeffs_b<T: Scalar>(rate: T, alpha: T) -> Result<CoeffsB<T>> {
    check_inputs(rate, alpha)?;
    let one = T::one();
    let two = lit::<T>(2.0);
    let q = sinr_target(rate);
    let i3 = hop_ratio(3.0, alpha);
    let i5 = hop_ratio(5.0, alpha);
    let i15 = hop_ratio(15.0, alpha);
    let i25 = hop_ratio(25.0, alpha);

    let spread = q * (i3 - i5);
    let den1 = one - spread * (one + i5);
    if !(den1 > T::zero()) {
        return Err(infeasible(
            "s-segment",
            rate,
            format!("b1/b2 denominator = {} <= 0", to_f64(den1)),
        ));
    }
    let b1 = (one + spread * (one + i3)) / den1;
    let b2 = spread / den1;

    let den2 = one - q * (b1 * i5 * (two + i5) + i5 + i3 + i15);
    if !(den2 > T::zero()) {
        return Err(infeasible(
            "s-segment",
            rate,
            format!("b3/b4 denominator = {} <= 0", to_f64(den2)),
        ));
    }
    let b3 = ((two * i5 + i25) * b2 + i5 + one) * q / den2;
    let b4 = q / den2;

    let pa_lin = b1 * b3 + b2;
    let b5 = two * pa_lin * (one + i5) + two * b3 * (one + i3) + two;
    let b6 = two * (b1 + one) * b4;
    let b7 = two * pa_lin + two * b1 * b4 * (one + i5) + two * b3 + two * b4 * (one + i3);

    Ok(CoeffsB {
        b1,
        b2,
        b3,
        b4,
        b5,
        b6,
        b7,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn a4_positive() {
        assert!(coeffs_a(1.0, 2.5).is_ok());
        for &r in &[0.05, 1.0, 3.0, 5.0] {
            for &a in &[2.5, 4.0, 6.0] {
                if let Ok(c) = coeffs_a(r, a) {
                    assert!(c.a4 > 0.0);
                }
            }
        }
    }

    #[test]
    fn low_rate_limits() {
        let c = coeffs_a(1e-9, 4.0).unwrap();
        assert_relative_eq!(c.a1, 81.0, max_relative = 1e-6);
        assert_relative_eq!(c.a2, 81.0, max_relative = 1e-6);
        let b = coeffs_b(1e-9_f64, 4.0).unwrap();
        assert_relative_eq!(b.b1, 1.0, max_relative = 1e-6);
        assert!(b.b2.abs() < 1e-8);
    }

    #[test]
    fn b5_b6_positive_when_feasible() {
        for &r in &[0.1, 1.0, 2.5, 4.5, 5.4] {
            let b = coeffs_b(r, 4.0).unwrap();
            assert!(b.b5 > 0.0 && b.b6 > 0.0, "R = {r}");
        }
    }

    #[test]
    fn high_rate_is_infeasible() {
        let err = coeffs_a(6.5, 4.0).unwrap_err();
        assert!(err.is_infeasible());
        assert!(err.to_string().contains("a5"));
        assert!(coeffs_b(7.0, 4.0).unwrap_err().is_infeasible());
        assert_eq!(coeffs_a(0.0, 4.0), Err(Error::ZeroRate));
    }
}
