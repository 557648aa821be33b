//! Three-node AF two-way relay channel: energy function, optimal
//! amplification, relay placement along the A–B segment and the midpoint
//! threshold on the path-loss exponent.

use crate::error::{Error, Result};
use crate::radio_model::{circuit_power, PhyConfig, RelayCount};
use crate::scalar::{lit, sinr_target, Scalar};

/// Band around the threshold inside which the midpoint is reported as
/// [`MidpointKind::Boundary`].
pub const BOUNDARY_BAND: f64 = 0.01;

/// Endpoint clamp for the placement angle.
pub const THETA_EPS: f64 = 1e-6;

/// What the relay-in-the-middle configuration is for a given (R, α).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MidpointKind {
    LocalMin,
    LocalMax,
    Boundary,
}

/// Energy function evaluated at a given amplification and pair of gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyPoint<T> {
    pub x: T,
    pub h1_sq: T,
    pub h2_sq: T,
    pub f_value: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementResult<T> {
    pub theta: T,
    /// d₁/d, equal to cos²θ.
    pub relay_pos_fraction: T,
    pub f_value: T,
    pub classification: MidpointKind,
}

/// Direct transmission against a midpoint relay over the same distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectComparison<T> {
    pub rate: T,
    pub direct_energy: T,
    pub twrc_energy: T,
}

impl<T: Scalar> DirectComparison<T> {
    pub fn twrc_wins(&self) -> bool {
        self.twrc_energy < self.direct_energy
    }

    /// Both schemes deliver 2R bits over the two slots.
    pub fn direct_ee(&self) -> T {
        lit::<T>(2.0) * self.rate / self.direct_energy
    }

    pub fn twrc_ee(&self) -> T {
        lit::<T>(2.0) * self.rate / self.twrc_energy
    }
}

fn check_gains<T: Scalar>(h1_sq: T, h2_sq: T) -> Result<()> {
    if !(h1_sq > T::zero() && h2_sq > T::zero()) {
        return Err(Error::domain("channel gains must be positive"));
    }
    Ok(())
}

/// Total energy over the two TWRC slots, one channel use each.
pub fn energy_function<T: Scalar>(rate: T, h1_sq: T, h2_sq: T, x: T, cfg: &PhyConfig<T>) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::domain("amplification |β|² must be positive"));
    }
    check_gains(h1_sq, h2_sq)?;
    let two = lit::<T>(2.0);
    let q = sinr_target(rate);
    let body = two * q * (T::one() + h1_sq * x) * (T::one() + h2_sq * x) / (h1_sq * h2_sq * x) + x;
    Ok(cfg.noise_n0 / cfg.eta * body + two * p01(cfg))
}

fn p01<T: Scalar>(cfg: &PhyConfig<T>) -> T {
    circuit_power(RelayCount::new(1).expect("k=1 valid"), cfg.p00)
}

/// Stationary amplification `x₀` of the energy function.
pub fn optimal_amplification<T: Scalar>(rate: T, h1_sq: T, h2_sq: T) -> Result<T> {
    if !(rate > T::zero()) {
        return Err(Error::ZeroRate);
    }
    check_gains(h1_sq, h2_sq)?;
    let two = lit::<T>(2.0);
    let q = sinr_target(rate);
    let big_q = two.powf(rate + T::one()) - T::one();
    Ok((two * q / (big_q * h1_sq * h2_sq)).sqrt())
}

/// The `(a, b)` pair of the reduced energy function.
pub fn ab_coefficients<T: Scalar>(rate: T, n0: T) -> (T, T) {
    let two = lit::<T>(2.0);
    let p = two.powf(rate + T::one());
    let a = two * n0 * ((p - T::one()) * (p - two)).sqrt();
    let b = n0 * (p - two);
    (a, b)
}

/// Energy function with the amplification already at its optimum.
pub fn reduced_energy<T: Scalar>(rate: T, h1_sq: T, h2_sq: T, cfg: &PhyConfig<T>) -> Result<T> {
    check_gains(h1_sq, h2_sq)?;
    let (a, b) = ab_coefficients(rate, cfg.noise_n0);
    let h1 = h1_sq.sqrt();
    let h2 = h2_sq.sqrt();
    Ok((a * h1 * h2 + b * (h1_sq + h2_sq)) / (cfg.eta * h1_sq * h2_sq) + lit::<T>(2.0) * p01(cfg))
}

/// Optimal-amplification operating point for the given gains.
pub fn energy_point<T: Scalar>(rate: T, h1_sq: T, h2_sq: T, cfg: &PhyConfig<T>) -> Result<EnergyPoint<T>> {
    let x = optimal_amplification(rate, h1_sq, h2_sq)?;
    let f_value = energy_function(rate, h1_sq, h2_sq, x, cfg)?;
    Ok(EnergyPoint {
        x,
        h1_sq,
        h2_sq,
        f_value,
    })
}

/// Path-loss exponent above which the midpoint is a local minimum.
pub fn midpoint_threshold<T: Scalar>(rate: T) -> Result<T> {
    if !(rate > T::zero()) {
        return Err(Error::ZeroRate);
    }
    let two = lit::<T>(2.0);
    let p = two.powf(rate + T::one());
    Ok(T::one() + ((p - T::one()) / (p - two)).sqrt())
}

pub fn classify_midpoint<T: Scalar>(rate: T, alpha: T) -> Result<MidpointKind> {
    let threshold = midpoint_threshold(rate)?;
    let gap = alpha - threshold;
    Ok(if gap.abs() <= lit(BOUNDARY_BAND) {
        MidpointKind::Boundary
    } else if gap > T::zero() {
        MidpointKind::LocalMin
    } else {
        MidpointKind::LocalMax
    })
}

/// Energy with the relay on the A–B line at angle θ, d₁ = d cos²θ.
pub fn placement_energy<T: Scalar>(
    rate: T,
    theta: T,
    d: T,
    cfg: &PhyConfig<T>,
) -> Result<PlacementResult<T>> {
    if !(d > T::zero()) {
        return Err(Error::domain("A–B distance must be positive"));
    }
    let eps = lit::<T>(THETA_EPS);
    let theta = theta.max(eps).min(T::FRAC_PI_2() - eps);
    let alpha = cfg.alpha;
    let (a, b) = ab_coefficients(rate, cfg.noise_n0);
    let (s, c) = theta.sin_cos();
    let d_a = d.powf(alpha);
    let two = lit::<T>(2.0);
    let f = (a * d_a * (c * s).powf(alpha) + b * d_a * (s.powf(two * alpha) + c.powf(two * alpha))) / cfg.eta
        + two * p01(cfg);
    Ok(PlacementResult {
        theta,
        relay_pos_fraction: c * c,
        f_value: f,
        classification: classify_midpoint(rate, alpha)?,
    })
}

/// Placement energy at relay position `d₁/d = fraction`.
pub fn placement_at_fraction<T: Scalar>(
    rate: T,
    fraction: T,
    d: T,
    cfg: &PhyConfig<T>,
) -> Result<PlacementResult<T>> {
    if !(fraction > T::zero() && fraction < T::one()) {
        return Err(Error::domain("relay position fraction must lie in (0, 1)"));
    }
    placement_energy(rate, fraction.sqrt().acos(), d, cfg)
}

/// `n` interior positions spaced uniformly over (0, 1).
pub fn placement_profile<T: Scalar>(
    rate: T,
    d: T,
    cfg: &PhyConfig<T>,
    n: usize,
) -> Result<Vec<PlacementResult<T>>> {
    let step = T::one() / lit((n + 1) as f64);
    (1..=n)
        .map(|i| placement_at_fraction(rate, step * lit(i as f64), d, cfg))
        .collect()
}

/// Energy of direct A–B transmission against a midpoint relay.
pub fn direct_vs_twrc<T: Scalar>(rate: T, d: T, cfg: &PhyConfig<T>) -> Result<DirectComparison<T>> {
    if !(d > T::zero()) {
        return Err(Error::domain("A–B distance must be positive"));
    }
    let two = lit::<T>(2.0);
    let q = sinr_target(rate);
    let p00 = circuit_power(RelayCount::new(0).expect("k=0 valid"), cfg.p00);
    let direct = two * cfg.noise_n0 * q * d.powf(cfg.alpha) / cfg.eta + two * p00;
    let (a, b) = ab_coefficients(rate, cfg.noise_n0);
    let twrc = (a + two * b) * (d / two).powf(cfg.alpha) / cfg.eta + two * p01(cfg);
    Ok(DirectComparison {
        rate,
        direct_energy: direct,
        twrc_energy: twrc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_cfg() -> PhyConfig<f64> {
        PhyConfig {
            alpha: 4.0,
            noise_n0: 1.0,
            eta: 1.0,
            p00: 0.0,
            rate_r: 1.0,
        }
    }

    #[test]
    fn energy_function_unit_case() {
        let cfg = unit_cfg();
        assert_relative_eq!(energy_function(1.0, 1.0, 1.0, 1.0, &cfg).unwrap(), 9.0);
        let f1 = energy_function(1.3, 0.2, 3.0, 0.7, &cfg).unwrap();
        let f2 = energy_function(1.3, 3.0, 0.2, 0.7, &cfg).unwrap();
        assert_relative_eq!(f1, f2, max_relative = 1e-15);
        assert!(energy_function(1.0, 1.0, 1.0, 0.0, &cfg).is_err());
    }

    #[test]
    fn energy_floor_includes_circuit_part() {
        let cfg = unit_cfg().with_p00(2.0).with_eta(0.6);
        let pt = energy_point(0.8, 0.3, 0.5, &cfg).unwrap();
        assert!(pt.f_value >= 2.0 * 1.5 * 2.0);
    }

    #[test]
    fn optimal_amplification_examples() {
        assert_relative_eq!(
            optimal_amplification(1.0, 1.0, 1.0).unwrap(),
            (2.0f64 / 3.0).sqrt(),
            max_relative = 1e-15
        );
        let base = optimal_amplification(2.0, 0.4, 0.9).unwrap();
        let scaled = optimal_amplification(2.0, 0.4 * 4.0, 0.9).unwrap();
        assert_relative_eq!(scaled, base / 2.0, max_relative = 1e-14);
        assert_eq!(optimal_amplification(0.0, 1.0, 1.0), Err(Error::ZeroRate));
    }

    #[test]
    fn ab_examples() {
        let (a, b) = ab_coefficients(1.0, 1.0);
        assert_relative_eq!(a, 2.0 * 6f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(b, 2.0);
        let (a0, b0) = ab_coefficients(1e-12, 1.0);
        assert!(a0 < 1e-5 && b0 < 1e-10);
    }

    #[test]
    fn reduced_matches_full_at_optimum() {
        let cfg = unit_cfg().with_eta(0.75).with_p00(0.3);
        for &r in &[0.1, 0.7, 1.5, 3.0, 6.0] {
            for &(h1, h2) in &[(1.0, 1.0), (0.01, 0.5), (3.0, 1e-3)] {
                let full = energy_point(r, h1, h2, &cfg).unwrap().f_value;
                let reduced = reduced_energy(r, h1, h2, &cfg).unwrap();
                assert_relative_eq!(full, reduced, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn threshold_values() {
        assert!((midpoint_threshold(2.7_f64).unwrap() - 2.04).abs() < 0.01);
        assert!((midpoint_threshold(1.0_f64).unwrap() - 2.22).abs() < 0.01);
        assert!((midpoint_threshold(40.0_f64).unwrap() - 2.0).abs() < 1e-6);
        assert_eq!(midpoint_threshold(0.0), Err(Error::ZeroRate));
        // α = 4 crosses the threshold at R ≈ 0.087.
        let r = (2.125f64).log2() - 1.0;
        assert!((r - 0.087).abs() < 1e-3);
        assert_relative_eq!(midpoint_threshold(r).unwrap(), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn classification_bands() {
        assert_eq!(classify_midpoint(1.0, 2.4).unwrap(), MidpointKind::LocalMin);
        assert_eq!(classify_midpoint(1.0, 2.0).unwrap(), MidpointKind::LocalMax);
        assert_eq!(classify_midpoint(1.0, 2.225).unwrap(), MidpointKind::Boundary);
    }

    #[test]
    fn placement_symmetry_and_fraction() {
        let cfg = unit_cfg().with_alpha(2.3);
        for &t in &[0.1, 0.4, 0.7, 1.2] {
            let a = placement_energy(1.0, t, 20.0, &cfg).unwrap();
            let b = placement_energy(1.0, std::f64::consts::FRAC_PI_2 - t, 20.0, &cfg).unwrap();
            assert_relative_eq!(a.f_value, b.f_value, max_relative = 1e-12);
            assert_relative_eq!(a.relay_pos_fraction, t.cos().powi(2));
        }
        let clamped = placement_energy(1.0, 0.0, 20.0, &cfg).unwrap();
        assert_eq!(clamped.theta, THETA_EPS);
        assert!(placement_energy(1.0, 0.3, 0.0, &cfg).is_err());
    }

    #[test]
    fn placement_agrees_with_reduced_form() {
        let cfg = unit_cfg().with_alpha(3.1).with_eta(0.8);
        let d = 37.0;
        let p = placement_at_fraction(1.4, 0.3, d, &cfg).unwrap();
        let h1 = (0.3 * d).powf(-3.1);
        let h2 = (0.7 * d).powf(-3.1);
        assert_relative_eq!(
            p.f_value,
            reduced_energy(1.4, h1, h2, &cfg).unwrap(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn midpoint_is_grid_min_above_threshold() {
        let cfg = unit_cfg().with_alpha(2.4);
        let profile = placement_profile(1.0, 20.0, &cfg, 999).unwrap();
        let (imin, _) = profile
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.f_value.partial_cmp(&b.1.f_value).unwrap())
            .unwrap();
        assert_eq!(imin, 499);
        assert_relative_eq!(profile[imin].relay_pos_fraction, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn midpoint_is_local_max_below_threshold() {
        let cfg = unit_cfg().with_alpha(2.0);
        let profile = placement_profile(1.0, 20.0, &cfg, 999).unwrap();
        let mid = profile[499].f_value;
        assert!(profile[498].f_value < mid && profile[500].f_value < mid);
    }

    #[test]
    fn direct_against_twrc() {
        let cfg = unit_cfg().with_alpha(2.4);
        assert!(direct_vs_twrc(1.0, 20.0, &cfg).unwrap().twrc_wins());
        let cfg = unit_cfg().with_alpha(2.0);
        let cmp = direct_vs_twrc(1.0, 20.0, &cfg).unwrap();
        assert!(!cmp.twrc_wins());
        assert_relative_eq!(cmp.direct_energy, 800.0, max_relative = 1e-12);
        let low = direct_vs_twrc(1e-3, 1000.0, &unit_cfg()).unwrap();
        assert!(low.direct_ee() > low.twrc_ee());
    }
}
