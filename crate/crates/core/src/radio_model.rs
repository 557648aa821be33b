//! Physical-layer constants, large-scale path loss and the processing-energy
//! model.
//!
//! All energies are linear J per channel use, with one channel use occupying
//! 1 s·Hz. dBm and mJ only appear at the configuration boundary.

use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Largest relay count a route may carry.
pub const MAX_RELAYS: usize = 6;

/// Number of relays on a route, `0..=6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelayCount(u8);

impl RelayCount {
    pub fn new(k: usize) -> Result<Self> {
        if k > MAX_RELAYS {
            return Err(Error::UnsupportedK(k));
        }
        Ok(RelayCount(k as u8))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Nodes on the route including both end nodes.
    #[inline]
    pub fn nodes(self) -> usize {
        self.get() + 2
    }

    #[inline]
    pub fn hops(self) -> usize {
        self.get() + 1
    }

    /// Every supported relay count in ascending order.
    pub fn all() -> impl Iterator<Item = RelayCount> {
        (0..=MAX_RELAYS as u8).map(RelayCount)
    }
}

impl TryFrom<usize> for RelayCount {
    type Error = Error;

    fn try_from(k: usize) -> Result<Self> {
        RelayCount::new(k)
    }
}

impl fmt::Display for RelayCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Physical-layer constants shared by every route in an analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhyConfig<T> {
    /// Path-loss exponent α.
    pub alpha: T,
    /// Noise N₀ in J/channel use.
    pub noise_n0: T,
    /// Power-amplifier drain efficiency η in (0, 1].
    pub eta: T,
    /// Baseline circuit power P₀,₀ in J/channel use.
    pub p00: T,
    /// Common per-link rate R in bit/channel use.
    pub rate_r: T,
}

impl<T: Scalar> PhyConfig<T> {
    pub fn new(alpha: T, noise_n0: T, eta: T, p00: T, rate_r: T) -> Result<Self> {
        let cfg = PhyConfig {
            alpha,
            noise_n0,
            eta,
            p00,
            rate_r,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.alpha, self.noise_n0, self.eta, self.p00, self.rate_r]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("physical constants must be finite"));
        }
        if self.alpha <= T::zero() {
            return Err(Error::domain("path-loss exponent must be positive"));
        }
        if self.noise_n0 <= T::zero() {
            return Err(Error::domain("noise power must be positive"));
        }
        if self.eta <= T::zero() || self.eta > T::one() {
            return Err(Error::domain("drain efficiency must lie in (0, 1]"));
        }
        if self.p00 < T::zero() {
            return Err(Error::domain("circuit power must be non-negative"));
        }
        if self.rate_r < T::zero() {
            return Err(Error::domain("rate must be non-negative"));
        }
        Ok(())
    }

    pub fn with_rate(self, rate_r: T) -> Self {
        PhyConfig { rate_r, ..self }
    }

    pub fn with_alpha(self, alpha: T) -> Self {
        PhyConfig { alpha, ..self }
    }

    pub fn with_eta(self, eta: T) -> Self {
        PhyConfig { eta, ..self }
    }

    pub fn with_p00(self, p00: T) -> Self {
        PhyConfig { p00, ..self }
    }

    /// Ideal amplifier and no circuit power: only radiated energy counts.
    pub fn without_processing(self) -> Self {
        PhyConfig {
            eta: T::one(),
            p00: T::zero(),
            ..self
        }
    }
}

impl<T: Scalar> Default for PhyConfig<T> {
    /// α = 4, N₀ = −174 dBm/Hz, η = 0.75, P₀,₀ = 5e-7 mJ/cu, R = 1.
    fn default() -> Self {
        PhyConfig {
            alpha: lit(4.0),
            noise_n0: noise_from_dbm_per_hz(lit(-174.0)),
            eta: lit(0.75),
            p00: mj_to_joule(lit(5e-7)),
            rate_r: T::one(),
        }
    }
}

/// One candidate route: total length and equispaced relay count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteSpec<T> {
    pub d_route: T,
    pub k: RelayCount,
}

impl<T: Scalar> RouteSpec<T> {
    pub fn new(d_route: T, k: RelayCount) -> Result<Self> {
        if !(d_route.is_finite() && d_route > T::zero()) {
            return Err(Error::domain("route length must be positive and finite"));
        }
        Ok(RouteSpec { d_route, k })
    }

    pub fn hop_distance(&self) -> T {
        self.d_route / lit(self.k.hops() as f64)
    }

    /// Gain-squared of one hop, h² = d_hop^(−α).
    pub fn hop_gain_sq(&self, alpha: T) -> T {
        self.hop_distance().powf(-alpha)
    }
}

/// Average processing energy per channel use and its two parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessingEnergy<T> {
    pub per_cu: T,
    pub circuit_part: T,
    pub pa_part: T,
}

/// Large-scale path gain squared, `d^(−α)`.
pub fn path_gain_sq<T: Scalar>(d: T, alpha: T) -> Result<T> {
    if !(d > T::zero()) {
        return Err(Error::domain("distance must be positive"));
    }
    if !(alpha > T::zero()) {
        return Err(Error::domain("path-loss exponent must be positive"));
    }
    Ok(d.powf(-alpha))
}

/// Noise spectral density in dBm/Hz to linear J per channel use.
pub fn noise_from_dbm_per_hz<T: Scalar>(n0_dbm: T) -> T {
    lit::<T>(10.0).powf((n0_dbm - lit(30.0)) / lit(10.0))
}

pub fn mj_to_joule<T: Scalar>(mj: T) -> T {
    mj * lit(1e-3)
}

/// P₀,ₖ/P₀,₀, half the average number of active nodes per channel use.
pub fn circuit_multiplier<T: Scalar>(k: RelayCount) -> T {
    const MULTIPLIERS: [f64; MAX_RELAYS + 1] = [1.0, 1.5, 1.25, 1.75, 2.0, 2.25, 2.75];
    lit(MULTIPLIERS[k.get()])
}

/// Circuit power P₀,ₖ of a route with `k` relays.
pub fn circuit_power<T: Scalar>(k: RelayCount, p00: T) -> T {
    p00 * circuit_multiplier(k)
}

/// Splits processing energy into the PA overhead and the fixed circuit part.
pub fn processing_energy<T: Scalar>(
    transmission_energy_per_cu: T,
    k: RelayCount,
    cfg: &PhyConfig<T>,
) -> ProcessingEnergy<T> {
    let pa_part = (T::one() / cfg.eta - T::one()) * transmission_energy_per_cu;
    let circuit_part = circuit_power(k, cfg.p00);
    ProcessingEnergy {
        per_cu: pa_part + circuit_part,
        circuit_part,
        pa_part,
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    alpha: Option<f64>,
    n0_dbm_per_hz: Option<f64>,
    eta: Option<f64>,
    p00_mj_per_cu: Option<f64>,
    rate: Option<f64>,
}

/// Parses a `key = value` configuration. Missing keys keep their defaults.
///
/// Recognised keys: `alpha`, `n0_dbm_per_hz`, `eta`, `p00_mj_per_cu`, `rate`.
pub fn parse_config(text: &str) -> Result<PhyConfig<f64>> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let defaults = PhyConfig::<f64>::default();
    let cfg = PhyConfig {
        alpha: file.alpha.unwrap_or(defaults.alpha),
        noise_n0: file
            .n0_dbm_per_hz
            .map(noise_from_dbm_per_hz)
            .unwrap_or(defaults.noise_n0),
        eta: file.eta.unwrap_or(defaults.eta),
        p00: file.p00_mj_per_cu.map(mj_to_joule).unwrap_or(defaults.p00),
        rate_r: file.rate.unwrap_or(defaults.rate_r),
    };
    cfg.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k(n: usize) -> RelayCount {
        RelayCount::new(n).unwrap()
    }

    #[test]
    fn path_gain_examples() {
        assert_eq!(path_gain_sq(1.0, 4.0).unwrap(), 1.0);
        assert_relative_eq!(path_gain_sq(20.0, 2.0).unwrap(), 2.5e-3, max_relative = 1e-15);
        // 500^-4 = 1 / 6.25e10
        assert_relative_eq!(path_gain_sq(500.0, 4.0).unwrap(), 1.6e-11, max_relative = 1e-14);
        assert!(path_gain_sq(0.0, 4.0).is_err());
        assert!(path_gain_sq(-3.0, 4.0).is_err());
    }

    #[test]
    fn gain_is_square_of_half_exponent() {
        for &d in &[0.5, 2.0, 37.0, 1000.0] {
            for &a in &[1.0, 2.5, 4.0] {
                let full = path_gain_sq(d, a).unwrap();
                let half = path_gain_sq(d, a / 2.0).unwrap();
                assert_relative_eq!(full, half * half, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn noise_conversion() {
        assert_relative_eq!(
            noise_from_dbm_per_hz(-174.0),
            3.981_071_705_534_97e-21,
            max_relative = 1e-12
        );
        assert_relative_eq!(noise_from_dbm_per_hz(-30.0), 1e-6, max_relative = 1e-12);
        assert_relative_eq!(noise_from_dbm_per_hz(0.0), 1e-3, max_relative = 1e-12);
    }

    #[test]
    fn circuit_multipliers() {
        let x = 2.0e-10;
        let expected = [1.0, 1.5, 1.25, 1.75, 2.0, 2.25, 2.75];
        for (n, m) in expected.iter().enumerate() {
            assert_eq!(circuit_power(k(n), x), m * x);
        }
        assert_eq!(RelayCount::new(7), Err(Error::UnsupportedK(7)));
    }

    #[test]
    fn processing_energy_split() {
        let base = PhyConfig::<f64>::default();
        let zero = processing_energy(0.0, k(0), &base.with_eta(1.0).with_p00(0.0));
        assert_eq!(zero.per_cu, 0.0);

        let pe = processing_energy(3.0, k(0), &base.with_p00(0.0));
        assert_relative_eq!(pe.pa_part, 1.0, max_relative = 1e-15);

        let pe = processing_energy(1e-9, k(2), &base.with_p00(5e-10));
        assert_relative_eq!(pe.pa_part, 1e-9 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(pe.circuit_part, 6.25e-10, max_relative = 1e-15);
        assert_relative_eq!(pe.per_cu, pe.pa_part + pe.circuit_part);

        let ideal = processing_energy(7.0, k(5), &base.with_eta(1.0));
        assert_eq!(ideal.pa_part, 0.0);
    }

    #[test]
    fn config_validation() {
        let d = PhyConfig::<f64>::default();
        assert!(d.validate().is_ok());
        assert!(d.with_eta(1.2).validate().is_err());
        assert!(d.with_eta(0.0).validate().is_err());
        assert!(d.with_alpha(-1.0).validate().is_err());
        assert!(d.with_p00(-1.0).validate().is_err());
        assert_relative_eq!(d.p00, 5e-10);
    }

    #[test]
    fn config_file_round_trip() {
        let cfg = parse_config("alpha = 3\neta = 0.5\np00_mj_per_cu = 5e-6\n").unwrap();
        assert_eq!(cfg.alpha, 3.0);
        assert_eq!(cfg.eta, 0.5);
        assert_relative_eq!(cfg.p00, 5e-9);
        assert_relative_eq!(cfg.noise_n0, noise_from_dbm_per_hz(-174.0));

        let empty = parse_config("").unwrap();
        assert_eq!(empty, PhyConfig::default());

        assert!(matches!(parse_config("beta = 1"), Err(Error::Config(_))));
        assert!(matches!(parse_config("eta = 2.0"), Err(Error::Config(_))));
    }

    #[test]
    fn route_hops() {
        let r = RouteSpec::new(1000.0, k(3)).unwrap();
        assert_eq!(r.hop_distance(), 250.0);
        assert_relative_eq!(r.hop_gain_sq(4.0), 250f64.powi(-4));
        assert!(RouteSpec::new(0.0, k(1)).is_err());
        assert!(RouteSpec::new(f64::NAN, k(1)).is_err());
    }
}
