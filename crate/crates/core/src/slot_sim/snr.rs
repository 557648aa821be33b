use crate::error::{Error, Result};
use crate::metrics::{energy_efficiency_of, rate_for_be};
use crate::power_alloc::{allocate_segment, period, route_allocation, route_pattern, SegmentKind};
use crate::radio_model::{processing_energy, PhyConfig, RelayCount, RouteSpec};
use crate::scalar::{lit, sinr_target, Scalar};

/// Minimum t-segment energy when every interference term is dropped from
/// the decoding constraints. The relay still hears all uplink transmitters.
pub fn t_energy_snr<T: Scalar>(rate: T, h_sq: T, alpha: T, n0: T) -> T {
    let two = lit::<T>(2.0);
    let q = sinr_target(rate);
    let big_q = two * q + T::one();
    let i3 = lit::<T>(3.0).powf(-alpha);
    (lit::<T>(6.0) * q + two * (two * q * (big_q + q * i3)).sqrt()) * n0 / h_sq
}

/// Minimum s-segment energy with interference dropped, as [`t_energy_snr`].
pub fn s_energy_snr<T: Scalar>(rate: T, h_sq: T, alpha: T, n0: T) -> T {
    let two = lit::<T>(2.0);
    let q = sinr_target(rate);
    let i3 = lit::<T>(3.0).powf(-alpha);
    let i5 = lit::<T>(5.0).powf(-alpha);
    let lin = q * (lit::<T>(4.0) + i3 + i5);
    let root = (two * q * (T::one() + q * (two + i3 + i5))).sqrt();
    two * (lin + two * root) * n0 / h_sq
}

/// Route transmission energy per period under the SNR-only allocation.
pub fn route_energy_snr<T: Scalar>(spec: &RouteSpec<T>, cfg: &PhyConfig<T>) -> Result<T> {
    let h_sq = spec.hop_gain_sq(cfg.alpha);
    let (r, a, n) = (cfg.rate_r, cfg.alpha, cfg.noise_n0);
    route_pattern(spec.k).iter().try_fold(T::zero(), |acc, p| {
        let e = match p.kind {
            SegmentKind::T => t_energy_snr(r, h_sq, a, n),
            SegmentKind::S => s_energy_snr(r, h_sq, a, n),
            kind => allocate_segment(kind, r, h_sq, a, n)?.energy,
        };
        Ok(acc + e)
    })
}

fn ee_from_energy<T: Scalar>(k: RelayCount, rate: T, energy: T, cfg: &PhyConfig<T>) -> T {
    let per = lit::<T>(period(k) as f64);
    let tx = energy / per;
    let proc = processing_energy(tx, k, cfg);
    lit::<T>(2.0) * rate / (per * (tx + proc.per_cu))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrErrorPoint<T> {
    pub be: T,
    pub rate: T,
    /// `None` when the rate is above the SINR rate limit.
    pub ee_sinr: Option<T>,
    pub ee_snr: T,
    /// |ξ_SNR − ξ_SINR| / ξ_SINR in percent.
    pub error_pct: Option<T>,
}

/// EE error made by ignoring interference, over a grid of bandwidth efficiencies.
pub fn snr_vs_sinr_error<T: Scalar>(
    spec: &RouteSpec<T>,
    cfg: &PhyConfig<T>,
    be_grid: &[T],
) -> Result<Vec<SnrErrorPoint<T>>> {
    if spec.k.get() < 4 {
        return Err(Error::domain("SNR/SINR comparison needs k >= 4"));
    }
    cfg.validate()?;
    be_grid
        .iter()
        .map(|&be| {
            let rate = rate_for_be(spec.k, be);
            let c = cfg.with_rate(rate);
            let ee_snr = ee_from_energy(spec.k, rate, route_energy_snr(spec, &c)?, &c);
            let ee_sinr = match route_allocation(spec, &c) {
                Ok(a) => Some(energy_efficiency_of(&a, &c)),
                Err(e) if e.is_infeasible() => None,
                Err(e) => return Err(e),
            };
            let error_pct = ee_sinr.map(|s| (ee_snr - s).abs() / s * lit(100.0));
            Ok(SnrErrorPoint {
                be,
                rate,
                ee_sinr,
                ee_snr,
                error_pct,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn snr_energy_below_sinr_energy() {
        for r in [0.5, 1.0, 2.0, 4.0] {
            let t = allocate_segment(SegmentKind::T, r, 1.0, 4.0, 1.0).unwrap().energy;
            let s = allocate_segment(SegmentKind::S, r, 1.0, 4.0, 1.0).unwrap().energy;
            assert!(t_energy_snr(r, 1.0, 4.0, 1.0) < t);
            assert!(s_energy_snr(r, 1.0, 4.0, 1.0) < s);
        }
    }

    #[test]
    fn snr_energy_is_stationary_minimum() {
        // t-segment without interference: brute force over the amplification.
        let (r, a) = (1.7_f64, 4.0_f64);
        let q = 2f64.powf(r) - 1.0;
        let i3 = 3f64.powf(-a);
        let energy = |x: f64| {
            let p_end = q * (x + 1.0) / x;
            let p_uni = q;
            let p_r = x * (2.0 * p_end + i3 * p_uni + 1.0);
            2.0 * p_end + 2.0 * p_uni + p_r
        };
        let best = (1..200_000)
            .map(|i| energy(i as f64 * 1e-4))
            .fold(f64::INFINITY, f64::min);
        assert_relative_eq!(t_energy_snr(r, 1.0, a, 1.0), best, max_relative = 1e-6);
    }

    #[test]
    fn error_vanishes_at_low_rate() {
        let cfg = PhyConfig::default().without_processing();
        let spec = RouteSpec::new(1000.0, RelayCount::new(4).unwrap()).unwrap();
        let pts = snr_vs_sinr_error(&spec, &cfg, &[0.05, 1.2]).unwrap();
        assert!(pts[0].error_pct.unwrap() < 0.1);
        assert!(pts[1].error_pct.unwrap() > pts[0].error_pct.unwrap());
    }

    #[test]
    fn infeasible_rates_are_flagged() {
        let cfg = PhyConfig::default().without_processing();
        let spec = RouteSpec::new(1000.0, RelayCount::new(4).unwrap()).unwrap();
        let pts = snr_vs_sinr_error(&spec, &cfg, &[3.5]).unwrap();
        assert_eq!(pts[0].ee_sinr, None);
        assert!(pts[0].ee_snr > 0.0);
    }
}
