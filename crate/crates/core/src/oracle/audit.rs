use rayon::prelude::*;

use crate::power_alloc::{alloc_k4_segment_t, alloc_k5_segment_s, rate_upper_limit, RateLimit};
use crate::radio_model::{PhyConfig, RelayCount};
use crate::twrc3::{optimal_amplification, placement_energy};

use super::brute::{brute_force_min_f, BruteForceGrid};
use super::report::OracleReport;
use super::search::finite_difference_stationarity;
use super::systems::{agree_k0, agree_k1, agree_k4, agree_k5, numeric_solve_k4, numeric_solve_k5};

pub const AUDIT_ALPHAS: [f64; 6] = [2.5, 3.0, 3.5, 4.0, 4.5, 5.0];

/// `(rate, α)` points strictly inside the k = 4 and k = 5 feasible region:
/// ten rates up to 0.9·R_sup for each α.
pub fn oracle_grid(alphas: &[f64], rates_per_alpha: usize) -> Vec<(f64, f64)> {
    let sup = |k: usize, a: f64| match rate_upper_limit(RelayCount::new(k).expect("k valid"), a) {
        RateLimit::Finite(r) => r,
        RateLimit::Unbounded => f64::INFINITY,
    };
    alphas
        .iter()
        .flat_map(|&a| {
            let top = 0.9 * sup(4, a).min(sup(5, a));
            (1..=rates_per_alpha).map(move |i| (top * i as f64 / rates_per_alpha as f64, a))
        })
        .collect()
}

/// Every oracle over the grid at hop gain `h_sq` and noise `n0`, plus the
/// stationarity and brute-force placement checks.
pub fn audit(grid: &[(f64, f64)], h_sq: f64, n0: f64) -> Vec<OracleReport> {
    let mut out: Vec<OracleReport> = grid
        .par_iter()
        .map(|&(rate, alpha)| {
            let mut r = agree_k0(rate, h_sq, n0);
            r.extend(agree_k1(rate, h_sq, n0));
            r.extend(agree_k4(rate, h_sq, alpha, n0));
            r.extend(agree_k5(rate, h_sq, alpha, n0));
            r.extend(stationarity(rate, alpha, h_sq, n0));
            r
        })
        .flatten()
        .collect();
    let cfg = PhyConfig::default().with_alpha(2.4).with_rate(1.0);
    if let Ok(b) = brute_force_min_f(1.0, 20.0, &cfg, &BruteForceGrid::default()) {
        out.push(b.report);
    }
    out
}

fn stationarity(rate: f64, alpha: f64, h_sq: f64, n0: f64) -> Vec<OracleReport> {
    let mut out = Vec::new();
    let cfg = PhyConfig::default().with_alpha(alpha).with_rate(rate);
    out.push(finite_difference_stationarity(
        "stationary-theta",
        |t| placement_energy(rate, t, 20.0, &cfg).map_or(f64::NAN, |p| p.f_value),
        std::f64::consts::FRAC_PI_4,
    ));
    if let Ok(x0) = optimal_amplification(rate, h_sq, h_sq) {
        out.push(finite_difference_stationarity(
            "stationary-x-k1",
            |x| {
                let q = 2f64.powf(rate) - 1.0;
                2.0 * q * (1.0 + h_sq * x).powi(2) / (h_sq * h_sq * x) + x
            },
            x0,
        ));
    }
    if let Ok(t) = alloc_k4_segment_t(rate, h_sq, alpha, n0) {
        out.push(finite_difference_stationarity(
            "stationary-beta-k4",
            |x| numeric_solve_k4(rate, h_sq, alpha, n0, x).map_or(f64::NAN, |s| s.energy),
            t.beta_sq[0].1,
        ));
    }
    if let Ok(s) = alloc_k5_segment_s(rate, h_sq, alpha, n0) {
        out.push(finite_difference_stationarity(
            "stationary-beta-k5",
            |x| numeric_solve_k5(rate, h_sq, alpha, n0, x).map_or(f64::NAN, |s| s.energy),
            s.beta_sq[0].1,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_large_enough() {
        assert_eq!(oracle_grid(&AUDIT_ALPHAS, 10).len(), 60);
    }
}
