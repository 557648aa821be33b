use crate::error::Result;
use crate::radio_model::{circuit_power, PhyConfig, RelayCount};
use crate::twrc3::{classify_midpoint, energy_point, MidpointKind};

use super::report::{OracleReport, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceGrid {
    /// Points over θ ∈ [ε, π/2 − ε]. Odd counts put a node at π/4.
    pub n_theta: usize,
    /// Log-spaced points over the amplification.
    pub n_x: usize,
    /// The x grid spans `10^±decades` around 1/(h₁h₂).
    pub decades: f64,
    pub eps: f64,
}

impl Default for BruteForceGrid {
    fn default() -> Self {
        BruteForceGrid {
            n_theta: 1001,
            n_x: 1000,
            decades: 3.0,
            eps: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceReport {
    pub report: OracleReport,
    pub argmin_theta: f64,
    pub argmin_x: f64,
    pub grid_min: f64,
    pub theta_step: f64,
    /// Grid argmin within one θ step of π/4.
    pub at_midpoint: bool,
    pub classification: MidpointKind,
    /// α sits within the boundary band of the threshold.
    pub indeterminate: bool,
}

impl BruteForceReport {
    /// Energies agree and the grid argmin is the midpoint.
    pub fn passes(&self) -> bool {
        self.report.pass && self.at_midpoint
    }
}

/// Two-slot TWRC energy from the three decoding constraints directly.
fn twrc_energy(q: f64, h1: f64, h2: f64, x: f64, n0: f64) -> f64 {
    let p_a = q * (1.0 + h2 * x) * n0 / (h1 * h2 * x);
    let p_b = q * (1.0 + h1 * x) * n0 / (h1 * h2 * x);
    let p_r = x * (h1 * p_a + h2 * p_b + n0);
    p_a + p_b + p_r
}

/// Exhaustive search of TWRC energy over relay position and amplification.
///
/// The closed value is the analytic energy with the relay at the midpoint
/// and optimal amplification.
pub fn brute_force_min_f(
    rate: f64,
    d: f64,
    cfg: &PhyConfig<f64>,
    grid: &BruteForceGrid,
) -> Result<BruteForceReport> {
    let alpha = cfg.alpha;
    let q = 2f64.powf(rate) - 1.0;
    let p01 = circuit_power(RelayCount::new(1)?, cfg.p00);
    let span = std::f64::consts::FRAC_PI_2 - 2.0 * grid.eps;
    let theta_step = span / (grid.n_theta - 1) as f64;
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..grid.n_theta {
        let theta = grid.eps + theta_step * i as f64;
        let (s, c) = theta.sin_cos();
        let h1 = (d * c * c).powf(-alpha);
        let h2 = (d * s * s).powf(-alpha);
        let scale = 1.0 / (h1 * h2).sqrt();
        for j in 0..grid.n_x {
            let e = -grid.decades + 2.0 * grid.decades * j as f64 / (grid.n_x - 1) as f64;
            let x = scale * 10f64.powf(e);
            let f = twrc_energy(q, h1, h2, x, cfg.noise_n0) / cfg.eta + 2.0 * p01;
            if f < best.0 {
                best = (f, theta, x);
            }
        }
    }
    let mid = (d / 2.0).powf(-alpha);
    let closed = energy_point(rate, mid, mid, cfg)?.f_value;
    let (grid_min, argmin_theta, argmin_x) = best;
    let at_midpoint = (argmin_theta - std::f64::consts::FRAC_PI_4).abs() <= theta_step * 1.000001;
    let classification = classify_midpoint(rate, alpha)?;
    let report = OracleReport::new(
        "brute-force-min-f",
        format!("rate={rate};alpha={alpha};d={d}"),
        closed,
        grid_min,
        Tolerance::GRID,
    );
    Ok(BruteForceReport {
        report,
        argmin_theta,
        argmin_x,
        grid_min,
        theta_step,
        at_midpoint,
        indeterminate: classification == MidpointKind::Boundary,
        classification,
    })
}
