use std::fmt;

use rayon::prelude::*;

use twrc_core::metrics::{compare_routes, rate_for_be, route_metrics, RouteOutcome};
use twrc_core::oracle::{audit, oracle_grid, AUDIT_ALPHAS};
use twrc_core::power_alloc::{rate_upper_limit, route_allocation, RateLimit};
use twrc_core::radio_model::{mj_to_joule, noise_from_dbm_per_hz, parse_config};
use twrc_core::slot_sim::{
    build_schedule, end_to_end_noise, ensure_valid, simulate_hop_by_hop, slot_trace, snr_vs_sinr_error,
    verify_rates, LinkBudget,
};
use twrc_core::twrc3::{direct_vs_twrc, midpoint_threshold, placement_profile, MidpointKind};
use twrc_core::{Config, Error, RelayCount, Route};

use crate::args::{BeRange, Phy, RateRange};
use crate::plot::Figure;
use crate::table::{num, opt, Table, INFEASIBLE};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Infeasible(String),
    Failed(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible: {m}"),
            CliError::Failed(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            Error::Verification { .. } => CliError::Failed(e.into()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.into())
    }
}

pub type CmdResult = Result<Outcome, CliError>;

pub struct Outcome {
    pub table: Table,
    pub figure: Option<Figure>,
    pub summary: Option<String>,
    /// Set when the command ran but its checks did not all pass.
    pub failed: bool,
}

impl Outcome {
    fn new(table: Table, figure: Figure) -> Self {
        Outcome {
            table,
            figure: Some(figure),
            summary: None,
            failed: false,
        }
    }
}

/// Grid `min, min + step, …` up to `max` inclusive.
pub fn grid(min: f64, max: f64, step: f64, what: &str) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0 && step.is_finite() && min.is_finite() && max.is_finite()) {
        return Err(CliError::Usage(format!(
            "{what} step must be positive and finite"
        )));
    }
    if min > max {
        return Err(CliError::Usage(format!("empty {what} range {min}..{max}")));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n)
        .map(|i| ((min + step * i as f64) * 1e9).round() / 1e9)
        .collect())
}

pub fn config(phy: &Phy, defaults: Config) -> Result<Config, CliError> {
    let mut cfg = match &phy.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => defaults,
    };
    if let Some(a) = phy.alpha {
        cfg.alpha = a;
    }
    if let Some(e) = phy.eta {
        cfg.eta = e;
    }
    if let Some(p) = phy.p00_mj {
        cfg.p00 = mj_to_joule(p);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn relay_count(k: usize) -> Result<RelayCount, CliError> {
    Ok(RelayCount::new(k)?)
}

pub fn threshold(rates: &RateRange) -> CmdResult {
    let grid = grid(rates.rate_min, rates.rate_max, rates.rate_step, "rate")?;
    let mut table = Table::new(&["rate", "alpha_threshold"]);
    let mut curve = Vec::with_capacity(grid.len());
    for &r in &grid {
        let a = midpoint_threshold(r)?;
        table.push(vec![num(r), num(a)]);
        curve.push((r, a));
    }
    let mut fig = Figure::new(
        "Midpoint relay optimal above the curve",
        "rate (bit/cu)",
        "path-loss exponent",
    );
    fig.line("threshold", curve);
    fig.shade_above = Some(0);
    fig.markers
        .push(("R = 2.7".into(), (2.7, midpoint_threshold(2.7)?)));
    Ok(Outcome::new(table, fig))
}

fn kind_name(k: MidpointKind) -> &'static str {
    match k {
        MidpointKind::LocalMin => "local-min",
        MidpointKind::LocalMax => "local-max",
        MidpointKind::Boundary => "boundary",
    }
}

pub fn placement(rate: f64, alphas: &[f64], d: f64, points: usize, phy: &Phy) -> CmdResult {
    if alphas.is_empty() || points == 0 {
        return Err(CliError::Usage("need at least one alpha and one position".into()));
    }
    let base = config(phy, Config::default().without_processing().with_rate(rate))?;
    let mut table = Table::new(&["alpha", "position", "f_over_n0", "direct_over_n0", "midpoint"]);
    let mut fig = Figure::new("TWRC energy vs relay position", "d1 / d", "energy / N0");
    for &alpha in alphas {
        let cfg = Config { alpha, ..base };
        cfg.validate()?;
        let n0 = cfg.noise_n0;
        let direct = direct_vs_twrc(rate, d, &cfg)?.direct_energy / n0;
        let profile = placement_profile(rate, d, &cfg, points)?;
        let mut curve = Vec::with_capacity(profile.len());
        for p in &profile {
            let f = p.f_value / n0;
            table.push(vec![
                num(alpha),
                num(p.relay_pos_fraction),
                num(f),
                num(direct),
                kind_name(p.classification).into(),
            ]);
            curve.push((p.relay_pos_fraction, f));
        }
        fig.line(format!("alpha = {alpha}"), curve);
        fig.line(
            format!("direct, alpha = {alpha}"),
            vec![(0.0, direct), (1.0, direct)],
        );
    }
    Ok(Outcome::new(table, fig))
}

pub fn eebe(d_routes: &[f64], ks: &[usize], be: &BeRange, phy: &Phy) -> CmdResult {
    let cfg = config(phy, Config::default())?;
    let bes = grid(be.be_min, be.be_max, be.be_step, "BE")?;
    let ks = ks
        .iter()
        .map(|&k| relay_count(k))
        .collect::<Result<Vec<_>, _>>()?;
    let routes = d_routes
        .iter()
        .flat_map(|&d| ks.iter().map(move |&k| (d, k)))
        .map(|(d, k)| Route::new(d, k).map_err(CliError::from))
        .collect::<Result<Vec<_>, _>>()?;
    let points: Vec<(usize, f64)> = (0..routes.len())
        .flat_map(|i| bes.iter().map(move |&b| (i, b)))
        .collect();
    let values = points
        .par_iter()
        .map(|&(i, b)| {
            let spec = &routes[i];
            let rate = rate_for_be(spec.k, b);
            match route_metrics(spec, &cfg.with_rate(rate)) {
                Ok(m) => Ok(Some(m.ee)),
                Err(e) if e.is_infeasible() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&["d_route", "k", "be", "rate", "ee"]);
    let mut fig = Figure::new(
        "Energy efficiency vs bandwidth efficiency",
        "BE (bit/s/Hz)",
        "EE (bit/J)",
    );
    let mut curves = vec![Vec::new(); routes.len()];
    for (&(i, b), ee) in points.iter().zip(&values) {
        let spec = &routes[i];
        table.push(vec![
            num(spec.d_route),
            spec.k.to_string(),
            num(b),
            num(rate_for_be(spec.k, b)),
            opt(*ee),
        ]);
        if let Some(e) = ee {
            curves[i].push((b, *e));
        }
    }
    for (spec, c) in routes.iter().zip(curves) {
        fig.line(format!("k = {}, d = {} m", spec.k, spec.d_route), c);
    }
    Ok(Outcome::new(table, fig))
}

pub fn sinr_error(k: usize, d: f64, be: &BeRange, phy: &Phy) -> CmdResult {
    let cfg = config(phy, Config::default().without_processing())?;
    let spec = Route::new(d, relay_count(k)?)?;
    let bes = grid(be.be_min, be.be_max, be.be_step, "BE")?;
    let pts = snr_vs_sinr_error(&spec, &cfg, &bes)?;
    let mut table = Table::new(&["be", "rate", "ee_sinr", "ee_snr", "error_pct"]);
    let mut fig = Figure::new("EE with SINR and SNR allocations", "BE (bit/s/Hz)", "EE (bit/J)");
    let (mut sinr, mut snr) = (Vec::new(), Vec::new());
    for p in &pts {
        table.push(vec![
            num(p.be),
            num(p.rate),
            opt(p.ee_sinr),
            num(p.ee_snr),
            opt(p.error_pct),
        ]);
        if let Some(e) = p.ee_sinr {
            sinr.push((p.be, e));
        }
        snr.push((p.be, p.ee_snr));
    }
    fig.line("SINR", sinr);
    fig.line("SNR", snr);
    Ok(Outcome::new(table, fig))
}

pub fn rate_limit(phy: &Phy) -> CmdResult {
    let cfg = config(phy, Config::default())?;
    let mut table = Table::new(&["k", "rate_sup", "be_sup", "latency"]);
    let mut fig = Figure::new("Rate upper limit and latency", "relays k", "bit/cu or slots");
    let (mut sup, mut lat) = (Vec::new(), Vec::new());
    for k in RelayCount::all() {
        let latency = twrc_core::metrics::latency(k);
        let (r, b) = match rate_upper_limit(k, cfg.alpha) {
            RateLimit::Unbounded => ("unbounded".to_string(), "unbounded".to_string()),
            RateLimit::Finite(r) => {
                sup.push((k.get() as f64, r));
                (num(r), num(twrc_core::metrics::bandwidth_efficiency(k, r)))
            }
        };
        lat.push((k.get() as f64, latency as f64));
        table.push(vec![k.to_string(), r, b, latency.to_string()]);
    }
    fig.line("rate limit", sup);
    fig.line("latency", lat);
    Ok(Outcome::new(table, fig))
}

pub fn compare(routes: &[(f64, usize)], rates: &RateRange, phy: &Phy) -> CmdResult {
    let cfg = config(phy, Config::default())?;
    let specs = routes
        .iter()
        .map(|&(d, k)| Ok(Route::new(d, relay_count(k)?)?))
        .collect::<Result<Vec<_>, CliError>>()?;
    let grid = grid(rates.rate_min, rates.rate_max, rates.rate_step, "rate")?;
    let cmp = compare_routes(&specs, &cfg, &grid)?;
    let mut table = Table::new(&[
        "rate", "route", "d_route", "k", "be", "ee", "latency", "f_over_k", "winner",
    ]);
    let mut curves = vec![Vec::new(); specs.len()];
    for p in &cmp.points {
        for (i, (spec, o)) in specs.iter().zip(&p.outcomes).enumerate() {
            let (be, ee, f) = match o {
                RouteOutcome::Scored { metrics, score } => {
                    curves[i].push((p.rate, score.f_over_k));
                    (num(metrics.be), num(metrics.ee), num(score.f_over_k))
                }
                RouteOutcome::Infeasible => (INFEASIBLE.into(), INFEASIBLE.into(), INFEASIBLE.into()),
            };
            table.push(vec![
                num(p.rate),
                (i + 1).to_string(),
                num(spec.d_route),
                spec.k.to_string(),
                be,
                ee,
                twrc_core::metrics::latency(spec.k).to_string(),
                f,
                (p.winner == Some(i)).to_string(),
            ]);
        }
    }
    let mut fig = Figure::new("Route objective F/K", "rate (bit/cu)", "F/K");
    for (i, (spec, c)) in specs.iter().zip(curves).enumerate() {
        fig.line(format!("route {}: {} m, k = {}", i + 1, spec.d_route, spec.k), c);
    }
    let wins = cmp.win_counts();
    let mut out = Outcome::new(table, fig);
    out.summary = Some(
        wins.iter()
            .enumerate()
            .map(|(i, w)| format!("route {} wins {w}/{}", i + 1, grid.len()))
            .collect::<Vec<_>>()
            .join(", "),
    );
    Ok(out)
}

fn budget_cells(b: Option<&LinkBudget<f64>>) -> [String; 4] {
    match b {
        Some(b) => [num(b.signal), num(b.interference), num(b.noise), num(b.rate)],
        None => Default::default(),
    }
}

pub fn simulate(k: usize, pairs: usize, rate: Option<f64>, d: f64, phy: &Phy) -> CmdResult {
    let k = relay_count(k)?;
    let run = simulate_hop_by_hop(k, pairs)?;
    let schedule = build_schedule(k);
    ensure_valid(&schedule).map_err(|e| CliError::Failed(e.into()))?;
    let budgets = match rate {
        Some(r) => {
            let cfg = config(phy, Config::default())?.with_rate(r);
            let alloc = route_allocation(&Route::new(d, k)?, &cfg)?;
            verify_rates(&alloc, &cfg)?
        }
        None => Vec::new(),
    };
    let span = run.first_insertion + run.total_slots;
    let periods = span.div_ceil(schedule.period);
    let mut table = Table::new(&[
        "slot",
        "node",
        "role",
        "counterpart",
        "signal_J",
        "interference_J",
        "noise_J",
        "rate_bpcu",
    ]);
    for row in slot_trace(&schedule, &budgets, periods) {
        let [s, i, n, r] = budget_cells(row.budget.as_ref());
        table.push(vec![
            row.slot.to_string(),
            row.node.to_string(),
            row.role.to_string(),
            row.counterpart_field(),
            s,
            i,
            n,
            r,
        ]);
    }
    Ok(Outcome {
        table,
        figure: None,
        summary: Some(format!(
            "k={k} pairs={pairs} total_slots={} delivered_pairs={} period={} invariants=ok",
            run.total_slots, run.delivered_pairs, schedule.period
        )),
        failed: false,
    })
}

pub fn e2e_noise(k: usize, n: usize) -> CmdResult {
    let trace = end_to_end_noise(k, n)?;
    let mut table = Table::new(&["packet", "slot", "variance"]);
    let mut curve = Vec::new();
    for (i, (s, v)) in trace.slots.iter().zip(&trace.variances).enumerate() {
        table.push(vec![(i + 1).to_string(), s.to_string(), num(*v)]);
        curve.push(((i + 1) as f64, *v));
    }
    let mut fig = Figure::new(
        "End-to-End noise at the end node",
        "received packets",
        "noise variance",
    );
    fig.line(format!("k = {k}"), curve);
    Ok(Outcome::new(table, fig))
}

pub fn oracle(rates_per_alpha: usize) -> CmdResult {
    if rates_per_alpha == 0 {
        return Err(CliError::Usage("need at least one rate per alpha".into()));
    }
    let grid = oracle_grid(&AUDIT_ALPHAS, rates_per_alpha);
    let mut reports = audit(&grid, 1.0, 1.0);
    reports.extend(audit(&grid, 200f64.powf(-4.0), noise_from_dbm_per_hz(-174.0)));
    let mut table = Table::new(&["target", "params", "closed", "oracle", "rel_err", "pass"]);
    for r in &reports {
        table.push(vec![
            r.target.clone(),
            r.params.clone(),
            num(r.closed),
            num(r.oracle),
            num(r.rel_err),
            r.pass.to_string(),
        ]);
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    Ok(Outcome {
        table,
        figure: None,
        summary: Some(format!("{passed}/{} oracle checks passed", reports.len())),
        failed: passed != reports.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        assert_eq!(grid(0.1, 0.3, 0.1, "r").unwrap(), vec![0.1, 0.2, 0.3]);
        assert_eq!(grid(0.05, 3.0, 0.05, "r").unwrap().len(), 60);
        assert!(matches!(grid(1.0, 0.5, 0.1, "r"), Err(CliError::Usage(_))));
        assert!(matches!(grid(0.0, 1.0, 0.0, "r"), Err(CliError::Usage(_))));
    }
}
