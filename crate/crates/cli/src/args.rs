use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "twrc",
    version,
    about = "Route analysis for amplify-and-forward two-way relay networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Path-loss exponent above which a midpoint relay minimises energy, vs rate.
    Threshold {
        #[command(flatten)]
        rates: RateRange,
        #[command(flatten)]
        out: Output,
    },
    /// Three-node TWRC energy vs relay position, with direct transmission.
    Placement {
        #[arg(long, default_value_t = 1.0)]
        rate: f64,
        /// Path-loss exponents, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [2.0, 2.1, 2.2, 2.3, 2.4])]
        alphas: Vec<f64>,
        /// A–B distance in metres.
        #[arg(long, default_value_t = 20.0)]
        d_route: f64,
        /// Relay positions strictly between the end nodes.
        #[arg(long, default_value_t = 999)]
        points: usize,
        #[command(flatten)]
        phy: Phy,
        #[command(flatten)]
        out: Output,
    },
    /// Energy efficiency vs bandwidth efficiency for each relay count.
    Eebe {
        /// Route lengths in metres (repeatable).
        #[arg(long = "d-route", default_values_t = [1000.0])]
        d_routes: Vec<f64>,
        /// Relay counts, comma separated.
        #[arg(long = "k", value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 4, 5, 6])]
        ks: Vec<usize>,
        #[command(flatten)]
        be: BeRange,
        #[command(flatten)]
        phy: Phy,
        #[command(flatten)]
        out: Output,
    },
    /// Energy-efficiency error from ignoring interference in the allocation.
    SinrError {
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value_t = 1000.0)]
        d_route: f64,
        #[command(flatten)]
        be: BeRange,
        #[command(flatten)]
        phy: Phy,
        #[command(flatten)]
        out: Output,
    },
    /// Supremum of the per-link rate and the latency for every relay count.
    RateLimit {
        #[command(flatten)]
        phy: Phy,
        #[command(flatten)]
        out: Output,
    },
    /// Rank routes by F/K over a rate sweep.
    Compare {
        /// LENGTH:K, repeatable.
        #[arg(long = "route", value_parser = parse_route, default_values = ["1200:1", "1000:3", "1600:2"])]
        routes: Vec<(f64, usize)>,
        #[command(flatten)]
        rates: RateRange,
        #[command(flatten)]
        phy: Phy,
        #[command(flatten)]
        out: Output,
    },
    /// Slot trace of the Hop-by-Hop schedule with per-link budgets.
    Simulate {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        pairs: usize,
        /// Per-link rate for the link budgets; omitted gives a schedule-only trace.
        #[arg(long)]
        rate: Option<f64>,
        #[arg(long, default_value_t = 1000.0)]
        d_route: f64,
        #[command(flatten)]
        phy: Phy,
        #[command(flatten)]
        out: Output,
    },
    /// Noise variance growth at an end node under the End-to-End scheme.
    E2eNoise {
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Received packets to trace.
        #[arg(long, default_value_t = 20)]
        pairs: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Run every closed-form/oracle comparison and report as CSV.
    Oracle {
        /// Rates per path-loss exponent.
        #[arg(long, default_value_t = 10)]
        rates_per_alpha: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct RateRange {
    #[arg(long, default_value_t = 0.1)]
    pub rate_min: f64,
    #[arg(long, default_value_t = 6.0)]
    pub rate_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub rate_step: f64,
}

#[derive(Debug, Args)]
pub struct BeRange {
    #[arg(long, default_value_t = 0.05)]
    pub be_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub be_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub be_step: f64,
}

#[derive(Debug, Args)]
pub struct Phy {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    /// Baseline circuit power in mJ per channel use.
    #[arg(long)]
    pub p00_mj: Option<f64>,
    /// TOML file with alpha, n0_dbm_per_hz, eta, p00_mj_per_cu, rate.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Output {
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out_csv: Option<PathBuf>,
    #[arg(long)]
    pub out_svg: Option<PathBuf>,
}

fn parse_route(s: &str) -> Result<(f64, usize), String> {
    let (len, k) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LENGTH:K, got {s:?}"))?;
    let len: f64 = len
        .trim()
        .parse()
        .map_err(|e| format!("route length {len:?}: {e}"))?;
    let k: usize = k.trim().parse().map_err(|e| format!("relay count {k:?}: {e}"))?;
    Ok((len, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn route_parsing() {
        assert_eq!(parse_route("1200:1"), Ok((1200.0, 1)));
        assert!(parse_route("1200").is_err());
        assert!(parse_route("x:1").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
