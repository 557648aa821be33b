mod args;
mod commands;
mod plot;
mod table;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Output};
use commands::{CliError, CmdResult};

fn run(cli: Cli) -> Result<bool, CliError> {
    let (result, out): (CmdResult, &Output) = match &cli.command {
        Command::Threshold { rates, out } => (commands::threshold(rates), out),
        Command::Placement {
            rate,
            alphas,
            d_route,
            points,
            phy,
            out,
        } => (commands::placement(*rate, alphas, *d_route, *points, phy), out),
        Command::Eebe {
            d_routes,
            ks,
            be,
            phy,
            out,
        } => (commands::eebe(d_routes, ks, be, phy), out),
        Command::SinrError {
            k,
            d_route,
            be,
            phy,
            out,
        } => (commands::sinr_error(*k, *d_route, be, phy), out),
        Command::RateLimit { phy, out } => (commands::rate_limit(phy), out),
        Command::Compare {
            routes,
            rates,
            phy,
            out,
        } => (commands::compare(routes, rates, phy), out),
        Command::Simulate {
            k,
            pairs,
            rate,
            d_route,
            phy,
            out,
        } => (commands::simulate(*k, *pairs, *rate, *d_route, phy), out),
        Command::E2eNoise { k, pairs, out } => (commands::e2e_noise(*k, *pairs), out),
        Command::Oracle { rates_per_alpha, out } => (commands::oracle(*rates_per_alpha), out),
    };
    let outcome = result?;
    if out.out_svg.is_some() && outcome.figure.is_none() {
        return Err(CliError::Usage("this command has no figure".into()));
    }
    outcome.table.write(out.out_csv.as_deref())?;
    if let (Some(path), Some(fig)) = (&out.out_svg, &outcome.figure) {
        plot::render_svg(path, fig).map_err(CliError::Failed)?;
    }
    if let Some(s) = &outcome.summary {
        eprintln!("{s}");
    }
    Ok(!outcome.failed)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("twrc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
