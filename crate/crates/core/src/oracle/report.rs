use std::io::Write;

/// Tolerances matched to each method's attainable accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance;

impl Tolerance {
    pub const LINEAR: f64 = 1e-9;
    pub const SEARCH_1D: f64 = 1e-6;
    pub const GRID: f64 = 1e-4;
    pub const STATIONARITY: f64 = 1e-5;
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub target: String,
    /// Parameter point as `key=value` pairs separated by `;`.
    pub params: String,
    pub closed: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(
        target: impl Into<String>,
        params: impl Into<String>,
        closed: f64,
        oracle: f64,
        tolerance: f64,
    ) -> Self {
        let rel_err = rel_err(closed, oracle);
        Self::with_error(target, params, closed, oracle, rel_err, tolerance)
    }

    pub fn with_error(
        target: impl Into<String>,
        params: impl Into<String>,
        closed: f64,
        oracle: f64,
        rel_err: f64,
        tolerance: f64,
    ) -> Self {
        OracleReport {
            target: target.into(),
            params: params.into(),
            closed,
            oracle,
            rel_err,
            tolerance,
            pass: rel_err <= tolerance,
        }
    }
}

pub(crate) fn rel_err(closed: f64, oracle: f64) -> f64 {
    let scale = oracle.abs().max(closed.abs());
    if scale == 0.0 {
        0.0
    } else {
        (closed - oracle).abs() / scale
    }
}

/// Worst component-wise relative error.
pub(crate) fn max_rel_err(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(&x, &y)| rel_err(x, y)).fold(0.0, f64::max)
}

/// Writes reports as CSV: target, params, closed, oracle, rel_err, pass.
pub fn write_reports<W: Write>(mut w: W, reports: &[OracleReport]) -> std::io::Result<()> {
    writeln!(w, "target,params,closed,oracle,rel_err,pass")?;
    for r in reports {
        writeln!(
            w,
            "{},\"{}\",{:e},{:e},{:e},{}",
            r.target, r.params, r.closed, r.oracle, r.rel_err, r.pass
        )?;
    }
    Ok(())
}
