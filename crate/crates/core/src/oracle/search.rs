use super::report::{OracleReport, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Golden-section minimisation of a unimodal `f` on `[lo, hi]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, x_tol: f64) -> GoldenResult {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while (hi - lo).abs() > x_tol * (lo.abs() + hi.abs()).max(f64::MIN_POSITIVE) && iterations < 500 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
        iterations += 1;
    }
    let x = (lo + hi) / 2.0;
    GoldenResult {
        x,
        f: f(x),
        iterations,
    }
}

/// Central-difference check that `x0` is a stationary point of `f`.
///
/// Slopes are normalised as `|f'|·x0/f` at steps `h·x0` for h ∈ {1e-4, 1e-5},
/// plus the Richardson combination of the two. All three must fall below
/// the stationarity tolerance. The reported oracle value is the worst slope.
pub fn finite_difference_stationarity(target: &str, f: impl Fn(f64) -> f64, x0: f64) -> OracleReport {
    let f0 = f(x0);
    let slope = |h_rel: f64| {
        let h = h_rel * x0.abs().max(f64::MIN_POSITIVE);
        (f(x0 + h) - f(x0 - h)) / (2.0 * h)
    };
    let (d1, d2) = (slope(1e-4), slope(1e-5));
    let rich = (100.0 * d2 - d1) / 99.0;
    let norm = |d: f64| (d * x0 / f0).abs();
    let worst = [d1, d2, rich].into_iter().map(norm).fold(0.0, f64::max);
    OracleReport::with_error(
        target,
        format!("x0={x0:e}"),
        0.0,
        worst,
        worst,
        Tolerance::STATIONARITY,
    )
}
