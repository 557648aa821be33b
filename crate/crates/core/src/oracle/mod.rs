//! Independent numerical checks of the closed forms.
//!
//! Everything here works in `f64` and rebuilds the decoding constraints from
//! node geometry, so no code is shared with the allocations under test.

mod audit;
mod brute;
mod noise;
mod report;
mod search;
mod systems;

pub use audit::{audit, oracle_grid, AUDIT_ALPHAS};
pub use brute::{brute_force_min_f, BruteForceGrid, BruteForceReport};
pub use noise::end_to_end_recursion;
pub use report::{write_reports, OracleReport, Tolerance};
pub use search::{finite_difference_stationarity, golden_section, GoldenResult};
pub use systems::{
    agree_k0, agree_k1, agree_k4, agree_k5, beta_search_k1, beta_search_k4, beta_search_k5, numeric_solve_k0,
    numeric_solve_k1, numeric_solve_k4, numeric_solve_k5, numeric_solve_k5_full, SolveOutput,
};
