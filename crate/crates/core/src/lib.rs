//! Energy, bandwidth and latency analysis of amplify-and-forward two-way
//! relay routes with up to six relays.
//!
//! Closed forms are generic over [`Scalar`] (`f32` or `f64`). The aliases
//! below fix the scalar to `f64` for the common case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod metrics;
pub mod oracle;
pub mod power_alloc;
pub mod radio_model;
mod scalar;
pub mod slot_sim;
pub mod twrc3;

pub use error::{Error, Result};
pub use radio_model::{PhyConfig, RelayCount, RouteSpec, MAX_RELAYS};
pub use scalar::Scalar;

pub type Config = PhyConfig<f64>;
pub type Route = RouteSpec<f64>;
pub type Allocation = power_alloc::PowerAllocation<f64>;
pub type Metrics = metrics::RouteMetrics<f64>;
