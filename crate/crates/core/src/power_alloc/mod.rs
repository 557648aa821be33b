//! Closed-form optimal power allocations for routes with 0..=6 relays.

mod coeffs;
mod route;
mod segments;

pub use coeffs::{coeffs_a, coeffs_b, CoeffsA, CoeffsB};
pub use route::{
    is_feasible, period, rate_upper_limit, route_allocation, route_pattern, PowerAllocation, RateLimit,
    SegmentPlacement, RATE_BRACKET, RATE_TOLERANCE,
};
pub use segments::{
    alloc_k0, alloc_k1, alloc_k4_segment_t, alloc_k5_segment_s, allocate_segment, SegmentAllocation,
    SegmentEnergy, SegmentKind,
};
