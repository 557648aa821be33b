//! Slot-level model of the Hop-by-Hop scheme: schedules, packet-token runs,
//! per-link SINR budgets, the SNR-only comparison and End-to-End noise growth.

mod end_to_end;
mod hop_by_hop;
mod link_budget;
mod schedule;
mod snr;
mod trace;

pub use end_to_end::{end_to_end_noise, first_delivery_slot, NoiseTrace};
pub use hop_by_hop::{simulate_hop_by_hop, Direction, HopByHopRun, PacketTrace, SlotCounts};
pub use link_budget::{
    link_budgets, relay_gains, verify_rates, verify_rates_with, LinkBudget, RelayGain, RATE_TOLERANCE,
};
pub use schedule::{
    build_schedule, build_schedule_for, check_invariants, ensure_valid, Action, Role, Slot, SlotSchedule,
    Transmission, Violation, INTERFERENCE_RANGE,
};
pub use snr::{route_energy_snr, s_energy_snr, snr_vs_sinr_error, t_energy_snr, SnrErrorPoint};
pub use trace::{slot_trace, TraceRow};
