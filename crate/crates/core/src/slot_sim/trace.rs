use crate::scalar::Scalar;

use super::link_budget::LinkBudget;
use super::schedule::{Role, SlotSchedule};

/// One node's activity in one slot, with the decoding budget if it decodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow<T> {
    pub slot: usize,
    pub node: usize,
    pub role: Role,
    pub counterparts: Vec<usize>,
    pub budget: Option<LinkBudget<T>>,
}

impl<T> TraceRow<T> {
    /// Counterpart indices joined with `;`.
    pub fn counterpart_field(&self) -> String {
        self.counterparts
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// Per-node activity over `periods` repetitions of the schedule.
pub fn slot_trace<T: Scalar>(
    schedule: &SlotSchedule,
    budgets: &[LinkBudget<T>],
    periods: usize,
) -> Vec<TraceRow<T>> {
    let mut rows = Vec::with_capacity(periods * schedule.period * schedule.nodes());
    for t in 0..periods * schedule.period {
        let local = t % schedule.period;
        for a in &schedule.slot(t).actions {
            let budget = if a.role == Role::Rx {
                budgets
                    .iter()
                    .find(|b| b.slot == local && b.receiver == a.node)
                    .cloned()
            } else {
                None
            };
            rows.push(TraceRow {
                slot: t,
                node: a.node,
                role: a.role,
                counterparts: a.counterparts.clone(),
                budget,
            });
        }
    }
    rows
}
