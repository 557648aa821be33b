use std::fmt;

use crate::error::{Error, Result};
use crate::power_alloc::{period, route_pattern, SegmentKind};
use crate::radio_model::RelayCount;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    TxUnicast,
    TxTwrc,
    Rx,
    AmplifyBroadcast,
    Idle,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::TxUnicast => "tx-unicast",
            Role::TxTwrc => "tx-twrc",
            Role::Rx => "rx",
            Role::AmplifyBroadcast => "amplify-broadcast",
            Role::Idle => "idle",
        }
    }

    pub fn transmits(self) -> bool {
        matches!(self, Role::TxUnicast | Role::TxTwrc | Role::AmplifyBroadcast)
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One radio event in a slot. Node indices are route positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transmission {
    Unicast {
        from: usize,
        to: usize,
    },
    /// Both ends send to the relay at once.
    TwrcUplink {
        a: usize,
        relay: usize,
        b: usize,
    },
    /// The relay amplifies and sends the superposition back to both ends.
    TwrcBroadcast {
        relay: usize,
        a: usize,
        b: usize,
    },
}

impl Transmission {
    pub fn transmitters(&self) -> Vec<usize> {
        match *self {
            Transmission::Unicast { from, .. } => vec![from],
            Transmission::TwrcUplink { a, b, .. } => vec![a, b],
            Transmission::TwrcBroadcast { relay, .. } => vec![relay],
        }
    }

    pub fn receivers(&self) -> Vec<usize> {
        match *self {
            Transmission::Unicast { to, .. } => vec![to],
            Transmission::TwrcUplink { relay, .. } => vec![relay],
            Transmission::TwrcBroadcast { a, b, .. } => vec![a, b],
        }
    }

    /// Transmitters whose signal `receiver` is meant to hear.
    pub fn intended_for(&self, receiver: usize) -> Vec<usize> {
        if self.receivers().contains(&receiver) {
            self.transmitters()
        } else {
            Vec::new()
        }
    }

    fn shifted(self, by: usize) -> Self {
        match self {
            Transmission::Unicast { from, to } => Transmission::Unicast {
                from: from + by,
                to: to + by,
            },
            Transmission::TwrcUplink { a, relay, b } => Transmission::TwrcUplink {
                a: a + by,
                relay: relay + by,
                b: b + by,
            },
            Transmission::TwrcBroadcast { relay, a, b } => Transmission::TwrcBroadcast {
                relay: relay + by,
                a: a + by,
                b: b + by,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub node: usize,
    pub role: Role,
    pub counterparts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    /// Index of the segment (phase order) this slot belongs to.
    pub segment: usize,
    pub kind: SegmentKind,
    pub transmissions: Vec<Transmission>,
    /// One action per route node.
    pub actions: Vec<Action>,
}

impl Slot {
    pub fn transmitters(&self) -> Vec<usize> {
        self.transmissions.iter().flat_map(|t| t.transmitters()).collect()
    }

    pub fn receivers(&self) -> Vec<usize> {
        self.transmissions.iter().flat_map(|t| t.receivers()).collect()
    }
}

/// Slot table of one recursion period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotSchedule {
    pub k: RelayCount,
    pub period: usize,
    pub slots: Vec<Slot>,
}

impl SlotSchedule {
    pub fn nodes(&self) -> usize {
        self.k.nodes()
    }

    /// Slot `t` (0-based, unbounded); the table repeats with the period.
    pub fn slot(&self, t: usize) -> &Slot {
        &self.slots[t % self.period]
    }
}

fn segment_slots(kind: SegmentKind) -> [Vec<Transmission>; 2] {
    use Transmission::*;
    let up = TwrcUplink { a: 0, relay: 1, b: 2 };
    let down = TwrcBroadcast { relay: 1, a: 0, b: 2 };
    match kind {
        SegmentKind::U => [vec![Unicast { from: 0, to: 1 }], vec![Unicast { from: 1, to: 0 }]],
        SegmentKind::G => [vec![up], vec![down]],
        SegmentKind::T => [
            vec![up, Unicast { from: 4, to: 5 }],
            vec![down, Unicast { from: 5, to: 4 }],
        ],
        SegmentKind::S => [
            vec![up, TwrcUplink { a: 4, relay: 5, b: 6 }],
            vec![down, TwrcBroadcast { relay: 5, a: 4, b: 6 }],
        ],
    }
}

fn actions_for(nodes: usize, transmissions: &[Transmission]) -> Vec<Action> {
    let mut actions: Vec<Action> = (0..nodes)
        .map(|node| Action {
            node,
            role: Role::Idle,
            counterparts: Vec::new(),
        })
        .collect();
    let mut set = |node: usize, role: Role, counterparts: Vec<usize>| {
        let a = &mut actions[node];
        a.role = role;
        a.counterparts.extend(counterparts);
    };
    for t in transmissions {
        match *t {
            Transmission::Unicast { from, to } => {
                set(from, Role::TxUnicast, vec![to]);
                set(to, Role::Rx, vec![from]);
            }
            Transmission::TwrcUplink { a, relay, b } => {
                set(a, Role::TxTwrc, vec![relay]);
                set(b, Role::TxTwrc, vec![relay]);
                set(relay, Role::Rx, vec![a, b]);
            }
            Transmission::TwrcBroadcast { relay, a, b } => {
                set(relay, Role::AmplifyBroadcast, vec![a, b]);
                set(a, Role::Rx, vec![relay]);
                set(b, Role::Rx, vec![relay]);
            }
        }
    }
    actions
}

/// Hop-by-Hop slot table for `k` relays in phase order.
///
/// For k = 2 the unicast pair brackets the TWRC: A→R₁, TWRC at R₂, R₁→A.
pub fn build_schedule(k: RelayCount) -> SlotSchedule {
    let pattern = route_pattern(k);
    let mut raw: Vec<(usize, SegmentKind, Vec<Transmission>)> = Vec::new();
    for (i, p) in pattern.iter().enumerate() {
        let [first, second] = segment_slots(p.kind);
        let shift = |v: Vec<Transmission>| v.into_iter().map(|t| t.shifted(p.offset)).collect();
        raw.push((i, p.kind, shift(first)));
        raw.push((i, p.kind, shift(second)));
    }
    if k.get() == 2 {
        // u₁ g₁ g₂ u₂
        let u2 = raw.remove(1);
        raw.push(u2);
    }
    debug_assert_eq!(raw.len(), period(k));
    let slots = raw
        .into_iter()
        .map(|(segment, kind, transmissions)| Slot {
            segment,
            kind,
            actions: actions_for(k.nodes(), &transmissions),
            transmissions,
        })
        .collect();
    SlotSchedule {
        k,
        period: period(k),
        slots,
    }
}

pub fn build_schedule_for(k: usize) -> Result<SlotSchedule> {
    Ok(build_schedule(RelayCount::new(k)?))
}

/// Shortest distance, in hops, an unintended transmitter may have to a receiver.
pub const INTERFERENCE_RANGE: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    HalfDuplex {
        slot: usize,
        node: usize,
    },
    DoubleTransmit {
        slot: usize,
        node: usize,
    },
    Interference {
        slot: usize,
        receiver: usize,
        interferer: usize,
        hops: usize,
    },
    NotPeriodic,
}

/// Checks half-duplex operation and the two-hop interference range.
///
/// A receiver may only have unintended transmitters three or more hops away.
pub fn check_invariants(s: &SlotSchedule) -> Vec<Violation> {
    let mut out = Vec::new();
    if s.slots.len() != s.period {
        out.push(Violation::NotPeriodic);
    }
    for (i, slot) in s.slots.iter().enumerate() {
        let tx = slot.transmitters();
        let rx = slot.receivers();
        for (j, &n) in tx.iter().enumerate() {
            if tx[..j].contains(&n) {
                out.push(Violation::DoubleTransmit { slot: i, node: n });
            }
            if rx.contains(&n) {
                out.push(Violation::HalfDuplex { slot: i, node: n });
            }
        }
        for t in &slot.transmissions {
            for r in t.receivers() {
                let intended = t.intended_for(r);
                for &x in tx.iter().filter(|x| !intended.contains(x)) {
                    let hops = x.abs_diff(r);
                    if hops < INTERFERENCE_RANGE {
                        out.push(Violation::Interference {
                            slot: i,
                            receiver: r,
                            interferer: x,
                            hops,
                        });
                    }
                }
            }
        }
    }
    out
}

pub fn ensure_valid(s: &SlotSchedule) -> Result<()> {
    match check_invariants(s).first() {
        None => Ok(()),
        Some(v) => Err(Error::domain(format!("schedule for k = {} invalid: {v:?}", s.k))),
    }
}
