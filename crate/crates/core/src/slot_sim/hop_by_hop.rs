use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::radio_model::RelayCount;

use super::schedule::{build_schedule, SlotSchedule, Transmission};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    AToB,
    BToA,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketTrace {
    pub id: usize,
    pub direction: Direction,
    /// Absolute slot of insertion by the source end node.
    pub inserted: usize,
    /// `(slot, node)` for every node the packet reached.
    pub hops: Vec<(usize, usize)>,
    pub delivered: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotCounts {
    pub slot: usize,
    pub inserted: usize,
    pub delivered: usize,
    pub in_flight: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopByHopRun {
    /// Slots from the first insertion through the last delivery.
    pub total_slots: usize,
    pub delivered_pairs: usize,
    pub first_insertion: usize,
    pub packets: Vec<PacketTrace>,
    /// Cumulative counts after every slot.
    pub counts: Vec<SlotCounts>,
}

struct Sim {
    nodes: usize,
    toward_b: Vec<VecDeque<usize>>,
    toward_a: Vec<VecDeque<usize>>,
    /// Packets held by a TWRC relay between uplink and broadcast.
    mixed: Vec<Option<(Option<usize>, Option<usize>)>>,
    remaining: [usize; 2],
    packets: Vec<PacketTrace>,
    inserted: usize,
    delivered: usize,
}

impl Sim {
    fn new(nodes: usize, n_pairs: usize) -> Self {
        Sim {
            nodes,
            toward_b: vec![VecDeque::new(); nodes],
            toward_a: vec![VecDeque::new(); nodes],
            mixed: vec![None; nodes],
            remaining: [n_pairs, n_pairs],
            packets: Vec::new(),
            inserted: 0,
            delivered: 0,
        }
    }

    fn last(&self) -> usize {
        self.nodes - 1
    }

    /// Takes the next packet `node` sends in `dir`, inserting at end nodes.
    fn take(&mut self, node: usize, dir: Direction, slot: usize) -> Option<usize> {
        let source = match dir {
            Direction::AToB => node == 0,
            Direction::BToA => node == self.last(),
        };
        if source {
            let left = &mut self.remaining[dir as usize];
            if *left == 0 {
                return None;
            }
            *left -= 1;
            let id = self.packets.len();
            self.packets.push(PacketTrace {
                id,
                direction: dir,
                inserted: slot,
                hops: vec![(slot, node)],
                delivered: None,
            });
            self.inserted += 1;
            return Some(id);
        }
        match dir {
            Direction::AToB => self.toward_b[node].pop_front(),
            Direction::BToA => self.toward_a[node].pop_front(),
        }
    }

    fn arrive(&mut self, id: usize, node: usize, slot: usize) {
        let p = &mut self.packets[id];
        p.hops.push((slot, node));
        let dest = match p.direction {
            Direction::AToB => self.nodes - 1,
            Direction::BToA => 0,
        };
        if node == dest {
            p.delivered = Some(slot);
            self.delivered += 1;
        } else {
            match p.direction {
                Direction::AToB => self.toward_b[node].push_back(id),
                Direction::BToA => self.toward_a[node].push_back(id),
            }
        }
    }

    fn step(&mut self, schedule: &SlotSchedule, slot: usize) {
        let mut arrivals = Vec::new();
        for t in &schedule.slot(slot).transmissions {
            match *t {
                Transmission::Unicast { from, to } => {
                    let dir = if to > from {
                        Direction::AToB
                    } else {
                        Direction::BToA
                    };
                    if let Some(id) = self.take(from, dir, slot) {
                        arrivals.push((id, to));
                    }
                }
                Transmission::TwrcUplink { a, relay, b } => {
                    let pa = self.take(a, Direction::AToB, slot);
                    let pb = self.take(b, Direction::BToA, slot);
                    self.mixed[relay] = Some((pa, pb));
                }
                Transmission::TwrcBroadcast { relay, a, b } => {
                    if let Some((pa, pb)) = self.mixed[relay].take() {
                        arrivals.extend(pa.map(|id| (id, b)));
                        arrivals.extend(pb.map(|id| (id, a)));
                    }
                }
            }
        }
        for (id, node) in arrivals {
            self.arrive(id, node, slot);
        }
    }

    fn in_flight(&self) -> usize {
        let queued: usize = self
            .toward_a
            .iter()
            .chain(&self.toward_b)
            .map(VecDeque::len)
            .sum();
        let mixed: usize = self
            .mixed
            .iter()
            .flatten()
            .map(|(a, b)| a.is_some() as usize + b.is_some() as usize)
            .sum();
        queued + mixed
    }
}

/// Packet-token run of the Hop-by-Hop scheme exchanging `n_pairs` packet pairs.
pub fn simulate_hop_by_hop(k: RelayCount, n_pairs: usize) -> Result<HopByHopRun> {
    if n_pairs == 0 {
        return Err(Error::domain("need at least one packet pair"));
    }
    let schedule = build_schedule(k);
    let mut sim = Sim::new(k.nodes(), n_pairs);
    let mut counts = Vec::new();
    let limit = (n_pairs + 4) * schedule.period * 2;
    let mut slot = 0;
    while sim.delivered < 2 * n_pairs {
        if slot >= limit {
            return Err(Error::domain(format!(
                "k = {k}: exchange did not finish in {limit} slots"
            )));
        }
        sim.step(&schedule, slot);
        counts.push(SlotCounts {
            slot,
            inserted: sim.inserted,
            delivered: sim.delivered,
            in_flight: sim.in_flight(),
        });
        slot += 1;
    }
    let first_insertion = sim.packets.iter().map(|p| p.inserted).min().unwrap_or(0);
    let last_delivery = slot - 1;
    let delivered_a = sim
        .packets
        .iter()
        .filter(|p| p.direction == Direction::AToB && p.delivered.is_some())
        .count();
    let delivered_b = sim.delivered - delivered_a;
    Ok(HopByHopRun {
        total_slots: last_delivery + 1 - first_insertion,
        delivered_pairs: delivered_a.min(delivered_b),
        first_insertion,
        packets: sim.packets,
        counts,
    })
}
