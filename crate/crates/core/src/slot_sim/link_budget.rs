use crate::error::{Error, Result};
use crate::power_alloc::PowerAllocation;
use crate::radio_model::PhyConfig;
use crate::scalar::{lit, to_f64, Scalar};

use super::schedule::{build_schedule, Slot, SlotSchedule, Transmission};

/// Relative tolerance of [`verify_rates`].
pub const RATE_TOLERANCE: f64 = 1e-9;

/// Decoding of one packet at one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget<T> {
    /// Slot within the period where decoding happens.
    pub slot: usize,
    pub receiver: usize,
    /// Node whose packet is decoded.
    pub source: usize,
    /// Amplifying relay for TWRC links.
    pub relay: Option<usize>,
    pub signal: T,
    pub interference: T,
    pub noise: T,
    pub rate: T,
    /// Number of interfering transmitters.
    pub interferers: usize,
}

impl<T: Scalar> LinkBudget<T> {
    pub fn sinr(&self) -> T {
        let den = self.interference + self.noise;
        if self.signal == T::zero() {
            T::zero()
        } else {
            self.signal / den
        }
    }

    pub fn label(&self) -> String {
        match self.relay {
            Some(r) => format!(
                "slot {} node {} <- node {} via {}",
                self.slot, self.receiver, self.source, r
            ),
            None => format!(
                "slot {} node {} <- node {}",
                self.slot, self.receiver, self.source
            ),
        }
    }
}

/// Amplification a relay applies, derived from its power and what it received.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayGain<T> {
    pub relay: usize,
    pub uplink_slot: usize,
    pub beta_sq: T,
}

struct Ctx<'a, T> {
    schedule: &'a SlotSchedule,
    alloc: &'a PowerAllocation<T>,
    alpha: T,
    n0: T,
}

impl<T: Scalar> Ctx<'_, T> {
    fn gain(&self, i: usize, j: usize) -> T {
        let hops = lit::<T>(i.abs_diff(j) as f64);
        self.alloc.h_sq * hops.powf(-self.alpha)
    }

    fn power(&self, slot: &Slot, node: usize) -> T {
        self.alloc.segments[slot.segment]
            .power_of(node)
            .unwrap_or_else(T::zero)
    }

    /// Received power at `rx` from every transmitter of `slot` except `skip`.
    fn received(&self, slot: &Slot, rx: usize, skip: &[usize]) -> (T, usize) {
        slot.transmitters()
            .into_iter()
            .filter(|t| !skip.contains(t))
            .fold((T::zero(), 0), |(acc, n), t| {
                (acc + self.gain(rx, t) * self.power(slot, t), n + 1)
            })
    }

    /// Uplink slot preceding the broadcast by `relay` at `slot_idx`.
    fn uplink_slot(&self, slot_idx: usize, relay: usize) -> usize {
        let p = self.schedule.period;
        (1..p)
            .map(|back| (slot_idx + p - back) % p)
            .find(|&s| {
                self.schedule.slots[s]
                    .transmissions
                    .iter()
                    .any(|t| matches!(*t, Transmission::TwrcUplink { relay: r, .. } if r == relay))
            })
            .expect("broadcast has a matching uplink")
    }

    fn relay_gain(&self, slot_idx: usize, relay: usize) -> RelayGain<T> {
        let up = self.uplink_slot(slot_idx, relay);
        let (received, _) = self.received(&self.schedule.slots[up], relay, &[]);
        let p_r = self.power(&self.schedule.slots[slot_idx], relay);
        RelayGain {
            relay,
            uplink_slot: up,
            beta_sq: p_r / (received + self.n0),
        }
    }
}

fn compute<T: Scalar>(
    alloc: &PowerAllocation<T>,
    cfg: &PhyConfig<T>,
) -> (Vec<LinkBudget<T>>, Vec<RelayGain<T>>) {
    let schedule = build_schedule(alloc.k);
    let ctx = Ctx {
        schedule: &schedule,
        alloc,
        alpha: cfg.alpha,
        n0: cfg.noise_n0,
    };
    let mut links = Vec::new();
    let mut gains = Vec::new();
    for (si, slot) in schedule.slots.iter().enumerate() {
        for t in &slot.transmissions {
            match *t {
                Transmission::Unicast { from, to } => {
                    let signal = ctx.gain(to, from) * ctx.power(slot, from);
                    let (interference, n) = ctx.received(slot, to, &[from]);
                    let noise = ctx.n0;
                    links.push(budget(si, to, from, None, signal, interference, noise, n));
                }
                Transmission::TwrcUplink { .. } => {}
                Transmission::TwrcBroadcast { relay, a, b } => {
                    let g = ctx.relay_gain(si, relay);
                    let up = &schedule.slots[g.uplink_slot];
                    for (end, partner) in [(a, b), (b, a)] {
                        let amp = ctx.gain(end, relay) * g.beta_sq;
                        let signal = amp * ctx.gain(relay, partner) * ctx.power(up, partner);
                        let (relayed, n_up) = ctx.received(up, relay, &[end, partner]);
                        let (direct, n_down) = ctx.received(slot, end, &[relay]);
                        let noise = amp * ctx.n0 + ctx.n0;
                        links.push(budget(
                            si,
                            end,
                            partner,
                            Some(relay),
                            signal,
                            amp * relayed + direct,
                            noise,
                            n_up + n_down,
                        ));
                    }
                    gains.push(g);
                }
            }
        }
    }
    (links, gains)
}

#[allow(clippy::too_many_arguments)]
fn budget<T: Scalar>(
    slot: usize,
    receiver: usize,
    source: usize,
    relay: Option<usize>,
    signal: T,
    interference: T,
    noise: T,
    interferers: usize,
) -> LinkBudget<T> {
    let mut l = LinkBudget {
        slot,
        receiver,
        source,
        relay,
        signal,
        interference,
        noise,
        rate: T::zero(),
        interferers,
    };
    l.rate = (T::one() + l.sinr()).log2();
    l
}

/// SINR link budgets of every decoding in one period of the allocation.
pub fn link_budgets<T: Scalar>(alloc: &PowerAllocation<T>, cfg: &PhyConfig<T>) -> Vec<LinkBudget<T>> {
    compute(alloc, cfg).0
}

/// Amplification of every relay broadcast, derived from the allocated powers.
pub fn relay_gains<T: Scalar>(alloc: &PowerAllocation<T>, cfg: &PhyConfig<T>) -> Vec<RelayGain<T>> {
    compute(alloc, cfg).1
}

fn rel_err<T: Scalar>(a: T, b: T) -> f64 {
    let (a, b) = (to_f64(a), to_f64(b));
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Checks every link decodes at the allocation's rate and every relay's
/// amplification matches the allocation, within `tol` relative.
pub fn verify_rates_with<T: Scalar>(
    alloc: &PowerAllocation<T>,
    cfg: &PhyConfig<T>,
    tol: f64,
) -> Result<Vec<LinkBudget<T>>> {
    let (links, gains) = compute(alloc, cfg);
    for l in &links {
        if !(rel_err(l.rate, alloc.rate) <= tol) {
            return Err(Error::Verification {
                link: l.label(),
                achieved: to_f64(l.rate),
                target: to_f64(alloc.rate),
            });
        }
    }
    for g in &gains {
        let beta_sq = alloc
            .beta_sq
            .iter()
            .find(|(r, _)| *r == g.relay)
            .map_or(T::nan(), |&(_, b)| b);
        if !(rel_err(g.beta_sq, beta_sq) <= tol) {
            return Err(Error::Verification {
                link: format!("amplification at relay {}", g.relay),
                achieved: to_f64(g.beta_sq),
                target: to_f64(beta_sq),
            });
        }
    }
    Ok(links)
}

pub fn verify_rates<T: Scalar>(alloc: &PowerAllocation<T>, cfg: &PhyConfig<T>) -> Result<Vec<LinkBudget<T>>> {
    verify_rates_with(alloc, cfg, RATE_TOLERANCE)
}
