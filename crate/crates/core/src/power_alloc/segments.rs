//! Minimum-energy allocations for the four segment types a route is built
//! from: unicast pair `u`, three-node TWRC `g`, and the interference-bearing
//! `t` and `s` segments.

use crate::error::{Error, Result};
use crate::scalar::{lit, sinr_target, to_f64, Scalar};
use crate::twrc3::{ab_coefficients, optimal_amplification};

use super::coeffs::{coeffs_a, coeffs_b};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    /// Unicast exchange between two neighbours.
    U,
    /// Three-node TWRC.
    G,
    /// TWRC on nodes 0–1–2 beside a unicast 4↔5 link.
    T,
    /// Two TWRCs on nodes 0–1–2 and 4–5–6.
    S,
}

impl SegmentKind {
    /// Local indices of the nodes that transmit in this segment.
    pub fn members(self) -> &'static [usize] {
        match self {
            SegmentKind::U => &[0, 1],
            SegmentKind::G => &[0, 1, 2],
            SegmentKind::T => &[0, 1, 2, 4, 5],
            SegmentKind::S => &[0, 1, 2, 4, 5, 6],
        }
    }

    /// Local indices of the amplify-and-forward relays.
    pub fn relays(self) -> &'static [usize] {
        match self {
            SegmentKind::U => &[],
            SegmentKind::G | SegmentKind::T => &[1],
            SegmentKind::S => &[1, 5],
        }
    }

    /// Number of consecutive route nodes the segment spans.
    pub fn span(self) -> usize {
        match self {
            SegmentKind::U => 2,
            SegmentKind::G => 3,
            SegmentKind::T => 6,
            SegmentKind::S => 7,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SegmentKind::U => "u",
            SegmentKind::G => "g",
            SegmentKind::T => "t",
            SegmentKind::S => "s",
        }
    }
}

/// Minimum transmission energy of one segment over its two slots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentEnergy<T> {
    pub kind: SegmentKind,
    pub value: T,
}

/// Optimal powers of one segment.
///
/// Node indices are route positions once the segment has been placed with
/// [`SegmentAllocation::shifted`]; freshly computed segments start at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentAllocation<T> {
    pub kind: SegmentKind,
    pub offset: usize,
    /// `(node, P)` in J/channel use, ascending by node.
    pub powers: Vec<(usize, T)>,
    /// `(relay, |β|²)` for every amplifying relay.
    pub beta_sq: Vec<(usize, T)>,
    /// Minimum segment energy, J per two channel uses.
    pub energy: T,
}

impl<T: Scalar> SegmentAllocation<T> {
    fn new(kind: SegmentKind, powers: Vec<T>, betas: Vec<T>, energy: T) -> Self {
        debug_assert_eq!(powers.len(), kind.members().len());
        SegmentAllocation {
            kind,
            offset: 0,
            powers: kind.members().iter().copied().zip(powers).collect(),
            beta_sq: kind.relays().iter().copied().zip(betas).collect(),
            energy,
        }
    }

    pub fn shifted(mut self, by: usize) -> Self {
        self.offset += by;
        for (n, _) in self.powers.iter_mut().chain(self.beta_sq.iter_mut()) {
            *n += by;
        }
        self
    }

    pub fn power_of(&self, node: usize) -> Option<T> {
        self.powers.iter().find(|(n, _)| *n == node).map(|&(_, p)| p)
    }

    pub fn beta_sq_of(&self, relay: usize) -> Option<T> {
        self.beta_sq.iter().find(|(n, _)| *n == relay).map(|&(_, b)| b)
    }

    pub fn power_sum(&self) -> T {
        self.powers.iter().fold(T::zero(), |acc, &(_, p)| acc + p)
    }

    pub fn segment_energy(&self) -> SegmentEnergy<T> {
        SegmentEnergy {
            kind: self.kind,
            value: self.energy,
        }
    }
}

fn ensure_positive<T: Scalar>(what: &'static str, rate: T, label: &str, value: T) -> Result<()> {
    if value.is_finite() && value > T::zero() {
        Ok(())
    } else {
        Err(Error::Infeasible {
            what,
            rate: to_f64(rate),
            reason: format!("{label} = {} is not positive", to_f64(value)),
        })
    }
}

fn check_gain<T: Scalar>(h_sq: T) -> Result<()> {
    if h_sq > T::zero() && h_sq.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("hop gain must be positive"))
    }
}

/// Unicast both ways between neighbours. `P_A = P_B = N₀(2^R − 1)/h²`.
pub fn alloc_k0<T: Scalar>(rate: T, h_sq: T, n0: T) -> Result<SegmentAllocation<T>> {
    check_gain(h_sq)?;
    if rate < T::zero() {
        return Err(Error::domain("rate must be non-negative"));
    }
    let p = n0 * sinr_target(rate) / h_sq;
    Ok(SegmentAllocation::new(SegmentKind::U, vec![p, p], vec![], p + p))
}

/// Three-node TWRC with the relay in the middle.
pub fn alloc_k1<T: Scalar>(rate: T, h_sq: T, n0: T) -> Result<SegmentAllocation<T>> {
    check_gain(h_sq)?;
    let x = optimal_amplification(rate, h_sq, h_sq)?;
    let q = sinr_target(rate);
    let p_end = q * (h_sq * x + T::one()) * n0 / (h_sq * h_sq * x);
    let p_relay = (lit::<T>(2.0) * h_sq * p_end + n0) * x;
    let (a, b) = ab_coefficients(rate, n0);
    let g_min = (a + lit::<T>(2.0) * b) / h_sq;
    Ok(SegmentAllocation::new(
        SegmentKind::G,
        vec![p_end, p_relay, p_end],
        vec![x],
        g_min,
    ))
}

/// t-segment: powers for local nodes {A, R₁, R₂, R₄, B}.
pub fn alloc_k4_segment_t<T: Scalar>(rate: T, h_sq: T, alpha: T, n0: T) -> Result<SegmentAllocation<T>> {
    const WHAT: &str = "t-segment";
    check_gain(h_sq)?;
    let c = coeffs_a(rate, alpha)?;
    ensure_positive(WHAT, rate, "a7", c.a7)?;
    ensure_positive(WHAT, rate, "a8", c.a8)?;

    let one = T::one();
    let two = lit::<T>(2.0);
    let q = sinr_target(rate);
    let big_q = two * (q + one) - one;
    let c3 = lit::<T>(3.0).powf(alpha);
    let i3 = lit::<T>(3.0).powf(-alpha);
    let i5 = lit::<T>(5.0).powf(-alpha);

    let x = (c.a7 / c.a8).sqrt() / h_sq;
    let hx = h_sq * x;
    let p_b = (c.a3 + c.a4 * hx) * n0 / ((one - c.a5) * h_sq);
    let shared = q * (one - c3) * n0;
    let p_a = (c.a1 * h_sq * p_b + shared) / (big_q * h_sq * hx);
    let p_r2 = (c.a2 * h_sq * p_b + shared) / (big_q * h_sq * hx);
    let p_r4 = q * (i3 * p_r2 + i5 * p_a + n0 / h_sq);
    let p_r1 = c3 * p_b / q - c3 * n0 / h_sq;

    for (label, v) in [
        ("P_A", p_a),
        ("P_R1", p_r1),
        ("P_R2", p_r2),
        ("P_R4", p_r4),
        ("P_B", p_b),
    ] {
        ensure_positive(WHAT, rate, label, v)?;
    }
    let t_min = (two * (c.a7 * c.a8).sqrt() + c.a6) * n0 / h_sq;
    Ok(SegmentAllocation::new(
        SegmentKind::T,
        vec![p_a, p_r1, p_r2, p_r4, p_b],
        vec![x],
        t_min,
    ))
}

/// s-segment: symmetric powers for local nodes {A, R₁, R₂, R₄, R₅, B}.
pub fn alloc_k5_segment_s<T: Scalar>(rate: T, h_sq: T, alpha: T, n0: T) -> Result<SegmentAllocation<T>> {
    const WHAT: &str = "s-segment";
    check_gain(h_sq)?;
    let c = coeffs_b(rate, alpha)?;
    ensure_positive(WHAT, rate, "b5", c.b5)?;
    ensure_positive(WHAT, rate, "b6", c.b6)?;

    let one = T::one();
    let two = lit::<T>(2.0);
    let i3 = lit::<T>(3.0).powf(-alpha);
    let i5 = lit::<T>(5.0).powf(-alpha);

    let x = (c.b6 / c.b5).sqrt() / h_sq;
    let hx = h_sq * x;
    let scale = n0 / (h_sq * hx);
    let p_r2 = (c.b3 * hx + c.b4) * scale;
    let p_a = ((c.b1 * c.b3 + c.b2) * hx + c.b1 * c.b4) * scale;
    let p_r1 = x * (h_sq * p_a * (one + i5) + h_sq * p_r2 * (one + i3) + n0);

    for (label, v) in [("P_A", p_a), ("P_R1", p_r1), ("P_R2", p_r2)] {
        ensure_positive(WHAT, rate, label, v)?;
    }
    let s_min = (two * (c.b5 * c.b6).sqrt() + c.b7) * n0 / h_sq;
    Ok(SegmentAllocation::new(
        SegmentKind::S,
        vec![p_a, p_r1, p_r2, p_r2, p_r1, p_a],
        vec![x, x],
        s_min,
    ))
}

/// Minimum-energy allocation of any segment kind.
pub fn allocate_segment<T: Scalar>(
    kind: SegmentKind,
    rate: T,
    h_sq: T,
    alpha: T,
    n0: T,
) -> Result<SegmentAllocation<T>> {
    match kind {
        SegmentKind::U => alloc_k0(rate, h_sq, n0),
        SegmentKind::G => alloc_k1(rate, h_sq, n0),
        SegmentKind::T => alloc_k4_segment_t(rate, h_sq, alpha, n0),
        SegmentKind::S => alloc_k5_segment_s(rate, h_sq, alpha, n0),
    }
}
