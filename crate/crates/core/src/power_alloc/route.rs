use crate::error::{Error, Result};
use crate::radio_model::{PhyConfig, RelayCount, RouteSpec};
use crate::scalar::{lit, Scalar};

use super::segments::{allocate_segment, SegmentAllocation, SegmentKind};

/// A segment type anchored at a route node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SegmentPlacement {
    pub kind: SegmentKind,
    pub offset: usize,
}

const fn seg(kind: SegmentKind, offset: usize) -> SegmentPlacement {
    SegmentPlacement { kind, offset }
}

/// Segments of the Hop-by-Hop pattern for `k` relays, in phase order.
pub fn route_pattern(k: RelayCount) -> &'static [SegmentPlacement] {
    use SegmentKind::*;
    const PATTERNS: [&[SegmentPlacement]; 7] = [
        &[seg(U, 0)],
        &[seg(G, 0)],
        &[seg(U, 0), seg(G, 1)],
        &[seg(G, 0), seg(G, 2)],
        &[seg(G, 2), seg(T, 0)],
        &[seg(G, 2), seg(S, 0)],
        &[seg(T, 2), seg(S, 0)],
    ];
    PATTERNS[k.get()]
}

/// Slots per recursion period.
pub fn period(k: RelayCount) -> usize {
    if k.get() <= 1 {
        2
    } else {
        4
    }
}

/// Optimal allocation of a whole route for one recursion period.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation<T> {
    pub k: RelayCount,
    pub rate: T,
    pub hop_distance: T,
    pub h_sq: T,
    /// Segment allocations in phase order with route node indices.
    pub segments: Vec<SegmentAllocation<T>>,
    /// Per-node transmission energy summed over the period, indexed A, R₁..R_k, B.
    pub node_powers: Vec<T>,
    /// `(relay, |β|²)` for every amplification in the period, phase order.
    pub beta_sq: Vec<(usize, T)>,
    /// Transmission energy per period (2 slots for k ≤ 1, 4 otherwise).
    pub total_tx_energy: T,
    pub period: usize,
}

impl<T: Scalar> PowerAllocation<T> {
    /// Transmission energy averaged per channel use.
    pub fn tx_energy_per_cu(&self) -> T {
        self.total_tx_energy / lit(self.period as f64)
    }
}

/// Composes the per-segment minima at `h² = d_hop^(−α)`.
pub fn route_allocation<T: Scalar>(spec: &RouteSpec<T>, cfg: &PhyConfig<T>) -> Result<PowerAllocation<T>> {
    cfg.validate()?;
    let k = spec.k;
    let h_sq = spec.hop_gain_sq(cfg.alpha);
    let segments = route_pattern(k)
        .iter()
        .map(|p| {
            allocate_segment(p.kind, cfg.rate_r, h_sq, cfg.alpha, cfg.noise_n0).map(|s| s.shifted(p.offset))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut node_powers = vec![T::zero(); k.nodes()];
    let mut beta_sq = Vec::new();
    for s in &segments {
        for &(n, p) in &s.powers {
            node_powers[n] = node_powers[n] + p;
        }
        beta_sq.extend_from_slice(&s.beta_sq);
    }
    let total_tx_energy = segments.iter().fold(T::zero(), |acc, s| acc + s.energy);
    Ok(PowerAllocation {
        k,
        rate: cfg.rate_r,
        hop_distance: spec.hop_distance(),
        h_sq,
        segments,
        node_powers,
        beta_sq,
        total_tx_energy,
        period: period(k),
    })
}

/// Supremum of the common per-link rate a pattern can sustain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateLimit<T> {
    Unbounded,
    Finite(T),
}

impl<T: Scalar> RateLimit<T> {
    pub fn admits(&self, rate: T) -> bool {
        match *self {
            RateLimit::Unbounded => true,
            RateLimit::Finite(sup) => rate < sup,
        }
    }
}

pub const RATE_BRACKET: (f64, f64) = (0.01, 20.0);
pub const RATE_TOLERANCE: f64 = 1e-9;

/// Whether every segment of the `k` pattern has a positive allocation.
///
/// Feasibility is scale-free, so it is evaluated at unit gain and noise.
pub fn is_feasible<T: Scalar>(k: RelayCount, rate: T, alpha: T) -> bool {
    route_pattern(k).iter().all(
        |p| match allocate_segment(p.kind, rate, T::one(), alpha, T::one()) {
            Ok(_) => true,
            Err(Error::ZeroRate) => p.kind == SegmentKind::U,
            Err(_) => false,
        },
    )
}

/// Rate upper limit by bisection on [`is_feasible`] over [`RATE_BRACKET`].
///
/// Patterns without interference (k ≤ 3) are unbounded. When a bracket end
/// already sits on the far side the limit is clamped to it.
pub fn rate_upper_limit<T: Scalar>(k: RelayCount, alpha: T) -> RateLimit<T> {
    if k.get() <= 3 {
        return RateLimit::Unbounded;
    }
    let mut lo = lit::<T>(RATE_BRACKET.0);
    let mut hi = lit::<T>(RATE_BRACKET.1);
    if !is_feasible(k, lo, alpha) {
        return RateLimit::Finite(lo);
    }
    if is_feasible(k, hi, alpha) {
        return RateLimit::Finite(hi);
    }
    let tol = lit::<T>(RATE_TOLERANCE);
    while hi - lo > tol {
        let mid = (lo + hi) / lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if is_feasible(k, mid, alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    RateLimit::Finite((lo + hi) / lit(2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k(n: usize) -> RelayCount {
        RelayCount::new(n).unwrap()
    }

    fn cfg(rate: f64) -> PhyConfig<f64> {
        PhyConfig::default().with_rate(rate)
    }

    #[test]
    fn patterns_cover_every_hop_once_per_direction() {
        for kk in RelayCount::all() {
            let mut hops = vec![0usize; kk.hops()];
            for p in route_pattern(kk) {
                let links: &[(usize, usize)] = match p.kind {
                    SegmentKind::U => &[(0, 1)],
                    SegmentKind::G => &[(0, 1), (1, 2)],
                    SegmentKind::T => &[(0, 1), (1, 2), (4, 5)],
                    SegmentKind::S => &[(0, 1), (1, 2), (4, 5), (5, 6)],
                };
                for &(a, _) in links {
                    hops[p.offset + a] += 1;
                }
                assert!(p.offset + p.kind.span() <= kk.nodes());
            }
            assert!(hops.iter().all(|&h| h == 1), "k = {kk}: {hops:?}");
        }
    }

    #[test]
    fn compositions() {
        let rate = 1.3;
        let c = cfg(rate);
        let d = 1000.0;
        let seg = |kind, kk: usize| {
            let spec = RouteSpec::new(d, k(kk)).unwrap();
            allocate_segment(kind, rate, spec.hop_gain_sq(4.0), 4.0, c.noise_n0)
                .unwrap()
                .energy
        };
        let total = |kk| {
            route_allocation(&RouteSpec::new(d, k(kk)).unwrap(), &c)
                .unwrap()
                .total_tx_energy
        };
        assert_relative_eq!(total(0), seg(SegmentKind::U, 0));
        assert_relative_eq!(total(2), seg(SegmentKind::U, 2) + seg(SegmentKind::G, 2));
        assert_relative_eq!(total(3), 2.0 * seg(SegmentKind::G, 3));
        assert_relative_eq!(total(4), seg(SegmentKind::G, 4) + seg(SegmentKind::T, 4));
        assert_relative_eq!(total(5), seg(SegmentKind::G, 5) + seg(SegmentKind::S, 5));
        assert_relative_eq!(total(6), seg(SegmentKind::T, 6) + seg(SegmentKind::S, 6));
    }

    #[test]
    fn node_powers_sum_to_total() {
        for kk in RelayCount::all() {
            let a = route_allocation(&RouteSpec::new(800.0, kk).unwrap(), &cfg(2.0)).unwrap();
            let sum: f64 = a.node_powers.iter().sum();
            assert_relative_eq!(sum, a.total_tx_energy, max_relative = 1e-10);
            assert_eq!(a.node_powers.len(), kk.nodes());
            assert!(a.node_powers.iter().all(|&p| p > 0.0));
        }
    }

    #[test]
    fn rate_limits() {
        for kk in 0..=3 {
            assert_eq!(rate_upper_limit(k(kk), 4.0), RateLimit::Unbounded);
        }
        for kk in 4..=6 {
            let RateLimit::Finite(sup) = rate_upper_limit(k(kk), 4.0) else {
                panic!("k = {kk} should be bounded");
            };
            assert!(is_feasible(k(kk), sup - 1e-6, 4.0));
            assert!(!is_feasible(k(kk), sup + 1e-6, 4.0));
        }
    }

    #[test]
    fn infeasible_route_errors() {
        let spec = RouteSpec::new(1000.0, k(4)).unwrap();
        assert!(route_allocation(&spec, &cfg(7.0)).unwrap_err().is_infeasible());
    }
}
