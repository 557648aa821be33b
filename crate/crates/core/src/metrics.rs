//! Bandwidth efficiency, energy efficiency, latency and the route objective.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::power_alloc::{route_allocation, PowerAllocation};
use crate::radio_model::{processing_energy, PhyConfig, RelayCount, RouteSpec};
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteMetrics<T> {
    pub k: RelayCount,
    /// Common per-link rate R.
    pub rate: T,
    /// γ in bit/s/Hz. Equals the end-to-end rate.
    pub be: T,
    /// ξ in bit/J.
    pub ee: T,
    /// Slots per bit, k + 1.
    pub latency: usize,
    pub end_to_end_rate: T,
}

/// γ = R for k ≤ 1 and R/2 once the route needs four slots per exchange.
pub fn bandwidth_efficiency<T: Scalar>(k: RelayCount, rate: T) -> T {
    if k.get() <= 1 {
        rate
    } else {
        rate / lit(2.0)
    }
}

/// Per-link rate that yields bandwidth efficiency `be`.
pub fn rate_for_be<T: Scalar>(k: RelayCount, be: T) -> T {
    if k.get() <= 1 {
        be
    } else {
        be * lit(2.0)
    }
}

pub fn latency(k: RelayCount) -> usize {
    k.hops()
}

/// ξ from an allocation: 2R bits per period over transmission plus processing energy.
pub fn energy_efficiency_of<T: Scalar>(alloc: &PowerAllocation<T>, cfg: &PhyConfig<T>) -> T {
    let period = lit::<T>(alloc.period as f64);
    let tx = alloc.tx_energy_per_cu();
    let proc = processing_energy(tx, alloc.k, cfg);
    lit::<T>(2.0) * alloc.rate / (period * (tx + proc.per_cu))
}

pub fn energy_efficiency<T: Scalar>(spec: &RouteSpec<T>, cfg: &PhyConfig<T>) -> Result<T> {
    let alloc = route_allocation(spec, cfg)?;
    Ok(energy_efficiency_of(&alloc, cfg))
}

pub fn route_metrics<T: Scalar>(spec: &RouteSpec<T>, cfg: &PhyConfig<T>) -> Result<RouteMetrics<T>> {
    let ee = energy_efficiency(spec, cfg)?;
    let be = bandwidth_efficiency(spec.k, cfg.rate_r);
    Ok(RouteMetrics {
        k: spec.k,
        rate: cfg.rate_r,
        be,
        ee,
        latency: latency(spec.k),
        end_to_end_rate: be,
    })
}

/// Closed-form ξ of a single midpoint relay without processing energy.
pub fn ee_k1_closed_form<T: Scalar>(rate: T, h_sq: T, n0: T) -> Result<T> {
    if !(rate > T::zero()) {
        return Err(Error::ZeroRate);
    }
    if !(h_sq > T::zero()) {
        return Err(Error::domain("hop gain must be positive"));
    }
    let two = lit::<T>(2.0);
    let p = two.powf(rate + T::one());
    Ok(rate * h_sq / (n0 * (((p - T::one()) * (p - two)).sqrt() + p - two)))
}

/// Maxima of EE, BE and latency over a comparison set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizers<T> {
    pub ee_max: T,
    pub be_max: T,
    pub latency_max: usize,
}

impl<T: Scalar> Normalizers<T> {
    pub fn from_metrics<'a>(metrics: impl IntoIterator<Item = &'a RouteMetrics<T>>) -> Option<Self> {
        metrics.into_iter().fold(None, |acc, m| {
            Some(match acc {
                None => Normalizers {
                    ee_max: m.ee,
                    be_max: m.be,
                    latency_max: m.latency,
                },
                Some(n) => Normalizers {
                    ee_max: n.ee_max.max(m.ee),
                    be_max: n.be_max.max(m.be),
                    latency_max: n.latency_max.max(m.latency),
                },
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveScore<T> {
    /// F/K = ξ·γ/latency.
    pub f_over_k: T,
    /// F with each factor divided by its maximum over the comparison set.
    pub normalized: T,
}

pub fn objective<T: Scalar>(m: &RouteMetrics<T>, n: &Normalizers<T>) -> ObjectiveScore<T> {
    let lat = lit::<T>(m.latency as f64);
    let f_over_k = m.ee * m.be / lat;
    let normalized = (m.ee / n.ee_max) * (m.be / n.be_max) / (lat / lit(n.latency_max as f64));
    ObjectiveScore { f_over_k, normalized }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RouteOutcome<T> {
    Scored {
        metrics: RouteMetrics<T>,
        score: ObjectiveScore<T>,
    },
    /// The route cannot sustain this rate.
    Infeasible,
}

impl<T: Scalar> RouteOutcome<T> {
    pub fn f_over_k(&self) -> Option<T> {
        match self {
            RouteOutcome::Scored { score, .. } => Some(score.f_over_k),
            RouteOutcome::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint<T> {
    pub rate: T,
    /// One outcome per input route, in input order.
    pub outcomes: Vec<RouteOutcome<T>>,
    /// Index of the best route, if any route is feasible.
    pub winner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison<T> {
    pub routes: Vec<RouteSpec<T>>,
    pub points: Vec<RatePoint<T>>,
    pub normalizers: Option<Normalizers<T>>,
}

impl<T: Scalar> Comparison<T> {
    /// How many rate points each route wins.
    pub fn win_counts(&self) -> Vec<usize> {
        let mut wins = vec![0; self.routes.len()];
        for w in self.points.iter().filter_map(|p| p.winner) {
            wins[w] += 1;
        }
        wins
    }
}

/// Scores every route at every rate and flags the per-rate winner by F/K.
///
/// Ties go to lower latency, then fewer relays, then input order.
pub fn compare_routes<T: Scalar>(
    routes: &[RouteSpec<T>],
    cfg: &PhyConfig<T>,
    rates: &[T],
) -> Result<Comparison<T>> {
    if routes.is_empty() {
        return Err(Error::domain("at least one route is required"));
    }
    cfg.validate()?;
    let raw: Vec<Vec<Option<RouteMetrics<T>>>> = rates
        .par_iter()
        .map(|&rate| {
            let c = cfg.with_rate(rate);
            routes
                .iter()
                .map(|spec| match route_metrics(spec, &c) {
                    Ok(m) => Ok(Some(m)),
                    Err(e) if e.is_infeasible() => Ok(None),
                    Err(e) => Err(e),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let normalizers = Normalizers::from_metrics(raw.iter().flatten().flatten());
    let points = rates
        .iter()
        .zip(raw)
        .map(|(&rate, row)| {
            let outcomes: Vec<RouteOutcome<T>> = row
                .into_iter()
                .map(|m| match (m, normalizers.as_ref()) {
                    (Some(metrics), Some(n)) => RouteOutcome::Scored {
                        metrics,
                        score: objective(&metrics, n),
                    },
                    _ => RouteOutcome::Infeasible,
                })
                .collect();
            let winner = pick_winner(routes, &outcomes);
            RatePoint {
                rate,
                outcomes,
                winner,
            }
        })
        .collect();
    Ok(Comparison {
        routes: routes.to_vec(),
        points,
        normalizers,
    })
}

fn pick_winner<T: Scalar>(routes: &[RouteSpec<T>], outcomes: &[RouteOutcome<T>]) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (i, o) in outcomes.iter().enumerate() {
        let Some(f) = o.f_over_k() else { continue };
        let better = match best {
            None => true,
            Some((j, g)) => {
                f > g || (f == g && (routes[i].k.hops(), routes[i].k) < (routes[j].k.hops(), routes[j].k))
            }
        };
        if better {
            best = Some((i, f));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k(n: usize) -> RelayCount {
        RelayCount::new(n).unwrap()
    }

    #[test]
    fn be_and_latency() {
        assert_eq!(bandwidth_efficiency(k(1), 1.0), 1.0);
        assert_eq!(bandwidth_efficiency(k(4), 1.0), 0.5);
        assert_eq!(bandwidth_efficiency(k(0), 0.0), 0.0);
        assert_eq!(latency(k(0)), 1);
        assert_eq!(latency(k(5)), 6);
        assert_eq!(latency(k(6)), 7);
        for kk in RelayCount::all() {
            assert_eq!(bandwidth_efficiency(kk, rate_for_be(kk, 1.3)), 1.3);
        }
    }

    #[test]
    fn unicast_unit_example() {
        // d_hop = 1 gives h² = 1.
        let spec = RouteSpec::new(1.0, k(0)).unwrap();
        let cfg = PhyConfig::new(4.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(energy_efficiency(&spec, &cfg).unwrap(), 1.0);
    }

    #[test]
    fn k1_matches_closed_form() {
        let cfg = PhyConfig::<f64>::default().without_processing();
        let spec = RouteSpec::new(1000.0, k(1)).unwrap();
        for i in 1..=50 {
            let r = 0.1 * i as f64;
            let c = cfg.with_rate(r);
            let ee = energy_efficiency(&spec, &c).unwrap();
            let cf = ee_k1_closed_form(r, spec.hop_gain_sq(4.0), c.noise_n0).unwrap();
            assert_relative_eq!(ee, cf, max_relative = 1e-12);
        }
    }

    #[test]
    fn k1_closed_form_vanishes_at_both_ends() {
        let peak = ee_k1_closed_form(0.6, 1.0, 1.0).unwrap();
        assert!(ee_k1_closed_form(1e-6, 1.0, 1.0).unwrap() < peak * 1e-2);
        assert!(ee_k1_closed_form(30.0, 1.0, 1.0).unwrap() < peak * 1e-2);
    }

    #[test]
    fn objective_scaling() {
        let m = RouteMetrics {
            k: k(1),
            rate: 1.0,
            be: 1.0,
            ee: 2.0,
            latency: 2,
            end_to_end_rate: 1.0,
        };
        let n = Normalizers {
            ee_max: 4.0,
            be_max: 1.0,
            latency_max: 4,
        };
        let m2 = RouteMetrics { ee: 4.0, ..m };
        let m4 = RouteMetrics { latency: 4, ..m };
        assert_eq!(objective(&m2, &n).f_over_k, 2.0 * objective(&m, &n).f_over_k);
        assert_eq!(objective(&m, &n).f_over_k, 2.0 * objective(&m4, &n).f_over_k);
        assert_eq!(objective(&m, &n).normalized, 1.0);
    }

    #[test]
    fn single_route_always_wins() {
        let routes = [RouteSpec::new(1200.0, k(1)).unwrap()];
        let rates: Vec<f64> = (1..=20).map(|i| 0.25 * i as f64).collect();
        let cmp = compare_routes(&routes, &PhyConfig::default(), &rates).unwrap();
        assert!(cmp.points.iter().all(|p| p.winner == Some(0)));
    }

    #[test]
    fn infeasible_cells_are_marked() {
        let routes = [
            RouteSpec::new(1000.0, k(1)).unwrap(),
            RouteSpec::new(1000.0, k(4)).unwrap(),
        ];
        let cmp = compare_routes(&routes, &PhyConfig::default(), &[1.0, 7.0]).unwrap();
        assert!(matches!(cmp.points[1].outcomes[1], RouteOutcome::Infeasible));
        assert_eq!(cmp.points[1].winner, Some(0));
        assert!(cmp.points[0].outcomes[1].f_over_k().is_some());
    }

    #[test]
    fn ties_prefer_lower_latency() {
        let routes = [
            RouteSpec::new(1000.0, k(3)).unwrap(),
            RouteSpec::new(1000.0, k(2)).unwrap(),
        ];
        let m = |kk, lat| RouteOutcome::Scored {
            metrics: RouteMetrics {
                k: kk,
                rate: 1.0,
                be: 1.0,
                ee: 1.0,
                latency: lat,
                end_to_end_rate: 1.0,
            },
            score: ObjectiveScore {
                f_over_k: 1.0,
                normalized: 1.0,
            },
        };
        assert_eq!(pick_winner(&routes, &[m(k(3), 4), m(k(2), 3)]), Some(1));
    }
}
