use crate::error::{Error, Result};

/// Noise variance at end node A per received packet under the End-to-End scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTrace {
    pub k: usize,
    /// Absolute slot of each reception.
    pub slots: Vec<usize>,
    pub variances: Vec<f64>,
}

impl NoiseTrace {
    pub fn strictly_increasing(&self) -> bool {
        self.variances.windows(2).all(|w| w[1] > w[0])
    }
}

/// First slot at which A hears data that originated at B.
pub fn first_delivery_slot(k: usize) -> usize {
    (k + 1) % 2 + k
}

/// Variance-level run of the compact End-to-End pattern.
///
/// In slot `t` node `i` transmits when `i + t` is even and listens otherwise.
/// A listener's variance is the sum of what its transmitting neighbours send
/// plus one unit of fresh noise. Relays forward without amplification or
/// decoding; end nodes send clean data.
pub fn end_to_end_noise(k: usize, n_received: usize) -> Result<NoiseTrace> {
    if k < 2 {
        return Err(Error::domain("End-to-End pattern needs k >= 2"));
    }
    if k > crate::radio_model::MAX_RELAYS {
        return Err(Error::UnsupportedK(k));
    }
    if n_received == 0 {
        return Err(Error::domain("need at least one received packet"));
    }
    let nodes = k + 2;
    let is_end = |i: usize| i == 0 || i == nodes - 1;
    let mut stored = vec![0.0_f64; nodes];
    let start = first_delivery_slot(k);
    let mut trace = NoiseTrace {
        k,
        slots: Vec::with_capacity(n_received),
        variances: Vec::with_capacity(n_received),
    };
    let mut t = 0;
    while trace.variances.len() < n_received {
        let sends = |i: usize| (i + t).is_multiple_of(2);
        let sent: Vec<f64> = (0..nodes)
            .map(|i| if is_end(i) { 0.0 } else { stored[i] })
            .collect();
        let mut next = stored.clone();
        for i in (0..nodes).filter(|&i| !sends(i)) {
            let heard: f64 = [i.wrapping_sub(1), i + 1]
                .into_iter()
                .filter(|&j| j < nodes && sends(j))
                .map(|j| sent[j])
                .sum();
            next[i] = heard + 1.0;
        }
        stored = next;
        if t >= start && !sends(0) {
            trace.slots.push(t);
            trace.variances.push(stored[0]);
        }
        t += 1;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grows_for_every_k() {
        for k in 2..=6 {
            let tr = end_to_end_noise(k, 12).unwrap();
            assert_eq!(tr.variances.len(), 12);
            assert!(tr.strictly_increasing(), "k = {k}: {:?}", tr.variances);
        }
    }

    #[test]
    fn two_relays_small_start() {
        let tr = end_to_end_noise(2, 1).unwrap();
        assert!(tr.variances[0].is_finite() && tr.variances[0] < 10.0);
    }

    #[test]
    fn longer_routes_grow_geometrically() {
        let tr = end_to_end_noise(6, 30).unwrap();
        let v = &tr.variances;
        assert!(v[29] / v[28] > 1.0);
        assert!(v[29] > 1e3 * v[0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(end_to_end_noise(1, 3).is_err());
        assert!(end_to_end_noise(3, 0).is_err());
        assert_eq!(end_to_end_noise(7, 1), Err(Error::UnsupportedK(7)));
    }
}
