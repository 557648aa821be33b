use nalgebra::DMatrix;

/// A's noise variance under the End-to-End pattern, counted by walks.
///
/// Every relay reception injects one unit of noise. A unit injected at
/// relay `j` in slot `s` reaches R₁ along each walk of length `t − 1 − s`
/// over the relay chain and is heard by A in slot `t`, which adds its own
/// unit. Walks into an end node stop there, end nodes sending clean data.
pub fn end_to_end_recursion(k: usize, n_received: usize) -> Vec<f64> {
    assert!(k >= 2, "needs relays");
    let adj = DMatrix::from_fn(k, k, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
    let start = (k + 1) % 2 + k;
    let first = if start % 2 == 1 { start } else { start + 1 };
    let slots: Vec<usize> = (0..n_received).map(|i| first + 2 * i).collect();
    let t_max = *slots.last().unwrap_or(&0);
    let mut powers = Vec::with_capacity(t_max + 1);
    powers.push(DMatrix::<f64>::identity(k, k));
    for l in 1..t_max {
        let next = &powers[l - 1] * &adj;
        powers.push(next);
    }
    slots
        .iter()
        .map(|&t| {
            let mut var = 1.0;
            for l in 1..=t {
                let walks = &powers[l - 1];
                for j in 0..k {
                    let relay = j + 1;
                    if (relay + t - l) % 2 == 1 {
                        var += walks[(j, 0)];
                    }
                }
            }
            var
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slot_sim::end_to_end_noise;

    #[test]
    fn matches_simulator() {
        for k in 2..=6 {
            let sim = end_to_end_noise(k, 15).unwrap();
            let walk = end_to_end_recursion(k, 15);
            assert_eq!(sim.variances, walk, "k = {k}");
        }
    }
}
