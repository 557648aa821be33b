use twrc_core::oracle::{
    audit, beta_search_k4, end_to_end_recursion, numeric_solve_k4, numeric_solve_k5_full, oracle_grid,
    OracleReport, AUDIT_ALPHAS,
};
use twrc_core::power_alloc::{alloc_k4_segment_t, alloc_k5_segment_s, coeffs_a};
use twrc_core::radio_model::noise_from_dbm_per_hz;
use twrc_core::slot_sim::end_to_end_noise;

fn assert_all_pass(reports: &[OracleReport]) {
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass).collect();
    assert!(
        failed.is_empty(),
        "{} of {} failed: {failed:#?}",
        failed.len(),
        reports.len()
    );
}

#[test]
fn audit_passes_at_unit_scale() {
    let grid = oracle_grid(&AUDIT_ALPHAS, 10);
    assert!(grid.len() >= 50);
    assert_all_pass(&audit(&grid, 1.0, 1.0));
}

#[test]
fn audit_passes_at_physical_scale() {
    let grid = oracle_grid(&AUDIT_ALPHAS, 4);
    let n0 = noise_from_dbm_per_hz(-174.0);
    for d_hop in [200.0_f64, 240.0] {
        let h_sq = d_hop.powf(-4.0);
        assert_all_pass(&audit(&grid, h_sq, n0));
    }
}

#[test]
fn full_s_system_is_symmetric_unprompted() {
    for (rate, alpha) in oracle_grid(&[3.0, 4.0, 5.0], 5) {
        let c = alloc_k5_segment_s(rate, 1.0, alpha, 1.0).unwrap();
        let x = c.beta_sq[0].1;
        let s = numeric_solve_k5_full(rate, 1.0, alpha, 1.0, x, x).unwrap();
        let pa = s.power_of(0).unwrap();
        let pb = s.power_of(6).unwrap();
        assert!((pa - pb).abs() <= 1e-12 * pa, "rate {rate} alpha {alpha}");
        let p2 = s.power_of(2).unwrap();
        let p4 = s.power_of(4).unwrap();
        assert!((p2 - p4).abs() <= 1e-12 * p2);
    }
}

#[test]
fn end_to_end_simulator_matches_walk_count() {
    for k in 2..=6 {
        let sim = end_to_end_noise(k, 25).unwrap();
        let walk = end_to_end_recursion(k, 25);
        for (a, b) in sim.variances.iter().zip(&walk) {
            assert!((a - b).abs() <= 1e-12 * b, "k = {k}");
        }
    }
}

/// The t-segment minimum with 3- and 5-hop weights attached to the other
/// side in the last three coefficients. This pairing violates the decoding
/// constraints, so it must disagree with the numeric solve.
fn t_min_transposed(rate: f64, alpha: f64) -> f64 {
    let c = coeffs_a(rate, alpha).unwrap();
    let q = 2f64.powf(rate) - 1.0;
    let big_q = 2.0 * q + 1.0;
    let c3 = 3f64.powf(alpha);
    let (i3, i5) = (3f64.powf(-alpha), 5f64.powf(-alpha));
    let (i27, i45) = (27f64.powf(-alpha), 45f64.powf(-alpha));
    let a5 = q / big_q * (c.a1 * (i3 + i27 * q) + c.a2 * (i3 + i45 * q));
    let w = c3 / q + 1.0;
    let a6 = (c.a1 * c.a4 * (1.0 + q * i3) + c.a2 * c.a4 * (1.0 + q * i5)) / (big_q * (1.0 - a5)) + q - c3
        + c.a3 / (1.0 - a5) * w;
    let a7 = q * (1.0 - c3) / big_q * (2.0 + q * (i3 + i5))
        + c.a1 * c.a3 * (1.0 + q * i3) / ((1.0 - a5) * big_q)
        + c.a2 * c.a3 * (1.0 + q * i5) / ((1.0 - a5) * big_q);
    let a8 = c.a4 / (1.0 - a5) * w;
    2.0 * (a7 * a8).sqrt() + a6
}

fn t_min_numeric(rate: f64, alpha: f64) -> f64 {
    let guess = alloc_k4_segment_t(rate, 1.0, alpha, 1.0).unwrap().beta_sq[0].1;
    let x = beta_search_k4(rate, 1.0, alpha, 1.0, guess).oracle;
    numeric_solve_k4(rate, 1.0, alpha, 1.0, x).unwrap().energy
}

#[test]
fn transposed_coefficient_pairing_fails_oracle() {
    for rate in [0.5, 2.0, 4.0] {
        let numeric = t_min_numeric(rate, 4.0);
        let shipped = alloc_k4_segment_t(rate, 1.0, 4.0, 1.0).unwrap().energy;
        let transposed = t_min_transposed(rate, 4.0);
        assert!((shipped - numeric).abs() / numeric < 1e-9, "shipped at {rate}");
        assert!(
            (transposed - numeric).abs() / numeric > 1e-6,
            "transposed at {rate}"
        );
    }
}
