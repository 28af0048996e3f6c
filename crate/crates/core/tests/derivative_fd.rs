//! Finite-difference validation of every analytic derivative.

use seclat_core::derivatives::{
    d_esp_d_gamma, d_esp_d_l, d_pd_d_gamma, d_pd_d_l, d_pe_d_gamma, d_pe_d_l,
};
use seclat_core::metrics::{decoding_error_prob, detection_prob, security_probabilities};
use seclat_core::sim::CounterRng;

fn central_diff(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn rel_err(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn esp(gamma: f64, d: u32, l: f64) -> f64 {
    security_probabilities(gamma, gamma, d, l).unwrap().p_esp
}

#[test]
fn pe_blocklength_derivative_at_pinned_point() {
    let (g, d, l) = (0.3162, 64, 161.0);
    let fd = central_diff(|x| decoding_error_prob(g, d, x).unwrap(), l, 1e-4 * l);
    assert!(rel_err(d_pe_d_l(g, d, l).unwrap(), fd) <= 1e-6);
}

#[test]
fn pd_blocklength_derivative_at_pinned_point() {
    let (g, l) = (0.5, 50.0);
    assert!(detection_prob(g, l).unwrap().raw < 1.0);
    let fd = central_diff(|x| detection_prob(g, x).unwrap().raw, l, 1e-5 * l);
    assert!(rel_err(d_pd_d_l(g, l).unwrap(), fd) <= 1e-6);
}

#[test]
fn esp_blocklength_derivative_at_pinned_point() {
    let (g, d, l) = (0.19953, 64, 200.0);
    let fd = central_diff(|x| esp(g, d, x), l, 1e-4 * l);
    assert!(rel_err(d_esp_d_l(g, d, l).unwrap(), fd) <= 1e-5);
}

#[test]
fn pe_snr_derivative_at_pinned_point() {
    let (g, d, l) = (1.0, 64, 100.0);
    let fd = central_diff(|x| decoding_error_prob(x, d, l).unwrap(), g, 1e-5 * g);
    assert!(rel_err(d_pe_d_gamma(g, d, l).unwrap(), fd) <= 1e-5);
    assert!(d_pe_d_gamma(g, d, l).unwrap() < 0.0);
}

#[test]
fn pd_snr_derivative_at_pinned_point() {
    let (g, l) = (0.5, 20.0);
    assert!(detection_prob(g, l).unwrap().raw < 1.0);
    let fd = central_diff(|x| detection_prob(x, l).unwrap().raw, g, 1e-6 * g);
    assert!(rel_err(d_pd_d_gamma(g, l).unwrap(), fd) <= 1e-6);
}

#[test]
fn esp_snr_derivative_at_pinned_points() {
    // Clamped region: the detection term is saturated, only P_e moves.
    let (g, d, l) = (0.2, 64, 300.0);
    assert!(detection_prob(g, l).unwrap().raw > 1.0);
    let fd = central_diff(|x| esp(x, d, l), g, 1e-5 * g);
    assert!(rel_err(d_esp_d_gamma(g, d, l).unwrap(), fd) <= 1e-5);

    // Unclamped region.
    let (g, d, l) = (0.09, 64, 400.0);
    assert!(detection_prob(g, l).unwrap().raw < 1.0);
    let fd = central_diff(|x| esp(x, d, l), g, 1e-5 * g);
    assert!(rel_err(d_esp_d_gamma(g, d, l).unwrap(), fd) <= 1e-5);
}

/// Sample a well-conditioned random point: detection bound away from its
/// clamp at 1 and a decoding margin that keeps the error probability out of
/// the denormal tails where relative finite differences are meaningless.
fn sample_point(rng: &mut CounterRng) -> (f64, u32, f64) {
    loop {
        let d = 8 + (rng.next_u64() % 249) as u32; // 8..=256
        let g = 0.03 * (100.0f64).powf(rng.next_f64()); // log-uniform 0.03..3
        let l = f64::from(d) + 1.0 + rng.next_f64() * 900.0;
        let pe = decoding_error_prob(g, d, l).unwrap();
        let raw = detection_prob(g, l).unwrap().raw;
        if pe > 1e-10 && pe < 1.0 - 1e-10 && (raw - 1.0).abs() > 0.05 {
            return (g, d, l);
        }
    }
}

#[test]
fn random_grid_all_derivatives_match_finite_differences() {
    let mut rng = CounterRng::new(0x5EC1A7, 1);
    let mut accepted = 0;
    while accepted < 100 {
        let (g, d, l) = sample_point(&mut rng);

        let fd = central_diff(|x| decoding_error_prob(g, d, x).unwrap(), l, 1e-4 * l);
        assert!(
            rel_err(d_pe_d_l(g, d, l).unwrap(), fd) <= 1e-5,
            "d_pe_d_l at ({g}, {d}, {l})"
        );

        let fd = central_diff(|x| decoding_error_prob(x, d, l).unwrap(), g, 1e-5 * g);
        assert!(
            rel_err(d_pe_d_gamma(g, d, l).unwrap(), fd) <= 1e-5,
            "d_pe_d_gamma at ({g}, {d}, {l})"
        );

        if detection_prob(g, l).unwrap().raw < 0.95 {
            let fd = central_diff(|x| detection_prob(g, x).unwrap().raw, l, 1e-5 * l);
            assert!(
                rel_err(d_pd_d_l(g, l).unwrap(), fd) <= 1e-5,
                "d_pd_d_l at ({g}, {l})"
            );
            let fd = central_diff(|x| detection_prob(x, l).unwrap().raw, g, 1e-6 * g);
            assert!(
                rel_err(d_pd_d_gamma(g, l).unwrap(), fd) <= 1e-5,
                "d_pd_d_gamma at ({g}, {l})"
            );
        }

        // The ESP derivatives cross zero at stationary points, where a
        // relative comparison is ill-posed; skip near-stationary samples.
        let dl = d_esp_d_l(g, d, l).unwrap();
        let scale_l = d_pe_d_l(g, d, l).unwrap().abs() + d_pd_d_l(g, l).unwrap().abs();
        if dl.abs() > 1e-4 * scale_l {
            let fd = central_diff(|x| esp(g, d, x), l, 1e-4 * l);
            assert!(rel_err(dl, fd) <= 1e-5, "d_esp_d_l at ({g}, {d}, {l})");
        }

        let dg = d_esp_d_gamma(g, d, l).unwrap();
        let scale_g = d_pe_d_gamma(g, d, l).unwrap().abs() + d_pd_d_gamma(g, l).unwrap().abs();
        if dg.abs() > 1e-4 * scale_g {
            let fd = central_diff(|x| esp(x, d, l), g, 1e-5 * g);
            assert!(rel_err(dg, fd) <= 1e-5, "d_esp_d_gamma at ({g}, {d}, {l})");
        }

        accepted += 1;
    }
}

#[test]
fn esp_blocklength_derivative_signs_bracket_maximum() {
    // Positive before and negative after the interior optimum near 243.
    assert!(d_esp_d_l(0.19953, 64, 100.0).unwrap() > 0.0);
    assert!(d_esp_d_l(0.19953, 64, 400.0).unwrap() < 0.0);
}
