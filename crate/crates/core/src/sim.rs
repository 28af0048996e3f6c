//! Slot-level Monte Carlo of the retransmit-until-secure renewal process.
//!
//! While idle, each slot generates a packet with probability lambda; once a
//! packet exists, each subsequent slot is one transmission attempt that
//! succeeds only on the secure outcomes (legitimate decode without a
//! detect-and-decode at the eavesdropper). The per-packet secure latency is
//! the attempt count times the slot duration, and the time-average latency is
//! the sawtooth area `sum A_i^2 / (2 tau)` over the horizon.
//!
//! Determinism contract: a report is a pure function of the configuration.
//! Draws are keyed by (seed, replication, slot), so replications can run in
//! any order or in parallel without changing a single bit of the output.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{self, LinkParams, SecurityProbabilities};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
/// Batch count used for the batch-means standard error.
const BATCHES: u64 = 20;
/// Replication count at which the across-replication standard error is used.
const REPLICATION_SE_MIN: u32 = 8;

/// Counter-based generator: the n-th output is a pure function of (key, n),
/// the SplitMix64 output function applied to `key + n * GOLDEN`. Distinct
/// streams (replications) get decorrelated keys from the same seed.
///
/// Not cryptographic; statistical quality is adequate for Bernoulli sampling
/// and is covered by the smoke tests below.
#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let key = mix64(mix64(seed).wrapping_add(stream.wrapping_mul(GOLDEN)));
        CounterRng { key, counter: 0 }
    }

    /// Position the counter; the next draw is the `counter`-th of the stream.
    pub fn seek(&mut self, counter: u64) {
        self.counter = counter;
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)));
        self.counter = self.counter.wrapping_add(1);
        v
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_bool(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One simulation request.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationConfig {
    pub link: LinkParams,
    /// Number of slots per replication.
    pub horizon_slots: u64,
    pub seed: u64,
    /// Independent replications aggregated into the report.
    pub replications: u32,
    /// A warning is attached when the expected number of completed packets
    /// falls below this.
    pub min_expected_successes: u64,
}

impl SimulationConfig {
    pub fn new(link: LinkParams, horizon_slots: u64, seed: u64) -> Self {
        SimulationConfig {
            link,
            horizon_slots,
            seed,
            replications: 1,
            min_expected_successes: 100,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.link.validate()?;
        if self.horizon_slots < 1 {
            return Err(Error::domain("horizon_slots must be at least 1"));
        }
        if self.replications < 1 {
            return Err(Error::domain("replications must be at least 1"));
        }
        Ok(())
    }
}

/// Wait and service lengths of one completed packet, in slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PacketRecord {
    pub wait_slots: u32,
    pub attempt_slots: u32,
}

/// Aggregated outcome of a simulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    /// Time-average secure latency `sum A_i^2 / (2 tau)` in seconds, averaged
    /// across replications.
    pub empirical_avg_sl: f64,
    /// Mean transmission attempts per completed packet.
    pub empirical_mean_attempts: f64,
    /// Completed packets per second of simulated time.
    pub empirical_arrival_rate: f64,
    /// Completed packets across all replications.
    pub packets_completed: u64,
    /// Attempt outcomes by security case (indices 0..6 holding cases 1..6).
    pub case_frequencies: [u64; 6],
    /// Standard error of `empirical_avg_sl` (across replications when there
    /// are at least eight, batch means otherwise).
    pub std_error: f64,
    /// 95% confidence interval for the average secure latency.
    pub ci95: (f64, f64),
    /// Total transmission attempts across all replications.
    pub total_attempts: u64,
    /// Per-replication time-average secure latency.
    pub replication_avg_sl: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Draw one attempt outcome and return its security case, 1 through 6.
///
/// Three Bernoulli events: the legitimate receiver decodes with probability
/// `1 - P_B`, the eavesdropper detects with probability `P_d`, and, only when
/// detection happened, decodes with probability `1 - P_E`. Cases 4 and 5 are
/// the secure successes.
pub fn sample_attempt(probs: &SecurityProbabilities, rng: &mut CounterRng) -> u8 {
    let bob_ok = rng.next_bool(1.0 - probs.p_bob_err);
    let detected = rng.next_bool(probs.p_detect);
    if !detected {
        return if bob_ok { 4 } else { 1 };
    }
    let eve_ok = rng.next_bool(1.0 - probs.p_eve_err);
    match (bob_ok, eve_ok) {
        (false, false) => 2,
        (false, true) => 3,
        (true, false) => 5,
        (true, true) => 6,
    }
}

/// Whether a Table-of-cases index is a secure success.
pub fn is_secure_success(case: u8) -> bool {
    case == 4 || case == 5
}

/// Run the simulation and aggregate replications into a report.
pub fn run(config: &SimulationConfig) -> Result<SimulationReport> {
    run_impl(config, false).map(|(report, _)| report)
}

/// Like [`run`], additionally returning every completed packet's wait and
/// attempt lengths (replications concatenated in order).
pub fn run_with_trace(config: &SimulationConfig) -> Result<(SimulationReport, Vec<PacketRecord>)> {
    run_impl(config, true)
}

struct Replication {
    packets: u64,
    attempts: u64,
    sum_sq_attempts: u128,
    case_counts: [u64; 6],
    batch_sum_sq: Vec<u128>,
    trace: Vec<PacketRecord>,
}

fn run_impl(
    config: &SimulationConfig,
    keep_trace: bool,
) -> Result<(SimulationReport, Vec<PacketRecord>)> {
    config.validate()?;
    let probs = metrics::esp(&config.link)?;
    let slot = config.link.slot_duration;
    let lambda = config.link.gen_prob;

    let mut warnings = Vec::new();
    let expected = expected_successes(probs.p_esp, lambda, config);
    if expected < config.min_expected_successes as f64 {
        warnings.push(format!(
            "expected completed packets ({expected:.1}) below the requested minimum ({}); \
             statistics will be noisy",
            config.min_expected_successes
        ));
    }

    let reps: Vec<Replication> = (0..config.replications)
        .map(|r| replicate(&probs, lambda, config, u64::from(r), keep_trace))
        .collect();

    let horizon_time = config.horizon_slots as f64 * slot;
    let rep_avg_sl: Vec<f64> = reps
        .iter()
        .map(|r| r.sum_sq_attempts as f64 * slot / (2.0 * config.horizon_slots as f64))
        .collect();

    let packets: u64 = reps.iter().map(|r| r.packets).sum();
    let attempts: u64 = reps.iter().map(|r| r.attempts).sum();
    let mut case_frequencies = [0u64; 6];
    for r in &reps {
        for (acc, c) in case_frequencies.iter_mut().zip(r.case_counts) {
            *acc += c;
        }
    }

    let empirical_avg_sl = rep_avg_sl.iter().sum::<f64>() / rep_avg_sl.len() as f64;
    let std_error = if config.replications >= REPLICATION_SE_MIN {
        standard_error(&rep_avg_sl)
    } else {
        // Batch means: each replication contributes BATCHES contiguous
        // stretches of the horizon, each an independent-ish area estimate.
        let batch_slots = (config.horizon_slots / BATCHES).max(1);
        let mut batch_means = Vec::new();
        for r in &reps {
            for &s in &r.batch_sum_sq {
                batch_means.push(s as f64 * slot / (2.0 * batch_slots as f64));
            }
        }
        standard_error(&batch_means)
    };

    let mean_attempts = if packets > 0 {
        attempts as f64 / packets as f64
    } else {
        0.0
    };
    let arrival = packets as f64 / (config.replications as f64 * horizon_time);

    let report = SimulationReport {
        empirical_avg_sl,
        empirical_mean_attempts: mean_attempts,
        empirical_arrival_rate: arrival,
        packets_completed: packets,
        case_frequencies,
        std_error,
        ci95: (
            empirical_avg_sl - 1.96 * std_error,
            empirical_avg_sl + 1.96 * std_error,
        ),
        total_attempts: attempts,
        replication_avg_sl: rep_avg_sl,
        warnings,
    };
    let trace = reps.into_iter().flat_map(|r| r.trace).collect();
    Ok((report, trace))
}

fn replicate(
    probs: &SecurityProbabilities,
    lambda: f64,
    config: &SimulationConfig,
    replication: u64,
    keep_trace: bool,
) -> Replication {
    let mut rng = CounterRng::new(config.seed, replication);
    let batch_slots = (config.horizon_slots / BATCHES).max(1);

    let mut out = Replication {
        packets: 0,
        attempts: 0,
        sum_sq_attempts: 0,
        case_counts: [0; 6],
        batch_sum_sq: vec![0; BATCHES as usize],
        trace: Vec::new(),
    };

    let mut sending = false;
    let mut wait_slots = 0u32;
    let mut attempt_slots = 0u32;

    for slot_idx in 0..config.horizon_slots {
        // Four counter positions are reserved per slot so that every draw is
        // addressed by (replication, slot, draw) alone.
        rng.seek(slot_idx * 4);
        if !sending {
            wait_slots = wait_slots.saturating_add(1);
            if rng.next_bool(lambda) {
                sending = true;
                attempt_slots = 0;
            }
        } else {
            let case = sample_attempt(probs, &mut rng);
            out.case_counts[usize::from(case) - 1] += 1;
            out.attempts += 1;
            attempt_slots += 1;
            if is_secure_success(case) {
                let a = u128::from(attempt_slots) * u128::from(attempt_slots);
                out.sum_sq_attempts += a;
                let batch = ((slot_idx / batch_slots) as usize).min(BATCHES as usize - 1);
                out.batch_sum_sq[batch] += a;
                out.packets += 1;
                if keep_trace {
                    out.trace.push(PacketRecord {
                        wait_slots,
                        attempt_slots,
                    });
                }
                sending = false;
                wait_slots = 0;
            }
        }
    }
    out
}

fn expected_successes(p_esp: f64, lambda: f64, config: &SimulationConfig) -> f64 {
    if p_esp <= 0.0 {
        return 0.0;
    }
    // Packets per slot: Lambda T = p lambda / (p + lambda).
    let per_slot = p_esp * lambda / (p_esp + lambda);
    per_slot * config.horizon_slots as f64 * config.replications as f64
}

fn standard_error(samples: &[f64]) -> f64 {
    let n = samples.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / (n as f64 - 1.0);
    (var / n as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::security_probabilities;

    fn probs(p_b: f64, p_e: f64, p_d: f64) -> SecurityProbabilities {
        SecurityProbabilities {
            p_bob_err: p_b,
            p_eve_err: p_e,
            p_detect_raw: p_d,
            p_detect: p_d,
            p_esp: (1.0 - p_b) * (1.0 - p_d * (1.0 - p_e)),
            p_esp_floor: (1.0 - p_b) * p_e,
        }
    }

    #[test]
    fn rng_is_deterministic_and_seekable() {
        let mut a = CounterRng::new(7, 3);
        let mut b = CounterRng::new(7, 3);
        let xs: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        assert_eq!(xs, ys);

        b.seek(2);
        assert_eq!(b.next_u64(), xs[2]);
    }

    #[test]
    fn rng_streams_decorrelate() {
        let mut a = CounterRng::new(7, 0);
        let mut b = CounterRng::new(7, 1);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn rng_uniformity_smoke() {
        let mut rng = CounterRng::new(12345, 0);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        let mut lag = 0.0;
        let mut prev = rng.next_f64();
        let mut ones = 0u64;
        for _ in 0..n {
            let x = rng.next_f64();
            sum += x;
            sum_sq += x * x;
            lag += (x - 0.5) * (prev - 0.5);
            prev = x;
            ones += u64::from(x < 0.5);
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        let sigma_mean = (1.0f64 / 12.0 / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 4.0 * sigma_mean, "mean {mean}");
        assert!((var - 1.0 / 12.0).abs() < 1e-3, "var {var}");
        assert!((lag / n as f64).abs() < 4.0 / 12.0 / (n as f64).sqrt(), "lag-1 corr");
        let half = n as f64 / 2.0;
        assert!((ones as f64 - half).abs() < 4.0 * (half / 2.0).sqrt());
    }

    #[test]
    fn sample_attempt_forced_outcomes() {
        let mut rng = CounterRng::new(1, 0);
        let p = probs(0.0, 0.3, 0.0);
        for _ in 0..100 {
            assert_eq!(sample_attempt(&p, &mut rng), 4);
        }
        let p = probs(1.0, 0.3, 0.5);
        for _ in 0..100 {
            assert!(matches!(sample_attempt(&p, &mut rng), 1..=3));
        }
    }

    #[test]
    fn sample_attempt_matches_case_products() {
        // P_B = P_E = 1/2, P_d = 1: cases (0, 1/4, 1/4, 0, 1/4, 1/4).
        let p = probs(0.5, 0.5, 1.0);
        let mut rng = CounterRng::new(99, 0);
        let n = 1_000_000u64;
        let mut counts = [0u64; 6];
        for _ in 0..n {
            counts[usize::from(sample_attempt(&p, &mut rng)) - 1] += 1;
        }
        let expected = [0.0, 0.25, 0.25, 0.0, 0.25, 0.25];
        for (i, &e) in expected.iter().enumerate() {
            let sigma = (n as f64 * e * (1.0 - e)).sqrt();
            let delta = (counts[i] as f64 - n as f64 * e).abs();
            assert!(delta <= 3.0 * sigma.max(1.0), "case {}: {delta} vs 3x{sigma}", i + 1);
        }
    }

    #[test]
    fn deterministic_alternation_when_everything_succeeds() {
        // P_ESP = 1 and lambda = 1: one wait slot, one attempt slot, forever.
        let link = LinkParams::new(64, 4096, 50.0, 1e-9, 1.0, 1.0).unwrap();
        let p = metrics::esp(&link).unwrap();
        assert!((p.p_esp - 1.0).abs() < 1e-12);
        let cfg = SimulationConfig::new(link, 100_000, 1);
        let report = run(&cfg).unwrap();
        // Exactly horizon/2 packets of one attempt each; avg SL = T/4.
        assert_eq!(report.packets_completed, 50_000);
        assert!((report.empirical_avg_sl - 0.25).abs() < 1e-12);
        assert_eq!(report.empirical_mean_attempts, 1.0);
    }

    #[test]
    fn report_is_reproducible() {
        let link = LinkParams::new(64, 64, 1.0, 1.0, 1.0 / 120_000.0, 0.1).unwrap();
        let mut cfg = SimulationConfig::new(link, 50_000, 42);
        cfg.replications = 3;
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn trace_reproduces_avg_sl_accounting() {
        let link = LinkParams::new(64, 64, 1.0, 1.0, 2.0, 0.3).unwrap();
        let cfg = SimulationConfig::new(link, 80_000, 7);
        let (report, trace) = run_with_trace(&cfg).unwrap();
        assert_eq!(report.packets_completed, trace.len() as u64);
        let slot = 2.0;
        let tau = 80_000.0 * slot;
        let sum: f64 = trace
            .iter()
            .map(|p| {
                let a = f64::from(p.attempt_slots) * slot;
                a * a
            })
            .sum();
        let recomputed = sum / (2.0 * tau);
        assert!(
            (recomputed - report.empirical_avg_sl).abs() <= 1e-12 * report.empirical_avg_sl,
            "{recomputed} vs {}",
            report.empirical_avg_sl
        );
    }

    #[test]
    fn low_success_configuration_warns() {
        let link = LinkParams::new(64, 64, 1.0, 1.0, 1.0, 0.5).unwrap();
        let cfg = SimulationConfig::new(link, 100, 1);
        let report = run(&cfg).unwrap();
        assert!(!report.warnings.is_empty());
    }

    #[test]
    fn equal_seed_equal_bits_across_replication_split() {
        // Aggregation must not depend on how many replications run, only on
        // each replication's own stream: replication r uses stream r.
        let link = LinkParams::new(64, 128, 0.5, 0.5, 1.0, 0.4).unwrap();
        let mut cfg = SimulationConfig::new(link, 10_000, 5);
        cfg.replications = 2;
        let two = run(&cfg).unwrap();
        cfg.replications = 1;
        let one = run(&cfg).unwrap();
        assert_eq!(two.replication_avg_sl[0], one.replication_avg_sl[0]);
    }

    #[test]
    fn case_frequencies_sum_to_attempts() {
        let link = LinkParams::new(64, 100, 0.4, 0.4, 1.0, 0.6).unwrap();
        let mut cfg = SimulationConfig::new(link, 30_000, 11);
        cfg.replications = 2;
        let report = run(&cfg).unwrap();
        assert_eq!(
            report.case_frequencies.iter().sum::<u64>(),
            report.total_attempts
        );
        let esp = metrics::security_probabilities(0.4, 0.4, 64, 100.0).unwrap();
        let successes = report.case_frequencies[3] + report.case_frequencies[4];
        assert_eq!(report.packets_completed, successes);
        let _ = esp;
    }

    #[test]
    fn analytic_agreement_spot_check() {
        // P_ESP = 1/4 at (64, 64, 0 dB); lambda = 0.1 gives avg SL = T.
        let slot = 1.0 / 120_000.0;
        let link = LinkParams::new(64, 64, 1.0, 1.0, slot, 0.1).unwrap();
        let p = security_probabilities(1.0, 1.0, 64, 64.0).unwrap();
        assert_eq!(p.p_esp, 0.25);
        let mut cfg = SimulationConfig::new(link, 500_000, 2024);
        cfg.replications = 8;
        let report = run(&cfg).unwrap();
        let analytic = crate::latency::average_sl(0.25, 0.1, slot).unwrap();
        assert!(
            (report.empirical_avg_sl - analytic).abs() <= 3.0 * report.std_error,
            "{} vs {} (3 sigma {})",
            report.empirical_avg_sl,
            analytic,
            3.0 * report.std_error
        );
    }
}
