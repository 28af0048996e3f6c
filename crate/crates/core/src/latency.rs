//! Renewal analysis of the retransmit-until-secure loop.
//!
//! A cycle is a geometric wait for the next packet (mean T/lambda) followed by
//! a geometric run of transmission attempts (mean T/P_ESP). The secure latency
//! of a packet is its attempt time; the long-run time average of the latency
//! sawtooth is the product of the packet arrival rate and the mean sawtooth
//! area per cycle.

use serde::Serialize;

use crate::error::{Error, Result};

/// ESP values below this are treated as zero (infinite latency) to avoid
/// overflowing the T / p^2 terms.
const MIN_ESP: f64 = 1e-12;

/// Closed-form renewal quantities for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RenewalStats {
    /// Mean attempt time per packet E(A_i) = T / P_ESP, seconds.
    pub mean_attempt_time: f64,
    /// Mean wait for the next packet E(T_W) = T / lambda, seconds.
    pub mean_wait: f64,
    /// Packet arrival rate over all slots, packets per second.
    pub arrival_rate: f64,
    /// Mean sawtooth area per cycle E(S_i), seconds^2.
    pub mean_area: f64,
    /// Average secure latency, seconds.
    pub avg_sl: f64,
    /// Average latency of the same link without the security constraint.
    pub baseline_latency: f64,
}

/// Mean attempt time per packet, `T / p_esp`.
pub fn mean_attempt_time(p_esp: f64, slot: f64) -> Result<f64> {
    check_slot(slot)?;
    check_esp(p_esp)?;
    Ok(slot / p_esp)
}

/// Mean wait for the next packet, `T / lambda`.
pub fn mean_wait(gen_prob: f64, slot: f64) -> Result<f64> {
    check_slot(slot)?;
    check_gen_prob(gen_prob)?;
    Ok(slot / gen_prob)
}

/// Packet arrival rate `p_esp lambda / (T (p_esp + lambda))`; equals the
/// reciprocal of the mean cycle length.
pub fn arrival_rate(p_esp: f64, gen_prob: f64, slot: f64) -> Result<f64> {
    check_slot(slot)?;
    check_esp(p_esp)?;
    check_gen_prob(gen_prob)?;
    Ok(p_esp * gen_prob / (slot * (p_esp + gen_prob)))
}

/// Mean sawtooth area per cycle, `T^2 (2 - p_esp) / (2 p_esp^2)`.
pub fn mean_area(p_esp: f64, slot: f64) -> Result<f64> {
    check_slot(slot)?;
    check_esp(p_esp)?;
    Ok(slot * slot * (2.0 - p_esp) / (2.0 * p_esp * p_esp))
}

/// Average secure latency `lambda / (lambda + p_esp) (T / p_esp - T / 2)`.
pub fn average_sl(p_esp: f64, gen_prob: f64, slot: f64) -> Result<f64> {
    check_slot(slot)?;
    check_esp(p_esp)?;
    check_gen_prob(gen_prob)?;
    Ok(gen_prob / (gen_prob + p_esp) * (slot / p_esp - slot / 2.0))
}

/// Average latency without the security constraint: [`average_sl`] with the
/// ESP replaced by the probability that the legitimate receiver decodes.
pub fn baseline_latency(p_bob_ok: f64, gen_prob: f64, slot: f64) -> Result<f64> {
    check_slot(slot)?;
    if !(p_bob_ok > 0.0 && p_bob_ok <= 1.0) {
        return Err(Error::NoSecureTransmission);
    }
    check_gen_prob(gen_prob)?;
    Ok(gen_prob / (gen_prob + p_bob_ok) * (slot / p_bob_ok - slot / 2.0))
}

/// Derivative of the average secure latency with respect to the ESP,
/// `-lambda T ((lambda + p) p + (2 - p)(2 p + lambda)) / (2 (lambda + p)^2 p^2)`.
/// Negative everywhere on the valid domain: better ESP always shortens latency.
pub fn sl_derivative_wrt_esp(p_esp: f64, gen_prob: f64, slot: f64) -> Result<f64> {
    check_slot(slot)?;
    check_esp(p_esp)?;
    check_gen_prob(gen_prob)?;
    let p = p_esp;
    let lam = gen_prob;
    let numer = (lam + p) * p + (2.0 - p) * (2.0 * p + lam);
    Ok(-lam * slot * numer / (2.0 * (lam + p) * (lam + p) * p * p))
}

/// Assemble every renewal quantity for one configuration.
pub fn renewal_stats(p_esp: f64, p_bob_ok: f64, gen_prob: f64, slot: f64) -> Result<RenewalStats> {
    Ok(RenewalStats {
        mean_attempt_time: mean_attempt_time(p_esp, slot)?,
        mean_wait: mean_wait(gen_prob, slot)?,
        arrival_rate: arrival_rate(p_esp, gen_prob, slot)?,
        mean_area: mean_area(p_esp, slot)?,
        avg_sl: average_sl(p_esp, gen_prob, slot)?,
        baseline_latency: baseline_latency(p_bob_ok, gen_prob, slot)?,
    })
}

fn check_esp(p_esp: f64) -> Result<()> {
    if !(p_esp.is_finite() && p_esp <= 1.0 && p_esp >= 0.0) {
        return Err(Error::domain("p_esp must lie in [0, 1]"));
    }
    if p_esp < MIN_ESP {
        return Err(Error::NoSecureTransmission);
    }
    Ok(())
}

fn check_gen_prob(gen_prob: f64) -> Result<()> {
    if gen_prob > 0.0 && gen_prob <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "gen_prob must lie in (0, 1]: no packets are ever generated otherwise",
        ))
    }
}

fn check_slot(slot: f64) -> Result<()> {
    if slot > 0.0 && slot.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("slot duration must be positive and finite"))
    }
}
