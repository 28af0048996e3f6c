//! Single-shot link metrics in the finite-blocklength regime.
//!
//! Everything here is a pure function of the link parameters: Gaussian tail,
//! channel capacity and dispersion, the normal-approximation decoding error
//! probability, the KL-divergence detection bound at the eavesdropper, and
//! the effective secure probability (ESP) that combines them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Parameters of one short-packet link configuration.
///
/// SNRs are linear (use [`db_to_linear`] at the boundary), the slot duration
/// is in seconds and `gen_prob` is the per-slot packet generation probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkParams {
    /// Payload size D in bits.
    pub payload_bits: u32,
    /// Blocklength L in channel uses.
    pub blocklength: u32,
    /// Linear SNR at the legitimate receiver.
    pub snr_bob: f64,
    /// Linear SNR at the eavesdropper.
    pub snr_eve: f64,
    /// Slot duration T in seconds; one transmission attempt occupies one slot.
    pub slot_duration: f64,
    /// Packet generation probability per idle slot, in (0, 1].
    pub gen_prob: f64,
    /// Symbol rate B in symbols per second (scales the effective secure rate).
    pub symbol_rate: f64,
}

impl LinkParams {
    pub fn new(
        payload_bits: u32,
        blocklength: u32,
        snr_bob: f64,
        snr_eve: f64,
        slot_duration: f64,
        gen_prob: f64,
    ) -> Result<Self> {
        let p = LinkParams {
            payload_bits,
            blocklength,
            snr_bob,
            snr_eve,
            slot_duration,
            gen_prob,
            symbol_rate: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_symbol_rate(mut self, symbol_rate: f64) -> Result<Self> {
        self.symbol_rate = symbol_rate;
        self.validate()?;
        Ok(self)
    }

    /// Information rate R = D / L in bits per channel use.
    pub fn rate(&self) -> f64 {
        f64::from(self.payload_bits) / f64::from(self.blocklength)
    }

    pub fn validate(&self) -> Result<()> {
        if self.payload_bits < 1 {
            return Err(Error::domain("payload_bits must be at least 1"));
        }
        if self.blocklength < 1 {
            return Err(Error::domain("blocklength must be at least 1"));
        }
        if !(self.snr_bob > 0.0 && self.snr_bob.is_finite()) {
            return Err(Error::domain("snr_bob must be positive and finite"));
        }
        if !(self.snr_eve > 0.0 && self.snr_eve.is_finite()) {
            return Err(Error::domain("snr_eve must be positive and finite"));
        }
        if !(self.slot_duration > 0.0 && self.slot_duration.is_finite()) {
            return Err(Error::domain("slot_duration must be positive and finite"));
        }
        if !(self.gen_prob > 0.0 && self.gen_prob <= 1.0) {
            return Err(Error::domain("gen_prob must lie in (0, 1]"));
        }
        if !(self.symbol_rate > 0.0 && self.symbol_rate.is_finite()) {
            return Err(Error::domain("symbol_rate must be positive and finite"));
        }
        Ok(())
    }
}

/// All single-attempt probabilities for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecurityProbabilities {
    /// Decoding error probability at the legitimate receiver, P_B.
    pub p_bob_err: f64,
    /// Decoding error probability at the eavesdropper, P_E.
    pub p_eve_err: f64,
    /// Detection bound before clamping; may exceed 1.
    pub p_detect_raw: f64,
    /// Detection probability after clamping to [0, 1].
    pub p_detect: f64,
    /// Effective secure probability (1 - P_B)(1 - P_d (1 - P_E)).
    pub p_esp: f64,
    /// Detection-saturated floor (1 - P_B) P_E; ESP equals this when P_d = 1.
    pub p_esp_floor: f64,
}

/// Raw and clamped values of the detection bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionBound {
    /// Value of the bound itself; grows without limit in L and SNR.
    pub raw: f64,
    /// `min(raw, 1)`, usable as a probability.
    pub clamped: f64,
}

/// Standard Gaussian upper-tail probability Q(x).
pub fn q_function(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("q_function requires a finite argument"));
    }
    Ok(0.5 * special::erfc(x / SQRT_2))
}

/// Channel capacity `log2(1 + snr)` in bits per channel use.
pub fn capacity(snr: f64) -> Result<f64> {
    check_snr(snr)?;
    Ok(snr.ln_1p() / std::f64::consts::LN_2)
}

/// Channel dispersion `snr (2 + snr) / (1 + snr)^2`; lies in (0, 1).
pub fn dispersion(snr: f64) -> Result<f64> {
    check_snr(snr)?;
    Ok(snr * (2.0 + snr) / ((1.0 + snr) * (1.0 + snr)))
}

/// Normal-approximation argument `(C - D/L) sqrt(L / V)`.
pub(crate) fn decoding_margin(snr: f64, payload_bits: u32, blocklength: f64) -> Result<f64> {
    check_blocklength(blocklength)?;
    let c = capacity(snr)?;
    let v = dispersion(snr)?;
    let r = f64::from(payload_bits) / blocklength;
    Ok((c - r) * (blocklength / v).sqrt())
}

/// Decoding error probability `Q((C - D/L) sqrt(L / V))` for a D-bit payload
/// over `blocklength` channel uses. Strictly decreasing in both the
/// blocklength and the SNR.
pub fn decoding_error_prob(snr: f64, payload_bits: u32, blocklength: f64) -> Result<f64> {
    if payload_bits < 1 {
        return Err(Error::domain("payload_bits must be at least 1"));
    }
    q_function(decoding_margin(snr, payload_bits, blocklength)?)
}

/// Detection bound at the eavesdropper,
/// `sqrt((L / 4) (ln(1 + snr) - snr / (1 + snr)))`,
/// returned both raw and clamped to 1.
pub fn detection_prob(snr_eve: f64, blocklength: f64) -> Result<DetectionBound> {
    check_snr(snr_eve)?;
    check_blocklength(blocklength)?;
    let kl_term = snr_eve.ln_1p() - snr_eve / (1.0 + snr_eve);
    let raw = (blocklength / 4.0 * kl_term).sqrt();
    Ok(DetectionBound {
        raw,
        clamped: raw.min(1.0),
    })
}

/// All single-attempt probabilities for arbitrary (possibly unequal) SNRs and
/// a continuous blocklength. Prefer [`esp`] when starting from [`LinkParams`].
pub fn security_probabilities(
    snr_bob: f64,
    snr_eve: f64,
    payload_bits: u32,
    blocklength: f64,
) -> Result<SecurityProbabilities> {
    let p_bob_err = decoding_error_prob(snr_bob, payload_bits, blocklength)?;
    let p_eve_err = decoding_error_prob(snr_eve, payload_bits, blocklength)?;
    let det = detection_prob(snr_eve, blocklength)?;

    let p_bob_ok = 1.0 - p_bob_err;
    let p_esp_floor = p_bob_ok * p_eve_err;
    // On the clamped region the two expressions agree analytically; computing
    // the floor form directly keeps p_esp == p_esp_floor exact in floats.
    let p_esp = if det.clamped >= 1.0 {
        p_esp_floor
    } else {
        p_bob_ok * (1.0 - det.clamped * (1.0 - p_eve_err))
    };

    Ok(SecurityProbabilities {
        p_bob_err,
        p_eve_err,
        p_detect_raw: det.raw,
        p_detect: det.clamped,
        p_esp,
        p_esp_floor,
    })
}

/// Effective secure probability and companions for one link configuration.
pub fn esp(params: &LinkParams) -> Result<SecurityProbabilities> {
    params.validate()?;
    security_probabilities(
        params.snr_bob,
        params.snr_eve,
        params.payload_bits,
        f64::from(params.blocklength),
    )
}

/// Effective secure rate `B (D / L) P_ESP` in bits per second.
pub fn effective_secure_rate(params: &LinkParams) -> Result<f64> {
    let probs = esp(params)?;
    Ok(params.symbol_rate * params.rate() * probs.p_esp)
}

/// Convert a dB value to linear scale: `10^(db / 10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert a positive linear value to dB: `10 log10(x)`.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

fn check_snr(snr: f64) -> Result<()> {
    if snr > 0.0 && snr.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("snr must be positive and finite"))
    }
}

fn check_blocklength(blocklength: f64) -> Result<()> {
    if blocklength >= 1.0 && blocklength.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("blocklength must be at least 1"))
    }
}
