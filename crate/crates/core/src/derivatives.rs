//! Analytic first derivatives of the single-attempt probabilities with
//! respect to blocklength and SNR, plus their composition into the ESP
//! derivative in the equal-SNR regime (eavesdropper close to the receiver).
//!
//! The detection-bound derivatives are zero on the clamped region; the ESP
//! composition then collapses to the saturated form automatically.

use crate::error::Result;
use crate::metrics::{decoding_error_prob, decoding_margin, detection_prob};

const SQRT_2PI: f64 = 2.5066282746310002; // sqrt(2 pi)
const LN_2: f64 = std::f64::consts::LN_2;

/// `dP_e/dL` at fixed SNR and payload. Always negative: longer blocks decode
/// more reliably.
pub fn d_pe_d_l(snr: f64, payload_bits: u32, blocklength: f64) -> Result<f64> {
    let t = decoding_margin(snr, payload_bits, blocklength)?;
    let c = snr.ln_1p() / LN_2;
    let d = f64::from(payload_bits);
    let l = blocklength;
    let coeff = (1.0 + snr) * (c * l + d) / (2.0 * (2.0 * std::f64::consts::PI * snr * (snr + 2.0) * l * l * l).sqrt());
    Ok(-coeff * (-0.5 * t * t).exp())
}

/// `dP_d/dL` for the raw detection bound, `sqrt((ln(1+g) - g/(1+g)) / (16 L))`;
/// zero on the clamped region.
pub fn d_pd_d_l(snr_eve: f64, blocklength: f64) -> Result<f64> {
    let det = detection_prob(snr_eve, blocklength)?;
    if det.raw >= 1.0 {
        return Ok(0.0);
    }
    let kl_term = snr_eve.ln_1p() - snr_eve / (1.0 + snr_eve);
    Ok((kl_term / (16.0 * blocklength)).sqrt())
}

/// `dP_ESP/dL` in the equal-SNR regime:
/// `dP_e/dL (2 P_d (1 - P_e) - 1) - (1 - P_e)^2 dP_d/dL`.
pub fn d_esp_d_l(snr: f64, payload_bits: u32, blocklength: f64) -> Result<f64> {
    d_esp_d_l_mode(snr, payload_bits, blocklength, None)
}

/// `dP_e/dgamma` at fixed blocklength and payload. Always negative.
pub fn d_pe_d_gamma(snr: f64, payload_bits: u32, blocklength: f64) -> Result<f64> {
    let t = decoding_margin(snr, payload_bits, blocklength)?;
    let c = snr.ln_1p() / LN_2;
    let r = f64::from(payload_bits) / blocklength;
    let gg = snr * (snr + 2.0);
    let numer = (LN_2 * (c - r) - gg) * blocklength.sqrt();
    Ok(numer * (-0.5 * t * t).exp() / (SQRT_2PI * LN_2 * gg.powf(1.5)))
}

/// `dP_d/dgamma` for the raw detection bound,
/// `sqrt(L) g (1+g)^(-3/2) / (4 sqrt((1+g) ln(1+g) - g))`; zero when clamped.
pub fn d_pd_d_gamma(snr_eve: f64, blocklength: f64) -> Result<f64> {
    let det = detection_prob(snr_eve, blocklength)?;
    if det.raw >= 1.0 {
        return Ok(0.0);
    }
    let g = snr_eve;
    let denom = 4.0 * ((1.0 + g) * g.ln_1p() - g).sqrt();
    Ok(blocklength.sqrt() * g * (1.0 + g).powf(-1.5) / denom)
}

/// `dP_ESP/dgamma` in the equal-SNR regime:
/// `dP_e/dgamma (2 P_d (1 - P_e) - 1) - (1 - P_e)^2 dP_d/dgamma`.
pub fn d_esp_d_gamma(snr: f64, payload_bits: u32, blocklength: f64) -> Result<f64> {
    d_esp_d_gamma_mode(snr, payload_bits, blocklength, None)
}

pub(crate) fn d_esp_d_l_mode(
    snr: f64,
    payload_bits: u32,
    blocklength: f64,
    taylor_terms: Option<u32>,
) -> Result<f64> {
    let dpe = d_pe_d_l(snr, payload_bits, blocklength)?;
    let dpd = d_pd_d_l(snr, blocklength)?;
    compose(snr, payload_bits, blocklength, dpe, dpd, taylor_terms)
}

pub(crate) fn d_esp_d_gamma_mode(
    snr: f64,
    payload_bits: u32,
    blocklength: f64,
    taylor_terms: Option<u32>,
) -> Result<f64> {
    let dpe = d_pe_d_gamma(snr, payload_bits, blocklength)?;
    let dpd = d_pd_d_gamma(snr, blocklength)?;
    compose(snr, payload_bits, blocklength, dpe, dpd, taylor_terms)
}

fn compose(
    snr: f64,
    payload_bits: u32,
    blocklength: f64,
    dpe: f64,
    dpd: f64,
    taylor_terms: Option<u32>,
) -> Result<f64> {
    let pe = match taylor_terms {
        None => decoding_error_prob(snr, payload_bits, blocklength)?,
        Some(n) => {
            let t = decoding_margin(snr, payload_bits, blocklength)?;
            1.0 - gaussian_cdf_series(t, n)
        }
    };
    let pd = detection_prob(snr, blocklength)?.clamped;
    Ok(dpe * (2.0 * pd * (1.0 - pe) - 1.0) - (1.0 - pe) * (1.0 - pe) * dpd)
}

/// Truncated Maclaurin series of the Gaussian CDF,
/// `1/2 + (1/sqrt(2 pi)) sum_{i=0}^{n} (-1)^i t^(2i+1) / (i! 2^i (2i+1))`.
///
/// This is the expansion the implicit stationarity equations print; it is
/// only meaningful for moderate `|t|` and small `n` and exists for fidelity
/// experiments against the exact tail evaluation.
pub(crate) fn gaussian_cdf_series(t: f64, n: u32) -> f64 {
    let t2 = t * t;
    let mut term = t; // i = 0: t / (0! 2^0 1)
    let mut sum = term;
    for i in 0..n {
        let i = f64::from(i);
        // a_{i+1} = a_i * t^2 (2i+1) / (2 (i+1) (2i+3)), alternating sign.
        term *= -t2 * (2.0 * i + 1.0) / (2.0 * (i + 1.0) * (2.0 * i + 3.0));
        sum += term;
    }
    0.5 + sum / SQRT_2PI
}
