//! Optimal blocklength and SNR selection for minimum average secure latency.
//!
//! Since the average secure latency is strictly decreasing in the ESP, both
//! single-variable problems reduce to maximizing the ESP. Each has two
//! regimes, separated by whether the detection bound saturates at the
//! rate-equals-capacity candidate:
//!
//! * saturated: the optimum sets `P_e = 1/2`, giving the closed forms
//!   `L = D / log2(1 + g)` and `g = 2^(D/L) - 1`;
//! * unsaturated: an interior stationary point of the ESP derivative, found
//!   here by sign bracketing and bisection.
//!
//! The branch decision tests saturation at the closed-form candidate
//! directly rather than comparing against the threshold value, which is
//! equivalent but robust near the crossover.

use serde::Serialize;

use crate::derivatives::{d_esp_d_gamma_mode, d_esp_d_l_mode};
use crate::error::{Error, Result};
use crate::latency::average_sl;
use crate::metrics::{capacity, decoding_error_prob, detection_prob, security_probabilities};

const LN_2: f64 = std::f64::consts::LN_2;
const BISECT_MAX: u32 = 200;
/// Grid density for derivative bracketing and the argmax certificate.
const GAMMA_SCAN_POINTS: usize = 1024;
/// Grid density of the exhaustive fallback scan.
const GAMMA_FALLBACK_POINTS: usize = 10_000;

/// Tuning knobs for the solvers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Exclusive upper limit for the blocklength (constraint `D < L < l_max`).
    pub l_max: u32,
    /// Linear SNR search interval for the implicit branch.
    pub gamma_bounds: (f64, f64),
    /// Relative tolerance on the SNR root.
    pub tol_gamma: f64,
    /// Iteration cap for the joint alternation.
    pub max_iters: u32,
    /// When set, the stationarity equations evaluate the Gaussian CDF by a
    /// Maclaurin series truncated at this order instead of the exact tail.
    pub taylor_terms: Option<u32>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            l_max: 1000,
            gamma_bounds: (1e-3, 1e3),
            tol_gamma: 1e-9,
            max_iters: 100,
            taylor_terms: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.l_max < 2 {
            return Err(Error::domain("l_max must be at least 2"));
        }
        let (lo, hi) = self.gamma_bounds;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::domain("gamma_bounds must be positive and ordered"));
        }
        if !(self.tol_gamma > 0.0 && self.tol_gamma < 1.0) {
            return Err(Error::domain("tol_gamma must lie in (0, 1)"));
        }
        if self.max_iters == 0 {
            return Err(Error::domain("max_iters must be positive"));
        }
        Ok(())
    }
}

/// Packet generation probability and slot duration, needed only to report the
/// average secure latency achieved at the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrafficParams {
    pub gen_prob: f64,
    pub slot_duration: f64,
}

impl TrafficParams {
    pub fn new(gen_prob: f64, slot_duration: f64) -> Result<Self> {
        let t = TrafficParams {
            gen_prob,
            slot_duration,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gen_prob > 0.0 && self.gen_prob <= 1.0) {
            return Err(Error::domain("gen_prob must lie in (0, 1]"));
        }
        if !(self.slot_duration > 0.0 && self.slot_duration.is_finite()) {
            return Err(Error::domain("slot_duration must be positive and finite"));
        }
        Ok(())
    }
}

/// Which regime produced the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    ClosedForm,
    ImplicitStationary,
}

/// The optimized variable(s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum OptVariable {
    Blocklength { blocklength: u32 },
    Snr { snr: f64 },
    Joint { snr: f64, blocklength: u32 },
}

/// Solver bookkeeping attached to every result.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    /// The bracketing solver found nothing and an exhaustive scan decided.
    pub grid_fallback: bool,
    /// The optimum sits on the feasible-set boundary.
    pub boundary: bool,
    /// For the joint solver: the alternation reached its fixed point.
    pub converged: bool,
    /// Exact ESP after every half-step of the joint alternation.
    pub esp_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub variable: OptVariable,
    pub branch: Branch,
    /// Exact ESP at the returned optimum.
    pub achieved_esp: f64,
    /// Average secure latency at the optimum for the supplied traffic
    /// parameters; infinite if the ESP is numerically zero.
    pub achieved_avg_sl: f64,
    pub iterations: u32,
    /// Stationarity residual: |dP_ESP/dx| at the root for the implicit
    /// branch, |P_e - 1/2| at the candidate for the closed form.
    pub residual: f64,
    pub diagnostics: Diagnostics,
}

/// SNR threshold of Theorem-1 type: the unique root of
/// `g / ((g + 1) ln(g + 1)) = (D ln2 - 4) / (D ln2)`.
/// Above it the optimal blocklength takes the closed form `D / log2(1 + g)`.
pub fn gamma_threshold(payload_bits: u32) -> Result<f64> {
    let d_ln2 = f64::from(payload_bits) * LN_2;
    if d_ln2 <= 4.0 {
        return Err(Error::ThresholdUndefined { payload_bits });
    }
    let rho = (d_ln2 - 4.0) / d_ln2;
    let f = |g: f64| -> Result<f64> { Ok(g / ((g + 1.0) * g.ln_1p()) - rho) };

    // The left-hand side decreases from 1 at 0+ toward 0, so a bracket
    // always exists for rho in (0, 1).
    let mut lo = 1e-12;
    let mut hi = 1.0;
    let f_lo = f(lo)?;
    while f(hi)? > 0.0 {
        lo = hi;
        hi *= 10.0;
        if hi > 1e15 {
            return Err(Error::Domain("snr threshold bracket not found".into()));
        }
    }
    let out = bisect(&f, lo, hi, f_lo, 0.0, 1e-10, BISECT_MAX)?;
    Ok(out.root)
}

/// Residual of the Theorem-1 threshold equation at a candidate root.
pub fn gamma_threshold_residual(gamma_t: f64, payload_bits: u32) -> f64 {
    let d_ln2 = f64::from(payload_bits) * LN_2;
    (gamma_t / ((gamma_t + 1.0) * gamma_t.ln_1p()) - (d_ln2 - 4.0) / d_ln2).abs()
}

/// Blocklength threshold of Theorem-2 type: the unique root of
/// `L (1 - 2^(-D/L)) = D ln2 - 4`.
/// At or below it the optimal SNR takes the closed form `2^(D/L) - 1`.
pub fn blocklength_threshold(payload_bits: u32) -> Result<f64> {
    let d_ln2 = f64::from(payload_bits) * LN_2;
    if d_ln2 <= 4.0 {
        return Err(Error::ThresholdUndefined { payload_bits });
    }
    let target = d_ln2 - 4.0;
    let d = f64::from(payload_bits);
    // l (1 - 2^(-d/l)) rises monotonically from 0 toward d ln2.
    let f = |l: f64| -> Result<f64> { Ok(-l * (-(d / l) * LN_2).exp_m1() - target) };

    let lo = 1e-9;
    let mut hi = d.max(1.0);
    while f(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 1e18 {
            return Err(Error::Domain("blocklength threshold bracket not found".into()));
        }
    }
    let f_lo = f(lo)?;
    let out = bisect(&f, lo, hi, f_lo, 0.0, 1e-10, BISECT_MAX)?;
    Ok(out.root)
}

/// Residual of the Theorem-2 threshold equation at a candidate root.
pub fn blocklength_threshold_residual(l_t: f64, payload_bits: u32) -> f64 {
    let d = f64::from(payload_bits);
    (-l_t * (-(d / l_t) * LN_2).exp_m1() - (d * LN_2 - 4.0)).abs()
}

/// Optimal integer blocklength for a fixed SNR (equal at both receivers).
///
/// When the detection bound saturates at the rate-equals-capacity candidate
/// `D / log2(1 + g)`, the better of its two integer neighbors is returned
/// (closed form). Otherwise the interior stationary point of `dP_ESP/dL` is
/// bracketed on the integer lattice and bisected, again returning the better
/// integer neighbor. If no bracket exists the exhaustive integer scan decides
/// and is flagged in the diagnostics.
pub fn optimal_blocklength(
    snr: f64,
    payload_bits: u32,
    traffic: &TrafficParams,
    config: &SolverConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    traffic.validate()?;
    if !(snr > 0.0 && snr.is_finite()) {
        return Err(Error::domain("snr must be positive and finite"));
    }
    if f64::from(payload_bits) * LN_2 <= 4.0 {
        return Err(Error::ThresholdUndefined { payload_bits });
    }
    if config.l_max <= payload_bits + 1 {
        return Err(Error::Infeasible(format!(
            "l_max = {} leaves no feasible blocklength for a {}-bit payload",
            config.l_max, payload_bits
        )));
    }
    let l_lo = payload_bits + 1;
    let l_hi = config.l_max - 1;

    let l_cf = f64::from(payload_bits) / capacity(snr)?;
    let saturated = detection_prob(snr, l_cf.max(1.0))?.raw >= 1.0;

    let mut iterations = 0u32;
    let mut diagnostics = Diagnostics::default();
    diagnostics.converged = true;

    let (mut chosen, branch, mut residual) = if saturated {
        let cands = [
            clamp_u32(l_cf.floor(), l_lo, l_hi),
            clamp_u32(l_cf.ceil(), l_lo, l_hi),
        ];
        let (best, _) = argmax_esp_int(snr, payload_bits, cands)?;
        let residual = (decoding_error_prob(snr, payload_bits, l_cf.max(1.0))? - 0.5).abs();
        (best, Branch::ClosedForm, residual)
    } else {
        let g = |l: f64| d_esp_d_l_mode(snr, payload_bits, l, config.taylor_terms);
        let mut roots: Vec<(f64, f64)> = Vec::new();
        let mut prev = g(f64::from(l_lo))?;
        for l in l_lo + 1..=l_hi {
            let cur = g(f64::from(l))?;
            if prev == 0.0 {
                roots.push((f64::from(l - 1), 0.0));
            } else if prev * cur < 0.0 {
                let out = bisect(&g, f64::from(l - 1), f64::from(l), prev, 1e-6, 0.0, BISECT_MAX)?;
                iterations += out.iterations;
                roots.push((out.root, out.f_root.abs()));
            }
            prev = cur;
        }
        if cur_is_root(prev) {
            roots.push((f64::from(l_hi), 0.0));
        }

        if roots.is_empty() {
            diagnostics.grid_fallback = true;
            let (best, _) = argmax_esp_int(snr, payload_bits, l_lo..=l_hi)?;
            iterations += l_hi - l_lo + 1;
            let residual = g(f64::from(best))?.abs();
            (best, Branch::ImplicitStationary, residual)
        } else {
            let mut cands = vec![l_lo, l_hi];
            for &(r, _) in &roots {
                cands.push(clamp_u32(r.floor(), l_lo, l_hi));
                cands.push(clamp_u32(r.ceil(), l_lo, l_hi));
            }
            let (best, _) = argmax_esp_int(snr, payload_bits, cands)?;
            // Residual of the stationary point the winner came from, or the
            // derivative at the boundary when the boundary won.
            let residual = roots
                .iter()
                .filter(|(r, _)| (r - f64::from(best)).abs() <= 1.0)
                .map(|&(_, fr)| fr)
                .next()
                .map_or_else(|| g(f64::from(best)).map(f64::abs), Ok)?;
            (best, Branch::ImplicitStationary, residual)
        }
    };

    // Local argmax certificate: the returned integer must beat both
    // neighbors; if it does not, the exhaustive scan decides.
    if !beats_neighbors(snr, payload_bits, chosen, l_lo, l_hi)? {
        diagnostics.grid_fallback = true;
        let (best, _) = argmax_esp_int(snr, payload_bits, l_lo..=l_hi)?;
        iterations += l_hi - l_lo + 1;
        chosen = best;
        residual = f64::NAN;
    }
    diagnostics.boundary = chosen == l_lo || chosen == l_hi;

    let achieved_esp = esp_equal_snr(snr, payload_bits, f64::from(chosen))?;
    Ok(OptimizationResult {
        variable: OptVariable::Blocklength { blocklength: chosen },
        branch,
        achieved_esp,
        achieved_avg_sl: avg_sl_or_inf(achieved_esp, traffic)?,
        iterations,
        residual,
        diagnostics,
    })
}

/// Optimal SNR for a fixed blocklength.
///
/// When the detection bound saturates at the rate-equals-capacity candidate
/// `2^(D/L) - 1` (equivalently `L (1 - 2^(-D/L)) <= D ln2 - 4`), that
/// candidate is the exact optimum (closed form). Otherwise the interior
/// stationary point of `dP_ESP/dgamma` is bracketed on a log grid inside
/// `gamma_bounds` and bisected to `tol_gamma`. An exhaustive log-grid scan
/// backs the argmax certificate.
pub fn optimal_snr(
    blocklength: u32,
    payload_bits: u32,
    traffic: &TrafficParams,
    config: &SolverConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    traffic.validate()?;
    if f64::from(payload_bits) * LN_2 <= 4.0 {
        return Err(Error::ThresholdUndefined { payload_bits });
    }
    if blocklength < payload_bits {
        return Err(Error::Infeasible(format!(
            "blocklength {blocklength} is shorter than the payload of {payload_bits} bits"
        )));
    }

    let l = f64::from(blocklength);
    let g_cf = (f64::from(payload_bits) / l).exp2() - 1.0;
    let saturated = detection_prob(g_cf, l)?.raw >= 1.0;

    let mut iterations = 0u32;
    let mut diagnostics = Diagnostics::default();
    diagnostics.converged = true;

    let (gamma, branch, residual) = if saturated {
        let residual = (decoding_error_prob(g_cf, payload_bits, l)? - 0.5).abs();
        (g_cf, Branch::ClosedForm, residual)
    } else {
        let g = |x: f64| d_esp_d_gamma_mode(x, payload_bits, l, config.taylor_terms);
        let (lo, hi) = config.gamma_bounds;
        let step = (hi / lo).ln() / (GAMMA_SCAN_POINTS as f64 - 1.0);
        let grid_pt = |i: usize| lo * ((i as f64) * step).exp();

        let mut roots: Vec<(f64, f64)> = Vec::new();
        let mut prev = g(grid_pt(0))?;
        for i in 1..GAMMA_SCAN_POINTS {
            let x = grid_pt(i);
            let cur = g(x)?;
            if prev == 0.0 {
                roots.push((grid_pt(i - 1), 0.0));
            } else if prev * cur < 0.0 {
                let a = grid_pt(i - 1);
                let out = bisect(&g, a, x, prev, 0.0, config.tol_gamma, BISECT_MAX)?;
                iterations += out.iterations;
                roots.push((out.root, out.f_root.abs()));
            }
            prev = cur;
        }

        let mut cands: Vec<(f64, f64)> = vec![(lo, 0.0), (hi, 0.0)];
        cands.extend(roots.iter().copied());
        let mut best = (f64::NAN, f64::NEG_INFINITY, f64::NAN); // (gamma, esp, res)
        for &(x, res) in &cands {
            let e = esp_equal_snr(x, payload_bits, l)?;
            if e > best.1 {
                best = (x, e, res);
            }
        }
        let boundary = best.0 == lo || best.0 == hi;
        let res = if boundary && roots.is_empty() {
            g(best.0)?.abs()
        } else {
            best.2
        };
        diagnostics.boundary = boundary;
        (best.0, Branch::ImplicitStationary, res)
    };

    // Argmax certificate against a log-spaced scan of the exact ESP.
    let mut achieved_esp = esp_equal_snr(gamma, payload_bits, l)?;
    let (scan_gamma, scan_esp) =
        log_grid_esp_argmax(payload_bits, l, config.gamma_bounds, GAMMA_SCAN_POINTS)?;
    let mut gamma = gamma;
    let mut branch = branch;
    let mut residual = residual;
    if scan_esp > achieved_esp + 1e-12 {
        // Exhaustive fallback on a finer grid.
        diagnostics.grid_fallback = true;
        let (fg, fe) =
            log_grid_esp_argmax(payload_bits, l, config.gamma_bounds, GAMMA_FALLBACK_POINTS)?;
        iterations += GAMMA_FALLBACK_POINTS as u32;
        if fe > achieved_esp {
            gamma = fg;
            achieved_esp = fe;
            branch = Branch::ImplicitStationary;
            residual = f64::NAN;
        }
        let _ = scan_gamma;
    }
    diagnostics.boundary = diagnostics.boundary
        || gamma <= config.gamma_bounds.0 * (1.0 + 1e-12)
        || gamma >= config.gamma_bounds.1 * (1.0 - 1e-12);

    Ok(OptimizationResult {
        variable: OptVariable::Snr { snr: gamma },
        branch,
        achieved_esp,
        achieved_avg_sl: avg_sl_or_inf(achieved_esp, traffic)?,
        iterations,
        residual,
        diagnostics,
    })
}

/// Joint blocklength/SNR optimization by coordinate ascent on the exact ESP,
/// alternating [`optimal_snr`] and [`optimal_blocklength`] until neither
/// variable moves. Each half-step maximizes its own coordinate, so the ESP
/// trace is nondecreasing within a run.
///
/// The alternation is started both from the interior point
/// `L = ceil(1.5 D)` and from the blocklength upper bound; the run ending at
/// the larger ESP wins. The interior start can stall on the
/// detection-saturated ridge (ESP exactly 1/4), which is a coordinate-wise
/// fixed point but not the constrained optimum when the ESP keeps growing
/// along the boundary.
pub fn joint_optimize(
    payload_bits: u32,
    traffic: &TrafficParams,
    config: &SolverConfig,
) -> Result<OptimizationResult> {
    config.validate()?;
    traffic.validate()?;
    if f64::from(payload_bits) * LN_2 <= 4.0 {
        return Err(Error::ThresholdUndefined { payload_bits });
    }
    if config.l_max <= payload_bits + 1 {
        return Err(Error::Infeasible(format!(
            "l_max = {} leaves no feasible blocklength for a {}-bit payload",
            config.l_max, payload_bits
        )));
    }
    let l_hi = config.l_max - 1;
    let interior = ((f64::from(payload_bits) * 1.5).ceil() as u32).clamp(payload_bits + 1, l_hi);

    let run_a = alternate(interior, payload_bits, traffic, config)?;
    let run_b = alternate(l_hi, payload_bits, traffic, config)?;
    let best = if run_b.achieved_esp > run_a.achieved_esp {
        run_b
    } else {
        run_a
    };
    Ok(best)
}

fn alternate(
    l_start: u32,
    payload_bits: u32,
    traffic: &TrafficParams,
    config: &SolverConfig,
) -> Result<OptimizationResult> {
    let l_lo = payload_bits + 1;
    let l_hi = config.l_max - 1;

    let mut l = l_start;
    let mut gamma_prev: Option<f64> = None;
    let mut gamma = f64::NAN;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0u32;
    let mut last_branch = Branch::ImplicitStationary;
    let mut last_residual = f64::NAN;

    while iterations < config.max_iters {
        iterations += 1;

        let snr_step = optimal_snr(l, payload_bits, traffic, config)?;
        gamma = match snr_step.variable {
            OptVariable::Snr { snr } => snr,
            _ => unreachable!("optimal_snr returns an SNR variable"),
        };
        trace.push(snr_step.achieved_esp);
        last_branch = snr_step.branch;
        last_residual = snr_step.residual;

        let l_step = optimal_blocklength(gamma, payload_bits, traffic, config)?;
        let l_new = match l_step.variable {
            OptVariable::Blocklength { blocklength } => blocklength,
            _ => unreachable!("optimal_blocklength returns a blocklength variable"),
        };
        trace.push(l_step.achieved_esp);

        let gamma_stable =
            gamma_prev.is_some_and(|gp| (gamma - gp).abs() <= 1e-6 * gp.abs());
        if l_new == l && gamma_stable {
            converged = true;
            break;
        }
        gamma_prev = Some(gamma);
        l = l_new;
    }

    let achieved_esp = esp_equal_snr(gamma, payload_bits, f64::from(l))?;
    Ok(OptimizationResult {
        variable: OptVariable::Joint {
            snr: gamma,
            blocklength: l,
        },
        branch: last_branch,
        achieved_esp,
        achieved_avg_sl: avg_sl_or_inf(achieved_esp, traffic)?,
        iterations,
        residual: last_residual,
        diagnostics: Diagnostics {
            grid_fallback: false,
            boundary: l == l_hi || l == l_lo,
            converged,
            esp_trace: trace,
        },
    })
}

/// Exact ESP in the equal-SNR regime at a (possibly non-integer) blocklength.
pub fn esp_equal_snr(snr: f64, payload_bits: u32, blocklength: f64) -> Result<f64> {
    Ok(security_probabilities(snr, snr, payload_bits, blocklength)?.p_esp)
}

fn avg_sl_or_inf(p_esp: f64, traffic: &TrafficParams) -> Result<f64> {
    match average_sl(p_esp, traffic.gen_prob, traffic.slot_duration) {
        Ok(v) => Ok(v),
        Err(Error::NoSecureTransmission) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

fn clamp_u32(x: f64, lo: u32, hi: u32) -> u32 {
    (x.max(f64::from(lo)).min(f64::from(hi))) as u32
}

fn cur_is_root(x: f64) -> bool {
    x == 0.0
}

fn argmax_esp_int(
    snr: f64,
    payload_bits: u32,
    cands: impl IntoIterator<Item = u32>,
) -> Result<(u32, f64)> {
    let mut best: Option<(u32, f64)> = None;
    for l in cands {
        let e = esp_equal_snr(snr, payload_bits, f64::from(l))?;
        if best.map_or(true, |(_, be)| e > be) {
            best = Some((l, e));
        }
    }
    best.ok_or_else(|| Error::domain("no candidate blocklength"))
}

fn beats_neighbors(snr: f64, payload_bits: u32, l: u32, l_lo: u32, l_hi: u32) -> Result<bool> {
    let e = esp_equal_snr(snr, payload_bits, f64::from(l))?;
    if l > l_lo && esp_equal_snr(snr, payload_bits, f64::from(l - 1))? > e {
        return Ok(false);
    }
    if l < l_hi && esp_equal_snr(snr, payload_bits, f64::from(l + 1))? > e {
        return Ok(false);
    }
    Ok(true)
}

fn log_grid_esp_argmax(
    payload_bits: u32,
    blocklength: f64,
    bounds: (f64, f64),
    points: usize,
) -> Result<(f64, f64)> {
    let (lo, hi) = bounds;
    let step = (hi / lo).ln() / (points as f64 - 1.0);
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..points {
        let x = lo * ((i as f64) * step).exp();
        let e = esp_equal_snr(x, payload_bits, blocklength)?;
        if e > best.1 {
            best = (x, e);
        }
    }
    Ok(best)
}

struct BisectOut {
    root: f64,
    f_root: f64,
    iterations: u32,
}

/// Bisection on a bracketed sign change. `f_lo` is the already-computed value
/// at `lo`. Stops when the bracket width drops below
/// `abs_tol + rel_tol * |mid|`.
fn bisect(
    f: &dyn Fn(f64) -> Result<f64>,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_iter: u32,
) -> Result<BisectOut> {
    let mut iterations = 0;
    let mut mid = 0.5 * (lo + hi);
    let mut f_mid = f(mid)?;
    while iterations < max_iter {
        mid = 0.5 * (lo + hi);
        f_mid = f(mid)?;
        iterations += 1;
        if f_mid == 0.0 {
            break;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= abs_tol + rel_tol * mid.abs() {
            break;
        }
    }
    Ok(BisectOut {
        root: mid,
        f_root: f_mid,
        iterations,
    })
}
