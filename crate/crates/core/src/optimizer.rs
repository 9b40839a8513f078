//! Polarforming solvers.
//!
//! With the transmit phase fixed, the receive phase maximizing `|gᴴ P f|²` is
//! the argument of `[b bᴴ]₂₁` with `b = P f(θ)`; with the receive phase fixed,
//! the transmit phase is the argument of `[d dᴴ]₂₁` with `d = Pᴴ g(φ)`. Both
//! follow from [`crate::polar::optimal_phase_hermitian`]. [`alternate`] chains
//! the two updates until the SNR stops increasing.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use crate::channel::PolarizedChannel;
use crate::error::{ensure_finite, PolarError, Result};
use crate::linalg::CVec2;
use crate::polar::{
    channel_response, phase_of_lower, rate, rx_pfv, snr, tx_pfv, tx_vec, unit_phase_vec, LinkBudget,
    PhasePair,
};

/// Guard for the relative-increase denominator when the SNR is zero.
const TINY: f64 = 1e-300;

/// Tolerance on `‖p_t‖ = 1` for fixed transmit vectors.
pub const UNIT_NORM_TOL: f64 = 1e-9;

/// When an alternating ascent stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StopRule {
    /// `(γᵢ − γᵢ₋₁) / max(γᵢ₋₁, 1e-300) < ε`
    #[default]
    Relative,
    /// `γᵢ − γᵢ₋₁ < ε`
    Absolute,
}

impl StopRule {
    pub fn should_stop(self, prev: f64, cur: f64, epsilon: f64) -> bool {
        let inc = cur - prev;
        match self {
            StopRule::Relative => inc / prev.max(TINY) < epsilon,
            StopRule::Absolute => inc < epsilon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingConfig {
    pub epsilon: f64,
    pub i_max: u32,
    pub theta0: f64,
    pub phi0: f64,
    pub stop: StopRule,
    /// Also start from `θ0 + π/2`, `θ0 + π` and `θ0 + 3π/2` and keep the best
    /// run. A single start can settle on a local maximum of the joint
    /// objective.
    pub multi_start: bool,
}

impl Default for AlternatingConfig {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            i_max: 20,
            theta0: 0.0,
            phi0: 0.0,
            stop: StopRule::Relative,
            multi_start: true,
        }
    }
}

impl AlternatingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(PolarError::InvalidArgument { name: "epsilon", value: self.epsilon });
        }
        if self.i_max < 1 {
            return Err(PolarError::InvalidArgument { name: "i_max", value: self.i_max as f64 });
        }
        ensure_finite("theta0", self.theta0)?;
        ensure_finite("phi0", self.phi0)?;
        Ok(())
    }

    /// The literal single-start procedure.
    pub fn single_start(self) -> Self {
        Self { multi_start: false, ..self }
    }
}

/// One iterate of the alternating optimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterRecord {
    pub iter: u32,
    pub theta: f64,
    pub phi: f64,
    pub snr: f64,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimTrace {
    /// Iterates starting at iteration 0 (the initial point).
    pub iterations: Vec<IterRecord>,
    pub converged: bool,
    pub final_phases: PhasePair,
}

impl OptimTrace {
    pub fn last(&self) -> &IterRecord {
        // never empty: iteration 0 is always recorded
        self.iterations.last().expect("trace holds iteration 0")
    }

    pub fn final_snr(&self) -> f64 {
        self.last().snr
    }

    pub fn final_rate(&self) -> f64 {
        self.last().rate
    }

    /// Number of update iterations performed (iteration 0 excluded).
    pub fn iteration_count(&self) -> u32 {
        self.last().iter
    }

    /// Rate at iteration `i`, holding the last value after termination.
    pub fn rate_at(&self, i: usize) -> f64 {
        self.iterations[i.min(self.iterations.len() - 1)].rate
    }
}

/// Result of a generic coordinate ascent: visited states with their SNR.
pub(crate) struct Ascent<S> {
    pub steps: Vec<(S, f64)>,
    pub converged: bool,
}

/// Run `step` from `init` until the SNR increase falls under the stopping
/// rule or `i_max` updates were made. A step that lowers the SNR (roundoff at
/// a fixed point) is rejected and ends the ascent, so the recorded SNR
/// sequence is non-decreasing.
pub(crate) fn coordinate_ascent<S: Copy>(
    init: S,
    eval: impl Fn(&S) -> f64,
    step: impl Fn(&S) -> S,
    epsilon: f64,
    i_max: u32,
    stop: StopRule,
) -> Ascent<S> {
    let mut steps = Vec::with_capacity(i_max as usize + 1);
    let mut state = init;
    let mut value = eval(&state);
    steps.push((state, value));
    let mut converged = false;
    for _ in 0..i_max {
        let next = step(&state);
        let next_value = eval(&next);
        if next_value < value {
            steps.push((state, value));
            converged = true;
            break;
        }
        let done = stop.should_stop(value, next_value, epsilon);
        state = next;
        value = next_value;
        steps.push((state, value));
        if done {
            converged = true;
            break;
        }
    }
    Ascent { steps, converged }
}

fn receive_phase_for(ch: &PolarizedChannel, f: &CVec2) -> f64 {
    let b = ch.p.mul_vec(f);
    // b bᴴ is Hermitian by construction
    phase_of_lower(b.outer_h(&b).m21)
}

fn transmit_phase_for(ch: &PolarizedChannel, g: &CVec2) -> f64 {
    let d = ch.p.adjoint_mul_vec(g);
    phase_of_lower(d.outer_h(&d).m21)
}

/// Receive phase maximizing the SNR for a fixed transmit phase.
pub fn optimal_receive_phase(ch: &PolarizedChannel, theta: f64) -> Result<f64> {
    Ok(receive_phase_for(ch, &tx_pfv(theta)?))
}

/// Transmit phase maximizing the SNR for a fixed receive phase.
pub fn optimal_transmit_phase(ch: &PolarizedChannel, phi: f64) -> Result<f64> {
    Ok(transmit_phase_for(ch, &rx_pfv(phi)?))
}

/// Receive-only polarforming against a fixed transmit polarization.
///
/// Returns the receive phase and the achieved rate. `pt_fixed` must have
/// unit norm.
pub fn receive_polarforming(
    ch: &PolarizedChannel,
    pt_fixed: &CVec2,
    budget: &LinkBudget,
) -> Result<(f64, f64)> {
    if !pt_fixed.is_finite() || (pt_fixed.norm() - 1.0).abs() > UNIT_NORM_TOL {
        return Err(PolarError::ContractViolation("fixed transmit vector must have unit norm"));
    }
    let phi = receive_phase_for(ch, pt_fixed);
    let h = channel_response(&ch.p, pt_fixed, &unit_phase_vec(phi));
    Ok((phi, rate(snr(h, budget))?))
}

/// Transmit-only polarforming against a fixed (unnormalized) receive
/// polarization. Returns the transmit phase and the achieved rate.
pub fn transmit_polarforming(
    ch: &PolarizedChannel,
    pr_fixed: &CVec2,
    budget: &LinkBudget,
) -> Result<(f64, f64)> {
    if !pr_fixed.is_finite() {
        return Err(PolarError::ContractViolation("fixed receive vector has non-finite entries"));
    }
    let theta = transmit_phase_for(ch, pr_fixed);
    let h = channel_response(&ch.p, &tx_pfv(theta)?, pr_fixed);
    Ok((theta, rate(snr(h, budget))?))
}

fn phases_snr(ch: &PolarizedChannel, phases: &PhasePair, budget: &LinkBudget) -> f64 {
    let f = tx_vec(phases.theta);
    snr(channel_response(&ch.p, &f, &unit_phase_vec(phases.phi)), budget)
}

/// Alternating optimization of both phases from `(cfg.theta0, cfg.phi0)`.
///
/// Each iteration updates the receive phase for the current transmit phase
/// and then the transmit phase for the new receive phase; the stopping test
/// uses the SNR after both updates. `cfg.multi_start` is ignored here, see
/// [`alternate_multistart`].
pub fn alternate(
    ch: &PolarizedChannel,
    budget: &LinkBudget,
    cfg: &AlternatingConfig,
) -> Result<OptimTrace> {
    cfg.validate()?;
    let init = PhasePair::new(cfg.theta0, cfg.phi0);
    let ascent = coordinate_ascent(
        init,
        |s| phases_snr(ch, s, budget),
        |s| {
            let phi = receive_phase_for(ch, &tx_vec(s.theta));
            let theta = transmit_phase_for(ch, &unit_phase_vec(phi));
            PhasePair { theta, phi }
        },
        cfg.epsilon,
        cfg.i_max,
        cfg.stop,
    );
    let mut iterations = Vec::with_capacity(ascent.steps.len());
    for (i, (s, gamma)) in ascent.steps.iter().enumerate() {
        iterations.push(IterRecord {
            iter: i as u32,
            theta: s.theta,
            phi: s.phi,
            snr: *gamma,
            rate: rate(*gamma)?,
        });
    }
    let final_phases = ascent.steps.last().map(|(s, _)| *s).unwrap_or(init);
    Ok(OptimTrace { iterations, converged: ascent.converged, final_phases })
}

/// [`alternate`] from every start in `cfg` (four quarter-turn transmit
/// phases when `cfg.multi_start` is set), merged in lockstep.
///
/// Entry `i` of the merged trace is the best SNR any run holds at its
/// iteration `i` (runs that already stopped keep their last iterate), so the
/// sequence stays non-decreasing and ends at the best run's final point.
/// Ties go to the earliest start, i.e. to `(theta0, phi0)`.
pub fn alternate_multistart(
    ch: &PolarizedChannel,
    budget: &LinkBudget,
    cfg: &AlternatingConfig,
) -> Result<OptimTrace> {
    if !cfg.multi_start {
        return alternate(ch, budget, cfg);
    }
    let mut runs = Vec::with_capacity(4);
    for k in 0..4 {
        let start = AlternatingConfig { theta0: cfg.theta0 + k as f64 * FRAC_PI_2, ..*cfg };
        runs.push(alternate(ch, budget, &start)?);
    }
    let len = runs.iter().map(|r| r.iterations.len()).max().unwrap_or(1);
    let mut iterations = Vec::with_capacity(len);
    for i in 0..len {
        let mut best = runs[0].iterations[i.min(runs[0].iterations.len() - 1)];
        for run in &runs[1..] {
            let rec = run.iterations[i.min(run.iterations.len() - 1)];
            if rec.snr > best.snr {
                best = rec;
            }
        }
        best.iter = i as u32;
        iterations.push(best);
    }
    let last = iterations[len - 1];
    Ok(OptimTrace {
        iterations,
        converged: runs.iter().all(|r| r.converged),
        final_phases: PhasePair { theta: last.theta, phi: last.phi },
    })
}
