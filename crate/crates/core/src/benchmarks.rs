//! Reference schemes and a single entry point, [`evaluate`], that solves any
//! scheme on one channel realization.
//!
//! - SPRA switches each antenna between left- and right-handed circular
//!   polarization.
//! - PAA rotates a linearly polarized antenna to any angle; the best angle
//!   against a fixed effective vector is the dominant eigenvector of a real
//!   symmetric 2×2 matrix and has a closed form.
//! - CPA and LPA are fixed left-handed circular and vertical antennas.
//!
//! Transmit vectors are unit norm, receive vectors are not normalized.

use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use crate::channel::PolarizedChannel;
use crate::error::{PolarError, Result};
use crate::linalg::{CVec2, C64, J, ONE, ZERO};
use crate::optimizer::{
    alternate_multistart, coordinate_ascent, receive_polarforming, transmit_polarforming,
    AlternatingConfig,
};
use crate::polar::{
    channel_response, tx_vec, unit_phase_vec, LinkBudget, PhasePair,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeKind {
    Polarforming,
    Spra,
    Paa,
    Cpa,
    Lpa,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::Polarforming,
        SchemeKind::Spra,
        SchemeKind::Paa,
        SchemeKind::Cpa,
        SchemeKind::Lpa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Polarforming => "polarforming",
            SchemeKind::Spra => "spra",
            SchemeKind::Paa => "paa",
            SchemeKind::Cpa => "cpa",
            SchemeKind::Lpa => "lpa",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        SchemeKind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    pub fn is_fixed(self) -> bool {
        matches!(self, SchemeKind::Cpa | SchemeKind::Lpa)
    }
}

/// Which end of the link adapts its polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    TxOnly,
    RxOnly,
    Joint,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::TxOnly => "tx",
            Side::RxOnly => "rx",
            Side::Joint => "joint",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Side::TxOnly, Side::RxOnly, Side::Joint]
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

/// Fixed-polarization antennas used as the non-adaptive end of single-side
/// schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixedAntenna {
    /// Vertical linear polarization.
    Lpa,
    /// Left-handed circular polarization.
    Cpa,
}

impl FixedAntenna {
    pub fn tx_vector(self) -> CVec2 {
        match self {
            FixedAntenna::Lpa => CVec2::new(ONE, ZERO),
            FixedAntenna::Cpa => Handedness::Left.tx_vector(),
        }
    }

    pub fn rx_vector(self) -> CVec2 {
        match self {
            FixedAntenna::Lpa => CVec2::new(ONE, ZERO),
            FixedAntenna::Cpa => Handedness::Left.rx_vector(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FixedAntenna::Lpa => "lpa",
            FixedAntenna::Cpa => "cpa",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [FixedAntenna::Lpa, FixedAntenna::Cpa]
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

/// Circular polarization state of a switchable antenna.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Handedness {
    Left,
    Right,
}

impl Handedness {
    /// Enumeration order used for tie-breaking.
    pub const ORDER: [Handedness; 2] = [Handedness::Left, Handedness::Right];

    fn second(self) -> C64 {
        match self {
            Handedness::Left => J,
            Handedness::Right => -J,
        }
    }

    pub fn tx_vector(self) -> CVec2 {
        CVec2::new(ONE, self.second()).scale(C64::new(FRAC_1_SQRT_2, 0.0))
    }

    pub fn rx_vector(self) -> CVec2 {
        CVec2::new(ONE, self.second())
    }
}

/// PAA polarization angles, each in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PaaAngles {
    pub alpha: f64,
    pub beta: f64,
}

fn linear(angle: f64) -> CVec2 {
    CVec2::real(libm::cos(angle), libm::sin(angle))
}

/// A scheme to evaluate: what adapts, and what the other end is fixed to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scheme {
    pub kind: SchemeKind,
    pub side: Side,
    /// Polarization of the non-adaptive end; present iff `side != Joint`.
    pub counterpart: Option<CVec2>,
}

impl Scheme {
    pub fn joint(kind: SchemeKind) -> Self {
        Self { kind, side: Side::Joint, counterpart: None }
    }

    /// Transmitter adapts, receiver is `rx`.
    pub fn tx_only(kind: SchemeKind, rx: FixedAntenna) -> Self {
        Self { kind, side: Side::TxOnly, counterpart: Some(rx.rx_vector()) }
    }

    /// Receiver adapts, transmitter is `tx`.
    pub fn rx_only(kind: SchemeKind, tx: FixedAntenna) -> Self {
        Self { kind, side: Side::RxOnly, counterpart: Some(tx.tx_vector()) }
    }

    pub fn validate(&self) -> Result<()> {
        check_side(self.side, self.counterpart).map(|_| ())
    }
}

fn check_side(side: Side, fixed: Option<CVec2>) -> Result<Option<CVec2>> {
    match (side, fixed) {
        (Side::Joint, None) => Ok(None),
        (Side::Joint, Some(_)) => {
            Err(PolarError::ContractViolation("joint scheme takes no fixed counterpart"))
        }
        (_, None) => Err(PolarError::ContractViolation("single-side scheme needs a fixed counterpart")),
        (_, Some(v)) if !v.is_finite() => {
            Err(PolarError::ContractViolation("fixed counterpart has non-finite entries"))
        }
        (_, Some(v)) => Ok(Some(v)),
    }
}

/// How joint SPRA picks its two switch states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpraSearch {
    /// Switch the receiver, then the transmitter, from LHCP/LHCP, under the
    /// same stopping rule as the phase optimization.
    #[default]
    Alternating,
    /// Try all four combinations.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolverOptions {
    pub alt: AlternatingConfig,
    pub spra: SpraSearch,
}

/// The configuration a scheme settled on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeConfig {
    Phases(PhasePair),
    Switch { tx: Option<Handedness>, rx: Option<Handedness> },
    Angles { alpha: Option<f64>, beta: Option<f64> },
    Fixed,
}

/// Outcome of a scheme on one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeResult {
    /// Effective channel power gain `|p_rᴴ P p_t|²`.
    pub gain: f64,
    pub tx: CVec2,
    pub rx: CVec2,
    pub config: SchemeConfig,
    /// Update iterations used by iterative solvers, 0 otherwise.
    pub iterations: u32,
}

impl SchemeResult {
    fn new(ch: &PolarizedChannel, tx: CVec2, rx: CVec2, config: SchemeConfig) -> Self {
        Self { gain: gain_of(ch, &tx, &rx), tx, rx, config, iterations: 0 }
    }

    pub fn snr(&self, budget: &LinkBudget) -> f64 {
        self.gain * budget.ratio()
    }

    pub fn rate(&self, budget: &LinkBudget) -> f64 {
        libm::log2(1.0 + self.snr(budget))
    }
}

fn gain_of(ch: &PolarizedChannel, tx: &CVec2, rx: &CVec2) -> f64 {
    channel_response(&ch.p, tx, rx).norm_sqr()
}

/// Best SPRA configuration by enumeration (transmit-major, LHCP first; the
/// first maximum wins ties).
pub fn spra_best(ch: &PolarizedChannel, side: Side, fixed: Option<CVec2>) -> Result<SchemeResult> {
    let fixed = check_side(side, fixed)?;
    let mut best: Option<SchemeResult> = None;
    let mut consider = |cand: SchemeResult| {
        if best.map_or(true, |b| cand.gain > b.gain) {
            best = Some(cand);
        }
    };
    match (side, fixed) {
        (Side::TxOnly, Some(rx)) => {
            for t in Handedness::ORDER {
                let cfg = SchemeConfig::Switch { tx: Some(t), rx: None };
                consider(SchemeResult::new(ch, t.tx_vector(), rx, cfg));
            }
        }
        (Side::RxOnly, Some(tx)) => {
            for r in Handedness::ORDER {
                let cfg = SchemeConfig::Switch { tx: None, rx: Some(r) };
                consider(SchemeResult::new(ch, tx, r.rx_vector(), cfg));
            }
        }
        _ => {
            for t in Handedness::ORDER {
                for r in Handedness::ORDER {
                    let cfg = SchemeConfig::Switch { tx: Some(t), rx: Some(r) };
                    consider(SchemeResult::new(ch, t.tx_vector(), r.rx_vector(), cfg));
                }
            }
        }
    }
    Ok(best.expect("at least two candidates"))
}

fn best_switch(gain: impl Fn(Handedness) -> f64) -> Handedness {
    if gain(Handedness::Right) > gain(Handedness::Left) {
        Handedness::Right
    } else {
        Handedness::Left
    }
}

/// Joint SPRA by alternating switch updates from LHCP/LHCP.
pub fn spra_alternating(
    ch: &PolarizedChannel,
    budget: &LinkBudget,
    cfg: &AlternatingConfig,
) -> Result<SchemeResult> {
    cfg.validate()?;
    let ascent = coordinate_ascent(
        (Handedness::Left, Handedness::Left),
        |&(t, r)| gain_of(ch, &t.tx_vector(), &r.rx_vector()) * budget.ratio(),
        |&(t, _)| {
            let r = best_switch(|r| gain_of(ch, &t.tx_vector(), &r.rx_vector()));
            let t = best_switch(|t| gain_of(ch, &t.tx_vector(), &r.rx_vector()));
            (t, r)
        },
        cfg.epsilon,
        cfg.i_max,
        cfg.stop,
    );
    let &((t, r), _) = ascent.steps.last().expect("ascent records its start");
    let mut res = SchemeResult::new(
        ch,
        t.tx_vector(),
        r.rx_vector(),
        SchemeConfig::Switch { tx: Some(t), rx: Some(r) },
    );
    res.iterations = ascent.steps.len() as u32 - 1;
    Ok(res)
}

/// Angle `β ∈ [0, π)` maximizing `|[cos β, sin β]·v|²`.
///
/// The objective is `qᵀ M q` with `M = Re(v vᴴ)`, maximized by
/// `β = ½·atan2(2·M₁₂, M₁₁ − M₂₂)`. Angle-blind inputs (`v = 0`, or circular
/// `v`) return 0.
pub fn paa_best_angle(v: &CVec2) -> f64 {
    let (m11, m22, m12) = paa_form(v);
    let b = 0.5 * libm::atan2(2.0 * m12, m11 - m22);
    let b = if b < 0.0 { b + PI } else { b };
    if b >= PI {
        0.0
    } else {
        b
    }
}

/// `λ_max(Re(v vᴴ))`, the gain [`paa_best_angle`] achieves.
pub fn paa_max_gain(v: &CVec2) -> f64 {
    let (m11, m22, m12) = paa_form(v);
    let half = 0.5 * (m11 - m22);
    0.5 * (m11 + m22) + libm::sqrt(half * half + m12 * m12)
}

fn paa_form(v: &CVec2) -> (f64, f64, f64) {
    (v.e0.norm_sqr(), v.e1.norm_sqr(), (v.e0 * v.e1.conj()).re)
}

/// Best PAA configuration. Single-side cases use the closed form directly;
/// the joint case alternates receive and transmit angle updates starting
/// from a vertical transmitter (plus 45°, 90° and 135° transmit starts when
/// `cfg.multi_start` is set).
pub fn paa_best(
    ch: &PolarizedChannel,
    side: Side,
    fixed: Option<CVec2>,
    budget: &LinkBudget,
    cfg: &AlternatingConfig,
) -> Result<SchemeResult> {
    let fixed = check_side(side, fixed)?;
    match (side, fixed) {
        (Side::TxOnly, Some(rx)) => {
            let alpha = paa_best_angle(&ch.p.adjoint_mul_vec(&rx));
            let cfg = SchemeConfig::Angles { alpha: Some(alpha), beta: None };
            Ok(SchemeResult::new(ch, linear(alpha), rx, cfg))
        }
        (Side::RxOnly, Some(tx)) => {
            let beta = paa_best_angle(&ch.p.mul_vec(&tx));
            let cfg = SchemeConfig::Angles { alpha: None, beta: Some(beta) };
            Ok(SchemeResult::new(ch, tx, linear(beta), cfg))
        }
        _ => {
            cfg.validate()?;
            let starts: &[f64] = if cfg.multi_start { &[0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4] } else { &[0.0] };
            let mut best: Option<SchemeResult> = None;
            for &alpha0 in starts {
                let res = paa_joint_from(ch, alpha0, budget, cfg);
                if best.map_or(true, |b| res.gain > b.gain) {
                    best = Some(res);
                }
            }
            Ok(best.expect("at least one start"))
        }
    }
}

fn paa_joint_from(
    ch: &PolarizedChannel,
    alpha0: f64,
    budget: &LinkBudget,
    cfg: &AlternatingConfig,
) -> SchemeResult {
    let ascent = coordinate_ascent(
        PaaAngles { alpha: alpha0, beta: 0.0 },
        |a| gain_of(ch, &linear(a.alpha), &linear(a.beta)) * budget.ratio(),
        |a| {
            let beta = paa_best_angle(&ch.p.mul_vec(&linear(a.alpha)));
            let alpha = paa_best_angle(&ch.p.adjoint_mul_vec(&linear(beta)));
            PaaAngles { alpha, beta }
        },
        cfg.epsilon,
        cfg.i_max,
        cfg.stop,
    );
    let &(a, _) = ascent.steps.last().expect("ascent records its start");
    let mut res = SchemeResult::new(
        ch,
        linear(a.alpha),
        linear(a.beta),
        SchemeConfig::Angles { alpha: Some(a.alpha), beta: Some(a.beta) },
    );
    res.iterations = ascent.steps.len() as u32 - 1;
    res
}

/// Both ends fixed to the same antenna type.
pub fn fixed_scheme(ch: &PolarizedChannel, kind: FixedAntenna) -> SchemeResult {
    SchemeResult::new(ch, kind.tx_vector(), kind.rx_vector(), SchemeConfig::Fixed)
}

fn fixed_kind(kind: SchemeKind) -> Option<FixedAntenna> {
    match kind {
        SchemeKind::Cpa => Some(FixedAntenna::Cpa),
        SchemeKind::Lpa => Some(FixedAntenna::Lpa),
        _ => None,
    }
}

/// Solve `scheme` on one realization.
///
/// For single-side CPA/LPA the adaptive end is replaced by the fixed antenna
/// and the other end keeps the counterpart, which gives the fixed baseline
/// of a transmit-only or receive-only comparison.
pub fn evaluate(
    ch: &PolarizedChannel,
    scheme: &Scheme,
    opts: &SolverOptions,
    budget: &LinkBudget,
) -> Result<SchemeResult> {
    let fixed = check_side(scheme.side, scheme.counterpart)?;
    match (scheme.kind, scheme.side, fixed) {
        (SchemeKind::Polarforming, Side::Joint, _) => {
            let trace = alternate_multistart(ch, budget, &opts.alt)?;
            let ph = trace.final_phases;
            let mut res = SchemeResult::new(ch, tx_vec(ph.theta), unit_phase_vec(ph.phi), SchemeConfig::Phases(ph));
            res.iterations = trace.iteration_count();
            Ok(res)
        }
        (SchemeKind::Polarforming, Side::TxOnly, Some(rx)) => {
            let (theta, _) = transmit_polarforming(ch, &rx, budget)?;
            let cfg = SchemeConfig::Phases(PhasePair { theta, phi: f64::NAN });
            Ok(SchemeResult::new(ch, tx_vec(theta), rx, cfg))
        }
        (SchemeKind::Polarforming, Side::RxOnly, Some(tx)) => {
            let (phi, _) = receive_polarforming(ch, &tx, budget)?;
            let cfg = SchemeConfig::Phases(PhasePair { theta: f64::NAN, phi });
            Ok(SchemeResult::new(ch, tx, unit_phase_vec(phi), cfg))
        }
        (SchemeKind::Spra, Side::Joint, _) if opts.spra == SpraSearch::Alternating => {
            spra_alternating(ch, budget, &opts.alt)
        }
        (SchemeKind::Spra, side, fixed) => spra_best(ch, side, fixed),
        (SchemeKind::Paa, side, fixed) => paa_best(ch, side, fixed, budget, &opts.alt),
        (kind, side, fixed) => {
            let ant = fixed_kind(kind).expect("remaining kinds are fixed antennas");
            Ok(match (side, fixed) {
                (Side::TxOnly, Some(rx)) => SchemeResult::new(ch, ant.tx_vector(), rx, SchemeConfig::Fixed),
                (Side::RxOnly, Some(tx)) => SchemeResult::new(ch, tx, ant.rx_vector(), SchemeConfig::Fixed),
                _ => fixed_scheme(ch, ant),
            })
        }
    }
}
