//! SNR gain at a target rate, read off piecewise-linear rate curves.

use crate::error::{Result, SimError};
use crate::sweep::CurvePoint;

/// A named rate-vs-SNR curve, `(snr_db, rate)` in increasing SNR order.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl Curve {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self { name: name.into(), points }
    }

    /// Split sweep output into one curve per scheme, named by scheme kind.
    pub fn from_sweep(points: &[CurvePoint]) -> Vec<Curve> {
        let mut curves: Vec<(polarform_core::Scheme, Curve)> = Vec::new();
        for p in points {
            match curves.iter_mut().find(|(s, _)| *s == p.scheme) {
                Some((_, c)) => c.points.push((p.snr_db, p.mean_rate)),
                None => curves.push((p.scheme, Curve::new(p.scheme.kind.name(), vec![(p.snr_db, p.mean_rate)]))),
            }
        }
        curves.into_iter().map(|(_, c)| c).collect()
    }

    /// SNR (dB) at which the curve first reaches `target`, interpolating
    /// linearly between grid points.
    pub fn snr_at_rate(&self, target: f64) -> Result<f64> {
        let out = || SimError::OutOfRange { curve: self.name.clone(), target };
        if !target.is_finite() {
            return Err(out());
        }
        if let Some(&(s, r)) = self.points.first() {
            if r == target {
                return Ok(s);
            }
        }
        for w in self.points.windows(2) {
            let ((s0, r0), (s1, r1)) = (w[0], w[1]);
            if r1 == target {
                return Ok(s1);
            }
            let lo = r0.min(r1);
            let hi = r0.max(r1);
            if r0 != r1 && lo <= target && target <= hi {
                return Ok(s0 + (target - r0) * (s1 - s0) / (r1 - r0));
            }
        }
        Err(out())
    }
}

/// `benchmark_snr − proposed_snr` at `target_rate`, in dB.
pub fn snr_gain_at_rate(proposed: &Curve, benchmark: &Curve, target_rate: f64) -> Result<f64> {
    Ok(benchmark.snr_at_rate(target_rate)? - proposed.snr_at_rate(target_rate)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainEntry {
    pub benchmark: String,
    pub snr_gain_db: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainReport {
    pub target_rate: f64,
    pub entries: Vec<GainEntry>,
}

impl GainReport {
    pub fn gain(&self, benchmark: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.benchmark == benchmark).map(|e| e.snr_gain_db)
    }
}

/// Gain of the curve named `proposed` over every other curve.
pub fn gain_report(curves: &[Curve], proposed: &str, target_rate: f64) -> Result<GainReport> {
    let base = curves
        .iter()
        .find(|c| c.name == proposed)
        .ok_or_else(|| SimError::config("schemes", format!("no curve named `{proposed}`")))?;
    let entries = curves
        .iter()
        .filter(|c| c.name != proposed)
        .map(|c| {
            Ok(GainEntry { benchmark: c.name.clone(), snr_gain_db: snr_gain_at_rate(base, c, target_rate)? })
        })
        .collect::<Result<_>>()?;
    Ok(GainReport { target_rate, entries })
}
