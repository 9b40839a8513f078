//! Monte Carlo sweep engine.
//!
//! Trial `t` draws its channel from stream `(master_seed, t)`, and every
//! scheme and SNR point reuses that realization (common random numbers).
//! Trials run on the current rayon pool; per-trial results are collected by
//! trial index and reduced sequentially, so output does not depend on the
//! number of threads.

use polarform_core::channel::{draw_channel_with, HiidNormalization};
use polarform_core::{
    alternate_multistart, evaluate, CMat2, LinkBudget, PolarizedChannel, RngStream, Scheme,
    SolverOptions, StopRule,
};
use rayon::prelude::*;

use crate::error::{Result, SimError};
use crate::stats::mean_stderr;

/// Where channel realizations come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSource {
    Rayleigh(HiidNormalization),
    /// Every trial sees this matrix.
    Fixed(CMat2),
}

impl Default for ChannelSource {
    fn default() -> Self {
        ChannelSource::Rayleigh(HiidNormalization::UnitVariance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub schemes: Vec<Scheme>,
    pub snr_grid_db: Vec<f64>,
    pub chi: f64,
    pub trials: u64,
    pub master_seed: u64,
    pub opts: SolverOptions,
    pub source: ChannelSource,
}

impl SweepSpec {
    pub fn new(schemes: Vec<Scheme>, snr_grid_db: Vec<f64>, chi: f64, trials: u64, master_seed: u64) -> Self {
        Self {
            schemes,
            snr_grid_db,
            chi,
            trials,
            master_seed,
            opts: SolverOptions::default(),
            source: ChannelSource::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_common(&self.snr_grid_db, self.chi, self.trials, &self.opts)?;
        if self.schemes.is_empty() {
            return Err(SimError::config("schemes", "at least one scheme is required"));
        }
        for s in &self.schemes {
            s.validate().map_err(|e| SimError::config("schemes", e.to_string()))?;
        }
        Ok(())
    }
}

fn validate_common(snr_grid_db: &[f64], chi: f64, trials: u64, opts: &SolverOptions) -> Result<()> {
    if trials < 1 {
        return Err(SimError::config("trials", "must be at least 1"));
    }
    if !(chi.is_finite() && chi >= 0.0) {
        return Err(SimError::config("chi", format!("must be a finite value >= 0, got {chi}")));
    }
    if snr_grid_db.is_empty() {
        return Err(SimError::config("snr", "SNR grid is empty"));
    }
    if snr_grid_db.iter().any(|x| !x.is_finite()) {
        return Err(SimError::config("snr", "SNR grid has non-finite values"));
    }
    if snr_grid_db.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SimError::config("snr", "SNR grid must be strictly increasing"));
    }
    opts.alt.validate().map_err(|e| match e {
        polarform_core::PolarError::InvalidArgument { name, value } => {
            SimError::config(if name == "i_max" { "imax" } else { name }, format!("invalid value {value}"))
        }
        other => other.into(),
    })
}

fn channel_for(source: &ChannelSource, seed: u64, trial: u64, chi: f64) -> Result<PolarizedChannel> {
    Ok(match source {
        ChannelSource::Rayleigh(norm) => draw_channel_with(RngStream::new(seed, trial), chi, *norm)?,
        ChannelSource::Fixed(p) => PolarizedChannel { p: *p, chi },
    })
}

fn budgets(grid: &[f64]) -> Result<Vec<LinkBudget>> {
    grid.iter().map(|&s| Ok(LinkBudget::from_snr_db(s)?)).collect()
}

/// One averaged point of a rate-vs-SNR curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub chi: f64,
    pub trials: u64,
    pub mean_rate: f64,
    pub stderr: f64,
}

/// Rates of every scheme at every SNR for one trial, scheme-major.
fn trial_rates(spec: &SweepSpec, budgets: &[LinkBudget], trial: u64) -> Result<Vec<f64>> {
    let ch = channel_for(&spec.source, spec.master_seed, trial, spec.chi)?;
    let mut out = Vec::with_capacity(spec.schemes.len() * budgets.len());
    for scheme in &spec.schemes {
        if spec.opts.alt.stop == StopRule::Relative {
            // relative stopping is scale-free, so one solve serves all SNRs
            let res = evaluate(&ch, scheme, &spec.opts, &LinkBudget::unit())?;
            out.extend(budgets.iter().map(|b| res.rate(b)));
        } else {
            for b in budgets {
                out.push(evaluate(&ch, scheme, &spec.opts, b)?.rate(b));
            }
        }
    }
    Ok(out)
}

/// Average achievable rate of each scheme at each SNR point. Points are
/// ordered scheme-major, following `spec.schemes` and `spec.snr_grid_db`.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<CurvePoint>> {
    spec.validate()?;
    let budgets = budgets(&spec.snr_grid_db)?;
    let per_trial: Vec<Vec<f64>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| trial_rates(spec, &budgets, t))
        .collect::<Result<_>>()?;
    let n_snr = budgets.len();
    let mut points = Vec::with_capacity(spec.schemes.len() * n_snr);
    let mut column = Vec::with_capacity(per_trial.len());
    for (si, scheme) in spec.schemes.iter().enumerate() {
        for (k, &snr_db) in spec.snr_grid_db.iter().enumerate() {
            column.clear();
            column.extend(per_trial.iter().map(|r| r[si * n_snr + k]));
            let (mean_rate, stderr) = mean_stderr(&column);
            points.push(CurvePoint {
                scheme: *scheme,
                snr_db,
                chi: spec.chi,
                trials: spec.trials,
                mean_rate,
                stderr,
            });
        }
    }
    Ok(points)
}

/// Per-realization rates of each scheme at one SNR, trial-major. Used by
/// checks that need paired samples rather than averages.
pub fn per_trial_rates(spec: &SweepSpec, snr_db: f64) -> Result<Vec<Vec<f64>>> {
    let single = SweepSpec { snr_grid_db: vec![snr_db], ..spec.clone() };
    single.validate()?;
    let budgets = budgets(&single.snr_grid_db)?;
    (0..single.trials)
        .into_par_iter()
        .map(|t| trial_rates(&single, &budgets, t))
        .collect()
}

/// Mean rate after each iteration of the polarforming solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub snr_db: f64,
    pub iteration: u32,
    pub mean_rate: f64,
}

/// Mean achievable rate at iterations `0..=i_max` of the alternating
/// optimization, one block of rows per SNR value. Runs that stop early hold
/// their final rate.
pub fn run_convergence(
    snr_grid_db: &[f64],
    chi: f64,
    trials: u64,
    master_seed: u64,
    opts: &SolverOptions,
    source: &ChannelSource,
) -> Result<Vec<ConvergenceRow>> {
    validate_common(snr_grid_db, chi, trials, opts)?;
    let budgets = budgets(snr_grid_db)?;
    let width = opts.alt.i_max as usize + 1;
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ch = channel_for(source, master_seed, t, chi)?;
            let mut row = Vec::with_capacity(budgets.len() * width);
            for b in &budgets {
                let trace = alternate_multistart(&ch, b, &opts.alt)?;
                row.extend((0..width).map(|i| trace.rate_at(i)));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(budgets.len() * width);
    let mut column = Vec::with_capacity(per_trial.len());
    for (k, &snr_db) in snr_grid_db.iter().enumerate() {
        for i in 0..width {
            column.clear();
            column.extend(per_trial.iter().map(|r| r[k * width + i]));
            let (mean_rate, _) = mean_stderr(&column);
            rows.push(ConvergenceRow { snr_db, iteration: i as u32, mean_rate });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use polarform_core::{FixedAntenna, SchemeKind};

    #[test]
    fn identity_hook_gives_one_bit() {
        let mut spec = SweepSpec::new(vec![Scheme::joint(SchemeKind::Lpa)], vec![0.0], 0.2, 1, 0);
        spec.source = ChannelSource::Fixed(CMat2::identity());
        let pts = run_sweep(&spec).unwrap();
        assert_eq!(pts.len(), 1);
        assert!((pts[0].mean_rate - 1.0).abs() < 1e-15);
        assert_eq!(pts[0].stderr, 0.0);
    }

    #[test]
    fn invalid_specs_rejected() {
        let ok = SweepSpec::new(vec![Scheme::joint(SchemeKind::Cpa)], vec![0.0, 1.0], 0.2, 10, 0);
        assert!(ok.validate().is_ok());
        let bad = SweepSpec { trials: 0, ..ok.clone() };
        assert!(matches!(run_sweep(&bad), Err(SimError::Config { key, .. }) if key == "trials"));
        let bad = SweepSpec { snr_grid_db: vec![1.0, 1.0], ..ok.clone() };
        assert!(run_sweep(&bad).is_err());
        let bad = SweepSpec { chi: -0.5, ..ok.clone() };
        assert!(matches!(run_sweep(&bad), Err(SimError::Config { key, .. }) if key == "chi"));
        let mut bad = ok.clone();
        bad.schemes[0].counterpart = Some(FixedAntenna::Lpa.rx_vector());
        assert!(run_sweep(&bad).is_err());
        let mut bad = ok.clone();
        bad.opts.alt.i_max = 0;
        assert!(matches!(run_sweep(&bad), Err(SimError::Config { key, .. }) if key == "imax"));
    }

    #[test]
    fn convergence_identity_is_flat() {
        let rows = run_convergence(
            &[0.0],
            0.2,
            1,
            0,
            &SolverOptions::default(),
            &ChannelSource::Fixed(CMat2::identity()),
        )
        .unwrap();
        assert_eq!(rows.len(), 21);
        assert!(rows.iter().all(|r| (r.mean_rate - 3f64.log2()).abs() < 1e-14));
    }

    #[test]
    fn absolute_rule_solves_per_point() {
        let mut spec = SweepSpec::new(vec![Scheme::joint(SchemeKind::Polarforming)], vec![0.0, 10.0], 0.2, 20, 3);
        let rel = run_sweep(&spec).unwrap();
        spec.opts.alt.stop = StopRule::Absolute;
        spec.opts.alt.epsilon = 1e-9;
        let abs = run_sweep(&spec).unwrap();
        for (a, b) in rel.iter().zip(&abs) {
            assert!((a.mean_rate - b.mean_rate).abs() < 1e-2);
        }
    }
}
