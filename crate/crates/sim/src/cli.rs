//! `polarform` command line.
//!
//! Every subcommand accepts the same flags (and `--config <file>`, see
//! [`crate::config`]). All settings are validated and all results computed
//! before any file is written.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use polarform_core::{FixedAntenna, Scheme, SchemeKind, Side};

use crate::config::{Defaults, FileConfig, Settings};
use crate::error::{Result, SimError};
use crate::gains::{gain_report, Curve};
use crate::output::{convergence_csv, curves_csv, gains_csv, write_file};
use crate::sweep::{run_convergence, run_sweep, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "polarform", version, about = "Polarforming rate simulations over depolarizing Rayleigh channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean rate per iteration of the alternating phase optimization
    /// (default SNRs 0, 5, 10 dB).
    Converge(CommonArgs),
    /// Transmit-only adaptation against a fixed LPA and a fixed CPA receiver;
    /// writes `<out>-lpa` and `<out>-cpa`.
    Tx(CommonArgs),
    /// Receive-only adaptation against a fixed LPA and a fixed CPA
    /// transmitter; writes `<out>-lpa` and `<out>-cpa`.
    Rx(CommonArgs),
    /// Both ends adapt: rate curves of all schemes.
    Joint(CommonArgs),
    /// Joint sweep plus SNR gains of polarforming over each benchmark at the
    /// target rate; writes the report to `<out>` and curves to
    /// `<out>-curves`.
    Gains(CommonArgs),
    /// Custom sweep: choose schemes, side and fixed counterpart.
    Sweep(CommonArgs),
}

#[derive(Debug, Default, Clone, Args)]
pub struct CommonArgs {
    /// Inverse cross-polarization discrimination (default 0.2)
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<f64>,
    /// Monte Carlo channel realizations (default 10000)
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed; trial t uses random stream t (default 1)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Lowest SNR in dB
    #[arg(long, allow_hyphen_values = true)]
    pub snr_min: Option<f64>,
    /// Highest SNR in dB (inclusive)
    #[arg(long, allow_hyphen_values = true)]
    pub snr_max: Option<f64>,
    /// SNR grid step in dB
    #[arg(long, allow_hyphen_values = true)]
    pub snr_step: Option<f64>,
    /// Stopping threshold on the SNR increase per iteration (default 1e-3)
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// Maximum iterations of the alternating optimization (default 20)
    #[arg(long)]
    pub imax: Option<u32>,
    /// Target rate in bps/Hz for gain extraction (default 4)
    #[arg(long, allow_hyphen_values = true)]
    pub target_rate: Option<f64>,
    /// Output file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat TOML file with the same keys (snake_case); flags win
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Comma-separated schemes: polarforming,spra,paa,cpa,lpa
    #[arg(long, value_delimiter = ',')]
    pub schemes: Option<Vec<String>>,
    /// Adaptive side for `sweep`: joint, tx or rx
    #[arg(long)]
    pub side: Option<String>,
    /// Fixed antenna at the other end for `sweep --side tx|rx`: lpa or cpa
    #[arg(long)]
    pub counterpart: Option<String>,
    /// Joint SPRA selection: alternating or exhaustive
    #[arg(long)]
    pub spra_search: Option<String>,
    /// Run the alternating optimizations from a single start point
    #[arg(long)]
    pub single_start: bool,
    /// Stopping rule: relative or absolute
    #[arg(long)]
    pub stop_rule: Option<String>,
    /// Channel entry scale: unit or variance-inv-sqrt2
    #[arg(long)]
    pub normalization: Option<String>,
}

impl CommonArgs {
    fn as_overrides(&self) -> FileConfig {
        FileConfig {
            chi: self.chi,
            trials: self.trials,
            seed: self.seed,
            snr_min: self.snr_min,
            snr_max: self.snr_max,
            snr_step: self.snr_step,
            epsilon: self.epsilon,
            imax: self.imax,
            target_rate: self.target_rate,
            out: self.out.clone(),
            threads: self.threads,
            schemes: self.schemes.clone(),
            side: self.side.clone(),
            counterpart: self.counterpart.clone(),
            spra_search: self.spra_search.clone(),
            single_start: self.single_start.then_some(true),
            stop_rule: self.stop_rule.clone(),
            normalization: self.normalization.clone(),
        }
    }

    pub fn settings(&self, defaults: Defaults) -> Result<Settings> {
        let base = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Settings::resolve(&base.overridden_by(self.as_overrides()), defaults)
    }
}

const SWEEP_DEFAULTS: Defaults = Defaults { snr_min: -5.0, snr_max: 20.0, snr_step: 1.0, out: "sweep.csv" };

/// `dir/stem-suffix.ext`
pub fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}-{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{suffix}"),
    };
    path.with_file_name(name)
}

fn spec(s: &Settings, schemes: Vec<Scheme>) -> SweepSpec {
    SweepSpec {
        schemes,
        snr_grid_db: s.snr_grid_db.clone(),
        chi: s.chi,
        trials: s.trials,
        master_seed: s.seed,
        opts: s.opts,
        source: s.source,
    }
}

fn single_side(s: &Settings, side: Side, ant: FixedAntenna) -> Vec<Scheme> {
    s.schemes
        .iter()
        .map(|&k| match side {
            Side::TxOnly => Scheme::tx_only(k, ant),
            Side::RxOnly => Scheme::rx_only(k, ant),
            Side::Joint => Scheme::joint(k),
        })
        .collect()
}

fn defaults_for(cmd: &Command) -> Defaults {
    match cmd {
        Command::Converge(_) => Defaults { snr_min: 0.0, snr_max: 10.0, snr_step: 5.0, out: "converge.csv" },
        Command::Tx(_) => Defaults { out: "tx.csv", ..SWEEP_DEFAULTS },
        Command::Rx(_) => Defaults { out: "rx.csv", ..SWEEP_DEFAULTS },
        Command::Joint(_) => Defaults { out: "joint.csv", ..SWEEP_DEFAULTS },
        Command::Gains(_) => Defaults { out: "gains.csv", ..SWEEP_DEFAULTS },
        Command::Sweep(_) => SWEEP_DEFAULTS,
    }
}

/// Compute every output of `cmd` without touching the filesystem.
pub fn plan(cmd: &Command) -> Result<Vec<(PathBuf, String)>> {
    let args = match cmd {
        Command::Converge(a)
        | Command::Tx(a)
        | Command::Rx(a)
        | Command::Joint(a)
        | Command::Gains(a)
        | Command::Sweep(a) => a,
    };
    let s = args.settings(defaults_for(cmd))?;
    if let Command::Sweep(_) = cmd {
        match (s.side, s.counterpart) {
            (Side::Joint, Some(_)) => {
                return Err(SimError::config("counterpart", "only valid with side tx or rx"));
            }
            (Side::TxOnly | Side::RxOnly, None) => {
                return Err(SimError::config("counterpart", "required with side tx or rx"));
            }
            _ => {}
        }
    }
    if let Command::Gains(_) = cmd {
        if !s.schemes.contains(&SchemeKind::Polarforming) {
            return Err(SimError::config("schemes", "gains needs `polarforming` in the scheme list"));
        }
    }
    let work = || -> Result<Vec<(PathBuf, String)>> {
        Ok(match cmd {
            Command::Converge(_) => {
                let rows = run_convergence(&s.snr_grid_db, s.chi, s.trials, s.seed, &s.opts, &s.source)?;
                vec![(s.out.clone(), convergence_csv(&rows))]
            }
            Command::Tx(_) | Command::Rx(_) => {
                let side = if matches!(cmd, Command::Tx(_)) { Side::TxOnly } else { Side::RxOnly };
                let mut files = Vec::new();
                for ant in [FixedAntenna::Lpa, FixedAntenna::Cpa] {
                    let pts = run_sweep(&spec(&s, single_side(&s, side, ant)))?;
                    files.push((suffixed(&s.out, ant.name()), curves_csv(&pts)));
                }
                files
            }
            Command::Joint(_) => {
                let pts = run_sweep(&spec(&s, single_side(&s, Side::Joint, FixedAntenna::Lpa)))?;
                vec![(s.out.clone(), curves_csv(&pts))]
            }
            Command::Gains(_) => {
                let pts = run_sweep(&spec(&s, single_side(&s, Side::Joint, FixedAntenna::Lpa)))?;
                let report = gain_report(&Curve::from_sweep(&pts), SchemeKind::Polarforming.name(), s.target_rate)?;
                vec![(suffixed(&s.out, "curves"), curves_csv(&pts)), (s.out.clone(), gains_csv(&report))]
            }
            Command::Sweep(_) => {
                let ant = s.counterpart.unwrap_or(FixedAntenna::Lpa);
                let pts = run_sweep(&spec(&s, single_side(&s, s.side, ant)))?;
                vec![(s.out.clone(), curves_csv(&pts))]
            }
        })
    };
    match s.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| SimError::config("threads", e.to_string()))?
            .install(work),
        None => work(),
    }
}

/// Run `cmd` and write its outputs. Returns the written paths.
pub fn run(cmd: &Command) -> Result<Vec<PathBuf>> {
    let files = plan(cmd)?;
    for (path, contents) in &files {
        write_file(path, contents)?;
    }
    Ok(files.into_iter().map(|(p, _)| p).collect())
}
