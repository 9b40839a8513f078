//! Run settings: a flat TOML file, command-line overrides, and validation.
//!
//! A config file is a flat list of `key = value` pairs, for example:
//!
//! ```toml
//! chi = 0.2
//! trials = 10000
//! seed = 1
//! snr_min = -5.0
//! snr_max = 20.0
//! snr_step = 1.0
//! epsilon = 1e-3
//! imax = 20
//! target_rate = 4.0
//! out = "joint.csv"
//! threads = 8
//! schemes = ["polarforming", "spra", "paa", "cpa", "lpa"]
//! side = "joint"            # joint | tx | rx (sweep only)
//! counterpart = "lpa"       # lpa | cpa, fixed end for tx/rx sweeps
//! spra_search = "alternating"  # alternating | exhaustive
//! single_start = false
//! stop_rule = "relative"    # relative | absolute
//! normalization = "unit"    # unit | variance-inv-sqrt2
//! ```
//!
//! Unknown keys are rejected. Flags given on the command line win over file
//! values.

use std::path::{Path, PathBuf};

use polarform_core::channel::HiidNormalization;
use polarform_core::{AlternatingConfig, FixedAntenna, SchemeKind, Side, SolverOptions, SpraSearch, StopRule};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::sweep::ChannelSource;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imax: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schemes: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterpart: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spra_search: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub single_start: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| SimError::config("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| SimError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text).map_err(|e| match e {
            SimError::Config { key, msg } => SimError::config(key, format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config serializes")
    }

    /// Values from `over` take precedence over `self`.
    pub fn overridden_by(self, over: FileConfig) -> FileConfig {
        FileConfig {
            chi: over.chi.or(self.chi),
            trials: over.trials.or(self.trials),
            seed: over.seed.or(self.seed),
            snr_min: over.snr_min.or(self.snr_min),
            snr_max: over.snr_max.or(self.snr_max),
            snr_step: over.snr_step.or(self.snr_step),
            epsilon: over.epsilon.or(self.epsilon),
            imax: over.imax.or(self.imax),
            target_rate: over.target_rate.or(self.target_rate),
            out: over.out.or(self.out),
            threads: over.threads.or(self.threads),
            schemes: over.schemes.or(self.schemes),
            side: over.side.or(self.side),
            counterpart: over.counterpart.or(self.counterpart),
            spra_search: over.spra_search.or(self.spra_search),
            single_start: over.single_start.or(self.single_start),
            stop_rule: over.stop_rule.or(self.stop_rule),
            normalization: over.normalization.or(self.normalization),
        }
    }
}

/// Per-subcommand defaults that differ from the common ones.
#[derive(Debug, Clone, Copy)]
pub struct Defaults {
    pub snr_min: f64,
    pub snr_max: f64,
    pub snr_step: f64,
    pub out: &'static str,
}

/// Fully validated settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub chi: f64,
    pub trials: u64,
    pub seed: u64,
    pub snr_grid_db: Vec<f64>,
    pub opts: SolverOptions,
    pub target_rate: f64,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub schemes: Vec<SchemeKind>,
    pub side: Side,
    pub counterpart: Option<FixedAntenna>,
    pub source: ChannelSource,
}

pub const DEFAULT_CHI: f64 = 0.2;
pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TARGET_RATE: f64 = 4.0;
const MAX_GRID_POINTS: usize = 100_000;

fn finite(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SimError::config(key, format!("must be finite, got {v}")))
    }
}

/// `min, min + step, …` up to `max` (inclusive, with a small tolerance).
pub fn snr_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    let min = finite("snr_min", min)?;
    let max = finite("snr_max", max)?;
    let step = finite("snr_step", step)?;
    if step <= 0.0 {
        return Err(SimError::config("snr_step", format!("must be > 0, got {step}")));
    }
    if max < min {
        return Err(SimError::config("snr_max", format!("must be >= snr_min ({min}), got {max}")));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    if n > MAX_GRID_POINTS {
        return Err(SimError::config("snr_step", format!("grid would have {n} points")));
    }
    Ok((0..n).map(|k| min + k as f64 * step).collect())
}

impl Settings {
    pub fn resolve(cfg: &FileConfig, defaults: Defaults) -> Result<Settings> {
        let chi = finite("chi", cfg.chi.unwrap_or(DEFAULT_CHI))?;
        if chi < 0.0 {
            return Err(SimError::config("chi", format!("must be >= 0, got {chi}")));
        }
        let trials = cfg.trials.unwrap_or(DEFAULT_TRIALS);
        if trials < 1 {
            return Err(SimError::config("trials", "must be at least 1"));
        }
        let snr_grid_db = snr_grid(
            cfg.snr_min.unwrap_or(defaults.snr_min),
            cfg.snr_max.unwrap_or(defaults.snr_max),
            cfg.snr_step.unwrap_or(defaults.snr_step),
        )?;
        let base = AlternatingConfig::default();
        let epsilon = finite("epsilon", cfg.epsilon.unwrap_or(base.epsilon))?;
        if epsilon <= 0.0 {
            return Err(SimError::config("epsilon", format!("must be > 0, got {epsilon}")));
        }
        let i_max = cfg.imax.unwrap_or(base.i_max);
        if i_max < 1 {
            return Err(SimError::config("imax", "must be at least 1"));
        }
        let stop = match cfg.stop_rule.as_deref().unwrap_or("relative") {
            "relative" => StopRule::Relative,
            "absolute" => StopRule::Absolute,
            other => return Err(SimError::config("stop_rule", format!("unknown rule `{other}`"))),
        };
        let spra = match cfg.spra_search.as_deref().unwrap_or("alternating") {
            "alternating" => SpraSearch::Alternating,
            "exhaustive" => SpraSearch::Exhaustive,
            other => return Err(SimError::config("spra_search", format!("unknown search `{other}`"))),
        };
        let normalization = match cfg.normalization.as_deref().unwrap_or("unit") {
            "unit" => HiidNormalization::UnitVariance,
            "variance-inv-sqrt2" => HiidNormalization::VarianceInvSqrt2,
            other => return Err(SimError::config("normalization", format!("unknown normalization `{other}`"))),
        };
        let opts = SolverOptions {
            alt: AlternatingConfig {
                epsilon,
                i_max,
                stop,
                multi_start: !cfg.single_start.unwrap_or(false),
                ..base
            },
            spra,
        };
        let target_rate = finite("target_rate", cfg.target_rate.unwrap_or(DEFAULT_TARGET_RATE))?;
        if target_rate <= 0.0 {
            return Err(SimError::config("target_rate", format!("must be > 0, got {target_rate}")));
        }
        if let Some(0) = cfg.threads {
            return Err(SimError::config("threads", "must be at least 1"));
        }
        let schemes = match &cfg.schemes {
            None => SchemeKind::ALL.to_vec(),
            Some(names) if names.is_empty() => {
                return Err(SimError::config("schemes", "list is empty"));
            }
            Some(names) => names
                .iter()
                .map(|n| {
                    SchemeKind::from_name(n)
                        .ok_or_else(|| SimError::config("schemes", format!("unknown scheme `{n}`")))
                })
                .collect::<Result<_>>()?,
        };
        let side = match cfg.side.as_deref() {
            None => Side::Joint,
            Some(s) => Side::from_name(s).ok_or_else(|| SimError::config("side", format!("unknown side `{s}`")))?,
        };
        let counterpart = match cfg.counterpart.as_deref() {
            None => None,
            Some(s) => Some(
                FixedAntenna::from_name(s)
                    .ok_or_else(|| SimError::config("counterpart", format!("unknown antenna `{s}`")))?,
            ),
        };
        let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from(defaults.out));
        if out.as_os_str().is_empty() {
            return Err(SimError::config("out", "path is empty"));
        }
        Ok(Settings {
            chi,
            trials,
            seed: cfg.seed.unwrap_or(DEFAULT_SEED),
            snr_grid_db,
            opts,
            target_rate,
            out,
            threads: cfg.threads,
            schemes,
            side,
            counterpart,
            source: ChannelSource::Rayleigh(normalization),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const D: Defaults = Defaults { snr_min: -5.0, snr_max: 20.0, snr_step: 1.0, out: "x.csv" };

    #[test]
    fn defaults_follow_reference_setup() {
        let s = Settings::resolve(&FileConfig::default(), D).unwrap();
        assert_eq!(s.chi, 0.2);
        assert_eq!(s.trials, 10_000);
        assert_eq!(s.opts.alt.epsilon, 1e-3);
        assert_eq!(s.opts.alt.i_max, 20);
        assert_eq!(s.snr_grid_db.len(), 26);
        assert_eq!(s.snr_grid_db[25], 20.0);
        assert_eq!(s.schemes.len(), 5);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let e = FileConfig::parse("chi = 0.1\nbogus = 3\n").unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
    }

    #[test]
    fn round_trip_and_override() {
        let file = FileConfig {
            chi: Some(0.5),
            trials: Some(10),
            schemes: Some(vec!["spra".into(), "lpa".into()]),
            out: Some("a.csv".into()),
            single_start: Some(true),
            ..Default::default()
        };
        let text = file.to_toml();
        assert_eq!(FileConfig::parse(&text).unwrap(), file);
        let merged = file.overridden_by(FileConfig { chi: Some(0.0), ..Default::default() });
        assert_eq!(merged.chi, Some(0.0));
        assert_eq!(merged.trials, Some(10));
        let s = Settings::resolve(&merged, D).unwrap();
        assert!(!s.opts.alt.multi_start);
    }

    #[test]
    fn validation_names_key() {
        let cases = [
            (FileConfig { chi: Some(-1.0), ..Default::default() }, "chi"),
            (FileConfig { trials: Some(0), ..Default::default() }, "trials"),
            (FileConfig { snr_step: Some(0.0), ..Default::default() }, "snr_step"),
            (FileConfig { snr_max: Some(-10.0), ..Default::default() }, "snr_max"),
            (FileConfig { epsilon: Some(-1.0), ..Default::default() }, "epsilon"),
            (FileConfig { imax: Some(0), ..Default::default() }, "imax"),
            (FileConfig { threads: Some(0), ..Default::default() }, "threads"),
            (FileConfig { schemes: Some(vec!["dpa".into()]), ..Default::default() }, "schemes"),
            (FileConfig { side: Some("both".into()), ..Default::default() }, "side"),
            (FileConfig { stop_rule: Some("never".into()), ..Default::default() }, "stop_rule"),
        ];
        for (cfg, key) in cases {
            match Settings::resolve(&cfg, D) {
                Err(SimError::Config { key: k, .. }) => assert_eq!(k, key),
                other => panic!("{key}: {other:?}"),
            }
        }
    }

    #[test]
    fn grid_includes_endpoint() {
        assert_eq!(snr_grid(0.0, 10.0, 5.0).unwrap(), vec![0.0, 5.0, 10.0]);
        assert_eq!(snr_grid(0.0, 1.0, 0.1).unwrap().len(), 11);
    }
}
