//! Monte Carlo rate sweeps for polarforming and its reference schemes.
//!
//! [`sweep::run_sweep`] averages achievable rates over seeded channel
//! realizations, [`gains::snr_gain_at_rate`] reads SNR gaps off the
//! resulting curves, and [`output`] writes everything as CSV. The `polarform`
//! binary wraps these behind subcommands (see [`cli`]).

pub mod cli;
pub mod config;
pub mod error;
pub mod gains;
pub mod output;
pub mod stats;
pub mod sweep;

pub use error::SimError;
pub use gains::{snr_gain_at_rate, gain_report, Curve, GainEntry, GainReport};
pub use sweep::{run_convergence, run_sweep, ChannelSource, ConvergenceRow, CurvePoint, SweepSpec};
