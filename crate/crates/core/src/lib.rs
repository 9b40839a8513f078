//! Polarforming with phase-shifter-based polarization reconfigurable antennas.
//!
//! A reconfigurable antenna here has a vertical and a horizontal element fed
//! from one RF chain, with a phase shifter setting the phase difference
//! between them. Sweeping that phase moves the antenna through linear,
//! circular and elliptical polarizations. This crate holds the algorithmic
//! pieces of a single-link simulator:
//!
//! - [`linalg`]: fixed 2-vector / 2×2 complex arithmetic.
//! - [`polar`]: polarforming vectors, channel response, SNR and rate, and the
//!   closed-form maximizer of a phase-parameterized Hermitian quadratic form.
//! - [`channel`]: depolarizing Rayleigh channel realizations on
//!   counter-addressed random streams.
//! - [`optimizer`]: single-side closed-form polarforming and the alternating
//!   transmit/receive phase optimization.
//! - [`benchmarks`]: switchable (SPRA), polarization-agile (PAA) and fixed
//!   circular/linear (CPA/LPA) reference schemes.
//!
//! The crate is `no_std` and only needs `alloc` for iteration traces.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod benchmarks;
pub mod channel;
pub mod error;
pub mod linalg;
pub mod optimizer;
pub mod polar;

pub use benchmarks::{
    evaluate, fixed_scheme, paa_best, paa_best_angle, spra_alternating, spra_best, FixedAntenna,
    Handedness, PaaAngles, Scheme, SchemeConfig, SchemeKind, SchemeResult, Side, SolverOptions,
    SpraSearch,
};
pub use channel::{draw_channel, draw_hiid, xpd_matrix, HiidNormalization, PolarizedChannel, RngStream};
pub use error::{PolarError, Result};
pub use linalg::{CMat2, CVec2, C64};
pub use optimizer::{
    alternate, alternate_multistart, optimal_receive_phase, optimal_transmit_phase,
    receive_polarforming, transmit_polarforming, AlternatingConfig, IterRecord, OptimTrace,
    StopRule,
};
pub use polar::{
    channel_response, optimal_phase_hermitian, rate, rx_pfv, snr, tx_pfv, wrap_phase, LinkBudget,
    PhasePair,
};
