//! Depolarizing Rayleigh channel realizations.
//!
//! A realization is `P = Ψ ⊙ H`, where `H` has i.i.d. circularly-symmetric
//! complex Gaussian entries and `Ψ` spreads power between co- and
//! cross-polarized paths according to the inverse XPD `χ`.
//!
//! Randomness is addressed by `(master_seed, stream_index)`: the generator is
//! ChaCha8 keyed from `master_seed` (via `seed_from_u64`) with the ChaCha
//! stream id set to `stream_index`, and Gaussians come from the ziggurat
//! sampler of `rand_distr`. Trial `t` of a sweep uses stream `t`, so a
//! realization never depends on which thread drew it or in what order.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{PolarError, Result};
use crate::linalg::{CMat2, C64};

/// Address of one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub const fn new(master_seed: u64, stream_index: u64) -> Self {
        Self { master_seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Scale of the i.i.d. entries of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HiidNormalization {
    /// Real and imaginary parts each have standard deviation `1/√2`, so every
    /// entry has unit variance and `E‖P‖²_F = 2`.
    #[default]
    UnitVariance,
    /// Every complex entry has variance `1/√2`. Only useful for sensitivity
    /// checks; it rescales all rates' SNR axis by `-1.505 dB`.
    VarianceInvSqrt2,
}

impl HiidNormalization {
    /// Standard deviation of each real component.
    pub fn component_std(self) -> f64 {
        match self {
            HiidNormalization::UnitVariance => core::f64::consts::FRAC_1_SQRT_2,
            HiidNormalization::VarianceInvSqrt2 => libm::sqrt(0.5 * core::f64::consts::FRAC_1_SQRT_2),
        }
    }
}

/// One realization of the polarized channel matrix together with the inverse
/// XPD that generated it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizedChannel {
    pub p: CMat2,
    pub chi: f64,
}

impl PolarizedChannel {
    /// Wrap a deterministic matrix, e.g. for tests or fixed-channel sweeps.
    pub fn fixed(p: CMat2) -> Self {
        Self { p, chi: 0.0 }
    }
}

fn check_chi(chi: f64) -> Result<()> {
    if chi.is_finite() && chi >= 0.0 {
        Ok(())
    } else {
        Err(PolarError::InvalidArgument { name: "chi", value: chi })
    }
}

/// Power-spreading matrix `(1/√(χ+1))·[[1, √χ], [√χ, 1]]`.
pub fn xpd_matrix(chi: f64) -> Result<CMat2> {
    check_chi(chi)?;
    let s = 1.0 / libm::sqrt(chi + 1.0);
    let x = libm::sqrt(chi) * s;
    Ok(CMat2::real(s, x, x, s))
}

/// Draw `H` with the default unit-variance entries.
pub fn draw_hiid(stream: RngStream) -> CMat2 {
    draw_hiid_with(stream, HiidNormalization::UnitVariance)
}

pub fn draw_hiid_with(stream: RngStream, norm: HiidNormalization) -> CMat2 {
    let mut rng = stream.rng();
    let sd = norm.component_std();
    let mut next = || {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re * sd, im * sd)
    };
    let m11 = next();
    let m12 = next();
    let m21 = next();
    let m22 = next();
    CMat2::new(m11, m12, m21, m22)
}

/// Draw `P = Ψ(χ) ⊙ H`.
pub fn draw_channel(stream: RngStream, chi: f64) -> Result<PolarizedChannel> {
    draw_channel_with(stream, chi, HiidNormalization::UnitVariance)
}

pub fn draw_channel_with(
    stream: RngStream,
    chi: f64,
    norm: HiidNormalization,
) -> Result<PolarizedChannel> {
    let psi = xpd_matrix(chi)?;
    let p = psi.hadamard(&draw_hiid_with(stream, norm));
    Ok(PolarizedChannel { p, chi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xpd_examples() {
        assert_eq!(xpd_matrix(0.0).unwrap(), CMat2::identity());
        let m = xpd_matrix(1.0).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        for e in [m.m11, m.m12, m.m21, m.m22] {
            assert!((e.re - h).abs() < 1e-15 && e.im == 0.0);
        }
        let m = xpd_matrix(0.2).unwrap();
        let s = 1.0 / 1.2f64.sqrt();
        assert!((m.m11.re - s).abs() < 1e-15);
        assert!((m.m12.re - 0.2f64.sqrt() * s).abs() < 1e-15);
        assert_eq!(m.m12, m.m21);
        for chi in [0.0, 0.2, 1.0, 7.5] {
            assert!((xpd_matrix(chi).unwrap().frobenius_sqr() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn xpd_rejects_negative_and_nan() {
        assert!(matches!(xpd_matrix(-0.1), Err(PolarError::InvalidArgument { name: "chi", .. })));
        assert!(xpd_matrix(f64::NAN).is_err());
        assert!(draw_channel(RngStream::new(1, 1), -1.0).is_err());
    }

    #[test]
    fn draws_are_reproducible_per_stream() {
        let a = draw_hiid(RngStream::new(42, 0));
        let b = draw_hiid(RngStream::new(42, 0));
        assert_eq!(a, b);
        assert_ne!(a, draw_hiid(RngStream::new(42, 1)));
        assert_ne!(a, draw_hiid(RngStream::new(43, 0)));
    }

    #[test]
    fn zero_chi_is_exactly_diagonal() {
        for t in 0..100 {
            let ch = draw_channel(RngStream::new(9, t), 0.0).unwrap();
            assert_eq!(ch.p.m12, C64::new(0.0, 0.0));
            assert_eq!(ch.p.m21, C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn alternative_normalization_scales_variance() {
        let s = RngStream::new(5, 3);
        let a = draw_hiid_with(s, HiidNormalization::UnitVariance);
        let b = draw_hiid_with(s, HiidNormalization::VarianceInvSqrt2);
        let ratio = b.frobenius_sqr() / a.frobenius_sqr();
        assert!((ratio - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }
}
