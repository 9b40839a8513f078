//! Polarforming vectors, link quantities and the closed-form phase solver.

use core::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::error::{ensure_finite, PolarError, Result};
use crate::linalg::{CMat2, CVec2, C64, ONE};

/// Entrywise tolerance for the Hermitian precondition of
/// [`optimal_phase_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Reduce a phase into `[0, 2π)`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = libm::fmod(x, TAU);
    let r = if r < 0.0 { r + TAU } else { r };
    // r + TAU can round up to exactly TAU for tiny negative r
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Argument of `z` in `[0, 2π)`.
pub(crate) fn arg_wrapped(z: C64) -> f64 {
    wrap_phase(libm::atan2(z.im, z.re))
}

/// Transmit (`theta`) and receive (`phi`) phase shifts, both in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePair {
    pub theta: f64,
    pub phi: f64,
}

impl PhasePair {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self {
            theta: wrap_phase(theta),
            phi: wrap_phase(phi),
        }
    }
}

/// Transmit power and receiver noise power, both linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pt: f64,
    sigma2: f64,
}

impl LinkBudget {
    pub fn new(pt: f64, sigma2: f64) -> Result<Self> {
        if !(pt.is_finite() && pt > 0.0) {
            return Err(PolarError::InvalidArgument { name: "pt", value: pt });
        }
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(PolarError::InvalidArgument { name: "sigma2", value: sigma2 });
        }
        Ok(Self { pt, sigma2 })
    }

    /// Budget with `pt/σ² = 10^(snr_db/10)` and unit noise power. Since the
    /// channel is normalized, this ratio is the average SNR of the link.
    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        ensure_finite("snr_db", snr_db)?;
        Self::new(libm::pow(10.0, snr_db / 10.0), 1.0)
    }

    pub fn unit() -> Self {
        Self { pt: 1.0, sigma2: 1.0 }
    }

    pub fn pt(&self) -> f64 {
        self.pt
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// `pt / σ²`.
    pub fn ratio(&self) -> f64 {
        self.pt / self.sigma2
    }
}

/// Phase-only polarization vector `[1, e^{jψ}]`, unnormalized.
pub(crate) fn unit_phase_vec(psi: f64) -> CVec2 {
    CVec2::new(ONE, C64::from_polar(1.0, psi))
}

/// `tx_pfv` without the finiteness check.
pub(crate) fn tx_vec(theta: f64) -> CVec2 {
    unit_phase_vec(theta).scale(C64::new(FRAC_1_SQRT_2, 0.0))
}

/// Transmit polarforming vector `(1/√2)·[1, e^{jθ}]` (unit norm).
pub fn tx_pfv(theta: f64) -> Result<CVec2> {
    ensure_finite("theta", theta)?;
    Ok(tx_vec(theta))
}

/// Receive polarforming vector `[1, e^{jφ}]` (norm √2, receiver is not
/// normalized).
pub fn rx_pfv(phi: f64) -> Result<CVec2> {
    ensure_finite("phi", phi)?;
    Ok(unit_phase_vec(phi))
}

/// Overall channel response `gᴴ P f`.
pub fn channel_response(p: &CMat2, f: &CVec2, g: &CVec2) -> C64 {
    g.dot_h(&p.mul_vec(f))
}

/// Receive SNR `|h|²·pt/σ²`.
pub fn snr(h: C64, budget: &LinkBudget) -> f64 {
    h.norm_sqr() * budget.pt / budget.sigma2
}

/// Achievable rate `log₂(1 + γ)` in bits/s/Hz.
pub fn rate(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(PolarError::InvalidArgument { name: "gamma", value: gamma });
    }
    Ok(libm::log2(1.0 + gamma))
}

/// Phase maximizing `p(ψ)ᴴ W p(ψ)` with `p(ψ) = [1, e^{jψ}]` over a Hermitian
/// `W`.
///
/// Writing `W = [[a, c*], [c, d]]` the form equals `2|c|cos(ψ − ∠c) + a + d`,
/// so the maximizer is `∠c = ∠[W]₂₁`. When `[W]₂₁ = 0` every phase is optimal
/// and `0` is returned.
pub fn optimal_phase_hermitian(w: &CMat2) -> Result<f64> {
    if !w.is_finite() {
        return Err(PolarError::ContractViolation("matrix has non-finite entries"));
    }
    if !w.is_hermitian(HERMITIAN_TOL) {
        return Err(PolarError::ContractViolation("matrix is not Hermitian"));
    }
    Ok(phase_of_lower(w.m21))
}

/// `∠c` in `[0, 2π)`, with the zero tie-break.
pub(crate) fn phase_of_lower(c: C64) -> f64 {
    if c.re == 0.0 && c.im == 0.0 {
        0.0
    } else {
        arg_wrapped(c)
    }
}

/// `p(ψ)ᴴ W p(ψ)`, real part only (imaginary part vanishes for Hermitian W).
pub fn phase_quad_form(w: &CMat2, psi: f64) -> f64 {
    w.quad_form(&unit_phase_vec(psi)).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn tx_pfv_examples() {
        let s = FRAC_1_SQRT_2;
        let v = tx_pfv(0.0).unwrap();
        assert!(close(v.e0, C64::new(s, 0.0), 1e-15) && close(v.e1, C64::new(s, 0.0), 1e-15));
        let v = tx_pfv(FRAC_PI_2).unwrap();
        assert!(close(v.e1, C64::new(0.0, s), 1e-15));
        let v = tx_pfv(PI).unwrap();
        assert!(close(v.e1, C64::new(-s, 0.0), 1e-15));
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rx_pfv_examples() {
        assert!(close(rx_pfv(0.0).unwrap().e1, ONE, 1e-15));
        assert!(close(rx_pfv(FRAC_PI_2).unwrap().e1, C64::new(0.0, 1.0), 1e-15));
        let v = rx_pfv(3.0 * FRAC_PI_2).unwrap();
        assert!(close(v.e1, C64::new(0.0, -1.0), 1e-15));
        assert!((v.norm() - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn pfv_rejects_non_finite() {
        assert!(matches!(tx_pfv(f64::NAN), Err(PolarError::InvalidArgument { name: "theta", .. })));
        assert!(matches!(rx_pfv(f64::INFINITY), Err(PolarError::InvalidArgument { name: "phi", .. })));
    }

    #[test]
    fn channel_response_examples() {
        let h = channel_response(&CMat2::identity(), &tx_pfv(0.0).unwrap(), &rx_pfv(0.0).unwrap());
        assert!(close(h, C64::new(SQRT_2, 0.0), 1e-15));
        let p = CMat2::real(1.0, 0.0, 0.0, 0.0);
        for (t, f) in [(0.3, 1.7), (2.0, -4.0), (5.5, 0.0)] {
            let h = channel_response(&p, &tx_pfv(t).unwrap(), &rx_pfv(f).unwrap());
            assert!(close(h, C64::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        }
    }

    #[test]
    fn snr_and_rate_examples() {
        let b = LinkBudget::unit();
        assert!((snr(C64::new(SQRT_2, 0.0), &b) - 2.0).abs() < 1e-15);
        assert_eq!(snr(C64::new(0.0, 0.0), &b), 0.0);
        let b = LinkBudget::new(2.0, 0.5).unwrap();
        assert!((snr(C64::new(1.0, 1.0), &b) - 8.0).abs() < 1e-14);
        assert_eq!(rate(0.0).unwrap(), 0.0);
        assert_eq!(rate(3.0).unwrap(), 2.0);
        assert_eq!(rate(15.0).unwrap(), 4.0);
        assert!(rate(-1e-3).is_err());
        assert!(rate(f64::NAN).is_err());
    }

    #[test]
    fn link_budget_validation() {
        assert!(LinkBudget::new(0.0, 1.0).is_err());
        assert!(LinkBudget::new(1.0, -1.0).is_err());
        assert!(LinkBudget::from_snr_db(f64::NAN).is_err());
        assert!((LinkBudget::from_snr_db(10.0).unwrap().ratio() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_phase_examples() {
        let w = CMat2::new(C64::new(2.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(3.0, 0.0));
        assert!((optimal_phase_hermitian(&w).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(optimal_phase_hermitian(&CMat2::identity()).unwrap(), 0.0);
        let bad = CMat2::new(ONE, C64::new(0.0, 1.0), C64::new(0.0, 1.0), ONE);
        assert!(matches!(optimal_phase_hermitian(&bad), Err(PolarError::ContractViolation(_))));
    }

    #[test]
    fn negative_real_lower_entry_maps_to_pi() {
        let w = CMat2::real(1.0, -1.0, -1.0, 1.0);
        assert!((optimal_phase_hermitian(&w).unwrap() - PI).abs() < 1e-15);
        let w = CMat2::new(ONE, C64::new(-1.0, 0.0), C64::new(-1.0, -0.0), ONE);
        assert!((optimal_phase_hermitian(&w).unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn wrap_phase_range() {
        for x in [-1e-300, -TAU, TAU, 3.0 * TAU + 0.1, -0.5, 0.0, 1e6] {
            let r = wrap_phase(x);
            assert!((0.0..TAU).contains(&r), "{x} -> {r}");
        }
        assert_eq!(wrap_phase(TAU), 0.0);
        assert!((wrap_phase(-FRAC_PI_2) - 3.0 * FRAC_PI_2).abs() < 1e-15);
    }
}
