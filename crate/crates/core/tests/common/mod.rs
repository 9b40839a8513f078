//! Reference computations that avoid the library's solver paths: scalar
//! expansions, dense grids and brute-force enumeration.
#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use polarform_core::{CMat2, CVec2, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn rand_c(r: &mut impl Rng) -> C64 {
    C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

pub fn rand_mat(r: &mut impl Rng) -> CMat2 {
    CMat2::new(rand_c(r), rand_c(r), rand_c(r), rand_c(r))
}

pub fn rand_hermitian(r: &mut impl Rng) -> CMat2 {
    let c = rand_c(r);
    CMat2::new(
        C64::new(r.random_range(-2.0..2.0), 0.0),
        c.conj(),
        c,
        C64::new(r.random_range(-2.0..2.0), 0.0),
    )
}

/// `h(θ, φ)` expanded term by term:
/// `(1/√2)(p11 + p12 e^{jθ} + p21 e^{−jφ} + p22 e^{j(θ−φ)})`.
pub fn h_scalar(p: &CMat2, theta: f64, phi: f64) -> C64 {
    let e = |x: f64| C64::new(x.cos(), x.sin());
    (p.m11 + p.m12 * e(theta) + p.m21 * e(-phi) + p.m22 * e(theta - phi)) * FRAC_1_SQRT_2
}

/// `p(ψ)ᴴ W p(ψ)` by explicit summation over entries.
pub fn quad_scalar(w: &CMat2, psi: f64) -> C64 {
    let p = [C64::new(1.0, 0.0), C64::new(psi.cos(), psi.sin())];
    let m = [[w.m11, w.m12], [w.m21, w.m22]];
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += p[i].conj() * m[i][j] * p[j];
        }
    }
    acc
}

pub fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| TAU * k as f64 / n as f64)
}

pub fn grid_max(n: usize, f: impl Fn(f64) -> f64) -> f64 {
    grid(n).map(f).fold(f64::NEG_INFINITY, f64::max)
}

/// Max of `|h(θ, φ)|²` over an `n × n` grid.
pub fn joint_grid_max(p: &CMat2, n: usize) -> f64 {
    let e: Vec<C64> = grid(n).map(|x| C64::new(x.cos(), x.sin())).collect();
    let mut best = 0.0f64;
    for et in &e {
        let a = p.m11 + p.m12 * et;
        let b = p.m21 + p.m22 * et;
        for ep in &e {
            // e^{−jφ} = conj(e^{jφ})
            let v = (a + b * ep.conj()).norm_sqr();
            if v > best {
                best = v;
            }
        }
    }
    0.5 * best
}

/// Max of `|[cos β, sin β] P [cos α, sin α]ᵀ|²` over an `n × n` grid.
pub fn paa_joint_grid_max(p: &CMat2, n: usize) -> f64 {
    let cs: Vec<(f64, f64)> = grid(n).map(|x| (x.cos(), x.sin())).collect();
    let mut best = 0.0f64;
    for &(ca, sa) in &cs {
        let b0 = p.m11 * ca + p.m12 * sa;
        let b1 = p.m21 * ca + p.m22 * sa;
        for &(cb, sb) in &cs {
            let v = (b0 * cb + b1 * sb).norm_sqr();
            if v > best {
                best = v;
            }
        }
    }
    best
}

pub fn abs_gain(p: &CMat2, tx: &CVec2, rx: &CVec2) -> f64 {
    let b0 = p.m11 * tx.e0 + p.m12 * tx.e1;
    let b1 = p.m21 * tx.e0 + p.m22 * tx.e1;
    (rx.e0.conj() * b0 + rx.e1.conj() * b1).norm_sqr()
}

/// `∫₀^∞ log₂(1 + ρx) e^{−x} dx` by composite Simpson on `x = u/(1−u)`.
pub fn rayleigh_ergodic_rate(rho: f64) -> f64 {
    let n = 200_000;
    let h = 1.0 / n as f64;
    let f = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let x = u / (1.0 - u);
        (1.0 + rho * x).log2() * (-x).exp() / ((1.0 - u) * (1.0 - u))
    };
    let mut s = f(0.0) + f(1.0);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(k as f64 * h);
    }
    s * h / 3.0
}
