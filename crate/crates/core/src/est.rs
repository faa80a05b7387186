//! Receive-side estimators: ZC symmetry, auxiliary ratio, sum/difference ratio.

use crate::error::{Error, Result};
use crate::phy::RxFrame;
use crate::seq::{AuxParams, SumDiffParams};
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intermediate {
    Zc { first: Complex64, second: Complex64 },
    Aux { alpha: f64, clamped: bool },
    SumDiff { beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub mu_hat: f64,
    pub epsilon_hat: f64,
    pub antenna: usize,
    pub intermediate: Intermediate,
}

impl EstimateReport {
    fn new(mu_hat: f64, n: usize, intermediate: Intermediate) -> Self {
        Self { mu_hat, epsilon_hat: mu_to_eps(mu_hat, n), antenna: 0, intermediate }
    }

    pub fn with_antenna(mut self, antenna: usize) -> Self {
        self.antenna = antenna;
        self
    }
}

pub fn mu_to_eps(mu: f64, n: usize) -> f64 {
    n as f64 * mu / (2.0 * PI)
}

pub fn eps_to_mu(eps: f64, n: usize) -> f64 {
    2.0 * PI * eps / n as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxChannels {
    pub p0: f64,
    pub p1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumDiffChannels {
    pub p_sum: Complex64,
    pub p_diff: Complex64,
}

/// Strongest receive antenna by slot energy; ties go to the lower index.
pub fn select_antenna(frame: &RxFrame) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for b in 0..frame.n_antennas() {
        let e: f64 = frame.samples.row(b).iter().map(|v| v.norm_sqr()).sum();
        if e > best.1 {
            best = (b, e);
        }
    }
    best.0
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { expected: a, got: b });
    }
    Ok(())
}

/// Phase between the two halves of `q·conj(d)`, divided by `π`.
pub fn estimate_zc(q: &[Complex64], d: &[Complex64]) -> Result<EstimateReport> {
    let n = d.len();
    check_len(n, q.len())?;
    if n < 2 || n % 2 != 0 {
        return Err(Error::param("n", format!("ZC estimator needs even length, got {n}")));
    }
    let half = n / 2;
    let prod = |i: usize| q[i] * d[i].conj();
    let first: Complex64 = (0..half).map(prod).sum();
    let second: Complex64 = (half..n).map(prod).sum();
    if first == Complex64::new(0.0, 0.0) && second == Complex64::new(0.0, 0.0) {
        return Err(Error::Undefined("both ZC half-correlations are zero"));
    }
    let eps = (first.conj() * second).arg() / PI;
    Ok(EstimateReport {
        mu_hat: eps_to_mu(eps, n),
        epsilon_hat: eps,
        antenna: 0,
        intermediate: Intermediate::Zc { first, second },
    })
}

pub fn aux_channels(q0: &[Complex64], q1: &[Complex64]) -> Result<AuxChannels> {
    check_len(q0.len(), q1.len())?;
    Ok(AuxChannels {
        p0: q0.iter().sum::<Complex64>().norm_sqr(),
        p1: q1.iter().sum::<Complex64>().norm_sqr(),
    })
}

/// `α = (p0 − p1)/(p0 + p1)`.
pub fn aux_ratio(ch: &AuxChannels) -> Result<f64> {
    let s = ch.p0 + ch.p1;
    if s <= 0.0 {
        return Err(Error::DegenerateChannels);
    }
    Ok((ch.p0 - ch.p1) / s)
}

/// Noiseless `α` at offset `x = μ − θ`.
pub fn alpha_closed_form(x: f64, delta: f64) -> f64 {
    -x.sin() * delta.sin() / (1.0 - x.cos() * delta.cos())
}

/// Inverts `α` on `(θ−δ, θ+δ)`; `|α| > 1` is clamped and flagged.
pub fn aux_invert(alpha: f64, params: &AuxParams) -> EstimateReport {
    let clamped = !(alpha.abs() <= 1.0);
    let a = if alpha.is_nan() { 0.0 } else { alpha.clamp(-1.0, 1.0) };
    let (sd, cd) = params.delta.sin_cos();
    let num = a * sd - a * (1.0 - a * a).sqrt() * sd * cd;
    let den = sd * sd + a * a * cd * cd;
    let mu = params.theta - (num / den).clamp(-1.0, 1.0).asin();
    EstimateReport::new(mu, params.n, Intermediate::Aux { alpha: a, clamped })
}

pub fn sumdiff_channels(q_sum: &[Complex64], q_diff: &[Complex64]) -> Result<SumDiffChannels> {
    check_len(q_sum.len(), q_diff.len())?;
    Ok(SumDiffChannels { p_sum: q_sum.iter().sum(), p_diff: q_diff.iter().sum() })
}

/// `β = Im(p_Σ / p_Δ)`.
pub fn sumdiff_ratio(ch: &SumDiffChannels) -> Result<f64> {
    if ch.p_diff == Complex64::new(0.0, 0.0) {
        return Err(Error::OnNull);
    }
    Ok((ch.p_sum / ch.p_diff).im)
}

/// Noiseless `β = cot(N x / 4)` at offset `x = μ − η`.
pub fn beta_closed_form(x: f64, n: usize) -> f64 {
    let a = n as f64 * x / 4.0;
    a.cos() / a.sin()
}

/// `arccot` with range `(0, π)`.
pub fn arccot(x: f64) -> f64 {
    1f64.atan2(x)
}

/// `μ̂ = η + (4/N) arccot(β)` on the first branch `(η, η + 4π/N)`.
pub fn sumdiff_invert(beta: f64, params: &SumDiffParams) -> EstimateReport {
    let mu = params.eta + 4.0 / params.n as f64 * arccot(beta);
    EstimateReport::new(mu, params.n, Intermediate::SumDiff { beta })
}

/// `q[n] e^{−jμ̂n}`.
pub fn compensate(q: &[Complex64], mu_hat: f64) -> Vec<Complex64> {
    q.iter()
        .enumerate()
        .map(|(i, &v)| v * Complex64::from_polar(1.0, -mu_hat * i as f64))
        .collect()
}
