//! Synchronization sequences and the unitary DFT pair.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence {
    pub samples: Vec<Complex64>,
}

impl ComplexSequence {
    pub fn new(samples: Vec<Complex64>) -> Self {
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

impl std::ops::Index<usize> for ComplexSequence {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.samples[i]
    }
}

/// Frequency-domain symbol grid. Bin 0 is DC.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqGrid {
    pub bins: Vec<Complex64>,
    pub dc_index: usize,
}

impl FreqGrid {
    pub fn into_sequence(self) -> ComplexSequence {
        ComplexSequence::new(self.bins)
    }
}

/// Auxiliary design `{θ, δ}` with `δ = 2k′π/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxParams {
    pub theta: f64,
    pub delta: f64,
    pub n: usize,
}

impl AuxParams {
    pub fn new(theta: f64, k_prime: usize, n: usize) -> Result<Self> {
        let p = Self { theta, delta: 2.0 * PI * k_prime as f64 / n as f64, n };
        p.validate()?;
        Ok(p)
    }

    /// Integer `k′` recovered from `δ`, if `δ` lies on the `2k′π/N` lattice.
    pub fn k_prime(&self) -> Option<usize> {
        let k = self.delta * self.n as f64 / (2.0 * PI);
        let r = k.round();
        ((k - r).abs() < 1e-9 && r >= 1.0).then_some(r as usize)
    }

    pub fn validate(&self) -> Result<()> {
        check_double_len(self.n)?;
        if !self.theta.is_finite() || self.theta.abs() > PI {
            return Err(Error::param("theta", format!("|theta| must be <= pi, got {}", self.theta)));
        }
        match self.k_prime() {
            Some(k) if k <= self.n / 4 => Ok(()),
            _ => Err(Error::param(
                "delta",
                format!("delta must be 2k'pi/N with k' in [1, N/4], got {}", self.delta),
            )),
        }
    }
}

/// Sum/difference design `{η}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumDiffParams {
    pub eta: f64,
    pub n: usize,
}

impl SumDiffParams {
    pub fn new(eta: f64, n: usize) -> Result<Self> {
        let p = Self { eta, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_double_len(self.n)?;
        if !self.eta.is_finite() || self.eta.abs() > PI {
            return Err(Error::param("eta", format!("|eta| must be <= pi, got {}", self.eta)));
        }
        Ok(())
    }
}

fn check_double_len(n: usize) -> Result<()> {
    if n < 8 || n % 2 != 0 {
        return Err(Error::param("n", format!("double sequences need even N >= 8, got {n}")));
    }
    Ok(())
}

/// Zadoff-Chu sequence `exp(−jπ m(m+1) r / N_ZC)`.
///
/// The phase index is reduced modulo `2 N_ZC` in integer arithmetic, so
/// `s[m]` and `s[N_ZC−1−m]` come out bit-identical.
pub fn zc_generate(n_zc: usize, root: usize) -> Result<ComplexSequence> {
    if n_zc == 0 || n_zc % 2 == 0 {
        return Err(Error::param("n_zc", format!("ZC length must be odd, got {n_zc}")));
    }
    if root >= n_zc {
        return Err(Error::param("root", format!("root must be < {n_zc}, got {root}")));
    }
    let modulus = 2 * n_zc as u128;
    let samples = (0..n_zc as u128)
        .map(|m| {
            let k = (m * (m + 1) * root as u128) % modulus;
            Complex64::from_polar(1.0, -PI * k as f64 / n_zc as f64)
        })
        .collect();
    Ok(ComplexSequence::new(samples))
}

/// `Σ_m s[m]·conj(s[(m+lag) mod N])`, optionally divided by `N`.
pub fn zc_cyclic_autocorr(seq: &ComplexSequence, lag: usize, normalized: bool) -> Result<Complex64> {
    let n = seq.len();
    if lag >= n {
        return Err(Error::param("lag", format!("lag must be < {n}, got {lag}")));
    }
    let s = &seq.samples;
    let sum: Complex64 = (0..n).map(|m| s[m] * s[(m + lag) % n].conj()).sum();
    Ok(if normalized { sum / n as f64 } else { sum })
}

/// First occupied bin for a length-`n_zc` block centred in an `n`-point grid.
pub fn first_mapped_bin(n_zc: usize, n: usize) -> usize {
    (n - n_zc - 1) / 2 + 1
}

/// Places the sequence on the central subcarriers, DC (bin 0) zeroed.
pub fn map_to_subcarriers(seq: &ComplexSequence, n: usize) -> Result<FreqGrid> {
    let n_zc = seq.len();
    if n_zc == 0 || n_zc >= n {
        return Err(Error::param("n", format!("FFT size {n} must exceed sequence length {n_zc}")));
    }
    let mut bins = vec![Complex64::new(0.0, 0.0); n];
    let first = first_mapped_bin(n_zc, n);
    bins[first..first + n_zc].copy_from_slice(&seq.samples);
    bins[0] = Complex64::new(0.0, 0.0);
    Ok(FreqGrid { bins, dc_index: 0 })
}

/// `d0[n] = e^{−jn(θ−δ)}`, `d1[n] = e^{−jn(θ+δ)}`.
pub fn aux_pair(params: &AuxParams) -> Result<(ComplexSequence, ComplexSequence)> {
    params.validate()?;
    Ok((tone(params.n, params.theta - params.delta), tone(params.n, params.theta + params.delta)))
}

/// `d_Σ[n] = e^{−jnη}`; `d_Δ` equals it on the first half and is negated on the second.
pub fn sumdiff_pair(params: &SumDiffParams) -> Result<(ComplexSequence, ComplexSequence)> {
    params.validate()?;
    let sum = tone(params.n, params.eta);
    let half = params.n / 2;
    let diff = sum
        .samples
        .iter()
        .enumerate()
        .map(|(i, &v)| if i < half { v } else { -v })
        .collect();
    Ok((sum, ComplexSequence::new(diff)))
}

fn tone(n: usize, w: f64) -> ComplexSequence {
    ComplexSequence::new((0..n).map(|i| Complex64::from_polar(1.0, -(i as f64) * w)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Unitary DFT, `1/√N` in both directions.
pub fn time_freq_transform(seq: &ComplexSequence, direction: Direction) -> ComplexSequence {
    let n = seq.len();
    if n == 0 {
        return seq.clone();
    }
    let mut planner = FftPlanner::new();
    let fft = match direction {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };
    let mut buf = seq.samples.clone();
    fft.process(&mut buf);
    let scale = 1.0 / (n as f64).sqrt();
    buf.iter_mut().for_each(|v| *v *= scale);
    ComplexSequence::new(buf)
}

/// Time-domain ZC symbol: mapped to the central subcarriers of an `n`-point grid, then IDFT.
pub fn zc_time_symbol(n_zc: usize, root: usize, n: usize) -> Result<ComplexSequence> {
    let grid = map_to_subcarriers(&zc_generate(n_zc, root)?, n)?;
    Ok(time_freq_transform(&grid.into_sequence(), Direction::Inverse))
}
