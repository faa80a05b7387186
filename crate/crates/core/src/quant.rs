//! ADC models: 1-bit and Lloyd-Max b-bit quantizers, κ table, Bussgang surrogate.

use crate::error::{Error, Result};
use crate::gauss;
use crate::phy::{cn, RxFrame};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

pub const MAX_BITS: u8 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "BitsRepr", into = "BitsRepr")]
pub enum Bits {
    Finite(u8),
    Infinite,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BitsRepr {
    Int(i64),
    Str(String),
}

impl TryFrom<BitsRepr> for Bits {
    type Error = String;
    fn try_from(r: BitsRepr) -> std::result::Result<Self, String> {
        match r {
            BitsRepr::Int(b) if (1..=MAX_BITS as i64).contains(&b) => Ok(Bits::Finite(b as u8)),
            BitsRepr::Int(b) => Err(format!("bit depth {b} outside 1..=12")),
            BitsRepr::Str(s) => s.parse().map_err(|e: Error| e.to_string()),
        }
    }
}

impl From<Bits> for BitsRepr {
    fn from(b: Bits) -> Self {
        match b {
            Bits::Finite(v) => BitsRepr::Int(v as i64),
            Bits::Infinite => BitsRepr::Str("inf".into()),
        }
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bits::Finite(b) => write!(f, "{b}"),
            Bits::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Bits {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "inf" | "infinite" | "infinity") {
            return Ok(Bits::Infinite);
        }
        match t.parse::<u8>() {
            Ok(b) if (1..=MAX_BITS).contains(&b) => Ok(Bits::Finite(b)),
            _ => Err(Error::param("bits", format!("expected 1..=12 or inf, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerSpec {
    pub bits: Bits,
    pub kappa: f64,
    pub agc: bool,
}

impl QuantizerSpec {
    /// Lloyd-Max quantizer with AGC on.
    pub fn new(bits: Bits) -> Result<Self> {
        Ok(Self { bits, kappa: kappa_for_bits(bits)?, agc: true })
    }
}

/// Optimal scalar quantizer for a unit-variance Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydMax {
    pub thresholds: Vec<f64>,
    pub levels: Vec<f64>,
    pub distortion: f64,
}

impl LloydMax {
    pub fn quantize(&self, x: f64) -> f64 {
        // Ties at a threshold go to the upper cell, so 0 maps to a positive level.
        let idx = self.thresholds.partition_point(|&t| t <= x);
        self.levels[idx]
    }
}

/// Centroid condition on the positive half-line, solved by Newton's method.
///
/// The design is odd-symmetric, so only the `2^{b−1}` positive levels are
/// unknowns. Each centroid depends on its two neighbours only, which makes
/// the Jacobian tridiagonal.
fn design(bits: u8) -> LloydMax {
    let half = 1usize << (bits - 1);
    let unit = Normal::new(0.0, 1.0).unwrap();
    let l = 2.0 * half as f64;
    // start from the Gaussian compander, which is asymptotically optimal
    let mut y: Vec<f64> = (0..half)
        .map(|i| 3f64.sqrt() * unit.inverse_cdf(0.5 + (i as f64 + 0.5) / l))
        .collect();
    let bounds = |y: &[f64], i: usize| {
        let lo = if i == 0 { 0.0 } else { 0.5 * (y[i - 1] + y[i]) };
        let hi = if i + 1 < half { 0.5 * (y[i] + y[i + 1]) } else { f64::INFINITY };
        (lo, hi)
    };
    let pdf = |x: f64| if x.is_finite() { gauss::pdf(x) } else { 0.0 };
    let tail = |x: f64| if x.is_finite() { x * gauss::pdf(x) } else { 0.0 };
    for _ in 0..200 {
        let (mut sub, mut diag, mut sup, mut rhs) =
            (vec![0.0; half], vec![0.0; half], vec![0.0; half], vec![0.0; half]);
        let mut resid: f64 = 0.0;
        for i in 0..half {
            let (a, b) = bounds(&y, i);
            let mass = gauss::cdf(-a) - gauss::cdf(-b);
            let c = (pdf(a) - pdf(b)) / mass;
            let dca = pdf(a) * (c - a) / mass;
            let dcb = (tail(b) - c * pdf(b)) / mass;
            let (lo_dep, hi_dep) = (i > 0, i + 1 < half);
            sub[i] = if lo_dep { 0.5 * dca } else { 0.0 };
            sup[i] = if hi_dep { 0.5 * dcb } else { 0.0 };
            diag[i] = if lo_dep { 0.5 * dca } else { 0.0 } + if hi_dep { 0.5 * dcb } else { 0.0 } - 1.0;
            rhs[i] = y[i] - c;
            resid = resid.max((c - y[i]).abs());
        }
        if resid < 1e-13 {
            break;
        }
        // Thomas algorithm
        for i in 1..half {
            let w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut step = vec![0.0; half];
        step[half - 1] = rhs[half - 1] / diag[half - 1];
        for i in (0..half - 1).rev() {
            step[i] = (rhs[i] - sup[i] * step[i + 1]) / diag[i];
        }
        for (v, s) in y.iter_mut().zip(&step) {
            *v += s;
        }
    }
    let mut power = 0.0;
    for i in 0..half {
        let (lo, hi) = bounds(&y, i);
        power += 2.0 * (gauss::cdf(-lo) - gauss::cdf(-hi)) * y[i] * y[i];
    }
    let mut levels: Vec<f64> = y.iter().rev().map(|v| -v).collect();
    levels.extend_from_slice(&y);
    let mut thresholds: Vec<f64> = (1..half).rev().map(|i| -0.5 * (y[i - 1] + y[i])).collect();
    thresholds.push(0.0);
    thresholds.extend((1..half).map(|i| 0.5 * (y[i - 1] + y[i])));
    LloydMax { thresholds, levels, distortion: 1.0 - power }
}

/// Cached Lloyd-Max design for `bits ∈ [1, 12]`.
pub fn lloyd_max(bits: u8) -> Result<&'static LloydMax> {
    static CACHE: [OnceLock<LloydMax>; MAX_BITS as usize] = [const { OnceLock::new() }; MAX_BITS as usize];
    if !(1..=MAX_BITS).contains(&bits) {
        return Err(Error::param("bits", format!("unsupported bit depth {bits}")));
    }
    Ok(CACHE[bits as usize - 1].get_or_init(|| design(bits)))
}

/// Minimum NMSE of a unit-variance Gaussian at this bit depth; 0 for infinite resolution.
pub fn kappa_for_bits(bits: Bits) -> Result<f64> {
    match bits {
        Bits::Infinite => Ok(0.0),
        Bits::Finite(b) => Ok(lloyd_max(b)?.distortion),
    }
}

fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

pub fn quantize_1bit(frame: &RxFrame) -> RxFrame {
    RxFrame {
        samples: frame.samples.map(|v| Complex64::new(sign(v.re), sign(v.im))),
        noise_var: frame.noise_var,
    }
}

/// Per-component Lloyd-Max quantization after per-antenna RMS AGC.
/// The output is returned in the input's scale.
pub fn quantize_bbit(frame: &RxFrame, spec: &QuantizerSpec) -> Result<RxFrame> {
    let b = match spec.bits {
        Bits::Infinite => return Ok(frame.clone()),
        Bits::Finite(b) => b,
    };
    let lm = lloyd_max(b)?;
    let (m, n) = frame.samples.shape();
    let mut out = DMatrix::zeros(m, n);
    for r in 0..m {
        let rms = if spec.agc {
            let p = frame.samples.row(r).iter().map(|v| v.norm_sqr()).sum::<f64>() / n as f64;
            if p > 0.0 {
                p.sqrt()
            } else {
                1.0
            }
        } else {
            1.0
        };
        let to = SQRT_2 / rms;
        let back = rms / SQRT_2;
        for c in 0..n {
            let v = frame.samples[(r, c)];
            out[(r, c)] = Complex64::new(lm.quantize(v.re * to) * back, lm.quantize(v.im * to) * back);
        }
    }
    Ok(RxFrame { samples: out, noise_var: frame.noise_var })
}

/// Dispatches to the exact quantizer for the spec's bit depth.
pub fn quantize(frame: &RxFrame, spec: &QuantizerSpec) -> Result<RxFrame> {
    quantize_bbit(frame, spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BussgangFrame {
    pub samples: DMatrix<Complex64>,
    pub distortion_var: f64,
}

/// `(1−κ)·x + v`, `v ~ CN(0, κ(1−κ)(P_s + σ²))`.
pub fn bussgang_linearize<R: Rng + ?Sized>(
    frame: &RxFrame,
    kappa: f64,
    signal_power: f64,
    rng: &mut R,
) -> Result<BussgangFrame> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::param("kappa", format!("must lie in [0, 1), got {kappa}")));
    }
    let var = kappa * (1.0 - kappa) * (signal_power + frame.noise_var);
    let mut samples = frame.samples.map(|v| v * (1.0 - kappa));
    if var > 0.0 {
        samples.iter_mut().for_each(|v| *v += cn(rng, var));
    }
    Ok(BussgangFrame { samples, distortion_var: var })
}

impl From<BussgangFrame> for RxFrame {
    fn from(b: BussgangFrame) -> Self {
        RxFrame { samples: b.samples, noise_var: b.distortion_var }
    }
}
