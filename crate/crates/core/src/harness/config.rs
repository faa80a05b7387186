//! Scenario configuration, loaded from TOML. Every field has a default.
//!
//! CFO values and the fixed design offsets (`theta_eps`, `eta_eps`) are in
//! subcarrier units; they are converted to radians per sample internally.

use crate::error::{Error, Result};
use crate::quant::Bits;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Zc,
    Aux,
    Sumdiff,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Zc => "zc",
            Method::Aux => "aux",
            Method::Sumdiff => "sumdiff",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// A fixed CFO, or an interval drawn uniformly per trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CfoSpec {
    Fixed(f64),
    Interval([f64; 2]),
}

impl CfoSpec {
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            CfoSpec::Fixed(v) => (v, v),
            CfoSpec::Interval([a, b]) => (a.min(b), a.max(b)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Awgn,
    Singlepath,
    Rician,
    Tdl,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    pub k_factor_db: f64,
    pub n_nlos: usize,
    /// `delay_samples,power_db` CSV; the bundled example profile when absent.
    pub tdl_profile: Option<PathBuf>,
    /// CP length in samples; 0 derives it from `N` with the 0.82/8.33 µs ratio.
    pub cp_len: usize,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self { kind: ChannelKind::Rician, k_factor_db: 13.2, n_nlos: 5, tdl_profile: None, cp_len: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignMode {
    Fixed,
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignConfig {
    pub mode: DesignMode,
    /// Auxiliary centre `θ`, subcarriers.
    pub theta_eps: f64,
    pub k_prime: usize,
    /// Sum/difference branch start `η`, subcarriers.
    pub eta_eps: f64,
    pub codebook_size: usize,
    pub representative_bits: Bits,
    /// CFO samples per UE forming the long-term history in auto mode.
    pub history_len: usize,
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self {
            mode: DesignMode::Fixed,
            theta_eps: 0.0,
            k_prime: 1,
            eta_eps: -1.0,
            codebook_size: 101,
            representative_bits: Bits::Finite(2),
            history_len: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZcConfig {
    pub n_zc: usize,
    pub root: usize,
}

impl Default for ZcConfig {
    fn default() -> Self {
        Self { n_zc: 63, root: 25 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    SnrDb,
    Cfo,
    Bits,
}

impl SweepVar {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVar::SnrDb => "snr_db",
            SweepVar::Cfo => "cfo",
            SweepVar::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub var: SweepVar,
    /// CFO grid used when `var = "cfo"`.
    pub cfo_values: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { var: SweepVar::SnrDb, cfo_values: vec![-0.05, -0.025, 0.0, 0.025, 0.05] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymmetryConfig {
    pub n_zc: Vec<usize>,
    pub bits: Vec<Bits>,
    pub snr_db: f64,
}

impl Default for SymmetryConfig {
    fn default() -> Self {
        Self {
            n_zc: vec![31, 63, 127, 255],
            bits: vec![Bits::Finite(1), Bits::Finite(2), Bits::Finite(4), Bits::Infinite],
            snr_db: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatioConfig {
    pub points: usize,
    pub bits: Vec<Bits>,
    pub snr_db: f64,
}

impl Default for RatioConfig {
    fn default() -> Self {
        Self {
            points: 101,
            bits: vec![Bits::Finite(1), Bits::Finite(2), Bits::Finite(4), Bits::Infinite],
            snr_db: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MultiuserConfig {
    pub ranges: Vec<f64>,
    pub fixed_ranges: Vec<f64>,
    pub include_zc: bool,
    pub include_sumdiff: bool,
}

impl Default for MultiuserConfig {
    fn default() -> Self {
        Self {
            ranges: vec![0.02, 0.03, 0.05, 0.07, 0.1],
            fixed_ranges: vec![0.01, 0.03, 0.08],
            include_zc: true,
            include_sumdiff: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LemmaConfig {
    pub points: usize,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        Self { points: 51 }
    }
}

/// ADC model used in the trial pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantizerModel {
    /// Element-wise Lloyd-Max quantizer.
    Exact,
    /// `(1−κ)x + v` linearized surrogate.
    Bussgang,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n: usize,
    pub n_tot: usize,
    pub m_tot: usize,
    pub method: OneOrMany<Method>,
    pub bits: Vec<Bits>,
    pub snr_db: Vec<f64>,
    pub cfo: CfoSpec,
    pub n_ue: usize,
    pub quantizer: QuantizerModel,
    pub agc: bool,
    pub channel: ChannelConfig,
    pub design: DesignConfig,
    pub zc: ZcConfig,
    pub sweep: SweepConfig,
    pub symmetry: SymmetryConfig,
    pub ratio: RatioConfig,
    pub multiuser: MultiuserConfig,
    pub lemma: LemmaConfig,
    pub trials: usize,
    pub master_seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 64,
            n_tot: 16,
            m_tot: 8,
            method: OneOrMany::One(Method::Aux),
            bits: vec![Bits::Finite(2)],
            snr_db: vec![10.0],
            cfo: CfoSpec::Fixed(0.3),
            n_ue: 1,
            quantizer: QuantizerModel::Exact,
            agc: true,
            channel: ChannelConfig::default(),
            design: DesignConfig::default(),
            zc: ZcConfig::default(),
            sweep: SweepConfig::default(),
            symmetry: SymmetryConfig::default(),
            ratio: RatioConfig::default(),
            multiuser: MultiuserConfig::default(),
            lemma: LemmaConfig::default(),
            trials: 2000,
            master_seed: 1,
        }
    }
}

impl SimConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn methods(&self) -> Vec<Method> {
        self.method.to_vec()
    }

    pub fn cp_len(&self) -> usize {
        if self.channel.cp_len > 0 {
            self.channel.cp_len
        } else {
            ((self.n as f64) * 0.82 / 8.33).round().max(1.0) as usize
        }
    }

    /// Structural checks shared by every experiment.
    pub fn validate(&self) -> Result<()> {
        let bad = |name: &'static str, why: &str| Err(Error::param(name, why.to_string()));
        if self.trials == 0 {
            return bad("trials", "must be >= 1");
        }
        if self.n < 8 || self.n % 2 != 0 {
            return bad("n", "must be even and >= 8");
        }
        if self.n_tot == 0 || self.m_tot == 0 {
            return bad("antennas", "n_tot and m_tot must be positive");
        }
        if self.bits.is_empty() || self.snr_db.is_empty() || self.methods().is_empty() {
            return bad("config", "bits, snr_db and method must be non-empty");
        }
        if self.n_ue == 0 {
            return bad("n_ue", "must be >= 1");
        }
        if self.design.k_prime == 0 || self.design.k_prime > self.n / 4 {
            return bad("design.k_prime", "must lie in [1, N/4]");
        }
        if self.design.codebook_size == 0 {
            return bad("design.codebook_size", "must be >= 1");
        }
        if self.zc.n_zc % 2 == 0 || self.zc.n_zc >= self.n || self.zc.root >= self.zc.n_zc {
            return bad("zc", "n_zc must be odd and below N, root below n_zc");
        }
        let (lo, hi) = self.cfo.bounds();
        if !lo.is_finite() || !hi.is_finite() {
            return bad("cfo", "must be finite");
        }
        Ok(())
    }

    /// The CFO interval must sit inside each configured method's range of estimation.
    pub fn validate_cfo_coverage(&self) -> Result<()> {
        if self.design.mode == DesignMode::Auto {
            return Ok(());
        }
        let (lo, hi) = self.cfo.bounds();
        for m in self.methods() {
            let (a, b) = match m {
                Method::Zc => (-1.0, 1.0),
                Method::Aux => {
                    let k = self.design.k_prime as f64;
                    (self.design.theta_eps - k, self.design.theta_eps + k)
                }
                Method::Sumdiff => (self.design.eta_eps, self.design.eta_eps + 2.0),
            };
            if !(lo > a && hi < b) {
                return Err(Error::param(
                    "cfo",
                    format!("[{lo}, {hi}] is outside the {m} range of estimation ({a}, {b})"),
                ));
            }
        }
        Ok(())
    }
}
