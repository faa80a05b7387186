//! Beams, channels and the unquantized received frame.

use crate::error::{Error, Result};
use crate::seq::ComplexSequence;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;

/// BS analog sector, degrees.
pub const BS_SECTOR_DEG: f64 = 60.0;
/// UE monitoring range, degrees.
pub const UE_SECTOR_DEG: f64 = 90.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BeamVector {
    pub weights: DVector<Complex64>,
}

#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub taps: Vec<DMatrix<Complex64>>,
    pub noise_var: f64,
    /// Departure angle of the strongest generated path, degrees.
    pub dominant_aod_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianConfig {
    pub k_factor_db: f64,
    pub n_nlos: usize,
    pub n_tot: usize,
    pub m_tot: usize,
}

impl RicianConfig {
    /// K = 13.2 dB with five NLOS paths.
    pub fn standard(n_tot: usize, m_tot: usize) -> Self {
        Self { k_factor_db: 13.2, n_nlos: 5, n_tot, m_tot }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TdlProfile {
    pub taps: Vec<(usize, f64)>,
}

/// Per-antenna samples of one synchronization slot, `M_tot × N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RxFrame {
    pub samples: DMatrix<Complex64>,
    pub noise_var: f64,
}

impl RxFrame {
    pub fn n_antennas(&self) -> usize {
        self.samples.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.samples.ncols()
    }

    pub fn row(&self, b: usize) -> Vec<Complex64> {
        self.samples.row(b).iter().copied().collect()
    }
}

/// Half-wavelength ULA response `e^{−jπ a sin φ}`, unit modulus.
pub fn array_response(n: usize, angle_deg: f64) -> DVector<Complex64> {
    let s = angle_deg.to_radians().sin();
    DVector::from_iterator(n, (0..n).map(|a| Complex64::from_polar(1.0, -PI * a as f64 * s)))
}

pub fn steering_beam(n_tot: usize, angle_deg: f64) -> Result<BeamVector> {
    if n_tot == 0 {
        return Err(Error::param("n_tot", "need at least one transmit antenna"));
    }
    if !(angle_deg.abs() <= BS_SECTOR_DEG) {
        return Err(Error::param("angle", format!("{angle_deg} deg is outside [-60, 60]")));
    }
    let w = array_response(n_tot, angle_deg) / Complex64::new((n_tot as f64).sqrt(), 0.0);
    Ok(BeamVector { weights: w })
}

pub(crate) fn cn<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * s, im * s)
}

fn path<R: Rng + ?Sized>(rng: &mut R, n_tot: usize, m_tot: usize) -> (DMatrix<Complex64>, f64) {
    let aod = rng.random_range(-BS_SECTOR_DEG..=BS_SECTOR_DEG);
    let aoa = rng.random_range(-UE_SECTOR_DEG..=UE_SECTOR_DEG);
    let h = array_response(m_tot, aoa) * array_response(n_tot, aod).adjoint();
    (h, aod)
}

pub fn rician_channel<R: Rng + ?Sized>(cfg: &RicianConfig, rng: &mut R) -> Result<ChannelRealization> {
    if cfg.n_nlos == 0 {
        return Err(Error::param("n_nlos", "need at least one NLOS path"));
    }
    if !cfg.k_factor_db.is_finite() || cfg.n_tot == 0 || cfg.m_tot == 0 {
        return Err(Error::param("rician", "K must be finite and antenna counts positive"));
    }
    let k = 10f64.powf(cfg.k_factor_db / 10.0);
    let (los, aod) = path(rng, cfg.n_tot, cfg.m_tot);
    let los_phase = Complex64::from_polar(1.0, rng.random_range(-PI..PI));
    let mut nlos = DMatrix::zeros(cfg.m_tot, cfg.n_tot);
    for _ in 0..cfg.n_nlos {
        let (p, _) = path(rng, cfg.n_tot, cfg.m_tot);
        nlos += p * cn(rng, 1.0);
    }
    nlos /= Complex64::new((cfg.n_nlos as f64).sqrt(), 0.0);
    let h = los * (los_phase * (k / (1.0 + k)).sqrt()) + nlos * Complex64::new((1.0 / (1.0 + k)).sqrt(), 0.0);
    Ok(ChannelRealization { taps: vec![h], noise_var: 0.0, dominant_aod_deg: aod })
}

/// One random-angle path with a standard complex Gaussian gain.
pub fn single_path_channel<R: Rng + ?Sized>(n_tot: usize, m_tot: usize, rng: &mut R) -> ChannelRealization {
    let (h, aod) = path(rng, n_tot, m_tot);
    let g = cn(rng, 1.0);
    ChannelRealization { taps: vec![h * g], noise_var: 0.0, dominant_aod_deg: aod }
}

/// Flat channel whose beamformed transfer is exactly 1 on every receive antenna.
pub fn awgn_channel(m_tot: usize, beam: &BeamVector) -> ChannelRealization {
    let f = &beam.weights;
    let energy = f.norm_squared();
    let row = f.adjoint() / Complex64::new(energy, 0.0);
    let h = DMatrix::from_fn(m_tot, f.len(), |_, a| row[a]);
    ChannelRealization { taps: vec![h], noise_var: 0.0, dominant_aod_deg: 0.0 }
}

/// Five-tap example profile shipped with the crate.
pub const EXAMPLE_TDL_CSV: &str = include_str!("../data/tdl_example.csv");

impl TdlProfile {
    pub fn example() -> Self {
        Self::from_reader(EXAMPLE_TDL_CSV.as_bytes()).expect("bundled profile is valid")
    }

    pub fn new(mut taps: Vec<(usize, f64)>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::param("tdl", "profile has no taps"));
        }
        taps.sort_by_key(|t| t.0);
        if taps.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::param("tdl", "tap delays must be distinct"));
        }
        if taps.iter().any(|t| !t.1.is_finite()) {
            return Err(Error::param("tdl", "tap powers must be finite"));
        }
        Ok(Self { taps })
    }

    /// Reads a CSV with header `delay_samples,power_db`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn from_reader<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().map(str::trim).collect::<Vec<_>>() != ["delay_samples", "power_db"] {
            return Err(Error::Config(format!("TDL header must be delay_samples,power_db, got {:?}", headers)));
        }
        let mut taps = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let d: usize = rec[0].trim().parse().map_err(|e| Error::Config(format!("delay: {e}")))?;
            let p: f64 = rec[1].trim().parse().map_err(|e| Error::Config(format!("power: {e}")))?;
            taps.push((d, p));
        }
        Self::new(taps)
    }

    pub fn max_delay(&self) -> usize {
        self.taps.iter().map(|t| t.0).max().unwrap_or(0)
    }
}

/// Tapped-delay-line channel: tap `ℓ` is a random-angle path scaled to its profile power.
pub fn tdl_channel<R: Rng + ?Sized>(
    profile: &TdlProfile,
    cp_len: usize,
    n_tot: usize,
    m_tot: usize,
    rng: &mut R,
) -> Result<ChannelRealization> {
    if profile.max_delay() >= cp_len {
        return Err(Error::param(
            "tdl",
            format!("max delay {} must be below the CP length {cp_len}", profile.max_delay()),
        ));
    }
    let lin: Vec<f64> = profile.taps.iter().map(|t| 10f64.powf(t.1 / 10.0)).collect();
    let total: f64 = lin.iter().sum();
    let mut taps = vec![DMatrix::zeros(m_tot, n_tot); profile.max_delay() + 1];
    let mut best = (f64::NEG_INFINITY, 0.0);
    for (&(d, _), &p) in profile.taps.iter().zip(&lin) {
        let (h, aod) = path(rng, n_tot, m_tot);
        taps[d] = h * (cn(rng, 1.0) * (p / total).sqrt());
        if p > best.0 {
            best = (p, aod);
        }
    }
    Ok(ChannelRealization { taps, noise_var: 0.0, dominant_aod_deg: best.1 })
}

impl ChannelRealization {
    pub fn n_taps(&self) -> usize {
        self.taps.len()
    }

    pub fn m_tot(&self) -> usize {
        self.taps[0].nrows()
    }

    /// `Σ_ℓ ‖H[ℓ] f‖² / M_tot`: beamformed power per receive antenna averaged over frequency.
    pub fn beamformed_power(&self, beam: &BeamVector) -> f64 {
        let s: f64 = self.taps.iter().map(|h| (h * &beam.weights).norm_squared()).sum();
        s / self.m_tot() as f64
    }

    /// Sets `σ²` so the beamformed per-antenna SNR equals `snr_db`. Infinite SNR gives `σ² = 0`.
    pub fn set_snr_db(&mut self, beam: &BeamVector, snr_db: f64) {
        self.noise_var = if snr_db == f64::INFINITY {
            0.0
        } else {
            self.beamformed_power(beam) / 10f64.powf(snr_db / 10.0)
        };
    }
}

/// `Σ_ℓ H[ℓ] f e^{jℓω}` for every receive antenna.
pub fn channel_transfer(ch: &ChannelRealization, beam: &BeamVector, omega: f64) -> DVector<Complex64> {
    let mut acc = DVector::zeros(ch.m_tot());
    for (l, h) in ch.taps.iter().enumerate() {
        acc += (h * &beam.weights) * Complex64::from_polar(1.0, l as f64 * omega);
    }
    acc
}

/// `e^{jμn} Σ_ℓ (H[ℓ]f)_b d[(n−ℓ) mod N] + w`, noise drawn row by row after rotation.
pub fn transmit_receive<R: Rng + ?Sized>(
    seq: &ComplexSequence,
    ch: &ChannelRealization,
    beam: &BeamVector,
    mu: f64,
    rng: &mut R,
) -> Result<RxFrame> {
    let n = seq.len();
    if n == 0 {
        return Err(Error::param("seq", "empty sequence"));
    }
    if beam.weights.len() != ch.taps[0].ncols() {
        return Err(Error::LengthMismatch { expected: ch.taps[0].ncols(), got: beam.weights.len() });
    }
    let m = ch.m_tot();
    let g: Vec<DVector<Complex64>> = ch.taps.iter().map(|h| h * &beam.weights).collect();
    let rot: Vec<Complex64> = (0..n).map(|i| Complex64::from_polar(1.0, mu * i as f64)).collect();
    let d = &seq.samples;
    let mut out = DMatrix::zeros(m, n);
    for b in 0..m {
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, gl) in g.iter().enumerate() {
                acc += gl[b] * d[(i + n * (l / n + 1) - l) % n];
            }
            out[(b, i)] = rot[i] * acc;
        }
    }
    if ch.noise_var > 0.0 {
        let s = (ch.noise_var).sqrt() * FRAC_1_SQRT_2;
        for b in 0..m {
            for i in 0..n {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                out[(b, i)] += Complex64::new(re * s, im * s);
            }
        }
    }
    Ok(RxFrame { samples: out, noise_var: ch.noise_var })
}
