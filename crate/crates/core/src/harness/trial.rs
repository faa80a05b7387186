//! One Monte-Carlo trial: channel, CFO, noise, ADC, antenna selection, estimate.

use super::config::{CfoSpec, ChannelKind, Method, QuantizerModel, SimConfig};
use crate::analysis::fisher_1bit;
use crate::error::{Error, Result};
use crate::est::{
    aux_channels, aux_invert, aux_ratio, eps_to_mu, estimate_zc, mu_to_eps, select_antenna, sumdiff_channels,
    sumdiff_invert, sumdiff_ratio, EstimateReport, Intermediate,
};
use crate::phy::{
    awgn_channel, rician_channel, single_path_channel, steering_beam, tdl_channel, transmit_receive, BeamVector,
    ChannelRealization, RicianConfig, RxFrame, TdlProfile, BS_SECTOR_DEG,
};
use crate::quant::{bussgang_linearize, kappa_for_bits, quantize, Bits, QuantizerSpec};
use crate::seq::{aux_pair, sumdiff_pair, zc_time_symbol, AuxParams, ComplexSequence, SumDiffParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Generator for `(master_seed, trial, ue)`.
pub fn trial_rng(master_seed: u64, trial: usize, ue: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((trial as u64) << 20) | (ue as u64 & 0xF_FFFF));
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub ue: usize,
    pub mu_true: f64,
    pub mu_hat: f64,
    pub eps_true: f64,
    pub eps_hat: f64,
    pub method: Method,
    pub bits: Bits,
    pub snr_db: f64,
    pub antenna: usize,
    /// The ratio or phase was undefined and a fallback estimate was used.
    pub degenerate: bool,
    pub clamped: bool,
}

impl TrialRecord {
    pub fn sq_error(&self) -> f64 {
        (self.eps_hat - self.eps_true).powi(2)
    }
}

#[derive(Debug, Clone)]
pub enum ChannelModel {
    Awgn,
    SinglePath,
    Rician(RicianConfig),
    Tdl { profile: TdlProfile, cp_len: usize },
}

/// Resolved parameters for one grid point, shared read-only by all trials.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub n: usize,
    pub n_tot: usize,
    pub m_tot: usize,
    pub method: Method,
    /// Indexed by `ue % len`.
    pub bits: Vec<Bits>,
    pub snr_db: f64,
    pub cfo: CfoSpec,
    pub channel: ChannelModel,
    pub quantizer: QuantizerModel,
    pub agc: bool,
    pub aux: AuxParams,
    pub sumdiff: SumDiffParams,
    pub zc_symbol: ComplexSequence,
    pub master_seed: u64,
}

/// Trial outcome plus the 1-bit CFO bound for the realized channel, when requested.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub cfo_bound: Option<f64>,
}

impl Scenario {
    /// Scenario at the first entry of every list in `cfg`.
    pub fn from_config(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let channel = match cfg.channel.kind {
            ChannelKind::Awgn => ChannelModel::Awgn,
            ChannelKind::Singlepath => ChannelModel::SinglePath,
            ChannelKind::Rician => ChannelModel::Rician(RicianConfig {
                k_factor_db: cfg.channel.k_factor_db,
                n_nlos: cfg.channel.n_nlos,
                n_tot: cfg.n_tot,
                m_tot: cfg.m_tot,
            }),
            ChannelKind::Tdl => {
                let profile = match &cfg.channel.tdl_profile {
                    Some(p) => TdlProfile::from_csv(p)?,
                    None => TdlProfile::example(),
                };
                let cp_len = cfg.cp_len();
                if profile.max_delay() >= cp_len {
                    return Err(Error::param(
                        "tdl",
                        format!("max delay {} must be below the CP length {cp_len}", profile.max_delay()),
                    ));
                }
                ChannelModel::Tdl { profile, cp_len }
            }
        };
        Ok(Self {
            n: cfg.n,
            n_tot: cfg.n_tot,
            m_tot: cfg.m_tot,
            method: cfg.methods()[0],
            bits: cfg.bits.clone(),
            snr_db: cfg.snr_db[0],
            cfo: cfg.cfo,
            channel,
            quantizer: cfg.quantizer,
            agc: cfg.agc,
            aux: AuxParams::new(eps_to_mu(cfg.design.theta_eps, cfg.n), cfg.design.k_prime, cfg.n)?,
            sumdiff: SumDiffParams::new(eps_to_mu(cfg.design.eta_eps, cfg.n), cfg.n)?,
            zc_symbol: zc_time_symbol(cfg.zc.n_zc, cfg.zc.root, cfg.n)?,
            master_seed: cfg.master_seed,
        })
    }

    pub fn bits_for(&self, ue: usize) -> Bits {
        self.bits[ue % self.bits.len()]
    }

    fn slots(&self) -> Result<Vec<ComplexSequence>> {
        Ok(match self.method {
            Method::Zc => vec![self.zc_symbol.clone()],
            Method::Aux => {
                let (a, b) = aux_pair(&self.aux)?;
                vec![a, b]
            }
            Method::Sumdiff => {
                let (a, b) = sumdiff_pair(&self.sumdiff)?;
                vec![a, b]
            }
        })
    }

    /// Channel realization and beam for one trial, noise variance set from the SNR.
    pub fn channel_for_trial<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(ChannelRealization, BeamVector)> {
        let (mut ch, beam) = self.draw_channel(rng)?;
        ch.set_snr_db(&beam, self.snr_db);
        Ok((ch, beam))
    }

    fn draw_channel<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(ChannelRealization, BeamVector)> {
        let steer = |ch: ChannelRealization| -> Result<(ChannelRealization, BeamVector)> {
            let angle = ch.dominant_aod_deg.clamp(-BS_SECTOR_DEG, BS_SECTOR_DEG);
            let beam = steering_beam(self.n_tot, angle)?;
            Ok((ch, beam))
        };
        match &self.channel {
            ChannelModel::Awgn => {
                let beam = steering_beam(self.n_tot, 0.0)?;
                Ok((awgn_channel(self.m_tot, &beam), beam))
            }
            ChannelModel::SinglePath => steer(single_path_channel(self.n_tot, self.m_tot, rng)),
            ChannelModel::Rician(cfg) => steer(rician_channel(cfg, rng)?),
            ChannelModel::Tdl { profile, cp_len } => {
                steer(tdl_channel(profile, *cp_len, self.n_tot, self.m_tot, rng)?)
            }
        }
    }

    fn draw_cfo<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.cfo {
            CfoSpec::Fixed(v) => v,
            CfoSpec::Interval(_) => {
                let (lo, hi) = self.cfo.bounds();
                if hi > lo {
                    rng.random_range(lo..hi)
                } else {
                    lo
                }
            }
        }
    }

    fn adc<R: Rng + ?Sized>(&self, frame: &RxFrame, bits: Bits, signal_power: f64, rng: &mut R) -> Result<RxFrame> {
        match self.quantizer {
            QuantizerModel::Exact => quantize(frame, &QuantizerSpec { bits, kappa: kappa_for_bits(bits)?, agc: self.agc }),
            QuantizerModel::Bussgang => {
                Ok(bussgang_linearize(frame, kappa_for_bits(bits)?, signal_power, rng)?.into())
            }
        }
    }

    /// Estimate used when the ratio or phase is undefined: the centre of the range of estimation.
    fn fallback(&self) -> f64 {
        match self.method {
            Method::Zc => 0.0,
            Method::Aux => self.aux.theta,
            Method::Sumdiff => self.sumdiff.eta + 2.0 * PI / self.n as f64,
        }
    }

    pub fn run_trial(&self, trial: usize, ue: usize) -> Result<TrialRecord> {
        Ok(self.run_trial_with_bound(trial, ue, false)?.record)
    }

    /// Runs one trial; with `want_bound` also evaluates the 1-bit bound on the realized channel.
    pub fn run_trial_with_bound(&self, trial: usize, ue: usize, want_bound: bool) -> Result<TrialOutcome> {
        let mut rng = trial_rng(self.master_seed, trial, ue);
        let eps = self.draw_cfo(&mut rng);
        let mu = eps_to_mu(eps, self.n);
        let (ch, beam) = self.channel_for_trial(&mut rng)?;
        let bits = self.bits_for(ue);
        let signal_power = ch.beamformed_power(&beam);

        let slots = self.slots()?;
        let mut rx = Vec::with_capacity(slots.len());
        for s in &slots {
            let frame = transmit_receive(s, &ch, &beam, mu, &mut rng)?;
            rx.push(self.adc(&frame, bits, signal_power, &mut rng)?);
        }
        let antenna = select_antenna(&rx[0]);
        let rows: Vec<Vec<Complex64>> = rx.iter().map(|f| f.row(antenna)).collect();

        let estimate: Option<EstimateReport> = match self.method {
            Method::Zc => estimate_zc(&rows[0], &self.zc_symbol.samples).ok(),
            Method::Aux => aux_ratio(&aux_channels(&rows[0], &rows[1])?)
                .ok()
                .map(|a| aux_invert(a, &self.aux)),
            Method::Sumdiff => sumdiff_ratio(&sumdiff_channels(&rows[0], &rows[1])?)
                .ok()
                .map(|b| sumdiff_invert(b, &self.sumdiff)),
        };
        let degenerate = estimate.is_none();
        let mu_hat = estimate.map_or_else(|| self.fallback(), |e| e.mu_hat);
        let clamped = matches!(estimate.map(|e| e.intermediate), Some(Intermediate::Aux { clamped: true, .. }));

        let cfo_bound = if want_bound && slots.len() == 2 && ch.noise_var > 0.0 {
            let clean: Vec<Vec<Complex64>> = slots
                .iter()
                .map(|s| {
                    let f = transmit_receive(s, &ChannelRealization { noise_var: 0.0, ..ch.clone() }, &beam, 0.0, &mut rng)?;
                    Ok(f.row(antenna))
                })
                .collect::<Result<_>>()?;
            Some(fisher_1bit(&clean[0], &clean[1], eps, ch.noise_var)?.cfo_bound)
        } else if want_bound {
            Some(f64::INFINITY)
        } else {
            None
        };

        Ok(TrialOutcome {
            record: TrialRecord {
                trial,
                ue,
                mu_true: mu,
                mu_hat,
                eps_true: eps,
                eps_hat: mu_to_eps(mu_hat, self.n),
                method: self.method,
                bits,
                snr_db: self.snr_db,
                antenna,
                degenerate,
                clamped,
            },
            cfo_bound,
        })
    }
}

/// Single trial at the first grid point of `cfg`.
pub fn run_trial(cfg: &SimConfig, trial: usize, ue: usize) -> Result<TrialRecord> {
    let sc = Scenario::from_config(cfg)?;
    sc.run_trial(trial, ue)
}
