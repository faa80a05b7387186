//! Experiment drivers. Each returns typed rows; [`write_csv`] renders them.

use super::config::{CfoSpec, DesignMode, Method, SimConfig, SweepVar};
use super::trial::{trial_rng, Scenario, TrialRecord};
use crate::analysis::{lemma1_variance, lemma2_variance};
use crate::error::{Error, Result};
use crate::est::{aux_channels, aux_ratio, eps_to_mu, select_antenna, sumdiff_channels, sumdiff_ratio};
use crate::opt::{derive_vue, optimize_aux, optimize_sumdiff, ThetaCodebook, UeStat, OptResult, SumDiffOptResult};
use crate::phy::{awgn_channel, steering_beam, transmit_receive};
use crate::quant::{kappa_for_bits, quantize, Bits, QuantizerSpec};
use crate::seq::{aux_pair, sumdiff_pair, zc_generate, zc_time_symbol, AuxParams, ComplexSequence, SumDiffParams};
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

/// Trial index reserved for the per-UE CFO history streams of auto design.
const HISTORY_STREAM: usize = 1 << 40;

/// A row type with a fixed CSV header.
pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn write_csv<R: CsvRow, W: Write>(rows: &[R], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

/// Mean squared error with a normal-approximation 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MseStat {
    pub mse: f64,
    pub trials: usize,
    /// `None` for a single trial.
    pub ci95: Option<f64>,
    pub degenerate: usize,
}

impl MseStat {
    pub fn from_records(records: &[TrialRecord]) -> Self {
        let errs: Vec<f64> = records.iter().map(TrialRecord::sq_error).collect();
        let mut s = Self::from_errors(&errs);
        s.degenerate = records.iter().filter(|r| r.degenerate).count();
        s
    }

    pub fn from_errors(errs: &[f64]) -> Self {
        let t = errs.len();
        let mse = errs.iter().sum::<f64>() / t.max(1) as f64;
        let ci95 = (t > 1).then(|| {
            let var = errs.iter().map(|e| (e - mse).powi(2)).sum::<f64>() / (t - 1) as f64;
            1.96 * var.sqrt() / (t as f64).sqrt()
        });
        Self { mse, trials: t, ci95, degenerate: 0 }
    }

    pub fn lower(&self) -> f64 {
        self.mse - self.ci95.unwrap_or(0.0)
    }

    pub fn upper(&self) -> f64 {
        self.mse + self.ci95.unwrap_or(0.0)
    }

    /// Strictly below `other` with non-overlapping intervals.
    pub fn clearly_below(&self, other: &MseStat) -> bool {
        self.upper() < other.lower()
    }
}

/// All `(trial, ue)` records of a scenario, in index order whatever the schedule.
pub fn collect_records(sc: &Scenario, trials: usize, n_ue: usize) -> Result<Vec<TrialRecord>> {
    (0..trials * n_ue)
        .into_par_iter()
        .map(|i| sc.run_trial(i / n_ue, i % n_ue))
        .collect()
}

/// Design parameters resolved for a scenario: fixed from the config, or optimized
/// for a virtual UE built from per-UE CFO histories over the configured interval.
pub fn resolve_design(cfg: &SimConfig, snr_db: f64, cfo: CfoSpec) -> Result<(AuxParams, SumDiffParams)> {
    match cfg.design.mode {
        DesignMode::Fixed => Ok((
            AuxParams::new(eps_to_mu(cfg.design.theta_eps, cfg.n), cfg.design.k_prime, cfg.n)?,
            SumDiffParams::new(eps_to_mu(cfg.design.eta_eps, cfg.n), cfg.n)?,
        )),
        DesignMode::Auto => {
            let (a, s) = auto_design(cfg, snr_db, cfo)?;
            Ok((AuxParams::new(a.theta_opt, a.k_prime, cfg.n)?, SumDiffParams::new(s.eta_opt, cfg.n)?))
        }
    }
}

/// Synthetic long-term statistics: `history_len` CFO draws per UE from a dedicated stream.
pub fn synth_ue_stats(cfg: &SimConfig, snr_db: f64, cfo: CfoSpec) -> Vec<UeStat> {
    let (lo, hi) = cfo.bounds();
    (0..cfg.n_ue)
        .map(|ue| {
            let mut rng = trial_rng(cfg.master_seed, HISTORY_STREAM, ue);
            let cfo_history = (0..cfg.design.history_len)
                .map(|_| if hi > lo { rng.random_range(lo..hi) } else { lo })
                .collect();
            UeStat {
                snr_linear: 10f64.powf(snr_db / 10.0),
                bits: cfg.bits[ue % cfg.bits.len()],
                cfo_history,
            }
        })
        .collect()
}

fn auto_design(cfg: &SimConfig, snr_db: f64, cfo: CfoSpec) -> Result<(OptResult, SumDiffOptResult)> {
    optimize_from_stats(cfg, &synth_ue_stats(cfg, snr_db, cfo))
}

pub fn optimize_from_stats(cfg: &SimConfig, stats: &[UeStat]) -> Result<(OptResult, SumDiffOptResult)> {
    let vue = derive_vue(stats, cfg.n, cfg.design.representative_bits)?;
    let book = ThetaCodebook::uniform(cfg.design.codebook_size)?;
    Ok((optimize_aux(&book, cfg.n, &vue)?, optimize_sumdiff(&book, cfg.n, &vue)?))
}

// ---------------------------------------------------------------- mse-sweep

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep: f64,
    pub var: SweepVar,
    pub method: Method,
    pub bits: Bits,
    pub stat: MseStat,
}

impl CsvRow for SweepRow {
    const HEADER: &'static [&'static str] = &["sweep", "var", "method", "bits", "mse", "trials", "ci95"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.sweep.to_string(),
            self.var.as_str().to_string(),
            self.method.to_string(),
            self.bits.to_string(),
            self.stat.mse.to_string(),
            self.stat.trials.to_string(),
            fmt_opt(self.stat.ci95),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn get(&self, method: Method, bits: Bits, sweep: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.method == method && r.bits == bits && r.sweep == sweep)
    }
}

/// Grid of methods × bit depths × sweep values; each point averages `trials × n_ue` records.
pub fn run_mse_sweep(cfg: &SimConfig) -> Result<SweepResult> {
    let mut rows = Vec::new();
    let var = cfg.sweep.var;
    let points: Vec<(f64, Bits, f64, CfoSpec)> = match var {
        SweepVar::SnrDb => cfg
            .bits
            .iter()
            .flat_map(|&b| cfg.snr_db.iter().map(move |&s| (s, b, s, cfg.cfo)))
            .collect(),
        SweepVar::Cfo => cfg
            .bits
            .iter()
            .flat_map(|&b| cfg.sweep.cfo_values.iter().map(move |&c| (c, b, cfg.snr_db[0], CfoSpec::Fixed(c))))
            .collect(),
        SweepVar::Bits => cfg.bits.iter().map(|&b| (bits_value(b), b, cfg.snr_db[0], cfg.cfo)).collect(),
    };
    let mut base = Scenario::from_config(cfg)?;
    for method in cfg.methods() {
        for &(sweep, bits, snr_db, cfo) in &points {
            let mut c = cfg.clone();
            c.cfo = cfo;
            c.method = super::config::OneOrMany::One(method);
            c.validate_cfo_coverage()?;
            let (aux, sd) = resolve_design(cfg, snr_db, cfo)?;
            base.method = method;
            base.bits = vec![bits];
            base.snr_db = snr_db;
            base.cfo = cfo;
            base.aux = aux;
            base.sumdiff = sd;
            let records = collect_records(&base, cfg.trials, cfg.n_ue)?;
            rows.push(SweepRow { sweep, var, method, bits, stat: MseStat::from_records(&records) });
        }
    }
    Ok(SweepResult { rows })
}

fn bits_value(b: Bits) -> f64 {
    match b {
        Bits::Finite(v) => v as f64,
        Bits::Infinite => f64::INFINITY,
    }
}

// ---------------------------------------------------------------- zc-symmetry

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryRow {
    pub n_zc: usize,
    pub bits: Bits,
    pub z_real: f64,
}

impl CsvRow for SymmetryRow {
    const HEADER: &'static [&'static str] = &["n_zc", "bits", "z_real"];
    fn fields(&self) -> Vec<String> {
        vec![self.n_zc.to_string(), self.bits.to_string(), self.z_real.to_string()]
    }
}

/// `2 Σ_{n′<(L−1)/2} Re(q*[n′]·q[L−1−n′]) + |q[(L−1)/2]|²` for odd `L`.
pub fn symmetry_metric(q: &[Complex64]) -> f64 {
    let l = q.len();
    let half = l / 2;
    let mut z = 0.0;
    for i in 0..half {
        z += 2.0 * (q[i].conj() * q[l - 1 - i]).re;
    }
    if l % 2 == 1 {
        z += q[half].norm_sqr();
    }
    z
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Configured root when it is coprime to `n_zc`, otherwise the smallest coprime root.
pub fn root_for(n_zc: usize, root: usize) -> usize {
    if root > 0 && root < n_zc && gcd(root, n_zc) == 1 {
        root
    } else {
        (1..n_zc).find(|&r| gcd(r, n_zc) == 1).unwrap_or(1)
    }
}

/// Matched-filter symmetry of the raw ZC after AWGN and quantization, zero CFO.
pub fn run_zc_symmetry(cfg: &SimConfig) -> Result<Vec<SymmetryRow>> {
    cfg.validate()?;
    let beam = steering_beam(cfg.n_tot, 0.0)?;
    let mut rows = Vec::new();
    for &n_zc in &cfg.symmetry.n_zc {
        let seq = zc_generate(n_zc, root_for(n_zc, cfg.zc.root))?;
        for &bits in &cfg.symmetry.bits {
            let spec = QuantizerSpec { bits, kappa: kappa_for_bits(bits)?, agc: cfg.agc };
            let zs: Vec<f64> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = trial_rng(cfg.master_seed, t, 0);
                    let mut ch = awgn_channel(cfg.m_tot, &beam);
                    ch.set_snr_db(&beam, cfg.symmetry.snr_db);
                    let frame = quantize(&transmit_receive(&seq, &ch, &beam, 0.0, &mut rng)?, &spec)?;
                    Ok(symmetry_metric(&frame.row(select_antenna(&frame))))
                })
                .collect::<Result<_>>()?;
            rows.push(SymmetryRow { n_zc, bits, z_real: zs.iter().sum::<f64>() / zs.len() as f64 });
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------- ratio-curve

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub method: Method,
    /// `μ − θ` (auxiliary) or `μ − η` (sum/difference), radians per sample.
    pub mu_offset: f64,
    pub bits: Bits,
    /// Mean over trials with a defined ratio; NaN when none was.
    pub ratio_mean: f64,
    pub ratio_std: f64,
}

impl CsvRow for RatioRow {
    const HEADER: &'static [&'static str] = &["mu_offset", "bits", "ratio_mean", "ratio_std"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.mu_offset.to_string(),
            self.bits.to_string(),
            self.ratio_mean.to_string(),
            self.ratio_std.to_string(),
        ]
    }
}

/// Open interval of offsets over the range of estimation, `points` interior samples.
pub fn ratio_grid(method: Method, n: usize, delta: f64, points: usize) -> Result<Vec<f64>> {
    let (lo, hi) = match method {
        Method::Aux => (-delta, delta),
        Method::Sumdiff => (0.0, 4.0 * PI / n as f64),
        Method::Zc => return Err(Error::param("method", "ratio curves exist for aux and sumdiff only")),
    };
    Ok((1..=points).map(|i| lo + (hi - lo) * i as f64 / (points + 1) as f64).collect())
}

/// Mean ratio metric across the range of estimation for every bit depth.
///
/// Uses the first configured method; ZC is rejected.
pub fn run_ratio_curve(cfg: &SimConfig) -> Result<Vec<RatioRow>> {
    let method = cfg.methods()[0];
    let mut sc = Scenario::from_config(cfg)?;
    sc.method = method;
    sc.snr_db = cfg.ratio.snr_db;
    let grid = ratio_grid(method, cfg.n, sc.aux.delta, cfg.ratio.points)?;
    let (d0, d1) = match method {
        Method::Aux => aux_pair(&sc.aux)?,
        _ => sumdiff_pair(&sc.sumdiff)?,
    };
    let centre = if method == Method::Aux { sc.aux.theta } else { sc.sumdiff.eta };
    let mut rows = Vec::new();
    for &bits in &cfg.ratio.bits {
        let spec = QuantizerSpec { bits, kappa: kappa_for_bits(bits)?, agc: cfg.agc };
        for &x in &grid {
            sc.cfo = CfoSpec::Fixed(crate::est::mu_to_eps(centre + x, cfg.n));
            let ratios: Vec<Option<f64>> = (0..cfg.trials)
                .into_par_iter()
                .map(|t| ratio_trial(&sc, &spec, &d0, &d1, centre + x, t))
                .collect::<Result<_>>()?;
            let ok: Vec<f64> = ratios.into_iter().flatten().collect();
            let (mean, std) = mean_std(&ok);
            rows.push(RatioRow { method, mu_offset: x, bits, ratio_mean: mean, ratio_std: std });
        }
    }
    Ok(rows)
}

fn ratio_trial(
    sc: &Scenario,
    spec: &QuantizerSpec,
    d0: &ComplexSequence,
    d1: &ComplexSequence,
    mu: f64,
    t: usize,
) -> Result<Option<f64>> {
    let mut rng = trial_rng(sc.master_seed, t, 0);
    let (ch, beam) = sc.channel_for_trial(&mut rng)?;
    let q0 = quantize(&transmit_receive(d0, &ch, &beam, mu, &mut rng)?, spec)?;
    let q1 = quantize(&transmit_receive(d1, &ch, &beam, mu, &mut rng)?, spec)?;
    let b = select_antenna(&q0);
    let r = match sc.method {
        Method::Aux => aux_ratio(&aux_channels(&q0.row(b), &q1.row(b))?),
        _ => sumdiff_ratio(&sumdiff_channels(&q0.row(b), &q1.row(b))?),
    };
    Ok(r.ok())
}

fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64;
    (m, var.sqrt())
}

// ---------------------------------------------------------------- crlb

#[derive(Debug, Clone, PartialEq)]
pub struct CrlbRow {
    pub snr_db: f64,
    pub method: Method,
    pub mse: MseStat,
    /// Mean 1-bit bound over the realized channels, squared subcarriers.
    pub crlb: f64,
}

impl CsvRow for CrlbRow {
    const HEADER: &'static [&'static str] = &["snr_db", "method", "mse", "crlb"];
    fn fields(&self) -> Vec<String> {
        vec![self.snr_db.to_string(), self.method.to_string(), self.mse.mse.to_string(), self.crlb.to_string()]
    }
}

/// 1-bit MSE against the bound, per SNR and per two-slot method; bits are forced to 1.
pub fn run_crlb_compare(cfg: &SimConfig) -> Result<Vec<CrlbRow>> {
    let mut sc = Scenario::from_config(cfg)?;
    sc.bits = vec![Bits::Finite(1)];
    let mut rows = Vec::new();
    for method in cfg.methods().into_iter().filter(|m| *m != Method::Zc) {
        sc.method = method;
        for &snr_db in &cfg.snr_db {
            sc.snr_db = snr_db;
            let outs: Vec<_> = (0..cfg.trials * cfg.n_ue)
                .into_par_iter()
                .map(|i| sc.run_trial_with_bound(i / cfg.n_ue, i % cfg.n_ue, true))
                .collect::<Result<_>>()?;
            let records: Vec<TrialRecord> = outs.iter().map(|o| o.record.clone()).collect();
            let crlb = outs.iter().map(|o| o.cfo_bound.unwrap_or(f64::INFINITY)).sum::<f64>() / outs.len() as f64;
            rows.push(CrlbRow { snr_db, method, mse: MseStat::from_records(&records), crlb });
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------- multiuser

#[derive(Debug, Clone, PartialEq)]
pub struct MultiuserRow {
    pub range_halfwidth: f64,
    pub design_mode: String,
    /// `None` when the design could not be produced.
    pub mse: Option<MseStat>,
    pub error: Option<String>,
}

impl CsvRow for MultiuserRow {
    const HEADER: &'static [&'static str] = &["range_halfwidth", "design_mode", "mse"];
    fn fields(&self) -> Vec<String> {
        let mse = match (&self.mse, &self.error) {
            (Some(s), _) => s.mse.to_string(),
            (None, Some(e)) => format!("error:{e}"),
            (None, None) => "NA".to_string(),
        };
        vec![self.range_halfwidth.to_string(), self.design_mode.clone(), mse]
    }
}

impl MultiuserRow {
    fn done(r: f64, mode: String, stat: MseStat) -> Self {
        Self { range_halfwidth: r, design_mode: mode, mse: Some(stat), error: None }
    }
}

/// Fixed design intended for CFOs within `±rf` subcarriers.
pub fn fixed_range_design(rf: f64, n: usize) -> Result<(AuxParams, SumDiffParams)> {
    let k = (rf.ceil() as usize).max(1);
    Ok((AuxParams::new(0.0, k, n)?, SumDiffParams::new(eps_to_mu(-1.0, n), n)?))
}

/// UEs with CFOs uniform in `±r` for each range, against ZC, fixed-range and optimized designs.
pub fn run_multiuser(cfg: &SimConfig) -> Result<Vec<MultiuserRow>> {
    let mut sc = Scenario::from_config(cfg)?;
    let snr_db = cfg.snr_db[0];
    sc.snr_db = snr_db;
    let mut rows = Vec::new();
    let mu = &cfg.multiuser;
    let run = |sc: &Scenario| -> Result<MseStat> {
        Ok(MseStat::from_records(&collect_records(sc, cfg.trials, cfg.n_ue)?))
    };
    for &r in &mu.ranges {
        sc.cfo = CfoSpec::Interval([-r, r]);
        if mu.include_zc {
            sc.method = Method::Zc;
            rows.push(MultiuserRow::done(r, "zc".into(), run(&sc)?));
        }
        for &rf in &mu.fixed_ranges {
            let (aux, sd) = fixed_range_design(rf, cfg.n)?;
            sc.aux = aux;
            sc.sumdiff = sd;
            sc.method = Method::Aux;
            rows.push(MultiuserRow::done(r, format!("aux-fixed-{rf}"), run(&sc)?));
            if mu.include_sumdiff {
                sc.method = Method::Sumdiff;
                rows.push(MultiuserRow::done(r, format!("sumdiff-fixed-{rf}"), run(&sc)?));
            }
        }
        match auto_design(cfg, snr_db, sc.cfo) {
            Ok((a, s)) => {
                sc.aux = AuxParams::new(a.theta_opt, a.k_prime, cfg.n)?;
                sc.sumdiff = SumDiffParams::new(s.eta_opt, cfg.n)?;
                sc.method = Method::Aux;
                rows.push(MultiuserRow::done(r, "aux-auto".into(), run(&sc)?));
                if mu.include_sumdiff {
                    sc.method = Method::Sumdiff;
                    rows.push(MultiuserRow::done(r, "sumdiff-auto".into(), run(&sc)?));
                }
            }
            Err(e) => rows.push(MultiuserRow {
                range_halfwidth: r,
                design_mode: "auto".into(),
                mse: None,
                error: Some(e.kind().to_string()),
            }),
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------- lemma-var

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub method: Method,
    pub n: usize,
    pub kappa: f64,
    pub gamma_db: f64,
    pub design: String,
    pub mu_offset: f64,
    pub variance_eps2: f64,
    pub singular: bool,
}

impl CsvRow for LemmaRow {
    const HEADER: &'static [&'static str] =
        &["method", "n", "kappa", "gamma_db", "design", "mu_offset", "variance_eps2", "singular"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.method.to_string(),
            self.n.to_string(),
            self.kappa.to_string(),
            self.gamma_db.to_string(),
            self.design.clone(),
            self.mu_offset.to_string(),
            self.variance_eps2.to_string(),
            self.singular.to_string(),
        ]
    }
}

/// Predicted variance over the range of estimation for every bit depth and SNR.
pub fn run_lemma_var(cfg: &SimConfig) -> Result<Vec<LemmaRow>> {
    cfg.validate()?;
    let (aux, sd) = resolve_design(cfg, cfg.snr_db[0], cfg.cfo)?;
    let mut rows = Vec::new();
    for method in cfg.methods().into_iter().filter(|m| *m != Method::Zc) {
        let grid = ratio_grid(method, cfg.n, aux.delta, cfg.lemma.points)?;
        for &bits in &cfg.bits {
            let kappa = kappa_for_bits(bits)?;
            for &gamma_db in &cfg.snr_db {
                let gamma = 10f64.powf(gamma_db / 10.0);
                for &x in &grid {
                    let (p, design) = match method {
                        Method::Aux => (
                            lemma1_variance(cfg.n, kappa, aux.theta, aux.delta, aux.theta + x, gamma, 0.0)?,
                            format!("theta={};delta={}", aux.theta, aux.delta),
                        ),
                        _ => (
                            lemma2_variance(cfg.n, kappa, sd.eta, sd.eta + x, gamma, 0.0)?,
                            format!("eta={}", sd.eta),
                        ),
                    };
                    rows.push(LemmaRow {
                        method,
                        n: cfg.n,
                        kappa,
                        gamma_db,
                        design,
                        mu_offset: x,
                        variance_eps2: p.variance_eps2(),
                        singular: p.singular,
                    });
                }
            }
        }
    }
    Ok(rows)
}

// ---------------------------------------------------------------- optimize

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeRow {
    pub method: Method,
    pub theta: Option<f64>,
    pub delta: Option<f64>,
    pub k_prime: Option<usize>,
    pub eta: Option<f64>,
    pub objective: f64,
    pub scanned: usize,
}

impl CsvRow for OptimizeRow {
    const HEADER: &'static [&'static str] = &["method", "theta", "delta", "k_prime", "eta", "objective", "scanned"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.method.to_string(),
            fmt_opt(self.theta),
            fmt_opt(self.delta),
            self.k_prime.map_or_else(|| "NA".into(), |k| k.to_string()),
            fmt_opt(self.eta),
            self.objective.to_string(),
            self.scanned.to_string(),
        ]
    }
}

/// Optimized designs for the given UE statistics, or for synthetic ones drawn from the config.
pub fn run_optimize(cfg: &SimConfig, stats: Option<&[UeStat]>) -> Result<Vec<OptimizeRow>> {
    cfg.validate()?;
    let synth;
    let stats = match stats {
        Some(s) => s,
        None => {
            synth = synth_ue_stats(cfg, cfg.snr_db[0], cfg.cfo);
            &synth
        }
    };
    let (a, s) = optimize_from_stats(cfg, stats)?;
    Ok(vec![
        OptimizeRow {
            method: Method::Aux,
            theta: Some(a.theta_opt),
            delta: Some(a.delta_opt),
            k_prime: Some(a.k_prime),
            eta: None,
            objective: a.objective,
            scanned: a.scanned,
        },
        OptimizeRow {
            method: Method::Sumdiff,
            theta: None,
            delta: None,
            k_prime: None,
            eta: Some(s.eta_opt),
            objective: s.objective,
            scanned: s.scanned,
        },
    ])
}

// ---------------------------------------------------------------- gen-seq

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqKind {
    Zc,
    ZcTime,
    Aux0,
    Aux1,
    Sum,
    Diff,
}

impl std::str::FromStr for SeqKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "zc" => SeqKind::Zc,
            "zc-time" => SeqKind::ZcTime,
            "aux0" => SeqKind::Aux0,
            "aux1" => SeqKind::Aux1,
            "sum" => SeqKind::Sum,
            "diff" => SeqKind::Diff,
            _ => return Err(Error::param("kind", format!("unknown sequence kind `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub index: usize,
    pub value: Complex64,
}

impl CsvRow for SampleRow {
    const HEADER: &'static [&'static str] = &["index", "re", "im"];
    fn fields(&self) -> Vec<String> {
        vec![self.index.to_string(), self.value.re.to_string(), self.value.im.to_string()]
    }
}

pub fn gen_seq(cfg: &SimConfig, kind: SeqKind) -> Result<Vec<SampleRow>> {
    cfg.validate()?;
    let (aux, sd) = resolve_design(cfg, cfg.snr_db[0], cfg.cfo)?;
    let seq = match kind {
        SeqKind::Zc => zc_generate(cfg.zc.n_zc, cfg.zc.root)?,
        SeqKind::ZcTime => zc_time_symbol(cfg.zc.n_zc, cfg.zc.root, cfg.n)?,
        SeqKind::Aux0 => aux_pair(&aux)?.0,
        SeqKind::Aux1 => aux_pair(&aux)?.1,
        SeqKind::Sum => sumdiff_pair(&sd)?.0,
        SeqKind::Diff => sumdiff_pair(&sd)?.1,
    };
    Ok(seq.samples.into_iter().enumerate().map(|(index, value)| SampleRow { index, value }).collect())
}
