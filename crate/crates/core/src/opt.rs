//! Design-parameter selection for a UE population via a virtual UE.

use crate::analysis::{lemma1_variance, lemma2_variance};
use crate::error::{Error, Result};
use crate::est::eps_to_mu;
use crate::quant::{kappa_for_bits, Bits};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualUeParams {
    pub kappa_ax: f64,
    pub mu_ax: f64,
    pub alpha_ax: f64,
    pub gamma_ax: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCodebook {
    values: Vec<f64>,
}

impl ThetaCodebook {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("codebook", "empty"));
        }
        if values.iter().any(|v| !(v.abs() <= 1.0)) {
            return Err(Error::param("codebook", "values must lie in [-1, 1]"));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    /// `count` evenly spaced values over `[−1, 1]`.
    pub fn uniform(count: usize) -> Result<Self> {
        match count {
            0 => Err(Error::param("codebook", "empty")),
            1 => Self::new(vec![0.0]),
            _ => Self::new((0..count).map(|i| -1.0 + 2.0 * i as f64 / (count - 1) as f64).collect()),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

impl Default for ThetaCodebook {
    fn default() -> Self {
        Self::uniform(101).unwrap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult {
    pub theta_opt: f64,
    pub delta_opt: f64,
    pub k_prime: usize,
    pub objective: f64,
    pub scanned: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumDiffOptResult {
    pub eta_opt: f64,
    pub objective: f64,
    pub scanned: usize,
}

pub fn virtual_variance(vue: &VirtualUeParams, theta: f64, delta: f64, n: usize) -> Result<f64> {
    Ok(lemma1_variance(n, vue.kappa_ax, theta, delta, vue.mu_ax, vue.gamma_ax, vue.alpha_ax)?.variance)
}

/// Lower objective, then smaller `k′`, then smaller `|θ|`, then smaller `θ`.
fn aux_key(a: &(f64, usize, f64), b: &(f64, usize, f64)) -> Ordering {
    a.0.total_cmp(&b.0)
        .then(a.1.cmp(&b.1))
        .then(a.2.abs().total_cmp(&b.2.abs()))
        .then(a.2.total_cmp(&b.2))
}

/// Exhaustive scan of `Θ × {2k′π/N : k′ = 1…N/4}`.
pub fn optimize_aux(codebook: &ThetaCodebook, n: usize, vue: &VirtualUeParams) -> Result<OptResult> {
    if n < 4 {
        return Err(Error::param("n", format!("need N >= 4 for a k' grid, got {n}")));
    }
    let mut best: Option<(f64, usize, f64)> = None;
    let mut scanned = 0;
    for k in 1..=n / 4 {
        let delta = 2.0 * PI * k as f64 / n as f64;
        for &theta in codebook.values() {
            scanned += 1;
            let cand = (virtual_variance(vue, theta, delta, n)?, k, theta);
            if best.is_none_or(|b| aux_key(&cand, &b) == Ordering::Less) {
                best = Some(cand);
            }
        }
    }
    match best {
        Some((obj, k, theta)) if obj.is_finite() => Ok(OptResult {
            theta_opt: theta,
            delta_opt: 2.0 * PI * k as f64 / n as f64,
            k_prime: k,
            objective: obj,
            scanned,
        }),
        _ => Err(Error::OptimizationDegenerate),
    }
}

/// Scan of `η ∈ Θ` against the sum/difference variance, with `β = α_ax`.
pub fn optimize_sumdiff(codebook: &ThetaCodebook, n: usize, vue: &VirtualUeParams) -> Result<SumDiffOptResult> {
    let mut best: Option<(f64, f64)> = None;
    for &eta in codebook.values() {
        let v = lemma2_variance(n, vue.kappa_ax, eta, vue.mu_ax, vue.gamma_ax, vue.alpha_ax)?.variance;
        let better = match best {
            None => true,
            Some((bv, be)) => v
                .total_cmp(&bv)
                .then(eta.abs().total_cmp(&be.abs()))
                .then(eta.total_cmp(&be))
                .is_lt(),
        };
        if better {
            best = Some((v, eta));
        }
    }
    match best {
        Some((v, eta)) if v.is_finite() => {
            Ok(SumDiffOptResult { eta_opt: eta, objective: v, scanned: codebook.values().len() })
        }
        _ => Err(Error::OptimizationDegenerate),
    }
}

/// Long-term statistics of one UE. CFOs are in subcarrier units.
#[derive(Debug, Clone, PartialEq)]
pub struct UeStat {
    pub snr_linear: f64,
    pub bits: Bits,
    pub cfo_history: Vec<f64>,
}

/// Virtual UE: mean SNR, κ of `representative_bits`, mean pooled CFO, `α = 0`.
pub fn derive_vue(stats: &[UeStat], n: usize, representative_bits: Bits) -> Result<VirtualUeParams> {
    if stats.is_empty() {
        return Err(Error::param("ue_stats", "no UEs"));
    }
    let gamma = stats.iter().map(|s| s.snr_linear).sum::<f64>() / stats.len() as f64;
    let pooled: Vec<f64> = stats.iter().flat_map(|s| s.cfo_history.iter().copied()).collect();
    let mean_eps = if pooled.is_empty() { 0.0 } else { pooled.iter().sum::<f64>() / pooled.len() as f64 };
    if !(gamma > 0.0) {
        return Err(Error::param("ue_stats", "mean SNR must be positive"));
    }
    Ok(VirtualUeParams {
        kappa_ax: kappa_for_bits(representative_bits)?,
        mu_ax: eps_to_mu(mean_eps, n),
        alpha_ax: 0.0,
        gamma_ax: gamma,
    })
}

/// Reads `snr_db,bits,cfo_normalized` rows. An optional leading `ue` column
/// groups rows per UE; otherwise each row is its own UE.
pub fn load_ue_stats(path: impl AsRef<Path>) -> Result<Vec<UeStat>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("UE stats CSV is missing column `{name}`")))
    };
    let (c_snr, c_bits, c_cfo) = (col("snr_db")?, col("bits")?, col("cfo_normalized")?);
    let c_ue = headers.iter().position(|h| h == "ue");
    let mut grouped: BTreeMap<String, (Vec<f64>, Bits, Vec<f64>)> = BTreeMap::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i].trim().parse().map_err(|e| Error::Config(format!("row {}: {e}", row + 1)))
        };
        let snr = 10f64.powf(num(c_snr)? / 10.0);
        let bits: Bits = rec[c_bits].parse()?;
        let cfo = num(c_cfo)?;
        let key = match c_ue {
            Some(i) => rec[i].trim().to_string(),
            None => format!("{row:012}"),
        };
        let e = grouped.entry(key).or_insert((Vec::new(), bits, Vec::new()));
        e.0.push(snr);
        e.2.push(cfo);
    }
    Ok(grouped
        .into_values()
        .map(|(snrs, bits, cfo)| UeStat {
            snr_linear: snrs.iter().sum::<f64>() / snrs.len() as f64,
            bits,
            cfo_history: cfo,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn vue(mu_eps: f64, n: usize) -> VirtualUeParams {
        VirtualUeParams { kappa_ax: 0.1175, mu_ax: eps_to_mu(mu_eps, n), alpha_ax: 0.0, gamma_ax: 100.0 }
    }

    /// Full-grid enumeration written independently of `optimize_aux`:
    /// collect everything, sort by the tie-break rules, take the head.
    fn brute(codebook: &[f64], n: usize, v: &VirtualUeParams) -> (f64, f64, f64) {
        let mut all = Vec::new();
        for &t in codebook {
            for k in 1..=n / 4 {
                let d = 2.0 * PI * k as f64 / n as f64;
                let obj = lemma1_variance(n, v.kappa_ax, t, d, v.mu_ax, v.gamma_ax, v.alpha_ax).unwrap().variance;
                all.push((obj, d, t));
            }
        }
        all.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then(a.1.partial_cmp(&b.1).unwrap())
                .then(a.2.abs().partial_cmp(&b.2.abs()).unwrap())
                .then(a.2.partial_cmp(&b.2).unwrap())
        });
        all[0]
    }

    #[test]
    fn virtual_variance_delegates() {
        let v = vue(0.2, 64);
        let d = 2.0 * PI * 2.0 / 64.0;
        let a = virtual_variance(&v, 0.05, d, 64).unwrap();
        let b = lemma1_variance(64, v.kappa_ax, 0.05, d, v.mu_ax, v.gamma_ax, v.alpha_ax).unwrap().variance;
        assert_eq!(a.to_bits(), b.to_bits());
        let clean = VirtualUeParams { kappa_ax: 0.0, gamma_ax: 1e15, ..v };
        assert!(virtual_variance(&clean, 0.05, d, 64).unwrap() < 1e-20);
        assert!(virtual_variance(&v, v.mu_ax, d, 64).unwrap().is_infinite());
    }

    #[test]
    fn singleton_codebook() {
        let cb = ThetaCodebook::new(vec![0.0]).unwrap();
        let v = vue(0.3, 16);
        let r = optimize_aux(&cb, 16, &v).unwrap();
        assert_eq!(r.theta_opt, 0.0);
        assert_eq!(r.scanned, 4);
        let want = (1..=4)
            .map(|k| virtual_variance(&v, 0.0, 2.0 * PI * k as f64 / 16.0, 16).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(r.objective, want);
    }

    #[test]
    fn optimizer_matches_brute_force() {
        let cb = ThetaCodebook::default();
        for (i, &mu_eps) in [-0.7, -0.1, 0.03, 0.4, 1.9].iter().enumerate() {
            let n = [16, 32, 64, 64, 128][i];
            let v = vue(mu_eps, n);
            let r = optimize_aux(&cb, n, &v).unwrap();
            let (obj, d, t) = brute(cb.values(), n, &v);
            assert_eq!(r.objective.to_bits(), obj.to_bits());
            assert_eq!(r.delta_opt.to_bits(), d.to_bits());
            assert_eq!(r.theta_opt.to_bits(), t.to_bits());
        }
    }

    #[test]
    fn all_singular_grid_is_an_error() {
        let cb = ThetaCodebook::new(vec![0.0]).unwrap();
        let v = VirtualUeParams { kappa_ax: 0.1, mu_ax: 0.0, alpha_ax: 0.0, gamma_ax: 10.0 };
        assert!(matches!(optimize_aux(&cb, 16, &v), Err(Error::OptimizationDegenerate)));
        assert!(matches!(optimize_sumdiff(&cb, 16, &v), Err(Error::OptimizationDegenerate)));
    }

    #[test]
    fn codebook_validation() {
        assert!(ThetaCodebook::new(vec![]).is_err());
        assert!(ThetaCodebook::new(vec![1.5]).is_err());
        let cb = ThetaCodebook::default();
        assert_eq!(cb.values().len(), 101);
        assert_eq!(cb.values()[0], -1.0);
        assert_eq!(cb.values()[100], 1.0);
    }

    #[test]
    fn sumdiff_scan_is_argmin() {
        let cb = ThetaCodebook::uniform(41).unwrap();
        let v = vue(0.4, 64);
        let r = optimize_sumdiff(&cb, 64, &v).unwrap();
        for &eta in cb.values() {
            let o = lemma2_variance(64, v.kappa_ax, eta, v.mu_ax, v.gamma_ax, 0.0).unwrap().variance;
            assert!(r.objective <= o);
        }
    }

    #[test]
    fn vue_examples() {
        let one = [UeStat { snr_linear: 42.0, bits: Bits::Finite(2), cfo_history: vec![0.1, -0.1, 0.3, -0.3] }];
        let v = derive_vue(&one, 64, Bits::Finite(2)).unwrap();
        assert_eq!(v.gamma_ax, 42.0);
        assert_eq!(v.mu_ax, 0.0);
        assert_eq!(v.alpha_ax, 0.0);
        assert!((v.kappa_ax - 0.1175).abs() < 5e-4);
        assert!(derive_vue(&[], 64, Bits::Finite(2)).is_err());
    }

    #[test]
    fn ue_stats_csv() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("ues.csv");
        let mut f = std::fs::File::create(&p).unwrap();
        writeln!(f, "ue,snr_db,bits,cfo_normalized\na,10,2,0.02\na,10,2,-0.01\nb,20,2,0.05").unwrap();
        let stats = load_ue_stats(&p).unwrap();
        assert_eq!(stats.len(), 2);
        assert_eq!(stats[0].cfo_history, vec![0.02, -0.01]);
        assert!((stats[1].snr_linear - 100.0).abs() < 1e-9);

        let q = dir.path().join("flat.csv");
        std::fs::write(&q, "snr_db,bits,cfo_normalized\n0,1,0.1\n10,inf,0.3\n").unwrap();
        let stats = load_ue_stats(&q).unwrap();
        assert_eq!(stats.len(), 2);
        assert_eq!(stats[1].bits, Bits::Infinite);
    }

    proptest! {
        #[test]
        fn argmin_never_exceeds_any_grid_point(mu_eps in -3.0f64..3.0, g_db in 0.0f64..30.0, pick_t in 0usize..101, k in 1usize..17) {
            let n = 64;
            let cb = ThetaCodebook::default();
            let v = VirtualUeParams { kappa_ax: 0.1175, mu_ax: eps_to_mu(mu_eps, n), alpha_ax: 0.0, gamma_ax: 10f64.powf(g_db / 10.0) };
            let r = optimize_aux(&cb, n, &v).unwrap();
            let other = virtual_variance(&v, cb.values()[pick_t], 2.0 * PI * k as f64 / n as f64, n).unwrap();
            prop_assert!(r.objective <= other);
        }

        #[test]
        fn argmin_ignores_alpha(mu_eps in -3.0f64..3.0, g_db in 0.0f64..30.0) {
            let n = 32;
            let cb = ThetaCodebook::uniform(51).unwrap();
            let base = VirtualUeParams { kappa_ax: 0.1175, mu_ax: eps_to_mu(mu_eps, n), alpha_ax: 0.0, gamma_ax: 10f64.powf(g_db / 10.0) };
            let r0 = optimize_aux(&cb, n, &base).unwrap();
            for a in [0.5, 0.9] {
                let r = optimize_aux(&cb, n, &VirtualUeParams { alpha_ax: a, ..base }).unwrap();
                prop_assert_eq!((r.theta_opt, r.delta_opt), (r0.theta_opt, r0.delta_opt));
            }
        }

        #[test]
        fn snr_scaling_keeps_mu_and_kappa(scale in 0.01f64..100.0, snrs in proptest::collection::vec(0.1f64..1000.0, 1..10)) {
            let stats: Vec<UeStat> = snrs.iter().enumerate().map(|(i, &s)| UeStat {
                snr_linear: s, bits: Bits::Finite(2), cfo_history: vec![0.01 * i as f64, -0.02],
            }).collect();
            let scaled: Vec<UeStat> = stats.iter().map(|s| UeStat { snr_linear: s.snr_linear * scale, ..s.clone() }).collect();
            let a = derive_vue(&stats, 64, Bits::Finite(2)).unwrap();
            let b = derive_vue(&scaled, 64, Bits::Finite(2)).unwrap();
            prop_assert_eq!(a.mu_ax, b.mu_ax);
            prop_assert_eq!(a.kappa_ax, b.kappa_ax);
        }
    }
}
