//! 1-bit Fisher information / CRLB and the analytical Bussgang variances.

use crate::error::{Error, Result};
use crate::gauss;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Factors smaller than this are treated as exact zeros of the closed forms.
const NULL_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct FisherResult {
    /// `Ĩ` over `[Re e; Im e]`, `2N × 2N`.
    pub real_fim: DMatrix<f64>,
    pub complex_fim: DMatrix<Complex64>,
    /// Per-sample bound on `e^{j2πεn/N}`; all infinite when the FIM is singular.
    pub crlb_diag: Vec<f64>,
    /// Scalar bound on `ε̂` in squared subcarrier units, through `∂ẽ/∂ε`.
    pub cfo_bound: f64,
}

/// `φ²(g) / (Φ(g)(1−Φ(g)))`, in log space once `|g| > 6`.
pub fn probit_weight(g: f64) -> f64 {
    if g.abs() > 6.0 {
        (2.0 * gauss::ln_pdf(g) - gauss::ln_cdf(g) - gauss::ln_cdf(-g)).exp()
    } else {
        let p = gauss::cdf(g);
        gauss::pdf(g).powi(2) / (p * (1.0 - p))
    }
}

/// `[[Re A, −Im A], [Im A, Re A]]` for `A = diag(a)`.
fn real_block(a: &[Complex64]) -> DMatrix<f64> {
    let n = a.len();
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for (i, v) in a.iter().enumerate() {
        m[(i, i)] = v.re;
        m[(i, n + i)] = -v.im;
        m[(n + i, i)] = v.im;
        m[(n + i, n + i)] = v.re;
    }
    m
}

/// Fisher information of the two 1-bit slots about `e[n] = e^{j2πεn/N}`.
pub fn fisher_1bit(a0: &[Complex64], a1: &[Complex64], epsilon: f64, sigma2: f64) -> Result<FisherResult> {
    let n = a0.len();
    if a1.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: a1.len() });
    }
    if !(sigma2 > 0.0) {
        return Err(Error::param("sigma2", format!("noise variance must be positive, got {sigma2}")));
    }
    let e: Vec<Complex64> =
        (0..n).map(|i| Complex64::from_polar(1.0, 2.0 * PI * epsilon * i as f64 / n as f64)).collect();
    let e_real = DVector::from_iterator(2 * n, e.iter().map(|v| v.re).chain(e.iter().map(|v| v.im)));
    let s2 = sigma2 / 2.0;
    let s = s2.sqrt();

    let mut real_fim = DMatrix::zeros(2 * n, 2 * n);
    for a in [a0, a1] {
        let at = real_block(a);
        let g = &at * &e_real / s;
        let w = DVector::from_iterator(2 * n, g.iter().map(|&gi| probit_weight(gi) / s2));
        let weighted = DMatrix::from_fn(2 * n, 2 * n, |r, c| w[r] * at[(r, c)]);
        real_fim += at.transpose() * weighted;
    }
    // exact symmetry, so downstream eigen-solvers see a symmetric matrix
    real_fim = (&real_fim + real_fim.transpose()) * 0.5;

    let complex_fim = DMatrix::from_fn(n, n, |r, c| {
        let rr = real_fim[(r, c)];
        let ii = real_fim[(n + r, n + c)];
        let ri = real_fim[(r, n + c)];
        let ir = real_fim[(n + r, c)];
        Complex64::new(0.25 * (rr + ii), 0.25 * (ri - ir))
    });

    let crlb_diag = match complex_fim.clone().try_inverse() {
        Some(inv) => {
            let d: Vec<f64> = (0..n).map(|i| inv[(i, i)].re).collect();
            if d.iter().all(|v| v.is_finite() && *v >= 0.0) {
                d
            } else {
                vec![f64::INFINITY; n]
            }
        }
        None => vec![f64::INFINITY; n],
    };

    let de = DVector::from_iterator(
        2 * n,
        e.iter()
            .enumerate()
            .map(|(i, v)| -(i as f64) * v.im)
            .chain(e.iter().enumerate().map(|(i, v)| i as f64 * v.re)),
    );
    let j_mu = (de.transpose() * &real_fim * &de)[(0, 0)];
    let cfo_bound = if j_mu > 0.0 { (n as f64 / (2.0 * PI)).powi(2) / j_mu } else { f64::INFINITY };

    Ok(FisherResult { real_fim, complex_fim, crlb_diag, cfo_bound })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Design {
    Aux { theta: f64, delta: f64 },
    SumDiff { eta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariancePrediction {
    /// Predicted `var(μ̂)`; `+∞` at formula singularities.
    pub variance: f64,
    pub singular: bool,
    pub n: usize,
    pub kappa: f64,
    pub gamma: f64,
    pub design: Design,
    pub mu: f64,
}

impl VariancePrediction {
    /// Same prediction in squared subcarrier units.
    pub fn variance_eps2(&self) -> f64 {
        self.variance * (self.n as f64 / (2.0 * PI)).powi(2)
    }
}

fn check_kg(kappa: f64, gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::param("kappa", format!("must lie in [0, 1), got {kappa}")));
    }
    if !(gamma > 0.0) {
        return Err(Error::param("gamma", format!("must be positive, got {gamma}")));
    }
    Ok(())
}

/// Auxiliary-design variance of `μ̂` under the Bussgang model.
pub fn lemma1_variance(
    n: usize,
    kappa: f64,
    theta: f64,
    delta: f64,
    mu: f64,
    gamma: f64,
    alpha: f64,
) -> Result<VariancePrediction> {
    check_kg(kappa, gamma)?;
    let nf = n as f64;
    let x = mu - theta;
    let edge = (nf * (x + delta) / 2.0).sin();
    let diff = ((x - delta) / 2.0).sin().powi(2) - ((x + delta) / 2.0).sin().powi(2);
    let bracket = edge * edge * diff / (nf * (1.0 - kappa) * (kappa + 1.0 / gamma));
    let singular = edge.abs() < NULL_TOL || diff.abs() < NULL_TOL * NULL_TOL || delta.sin().abs() < NULL_TOL;
    let variance = if singular {
        f64::INFINITY
    } else {
        bracket.powi(-2) * (1.0 - delta.cos()).powi(2) / delta.sin().powi(2) * (1.0 + alpha * alpha)
    };
    Ok(VariancePrediction {
        variance,
        singular,
        n,
        kappa,
        gamma,
        design: Design::Aux { theta, delta },
        mu,
    })
}

/// Sum/difference-design variance of `μ̂` under the Bussgang model.
pub fn lemma2_variance(n: usize, kappa: f64, eta: f64, mu: f64, gamma: f64, beta: f64) -> Result<VariancePrediction> {
    check_kg(kappa, gamma)?;
    let nf = n as f64;
    let x = mu - eta;
    let comb = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, nf * x / 2.0)).norm_sqr();
    let s_quarter = (nf * x / 4.0).sin();
    let s_eta = (nf * eta / 4.0).sin();
    let s_half = (x / 2.0).sin();
    let singular =
        comb < NULL_TOL * NULL_TOL || s_quarter.abs() < NULL_TOL || s_eta.abs() < NULL_TOL || s_half.abs() < NULL_TOL;
    let variance = if singular {
        f64::INFINITY
    } else {
        let t = nf * (1.0 - kappa) * comb * s_quarter.powi(2) / s_eta.powi(4)
            / (16.0 * (kappa + 1.0 / gamma) * s_half.powi(2));
        (1.0 + beta * beta) / t
    };
    Ok(VariancePrediction { variance, singular, n, kappa, gamma, design: Design::SumDiff { eta }, mu })
}

/// Slope of the auxiliary ratio at `μ = θ`: `sin δ / (cos δ − 1)`.
pub fn aux_slope(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= PI) {
        return Err(Error::param("delta", format!("must lie in (0, pi], got {delta}")));
    }
    // −cot(δ/2), which avoids the cancellation in cos δ − 1 for small δ
    let h = delta / 2.0;
    Ok(-h.cos() / h.sin())
}

/// Signal and quantization-plus-noise powers of the auxiliary channel with `σ² = 1`, `E = γ`.
pub fn aux_power_terms(n: usize, theta: f64, delta: f64, mu: f64, kappa: f64, gamma: f64) -> Result<(f64, f64)> {
    check_kg(kappa, gamma)?;
    let nf = n as f64;
    let x = mu - theta;
    let sm = ((x - delta) / 2.0).sin().powi(2);
    let sp = ((x + delta) / 2.0).sin().powi(2);
    let s0 = (gamma * (nf * (x + delta) / 2.0).sin().powi(2) * (sm - sp)).powi(2);
    let n1 = nf * nf * ((1.0 - kappa) * (kappa * gamma + 1.0)).powi(2);
    Ok((s0, n1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::est::alpha_closed_form;
    use proptest::prelude::*;
    use statrs::distribution::{ContinuousCDF, Normal};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Fisher matrix of the exact 1-bit likelihood by central differences,
    /// enumerating every sign pattern of the `4N` outputs.
    fn fd_fisher(a0: &[Complex64], a1: &[Complex64], eps: f64, sigma2: f64) -> DMatrix<f64> {
        let n = a0.len();
        let nd = Normal::new(0.0, (sigma2 / 2.0).sqrt()).unwrap();
        let e0: Vec<f64> = (0..n)
            .map(|i| (2.0 * PI * eps * i as f64 / n as f64).cos())
            .chain((0..n).map(|i| (2.0 * PI * eps * i as f64 / n as f64).sin()))
            .collect();
        // P(output p = +1) as a function of the real parameter vector
        let probs = |p: &[f64]| -> Vec<f64> {
            let mut out = Vec::with_capacity(4 * n);
            for a in [a0, a1] {
                let m: Vec<Complex64> = (0..n).map(|i| a[i] * c(p[i], p[n + i])).collect();
                out.extend(m.iter().map(|v| nd.cdf(v.re)));
                out.extend(m.iter().map(|v| nd.cdf(v.im)));
            }
            out
        };
        let base = probs(&e0);
        let h = 1e-5;
        let dims = 2 * n;
        let mut dp = vec![vec![0.0; dims]; 4 * n];
        for k in 0..dims {
            let mut plus = e0.clone();
            let mut minus = e0.clone();
            plus[k] += h;
            minus[k] -= h;
            let (pp, pm) = (probs(&plus), probs(&minus));
            for o in 0..4 * n {
                dp[o][k] = (pp[o] - pm[o]) / (2.0 * h);
            }
        }
        let outputs = 4 * n;
        let mut fim = DMatrix::zeros(dims, dims);
        for pattern in 0u64..(1 << outputs) {
            let mut prob = 1.0;
            let mut score = vec![0.0; dims];
            for o in 0..outputs {
                let up = pattern >> o & 1 == 1;
                let p = if up { base[o] } else { 1.0 - base[o] };
                prob *= p;
                for k in 0..dims {
                    let d = if up { dp[o][k] } else { -dp[o][k] };
                    score[k] += d / p;
                }
            }
            for r in 0..dims {
                for cc in 0..dims {
                    fim[(r, cc)] += prob * score[r] * score[cc];
                }
            }
        }
        fim
    }

    fn sample_signals(n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let a0 = (0..n).map(|i| Complex64::from_polar(0.9 + 0.05 * i as f64, 0.4 + 1.1 * i as f64)).collect();
        let a1 = (0..n).map(|i| Complex64::from_polar(1.1 - 0.03 * i as f64, -0.7 + 0.6 * i as f64)).collect();
        (a0, a1)
    }

    #[test]
    fn fim_matches_finite_difference_likelihood() {
        let (a0, a1) = sample_signals(4);
        let (eps, sigma2) = (0.3, 0.5);
        let got = fisher_1bit(&a0, &a1, eps, sigma2).unwrap();
        let want = fd_fisher(&a0, &a1, eps, sigma2);
        let rel = (&got.real_fim - &want).norm() / want.norm();
        assert!(rel < 1e-3, "relative error {rel}");
    }

    #[test]
    fn fim_is_symmetric_psd() {
        let (a0, a1) = sample_signals(16);
        let r = fisher_1bit(&a0, &a1, 0.6, 0.1).unwrap();
        assert!((&r.real_fim - r.real_fim.transpose()).norm() < 1e-10);
        let eig = r.real_fim.clone().symmetric_eigenvalues();
        assert!(eig.iter().all(|&v| v >= -1e-10));
        assert!(r.crlb_diag.iter().all(|&v| v >= 0.0));
        assert!(r.cfo_bound > 0.0 && r.cfo_bound.is_finite());
    }

    #[test]
    fn fim_rejects_bad_input() {
        let (a0, a1) = sample_signals(4);
        assert!(fisher_1bit(&a0, &a1, 0.0, 0.0).is_err());
        assert!(fisher_1bit(&a0, &a1[..3], 0.0, 1.0).is_err());
    }

    #[test]
    fn singular_fim_reports_infinite() {
        let z = vec![c(0.0, 0.0); 4];
        let r = fisher_1bit(&z, &z, 0.1, 1.0).unwrap();
        assert!(r.crlb_diag.iter().all(|v| v.is_infinite()));
        assert!(r.cfo_bound.is_infinite());
    }

    #[test]
    fn probit_weight_is_continuous_across_switch() {
        let inside = probit_weight(6.0 - 1e-9);
        let outside = probit_weight(6.0 + 1e-9);
        assert!((inside - outside).abs() / inside < 1e-6);
        assert!(probit_weight(30.0) > 0.0 && probit_weight(30.0).is_finite());
        assert!(probit_weight(-30.0) > 0.0);
    }

    #[test]
    fn lemma1_examples() {
        let n = 16;
        let delta = 2.0 * PI / 16.0;
        let mu = PI / 16.0;
        let alpha = alpha_closed_form(mu, delta);
        let v = lemma1_variance(n, 0.1175, 0.0, delta, mu, 10.0, alpha).unwrap();
        assert!(!v.singular);
        // independent 30-digit evaluation
        assert!((v.variance - 109.299691044570222).abs() < 1e-9);

        let small = lemma1_variance(n, 0.0, 0.0, delta, mu, 1e12, alpha).unwrap();
        assert!(small.variance < 1e-18);

        let null = lemma1_variance(n, 0.1175, 0.3, delta, 0.3, 10.0, 0.0).unwrap();
        assert!(null.singular && null.variance.is_infinite());
        assert!(lemma1_variance(n, 1.0, 0.0, delta, mu, 10.0, 0.0).is_err());
        assert!(lemma1_variance(n, 0.1, 0.0, delta, mu, 0.0, 0.0).is_err());
    }

    #[test]
    fn lemma2_examples() {
        let n = 64;
        let eta = -2.0 * PI * 1.3 / n as f64;
        let mu = eta + PI / n as f64;
        let v = lemma2_variance(n, 0.0, eta, mu, 1e12, 1.0).unwrap();
        assert!(v.variance < 1e-9 && !v.singular);
        let null = lemma2_variance(n, 0.1175, eta, eta + 2.0 * PI / n as f64, 10.0, 0.0).unwrap();
        assert!(null.singular && null.variance.is_infinite());
        let zero_eta = lemma2_variance(n, 0.1175, 0.0, 0.05, 10.0, 0.0).unwrap();
        assert!(zero_eta.singular);
    }

    #[test]
    fn slope_examples() {
        assert!((aux_slope(PI / 2.0).unwrap() + 1.0).abs() < 1e-15);
        assert!(aux_slope(PI).unwrap().abs() < 1e-15);
        assert!(aux_slope(0.0).is_err());
        for &d in &[1e-6f64, 1e-3, 0.1, 1.0, 2.5] {
            let cot = -1.0 / (d / 2.0).tan();
            assert!((aux_slope(d).unwrap() - cot).abs() < 1e-12 * cot.abs().max(1.0));
        }
        for &d in &[0.1f64, 1.0, 2.5, 3.0] {
            let literal = d.sin() / (d.cos() - 1.0);
            assert!((aux_slope(d).unwrap() - literal).abs() < 1e-12 * literal.abs().max(1.0));
        }
        assert!(aux_slope(1e-8).unwrap() < -1e7);
    }

    #[test]
    fn power_term_examples() {
        let (s0, n1) = aux_power_terms(32, 0.0, 2.0 * PI / 32.0, 0.07, 0.0, 5.0).unwrap();
        assert!(s0 >= 0.0 && n1 > 0.0);
        assert_eq!(n1, 32.0 * 32.0);
    }

    proptest! {
        #[test]
        fn recomposition_identity(
            log_n in 4u32..9, k in 1usize..4, theta in -0.5f64..0.5,
            frac in 0.05f64..0.95, kappa in 0.0f64..0.9, g_db in -5.0f64..30.0, alpha in -1.0f64..1.0,
        ) {
            let n = 1usize << log_n;
            let delta = 2.0 * PI * k as f64 / n as f64;
            let mu = theta - delta + 2.0 * delta * frac;
            let gamma = 10f64.powf(g_db / 10.0);
            let v = lemma1_variance(n, kappa, theta, delta, mu, gamma, alpha).unwrap();
            prop_assume!(!v.singular);
            let (s0, n1) = aux_power_terms(n, theta, delta, mu, kappa, gamma).unwrap();
            let slope = aux_slope(delta).unwrap();
            let rebuilt = (1.0 + alpha * alpha) / (slope * slope * s0 / n1);
            prop_assert!((rebuilt - v.variance).abs() / v.variance < 1e-9);
        }

        #[test]
        fn lemmas_decrease_in_snr(frac in 0.05f64..0.95, kappa in 0.0f64..0.6, g in 0.1f64..1000.0) {
            let n = 64;
            let delta = 2.0 * PI / n as f64;
            let mu = -delta + 2.0 * delta * frac;
            let a = lemma1_variance(n, kappa, 0.0, delta, mu, g, 0.0).unwrap();
            let b = lemma1_variance(n, kappa, 0.0, delta, mu, g * 1.5, 0.0).unwrap();
            prop_assume!(!a.singular);
            prop_assert!(b.variance < a.variance);

            let eta = -2.0 * PI * 1.1 / n as f64;
            let mu2 = eta + 4.0 * PI / n as f64 * frac;
            let a = lemma2_variance(n, kappa, eta, mu2, g, 0.3).unwrap();
            let b = lemma2_variance(n, kappa, eta, mu2, g * 1.5, 0.3).unwrap();
            prop_assume!(!a.singular);
            prop_assert!(b.variance < a.variance);
        }

        #[test]
        fn lemmas_increase_in_kappa(frac in 0.05f64..0.95, k_lo in 0.0f64..0.45, g in 2.5f64..1000.0) {
            let n = 64;
            // lemma 1 grows with (1−κ)(κ+1/γ), which rises only up to κ = (1 − 1/γ)/2
            let k_max = 0.5 * (1.0 - 1.0 / g);
            let k_a = k_lo.min(k_max - 0.02);
            let k_b = (k_a + 0.01).min(k_max);
            prop_assume!(k_a >= 0.0 && k_b > k_a);
            let delta = 2.0 * PI / n as f64;
            let mu = -delta + 2.0 * delta * frac;
            let a = lemma1_variance(n, k_a, 0.0, delta, mu, g, 0.0).unwrap();
            let b = lemma1_variance(n, k_b, 0.0, delta, mu, g, 0.0).unwrap();
            prop_assume!(!a.singular);
            prop_assert!(b.variance > a.variance);

            let eta = -2.0 * PI * 1.1 / n as f64;
            let mu2 = eta + 4.0 * PI / n as f64 * frac;
            let a = lemma2_variance(n, k_lo, eta, mu2, g, 0.3).unwrap();
            let b = lemma2_variance(n, k_lo + 0.01, eta, mu2, g, 0.3).unwrap();
            prop_assume!(!a.singular);
            prop_assert!(b.variance > a.variance);
        }

        #[test]
        fn crlb_invariant_to_quarter_turns(turn in 1u32..4, eps in -0.9f64..0.9, s in 0.05f64..2.0) {
            let (a0, a1) = sample_signals(8);
            let r = Complex64::from_polar(1.0, PI / 2.0 * turn as f64);
            let b0: Vec<Complex64> = a0.iter().map(|v| v * r).collect();
            let b1: Vec<Complex64> = a1.iter().map(|v| v * r).collect();
            let x = fisher_1bit(&a0, &a1, eps, s).unwrap();
            let y = fisher_1bit(&b0, &b1, eps, s).unwrap();
            for (p, q) in x.crlb_diag.iter().zip(&y.crlb_diag) {
                prop_assert!((p - q).abs() <= 1e-6 * p.abs().max(1e-12));
            }
            prop_assert!((x.cfo_bound - y.cfo_bound).abs() <= 1e-6 * x.cfo_bound);
        }
    }
}
