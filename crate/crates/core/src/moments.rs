//! Moments of the degree sum `D` and the two-star count `D₂` in the
//! expected-degree model.
//!
//! Closed forms use the *empirical* weight moments `w̄^k = (1/n) Σ w_i^k` and
//! are exact at every `n`; the asymptotic moments of the power-law sequence
//! only feed [`predict_scaling`].

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{GenSpec, WeightSequence};
use crate::graph::Graph;
use crate::rng::derive_seed;
use crate::stats::{compensated_sum, Summary};

/// Distance from a regime boundary `γ = k + 1` inside which the logarithmic
/// case is used.
pub const BOUNDARY_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentOrigin {
    Empirical,
    Asymptotic,
}

/// `w̄^k` for a set of orders `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMoments {
    pub n: usize,
    pub values: Vec<(u32, f64)>,
    pub origin: MomentOrigin,
}

impl WeightMoments {
    pub fn empirical(w: &WeightSequence, orders: &[u32]) -> Result<WeightMoments> {
        let values = orders.iter().map(|&k| empirical_wbar_k(w, k).map(|v| (k, v))).collect::<Result<_>>()?;
        Ok(WeightMoments { n: w.n(), values, origin: MomentOrigin::Empirical })
    }

    pub fn get(&self, k: u32) -> Option<f64> {
        self.values.iter().find(|(j, _)| *j == k).map(|&(_, v)| v)
    }
}

pub fn empirical_wbar_k(w: &WeightSequence, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("moment order k must be at least 1"));
    }
    let n = w.n() as f64;
    if k == 1 {
        return Ok(w.total() / n);
    }
    Ok(compensated_sum(w.weights().iter().map(|x| x.powi(k as i32))) / n)
}

/// Leading-order `w̄^k` of the power-law sequence as `n → ∞`, for `k >= 2`.
pub fn asymptotic_wbar_k(gamma: f64, d: f64, m: f64, k: u32) -> Result<f64> {
    if !(gamma > 2.0) {
        return Err(Error::invalid("gamma must exceed 2"));
    }
    if !(d > 0.0 && d < m) {
        return Err(Error::invalid(format!("need 0 < d < m, got d={d}, m={m}")));
    }
    if k < 2 {
        return Err(Error::invalid("asymptotic moments are defined for k >= 2"));
    }
    let kf = k as f64;
    let boundary = kf + 1.0;
    let value = if (gamma - boundary).abs() < BOUNDARY_BAND {
        (kf - 1.0).powf(kf) / kf.powf(kf - 1.0) * d.powf(kf) * (m / d).ln()
    } else if gamma > boundary {
        (gamma - 2.0).powf(kf) / ((gamma - 1.0).powf(kf - 1.0) * (gamma - 1.0 - kf)) * d.powf(kf)
    } else {
        (gamma - 2.0).powf(gamma - 1.0) / ((gamma - 1.0).powf(gamma - 2.0) * (boundary - gamma))
            * d.powf(gamma - 1.0)
            * m.powf(boundary - gamma)
    };
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeSumMoments {
    pub expected: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStarMoments {
    pub expected: f64,
    pub variance_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormMoments {
    pub expected_d: f64,
    pub var_d: f64,
    pub expected_d2: f64,
    pub var_d2_bound: f64,
}

/// `E[D] = n w̄ = W` and
/// `Var(D) = 2(n w̄ - (w̄²/w̄)²) - (w̄²/w̄ - w̄⁴/(n w̄²))`.
///
/// The variance sums `4 Var(A_uv)` over off-diagonal pairs and `Var(A_vv)`
/// over the diagonal.
pub fn closed_form_d(w: &WeightSequence) -> Result<DegreeSumMoments> {
    w.ensure_valid_probabilities()?;
    let n = w.n() as f64;
    let m = WeightMoments::empirical(w, &[1, 2, 4])?;
    let (w1, w2, w4) = (m.get(1).unwrap(), m.get(2).unwrap(), m.get(4).unwrap());
    let ratio = w2 / w1;
    let variance = 2.0 * (n * w1 - ratio * ratio) - (ratio - w4 / (n * w1 * w1));
    Ok(DegreeSumMoments { expected: w.total(), variance })
}

/// `E[D₂] = n w̄² - (w̄²/w̄)²` and the upper bound
/// `Var(D₂) <= 4n w̄³ + 2n w̄² + 4n (w̄²)²/w̄`.
pub fn closed_form_d2(w: &WeightSequence) -> Result<TwoStarMoments> {
    w.ensure_valid_probabilities()?;
    let n = w.n() as f64;
    let m = WeightMoments::empirical(w, &[1, 2, 3])?;
    let (w1, w2, w3) = (m.get(1).unwrap(), m.get(2).unwrap(), m.get(3).unwrap());
    let ratio = w2 / w1;
    Ok(TwoStarMoments {
        expected: n * w2 - ratio * ratio,
        variance_bound: 4.0 * n * w3 + 2.0 * n * w2 + 4.0 * n * w2 * w2 / w1,
    })
}

pub fn closed_form(w: &WeightSequence) -> Result<ClosedFormMoments> {
    let d = closed_form_d(w)?;
    let d2 = closed_form_d2(w)?;
    Ok(ClosedFormMoments {
        expected_d: d.expected,
        var_d: d.variance,
        expected_d2: d2.expected,
        var_d2_bound: d2.variance_bound,
    })
}

/// Moments of `G(n,p)` with self-loops (weights `w_v = np`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErMoments {
    pub expected_d: f64,
    pub var_d: f64,
    pub expected_d2: f64,
}

pub fn er_moments(n: usize, p: f64) -> Result<ErMoments> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!("p must lie in (0, 1], got {p}")));
    }
    let n = n as f64;
    Ok(ErMoments {
        expected_d: n * n * p,
        var_d: (2.0 * n - 1.0) * n * p * (1.0 - p),
        expected_d2: n * n * (n - 1.0) * p * p,
    })
}

/// Chebyshev bound on `P(|X - E X| > eps·E X)`, capped at 1.
pub fn chebyshev_relative(mean: f64, variance: f64, eps: f64) -> Result<f64> {
    if !(mean > 0.0) {
        return Err(Error::invalid(format!("mean must be positive, got {mean}")));
    }
    if !(variance >= 0.0) {
        return Err(Error::invalid(format!("variance must be nonnegative, got {variance}")));
    }
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("eps must be positive, got {eps}")));
    }
    Ok((variance / (eps * eps * mean * mean)).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `γ > 3`: `n Σπ²` tends to a constant.
    GammaAbove3,
    /// `γ = 3`: logarithmic growth.
    GammaEq3,
    /// `2 < γ < 3`: polynomial growth with exponent `3 - γ`.
    GammaBetween2And3,
}

impl Regime {
    pub fn of(gamma: f64) -> Regime {
        if gamma == 3.0 {
            Regime::GammaEq3
        } else if gamma > 3.0 {
            Regime::GammaAbove3
        } else {
            Regime::GammaBetween2And3
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::GammaAbove3 => "gamma_gt_3",
            Regime::GammaEq3 => "gamma_eq_3",
            Regime::GammaBetween2And3 => "gamma_in_2_3",
        }
    }
}

/// Leading-order prediction of `n Σπ²` (equivalently `n E[τ(t)] / t`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPrediction {
    pub regime: Regime,
    /// `(w̄²_asymptotic + d) / d²`, from `Σπ² = (D₂ + D)/D²` with `D ≈ nd`
    /// and `D₂ ≈ n w̄²`.
    pub leading_estimate: f64,
    /// Power of the degree scale at which `n Σπ²` grows; `3 - γ` below 3.
    pub growth_exponent: f64,
    /// Set at `γ = 3`, where growth is logarithmic.
    pub logarithmic: bool,
}

pub fn predict_scaling(gamma: f64, d: f64, m: f64) -> Result<ScalingPrediction> {
    let wbar2 = asymptotic_wbar_k(gamma, d, m, 2)?;
    let regime = Regime::of(gamma);
    Ok(ScalingPrediction {
        regime,
        leading_estimate: (wbar2 + d) / (d * d),
        growth_exponent: if regime == Regime::GammaBetween2And3 { 3.0 - gamma } else { 0.0 },
        logarithmic: regime == Regime::GammaEq3,
    })
}

/// `(D, D₂)` of one graph; zero for the empty graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeSample {
    pub d: u64,
    pub d2: u64,
}

impl DegreeSample {
    pub fn of(g: &Graph) -> DegreeSample {
        let d2 = g.degrees().map(|k| k * k.saturating_sub(1)).sum();
        DegreeSample { d: g.total_degree(), d2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleStats {
    pub sample_mean_d: f64,
    pub sample_var_d: f64,
    pub sample_mean_d2: f64,
    pub sample_var_d2: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl EnsembleStats {
    pub fn from_samples(samples: &[DegreeSample], seed: u64) -> EnsembleStats {
        let d: Vec<f64> = samples.iter().map(|s| s.d as f64).collect();
        let d2: Vec<f64> = samples.iter().map(|s| s.d2 as f64).collect();
        let (sd, sd2) = (Summary::of(&d), Summary::of(&d2));
        EnsembleStats {
            sample_mean_d: sd.mean,
            sample_var_d: sd.variance,
            sample_mean_d2: sd2.mean,
            sample_var_d2: sd2.variance,
            replicates: samples.len(),
            seed,
        }
    }

    pub fn stderr_d(&self) -> f64 {
        (self.sample_var_d / self.replicates as f64).sqrt()
    }

    pub fn stderr_d2(&self) -> f64 {
        (self.sample_var_d2 / self.replicates as f64).sqrt()
    }
}

/// `(D, D₂)` for `replicates` independent graphs, replicate `i` drawn with
/// seed `derive_seed(seed, i)`. Replicates run in parallel; the output is in
/// replicate order.
pub fn ensemble_samples(spec: &GenSpec, replicates: usize, seed: u64) -> Result<Vec<DegreeSample>> {
    let sampler = spec.sampler()?;
    (0..replicates as u64)
        .into_par_iter()
        .map(|i| sampler.sample(derive_seed(seed, i)).map(|g| DegreeSample::of(&g)))
        .collect()
}

pub fn ensemble_estimate(spec: &GenSpec, replicates: usize, seed: u64) -> Result<EnsembleStats> {
    if replicates < 2 {
        return Err(Error::invalid("an ensemble needs at least 2 replicates"));
    }
    Ok(EnsembleStats::from_samples(&ensemble_samples(spec, replicates, seed)?, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn empirical_examples() {
        let w = WeightSequence::uniform(17, 3.0).unwrap();
        assert_eq!(empirical_wbar_k(&w, 2).unwrap(), 9.0);
        let w = WeightSequence::from_weights(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(empirical_wbar_k(&w, 1).unwrap(), 2.0);
        let (n, p) = (50, 0.2);
        let w = WeightSequence::uniform(n, n as f64 * p).unwrap();
        assert!(rel(empirical_wbar_k(&w, 3).unwrap(), 1000.0) < 1e-14);
        assert!(empirical_wbar_k(&w, 0).is_err());
    }

    #[test]
    fn asymptotic_examples() {
        let v = asymptotic_wbar_k(4.0, 10.0, 1000.0, 2).unwrap();
        assert!(rel(v, 400.0 / 3.0) < 1e-14);
        let v = asymptotic_wbar_k(3.0, 2.0, 200.0, 2).unwrap();
        assert!(rel(v, 0.5 * 4.0 * 100f64.ln()) < 1e-14);
        assert!((v - 9.2103).abs() < 1e-4);
        // The fourth moment at its boundary has constant 81/64.
        let v = asymptotic_wbar_k(5.0, 2.0, 200.0, 4).unwrap();
        assert!(rel(v, 81.0 / 64.0 * 16.0 * 100f64.ln()) < 1e-14);
        // Within the boundary band the log case is used.
        let v = asymptotic_wbar_k(3.0 + 1e-12, 2.0, 200.0, 2).unwrap();
        assert!(rel(v, 0.5 * 4.0 * 100f64.ln()) < 1e-12);
        assert!(asymptotic_wbar_k(2.0, 1.0, 10.0, 2).is_err());
        assert!(asymptotic_wbar_k(2.5, 10.0, 10.0, 2).is_err());
        assert!(asymptotic_wbar_k(2.5, 1.0, 10.0, 1).is_err());
    }

    #[test]
    fn asymptotic_continuous_within_regimes() {
        for k in 2..=4u32 {
            let b = k as f64 + 1.0;
            for &(lo, hi) in &[(2.05, b - 0.05), (b + 0.05, b + 3.0)] {
                let mut g = lo;
                while g < hi {
                    let a = asymptotic_wbar_k(g, 3.0, 300.0, k).unwrap();
                    let c = asymptotic_wbar_k(g + 1e-7, 3.0, 300.0, k).unwrap();
                    assert!(rel(c, a) < 1e-4, "k={k} gamma={g}");
                    g += 0.01;
                }
            }
        }
    }

    /// Brute-force `E[D]` and `Var(D)` by summing Bernoulli variances over all
    /// pairs, independent of the moment formula.
    fn brute_force_d(w: &[f64]) -> (f64, f64) {
        let total: f64 = w.iter().sum();
        let (mut mean, mut var) = (0.0, 0.0);
        for u in 0..w.len() {
            for v in u..w.len() {
                let p = w[u] * w[v] / total;
                let c = if u == v { 1.0 } else { 2.0 };
                mean += c * p;
                var += c * c * p * (1.0 - p);
            }
        }
        (mean, var)
    }

    /// Brute-force `E[D₂]` as `Σ_v Σ_{i≠j} p_vi p_vj`.
    fn brute_force_d2(w: &[f64]) -> f64 {
        let total: f64 = w.iter().sum();
        let mut acc = 0.0;
        for v in 0..w.len() {
            let probs: Vec<f64> = w.iter().map(|x| w[v] * x / total).collect();
            let s: f64 = probs.iter().sum();
            let s2: f64 = probs.iter().map(|p| p * p).sum();
            acc += s * s - s2;
        }
        acc
    }

    #[test]
    fn closed_forms_match_brute_force() {
        let w = WeightSequence::uniform(4, 2.0).unwrap();
        let cf = closed_form(&w).unwrap();
        assert_eq!(brute_force_d(w.weights()), (8.0, 7.0));
        assert_eq!(cf.expected_d, 8.0);
        assert!(rel(cf.var_d, 7.0) < 1e-14);
        assert!(rel(brute_force_d2(w.weights()), 12.0) < 1e-14);
        assert!(rel(cf.expected_d2, 12.0) < 1e-14);
        assert!(rel(cf.var_d2_bound, 288.0) < 1e-14);

        let w = WeightSequence::power_law(400, 2.5, 3.0, 25.0).unwrap();
        let cf = closed_form(&w).unwrap();
        let (m, v) = brute_force_d(w.weights());
        assert!(rel(cf.expected_d, m) < 1e-12);
        assert!(rel(cf.var_d, v) < 1e-10);
        assert!(rel(cf.expected_d2, brute_force_d2(w.weights())) < 1e-10);
    }

    #[test]
    fn er_examples() {
        let er = er_moments(10, 0.5).unwrap();
        assert_eq!((er.expected_d, er.var_d, er.expected_d2), (50.0, 47.5, 225.0));
        assert_eq!(er_moments(100, 1.0).unwrap().var_d, 0.0);
        assert!(er_moments(10, 0.0).is_err());
        assert!(er_moments(10, 1.1).is_err());
    }

    #[test]
    fn er_agrees_with_uniform_closed_form() {
        for n in (10..=1000).step_by(33) {
            for &p in &[0.01, 0.1, 0.5] {
                let er = er_moments(n, p).unwrap();
                let cf = closed_form(&WeightSequence::uniform(n, n as f64 * p).unwrap()).unwrap();
                assert!(rel(cf.expected_d, er.expected_d) < 1e-12, "n={n} p={p}");
                assert!(rel(cf.var_d, er.var_d) < 1e-12, "n={n} p={p}");
                assert!(rel(cf.expected_d2, er.expected_d2) < 1e-12, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn invalid_probabilities_rejected() {
        let w = WeightSequence::from_weights(vec![10.0, 1.0, 1.0]).unwrap();
        assert!(closed_form_d(&w).is_err());
        assert!(closed_form_d2(&w).is_err());
    }

    #[test]
    fn chebyshev_examples() {
        assert!((chebyshev_relative(100.0, 100.0, 0.1).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(chebyshev_relative(100.0, 400.0, 0.1).unwrap(), 1.0);
        assert!(rel(chebyshev_relative(1000.0, 100.0, 0.1).unwrap(), 0.01) < 1e-12);
        assert!(chebyshev_relative(0.0, 1.0, 0.1).is_err());

        // G(n,p), n = 10⁴, p = 10⁻²: with Var(D₂) <= 8n⁴p³ + 2n³p² and
        // E[D₂] = n²(n-1)p² the bound is 8/(ε²(n-1)²p) + 2/(ε²n(n-1)²p²).
        let (n, p, eps) = (10_000f64, 0.01, 0.1);
        let er = er_moments(n as usize, p).unwrap();
        let var = 8.0 * n.powi(4) * p.powi(3) + 2.0 * n.powi(3) * p * p;
        let bound = chebyshev_relative(er.expected_d2, var, eps).unwrap();
        let first = 1.0 / (eps * eps * (n - 1.0).powi(2) * p);
        let second = 1.0 / (eps * eps * n * (n - 1.0).powi(2) * p * p);
        assert!(rel(bound, 8.0 * first + 2.0 * second) < 1e-12);
        assert!((first - 1e-4).abs() < 1e-7 && (second - 1e-6).abs() < 1e-9);
        // The general two-star bound at uniform weights np is of the same order.
        let cf = closed_form_d2(&WeightSequence::uniform(n as usize, n * p).unwrap()).unwrap();
        let general = chebyshev_relative(cf.expected, cf.variance_bound, eps).unwrap();
        assert!(general <= bound * 1.01 && general > 7.0 * first, "{general}");
    }

    #[test]
    fn scaling_examples() {
        let s = predict_scaling(4.0, 10.0, 1000.0).unwrap();
        assert_eq!(s.regime, Regime::GammaAbove3);
        assert!((s.leading_estimate - 1.433_333).abs() < 1e-5);
        assert_eq!(s.growth_exponent, 0.0);
        let s = predict_scaling(3.0, 5.0, 500.0).unwrap();
        assert_eq!(s.regime, Regime::GammaEq3);
        assert!(s.logarithmic);
        let s = predict_scaling(2.5, 5.0, 500.0).unwrap();
        assert_eq!(s.regime, Regime::GammaBetween2And3);
        assert_eq!(s.growth_exponent, 0.5);
        assert!(!s.logarithmic);
        assert!(predict_scaling(1.5, 5.0, 500.0).is_err());
    }

    #[test]
    fn ensemble_requires_two_replicates() {
        let spec = GenSpec::new(crate::Family::Complete { n: 4 }, 0);
        assert!(ensemble_estimate(&spec, 1, 0).is_err());
        let st = ensemble_estimate(&spec, 3, 0).unwrap();
        assert_eq!((st.sample_mean_d, st.sample_var_d), (12.0, 0.0));
        assert_eq!(st.sample_mean_d2, 24.0);
    }
}
