//! The expected-degree (Chung-Lu) model: pair `(u, v)` is an edge with
//! probability `w_u w_v / W`, independently, self-loops included.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::stats::compensated_sum;

/// Parameters of the three-parameter power-law weight sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawParams {
    pub gamma: f64,
    pub d: f64,
    pub m: f64,
    pub i0: f64,
}

/// Expected degrees `w_0..w_{n-1}` with their total `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    weights: Vec<f64>,
    total: f64,
    max: f64,
    power_law: Option<PowerLawParams>,
}

/// Offset `i0 = n (d(γ-2) / (m(γ-1)))^(γ-1)`. Real-valued, never rounded.
pub fn power_law_offset(n: usize, gamma: f64, d: f64, m: f64) -> f64 {
    n as f64 * (d * (gamma - 2.0) / (m * (gamma - 1.0))).powf(gamma - 1.0)
}

fn check_power_law_domain(n: usize, gamma: f64, d: f64, m: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if !(gamma > 2.0 && gamma.is_finite()) {
        return Err(Error::invalid("gamma must exceed 2"));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::invalid("d must be positive"));
    }
    if !(m > d && m.is_finite()) {
        return Err(Error::invalid("m must exceed d"));
    }
    Ok(())
}

impl WeightSequence {
    /// `w_i = m (1 + i/i0)^(-1/(γ-1))` for `i = 0..n`, nonincreasing with `w_0 = m`.
    pub fn power_law(n: usize, gamma: f64, d: f64, m: f64) -> Result<WeightSequence> {
        check_power_law_domain(n, gamma, d, m)?;
        let i0 = power_law_offset(n, gamma, d, m);
        let exponent = -1.0 / (gamma - 1.0);
        let weights: Vec<f64> = (0..n).map(|i| m * (1.0 + i as f64 / i0).powf(exponent)).collect();
        let mut seq = WeightSequence::from_parts(weights);
        seq.power_law = Some(PowerLawParams { gamma, d, m, i0 });
        Ok(seq)
    }

    /// Every vertex has expected degree `w`; `w = np` gives `G(n,p)` with self-loops.
    pub fn uniform(n: usize, w: f64) -> Result<WeightSequence> {
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        WeightSequence::from_weights(vec![w; n])
    }

    pub fn from_weights(weights: Vec<f64>) -> Result<WeightSequence> {
        if weights.is_empty() {
            return Err(Error::invalid("weight sequence is empty"));
        }
        if let Some(bad) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::invalid(format!("weights must be positive and finite, found {bad}")));
        }
        Ok(WeightSequence::from_parts(weights))
    }

    fn from_parts(weights: Vec<f64>) -> WeightSequence {
        let total = compensated_sum(weights.iter().copied());
        let max = weights.iter().copied().fold(0.0, f64::max);
        WeightSequence { weights, total, max, power_law: None }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// `W = Σ w_i`.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn mean(&self) -> f64 {
        self.total / self.n() as f64
    }

    pub fn power_law_params(&self) -> Option<PowerLawParams> {
        self.power_law
    }

    /// `W >= w_max²`, i.e. every `w_u w_v / W` is a probability.
    pub fn has_valid_probabilities(&self) -> bool {
        self.total >= self.max * self.max
    }

    pub fn ensure_valid_probabilities(&self) -> Result<()> {
        if self.has_valid_probabilities() {
            Ok(())
        } else {
            Err(Error::InvalidProbabilities { total: self.total, max_sq: self.max * self.max })
        }
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.weights.windows(2).all(|w| w[0] >= w[1])
    }
}

/// How the maximum expected degree `m` is chosen for a power-law sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaxDegreeRule {
    Explicit(f64),
    /// The largest `m <= √(nd)` with `W(m) >= m²`.
    ///
    /// At finite `n` the sum `W` falls short of `nd` when `γ <= 3`, so
    /// `m = √(nd)` itself would give the top vertex a self-loop probability
    /// above one. In that case `m` is moved to the fixed point `m = √W(m)`.
    SqrtNd,
}

impl MaxDegreeRule {
    pub fn resolve(self, n: usize, gamma: f64, d: f64) -> Result<f64> {
        match self {
            MaxDegreeRule::Explicit(m) => Ok(m),
            MaxDegreeRule::SqrtNd => {
                let mut m = (n as f64 * d).sqrt();
                let total = |m: f64| WeightSequence::power_law(n, gamma, d, m).map(|w| w.total());
                if total(m)? >= m * m {
                    return Ok(m);
                }
                for _ in 0..200 {
                    let next = total(m)?.sqrt();
                    let done = (next - m).abs() <= 1e-13 * m;
                    m = next;
                    if done {
                        break;
                    }
                }
                while total(m)? < m * m {
                    m *= 1.0 - 1e-14;
                }
                if m <= d {
                    return Err(Error::invalid(format!("sqrt_nd rule gives m = {m} <= d = {d}")));
                }
                Ok(m)
            }
        }
    }
}

/// Finite-`n` evaluation of the model's standing assumptions. The two
/// little-o conditions are reported as ratios, never as pass/fail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssumptionReport {
    /// `d >= δ`; hard requirement.
    pub d_at_least_delta: bool,
    pub d_minus_delta: f64,
    /// `d / m`; should be small (`d = o(m)`).
    pub d_over_m: f64,
    /// `m <= √(nd)`.
    pub m_within_sqrt_nd: bool,
    pub sqrt_nd_minus_m: f64,
    /// `(m/d) / n^(1/(γ-1))`; should be small so that `i0` grows.
    pub md_ratio_over_n_power: f64,
    /// `W >= w_max²`; hard requirement (edge probabilities valid).
    pub valid_probabilities: bool,
    pub total_minus_max_sq: f64,
    /// `ln m / ln n`, the apparent power of `n` at which `m` grows.
    pub m_growth_exponent: f64,
}

impl AssumptionReport {
    /// Only the hard requirements.
    pub fn passed(&self) -> bool {
        self.d_at_least_delta && self.valid_probabilities
    }
}

pub fn check_assumptions(n: usize, gamma: f64, d: f64, m: f64, delta: f64) -> AssumptionReport {
    let sqrt_nd = (n as f64 * d).sqrt();
    let (valid_probabilities, total_minus_max_sq) = match WeightSequence::power_law(n, gamma, d, m) {
        Ok(w) => (w.has_valid_probabilities(), w.total() - w.max() * w.max()),
        Err(_) => (false, f64::NAN),
    };
    AssumptionReport {
        d_at_least_delta: d >= delta,
        d_minus_delta: d - delta,
        d_over_m: d / m,
        m_within_sqrt_nd: m <= sqrt_nd,
        sqrt_nd_minus_m: sqrt_nd - m,
        md_ratio_over_n_power: (m / d) / (n as f64).powf(1.0 / (gamma - 1.0)),
        valid_probabilities,
        total_minus_max_sq,
        m_growth_exponent: m.ln() / (n as f64).ln(),
    }
}

/// Reference sampler: one Bernoulli draw per unordered pair, `O(n²)`.
pub fn sample_naive<R: Rng>(weights: &[f64], total: f64, self_loops: bool, rng: &mut R) -> Vec<(Vertex, Vertex)> {
    let n = weights.len();
    let mut edges = Vec::new();
    for u in 0..n {
        let wu = weights[u] / total;
        let start = if self_loops { u } else { u + 1 };
        for v in start..n {
            let p = wu * weights[v];
            if rng.random::<f64>() < p {
                edges.push((u as Vertex, v as Vertex));
            }
        }
    }
    edges
}

/// Skip sampler for nonincreasing weights (Miller and Hagberg): within row
/// `u` the pair probabilities are nonincreasing in `v`, so geometric jumps at
/// the current probability `p` followed by thinning with `q/p` are exact.
/// Runs in `O(n + edges)` expected time.
pub fn sample_sorted_skip<R: Rng>(
    weights: &[f64],
    total: f64,
    self_loops: bool,
    rng: &mut R,
) -> Vec<(Vertex, Vertex)> {
    debug_assert!(weights.windows(2).all(|w| w[0] >= w[1]));
    let n = weights.len();
    let mut edges = Vec::with_capacity(total as usize / 2 + 16);
    let prob = |u: usize, v: usize| (weights[u] * weights[v] / total).min(1.0);
    for u in 0..n {
        let mut v = if self_loops { u } else { u + 1 };
        if v >= n {
            break;
        }
        let mut p = prob(u, v);
        while v < n && p > 0.0 {
            if p < 1.0 {
                let r = 1.0 - rng.random::<f64>();
                let skip = (r.ln() / (-p).ln_1p()).floor();
                if skip >= (n - v) as f64 {
                    break;
                }
                v += skip as usize;
            }
            let q = prob(u, v);
            if rng.random::<f64>() * p < q {
                edges.push((u as Vertex, v as Vertex));
            }
            p = q;
            v += 1;
        }
    }
    edges
}
