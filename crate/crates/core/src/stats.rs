//! Sample summaries for Monte Carlo estimators.

/// Mean, unbiased variance and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
}

impl Summary {
    /// Two-pass compensated summary, accumulated in slice order so the result
    /// does not depend on how the samples were produced. Compensation matters
    /// for probabilities near 1, where a plain sum loses the gap to 1.
    pub fn of(samples: &[f64]) -> Summary {
        let count = samples.len();
        if count == 0 {
            return Summary { count, mean: f64::NAN, variance: f64::NAN, stderr: f64::NAN };
        }
        let mean = compensated_sum(samples.iter().copied()) / count as f64;
        let variance = if count > 1 {
            compensated_sum(samples.iter().map(|x| (x - mean) * (x - mean))) / (count - 1) as f64
        } else {
            0.0
        };
        let stderr = (variance / count as f64).sqrt();
        Summary { count, mean, variance, stderr }
    }

    /// `|mean - expected| / stderr`; zero when both numerator and stderr vanish.
    pub fn z_score(&self, expected: f64) -> f64 {
        let diff = (self.mean - expected).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.stderr
        }
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Least-squares slope of `y` against `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
