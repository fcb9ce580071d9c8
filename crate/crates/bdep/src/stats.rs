//! Small statistical helpers for the normality and variance checks.

use statrs::distribution::{ContinuousCDF, FisherSnedecor};
use statrs::function::erf::erf;

use crate::error::{Error, Result};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance about the sample mean.
pub fn sample_variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

#[derive(Clone, Copy, Debug)]
pub struct KsReport {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
    /// Scale of the fitted centred normal.
    pub sigma: f64,
}

impl KsReport {
    pub fn passes(&self, level: f64) -> bool {
        self.p_value > level
    }
}

/// Kolmogorov-Smirnov distance of the sample against a centred normal
/// whose variance is fitted from the same sample, with the asymptotic
/// Kolmogorov p-value. Fitting from the sample makes the p-value lenient
/// rather than strict, which suits an is-this-roughly-normal gate.
pub fn ks_centered_normal(values: &[f64]) -> Result<KsReport> {
    if values.len() < 8 {
        return Err(Error::InvalidParameter("need at least 8 samples".into()));
    }
    let sigma = (values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64).sqrt();
    if !(sigma > 0.0) {
        return Err(Error::Domain("degenerate sample: zero variance".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let mut d = 0.0f64;
    for (i, x) in sorted.iter().enumerate() {
        let f = normal_cdf(x / sigma);
        d = d.max(((i + 1) as f64 / n as f64 - f).abs());
        d = d.max((f - i as f64 / n as f64).abs());
    }
    Ok(KsReport { statistic: d, p_value: kolmogorov_p(n, d), n, sigma })
}

/// P[D_n > d] under the null, by the alternating Kolmogorov series in
/// sqrt(n) d.
fn kolmogorov_p(n: usize, d: f64) -> f64 {
    let t = (n as f64).sqrt() * d;
    if t < 1e-8 {
        return 1.0;
    }
    let mut p = 0.0f64;
    for j in 1..=200 {
        let term = (-2.0 * (j as f64) * (j as f64) * t * t).exp();
        p += if j % 2 == 1 { 2.0 * term } else { -2.0 * term };
        if term < 1e-16 {
            break;
        }
    }
    p.clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug)]
pub struct VarianceRatioReport {
    pub f_statistic: f64,
    pub p_value: f64,
}

impl VarianceRatioReport {
    /// True when the two variances are statistically indistinguishable at
    /// the given level.
    pub fn indistinguishable(&self, level: f64) -> bool {
        self.p_value > level
    }
}

/// Two-sided F-test comparing the sample variances of two groups.
pub fn variance_ratio_test(a: &[f64], b: &[f64]) -> Result<VarianceRatioReport> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidParameter("need two samples per group".into()));
    }
    let va = sample_variance(a);
    let vb = sample_variance(b);
    if !(va > 0.0) || !(vb > 0.0) {
        return Err(Error::Domain("degenerate group: zero variance".into()));
    }
    let f = va / vb;
    let dist = FisherSnedecor::new((a.len() - 1) as f64, (b.len() - 1) as f64)
        .map_err(|e| Error::Domain(format!("F distribution: {e}")))?;
    let cdf = dist.cdf(f);
    let p = (2.0 * cdf.min(1.0 - cdf)).clamp(0.0, 1.0);
    Ok(VarianceRatioReport { f_statistic: f, p_value: p })
}
