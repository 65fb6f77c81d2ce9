//! Descriptive statistics, quantiles and feature transforms.
//!
//! Everything here is a pure function of its input. Quantiles use linear
//! interpolation at index `h = (n - 1) p`, which makes `quantile(v, 0)` the
//! minimum and `quantile(v, 1)` the maximum.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ratio between the interquartile range and the standard deviation of a normal law.
pub const IQR_TO_SIGMA: f64 = 1.349;

/// One named numeric feature. Non-finite inputs are dropped and counted as missing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSeries {
    pub name: String,
    values: Vec<f64>,
    pub missing_count: usize,
}

impl FeatureSeries {
    /// Builds a series from raw values, dropping NaN and infinities.
    pub fn new(name: impl Into<String>, raw: impl IntoIterator<Item = f64>) -> Self {
        Self::from_cells(name, raw.into_iter().map(Some))
    }

    /// Builds a series from parsed cells where `None` marks a missing token.
    pub fn from_cells(name: impl Into<String>, cells: impl IntoIterator<Item = Option<f64>>) -> Self {
        let mut values = Vec::new();
        let mut missing_count = 0;
        for cell in cells {
            match cell {
                Some(v) if v.is_finite() => values.push(v),
                _ => missing_count += 1,
            }
        }
        Self {
            name: name.into(),
            values,
            missing_count,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Replaces the values, keeping name and missing count. Non-finite values are dropped.
    pub(crate) fn with_values(&self, values: Vec<f64>) -> Self {
        let before = values.len();
        let values: Vec<f64> = values.into_iter().filter(|v| v.is_finite()).collect();
        Self {
            name: self.name.clone(),
            missing_count: self.missing_count + (before - values.len()),
            values,
        }
    }

    pub fn sorted_values(&self) -> Vec<f64> {
        sorted(&self.values)
    }

    /// Number of distinct values.
    pub fn unique_count(&self) -> usize {
        let s = self.sorted_values();
        if s.is_empty() {
            return 0;
        }
        1 + s.windows(2).filter(|w| w[1] != w[0]).count()
    }
}

pub(crate) fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// Linear-interpolation quantile of ascending `sorted` data.
pub fn quantile(sorted: &[f64], p: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptyFeature);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadConfig(format!("probability {p} outside [0, 1]")));
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    if lo == hi || frac == 0.0 {
        return Ok(sorted[lo]);
    }
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub missing: usize,
    pub q01: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub q99: f64,
    pub mean: f64,
    /// `None` for constant features.
    pub skewness_g1: Option<f64>,
    /// Excess kurtosis (normal law = 0). `None` for constant features.
    pub excess_kurtosis: Option<f64>,
}

/// Biased central moments m2, m3, m4 around the mean.
pub(crate) fn central_moments(values: &[f64]) -> (f64, f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in values {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (mean, m2 / n, m3 / n, m4 / n)
}

pub fn describe(f: &FeatureSeries) -> Result<DescriptiveStats> {
    if f.is_empty() {
        return Err(Error::EmptyFeature);
    }
    let s = f.sorted_values();
    let (mean, m2, m3, m4) = central_moments(&s);
    let (skewness_g1, excess_kurtosis) = if m2 > 0.0 {
        (Some(m3 / m2.powf(1.5)), Some(m4 / (m2 * m2) - 3.0))
    } else {
        (None, None)
    };
    Ok(DescriptiveStats {
        n: s.len(),
        missing: f.missing_count,
        q01: quantile(&s, 0.01)?,
        q25: quantile(&s, 0.25)?,
        median: quantile(&s, 0.5)?,
        q75: quantile(&s, 0.75)?,
        q99: quantile(&s, 0.99)?,
        mean,
        skewness_g1,
        excess_kurtosis,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalingMode {
    #[default]
    None,
    Percentalize,
    Robust,
    CompleteRobust,
    Log,
}

impl ScalingMode {
    pub const ALL: [ScalingMode; 5] = [
        ScalingMode::None,
        ScalingMode::Percentalize,
        ScalingMode::Robust,
        ScalingMode::CompleteRobust,
        ScalingMode::Log,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScalingMode::None => "none",
            ScalingMode::Percentalize => "percentalize",
            ScalingMode::Robust => "robust",
            ScalingMode::CompleteRobust => "completerobust",
            ScalingMode::Log => "log",
        }
    }
}

impl fmt::Display for ScalingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScalingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        ScalingMode::ALL
            .into_iter()
            .find(|m| m.as_str() == lower)
            .ok_or_else(|| Error::Parse(format!("unknown scaling mode '{s}'")))
    }
}

/// Symmetric base-10 log, odd and zero at zero.
pub fn symlog(x: f64) -> f64 {
    x.signum() * x.abs().ln_1p() / std::f64::consts::LN_10
}

pub fn transform(f: &FeatureSeries, mode: ScalingMode) -> Result<FeatureSeries> {
    if f.is_empty() {
        return Err(Error::EmptyFeature);
    }
    let values = f.values();
    let out: Vec<f64> = match mode {
        ScalingMode::None => values.to_vec(),
        ScalingMode::Log => values.iter().map(|&x| if x == 0.0 { 0.0 } else { symlog(x) }).collect(),
        ScalingMode::Percentalize => {
            let (lo, hi) = min_max(values);
            if hi <= lo {
                return Err(Error::ConstantFeature);
            }
            let span = hi - lo;
            values.iter().map(|&x| (x - lo) / span * 100.0).collect()
        }
        ScalingMode::Robust | ScalingMode::CompleteRobust => {
            let s = f.sorted_values();
            let lo = quantile(&s, 0.01)?;
            let hi = quantile(&s, 0.99)?;
            if hi <= lo {
                return Err(Error::ConstantFeature);
            }
            let span = hi - lo;
            let clamp = mode == ScalingMode::CompleteRobust;
            values
                .iter()
                .map(|&x| {
                    let r = (x - lo) / span;
                    if clamp {
                        r.clamp(0.0, 1.0)
                    } else {
                        r
                    }
                })
                .collect()
        }
    };
    Ok(f.with_values(out))
}

pub(crate) fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Normal law fitted from median and interquartile range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustGaussian {
    pub mu: f64,
    pub sigma: f64,
}

impl RobustGaussian {
    pub fn pdf(&self, x: f64) -> f64 {
        let z = (x - self.mu) / self.sigma;
        (-0.5 * z * z).exp() / (self.sigma * (2.0 * std::f64::consts::PI).sqrt())
    }
}

pub fn robust_gaussian_fit(f: &FeatureSeries) -> Result<RobustGaussian> {
    if f.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: f.len() });
    }
    let s = f.sorted_values();
    if s[0] == s[s.len() - 1] {
        return Err(Error::ConstantFeature);
    }
    let iqr = quantile(&s, 0.75)? - quantile(&s, 0.25)?;
    if iqr <= 0.0 {
        return Err(Error::DegenerateSpread);
    }
    Ok(RobustGaussian {
        mu: quantile(&s, 0.5)?,
        sigma: iqr / IQR_TO_SIGMA,
    })
}
