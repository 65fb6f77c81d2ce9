//! Seeded synthetic samplers: uniform, Gaussian mixtures and the
//! Fernandez-Steel skewed normal.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::stats::FeatureSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixComponent {
    pub weight: f64,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussMixSpec {
    components: Vec<MixComponent>,
}

impl GaussMixSpec {
    pub fn new(components: Vec<MixComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::BadSpec("mixture needs at least one component".into()));
        }
        for c in &components {
            if !(c.weight >= 0.0 && c.weight <= 1.0) {
                return Err(Error::BadSpec(format!("weight {} outside [0, 1]", c.weight)));
            }
            if !(c.sd > 0.0 && c.sd.is_finite()) || !c.mean.is_finite() {
                return Err(Error::BadSpec(format!("bad component mean {} sd {}", c.mean, c.sd)));
            }
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::BadSpec(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { components })
    }

    /// Equal-weight mixture of unit-variance normals.
    pub fn equal_unit(means: &[f64]) -> Result<Self> {
        let w = 1.0 / means.len().max(1) as f64;
        Self::new(
            means
                .iter()
                .map(|&mean| MixComponent { weight: w, mean, sd: 1.0 })
                .collect(),
        )
    }

    pub fn components(&self) -> &[MixComponent] {
        &self.components
    }
}

/// Parses `mean:sd:weight` triples separated by commas, e.g. `0:1:0.5,2.5:1:0.5`.
impl FromStr for GaussMixSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut components = Vec::new();
        for part in s.split(',') {
            let fields: Vec<&str> = part.trim().split(':').collect();
            let [mean, sd, weight] = fields.as_slice() else {
                return Err(Error::Parse(format!("expected mean:sd:weight, got '{part}'")));
            };
            let num = |t: &str| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("not a number: '{t}'")))
            };
            components.push(MixComponent {
                mean: num(mean)?,
                sd: num(sd)?,
                weight: num(weight)?,
            });
        }
        Self::new(components)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewSpec {
    pub xi: f64,
    pub standardized: bool,
}

impl SkewSpec {
    pub fn new(xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::BadSpec(format!("skew parameter xi must be positive, got {xi}")));
        }
        Ok(Self { xi, standardized: true })
    }

    /// Mean and standard deviation of the unstandardized skewed law.
    pub fn raw_moments(&self) -> (f64, f64) {
        let xi = self.xi;
        let m1 = (2.0 / PI).sqrt();
        let mean = m1 * (xi - 1.0 / xi);
        let second = xi * xi - 1.0 + 1.0 / (xi * xi);
        (mean, (second - mean * mean).sqrt())
    }
}

pub fn sample_uniform(n: usize, low: f64, high: f64, seed: u64) -> Result<FeatureSeries> {
    if !(low < high) || !low.is_finite() || !high.is_finite() {
        return Err(Error::BadRange { low, high });
    }
    let mut r = rng::stream(seed, 0);
    let span = high - low;
    let values = (0..n).map(|_| low + span * r.random::<f64>());
    Ok(FeatureSeries::new("uniform", values))
}

pub fn sample_gauss_mixture(n: usize, spec: &GaussMixSpec, seed: u64) -> FeatureSeries {
    let mut r = rng::stream(seed, 0);
    let comps = spec.components();
    let values: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = r.random();
            let mut acc = 0.0;
            let mut chosen = comps.iter().rev().find(|c| c.weight > 0.0).unwrap_or(&comps[0]);
            for c in comps {
                acc += c.weight;
                if u < acc {
                    chosen = c;
                    break;
                }
            }
            let z: f64 = r.sample(StandardNormal);
            chosen.mean + chosen.sd * z
        })
        .collect();
    FeatureSeries::new("gaussmix", values)
}

pub fn sample_skew_normal(n: usize, spec: &SkewSpec, seed: u64) -> FeatureSeries {
    let mut r = rng::stream(seed, 0);
    let xi = spec.xi;
    let p_upper = xi * xi / (1.0 + xi * xi);
    let (mean, sd) = if spec.standardized {
        spec.raw_moments()
    } else {
        (0.0, 1.0)
    };
    let values: Vec<f64> = (0..n)
        .map(|_| {
            let z: f64 = r.sample::<f64, _>(StandardNormal).abs();
            let x = if r.random::<f64>() < p_upper { z * xi } else { -z / xi };
            (x - mean) / sd
        })
        .collect();
    FeatureSeries::new("skewnorm", values)
}
