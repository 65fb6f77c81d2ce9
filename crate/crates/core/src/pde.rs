//! Pareto density estimation.
//!
//! The density at a kernel is the number of observations inside a fixed
//! radius around it. The radius is a low quantile of the pairwise distances,
//! chosen so that a neighbourhood holds roughly a fifth of the data.
//! Kernels span exactly `[min, max]` of the data; nothing is drawn outside.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::stats::sorted;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdeConfig {
    pub pareto_quantile: f64,
    pub distance_sample_cap: usize,
    pub large_n_threshold: usize,
    pub grid_min: usize,
    pub grid_max: usize,
    pub spacing_divisor: f64,
}

impl Default for PdeConfig {
    fn default() -> Self {
        Self {
            pareto_quantile: 0.18,
            distance_sample_cap: 5000,
            large_n_threshold: 1024,
            grid_min: 64,
            grid_max: 2048,
            spacing_divisor: 4.0,
        }
    }
}

impl PdeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.pareto_quantile > 0.0 && self.pareto_quantile < 1.0) {
            return Err(Error::BadConfig("pareto_quantile must lie in (0, 1)".into()));
        }
        if self.grid_min < 2 || self.grid_min > self.grid_max {
            return Err(Error::BadConfig("need 2 <= grid_min <= grid_max".into()));
        }
        if self.distance_sample_cap < 2 || self.large_n_threshold == 0 {
            return Err(Error::BadConfig("caps must be positive".into()));
        }
        if !(self.spacing_divisor > 0.0 && self.spacing_divisor.is_finite()) {
            return Err(Error::BadConfig("spacing_divisor must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub kernels: Vec<f64>,
    pub densities: Vec<f64>,
    pub radius: f64,
}

impl DensityCurve {
    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn max_density(&self) -> f64 {
        self.densities.iter().copied().fold(0.0, f64::max)
    }

    /// Density at `x`; exactly zero outside the kernel span.
    pub fn density_at(&self, x: f64) -> f64 {
        let (first, last) = (self.kernels[0], self.kernels[self.len() - 1]);
        if !(first..=last).contains(&x) {
            return 0.0;
        }
        let j = self.kernels.partition_point(|&k| k < x);
        if j == 0 {
            return self.densities[0];
        }
        let (k0, k1) = (self.kernels[j - 1], self.kernels[j]);
        let t = (x - k0) / (k1 - k0);
        self.densities[j - 1] + t * (self.densities[j] - self.densities[j - 1])
    }
}

pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Number of pairs `i < j` of ascending `s` with `s[j] - s[i] <= t`.
fn pairs_within(s: &[f64], t: f64) -> u64 {
    let mut count = 0u64;
    let mut i = 0;
    for j in 0..s.len() {
        while s[j] - s[i] > t {
            i += 1;
        }
        count += (j - i) as u64;
    }
    count
}

/// The `k`-th smallest (0-based) pairwise distance of ascending `s`.
///
/// Bisects over the bit patterns of non-negative doubles, which are ordered
/// like the values, so the result is an exact pairwise difference.
fn kth_pair_distance(s: &[f64], k: u64) -> f64 {
    let span = s[s.len() - 1] - s[0];
    let (mut lo, mut hi) = (0u64, span.to_bits());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pairs_within(s, f64::from_bits(mid)) > k {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    f64::from_bits(lo)
}

/// Linear-interpolation quantile of all pairwise distances of ascending `s`.
fn pair_distance_quantile(s: &[f64], p: f64) -> f64 {
    let n = s.len() as u64;
    let pairs = n * (n - 1) / 2;
    let h = (pairs - 1) as f64 * p;
    let lo = h.floor() as u64;
    let frac = h - lo as f64;
    let a = kth_pair_distance(s, lo);
    if frac == 0.0 {
        return a;
    }
    let b = kth_pair_distance(s, lo + 1);
    a + frac * (b - a)
}

fn check_spread(values: &[f64]) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: values.len() });
    }
    let s = sorted(values);
    if s[0] == s[s.len() - 1] {
        return Err(Error::ConstantFeature);
    }
    Ok(s)
}

pub fn pareto_radius(values: &[f64], cfg: &PdeConfig, seed: u64) -> Result<f64> {
    let s = check_spread(values)?;
    radius_of_sorted(&s, cfg, seed)
}

fn radius_of_sorted(s: &[f64], cfg: &PdeConfig, seed: u64) -> Result<f64> {
    let n = s.len();
    let sample = if n > cfg.distance_sample_cap {
        let mut rng = rng::stream(seed, 0);
        let mut idx = index::sample(&mut rng, n, cfg.distance_sample_cap).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| s[i]).collect::<Vec<_>>()
    } else {
        s.to_vec()
    };
    if sample[0] == sample[sample.len() - 1] {
        // the subsample landed on a single tie group; any positive gap will do
        return positive_fallback(s);
    }
    let mut radius = pair_distance_quantile(&sample, cfg.pareto_quantile);
    if radius <= 0.0 {
        radius = (1..=100)
            .map(|k| pair_distance_quantile(&sample, k as f64 / 100.0))
            .find(|&d| d > 0.0)
            .expect("non-constant data has a positive maximum distance");
    }
    if n > cfg.large_n_threshold {
        radius *= (n as f64 / cfg.large_n_threshold as f64).powf(-0.2);
    }
    Ok(radius)
}

fn positive_fallback(s: &[f64]) -> Result<f64> {
    s.windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&d| d > 0.0)
        .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.min(d))))
        .ok_or(Error::ConstantFeature)
}

/// Number of points within `radius` of `g` in ascending `s`.
fn count_within(s: &[f64], g: f64, radius: f64) -> usize {
    let lo = s.partition_point(|&x| x < g - radius);
    let hi = s.partition_point(|&x| x <= g + radius);
    hi - lo
}

pub fn pde_estimate(values: &[f64], cfg: &PdeConfig, seed: u64) -> Result<DensityCurve> {
    cfg.validate()?;
    let s = check_spread(values)?;
    let radius = radius_of_sorted(&s, cfg, seed)?;
    let (min, max) = (s[0], s[s.len() - 1]);
    let steps = ((max - min) / (radius / cfg.spacing_divisor)).ceil();
    let m = if steps.is_finite() {
        (steps as usize).saturating_add(1)
    } else {
        cfg.grid_max
    }
    .clamp(cfg.grid_min, cfg.grid_max);

    let step = (max - min) / (m - 1) as f64;
    let mut kernels: Vec<f64> = (0..m).map(|i| min + i as f64 * step).collect();
    kernels[m - 1] = max;
    // guard against rounding past the last observation
    for k in kernels.iter_mut() {
        *k = k.min(max);
    }

    let raw: Vec<f64> = kernels
        .iter()
        .map(|&g| count_within(&s, g, radius) as f64)
        .collect();
    let area = trapezoid(&kernels, &raw);
    let densities = raw.into_iter().map(|c| c / area).collect();
    Ok(DensityCurve {
        kernels,
        densities,
        radius,
    })
}

/// Mean share of the sample inside `radius` of each point, the point itself included.
pub fn neighborhood_fraction(values: &[f64], radius: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let s = sorted(values);
    let n = s.len() as f64;
    let total: usize = s.iter().map(|&x| count_within(&s, x, radius)).sum();
    total as f64 / (n * n)
}
