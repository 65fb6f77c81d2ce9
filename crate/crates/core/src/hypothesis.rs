//! Monte Carlo dip test and the D'Agostino skewness test.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::dip::{dip_of_sorted, dip_statistic};
use crate::error::{Error, Result};
use crate::rng;
use crate::stats::{central_moments, FeatureSeries};

pub const DEFAULT_REPLICATES: usize = 2000;

/// Sorted dip values of `B` uniform samples of size `n`.
///
/// Replicate `b` draws from stream `b` under `seed`, so the table does not
/// depend on thread scheduling. Build once and reuse across many statistics
/// that share `(n, B, seed)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DipNull {
    n: usize,
    seed: u64,
    dips: Vec<f64>,
}

impl DipNull {
    pub fn simulate(n: usize, replicates: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: n });
        }
        if replicates == 0 {
            return Err(Error::BadConfig("need at least one replicate".into()));
        }
        let mut dips: Vec<f64> = (0..replicates as u64)
            .into_par_iter()
            .map(|b| {
                let mut r = rng::stream(seed, b);
                let mut u: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
                u.sort_unstable_by(f64::total_cmp);
                dip_of_sorted(&u)
            })
            .collect();
        dips.sort_unstable_by(f64::total_cmp);
        Ok(Self { n, seed, dips })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicates(&self) -> usize {
        self.dips.len()
    }

    /// Add-one estimate `(1 + #{dip_b >= d}) / (B + 1)`.
    pub fn p_value(&self, d: f64) -> f64 {
        let below = self.dips.partition_point(|&x| x < d);
        let at_or_above = self.dips.len() - below;
        (1 + at_or_above) as f64 / (self.dips.len() + 1) as f64
    }
}

pub fn dip_pvalue_mc(d: f64, n: usize, replicates: usize, seed: u64) -> Result<f64> {
    Ok(DipNull::simulate(n, replicates, seed)?.p_value(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkewnessTest {
    pub g1: f64,
    pub z: f64,
    pub p: f64,
}

/// Two-sided standard-normal tail probability.
pub fn two_sided_normal_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0)
}

pub fn dagostino_skewness(values: &[f64]) -> Result<SkewnessTest> {
    let n = values.len();
    if n < 9 {
        return Err(Error::TooFewPoints { needed: 9, got: n });
    }
    let (_, m2, m3, _) = central_moments(values);
    if m2 <= 0.0 {
        return Err(Error::ConstantFeature);
    }
    let g1 = m3 / m2.powf(1.5);
    let nf = n as f64;
    let y = g1 * ((nf + 1.0) * (nf + 3.0) / (6.0 * (nf - 2.0))).sqrt();
    let beta2 = 3.0 * (nf * nf + 27.0 * nf - 70.0) * (nf + 1.0) * (nf + 3.0)
        / ((nf - 2.0) * (nf + 5.0) * (nf + 7.0) * (nf + 9.0));
    let w2 = -1.0 + (2.0 * (beta2 - 1.0)).sqrt();
    let delta = 1.0 / (0.5 * w2.ln()).sqrt();
    let alpha = (2.0 / (w2 - 1.0)).sqrt();
    let z = delta * (y / alpha).asinh();
    Ok(SkewnessTest {
        g1,
        z,
        p: two_sided_normal_p(z),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub n: usize,
    pub dip_d: f64,
    pub dip_p: f64,
    pub dip_replicates: usize,
    pub skew_g1: f64,
    pub skew_z: f64,
    pub skew_p: f64,
    pub seed: u64,
}

/// Runs both tests against a prebuilt null table.
pub fn test_report_with(values: &[f64], null: &DipNull) -> Result<TestReport> {
    if values.len() != null.n() {
        return Err(Error::BadConfig(format!(
            "null table built for n = {}, sample has {}",
            null.n(),
            values.len()
        )));
    }
    let skew = dagostino_skewness(values)?;
    let dip_d = dip_statistic(values)?;
    Ok(TestReport {
        n: values.len(),
        dip_d,
        dip_p: null.p_value(dip_d),
        dip_replicates: null.replicates(),
        skew_g1: skew.g1,
        skew_z: skew.z,
        skew_p: skew.p,
        seed: null.seed(),
    })
}

pub fn test_report(values: &[f64], replicates: usize, seed: u64) -> Result<TestReport> {
    // fail fast on the cheap checks before simulating the null
    dagostino_skewness(values)?;
    let null = DipNull::simulate(values.len(), replicates, seed)?;
    test_report_with(values, &null)
}

/// Both tests must fail to reject at level `alpha` for the overlay to be drawn.
pub fn gate_passes(report: &TestReport, alpha: f64) -> bool {
    report.dip_p >= alpha && report.skew_p >= alpha
}

pub fn gaussian_gate(f: &FeatureSeries, alpha: f64, replicates: usize, seed: u64) -> Result<(bool, TestReport)> {
    let report = test_report(f.values(), replicates, seed)?;
    Ok((gate_passes(&report, alpha), report))
}

pub fn gaussian_gate_with(f: &FeatureSeries, alpha: f64, null: &DipNull) -> Result<(bool, TestReport)> {
    let report = test_report_with(f.values(), null)?;
    Ok((gate_passes(&report, alpha), report))
}
