//! Monte Carlo sweeps over generator parameters.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::dip::dip_statistic;
use crate::error::{Error, Result};
use crate::generators::{sample_gauss_mixture, sample_skew_normal, GaussMixSpec, SkewSpec};
use crate::hypothesis::{dagostino_skewness, DipNull};
use crate::rng;
use crate::stats::{quantile, sorted};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// Equal mixture of N(0, 1) and N(m, 1); the sweep moves m; dip test.
    Bimodal,
    /// Standardized skewed normal; the sweep moves xi; D'Agostino test.
    Skew,
}

impl Experiment {
    pub fn default_n(self) -> usize {
        match self {
            Experiment::Bimodal => 31_000,
            Experiment::Skew => 15_000,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Bimodal => "bimodal",
            Experiment::Skew => "skew",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bimodal" => Ok(Experiment::Bimodal),
            "skew" => Ok(Experiment::Skew),
            other => Err(Error::Parse(format!("unknown experiment '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSpec {
    pub experiment: Experiment,
    pub sweep: Vec<f64>,
    pub iterations: usize,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
}

impl BenchSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sweep.is_empty() || self.sweep.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadConfig("sweep must contain finite values".into()));
        }
        if self.iterations == 0 || self.replicates == 0 {
            return Err(Error::BadConfig("iterations and replicates must be positive".into()));
        }
        match self.experiment {
            Experiment::Bimodal if self.n < 2 => Err(Error::TooFewPoints { needed: 2, got: self.n }),
            Experiment::Skew if self.n < 9 => Err(Error::TooFewPoints { needed: 9, got: self.n }),
            Experiment::Skew if self.sweep.iter().any(|&xi| xi <= 0.0) => {
                Err(Error::BadSpec("skew parameter xi must be positive".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchRow {
    pub param: f64,
    pub iteration: usize,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchSummary {
    pub param: f64,
    pub median: f64,
    pub p99: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchResults {
    pub rows: Vec<BenchRow>,
    pub summary: Vec<BenchSummary>,
}

impl BenchResults {
    pub fn median(&self, param: f64) -> Option<f64> {
        self.summary.iter().find(|s| s.param == param).map(|s| s.median)
    }
}

fn sample_seed(seed: u64, experiment: Experiment, param: f64, iteration: usize) -> u64 {
    seed ^ rng::stable_hash(&format!("{experiment}:{param}:{iteration}"))
}

pub fn run_bench(spec: &BenchSpec) -> Result<BenchResults> {
    spec.validate()?;
    let null = match spec.experiment {
        Experiment::Bimodal => Some(DipNull::simulate(
            spec.n,
            spec.replicates,
            spec.seed ^ rng::stable_hash("dip-null"),
        )?),
        Experiment::Skew => None,
    };

    let jobs: Vec<(f64, usize)> = spec
        .sweep
        .iter()
        .flat_map(|&param| (0..spec.iterations).map(move |i| (param, i)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(param, iteration)| {
            let s = sample_seed(spec.seed, spec.experiment, param, iteration);
            let p = match spec.experiment {
                Experiment::Bimodal => {
                    let mix = GaussMixSpec::equal_unit(&[0.0, param])?;
                    let f = sample_gauss_mixture(spec.n, &mix, s);
                    let null = null.as_ref().expect("bimodal null");
                    null.p_value(dip_statistic(f.values())?)
                }
                Experiment::Skew => {
                    let f = sample_skew_normal(spec.n, &SkewSpec::new(param)?, s);
                    dagostino_skewness(f.values())?.p
                }
            };
            Ok(BenchRow { param, iteration, p })
        })
        .collect::<Result<Vec<_>>>()?;

    let summary = spec
        .sweep
        .iter()
        .map(|&param| {
            let ps = sorted(&rows.iter().filter(|r| r.param == param).map(|r| r.p).collect::<Vec<_>>());
            Ok(BenchSummary {
                param,
                median: quantile(&ps, 0.5)?,
                p99: quantile(&ps, 0.99)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchResults { rows, summary })
}

pub fn rows_csv(results: &BenchResults) -> String {
    let mut out = String::from("param,iteration,p\n");
    for r in &results.rows {
        out.push_str(&format!("{},{},{}\n", r.param, r.iteration, r.p));
    }
    out
}

pub fn summary_csv(results: &BenchResults) -> String {
    let mut out = String::from("param,median,p99\n");
    for s in &results.summary {
        out.push_str(&format!("{},{},{}\n", s.param, s.median, s.p99));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_row_per_sweep_value() {
        let spec = BenchSpec {
            experiment: Experiment::Skew,
            sweep: vec![0.9, 1.0, 1.1],
            iterations: 1,
            n: 500,
            replicates: 10,
            seed: 4,
        };
        let r = run_bench(&spec).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.summary.len(), 3);
        assert_eq!(rows_csv(&r).lines().count(), 4);
        assert_eq!(r, run_bench(&spec).unwrap());
    }

    #[test]
    fn validation() {
        let base = BenchSpec {
            experiment: Experiment::Skew,
            sweep: vec![1.0],
            iterations: 1,
            n: 100,
            replicates: 10,
            seed: 0,
        };
        assert!(BenchSpec { sweep: vec![], ..base.clone() }.validate().is_err());
        assert!(BenchSpec { sweep: vec![-1.0], ..base.clone() }.validate().is_err());
        assert!(BenchSpec { iterations: 0, ..base.clone() }.validate().is_err());
        assert!(BenchSpec { n: 5, ..base.clone() }.validate().is_err());
        assert!(base.validate().is_ok());
        assert_eq!("Bimodal".parse::<Experiment>().unwrap(), Experiment::Bimodal);
        assert!("kurtosis".parse::<Experiment>().is_err());
    }
}
