//! The dip computed by the minorant/majorant iteration is checked against a
//! direct linear-programming minimization over unimodal distribution
//! functions that are piecewise linear between the observations.

use finestruct::dip::dip_statistic;
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use proptest::prelude::*;

/// Smallest sup-distance between the empirical CDF of sorted distinct `x`
/// and a continuous unimodal CDF whose steepest segment is `peak`.
fn lp_dip_with_peak(x: &[f64], peak: usize) -> Option<f64> {
    let n = x.len();
    let nf = n as f64;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let t = lp.add_var(1.0, (0.0, 1.0));
    let g: Vec<_> = (0..n).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    for (i, &gi) in g.iter().enumerate() {
        // both one-sided limits of the empirical CDF at x[i]
        for level in [i as f64 / nf, (i + 1) as f64 / nf] {
            lp.add_constraint([(gi, 1.0), (t, -1.0)], ComparisonOp::Le, level);
            lp.add_constraint([(gi, 1.0), (t, 1.0)], ComparisonOp::Ge, level);
        }
    }
    for i in 0..n - 1 {
        lp.add_constraint([(g[i + 1], 1.0), (g[i], -1.0)], ComparisonOp::Ge, 0.0);
    }
    for i in 0..n.saturating_sub(2) {
        let (a, b) = (1.0 / (x[i + 1] - x[i]), 1.0 / (x[i + 2] - x[i + 1]));
        // slope(i+1) - slope(i)
        let diff = [(g[i + 2], b), (g[i + 1], -b - a), (g[i], a)];
        let op = if i < peak { ComparisonOp::Ge } else { ComparisonOp::Le };
        lp.add_constraint(diff, op, 0.0);
    }
    lp.solve().ok().map(|s| s.objective())
}

fn lp_dip(values: &[f64]) -> f64 {
    let mut x = values.to_vec();
    x.sort_by(f64::total_cmp);
    (0..x.len() - 1)
        .filter_map(|k| lp_dip_with_peak(&x, k))
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn oracle_reproduces_hand_examples() {
    assert!((lp_dip(&[0.0, 1.0]) - 0.25).abs() < 1e-9);
    assert!((lp_dip(&[1.0, 2.0, 3.0, 4.0, 5.0]) - 0.1).abs() < 1e-9);
    assert_eq!(dip_statistic(&[0.0, 1.0]).unwrap(), 0.25);
    assert!((dip_statistic(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap() - 0.1).abs() < 1e-15);
}

#[test]
fn clustered_sample_matches_oracle() {
    let v = [0.0, 0.1, 0.2, 0.3, 5.0, 5.1, 5.2, 5.3];
    let d = dip_statistic(&v).unwrap();
    assert!((d - lp_dip(&v)).abs() < 1e-7, "{d} vs {}", lp_dip(&v));
}

fn distinct(v: Vec<f64>) -> Vec<f64> {
    let mut v = v;
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_lp_oracle(raw in prop::collection::vec(0.0f64..100.0, 2..12)) {
        let v = distinct(raw);
        prop_assume!(v.len() >= 2);
        let d = dip_statistic(&v).unwrap();
        let o = lp_dip(&v);
        prop_assert!((d - o).abs() < 1e-7, "algorithm {} oracle {} for {:?}", d, o, v);
    }
}
