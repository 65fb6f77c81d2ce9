//! Sampling-oracle checks for the hypothesis tests on generated data.

use finestruct::dip::dip_statistic;
use finestruct::generators::{sample_gauss_mixture, sample_uniform, GaussMixSpec};
use finestruct::hypothesis::{dagostino_skewness, gaussian_gate, gaussian_gate_with, DipNull};

#[test]
fn uniform_null_is_calibrated() {
    let null = DipNull::simulate(1000, 2000, 401).unwrap();
    let rejected = (0..200u64)
        .filter(|&s| {
            let f = sample_uniform(1000, 0.0, 1.0, 5000 + s).unwrap();
            null.p_value(dip_statistic(f.values()).unwrap()) < 0.05
        })
        .count();
    let rate = rejected as f64 / 200.0;
    assert!((0.01..=0.10).contains(&rate), "rejection rate {rate}");
}

#[test]
fn normal_samples_usually_pass_the_gate() {
    let spec = GaussMixSpec::equal_unit(&[0.0]).unwrap();
    let null = DipNull::simulate(15_500, 2000, 402).unwrap();
    let passed = (0..100u64)
        .filter(|&s| gaussian_gate_with(&sample_gauss_mixture(15_500, &spec, 6000 + s), 0.05, &null).unwrap().0)
        .count();
    assert!(passed >= 95, "overlay in {passed}/100 runs");
}

#[test]
fn bimodal_mixture_fails_the_gate() {
    let f = sample_gauss_mixture(31_000, &GaussMixSpec::equal_unit(&[0.0, 2.5]).unwrap(), 403);
    let (overlay, report) = gaussian_gate(&f, 0.05, 1000, 403).unwrap();
    assert!(!overlay);
    assert!(report.dip_p < 0.05);
    assert!(report.skew_p.is_finite());
}

#[test]
fn z_sign_follows_g1() {
    for s in 0..50u64 {
        let spec: GaussMixSpec = format!("0:1:0.7,{}:1:0.3", 1.0 + s as f64 / 10.0).parse().unwrap();
        let f = sample_gauss_mixture(200, &spec, s);
        let t = dagostino_skewness(f.values()).unwrap();
        assert_eq!(t.z.signum(), t.g1.signum());
    }
}
