#![no_main]

use finestruct::generators::{sample_gauss_mixture, GaussMixSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(spec) = s.parse::<GaussMixSpec>() {
        let total: f64 = spec.components().iter().map(|c| c.weight).sum();
        assert!((total - 1.0).abs() <= 1e-12);
        assert!(spec.components().iter().all(|c| c.sd > 0.0));
        let f = sample_gauss_mixture(16, &spec, 0);
        assert_eq!(f.len() + f.missing_count, 16);
    }
});
