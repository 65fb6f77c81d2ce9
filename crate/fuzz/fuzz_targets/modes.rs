#![no_main]

use finestruct::engine::FeatureOrdering;
use finestruct::stats::ScalingMode;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|s: &str| {
    if let Ok(m) = s.parse::<ScalingMode>() {
        assert_eq!(m.to_string().parse::<ScalingMode>().unwrap(), m);
    }
    if let Ok(o) = s.parse::<FeatureOrdering>() {
        assert_eq!(o.to_string().parse::<FeatureOrdering>().unwrap(), o);
    }
});
