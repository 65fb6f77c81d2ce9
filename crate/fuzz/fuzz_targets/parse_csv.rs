#![no_main]

use finestruct::ingest::parse_csv;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(table) = parse_csv(data) {
        for f in &table.features {
            assert_eq!(f.len() + f.missing_count, table.rows);
            assert!(f.values().iter().all(|v| v.is_finite()));
        }
        let diags = table.diagnostics();
        assert_eq!(diags.len(), table.features.len());
    }
});
