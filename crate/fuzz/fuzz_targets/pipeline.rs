#![no_main]

use finestruct::engine::{build_plot_model, EngineConfig};
use finestruct::ingest::parse_csv;
use finestruct::render::{render_svg, RenderConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(table) = parse_csv(data) else { return };
    let cfg = EngineConfig { replicates: 20, min_data: 12, ..EngineConfig::default() };
    let Ok(model) = build_plot_model(&table.features, &cfg) else { return };
    // every model the engine builds must pass its own structural checks
    model.validate().unwrap();
    render_svg(&model, &RenderConfig::default()).unwrap();
});
