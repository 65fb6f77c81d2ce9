#![no_main]

use finestruct::engine::PlotModel;
use finestruct::render::{render_svg, RenderConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(model) = serde_json::from_slice::<PlotModel>(data) else { return };
    // rendering either refuses the model or produces a document without NaNs
    if let Ok(svg) = render_svg(&model, &RenderConfig::default()) {
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
});
