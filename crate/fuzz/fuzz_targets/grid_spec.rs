#![no_main]

use libfuzzer_sys::fuzz_target;
use potts_core::phase::GridSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = text.parse::<GridSpec>() {
        // accepted specs must stay within the node cap and re-parse from Display
        let nodes = spec.node_count().expect("validated grid has a node count");
        assert!(nodes <= potts_core::phase::MAX_GRID_NODES);
        let again: GridSpec = spec.to_string().parse().expect("display re-parses");
        assert_eq!(again, spec);
    }
});
