#![no_main]

use libfuzzer_sys::fuzz_target;
use potts_core::Fixture;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(fixture) = Fixture::from_json(text) {
        let back = Fixture::from_json(&fixture.to_json()).expect("serialized fixture re-parses");
        assert_eq!(back, fixture);
    }
});
