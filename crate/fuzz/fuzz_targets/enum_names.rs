#![no_main]

use libfuzzer_sys::fuzz_target;
use potts_core::phase::Axis;
use potts_core::{BoundarySpec, Classification, TripleDeltaVariant};

fn round_trip<T>(text: &str)
where
    T: std::str::FromStr + std::fmt::Display + PartialEq + std::fmt::Debug,
{
    if let Ok(value) = text.parse::<T>() {
        let again: T = value.to_string().parse().ok().expect("display re-parses");
        assert_eq!(again, value);
    }
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    round_trip::<BoundarySpec>(text);
    round_trip::<TripleDeltaVariant>(text);
    round_trip::<Classification>(text);
    round_trip::<Axis>(text);
});
