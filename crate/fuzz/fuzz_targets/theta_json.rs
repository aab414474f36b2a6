#![no_main]

use libfuzzer_sys::fuzz_target;
use potts_core::{classify, ThetaParams};

fuzz_target!(|data: &[u8]| {
    let Ok(t) = serde_json::from_slice::<ThetaParams>(data) else {
        return;
    };
    // deserialization goes through the validating constructor
    assert!([t.theta, t.theta1, t.theta2, t.theta3]
        .iter()
        .all(|x| x.is_finite() && *x > 0.0));
    let p = classify(&t);
    assert!(p.stable_solutions <= p.total_solutions);
    assert!(p.symmetric_count <= p.total_solutions);
});
