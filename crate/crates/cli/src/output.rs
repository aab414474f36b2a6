use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

use potts_core::fixed_points::FixedPoint;
use potts_core::PhasePoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub const SCHEMA: u32 = 1;

pub const SCAN_COLUMNS: &str = "theta,theta1,theta2,theta3,total,stable,symmetric,class";

/// `{"schema": 1, "command": ..., <fields of body>}`.
pub fn envelope(command: &str, body: impl Serialize) -> Value {
    let mut map = Map::new();
    map.insert("schema".into(), json!(SCHEMA));
    map.insert("command".into(), json!(command));
    match serde_json::to_value(body).expect("output serializes") {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("result".into(), other);
        }
    }
    Value::Object(map)
}

/// Shortest round-trip form, identical to the JSON output.
fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite numbers serialize")
}

pub fn scan_csv(points: &[PhasePoint]) -> String {
    let mut out = String::from(SCAN_COLUMNS);
    out.push('\n');
    for p in points {
        let t = &p.thetas;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            num(t.theta),
            num(t.theta1),
            num(t.theta2),
            num(t.theta3),
            p.total_solutions,
            p.stable_solutions,
            p.symmetric_count,
            p.classification
        )
        .unwrap();
    }
    out
}

pub fn fixpoints_csv(points: &[FixedPoint]) -> String {
    let mut out = String::from("u,v,branch,residual,spectral_radius,stability\n");
    for f in points {
        let branch = serde_json::to_value(f.branch).unwrap();
        let stability = serde_json::to_value(f.stability).unwrap();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            num(f.point.u),
            num(f.point.v),
            branch.as_str().unwrap(),
            num(f.residual),
            num(f.spectral_radius),
            stability.as_str().unwrap()
        )
        .unwrap();
    }
    out
}
