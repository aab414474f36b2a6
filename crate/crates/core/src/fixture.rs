//! Regression fixtures: a parameter point together with its full fixed-point set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_points::{all_fixed_points, Branch, Stability};
use crate::model::{ModelParams, ThetaParams};
use crate::phase::{classify, Classification};
use crate::recursion::RatioPoint;

pub const FIXTURE_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixtureFixedPoint {
    pub u: f64,
    pub v: f64,
    pub branch: Branch,
    pub stability: Stability,
}

impl FixtureFixedPoint {
    pub fn point(&self) -> RatioPoint {
        RatioPoint {
            u: self.u,
            v: self.v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub schema: u32,
    /// How the point was obtained.
    pub provenance: String,
    pub thetas: ThetaParams,
    /// Couplings reproducing `thetas` at `beta = 1`.
    pub couplings: ModelParams,
    pub classification: Classification,
    pub total_solutions: usize,
    pub stable_solutions: usize,
    pub fixed_points: Vec<FixtureFixedPoint>,
}

impl Fixture {
    pub fn build(thetas: &ThetaParams, provenance: impl Into<String>) -> Fixture {
        let phase = classify(thetas);
        Fixture {
            schema: FIXTURE_SCHEMA,
            provenance: provenance.into(),
            thetas: *thetas,
            couplings: ModelParams::from_thetas(thetas),
            classification: phase.classification,
            total_solutions: phase.total_solutions,
            stable_solutions: phase.stable_solutions,
            fixed_points: all_fixed_points(thetas)
                .into_iter()
                .map(|f| FixtureFixedPoint {
                    u: f.point.u,
                    v: f.point.v,
                    branch: f.branch,
                    stability: f.stability,
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Fixture> {
        let fixture: Fixture =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if fixture.schema != FIXTURE_SCHEMA {
            return Err(Error::Parse(format!(
                "fixture schema {} is not {FIXTURE_SCHEMA}",
                fixture.schema
            )));
        }
        fixture.couplings.validate()?;
        if fixture.fixed_points.len() != fixture.total_solutions
            || fixture.stable_solutions > fixture.total_solutions
        {
            return Err(Error::Parse("fixture counts are inconsistent".into()));
        }
        for p in &fixture.fixed_points {
            RatioPoint::new(p.u, p.v)?;
        }
        Ok(fixture)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixtures serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let t = ThetaParams::new(3.0, 5.0, 1.0, 0.84).unwrap();
        let f = Fixture::build(&t, "test");
        assert_eq!(f.total_solutions, 5);
        let back = Fixture::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn rejects_malformed() {
        assert!(Fixture::from_json("{}").is_err());
        let t = ThetaParams::trivial();
        let mut f = Fixture::build(&t, "test");
        f.schema = 2;
        assert!(Fixture::from_json(&f.to_json()).is_err());
        let mut f = Fixture::build(&t, "test");
        f.total_solutions = 3;
        assert!(Fixture::from_json(&f.to_json()).is_err());
        let text = Fixture::build(&t, "test")
            .to_json()
            .replace("\"theta3\": 1.0", "\"theta3\": -1.0");
        assert!(Fixture::from_json(&text).is_err());
    }
}
