//! Classification of parameter points by their fixed-point structure, and
//! the scans and searches built on it.

mod bracket;
mod grid;
mod search;
mod verify;

use serde::{Deserialize, Serialize};

use crate::fixed_points::{
    all_fixed_points, eta_thresholds, s_star, single_root_threshold, theta1_star, theta1_star_star,
    two_root_threshold, Branch, Stability,
};
use crate::model::ThetaParams;

pub use bracket::{critical_beta_bracket, CriticalBracket, MAX_BISECTIONS};
pub use grid::{scan, scan_with_progress, Axis, AxisSpec, GridSpec, ParamBase, MAX_GRID_NODES};
pub use search::{find_regime, SearchSpace};
pub use verify::{verify, VerifyReport, VERIFY_THRESHOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// One fixed point.
    Unique,
    /// Three fixed points, all on the diagonal.
    SymmetricMulti,
    /// Five fixed points.
    FiveSolution,
    Other,
}

impl std::str::FromStr for Classification {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "unique" => Ok(Classification::Unique),
            "symmetric-multi" => Ok(Classification::SymmetricMulti),
            "five-solution" => Ok(Classification::FiveSolution),
            "other" => Ok(Classification::Other),
            other => Err(crate::Error::Parse(format!(
                "unknown classification `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Unique => "unique",
            Classification::SymmetricMulti => "symmetric-multi",
            Classification::FiveSolution => "five-solution",
            Classification::Other => "other",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub thetas: ThetaParams,
    pub total_solutions: usize,
    pub stable_solutions: usize,
    pub symmetric_count: usize,
    pub classification: Classification,
}

pub fn classify(t: &ThetaParams) -> PhasePoint {
    let fps = all_fixed_points(t);
    let total = fps.len();
    let stable = fps
        .iter()
        .filter(|f| f.stability == Stability::Stable)
        .count();
    let symmetric = fps.iter().filter(|f| f.branch == Branch::Symmetric).count();
    let classification = match total {
        1 => Classification::Unique,
        3 if symmetric == 3 => Classification::SymmetricMulti,
        5 => Classification::FiveSolution,
        _ => Classification::Other,
    };
    PhasePoint {
        thetas: *t,
        total_solutions: total,
        stable_solutions: stable,
        symmetric_count: symmetric,
        classification,
    }
}

/// Thresholds delimiting the five-solution region, each `None` where its
/// construction does not apply (the reason is kept in `missing`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionBounds {
    pub theta1_star: f64,
    pub theta1_star_star: Option<f64>,
    pub eta1: Option<f64>,
    pub eta2: Option<f64>,
    pub single_root_threshold: Option<f64>,
    pub two_root_threshold: Option<f64>,
    pub s_star: Option<f64>,
    /// `max(theta1*, theta1**)`.
    pub a_bound: Option<f64>,
    /// `max(eta1, single_root_threshold)`.
    pub b_bound: Option<f64>,
    /// `min(eta2, two_root_threshold)`.
    pub c_bound: Option<f64>,
    pub missing: Vec<String>,
}

impl RegionBounds {
    /// `(B, C)` when it is a nonempty interval.
    pub fn theta3_window(&self) -> Option<(f64, f64)> {
        match (self.b_bound, self.c_bound) {
            (Some(b), Some(c)) if b < c => Some((b, c)),
            _ => None,
        }
    }
}

pub fn region_bounds(t: &ThetaParams) -> RegionBounds {
    let mut missing = Vec::new();
    let mut keep = |name: &str, r: crate::Result<f64>| match r {
        Ok(v) => Some(v),
        Err(e) => {
            missing.push(format!("{name}: {e}"));
            None
        }
    };
    let star = theta1_star(t);
    let star_star = keep("theta1_star_star", theta1_star_star(t));
    let eta1 = keep("eta", eta_thresholds(t).map(|e| e.0));
    let eta2 = eta_thresholds(t).ok().map(|e| e.1);
    let single = keep("single_root_threshold", single_root_threshold(t));
    let two = keep("two_root_threshold", two_root_threshold(t));
    let ss = keep("s_star", s_star(t));
    let a_bound = star_star.map(|x| x.max(star));
    let b_bound = match (eta1, single) {
        (Some(e), Some(s)) => Some(e.max(s)),
        _ => None,
    };
    let c_bound = match (eta2, two) {
        (Some(e), Some(k)) => Some(e.min(k)),
        _ => None,
    };
    RegionBounds {
        theta1_star: star,
        theta1_star_star: star_star,
        eta1,
        eta2,
        single_root_threshold: single,
        two_root_threshold: two,
        s_star: ss,
        a_bound,
        b_bound,
        c_bound,
        missing,
    }
}
