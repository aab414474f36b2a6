//! Rectangular parameter grids and the scan over them.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classify, PhasePoint};
use crate::error::{Error, Result};
use crate::model::{thetas_from, ModelParams, ThetaParams};

/// Upper limit on the number of nodes in one grid.
pub const MAX_GRID_NODES: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Theta,
    Theta1,
    Theta2,
    Theta3,
    J,
    J1,
    J2,
    H,
    Beta,
}

impl Axis {
    pub fn is_theta(self) -> bool {
        matches!(
            self,
            Axis::Theta | Axis::Theta1 | Axis::Theta2 | Axis::Theta3
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Theta => "theta",
            Axis::Theta1 => "theta1",
            Axis::Theta2 => "theta2",
            Axis::Theta3 => "theta3",
            Axis::J => "J",
            Axis::J1 => "J1",
            Axis::J2 => "J2",
            Axis::H => "h",
            Axis::Beta => "beta",
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "theta" => Axis::Theta,
            "theta1" => Axis::Theta1,
            "theta2" => Axis::Theta2,
            "theta3" => Axis::Theta3,
            "j" => Axis::J,
            "j1" => Axis::J1,
            "j2" => Axis::J2,
            "h" => Axis::H,
            "beta" => Axis::Beta,
            other => return Err(Error::InvalidGrid(format!("unknown axis `{other}`"))),
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `steps` evenly spaced values from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn value(&self, k: usize) -> f64 {
        if self.steps == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.steps - 1) as f64
        }
    }

    fn validate(&self) -> Result<()> {
        let name = self.axis.name();
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidGrid(format!("{name}: bounds must be finite")));
        }
        if self.steps == 0 {
            return Err(Error::InvalidGrid(format!(
                "{name}: steps must be at least 1"
            )));
        }
        if self.min > self.max {
            return Err(Error::InvalidGrid(format!("{name}: min exceeds max")));
        }
        if (self.axis.is_theta() || self.axis == Axis::Beta) && self.min <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "{name}: bounds must be positive"
            )));
        }
        Ok(())
    }
}

/// Grid over either theta space or coupling space, first axis slowest.
///
/// Text form: `axis=min:max:steps` entries separated by commas, for example
/// `theta1=1:10:10,theta3=0.5:1.5:101`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<AxisSpec>,
}

impl GridSpec {
    pub fn new(axes: Vec<AxisSpec>) -> Result<Self> {
        let grid = GridSpec { axes };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::InvalidGrid("no axes".into()));
        }
        let theta_space = self.axes[0].axis.is_theta();
        for (i, a) in self.axes.iter().enumerate() {
            a.validate()?;
            if a.axis.is_theta() != theta_space {
                return Err(Error::InvalidGrid(
                    "theta axes and coupling axes cannot be mixed".into(),
                ));
            }
            if self.axes[..i].iter().any(|b| b.axis == a.axis) {
                return Err(Error::InvalidGrid(format!(
                    "axis {} repeated",
                    a.axis.name()
                )));
            }
        }
        self.node_count()?;
        Ok(())
    }

    pub fn is_theta_space(&self) -> bool {
        self.axes.first().is_some_and(|a| a.axis.is_theta())
    }

    pub fn node_count(&self) -> Result<usize> {
        self.axes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.steps))
            .filter(|&n| n <= MAX_GRID_NODES)
            .ok_or_else(|| Error::InvalidGrid(format!("more than {MAX_GRID_NODES} nodes")))
    }

    /// Axis values at node `index` in row-major order.
    fn node_values(&self, mut index: usize) -> Vec<(Axis, f64)> {
        let mut out = vec![(Axis::Theta, 0.0); self.axes.len()];
        for (slot, a) in out.iter_mut().zip(&self.axes).rev() {
            *slot = (a.axis, a.value(index % a.steps));
            index /= a.steps;
        }
        out
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut axes = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, range) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidGrid(format!("`{part}` is not axis=min:max:steps")))?;
            let fields: Vec<&str> = range.split(':').map(str::trim).collect();
            let [min, max, steps] = fields[..] else {
                return Err(Error::InvalidGrid(format!(
                    "`{part}` is not axis=min:max:steps"
                )));
            };
            let num = |x: &str| {
                x.parse::<f64>()
                    .map_err(|_| Error::InvalidGrid(format!("`{x}` is not a number")))
            };
            axes.push(AxisSpec {
                axis: name.parse()?,
                min: num(min)?,
                max: num(max)?,
                steps: steps
                    .parse()
                    .map_err(|_| Error::InvalidGrid(format!("`{steps}` is not a step count")))?,
            });
        }
        GridSpec::new(axes)
    }
}

/// Inverse of the parser; `{:?}` keeps every float exact.
impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.axes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}={:?}:{:?}:{}", a.axis, a.min, a.max, a.steps)?;
        }
        Ok(())
    }
}

/// Values of the parameters not on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamBase {
    Thetas(ThetaParams),
    Model(ModelParams),
}

impl ParamBase {
    fn thetas_at(&self, grid: &GridSpec, values: &[(Axis, f64)]) -> Result<ThetaParams> {
        if grid.is_theta_space() {
            let mut t = match self {
                ParamBase::Thetas(t) => *t,
                ParamBase::Model(m) => thetas_from(m)?,
            };
            for &(axis, v) in values {
                match axis {
                    Axis::Theta => t.theta = v,
                    Axis::Theta1 => t.theta1 = v,
                    Axis::Theta2 => t.theta2 = v,
                    _ => t.theta3 = v,
                }
            }
            ThetaParams::new(t.theta, t.theta1, t.theta2, t.theta3)
        } else {
            let mut m = match self {
                ParamBase::Model(m) => *m,
                ParamBase::Thetas(t) => ModelParams::from_thetas(t),
            };
            for &(axis, v) in values {
                match axis {
                    Axis::J => m.j = v,
                    Axis::J1 => m.j1 = v,
                    Axis::J2 => m.j2 = v,
                    Axis::H => m.h = v,
                    _ => m.beta = v,
                }
            }
            thetas_from(&m)
        }
    }
}

pub fn scan(base: &ParamBase, grid: &GridSpec) -> Result<Vec<PhasePoint>> {
    scan_with_progress(base, grid, |_, _| {})
}

/// Classifies every node; results come back in grid order whatever the
/// completion order. `progress(done, total)` is called from worker threads.
pub fn scan_with_progress<F>(
    base: &ParamBase,
    grid: &GridSpec,
    progress: F,
) -> Result<Vec<PhasePoint>>
where
    F: Fn(usize, usize) + Sync,
{
    grid.validate()?;
    let total = grid.node_count()?;
    // resolve every node first so parameter errors surface before any work
    let thetas: Vec<ThetaParams> = (0..total)
        .map(|i| base.thetas_at(grid, &grid.node_values(i)))
        .collect::<Result<_>>()?;
    let done = AtomicUsize::new(0);
    Ok(thetas
        .par_iter()
        .map(|t| {
            let p = classify(t);
            progress(done.fetch_add(1, Ordering::Relaxed) + 1, total);
            p
        })
        .collect())
}
