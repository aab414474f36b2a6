//! Search for a parameter point with a prescribed classification.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{classify, region_bounds, Classification};
use crate::error::{Error, Result};
use crate::fixed_points::eta_thresholds;
use crate::model::ThetaParams;

/// Box in `(theta_tilde, theta1, theta3)` with `theta2` held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub theta_tilde: (f64, f64),
    pub theta1: (f64, f64),
    pub theta3: (f64, f64),
    pub theta2: f64,
}

impl Default for SearchSpace {
    fn default() -> Self {
        SearchSpace {
            theta_tilde: (0.2, 6.0),
            theta1: (0.2, 40.0),
            theta3: (0.05, 5.0),
            theta2: 1.0,
        }
    }
}

impl SearchSpace {
    fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [
            ("theta_tilde", self.theta_tilde),
            ("theta1", self.theta1),
            ("theta3", self.theta3),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
                return Err(Error::InvalidParameter(format!(
                    "search range for {name} must satisfy 0 < lo <= hi"
                )));
            }
        }
        if !(self.theta2.is_finite() && self.theta2 > 0.0) {
            return Err(Error::InvalidParameter("theta2 must be positive".into()));
        }
        Ok(())
    }

    fn point(&self, theta_tilde: f64, theta1: f64, theta3: f64) -> Result<ThetaParams> {
        ThetaParams::new(
            theta_tilde / self.theta2.sqrt(),
            theta1,
            self.theta2,
            theta3,
        )
    }

    fn contains_theta3(&self, theta3: f64) -> bool {
        theta3 >= self.theta3.0 && theta3 <= self.theta3.1
    }
}

fn log_lerp((lo, hi): (f64, f64), x: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * x).exp()
}

struct Budget {
    left: usize,
}

impl Budget {
    fn try_classify(&mut self, t: &ThetaParams) -> Option<Classification> {
        if self.left == 0 {
            return None;
        }
        self.left -= 1;
        Some(classify(t).classification)
    }
}

/// `theta3` values worth trying first at fixed `(theta_tilde, theta1)`.
fn guided_theta3(target: Classification, t: &ThetaParams) -> Vec<f64> {
    match target {
        Classification::FiveSolution => region_bounds(t)
            .theta3_window()
            .map(|(b, c)| vec![(b * c).sqrt()])
            .unwrap_or_default(),
        Classification::SymmetricMulti => eta_thresholds(t)
            .map(|(e1, e2)| vec![(e1 * e2).sqrt()])
            .unwrap_or_default(),
        _ => Vec::new(),
    }
}

/// Number of solutions, of diagonal solutions and of stable solutions.
fn signature(t: &ThetaParams) -> (usize, usize, usize) {
    let p = classify(t);
    (p.total_solutions, p.symmetric_count, p.stable_solutions)
}

/// Moves `theta3` to the middle (in log scale) of the interval around it on
/// which the solution structure stays the same, within `limits`.
fn centre_theta3(t: ThetaParams, limits: (f64, f64), budget: &mut Budget) -> Result<ThetaParams> {
    let reference = signature(&t);
    let mut same = |theta3: f64| -> Result<Option<bool>> {
        if budget.left == 0 {
            return Ok(None);
        }
        budget.left -= 1;
        Ok(Some(signature(&t.with_theta3(theta3)?) == reference))
    };
    let mut edges = [t.theta3; 2];
    for (edge, direction) in edges.iter_mut().zip([-1.0, 1.0]) {
        let (mut inside, mut outside) = (t.theta3, None);
        let mut step = 1.02f64;
        while outside.is_none() {
            let trial = inside * step.powf(direction);
            if trial < limits.0 || trial > limits.1 {
                outside = Some(if direction < 0.0 { limits.0 } else { limits.1 });
                break;
            }
            match same(trial)? {
                Some(true) => inside = trial,
                Some(false) => outside = Some(trial),
                None => break,
            }
            step *= step;
        }
        if let Some(mut out) = outside {
            for _ in 0..30 {
                let mid = (inside * out).sqrt();
                match same(mid)? {
                    Some(true) => inside = mid,
                    Some(false) => out = mid,
                    None => break,
                }
            }
        }
        *edge = inside;
    }
    t.with_theta3((edges[0] * edges[1]).sqrt())
}

/// Deterministic search for a point whose classification is `target`.
///
/// A coarse log grid over `(theta_tilde, theta1)` is tried first, with
/// `theta3` placed inside the analytic window when one exists; then seeded
/// random points. A hit has its `theta3` moved to the middle of the interval
/// with the same solution structure (inside the analytic window for
/// [`Classification::FiveSolution`]) and is re-verified. `budget` caps the number of classifications. `Ok(None)` when
/// nothing is found within budget.
pub fn find_regime(
    target: Classification,
    budget: usize,
    space: &SearchSpace,
    seed: u64,
) -> Result<Option<ThetaParams>> {
    if budget == 0 {
        return Err(Error::InvalidParameter(
            "search budget must be at least 1".into(),
        ));
    }
    space.validate()?;
    let mut budget = Budget { left: budget };
    let mut hit = None;

    const COARSE: usize = 12;
    const THETA3_SAMPLES: usize = 6;
    'coarse: for i in 0..COARSE {
        for j in 0..COARSE {
            let tt = log_lerp(space.theta_tilde, (i as f64 + 0.5) / COARSE as f64);
            let t1 = log_lerp(space.theta1, (j as f64 + 0.5) / COARSE as f64);
            let base = space.point(tt, t1, 1.0)?;
            let mut theta3s = guided_theta3(target, &base);
            theta3s.retain(|&x| space.contains_theta3(x));
            if matches!(target, Classification::Unique | Classification::Other) {
                theta3s.extend(
                    (0..THETA3_SAMPLES)
                        .map(|k| log_lerp(space.theta3, (k as f64 + 0.5) / THETA3_SAMPLES as f64)),
                );
            }
            for theta3 in theta3s {
                let t = base.with_theta3(theta3)?;
                match budget.try_classify(&t) {
                    Some(c) if c == target => {
                        hit = Some(t);
                        break 'coarse;
                    }
                    Some(_) => {}
                    None => break 'coarse,
                }
            }
        }
    }

    if hit.is_none() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while budget.left > 0 {
            let t = space.point(
                log_lerp(space.theta_tilde, rng.gen()),
                log_lerp(space.theta1, rng.gen()),
                log_lerp(space.theta3, rng.gen()),
            )?;
            if budget.try_classify(&t) == Some(target) {
                hit = Some(t);
                break;
            }
        }
    }

    let Some(found) = hit else { return Ok(None) };
    let limits = match target {
        Classification::FiveSolution => region_bounds(&found)
            .theta3_window()
            .filter(|&(b, c)| b < found.theta3 && found.theta3 < c)
            .unwrap_or(space.theta3),
        _ => space.theta3,
    };
    let mut centred = centre_theta3(found, limits, &mut budget)?;
    if signature(&centred) != signature(&found) {
        centred = found;
    }
    // the final answer is always re-checked, budget or not
    Ok((classify(&centred).classification == target).then_some(centred))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unique_is_found_immediately() {
        let t = find_regime(Classification::Unique, 5, &SearchSpace::default(), 0)
            .unwrap()
            .unwrap();
        assert_eq!(classify(&t).classification, Classification::Unique);
    }

    #[test]
    fn five_solution_is_found_and_centred() {
        let t = find_regime(
            Classification::FiveSolution,
            2000,
            &SearchSpace::default(),
            1,
        )
        .unwrap()
        .unwrap();
        let p = classify(&t);
        assert_eq!(p.total_solutions, 5);
        assert_eq!(p.stable_solutions, 3);
        assert_eq!(p.symmetric_count, 3);
        let (b, c) = region_bounds(&t).theta3_window().unwrap();
        assert!(b < t.theta3 && t.theta3 < c);
        // centred: a step a tenth of the way to either edge keeps the structure
        for edge in [b, c] {
            let nearby = t
                .with_theta3(t.theta3 * (edge / t.theta3).powf(0.1))
                .unwrap();
            assert_eq!(signature(&nearby), signature(&t));
        }
    }

    #[test]
    fn decreasing_f_forbids_symmetric_multiplicity() {
        let space = SearchSpace {
            theta_tilde: (0.05, 0.99),
            ..SearchSpace::default()
        };
        assert_eq!(
            find_regime(Classification::SymmetricMulti, 500, &space, 3).unwrap(),
            None
        );
    }

    #[test]
    fn zero_budget_is_rejected() {
        assert!(find_regime(Classification::Unique, 0, &SearchSpace::default(), 0).is_err());
    }
}
