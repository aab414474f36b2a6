//! Bisection in `beta` for a change in the number of fixed points.

use serde::{Deserialize, Serialize};

use super::classify;
use crate::error::{Error, Result};
use crate::model::{thetas_from, ModelParams};

/// Hard cap on bisection steps.
pub const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalBracket {
    pub beta_low: f64,
    pub beta_high: f64,
    pub count_low: usize,
    pub count_high: usize,
    pub bisections: usize,
}

fn count_at(params: &ModelParams, beta: f64) -> Result<usize> {
    Ok(classify(&thetas_from(&params.with_beta(beta))?).total_solutions)
}

/// Narrows `[beta_low, beta_high]` to width `width` keeping a change in the
/// total number of fixed points inside. `params.beta` is ignored.
pub fn critical_beta_bracket(
    params: &ModelParams,
    beta_low: f64,
    beta_high: f64,
    width: f64,
) -> Result<CriticalBracket> {
    if !(beta_low.is_finite() && beta_high.is_finite() && 0.0 < beta_low && beta_low < beta_high) {
        return Err(Error::InvalidParameter(format!(
            "beta range [{beta_low}, {beta_high}] must satisfy 0 < low < high"
        )));
    }
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::InvalidTolerance(width));
    }
    params.with_beta(beta_low).validate()?;
    let (mut lo, mut hi) = (beta_low, beta_high);
    let (count_low, count_high) = (count_at(params, lo)?, count_at(params, hi)?);
    if count_low == count_high {
        return Err(Error::NoTransition {
            beta_low,
            beta_high,
        });
    }
    let mut bisections = 0;
    while hi - lo > width && bisections < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_at(params, mid)? == count_low {
            lo = mid;
        } else {
            hi = mid;
        }
        bisections += 1;
    }
    Ok(CriticalBracket {
        beta_low: lo,
        beta_high: hi,
        count_low,
        count_high: count_at(params, hi)?,
        bisections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_couplings_never_transition() {
        let p = ModelParams::new(0.0, 0.0, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            critical_beta_bracket(&p, 0.1, 5.0, 1e-6),
            Err(Error::NoTransition { .. })
        ));
    }

    #[test]
    fn rejects_bad_ranges() {
        let p = ModelParams::new(1.0, 1.0, 0.0, 0.0, 1.0).unwrap();
        assert!(critical_beta_bracket(&p, 1.0, 0.5, 1e-6).is_err());
        assert!(critical_beta_bracket(&p, 0.0, 0.5, 1e-6).is_err());
        assert!(critical_beta_bracket(&p, 0.1, 0.5, 0.0).is_err());
    }

    #[test]
    fn brackets_a_count_change() {
        // theta~ = 3, theta1 = 5, theta3 = 0.84 at beta = 1: five solutions
        let p = ModelParams::new(3f64.ln(), 5f64.ln(), 0.0, 0.84f64.ln(), 1.0).unwrap();
        let b = critical_beta_bracket(&p, 0.05, 1.0, 1e-6).unwrap();
        assert!(b.beta_high - b.beta_low <= 1e-6);
        assert!(b.bisections <= 40);
        assert_eq!(b.count_low, 1);
        assert_ne!(b.count_low, b.count_high);
    }
}
