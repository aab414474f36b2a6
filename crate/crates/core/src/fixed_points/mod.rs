//! Fixed points of the ratio map: the symmetric branch, the `s`-`t`
//! reduction for `u != v`, stability, and an independent Newton solver.

pub mod asymmetric;
pub mod newton;
pub mod stability;
pub mod symmetric;

use serde::{Deserialize, Serialize};

use crate::model::ThetaParams;
use crate::recursion::RatioPoint;

pub use asymmetric::{
    asymmetric_s_roots, k0_slope, recover_uv, s_quadratic, s_star, single_root_threshold,
    st_points, t_from_s_division, t_from_s_ratio, t_from_s_ratio_as_printed, two_root_threshold,
    LineParabola, StPoint,
};
pub use newton::{multistart_newton, newton_solve, NewtonOptions};
pub use stability::{
    jacobian, spectral_radius, stability_of, system_residual, Stability, STABILITY_MARGIN,
};
pub use symmetric::{
    eta_thresholds, f_parts, f_prime, f_prime_numerator, f_second, f_second_numerator, f_symmetric,
    inflection_point, quartic_coefficients, solve_symmetric, symmetric_analysis, symmetric_cubic,
    symmetric_solution_count, tangency_roots, theta1_star, theta1_star_star, Quartic,
    SymmetricAnalysis,
};

/// Largest residual of a point returned by [`all_fixed_points`].
pub const RESIDUAL_BOUND: f64 = 1e-9;

/// Relative distance below which two fixed points are merged.
pub const MERGE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Symmetric,
    Asymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: RatioPoint,
    pub branch: Branch,
    pub residual: f64,
    pub spectral_radius: f64,
    pub stability: Stability,
}

/// A few Newton steps with the closed-form Jacobian; keeps the start if they do not help.
fn polish(p: RatioPoint, t: &ThetaParams) -> RatioPoint {
    let mut best = p;
    let mut best_res = system_residual(&p, t);
    let mut x = p;
    for _ in 0..4 {
        let m = jacobian(&x, t);
        let step = crate::recursion::ratio_step(&x, t);
        let g = [step.u - x.u, step.v - x.v];
        // solve (M - I) dx = -g
        let a = [[m[0][0] - 1.0, m[0][1]], [m[1][0], m[1][1] - 1.0]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if !det.is_finite() || det == 0.0 {
            break;
        }
        let du = -(a[1][1] * g[0] - a[0][1] * g[1]) / det;
        let dv = -(-a[1][0] * g[0] + a[0][0] * g[1]) / det;
        let next = RatioPoint {
            u: x.u + du,
            v: x.v + dv,
        };
        if !(next.u > 0.0 && next.v > 0.0) {
            break;
        }
        let res = system_residual(&next, t);
        if res < best_res {
            best = next;
            best_res = res;
        }
        x = next;
    }
    best
}

fn make(point: RatioPoint, branch: Branch, t: &ThetaParams) -> Option<FixedPoint> {
    let residual = system_residual(&point, t);
    if residual.is_nan() || residual >= RESIDUAL_BOUND {
        return None;
    }
    let (spectral_radius, stability) = stability_of(&point, t).ok()?;
    Some(FixedPoint {
        point,
        branch,
        residual,
        spectral_radius,
        stability,
    })
}

/// Symmetric points from the cubic, asymmetric pairs from the `s`-`t`
/// reduction; sorted by `(u, v)`.
pub fn all_fixed_points(t: &ThetaParams) -> Vec<FixedPoint> {
    let mut out: Vec<FixedPoint> = Vec::new();
    for u in solve_symmetric(t) {
        let p = RatioPoint { u, v: u };
        out.extend(make(p, Branch::Symmetric, t));
    }
    // theta1 = 1 or a vanishing denominator: the reduction does not apply and
    // the asymmetric branch is reported empty
    if let Ok(points) = st_points(t) {
        for st in points.into_iter().filter(|st| st.realizable) {
            let Ok((u, v)) = recover_uv(st.s, st.t) else {
                continue;
            };
            for p in [RatioPoint { u, v }, RatioPoint { u: v, v: u }] {
                out.extend(make(polish(p, t), Branch::Asymmetric, t));
            }
        }
    }
    out.sort_by(|a, b| {
        a.point
            .u
            .total_cmp(&b.point.u)
            .then(a.point.v.total_cmp(&b.point.v))
    });
    let mut merged: Vec<FixedPoint> = Vec::with_capacity(out.len());
    for fp in out {
        if !merged
            .iter()
            .any(|m| m.point.relative_distance(&fp.point) < MERGE_TOLERANCE)
        {
            merged.push(fp);
        }
    }
    merged
}

/// Solutions of the system found by [`multistart_newton`] with default options.
pub fn newton_fixed_points(t: &ThetaParams) -> Vec<RatioPoint> {
    multistart_newton(t, &NewtonOptions::default())
}

/// Whether two point sets coincide up to `tol` in relative sup distance.
pub fn same_point_set(a: &[RatioPoint], b: &[RatioPoint], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .all(|p| b.iter().any(|q| p.relative_distance(q) < tol))
        && b.iter()
            .all(|q| a.iter().any(|p| p.relative_distance(q) < tol))
}
