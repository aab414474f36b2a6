//! Linear stability of fixed points of the ratio map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ThetaParams;
use crate::recursion::{ratio_denominator, ratio_step, u_numerator, RatioPoint};

/// Band around spectral radius one classified as [`Stability::Marginal`].
pub const STABILITY_MARGIN: f64 = 1e-6;

/// Largest residual accepted by [`stability_of`].
pub const FIXED_POINT_CHECK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl Stability {
    pub fn from_radius(radius: f64) -> Self {
        if radius < 1.0 - STABILITY_MARGIN {
            Stability::Stable
        } else if radius > 1.0 + STABILITY_MARGIN {
            Stability::Unstable
        } else {
            Stability::Marginal
        }
    }
}

pub type Matrix2 = [[f64; 2]; 2];

/// Jacobian of [`ratio_step`], `m[row][col] = d(out_row) / d(in_col)` with
/// rows and columns ordered `(u, v)`.
pub fn jacobian(p: &RatioPoint, t: &ThetaParams) -> Matrix2 {
    let (u, v, tt, t1, t3) = (p.u, p.v, t.theta_tilde, t.theta1, t.theta3);
    let d = ratio_denominator(p, t);
    let nu = u_numerator(p, t);
    let nv = u_numerator(&p.swapped(), t);

    let d_du = 2.0 * tt + 2.0 * t1 * u + 2.0 * v;
    let d_dv = 2.0 * tt + 2.0 * t1 * v + 2.0 * u;
    let nu_du = 2.0 * tt * (1.0 + v) + 2.0 * tt * tt * t1 * u;
    let nu_dv = 2.0 * tt * u + 2.0 + 2.0 * t1 * v;
    let nv_du = 2.0 + 2.0 * tt * v + 2.0 * t1 * u;
    let nv_dv = 2.0 * tt * (1.0 + u) + 2.0 * tt * tt * t1 * v;

    let scale = 1.0 / (t3 * d * d);
    [
        [
            (nu_du * d - nu * d_du) * scale,
            (nu_dv * d - nu * d_dv) * scale,
        ],
        [
            (nv_du * d - nv * d_du) * scale,
            (nv_dv * d - nv * d_dv) * scale,
        ],
    ]
}

pub fn spectral_radius(m: &Matrix2) -> f64 {
    let trace = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = trace * trace - 4.0 * det;
    if disc >= 0.0 {
        let root = disc.sqrt();
        (0.5 * (trace + root))
            .abs()
            .max((0.5 * (trace - root)).abs())
    } else {
        det.sqrt()
    }
}

/// `max(|u' - u|, |v' - v|)` for one application of the ratio map.
pub fn system_residual(p: &RatioPoint, t: &ThetaParams) -> f64 {
    ratio_step(p, t).sup_distance(p)
}

/// Spectral radius of the Jacobian at a fixed point and its classification.
pub fn stability_of(p: &RatioPoint, t: &ThetaParams) -> Result<(f64, Stability)> {
    let residual = system_residual(p, t);
    if residual.is_nan() || residual > FIXED_POINT_CHECK * p.u.max(p.v).max(1.0) {
        return Err(Error::NotAFixedPoint(residual));
    }
    let radius = spectral_radius(&jacobian(p, t));
    Ok((radius, Stability::from_radius(radius)))
}
