//! Off-diagonal fixed points through `s = u + v`, `t = uv`.
//!
//! Dividing the difference of the two equations by `u - v` gives `t` as a
//! quadratic in `s` ([`t_from_s_ratio`]); dividing one equation by the other
//! gives a second expression ([`t_from_s_division`]). Equating them leaves a
//! quadratic in `s`, and each admissible root with `0 < t < s^2/4` yields the
//! reflected pair `(u, v)`, `(v, u)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ThetaParams;
use crate::poly::{positive_roots, Poly};

const DEGENERATE: f64 = 1e-12;

/// Consistency demanded of each `s` root between the two `t` expressions.
const ST_AGREEMENT: f64 = 1e-10;

fn ratio_form(t: &ThetaParams) -> Result<(Poly, f64)> {
    let (tt, t1, t3) = (t.theta_tilde, t.theta1, t.theta3);
    if (t1 - 1.0).abs() <= DEGENERATE {
        return Err(Error::OutOfRegime(
            "theta1 = 1 removes t from the subtracted equation".into(),
        ));
    }
    let num = Poly::new(vec![
        t3 * tt * tt * t1 - 2.0 * (tt - 1.0),
        2.0 * t3 * tt - t1 * (tt * tt - 1.0),
        t3 * t1,
    ]);
    Ok((num, 2.0 * t3 * (t1 - 1.0)))
}

fn division_form(t: &ThetaParams) -> Result<(Poly, f64)> {
    let (tt, t1) = (t.theta_tilde, t.theta1);
    let den = tt * tt * t1 + t1 - 2.0 * tt;
    if den.abs() <= DEGENERATE * (tt * tt * t1 + t1) {
        return Err(Error::OutOfRegime(
            "theta~^2 theta1 + theta1 - 2 theta~ vanishes".into(),
        ));
    }
    Ok((Poly::new(vec![t1, 2.0, t1]), den))
}

/// `t = [t3 t1 s^2 + (2 t3 t~ - t1 (t~^2 - 1)) s + t3 t~^2 t1 - 2 (t~ - 1)] / (2 t3 (t1 - 1))`.
pub fn t_from_s_ratio(s: f64, t: &ThetaParams) -> Result<f64> {
    let (num, den) = ratio_form(t)?;
    Ok(num.eval(s) / den)
}

/// The variant with `theta2` in place of `theta3` in the numerator, as it
/// is often transcribed. Agrees with [`t_from_s_ratio`] only when `theta2 = theta3`.
pub fn t_from_s_ratio_as_printed(s: f64, t: &ThetaParams) -> Result<f64> {
    let (tt, t1, t2, t3) = (t.theta_tilde, t.theta1, t.theta2, t.theta3);
    if (t1 - 1.0).abs() <= DEGENERATE {
        return Err(Error::OutOfRegime("theta1 = 1".into()));
    }
    let num = t1 * t2 * s * s + (2.0 * t2 * tt - t1 * (tt * tt - 1.0)) * s + tt * tt * t1 * t2
        - 2.0 * (tt - 1.0);
    Ok(num / (2.0 * t3 * (t1 - 1.0)))
}

/// `t = (t1 s^2 + 2 s + t1) / (t~^2 t1 + t1 - 2 t~)`.
pub fn t_from_s_division(s: f64, t: &ThetaParams) -> Result<f64> {
    let (num, den) = division_form(t)?;
    Ok(num.eval(s) / den)
}

/// Quadratic in `s` from equating the two `t` expressions, cleared of denominators.
pub fn s_quadratic(t: &ThetaParams) -> Result<Poly> {
    let (n1, d1) = ratio_form(t)?;
    let (n2, d2) = division_form(t)?;
    Ok(n1.scale(d2).sub(&n2.scale(d1)))
}

/// Positive roots of [`s_quadratic`] on which both `t` expressions agree.
pub fn asymmetric_s_roots(t: &ThetaParams) -> Result<Vec<f64>> {
    let quad = s_quadratic(t)?;
    let mut out = Vec::new();
    for root in positive_roots(&quad) {
        let s = root.value;
        let (a, b) = (t_from_s_ratio(s, t)?, t_from_s_division(s, t)?);
        if (a - b).abs() <= ST_AGREEMENT * a.abs().max(b.abs()).max(1.0) {
            out.push(s);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StPoint {
    pub s: f64,
    pub t: f64,
    /// `0 < t < s^2 / 4`: a real pair of distinct positive `(u, v)`.
    pub realizable: bool,
}

pub fn st_points(t: &ThetaParams) -> Result<Vec<StPoint>> {
    asymmetric_s_roots(t)?
        .into_iter()
        .map(|s| {
            let tv = t_from_s_division(s, t)?;
            Ok(StPoint {
                s,
                t: tv,
                realizable: tv > 0.0 && tv < 0.25 * s * s,
            })
        })
        .collect()
}

/// Solves `u + v = s`, `uv = t`, returning `u > v > 0`.
pub fn recover_uv(s: f64, t: f64) -> Result<(f64, f64)> {
    let disc = s * s - 4.0 * t;
    if !(t > 0.0 && s > 0.0 && disc > 0.0) {
        return Err(Error::OutOfRegime(format!(
            "s = {s}, t = {t} does not give two distinct positive numbers"
        )));
    }
    let u = 0.5 * (s + disc.sqrt());
    Ok((u, t / u))
}

/// Lower bound on `s` beyond which `t_from_s_division(s) < s^2 / 4`.
///
/// From `(t1 (t~^2 - 3) - 2 t~) s^2 - 8 s - 4 t1 > 0`; needs a positive
/// leading coefficient, which in turn needs `t~^2 > 3`.
pub fn s_star(t: &ThetaParams) -> Result<f64> {
    let (tt, t1) = (t.theta_tilde, t.theta1);
    let lead = t1 * (tt * tt - 3.0) - 2.0 * tt;
    if lead <= 0.0 {
        return Err(Error::OutOfRegime(format!(
            "s* needs theta1 (theta~^2 - 3) - 2 theta~ > 0, got {lead}"
        )));
    }
    Ok((4.0 + (16.0 + 4.0 * t1 * lead).sqrt()) / lead)
}

/// The `s` equation written as `line(s) = parabola(s)` with
/// `line(s) = (t1 (t~+1) s + 2) / theta3` and
/// `parabola(s) = (alpha s^2 + gamma s + c0) / k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LineParabola {
    pub slope: f64,
    pub intercept: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub c0: f64,
    pub k: f64,
}

impl LineParabola {
    pub fn new(t: &ThetaParams) -> Result<Self> {
        let (tt, t1, t3) = (t.theta_tilde, t.theta1, t.theta3);
        if (tt - 1.0).abs() <= DEGENERATE {
            return Err(Error::OutOfRegime("theta~ = 1".into()));
        }
        let k = t1 * (tt * tt + 1.0) - 2.0 * tt;
        if k.abs() <= DEGENERATE {
            return Err(Error::OutOfRegime(
                "theta1 (theta~^2 + 1) = 2 theta~".into(),
            ));
        }
        Ok(LineParabola {
            slope: t1 * (tt + 1.0) / t3,
            intercept: 2.0 / t3,
            alpha: t1 * (t1 * (tt + 1.0) - 2.0),
            gamma: 2.0 * (t1 * (tt * tt + tt + 2.0) - 2.0 * (tt + 1.0)),
            c0: t1 * (t1 * (tt.powi(3) + tt * tt + 2.0 * tt + 2.0) - 2.0 * (tt * tt + tt + 1.0)),
            k,
        })
    }

    pub fn parabola(&self, s: f64) -> f64 {
        (self.alpha * s * s + self.gamma * s + self.c0) / self.k
    }

    pub fn line(&self, s: f64) -> f64 {
        self.intercept + self.slope * s
    }

    /// `parabola(s) - line(s)` as a polynomial.
    pub fn difference(&self) -> Poly {
        Poly::new(vec![
            self.c0 / self.k - self.intercept,
            self.gamma / self.k - self.slope,
            self.alpha / self.k,
        ])
    }
}

/// `theta3` below which the line starts above the parabola and there is a
/// single crossing: `2 [t1 (t~^2+1) - 2 t~] / (t1 [t1 (t~^3 + t~^2 + 2 t~ + 2) - 2 (t~^2 + t~ + 1)])`.
pub fn single_root_threshold(t: &ThetaParams) -> Result<f64> {
    let lp = LineParabola::new(t)?;
    if lp.c0 <= 0.0 || lp.k <= 0.0 {
        return Err(Error::OutOfRegime(
            "parabola intercept is not positive".into(),
        ));
    }
    Ok(2.0 * lp.k / lp.c0)
}

/// Slope of the line through `(0, 2/theta3)` tangent to the parabola at a
/// positive `s`.
pub fn k0_slope(t: &ThetaParams) -> Result<f64> {
    let lp = LineParabola::new(t)?;
    let (a, g, c) = (lp.alpha / lp.k, lp.gamma / lp.k, lp.c0 / lp.k);
    if a <= 0.0 {
        return Err(Error::OutOfRegime("parabola is not convex".into()));
    }
    let gap = c - lp.intercept;
    if gap < 0.0 {
        return Err(Error::OutOfRegime(
            "the line starts above the parabola; no tangent from its intercept".into(),
        ));
    }
    // (g - k)^2 = 4 a gap, and contact point s = (k - g) / (2a) > 0
    let k0 = g + 2.0 * (a * gap).sqrt();
    if k0 <= 0.0 {
        return Err(Error::OutOfRegime("tangent slope is not positive".into()));
    }
    Ok(k0)
}

/// `theta1 (theta~ + 1) / k0`.
pub fn two_root_threshold(t: &ThetaParams) -> Result<f64> {
    Ok(t.theta1 * (t.theta_tilde + 1.0) / k0_slope(t)?)
}
