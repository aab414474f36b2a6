//! Multi-start damped Newton on the fixed-point system, in log coordinates.
//!
//! Shares nothing with the polynomial reductions except the ratio map itself:
//! the Jacobian is taken by central differences, and starts cover a log grid.

use rayon::prelude::*;

use crate::model::ThetaParams;
use crate::recursion::{ratio_step, RatioPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    /// Starting points per axis.
    pub grid: usize,
    /// Log-grid range for `u` and `v`.
    pub lo: f64,
    pub hi: f64,
    pub max_iter: usize,
    /// Accept a point when the sup-norm residual of the system is below this.
    pub tol: f64,
    /// Points closer than this (relative) are the same solution.
    pub merge_tol: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            grid: 20,
            lo: 1e-3,
            hi: 1e3,
            max_iter: 200,
            tol: 1e-12,
            merge_tol: 1e-8,
        }
    }
}

fn defect(x: [f64; 2], t: &ThetaParams) -> [f64; 2] {
    let p = RatioPoint {
        u: x[0].exp(),
        v: x[1].exp(),
    };
    let q = ratio_step(&p, t);
    // relative defect keeps the scale uniform across the grid
    [q.u / p.u - 1.0, q.v / p.v - 1.0]
}

fn norm(g: [f64; 2]) -> f64 {
    g[0].abs().max(g[1].abs())
}

fn fd_jacobian(x: [f64; 2], t: &ThetaParams) -> [[f64; 2]; 2] {
    let h = 1e-7;
    let mut m = [[0.0; 2]; 2];
    for col in 0..2 {
        let (mut a, mut b) = (x, x);
        a[col] += h;
        b[col] -= h;
        let (ga, gb) = (defect(a, t), defect(b, t));
        for row in 0..2 {
            m[row][col] = (ga[row] - gb[row]) / (2.0 * h);
        }
    }
    m
}

/// Newton from one start; `None` when it stalls or leaves the representable range.
pub fn newton_solve(
    start: RatioPoint,
    t: &ThetaParams,
    opts: &NewtonOptions,
) -> Option<RatioPoint> {
    let mut x = [start.u.ln(), start.v.ln()];
    let mut g = defect(x, t);
    for _ in 0..opts.max_iter {
        let point = RatioPoint {
            u: x[0].exp(),
            v: x[1].exp(),
        };
        if ratio_step(&point, t).sup_distance(&point) < opts.tol {
            return Some(point);
        }
        let m = fd_jacobian(x, t);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !det.is_finite() || det == 0.0 {
            return None;
        }
        let dx = [
            -(m[1][1] * g[0] - m[0][1] * g[1]) / det,
            -(-m[1][0] * g[0] + m[0][0] * g[1]) / det,
        ];
        let mut lambda = 1.0;
        let current = norm(g);
        loop {
            let trial = [x[0] + lambda * dx[0], x[1] + lambda * dx[1]];
            let gt = defect(trial, t);
            if norm(gt).is_finite() && norm(gt) < current * (1.0 - 1e-4 * lambda) {
                x = trial;
                g = gt;
                break;
            }
            lambda *= 0.5;
            if lambda < 1e-10 {
                // no further progress in this direction; accept if already tight
                let point = RatioPoint {
                    u: x[0].exp(),
                    v: x[1].exp(),
                };
                return (ratio_step(&point, t).sup_distance(&point) < opts.tol).then_some(point);
            }
        }
        if x.iter().any(|c| c.abs() > 60.0) {
            return None;
        }
    }
    None
}

/// Distinct solutions reached from a `grid x grid` log-spaced set of starts,
/// sorted by `(u, v)`.
pub fn multistart_newton(t: &ThetaParams, opts: &NewtonOptions) -> Vec<RatioPoint> {
    let n = opts.grid.max(1);
    let (a, b) = (opts.lo.ln(), opts.hi.ln());
    let at = |k: usize| {
        if n == 1 {
            1.0
        } else {
            (a + (b - a) * k as f64 / (n - 1) as f64).exp()
        }
    };
    let found: Vec<Option<RatioPoint>> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            newton_solve(
                RatioPoint {
                    u: at(idx / n),
                    v: at(idx % n),
                },
                t,
                opts,
            )
        })
        .collect();
    let mut points: Vec<RatioPoint> = found.into_iter().flatten().collect();
    points.sort_by(|p, q| p.u.total_cmp(&q.u).then(p.v.total_cmp(&q.v)));
    let mut out: Vec<RatioPoint> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.relative_distance(&p) < opts.merge_tol) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_parameters_have_one_solution() {
        let sols = multistart_newton(&ThetaParams::trivial(), &NewtonOptions::default());
        assert_eq!(sols.len(), 1);
        assert!(sols[0].sup_distance(&RatioPoint { u: 1.0, v: 1.0 }) < 1e-12);
    }

    #[test]
    fn solutions_are_fixed_points() {
        let t = ThetaParams::new(3.0, 5.0, 1.0, 0.84).unwrap();
        for p in multistart_newton(&t, &NewtonOptions::default()) {
            assert!(ratio_step(&p, &t).sup_distance(&p) < 1e-12);
        }
    }
}
