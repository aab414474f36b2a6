//! Partition-function recursion `Z^{(n)} <- Z^{(n-1)}` and the ratio map.
//!
//! A vertex with spin `i` and children `j`, `m` contributes the factor
//! `theta3^{d(1,i)} theta^{d(i,j)+d(i,m)} theta1^{d(j,m)} theta2^{d3(j,i,m)}`,
//! and `Z_i^{(n)}` is the sum of that factor times `Z_j^{(n-1)} Z_m^{(n-1)}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::log_sum_exp;
use crate::model::{BoundarySpec, ThetaParams};
use crate::oracle::PartitionVector;
use crate::tree::{delta2, delta3, Spin, TripleDeltaVariant, Q};

/// Ratios `u = Z_2 / Z_1` and `v = Z_3 / Z_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub u: f64,
    pub v: f64,
}

impl RatioPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if u.is_finite() && v.is_finite() && u > 0.0 && v > 0.0 {
            Ok(RatioPoint { u, v })
        } else {
            Err(Error::InvalidParameter(format!(
                "ratio point ({u}, {v}) must be positive and finite"
            )))
        }
    }

    pub fn swapped(self) -> Self {
        RatioPoint {
            u: self.v,
            v: self.u,
        }
    }

    pub fn sup_distance(&self, other: &RatioPoint) -> f64 {
        (self.u - other.u).abs().max((self.v - other.v).abs())
    }

    /// Sup-norm distance scaled by the larger coordinate magnitude (at least one).
    pub fn relative_distance(&self, other: &RatioPoint) -> f64 {
        let scale = self
            .u
            .abs()
            .max(self.v.abs())
            .max(other.u.abs())
            .max(other.v.abs())
            .max(1.0);
        self.sup_distance(other) / scale
    }
}

/// Log weights of every (root spin, left child, right child) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct StepWeights {
    log_w: [[[f64; Q]; Q]; Q],
}

impl StepWeights {
    pub fn new(thetas: &ThetaParams, variant: TripleDeltaVariant) -> Self {
        let (ln_t, ln_t1, ln_t2, ln_t3) = (
            thetas.theta.ln(),
            thetas.theta1.ln(),
            thetas.theta2.ln(),
            thetas.theta3.ln(),
        );
        let mut log_w = [[[0.0; Q]; Q]; Q];
        for i in Spin::ALL {
            for j in Spin::ALL {
                for m in Spin::ALL {
                    log_w[i.index()][j.index()][m.index()] = f64::from(delta2(Spin::ONE, i))
                        * ln_t3
                        + f64::from(delta2(i, j) + delta2(i, m)) * ln_t
                        + f64::from(delta2(j, m)) * ln_t1
                        + delta3(j, i, m, variant).to_f64() * ln_t2;
                }
            }
        }
        StepWeights { log_w }
    }

    pub fn log_weight(&self, root: Spin, left: Spin, right: Spin) -> f64 {
        self.log_w[root.index()][left.index()][right.index()]
    }

    pub fn step(&self, pv: &PartitionVector) -> PartitionVector {
        let z = &pv.log_z;
        let mut out = [0.0; Q];
        let mut terms = [0.0; Q * Q];
        for (i, slot) in out.iter_mut().enumerate() {
            for j in 0..Q {
                for m in 0..Q {
                    terms[j * Q + m] = self.log_w[i][j][m] + z[j] + z[m];
                }
            }
            *slot = log_sum_exp(&terms);
        }
        PartitionVector { log_z: out }
    }
}

/// Initial vector for the recursion.
///
/// `Free` is the single vertex with its field weight. `Uniform(i)` starts from
/// the indicator of spin `i` one level further out and applies one step; the
/// constant `theta1` picked up by the outside sibling pair is divided back
/// out, since that bond lies entirely outside the volume.
pub fn base_partition(boundary: BoundarySpec, thetas: &ThetaParams) -> PartitionVector {
    match boundary {
        BoundarySpec::Free => PartitionVector {
            log_z: [thetas.theta3.ln(), 0.0, 0.0],
        },
        BoundarySpec::Uniform(spin) => {
            let mut indicator = [f64::NEG_INFINITY; Q];
            indicator[spin.index()] = 0.0;
            // d3(i, j, i) coincides for both variants, so either table works.
            let stepped = StepWeights::new(thetas, TripleDeltaVariant::Averaged)
                .step(&PartitionVector { log_z: indicator });
            let ln_t1 = thetas.theta1.ln();
            PartitionVector {
                log_z: stepped.log_z.map(|l| l - ln_t1),
            }
        }
    }
}

pub fn step_partition(
    pv: &PartitionVector,
    thetas: &ThetaParams,
    variant: TripleDeltaVariant,
) -> PartitionVector {
    StepWeights::new(thetas, variant).step(pv)
}

/// Applies `steps` recursion steps starting from `base_partition(boundary)`.
pub fn recurse(
    steps: u32,
    thetas: &ThetaParams,
    boundary: BoundarySpec,
    variant: TripleDeltaVariant,
) -> PartitionVector {
    let weights = StepWeights::new(thetas, variant);
    let mut pv = base_partition(boundary, thetas);
    for _ in 0..steps {
        pv = weights.step(&pv);
    }
    pv
}

/// Which form of the `v` equation the ratio map uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VEquation {
    /// Derived from `Z_3 / Z_1`; the mirror image of the `u` equation.
    #[default]
    Corrected,
    /// The historical misprint ending in `theta u^2 + theta^2 theta1 theta2 u^2`.
    /// Only kept to demonstrate that it breaks the `u <-> v` symmetry.
    AsPrinted,
}

/// Common denominator `theta~^2 theta1 + 2 theta~ (u+v) + theta1 (u^2+v^2) + 2uv`.
pub(crate) fn ratio_denominator(p: &RatioPoint, t: &ThetaParams) -> f64 {
    let (u, v, tt, t1) = (p.u, p.v, t.theta_tilde, t.theta1);
    tt * tt * t1 + 2.0 * tt * (u + v) + t1 * (u * u + v * v) + 2.0 * u * v
}

/// Numerator of `theta3 u'`.
pub(crate) fn u_numerator(p: &RatioPoint, t: &ThetaParams) -> f64 {
    let (u, v, tt, t1) = (p.u, p.v, t.theta_tilde, t.theta1);
    t1 + 2.0 * tt * u * (1.0 + v) + 2.0 * v + tt * tt * t1 * u * u + t1 * v * v
}

pub fn ratio_step(p: &RatioPoint, thetas: &ThetaParams) -> RatioPoint {
    ratio_step_with(p, thetas, VEquation::Corrected)
}

pub fn ratio_step_with(p: &RatioPoint, thetas: &ThetaParams, eq: VEquation) -> RatioPoint {
    let denom = thetas.theta3 * ratio_denominator(p, thetas);
    let v_num = match eq {
        VEquation::Corrected => u_numerator(&p.swapped(), thetas),
        VEquation::AsPrinted => {
            let (u, v, tt, t1) = (p.u, p.v, thetas.theta_tilde, thetas.theta1);
            t1 + 2.0 * u + 2.0 * tt * v * (1.0 + u) + thetas.theta * u * u + tt * tt * t1 * u * u
        }
    };
    RatioPoint {
        u: u_numerator(p, thetas) / denom,
        v: v_num / denom,
    }
}

/// Closed form of `theta3 (u' - v')`:
/// `[2 (t~ - 1)(u - v) + t1 (t~^2 - 1)(u^2 - v^2)] / denominator`.
///
/// Only the corrected `v` equation reproduces it.
pub fn subtracted_difference(p: &RatioPoint, t: &ThetaParams) -> f64 {
    let (u, v, tt, t1) = (p.u, p.v, t.theta_tilde, t.theta1);
    (2.0 * (tt - 1.0) * (u - v) + t1 * (tt * tt - 1.0) * (u * u - v * v)) / ratio_denominator(p, t)
}

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100_000;
const CYCLE_WINDOW: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterateOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IterateOptions {
    fn default() -> Self {
        IterateOptions {
            tol: DEFAULT_TOLERANCE,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

impl IterateOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidTolerance(self.tol));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationResult {
    pub point: RatioPoint,
    pub iterations: usize,
    /// Sup-norm of the last step.
    pub residual: f64,
    pub converged: bool,
    /// Set when the orbit revisited one of its last few points exactly.
    pub cycle_period: Option<usize>,
}

/// Fixed-point iteration of [`ratio_step`]; stops once a step is below `tol`.
pub fn iterate(
    p0: RatioPoint,
    thetas: &ThetaParams,
    options: &IterateOptions,
) -> Result<IterationResult> {
    options.validate()?;
    let mut history = [p0; CYCLE_WINDOW];
    let mut current = p0;
    let mut residual = f64::INFINITY;
    for k in 1..=options.max_iter {
        let next = ratio_step(&current, thetas);
        residual = next.sup_distance(&current);
        if residual < options.tol {
            return Ok(IterationResult {
                point: next,
                iterations: k,
                residual,
                converged: true,
                cycle_period: None,
            });
        }
        // history[(k - d) % W] holds the iterate from d steps ago.
        let period = (2..=CYCLE_WINDOW.min(k)).find(|&d| history[(k - d) % CYCLE_WINDOW] == next);
        if let Some(period) = period {
            return Ok(IterationResult {
                point: next,
                iterations: k,
                residual,
                converged: false,
                cycle_period: Some(period),
            });
        }
        history[k % CYCLE_WINDOW] = next;
        current = next;
    }
    Ok(IterationResult {
        point: current,
        iterations: options.max_iter,
        residual,
        converged: false,
        cycle_period: None,
    })
}

/// Limit of the ratio recursion started from the uniform boundary condition `spin`.
pub fn boundary_seeded_limit(
    spin: Spin,
    thetas: &ThetaParams,
    options: &IterateOptions,
) -> Result<IterationResult> {
    let seed = base_partition(BoundarySpec::Uniform(spin), thetas).ratios();
    iterate(seed, thetas, options)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::TripleDeltaVariant::{Averaged, Strict};
    use proptest::prelude::*;

    fn thetas(theta: f64, theta1: f64, theta2: f64, theta3: f64) -> ThetaParams {
        ThetaParams::new(theta, theta1, theta2, theta3).unwrap()
    }

    /// The three recursions written out term by term.
    fn closed_form_step(z: [f64; 3], t: &ThetaParams) -> [f64; 3] {
        let (th, t1, t2, t3) = (t.theta, t.theta1, t.theta2, t.theta3);
        let a = th * th * t1 * t2;
        let b = th * t2.sqrt();
        let [z1, z2, z3] = z;
        [
            t3 * (a * z1 * z1
                + 2.0 * b * (z1 * z2 + z1 * z3)
                + t1 * (z2 * z2 + z3 * z3)
                + 2.0 * z2 * z3),
            t1 * z1 * z1 + 2.0 * b * z2 * (z1 + z3) + 2.0 * z1 * z3 + a * z2 * z2 + t1 * z3 * z3,
            t1 * z1 * z1 + 2.0 * b * z3 * (z1 + z2) + 2.0 * z1 * z2 + a * z3 * z3 + t1 * z2 * z2,
        ]
    }

    #[test]
    fn averaged_table_matches_written_recursion() {
        let t = thetas(1.7, 0.6, 2.3, 1.4);
        let z = [0.8, 1.9, 0.35];
        let got = step_partition(&PartitionVector::from_linear(z), &t, Averaged);
        let want = closed_form_step(z, &t);
        for (log_z, w) in got.log_z.iter().zip(want) {
            assert!((log_z - w.ln()).abs() < 1e-13);
        }
    }

    #[test]
    fn unit_thetas_step() {
        let t = ThetaParams::trivial();
        let got = step_partition(&PartitionVector::from_linear([1.0; 3]), &t, Averaged);
        for l in got.log_z {
            assert!((l - 9f64.ln()).abs() < 1e-15);
        }
        let p = ratio_step(&RatioPoint { u: 1.0, v: 1.0 }, &t);
        assert_eq!(p, RatioPoint { u: 1.0, v: 1.0 });
    }

    #[test]
    fn strict_weights_drop_half_triples() {
        let t = thetas(1.5, 1.2, 3.0, 1.0);
        let w = StepWeights::new(&t, Strict);
        let (one, two) = (Spin::ONE, Spin::TWO);
        // root 1 with children (1, 2): theta only, no sqrt(theta2)
        assert!((w.log_weight(one, one, two) - 1.5f64.ln()).abs() < 1e-15);
        assert!(
            (w.log_weight(one, one, one) - (2.0 * 1.5f64.ln() + 1.2f64.ln() + 3f64.ln())).abs()
                < 1e-15
        );
        let avg = StepWeights::new(&t, Averaged);
        assert!((avg.log_weight(one, one, two) - (1.5f64.ln() + 0.5 * 3f64.ln())).abs() < 1e-15);
    }

    #[test]
    fn base_cases() {
        assert_eq!(
            base_partition(BoundarySpec::Free, &ThetaParams::trivial()).log_z,
            [0.0; 3]
        );
        let t = thetas(1.0, 1.0, 1.0, std::f64::consts::E);
        let b = base_partition(BoundarySpec::Free, &t);
        assert!((b.log_z[0] - 1.0).abs() < 1e-15);
        assert_eq!(&b.log_z[1..], &[0.0, 0.0]);

        let b = base_partition(BoundarySpec::Uniform(Spin::TWO), &ThetaParams::trivial());
        assert_eq!(b.log_z, [0.0; 3]);
    }

    #[test]
    fn symmetric_input_stays_symmetric() {
        let t = thetas(1.3, 2.2, 0.7, 1.0);
        let out = step_partition(&PartitionVector::from_linear([0.4, 1.1, 1.1]), &t, Averaged);
        assert_eq!(out.log_z[1], out.log_z[2]);
        let mut p = RatioPoint { u: 0.3, v: 0.3 };
        let t = thetas(2.0, 3.0, 1.5, 0.7);
        for _ in 0..50 {
            p = ratio_step(&p, &t);
            assert_eq!(p.u, p.v);
        }
    }

    #[test]
    fn iterate_examples() {
        let opts = IterateOptions::default();
        let r = iterate(
            RatioPoint { u: 5.0, v: 0.2 },
            &ThetaParams::trivial(),
            &opts,
        )
        .unwrap();
        assert!(r.converged && r.iterations <= 2);
        assert_eq!(r.point, RatioPoint { u: 1.0, v: 1.0 });

        let t = thetas(2.0, 1.0, 1.0, 1.0);
        let r = iterate(RatioPoint { u: 1.0, v: 1.0 }, &t, &opts).unwrap();
        assert!(r.converged);
        let next = ratio_step(&r.point, &t);
        assert!(next.sup_distance(&r.point) < 1e-10);

        let bad = IterateOptions {
            tol: 0.0,
            max_iter: 10,
        };
        assert_eq!(
            iterate(RatioPoint { u: 1.0, v: 1.0 }, &t, &bad),
            Err(Error::InvalidTolerance(0.0))
        );
        let bad = IterateOptions {
            tol: 1e-3,
            max_iter: 0,
        };
        assert!(iterate(RatioPoint { u: 1.0, v: 1.0 }, &t, &bad).is_err());
    }

    #[test]
    fn non_convergence_is_reported() {
        let t = thetas(2.0, 1.0, 1.0, 1.0);
        let opts = IterateOptions {
            tol: 1e-300,
            max_iter: 3,
        };
        let r = iterate(RatioPoint { u: 9.0, v: 0.1 }, &t, &opts).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
    }

    #[test]
    fn antiferromagnetic_orbit_cycles() {
        // Strong antiferromagnetic bonds make the symmetric orbit alternate.
        let t = thetas(0.01, 1.0, 1.0, 1.0);
        let opts = IterateOptions {
            tol: 1e-14,
            max_iter: 10_000,
        };
        let r = iterate(RatioPoint { u: 0.5, v: 0.5 }, &t, &opts).unwrap();
        assert!(!r.converged);
        assert_eq!(r.cycle_period, Some(2));
    }

    #[test]
    fn boundary_limits() {
        let opts = IterateOptions::default();
        for s in Spin::ALL {
            let r = boundary_seeded_limit(s, &ThetaParams::trivial(), &opts).unwrap();
            assert_eq!(r.point, RatioPoint { u: 1.0, v: 1.0 });
        }
        let t = thetas(4.0, 2.5, 1.2, 1.0);
        let two = boundary_seeded_limit(Spin::TWO, &t, &opts).unwrap();
        let three = boundary_seeded_limit(Spin::THREE, &t, &opts).unwrap();
        assert!(two.converged && three.converged);
        assert!(two.point.relative_distance(&three.point.swapped()) < 1e-9);
    }

    #[test]
    fn subtracted_identity_needs_the_corrected_equation() {
        let t = thetas(2.0, 3.0, 1.5, 0.8);
        let p = RatioPoint { u: 0.7, v: 1.9 };
        let closed = subtracted_difference(&p, &t);
        let ours = ratio_step(&p, &t);
        assert!((t.theta3 * (ours.u - ours.v) - closed).abs() < 1e-12);
        let printed = ratio_step_with(&p, &t, VEquation::AsPrinted);
        assert!((t.theta3 * (printed.u - printed.v) - closed).abs() > 1e-3);
    }

    #[test]
    fn printed_v_equation_breaks_reflection() {
        let t = thetas(2.0, 3.0, 1.5, 0.8);
        let p = RatioPoint { u: 0.7, v: 1.9 };
        let a = ratio_step_with(&p, &t, VEquation::AsPrinted);
        let b = ratio_step_with(&p.swapped(), &t, VEquation::AsPrinted);
        assert!(a.relative_distance(&b.swapped()) > 1e-3);
    }

    fn positive() -> impl Strategy<Value = f64> {
        (-3.0f64..3.0).prop_map(f64::exp)
    }

    proptest! {
        #[test]
        fn ratio_step_is_a_quotient_of_step_partition(
            th in positive(), t1 in positive(), t2 in positive(), t3 in positive(),
            z1 in positive(), z2 in positive(), z3 in positive(),
        ) {
            let t = ThetaParams::new(th, t1, t2, t3).unwrap();
            let pv = PartitionVector::from_linear([z1, z2, z3]);
            let via_z = step_partition(&pv, &t, Averaged).ratios();
            let direct = ratio_step(&pv.ratios(), &t);
            prop_assert!((via_z.u - direct.u).abs() <= 1e-12 * direct.u);
            prop_assert!((via_z.v - direct.v).abs() <= 1e-12 * direct.v);
        }

        #[test]
        fn ratio_step_reflects_and_stays_positive(
            th in positive(), t1 in positive(), t2 in positive(), t3 in positive(),
            u in positive(), v in positive(),
        ) {
            let t = ThetaParams::new(th, t1, t2, t3).unwrap();
            let p = ratio_step(&RatioPoint { u, v }, &t);
            let q = ratio_step(&RatioPoint { u: v, v: u }, &t);
            prop_assert!(p.u > 0.0 && p.v > 0.0);
            prop_assert_eq!(p.u, q.v);
            prop_assert_eq!(p.v, q.u);
        }
    }
}
