//! Low-degree real polynomials: evaluation, Sturm sequences and real-root
//! isolation.
//!
//! Roots are isolated by splitting the search interval at the real roots of
//! the derivative (found recursively). On each resulting segment the
//! polynomial is monotone, so a sign change brackets exactly one simple root,
//! which is refined by bisection and a short Newton polish. A critical point
//! where the polynomial vanishes to rounding accuracy is reported as a root
//! of even multiplicity. Sturm sequences provide an independent count.

use std::fmt;

/// Relative size of `|p(c)|` at a critical point below which `c` is a double root.
const DOUBLE_ROOT_TOL: f64 = 1e-14;
/// Relative distance below which two roots are merged.
pub const ROOT_MERGE_TOL: f64 = 1e-8;
const BISECTION_WIDTH: f64 = 1e-12;
const MAX_BISECTIONS: usize = 400;

/// Polynomial with real coefficients in ascending order of degree.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// From coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().rev().copied().collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// `sum |a_i| |x|^i`, the natural scale of rounding error in [`Poly::eval`].
    pub fn eval_abs(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(0.0)
                        + other.coeffs.get(i).copied().unwrap_or(0.0)
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiplication by `x`.
    pub fn shift(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend_from_slice(&self.coeffs);
        Poly::new(coeffs)
    }

    /// Remainder of division by `divisor`, with coefficients that cancel to
    /// rounding level set to zero.
    fn rem(&self, divisor: &Poly) -> Poly {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let mut r = self.coeffs.clone();
        let d = &divisor.coeffs;
        let dl = divisor.leading();
        while r.len() >= d.len() && !r.is_empty() {
            let k = r.len() - d.len();
            let q = r[r.len() - 1] / dl;
            for (i, &dc) in d.iter().enumerate() {
                r[k + i] -= q * dc;
            }
            r.pop();
            while r.last().is_some_and(|c| c.abs() <= 1e-12 * scale) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Upper bound on the modulus of every root.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.leading().abs();
        1.0 + self.coeffs[..self.degree()]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs() / lead))
    }
}

/// A real root together with its multiplicity estimate (1 or 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: f64,
    pub multiplicity: u8,
}

/// Distinct real roots in the open interval `(lo, hi)`, ascending.
pub fn real_roots_in(p: &Poly, lo: f64, hi: f64) -> Vec<Root> {
    let mut roots = match p.degree() {
        _ if p.is_zero() => Vec::new(),
        0 => Vec::new(),
        1 => {
            let r = -p.coeffs[0] / p.coeffs[1];
            if r > lo && r < hi {
                vec![Root {
                    value: r,
                    multiplicity: 1,
                }]
            } else {
                Vec::new()
            }
        }
        _ => segment_roots(p, lo, hi),
    };
    roots.sort_by(|a, b| a.value.total_cmp(&b.value));
    merge_close(roots)
}

/// Distinct real roots in `(0, inf)`.
pub fn positive_roots(p: &Poly) -> Vec<Root> {
    if p.is_zero() || p.degree() == 0 {
        return Vec::new();
    }
    let hi = 2.0 * p.cauchy_bound();
    real_roots_in(p, 0.0, hi)
}

fn segment_roots(p: &Poly, lo: f64, hi: f64) -> Vec<Root> {
    let critical = real_roots_in(&p.derivative(), lo, hi);
    let mut knots = Vec::with_capacity(critical.len() + 2);
    knots.push((lo, false));
    let mut roots = Vec::new();
    for c in &critical {
        let flat = p.eval(c.value).abs() <= DOUBLE_ROOT_TOL * p.eval_abs(c.value);
        if flat {
            roots.push(Root {
                value: c.value,
                multiplicity: 2,
            });
        }
        knots.push((c.value, flat));
    }
    knots.push((hi, false));

    for w in knots.windows(2) {
        let ((a, a_flat), (b, b_flat)) = (w[0], w[1]);
        // A monotone segment next to a touching critical point can only hold
        // that root's rounding-level twin.
        if a_flat || b_flat || b <= a {
            continue;
        }
        let (fa, fb) = (p.eval(a), p.eval(b));
        if fa == 0.0 || fb == 0.0 || fa.signum() == fb.signum() {
            continue;
        }
        roots.push(Root {
            value: bisect(p, a, b, fa),
            multiplicity: 1,
        });
    }
    roots
}

fn bisect(p: &Poly, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    let (lo, hi) = (a, b);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (a + b);
        if b - a <= BISECTION_WIDTH * a.abs().max(b.abs()) || mid <= a || mid >= b {
            break;
        }
        let fm = p.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let mut x = 0.5 * (a + b);
    let dp = p.derivative();
    for _ in 0..2 {
        let (fx, dfx) = (p.eval(x), dp.eval(x));
        if dfx == 0.0 {
            break;
        }
        let next = x - fx / dfx;
        if next > lo && next < hi && p.eval(next).abs() <= fx.abs() {
            x = next;
        }
    }
    x
}

fn merge_close(roots: Vec<Root>) -> Vec<Root> {
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        if let Some(last) = out.last_mut() {
            let scale = last.value.abs().max(r.value.abs()).max(f64::MIN_POSITIVE);
            if (r.value - last.value).abs() <= ROOT_MERGE_TOL * scale {
                if r.multiplicity > last.multiplicity {
                    *last = r;
                } else {
                    last.multiplicity = last.multiplicity.max(2);
                }
                continue;
            }
        }
        out.push(r);
    }
    out
}

/// Sturm sequence `p, p', -rem(p, p'), ...`.
#[derive(Debug, Clone)]
pub struct SturmSequence {
    chain: Vec<Poly>,
}

impl SturmSequence {
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone()];
        let mut next = p.derivative();
        while !next.is_zero() {
            let r = chain.last().unwrap().rem(&next).scale(-1.0);
            chain.push(next);
            next = r;
        }
        SturmSequence { chain }
    }

    fn variations(&self, signs: impl Iterator<Item = f64>) -> usize {
        let mut count = 0;
        let mut previous = 0.0;
        for s in signs.filter(|&s| s != 0.0) {
            if previous != 0.0 && s != previous {
                count += 1;
            }
            previous = s;
        }
        count
    }

    pub fn variations_at(&self, x: f64) -> usize {
        self.variations(self.chain.iter().map(|q| q.eval(x).signum()))
    }

    pub fn variations_at_infinity(&self) -> usize {
        self.variations(self.chain.iter().map(|q| q.leading().signum()))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct roots in `(0, inf)`, assuming `p(0) != 0`.
    pub fn count_positive(&self) -> usize {
        self.variations_at(0.0)
            .saturating_sub(self.variations_at_infinity())
    }
}
