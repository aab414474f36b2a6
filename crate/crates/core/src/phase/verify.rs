//! Recursion against exact enumeration on random parameter draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{thetas_from, BoundarySpec, ModelParams};
use crate::oracle::{exact_partition_vector, MAX_ORACLE_DEPTH};
use crate::recursion::recurse;
use crate::tree::TripleDeltaVariant;

/// Largest relative log-space deviation that still passes.
pub const VERIFY_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub depth: u32,
    pub draws: usize,
    pub seed: u64,
    pub max_deviation: f64,
    /// Draw and variant at which `max_deviation` occurred.
    pub worst: Option<(usize, TripleDeltaVariant)>,
    pub passed: bool,
}

/// Couplings uniform in `[-2, 2]`, `beta` uniform in `(0, 2]`.
pub fn random_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let mut c = || rng.gen_range(-2.0..=2.0);
    let (j, j1, j2, h) = (c(), c(), c(), c());
    let beta = 2.0 - rng.gen_range(0.0..2.0);
    ModelParams { j, j1, j2, h, beta }
}

/// Compares `recurse(n)` from the free boundary with enumeration at depth
/// `n`, for both triple-delta variants and `draws` seeded draws.
pub fn verify(n: u32, draws: usize, seed: u64) -> Result<VerifyReport> {
    if n > MAX_ORACLE_DEPTH {
        return Err(Error::DepthCap {
            depth: n,
            cap: MAX_ORACLE_DEPTH,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation = 0.0f64;
    let mut worst = None;
    for draw in 0..draws {
        let params = random_params(&mut rng);
        let thetas = thetas_from(&params)?;
        for variant in [TripleDeltaVariant::Averaged, TripleDeltaVariant::Strict] {
            let exact = exact_partition_vector(n, &params, BoundarySpec::Free, variant)?;
            let rec = recurse(n, &thetas, BoundarySpec::Free, variant);
            let dev = rec.max_relative_deviation(&exact);
            // a NaN deviation is kept as the worst
            if dev.is_nan() || dev > max_deviation {
                max_deviation = dev;
                worst = Some((draw, variant));
            }
        }
    }
    Ok(VerifyReport {
        depth: n,
        draws,
        seed,
        max_deviation,
        worst,
        passed: max_deviation <= VERIFY_THRESHOLD,
    })
}
