//! Exact partition functions by brute-force enumeration of every configuration.
//!
//! This is deliberately the slow, obvious computation: it evaluates the
//! Hamiltonian on each of the `3^|V_n|` configurations and is used to check
//! the recursion and everything built on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logspace::{log_sum_exp, ScaledSum};
use crate::model::{BoundarySpec, Hamiltonian, ModelParams};
use crate::recursion::RatioPoint;
use crate::tree::{CayleyTree, Spin, TripleDeltaVariant, Q};

/// Largest depth the enumeration accepts (`3^15` configurations).
pub const MAX_ORACLE_DEPTH: u32 = 3;

/// Partition functions resolved by the root spin, in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionVector {
    #[serde(rename = "logZ")]
    pub log_z: [f64; Q],
}

impl PartitionVector {
    pub fn new(log_z: [f64; Q]) -> Self {
        PartitionVector { log_z }
    }

    pub fn from_linear(z: [f64; Q]) -> Self {
        PartitionVector {
            log_z: z.map(f64::ln),
        }
    }

    pub fn total_log(&self) -> f64 {
        log_sum_exp(&self.log_z)
    }

    /// Root-spin distribution `Z_i / Z`.
    pub fn marginal(&self) -> [f64; Q] {
        let total = self.total_log();
        self.log_z.map(|l| (l - total).exp())
    }

    /// `(Z_2 / Z_1, Z_3 / Z_1)`.
    pub fn ratios(&self) -> RatioPoint {
        RatioPoint {
            u: (self.log_z[1] - self.log_z[0]).exp(),
            v: (self.log_z[2] - self.log_z[0]).exp(),
        }
    }

    /// Largest `|a - b| / max(1, |b|)` over the three components.
    pub fn max_relative_deviation(&self, reference: &PartitionVector) -> f64 {
        self.log_z
            .iter()
            .zip(&reference.log_z)
            .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
            .fold(0.0, f64::max)
    }
}

fn check_depth(n: u32) -> Result<CayleyTree> {
    if n > MAX_ORACLE_DEPTH {
        return Err(Error::DepthCap {
            depth: n,
            cap: MAX_ORACLE_DEPTH,
        });
    }
    CayleyTree::new(n)
}

/// Sums `exp(-beta H)` over one shard: fixed spins on the first `fixed.len()`
/// vertices, every assignment of the rest. Two passes: max, then scaled sum.
fn shard_sum(ham: &Hamiltonian, params: &ModelParams, fixed: &[Spin]) -> ScaledSum {
    let nv = ham.tree().vertex_count();
    let free = nv - fixed.len();
    let total = 3usize.pow(free as u32);
    let mut spins = vec![Spin::ONE; nv];
    spins[..fixed.len()].copy_from_slice(fixed);

    let mut log_weights = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        for slot in &mut spins[fixed.len()..] {
            *slot = Spin::from_index(c % 3);
            c /= 3;
        }
        let energy = ham.counts_unchecked(&spins).energy(params);
        log_weights.push(-params.beta * energy);
    }
    let max = log_weights
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let scaled = log_weights.iter().map(|&w| (w - max).exp()).sum();
    ScaledSum { max, scaled }
}

/// `ln Z_i^{(n)}` for each root spin `i`, by enumeration.
///
/// Shards are split on the spins of the root and its two children and merged
/// in a fixed order, so the result does not depend on the thread count.
pub fn exact_partition_vector(
    n: u32,
    params: &ModelParams,
    boundary: BoundarySpec,
    variant: TripleDeltaVariant,
) -> Result<PartitionVector> {
    params.validate()?;
    let tree = check_depth(n)?;
    let ham = Hamiltonian::new(&tree, boundary, variant);

    let prefixes: Vec<Vec<Spin>> = if n == 0 {
        Spin::ALL.iter().map(|&r| vec![r]).collect()
    } else {
        let mut out = Vec::with_capacity(27);
        for r in Spin::ALL {
            for a in Spin::ALL {
                for b in Spin::ALL {
                    out.push(vec![r, a, b]);
                }
            }
        }
        out
    };

    let shards: Vec<ScaledSum> = prefixes
        .par_iter()
        .map(|prefix| shard_sum(&ham, params, prefix))
        .collect();

    let per_root = shards.len() / Q;
    let mut log_z = [0.0; Q];
    for (i, slot) in log_z.iter_mut().enumerate() {
        *slot = shards[i * per_root..(i + 1) * per_root]
            .iter()
            .fold(ScaledSum::EMPTY, |acc, &s| acc.merge(s))
            .ln();
    }
    Ok(PartitionVector { log_z })
}

/// Finite-volume distribution of the root spin.
pub fn root_marginal(
    n: u32,
    params: &ModelParams,
    boundary: BoundarySpec,
    variant: TripleDeltaVariant,
) -> Result<[f64; Q]> {
    Ok(exact_partition_vector(n, params, boundary, variant)?.marginal())
}
