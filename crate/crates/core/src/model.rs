//! Couplings, their exponentiated forms, and the Hamiltonian on a finite tree.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{delta2, delta3, CayleyTree, InteractionLists, Spin, TripleDeltaVariant};

/// Physical couplings and inverse temperature.
///
/// Zero couplings are accepted; see [`ModelParams::has_zero_coupling`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Nearest-neighbor coupling.
    #[serde(rename = "J")]
    pub j: f64,
    /// One-level second-neighbor coupling.
    #[serde(rename = "J1")]
    pub j1: f64,
    /// Triple coupling.
    #[serde(rename = "J2")]
    pub j2: f64,
    /// External field acting on spin value 1.
    pub h: f64,
    pub beta: f64,
}

impl ModelParams {
    pub fn new(j: f64, j1: f64, j2: f64, h: f64, beta: f64) -> Result<Self> {
        let params = ModelParams { j, j1, j2, h, beta };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("J", self.j),
            ("J1", self.j1),
            ("J2", self.j2),
            ("h", self.h),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {value} is not finite"
                )));
            }
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta = {} must be positive and finite",
                self.beta
            )));
        }
        Ok(())
    }

    /// Multiple-measure regimes are only analysed with all four couplings nonzero.
    pub fn has_zero_coupling(&self) -> bool {
        self.j * self.j1 * self.j2 * self.h == 0.0
    }

    /// Physical parameters at `beta = 1` reproducing the given thetas.
    pub fn from_thetas(thetas: &ThetaParams) -> Self {
        ModelParams {
            j: thetas.theta.ln(),
            j1: thetas.theta1.ln(),
            j2: thetas.theta2.ln(),
            h: thetas.theta3.ln(),
            beta: 1.0,
        }
    }

    /// Same couplings at a different inverse temperature.
    pub fn with_beta(&self, beta: f64) -> Self {
        ModelParams { beta, ..*self }
    }
}

/// `theta = e^{beta J}`, `theta1 = e^{beta J1}`, `theta2 = e^{beta J2}`,
/// `theta3 = e^{beta h}` and `theta_tilde = theta * sqrt(theta2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawThetas")]
pub struct ThetaParams {
    pub theta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub theta_tilde: f64,
}

#[derive(Deserialize)]
struct RawThetas {
    theta: f64,
    theta1: f64,
    theta2: f64,
    theta3: f64,
}

impl TryFrom<RawThetas> for ThetaParams {
    type Error = Error;

    fn try_from(raw: RawThetas) -> Result<Self> {
        ThetaParams::new(raw.theta, raw.theta1, raw.theta2, raw.theta3)
    }
}

impl ThetaParams {
    pub fn new(theta: f64, theta1: f64, theta2: f64, theta3: f64) -> Result<Self> {
        for (name, value) in [
            ("theta", theta),
            ("theta1", theta1),
            ("theta2", theta2),
            ("theta3", theta3),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} = {value} must be positive and finite"
                )));
            }
        }
        let theta_tilde = theta * theta2.sqrt();
        if !(theta_tilde.is_finite() && theta_tilde > 0.0) {
            return Err(Error::ParameterRange(format!(
                "theta * sqrt(theta2) = {theta_tilde} is not representable"
            )));
        }
        Ok(ThetaParams {
            theta,
            theta1,
            theta2,
            theta3,
            theta_tilde,
        })
    }

    /// All thetas equal to one (every coupling zero).
    pub fn trivial() -> Self {
        ThetaParams::new(1.0, 1.0, 1.0, 1.0).expect("unit thetas are valid")
    }

    pub fn with_theta3(&self, theta3: f64) -> Result<Self> {
        ThetaParams::new(self.theta, self.theta1, self.theta2, theta3)
    }

    pub fn with_theta1(&self, theta1: f64) -> Result<Self> {
        ThetaParams::new(self.theta, theta1, self.theta2, self.theta3)
    }
}

/// Exponentiates `beta * coupling` for each coupling.
pub fn thetas_from(params: &ModelParams) -> Result<ThetaParams> {
    params.validate()?;
    let exp = |name: &str, coupling: f64| -> Result<f64> {
        let value = (params.beta * coupling).exp();
        if value.is_finite() && value > 0.0 {
            Ok(value)
        } else {
            Err(Error::ParameterRange(format!(
                "exp(beta * {name}) = exp({}) overflows",
                params.beta * coupling
            )))
        }
    };
    let theta = exp("J", params.j)?;
    let theta1 = exp("J1", params.j1)?;
    let theta2 = exp("J2", params.j2)?;
    let theta3 = exp("h", params.h)?;
    ThetaParams::new(theta, theta1, theta2, theta3)
}

/// Boundary condition on `V \ V_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum BoundarySpec {
    #[default]
    Free,
    /// Every vertex outside the volume carries this spin.
    Uniform(Spin),
}

impl FromStr for BoundarySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("free") {
            return Ok(BoundarySpec::Free);
        }
        let value: u8 = s
            .parse()
            .map_err(|_| Error::Parse(format!("unknown boundary `{s}`")))?;
        Ok(BoundarySpec::Uniform(Spin::new(value)?))
    }
}

impl TryFrom<String> for BoundarySpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BoundarySpec> for String {
    fn from(b: BoundarySpec) -> String {
        b.to_string()
    }
}

impl fmt::Display for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundarySpec::Free => f.write_str("free"),
            BoundarySpec::Uniform(spin) => write!(f, "{spin}"),
        }
    }
}

/// A spin for every vertex of a tree, in vertex-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinConfiguration(pub Vec<Spin>);

impl SpinConfiguration {
    pub fn uniform(tree: &CayleyTree, spin: Spin) -> Self {
        SpinConfiguration(vec![spin; tree.vertex_count()])
    }

    pub fn spins(&self) -> &[Spin] {
        &self.0
    }
}

/// Integer interaction counts of a configuration. The energy is linear in them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InteractionCounts {
    /// Aligned nearest-neighbor pairs (interior and boundary).
    pub nn: u32,
    /// Aligned sibling pairs.
    pub second: u32,
    /// Sum of the triple symbol, in halves.
    pub triple_halves: u32,
    /// Spins equal to 1.
    pub field: u32,
}

impl InteractionCounts {
    pub fn energy(&self, params: &ModelParams) -> f64 {
        -(params.j * f64::from(self.nn)
            + params.j1 * f64::from(self.second)
            + params.j2 * 0.5 * f64::from(self.triple_halves)
            + params.h * f64::from(self.field))
    }
}

/// Hamiltonian on `V_n` with a fixed boundary condition, prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    tree: CayleyTree,
    lists: InteractionLists,
    boundary: BoundarySpec,
    variant: TripleDeltaVariant,
}

impl Hamiltonian {
    pub fn new(tree: &CayleyTree, boundary: BoundarySpec, variant: TripleDeltaVariant) -> Self {
        Hamiltonian {
            tree: tree.clone(),
            lists: tree.interaction_lists(),
            boundary,
            variant,
        }
    }

    pub fn tree(&self) -> &CayleyTree {
        &self.tree
    }

    pub fn counts(&self, spins: &[Spin]) -> Result<InteractionCounts> {
        let expected = self.tree.vertex_count();
        if spins.len() != expected {
            return Err(Error::DomainMismatch {
                expected,
                got: spins.len(),
            });
        }
        Ok(self.counts_unchecked(spins))
    }

    /// Like [`Hamiltonian::counts`] without the length check.
    pub fn counts_unchecked(&self, spins: &[Spin]) -> InteractionCounts {
        let mut counts = InteractionCounts::default();
        for &(a, b) in &self.lists.nn_edges {
            counts.nn += u32::from(delta2(spins[a], spins[b]));
        }
        for &(a, b) in &self.lists.second_pairs {
            counts.second += u32::from(delta2(spins[a], spins[b]));
        }
        for t in &self.lists.triples {
            counts.triple_halves +=
                u32::from(delta3(spins[t.left], spins[t.center], spins[t.right], self.variant).0);
        }
        for &s in spins {
            counts.field += u32::from(delta2(Spin::ONE, s));
        }
        if let BoundarySpec::Uniform(outside) = self.boundary {
            // Each leaf has two children outside V_n. Their sibling bond lies
            // entirely outside and does not contribute.
            for leaf in self.tree.leaves() {
                let s = spins[leaf];
                counts.nn += 2 * u32::from(delta2(s, outside));
                counts.triple_halves += u32::from(delta3(outside, s, outside, self.variant).0);
            }
        }
        counts
    }

    pub fn energy(&self, spins: &[Spin], params: &ModelParams) -> Result<f64> {
        Ok(self.counts(spins)?.energy(params))
    }
}

pub fn hamiltonian(
    config: &SpinConfiguration,
    tree: &CayleyTree,
    params: &ModelParams,
    boundary: BoundarySpec,
    variant: TripleDeltaVariant,
) -> Result<f64> {
    Hamiltonian::new(tree, boundary, variant).energy(config.spins(), params)
}

/// `-beta * H`, the logarithm of the Boltzmann weight.
pub fn boltzmann_weight(
    config: &SpinConfiguration,
    tree: &CayleyTree,
    params: &ModelParams,
    boundary: BoundarySpec,
    variant: TripleDeltaVariant,
) -> Result<f64> {
    Ok(-params.beta * hamiltonian(config, tree, params, boundary, variant)?)
}
