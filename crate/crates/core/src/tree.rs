//! Finite Cayley tree of order two and its interaction structures.
//!
//! Vertices are indexed in level order with the root at `0`, so the children
//! of `i` are `2i + 1` and `2i + 2` and the parent of `i > 0` is `(i - 1) / 2`.
//! Level `m` holds the indices `2^m - 1 ..= 2^(m+1) - 2`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest depth that [`CayleyTree::new`] will materialize.
pub const MAX_TREE_DEPTH: u32 = 20;

/// Number of spin states.
pub const Q: usize = 3;

/// A Potts spin value in `{1, 2, 3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Spin(u8);

impl Spin {
    pub const ONE: Spin = Spin(1);
    pub const TWO: Spin = Spin(2);
    pub const THREE: Spin = Spin(3);
    pub const ALL: [Spin; Q] = [Spin::ONE, Spin::TWO, Spin::THREE];

    pub fn new(value: u8) -> Result<Self> {
        if (1..=3).contains(&value) {
            Ok(Spin(value))
        } else {
            Err(Error::SpinOutOfRange(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Zero-based position, handy for indexing `[_; 3]` arrays.
    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub fn from_index(index: usize) -> Spin {
        Spin::ALL[index]
    }
}

impl TryFrom<u8> for Spin {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Spin::new(value)
    }
}

impl From<Spin> for u8 {
    fn from(spin: Spin) -> u8 {
        spin.0
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An exact value in `{0, 1/2, 1}` stored as a count of halves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Halves(pub u8);

impl Halves {
    pub const ZERO: Halves = Halves(0);
    pub const HALF: Halves = Halves(1);
    pub const ONE: Halves = Halves(2);

    pub fn to_f64(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

/// Which Kronecker symbol to use on a triple of neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TripleDeltaVariant {
    /// `1` if all three agree, `1/2` if exactly one of the two bonds agrees, else `0`.
    #[default]
    Averaged,
    /// `1` if all three agree, else `0`.
    Strict,
}

impl FromStr for TripleDeltaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "averaged" => Ok(TripleDeltaVariant::Averaged),
            "strict" => Ok(TripleDeltaVariant::Strict),
            other => Err(Error::Parse(format!("unknown delta variant `{other}`"))),
        }
    }
}

impl fmt::Display for TripleDeltaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TripleDeltaVariant::Averaged => "averaged",
            TripleDeltaVariant::Strict => "strict",
        })
    }
}

/// Two-spin Kronecker symbol.
pub fn delta2(a: Spin, b: Spin) -> u8 {
    u8::from(a == b)
}

/// Three-spin Kronecker symbol for the triple `(x, y, z)` centred on `y`.
pub fn delta3(x: Spin, y: Spin, z: Spin, variant: TripleDeltaVariant) -> Halves {
    match variant {
        TripleDeltaVariant::Averaged => Halves(delta2(x, y) + delta2(y, z)),
        TripleDeltaVariant::Strict => {
            if x == y && y == z {
                Halves::ONE
            } else {
                Halves::ZERO
            }
        }
    }
}

/// A triple of neighbors `<left, center, right>`; `center` is the common parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Triple {
    pub left: usize,
    pub center: usize,
    pub right: usize,
}

/// The semi-infinite Cayley tree of order two truncated at `depth`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTree {
    depth: u32,
}

impl CayleyTree {
    pub fn new(depth: u32) -> Result<Self> {
        if depth > MAX_TREE_DEPTH {
            return Err(Error::DepthCap {
                depth,
                cap: MAX_TREE_DEPTH,
            });
        }
        Ok(CayleyTree { depth })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `|V_n| = 2^(n+1) - 1`.
    pub fn vertex_count(&self) -> usize {
        (1usize << (self.depth + 1)) - 1
    }

    /// `|W_m| = 2^m`, zero beyond the truncation depth.
    pub fn level_size(&self, level: u32) -> usize {
        if level > self.depth {
            0
        } else {
            1usize << level
        }
    }

    pub fn level_range(&self, level: u32) -> std::ops::Range<usize> {
        if level > self.depth {
            return 0..0;
        }
        let start = (1usize << level) - 1;
        start..start + (1usize << level)
    }

    pub fn level(&self, vertex: usize) -> u32 {
        debug_assert!(vertex < self.vertex_count());
        (vertex + 1).ilog2()
    }

    pub fn parent(&self, vertex: usize) -> Option<usize> {
        (vertex > 0 && vertex < self.vertex_count()).then(|| (vertex - 1) / 2)
    }

    /// Direct successors of `vertex`, or `None` on the last level.
    pub fn children(&self, vertex: usize) -> Option<(usize, usize)> {
        if vertex >= self.vertex_count() || self.level(vertex) == self.depth {
            None
        } else {
            Some((2 * vertex + 1, 2 * vertex + 2))
        }
    }

    /// Vertices on the outermost level `W_n`.
    pub fn leaves(&self) -> std::ops::Range<usize> {
        self.level_range(self.depth)
    }

    /// Vertices that have children, i.e. `V_{n-1}`.
    pub fn interior(&self) -> std::ops::Range<usize> {
        0..self.vertex_count() - self.level_size(self.depth)
    }

    pub fn interaction_lists(&self) -> InteractionLists {
        let mut lists = InteractionLists::default();
        for parent in self.interior() {
            let (left, right) = (2 * parent + 1, 2 * parent + 2);
            lists.nn_edges.push((parent, left));
            lists.nn_edges.push((parent, right));
            lists.second_pairs.push((left, right));
            lists.triples.push(Triple {
                left,
                center: parent,
                right,
            });
        }
        lists
    }
}

/// The four interaction structures of a finite tree.
///
/// For order two the endpoints of a triple are always a one-level
/// second-neighbor pair; the lists are still kept apart because they carry
/// different couplings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InteractionLists {
    /// `(parent, child)` nearest-neighbor pairs.
    pub nn_edges: Vec<(usize, usize)>,
    /// Sibling pairs on a common level.
    pub second_pairs: Vec<(usize, usize)>,
    pub triples: Vec<Triple>,
}
