use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Local group acting by conjugation on a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    /// SU(2)×SU(2) on two qubits.
    Su2xSu2,
    /// SU(2)×SU(3) on a qubit-qutrit pair.
    Su2xSu3,
}

impl GroupSpec {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupSpec::Su2xSu2 => "2x2",
            GroupSpec::Su2xSu3 => "2x3",
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "2x2" | "su2xsu2" => Ok(GroupSpec::Su2xSu2),
            "2x3" | "su2xsu3" => Ok(GroupSpec::Su2xSu3),
            _ => Err(Error::UnknownGroup(s.to_string())),
        }
    }
}

/// Torus weights of a representation together with the root data of the group.
///
/// `weights` is the full diagonal of `π(g)`. The first `factored_trivial` zero
/// weights are the ones pulled out as the `(1 − q)` prefactor of
/// `det(I − qπ(g)) = (1 − q)·Ψ`; [`WeightSystem::integrand_weights`] drops them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub rank: usize,
    pub weights: Vec<Vec<i32>>,
    pub roots: Vec<Vec<i32>>,
    pub weyl_order: u64,
    pub factored_trivial: usize,
}

// Adjoint-plus-trace diagonals in root coordinates.
fn su2_diagonal() -> Vec<Vec<i32>> {
    vec![vec![0], vec![0], vec![1], vec![-1]]
}

fn su3_diagonal() -> Vec<Vec<i32>> {
    vec![
        vec![0, 0],
        vec![0, 0],
        vec![0, 0],
        vec![1, 0],
        vec![0, 1],
        vec![1, 1],
        vec![-1, 0],
        vec![0, -1],
        vec![-1, -1],
    ]
}

fn with_negatives(positive: &[Vec<i32>]) -> Vec<Vec<i32>> {
    positive.iter().flat_map(|r| [r.clone(), r.iter().map(|x| -x).collect()]).collect()
}

/// Weight system of `π(g) = g₁ ⊗ g₂` acting on `ρ` by conjugation.
pub fn adjoint_weight_system(spec: GroupSpec) -> WeightSystem {
    let first = su2_diagonal();
    let (second, positive_roots, weyl_order) = match spec {
        GroupSpec::Su2xSu2 => (su2_diagonal(), vec![vec![1, 0], vec![0, 1]], 4),
        GroupSpec::Su2xSu3 => (
            su3_diagonal(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, 1, 1]],
            12,
        ),
    };
    let weights: Vec<Vec<i32>> = first
        .iter()
        .flat_map(|a| second.iter().map(move |b| a.iter().chain(b).copied().collect()))
        .collect();
    WeightSystem {
        rank: weights[0].len(),
        weights,
        roots: with_negatives(&positive_roots),
        weyl_order,
        factored_trivial: 1,
    }
}

impl WeightSystem {
    /// `m` zero weights, no roots: the free polynomial ring in `m` variables.
    pub fn trivial(dim: usize) -> Self {
        Self { rank: 1, weights: vec![vec![0]; dim], roots: Vec::new(), weyl_order: 1, factored_trivial: 0 }
    }

    pub fn parse(spec: &str) -> Result<Self> {
        Ok(adjoint_weight_system(spec.parse()?))
    }

    pub fn zero_weight_count(&self) -> usize {
        self.weights.iter().filter(|w| w.iter().all(|&x| x == 0)).count()
    }

    /// Weights of `Ψ`: all weights with `factored_trivial` zeros removed.
    pub fn integrand_weights(&self) -> Vec<Vec<i32>> {
        let mut skip = self.factored_trivial;
        self.weights
            .iter()
            .filter(|w| {
                if skip > 0 && w.iter().all(|&x| x == 0) {
                    skip -= 1;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect()
    }

    /// Roots whose first non-zero coordinate is positive.
    pub fn positive_roots(&self) -> Vec<Vec<i32>> {
        self.roots
            .iter()
            .filter(|r| r.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0))
            .cloned()
            .collect()
    }

    pub fn max_abs_weight_coordinate(&self) -> i32 {
        self.weights.iter().flatten().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Per-coordinate sums of the weights; zero for a self-dual representation.
    pub fn coordinate_sums(&self) -> Vec<i32> {
        (0..self.rank).map(|i| self.weights.iter().map(|w| w[i]).sum()).collect()
    }

    pub fn roots_paired(&self) -> bool {
        multiset_closed_under_negation(&self.roots)
    }

    pub fn weights_paired(&self) -> bool {
        multiset_closed_under_negation(&self.weights)
    }
}

fn multiset_closed_under_negation(v: &[Vec<i32>]) -> bool {
    let mut a: Vec<Vec<i32>> = v.to_vec();
    let mut b: Vec<Vec<i32>> = v.iter().map(|w| w.iter().map(|x| -x).collect()).collect();
    a.sort();
    b.sort();
    a == b
}
