//! Polyhedral Morse theory on vertex orderings, exact tightness checks via
//! injectivity of induced maps, and membership tests for the classes of
//! manifolds built from tight triangulations.

mod morse;
mod verify;

pub use morse::{mu_histogram, mu_vector, MorseEngine, MuVector, RslOrdering};
pub use verify::{
    central_symmetry, hamiltonian_check, tight_neighborly_check, tightness_verify, walkup_class_membership,
    LinkEvidence, Membership, TightNeighborlyReport, TightnessConfig, TightnessReport, Verdict,
    DEFAULT_SUBSET_CEILING,
};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bistellar::BistellarError;
use crate::bounds::BoundsError;
use crate::complex::{ComplexError, SimplicialComplex, Vertex};
use crate::constructors::diagonal_pairs;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TightnessError {
    #[error("ordering is not a bijection onto the vertex set: {0}")]
    BadOrdering(String),
    #[error("complex is not connected")]
    NotConnected,
    #[error("complex is empty or not pure")]
    NotPure,
    #[error("{vertices} vertices exceed the enumeration ceiling {ceiling}; pass a sample size")]
    TooManyVertices { vertices: usize, ceiling: usize },
    #[error("invalid diagonal pairing: {0}")]
    BadPairing(String),
    #[error("ambient polytope has {expected} vertices, complex has {got}")]
    VertexCountMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Bistellar(#[from] BistellarError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// The polytope whose half-spaces cut the complex: the simplex on its
/// vertices, or a cross polytope whose antipodal pairs are the diagonals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AmbientPolytope {
    Simplex(usize),
    CrossPolytope(Vec<(Vertex, Vertex)>),
}

impl AmbientPolytope {
    pub fn simplex_for(m: &SimplicialComplex) -> Self {
        AmbientPolytope::Simplex(m.num_vertices())
    }

    /// Cross polytope whose diagonals are the missing edges of `m`, when
    /// those form a perfect matching.
    pub fn cross_for(m: &SimplicialComplex) -> Result<Self, TightnessError> {
        diagonal_pairs(m)
            .map(AmbientPolytope::CrossPolytope)
            .ok_or_else(|| TightnessError::BadPairing("missing edges are not a perfect matching".into()))
    }

    /// Pairs `(2i−1, 2i)` for `i = 1..=n/2`.
    pub fn standard_cross(n: usize) -> Self {
        AmbientPolytope::CrossPolytope((1..=n as Vertex / 2).map(|i| (2 * i - 1, 2 * i)).collect())
    }

    pub fn name(&self) -> &'static str {
        match self {
            AmbientPolytope::Simplex(_) => "simplex",
            AmbientPolytope::CrossPolytope(_) => "cross",
        }
    }

    /// The ambient vertex count must match `m`; diagonals must partition
    /// `V(m)` into pairs that are missing edges of `m`.
    pub fn validate(&self, m: &SimplicialComplex) -> Result<(), TightnessError> {
        match self {
            AmbientPolytope::Simplex(n) => {
                if *n != m.num_vertices() {
                    return Err(TightnessError::VertexCountMismatch { expected: *n, got: m.num_vertices() });
                }
            }
            AmbientPolytope::CrossPolytope(pairs) => {
                if 2 * pairs.len() != m.num_vertices() {
                    return Err(TightnessError::VertexCountMismatch { expected: 2 * pairs.len(), got: m.num_vertices() });
                }
                let covered: BTreeSet<Vertex> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
                if covered.len() != m.num_vertices() || !covered.iter().eq(m.vertices().iter()) {
                    return Err(TightnessError::BadPairing("diagonals do not partition the vertex set".into()));
                }
                if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| m.neighbors().get(&a).is_some_and(|n| n.contains(&b))) {
                    return Err(TightnessError::BadPairing(format!("({a}, {b}) is an edge of the complex")));
                }
            }
        }
        Ok(())
    }
}

/// `μ_0 = μ_d = 1`: one critical point of index 0 and one of index `d`.
pub fn is_polar(mu: &MuVector) -> bool {
    mu.mu.len() >= 2 && mu.mu[0] == 1 && mu.mu[mu.mu.len() - 1] == 1
}

/// The lacunary pattern forcing tightness of a polar function on a
/// `d`-manifold: symmetric, vanishing at even indices `2 ≤ i ≤ ⌊d/2⌋`, and
/// for odd `d` also vanishing at the two middle indices.
pub fn lacunary_tight_pattern(mu: &MuVector, d: usize) -> bool {
    let m = &mu.mu;
    if m.len() != d + 1 || !is_polar(mu) {
        return false;
    }
    let symmetric = (0..=d).all(|i| m[i] == m[d - i]);
    let even_gaps = (2..=d / 2).step_by(2).all(|i| m[i] == 0);
    let middle = d.is_multiple_of(2) || (m[d / 2] == 0 && m[d.div_ceil(2)] == 0);
    symmetric && even_gaps && middle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::cross_polytope_boundary;

    fn mu(v: &[u64]) -> MuVector {
        MuVector { mu: v.to_vec(), per_vertex: Vec::new() }
    }

    #[test]
    fn lacunary_examples() {
        assert!(lacunary_tight_pattern(&mu(&[1, 0, 0, 1]), 3));
        assert!(lacunary_tight_pattern(&mu(&[1, 3, 0, 3, 1]), 4));
        assert!(!lacunary_tight_pattern(&mu(&[1, 0, 1, 0, 1]), 4));
        assert!(!lacunary_tight_pattern(&mu(&[1, 1, 1, 1]), 3));
        assert!(!lacunary_tight_pattern(&mu(&[1, 2, 0, 3, 1]), 4));
        assert!(!lacunary_tight_pattern(&mu(&[2, 0, 0, 2]), 3));
        assert!(lacunary_tight_pattern(&mu(&[1, 4, 0, 0, 4, 1]), 5));
        assert!(!lacunary_tight_pattern(&mu(&[1, 0, 0, 1]), 4));
        assert!(is_polar(&mu(&[1, 5, 1])) && !is_polar(&mu(&[1, 0, 2])));
    }

    #[test]
    fn ambient_validation() {
        let oct = cross_polytope_boundary(3).unwrap();
        let cross = AmbientPolytope::cross_for(&oct).unwrap();
        assert_eq!(cross, AmbientPolytope::standard_cross(6));
        cross.validate(&oct).unwrap();
        AmbientPolytope::simplex_for(&oct).validate(&oct).unwrap();
        assert!(matches!(AmbientPolytope::Simplex(5).validate(&oct), Err(TightnessError::VertexCountMismatch { .. })));
        let edge_pair = AmbientPolytope::CrossPolytope(vec![(1, 3), (2, 4), (5, 6)]);
        assert!(matches!(edge_pair.validate(&oct), Err(TightnessError::BadPairing(_))));
        let overlapping = AmbientPolytope::CrossPolytope(vec![(1, 2), (1, 2), (5, 6)]);
        assert!(matches!(overlapping.validate(&oct), Err(TightnessError::BadPairing(_))));
    }
}
