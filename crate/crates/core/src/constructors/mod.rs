//! Generators for the complexes used throughout the toolkit, and the bundled
//! datasets.

mod datasets;

pub use datasets::{dataset, DATASET_NAMES};

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bistellar::{stackedness_certificate, BistellarError, Stackedness};
use crate::complex::{ComplexError, Simplex, SimplicialComplex, Vertex};
use crate::homology::betti_numbers;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("dimension {got} too small (need at least {min})")]
    DimensionTooSmall { got: usize, min: usize },
    #[error("{got} vertices requested, need at least {min}")]
    TooFewVertices { got: usize, min: usize },
    #[error("{0} is not a facet")]
    NotAFacet(Simplex),
    #[error("label {0} is already used")]
    LabelCollision(Vertex),
    #[error("facets share vertex {0}")]
    SharedVertex(Vertex),
    #[error("pairing is not a bijection between the two facets")]
    BadPairing,
    #[error("paired vertices {v} and {w} are at distance {distance} < 3")]
    TooClose { v: Vertex, w: Vertex, distance: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("complex is not pure")]
    NotPure,
    #[error("self-validation failed: {0}")]
    Validation(String),
    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Bistellar(#[from] BistellarError),
}

fn simplex(vs: Vec<Vertex>) -> Simplex {
    Simplex::new(vs).expect("generated simplex is valid")
}

/// `∂Δ^d` on the labels `1..=d+1`.
pub fn boundary_simplex(d: usize) -> Result<SimplicialComplex, ConstructError> {
    if d < 1 {
        return Err(ConstructError::DimensionTooSmall { got: d, min: 1 });
    }
    let n = d as Vertex + 1;
    Ok(SimplicialComplex::from_simplices((1..=n).map(|skip| simplex((1..=n).filter(|&v| v != skip).collect()))))
}

/// `∂β^d` on `1..=2d`; the diagonals `(2i−1, 2i)` are the missing edges.
pub fn cross_polytope_boundary(d: usize) -> Result<SimplicialComplex, ConstructError> {
    if d < 1 {
        return Err(ConstructError::DimensionTooSmall { got: d, min: 1 });
    }
    Ok(SimplicialComplex::from_simplices((0u32..1 << d).map(|bits| {
        simplex((0..d as u32).map(|i| 2 * i + 1 + (bits >> i & 1)).collect())
    })))
}

/// Replaces `facet` by the cone from `new_label` over its boundary.
pub fn stellar_subdivide(
    m: &SimplicialComplex,
    facet: &Simplex,
    new_label: Vertex,
) -> Result<SimplicialComplex, ConstructError> {
    if m.facets().binary_search(facet).is_err() {
        return Err(ConstructError::NotAFacet(facet.clone()));
    }
    if m.has_vertex(new_label) || new_label == 0 {
        return Err(ConstructError::LabelCollision(new_label));
    }
    let mut facets: Vec<Simplex> = m.facets().iter().filter(|f| *f != facet).cloned().collect();
    facets.extend(facet.vertices().iter().map(|&v| facet.without(v).map_or_else(
        || simplex(vec![new_label]),
        |r| r.with(new_label),
    )));
    Ok(SimplicialComplex::from_simplices(facets))
}

/// Stacked `d`-sphere on `n` vertices: `∂Δ^{d+1}` followed by stellar
/// subdivisions of facets chosen uniformly with a seeded generator. New
/// vertices get the labels `d+3, d+4, …`.
pub fn stacked_sphere(d: usize, n: usize, seed: u64) -> Result<SimplicialComplex, ConstructError> {
    if n < d + 2 {
        return Err(ConstructError::TooFewVertices { got: n, min: d + 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k = boundary_simplex(d + 1)?;
    for label in (d + 3)..=n {
        let facet = k.facets()[rng.gen_range(0..k.facets().len())].clone();
        k = stellar_subdivide(&k, &facet, label as Vertex)?;
    }
    Ok(k)
}

/// Identification of two disjoint facets of one complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleGluing {
    pub facet1: Simplex,
    pub facet2: Simplex,
    /// Pairs `(v, w)` with `v ∈ facet1`, `w ∈ facet2`.
    pub pairing: Vec<(Vertex, Vertex)>,
}

fn check_pairing(f1: &Simplex, f2: &Simplex, pairing: &[(Vertex, Vertex)]) -> Result<(), ConstructError> {
    let mut left: Vec<Vertex> = pairing.iter().map(|p| p.0).collect();
    let mut right: Vec<Vertex> = pairing.iter().map(|p| p.1).collect();
    left.sort_unstable();
    right.sort_unstable();
    if left != f1.vertices() || right != f2.vertices() {
        return Err(ConstructError::BadPairing);
    }
    Ok(())
}

/// Removes both facets and merges each pair `(v, w)` into `v`. Requires
/// graph distance `≥ 3` for every pair.
pub fn handle_addition(m: &SimplicialComplex, g: &HandleGluing) -> Result<SimplicialComplex, ConstructError> {
    for f in [&g.facet1, &g.facet2] {
        if m.facets().binary_search(f).is_err() {
            return Err(ConstructError::NotAFacet(f.clone()));
        }
    }
    if let Some(&v) = g.facet1.vertices().iter().find(|v| g.facet2.contains(**v)) {
        return Err(ConstructError::SharedVertex(v));
    }
    check_pairing(&g.facet1, &g.facet2, &g.pairing)?;
    for &(v, w) in &g.pairing {
        let distance = m.graph_distances(v).get(&w).copied().unwrap_or(usize::MAX);
        if distance < 3 {
            return Err(ConstructError::TooClose { v, w, distance });
        }
    }
    let merge: HashMap<Vertex, Vertex> = g.pairing.iter().map(|&(v, w)| (w, v)).collect();
    Ok(SimplicialComplex::from_simplices(m.facets().iter().filter(|f| **f != g.facet1 && **f != g.facet2).map(|f| {
        simplex(f.vertices().iter().map(|v| merge.get(v).copied().unwrap_or(*v)).collect())
    })))
}

/// Connected sum along `facet1 ∈ m1` and `facet2 ∈ m2`, gluing `w ∈ facet2`
/// to `v ∈ facet1` for each pair `(v, w)`; `None` pairs the facets in sorted
/// order. Labels of `m2` are shifted past those of `m1` when they overlap.
pub fn connected_sum(
    m1: &SimplicialComplex,
    m2: &SimplicialComplex,
    facet1: &Simplex,
    facet2: &Simplex,
    pairing: Option<&[(Vertex, Vertex)]>,
) -> Result<SimplicialComplex, ConstructError> {
    let (d1, d2) = (m1.dim().unwrap_or(0), m2.dim().unwrap_or(0));
    if d1 != d2 {
        return Err(ConstructError::DimensionMismatch(d1, d2));
    }
    if m1.facets().binary_search(facet1).is_err() {
        return Err(ConstructError::NotAFacet(facet1.clone()));
    }
    if m2.facets().binary_search(facet2).is_err() {
        return Err(ConstructError::NotAFacet(facet2.clone()));
    }
    let pairs: Vec<(Vertex, Vertex)> = match pairing {
        Some(p) => p.to_vec(),
        None => facet1.vertices().iter().copied().zip(facet2.vertices().iter().copied()).collect(),
    };
    check_pairing(facet1, facet2, &pairs)?;
    let glue: HashMap<Vertex, Vertex> = pairs.iter().map(|&(v, w)| (w, v)).collect();
    let overlap = m2.vertices().iter().any(|&v| !glue.contains_key(&v) && m1.has_vertex(v));
    let shift = if overlap { m1.max_label() } else { 0 };
    let rename = |v: Vertex| glue.get(&v).copied().unwrap_or(v + shift);
    let mut facets: Vec<Simplex> = m1.facets().iter().filter(|f| *f != facet1).cloned().collect();
    facets.extend(
        m2.facets().iter().filter(|f| *f != facet2).map(|f| simplex(f.vertices().iter().map(|&v| rename(v)).collect())),
    );
    Ok(SimplicialComplex::from_simplices(facets))
}

/// Staircase triangulation of `|K1| × |K2|`. The vertex `(x, y)` gets the
/// label `i·n2 + j + 1`, where `i`, `j` are the positions of `x`, `y` in the
/// sorted vertex lists and `n2 = f_0(K2)`. Each pair of facets contributes
/// one facet per monotone lattice path through its grid.
pub fn simplicial_product(k1: &SimplicialComplex, k2: &SimplicialComplex) -> Result<SimplicialComplex, ConstructError> {
    if !k1.is_pure() || !k2.is_pure() {
        return Err(ConstructError::NotPure);
    }
    let n2 = k2.num_vertices() as Vertex;
    let label = |x: Vertex, y: Vertex| k1.vertex_index(x) as Vertex * n2 + k2.vertex_index(y) as Vertex + 1;
    let mut facets = Vec::new();
    for f in k1.facets() {
        for g in k2.facets() {
            let (p, q) = (f.dim(), g.dim());
            for ups in itertools::Itertools::combinations(0..p + q, q) {
                let (mut i, mut j) = (0, 0);
                let mut path = vec![label(f.vertices()[0], g.vertices()[0])];
                for step in 0..p + q {
                    if ups.contains(&step) {
                        j += 1;
                    } else {
                        i += 1;
                    }
                    path.push(label(f.vertices()[i], g.vertices()[j]));
                }
                facets.push(simplex(path));
            }
        }
    }
    Ok(SimplicialComplex::from_simplices(facets))
}

/// `∂C(d, n)`: the `d`-subsets of `1..=n` satisfying Gale's evenness
/// condition.
pub fn cyclic_polytope_boundary(d: usize, n: usize) -> Result<SimplicialComplex, ConstructError> {
    if d < 1 {
        return Err(ConstructError::DimensionTooSmall { got: d, min: 1 });
    }
    if n <= d {
        return Err(ConstructError::TooFewVertices { got: n, min: d + 1 });
    }
    let facets = itertools::Itertools::combinations(1..=n as Vertex, d).filter(|s| gale_even(s, n as Vertex)).map(simplex);
    Ok(SimplicialComplex::from_simplices(facets))
}

fn gale_even(s: &[Vertex], n: Vertex) -> bool {
    let outside: Vec<Vertex> = (1..=n).filter(|v| !s.contains(v)).collect();
    outside.windows(2).all(|w| s.iter().filter(|&&x| w[0] < x && x < w[1]).count() % 2 == 0)
}

/// The 2-neighborly `d`-manifold on `2d + 3` vertices with facets
/// `{i, …, i+d+1} \ {i+j}` for `i ∈ Z_{2d+3}`, `1 ≤ j ≤ d` (labels `i+1`).
/// The result is checked before it is returned: `2d + 3` vertices, closed
/// pseudomanifold, 2-neighborly, GF(2) Betti numbers of an `S^{d−1}`-bundle
/// over the circle, and a 1-stackedness certificate for every vertex link.
pub fn kuehnel_series(d: usize) -> Result<SimplicialComplex, ConstructError> {
    if d < 2 {
        return Err(ConstructError::DimensionTooSmall { got: d, min: 2 });
    }
    let n = 2 * d + 3;
    let facets = (0..n).flat_map(|i| {
        (1..=d).map(move |j| simplex((0..=d + 1).filter(|&t| t != j).map(|t| ((i + t) % n) as Vertex + 1).collect()))
    });
    let k = SimplicialComplex::from_simplices(facets);
    validate_sphere_bundle(&k, d)?;
    Ok(k)
}

fn validate_sphere_bundle(k: &SimplicialComplex, d: usize) -> Result<(), ConstructError> {
    let fail = |msg: String| Err(ConstructError::Validation(msg));
    if k.num_vertices() != 2 * d + 3 {
        return fail(format!("{} vertices", k.num_vertices()));
    }
    if k.facets().len() != d * (2 * d + 3) {
        return fail(format!("{} facets", k.facets().len()));
    }
    if !k.pseudomanifold_check()?.is_closed_pseudomanifold() {
        return fail("not a closed pseudomanifold".into());
    }
    if !k.is_k_neighborly(2) {
        return fail("not 2-neighborly".into());
    }
    let mut expected = vec![0u64; d + 1];
    for j in [0, 1, d - 1, d] {
        expected[j] += 1;
    }
    let betti = betti_numbers(k).betti;
    if betti != expected {
        return fail(format!("Betti numbers {betti:?}, expected {expected:?}"));
    }
    for &v in k.vertices() {
        let link = k.link(&simplex(vec![v]))?;
        if !matches!(stackedness_certificate(&link, 1, 10_000, v as u64)?, Stackedness::Certified(_)) {
            return fail(format!("link of {v} not certified stacked"));
        }
    }
    Ok(())
}

/// Diagonal pairs of a complex whose missing edges form a perfect matching
/// of its vertices, sorted by smaller element.
pub fn diagonal_pairs(k: &SimplicialComplex) -> Option<Vec<(Vertex, Vertex)>> {
    let missing: Vec<(Vertex, Vertex)> =
        k.missing_faces(1).iter().map(|e| (e.vertices()[0], e.vertices()[1])).collect();
    let mut seen = BTreeMap::new();
    for &(a, b) in &missing {
        if seen.insert(a, b).is_some() || seen.insert(b, a).is_some() {
            return None;
        }
    }
    (seen.len() == k.num_vertices()).then_some(missing)
}

/// Relabels a complex whose missing edges form a perfect matching so that
/// the `i`-th diagonal (ordered by smaller element) becomes `(2i−1, 2i)`.
pub fn standardize_diagonals(k: &SimplicialComplex) -> Option<SimplicialComplex> {
    let pairs = diagonal_pairs(k)?;
    let map: HashMap<Vertex, Vertex> =
        pairs.iter().enumerate().flat_map(|(i, &(a, b))| [(a, 2 * i as Vertex + 1), (b, 2 * i as Vertex + 2)]).collect();
    k.relabel(|v| map[&v]).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        crate::complex::binomial_u128(n, k) as u64
    }

    #[test]
    fn simplex_and_cross_polytope_counts() {
        assert_eq!(cross_polytope_boundary(3).unwrap().f_vector().0, vec![6, 12, 8]);
        for d in 1..6u64 {
            let f = cross_polytope_boundary(d as usize).unwrap().f_vector().0;
            let expected: Vec<u64> = (0..d).map(|j| (1 << (j + 1)) * binom(d, j + 1)).collect();
            assert_eq!(f, expected);
        }
        assert!(boundary_simplex(7).unwrap().is_k_neighborly(7));
        assert!(boundary_simplex(0).is_err());
        let missing = cross_polytope_boundary(3).unwrap().missing_faces(1);
        assert_eq!(missing.len(), 3);
        assert_eq!(diagonal_pairs(&cross_polytope_boundary(4).unwrap()).unwrap(), vec![(1, 2), (3, 4), (5, 6), (7, 8)]);
    }

    #[test]
    fn subdivisions() {
        let t = boundary_simplex(3).unwrap();
        let s = stellar_subdivide(&t, &simplex(vec![1, 2, 3]), 5).unwrap();
        assert_eq!(s.f_vector().0, vec![5, 9, 6]);
        assert!(stellar_subdivide(&t, &simplex(vec![1, 2, 3]), 4).is_err());
        assert!(stellar_subdivide(&t, &simplex(vec![1, 2]), 5).is_err());
        assert_eq!(stacked_sphere(3, 13, 1).unwrap().f_vector().0, vec![13, 42, 58, 29]);
        assert_eq!(stacked_sphere(2, 4, 1).unwrap(), boundary_simplex(3).unwrap());
        assert_eq!(stacked_sphere(4, 7, 5).unwrap().num_vertices(), 7);
        assert!(stacked_sphere(3, 4, 0).is_err());
        assert_eq!(stacked_sphere(3, 11, 77).unwrap(), stacked_sphere(3, 11, 77).unwrap());
    }

    #[test]
    fn connected_sums() {
        let a = boundary_simplex(4).unwrap();
        let f = a.facets()[0].clone();
        let s = connected_sum(&a, &a, &f, &f, None).unwrap();
        assert_eq!(s.f_vector().0, vec![6, 14, 16, 8]);
        let twisted = connected_sum(&a, &a, &f, &f, Some(&[(1, 2), (2, 3), (3, 4), (4, 1)])).unwrap();
        assert_eq!(twisted.f_vector(), s.f_vector());
        assert!(connected_sum(&a, &boundary_simplex(3).unwrap(), &f, &simplex(vec![1, 2, 3]), None).is_err());
    }

    #[test]
    fn products() {
        let circle = boundary_simplex(2).unwrap();
        let points = boundary_simplex(1).unwrap();
        let p = simplicial_product(&circle, &points).unwrap();
        assert_eq!(p.f_vector().0, vec![6, 6]);
        assert_eq!(p.connected_components(), 2);
        let pt = SimplicialComplex::from_facets(&[vec![1]]).unwrap();
        assert_eq!(simplicial_product(&circle, &pt).unwrap(), circle);
        let torus = simplicial_product(&circle, &circle).unwrap();
        assert_eq!(torus.f_vector().0, vec![9, 27, 18]);
        assert_eq!(betti_numbers(&torus).betti, vec![1, 2, 1]);
    }

    #[test]
    fn cyclic_polytopes() {
        let c = cyclic_polytope_boundary(4, 6).unwrap();
        assert_eq!(c.f_vector().0, vec![6, 15, 18, 9]);
        assert!(c.is_k_neighborly(2));
        assert!(!c.missing_faces(2).is_empty());
        assert_eq!(cyclic_polytope_boundary(3, 4).unwrap(), boundary_simplex(3).unwrap());
        assert!(cyclic_polytope_boundary(4, 4).is_err());
    }

    #[test]
    fn kuehnel_members_validate() {
        let torus = kuehnel_series(2).unwrap();
        assert_eq!(torus.f_vector().0, vec![7, 21, 14]);
        let m3 = kuehnel_series(3).unwrap();
        assert_eq!(m3.f_vector().0, vec![9, 36, 54, 27]);
        assert_eq!(kuehnel_series(4).unwrap().num_vertices(), 11);
        assert!(kuehnel_series(1).is_err());
    }

    #[test]
    fn handle_distance_condition() {
        let s = stacked_sphere(3, 13, 2).unwrap();
        let f1 = s.facets()[0].clone();
        let near = s.facets().iter().find(|f| f.is_disjoint(&f1)).cloned();
        if let Some(f2) = near {
            let pairing: Vec<(Vertex, Vertex)> =
                f1.vertices().iter().copied().zip(f2.vertices().iter().copied()).collect();
            let g = HandleGluing { facet1: f1.clone(), facet2: f2.clone(), pairing };
            if let Err(e) = handle_addition(&s, &g) {
                assert!(matches!(e, ConstructError::TooClose { .. }));
            }
        }
        let oct = cross_polytope_boundary(3).unwrap();
        let g = HandleGluing {
            facet1: simplex(vec![1, 3, 5]),
            facet2: simplex(vec![2, 4, 6]),
            pairing: vec![(1, 2), (3, 4), (5, 6)],
        };
        assert!(matches!(handle_addition(&oct, &g), Err(ConstructError::TooClose { distance: 2, .. })));
    }
}
