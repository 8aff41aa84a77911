//! Finite abstract simplicial complexes stored by their facets.
//!
//! A [`SimplicialComplex`] keeps only its inclusion-maximal faces, sorted
//! lexicographically. Lower-dimensional faces are enumerated on demand (and
//! cached) by deduplicating subsets of facets per dimension.

mod automorphism;
mod io;

pub use automorphism::{automorphisms, find_isomorphism, Permutation, DEFAULT_SEARCH_CEILING};
pub use io::{parse_json, parse_text, to_json, to_text, ComplexFile};

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex label. Labels are positive and kept verbatim.
pub type Vertex = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("complex has no facets")]
    Empty,
    #[error("facet {0} is empty")]
    EmptyFacet(usize),
    #[error("facet {index} repeats label {label}")]
    RepeatedLabel { index: usize, label: Vertex },
    #[error("vertex labels must be positive (facet {0} contains 0)")]
    ZeroLabel(usize),
    #[error("{0} is not a face of the complex")]
    NotAFace(Simplex),
    #[error("vertex {0} is not in the complex")]
    UnknownVertex(Vertex),
    #[error("complex is not pure")]
    NotPure,
    #[error("relabeling is not injective")]
    NonInjectiveRelabel,
    #[error("automorphism search ceiling exceeded: {vertices} vertices > {ceiling}")]
    SearchCeiling { vertices: usize, ceiling: usize },
    #[error("automorphism group larger than the order cap {0}")]
    OrderCap(usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("json error: {0}")]
    Json(String),
}

/// A simplex given by a strictly increasing list of vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Sorts the labels; rejects empty input, label 0 and duplicates.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self, ComplexError> {
        if vertices.is_empty() {
            return Err(ComplexError::EmptyFacet(0));
        }
        vertices.sort_unstable();
        if vertices[0] == 0 {
            return Err(ComplexError::ZeroLabel(0));
        }
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::RepeatedLabel { index: 0, label: w[0] });
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty());
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn is_disjoint(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| !other.contains(*v))
    }

    /// Vertices of `self` not in `other`; `None` when nothing is left.
    pub fn minus(&self, other: &Simplex) -> Option<Simplex> {
        let rest: Vec<Vertex> = self.0.iter().copied().filter(|v| !other.contains(*v)).collect();
        (!rest.is_empty()).then_some(Simplex(rest))
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut all: Vec<Vertex> = self.0.iter().chain(other.0.iter()).copied().collect();
        all.sort_unstable();
        all.dedup();
        Simplex(all)
    }

    pub fn without(&self, v: Vertex) -> Option<Simplex> {
        let rest: Vec<Vertex> = self.0.iter().copied().filter(|&w| w != v).collect();
        (!rest.is_empty()).then_some(Simplex(rest))
    }

    pub fn with(&self, v: Vertex) -> Simplex {
        let mut all = self.0.clone();
        if let Err(pos) = all.binary_search(&v) {
            all.insert(pos, v);
        }
        Simplex(all)
    }

    /// Codimension-one faces, in lexicographic order. Empty for a vertex.
    pub fn boundary(&self) -> Vec<Simplex> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        let mut faces: Vec<Simplex> = (0..self.0.len())
            .map(|skip| {
                Simplex(
                    self.0
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, v)| *v)
                        .collect(),
                )
            })
            .collect();
        faces.sort();
        faces
    }

    /// All nonempty subsets with exactly `size` vertices.
    pub fn subfaces(&self, size: usize) -> impl Iterator<Item = Simplex> + '_ {
        self.0.iter().copied().combinations(size).map(Simplex)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0.iter().join(","))
    }
}

pub(crate) fn is_sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for v in small {
        for w in it.by_ref() {
            if w == v {
                continue 'outer;
            }
            if w > v {
                return false;
            }
        }
        return false;
    }
    true
}

/// Face counts `(f_0, ..., f_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FVector(pub Vec<u64>);

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(j, &f)| if j % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    pub fn get(&self, j: usize) -> u64 {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// All faces of a complex, per dimension, in lexicographic order.
#[derive(Debug)]
pub struct FaceTable {
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl FaceTable {
    fn build(facets: &[Simplex]) -> Self {
        let top = facets.iter().map(Simplex::len).max().unwrap_or(0);
        let mut sets: Vec<HashSet<Simplex>> = vec![HashSet::new(); top];
        for facet in facets {
            for size in 1..=facet.len() {
                let set = &mut sets[size - 1];
                for face in facet.subfaces(size) {
                    set.insert(face);
                }
            }
        }
        let by_dim: Vec<Vec<Simplex>> = sets
            .into_iter()
            .map(|s| {
                let mut v: Vec<Simplex> = s.into_iter().collect();
                v.sort();
                v
            })
            .collect();
        let index = by_dim
            .iter()
            .map(|faces| faces.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        FaceTable { by_dim, index }
    }

    pub fn dims(&self) -> usize {
        self.by_dim.len()
    }

    pub fn faces(&self, j: usize) -> &[Simplex] {
        self.by_dim.get(j).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn position(&self, face: &Simplex) -> Option<usize> {
        self.index.get(face.dim())?.get(face).copied()
    }
}

/// Flags from [`SimplicialComplex::pseudomanifold_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudomanifoldReport {
    /// Every ridge lies in exactly two facets.
    pub closed: bool,
    /// Ridges lying in one facet, or in more than two.
    pub boundary_ridges: usize,
    pub singular_ridges: usize,
    /// The facet adjacency graph (through ridges) is connected.
    pub strongly_connected: bool,
    /// Connected components of the 1-skeleton.
    pub components: usize,
}

impl PseudomanifoldReport {
    pub fn is_closed_pseudomanifold(&self) -> bool {
        self.closed && self.strongly_connected
    }
}

#[derive(Clone)]
pub struct SimplicialComplex {
    facets: Vec<Simplex>,
    vertices: Vec<Vertex>,
    faces: OnceLock<std::sync::Arc<FaceTable>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("f_vector", &self.f_vector().0)
            .field("facets", &self.facets.len())
            .finish()
    }
}

impl SimplicialComplex {
    /// The complex with no faces.
    pub fn empty() -> Self {
        SimplicialComplex { facets: Vec::new(), vertices: Vec::new(), faces: OnceLock::new() }
    }

    /// Builds the canonical complex generated by `raw`; lists contained in
    /// other lists are absorbed.
    pub fn from_facets<L: AsRef<[Vertex]>>(raw: &[L]) -> Result<Self, ComplexError> {
        if raw.is_empty() {
            return Err(ComplexError::Empty);
        }
        let mut simplices = Vec::with_capacity(raw.len());
        for (index, list) in raw.iter().enumerate() {
            let simplex = Simplex::new(list.as_ref().to_vec()).map_err(|e| match e {
                ComplexError::EmptyFacet(_) => ComplexError::EmptyFacet(index),
                ComplexError::ZeroLabel(_) => ComplexError::ZeroLabel(index),
                ComplexError::RepeatedLabel { label, .. } => {
                    ComplexError::RepeatedLabel { index, label }
                }
                other => other,
            })?;
            simplices.push(simplex);
        }
        Ok(Self::from_simplices(simplices))
    }

    /// Canonicalizes any collection of simplices (may be empty).
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(simplices: I) -> Self {
        let mut all: Vec<Simplex> = simplices.into_iter().collect();
        all.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut kept: Vec<Simplex> = Vec::with_capacity(all.len());
        let mut by_vertex: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for s in all {
            let absorbed = by_vertex
                .get(&s.0[0])
                .map(|ids| ids.iter().any(|&i| kept[i].len() > s.len() && s.is_subset_of(&kept[i])))
                .unwrap_or(false);
            if absorbed {
                continue;
            }
            let id = kept.len();
            for &v in &s.0 {
                by_vertex.entry(v).or_default().push(id);
            }
            kept.push(s);
        }
        kept.sort();
        let vertices: BTreeSet<Vertex> = kept.iter().flat_map(|s| s.0.iter().copied()).collect();
        SimplicialComplex { facets: kept, vertices: vertices.into_iter().collect(), faces: OnceLock::new() }
    }

    /// Facets that are already canonical (sorted, duplicate free, maximal).
    pub(crate) fn from_canonical_facets(facets: Vec<Simplex>) -> Self {
        debug_assert!(facets.windows(2).all(|w| w[0] < w[1]));
        let vertices: BTreeSet<Vertex> = facets.iter().flat_map(|s| s.0.iter().copied()).collect();
        SimplicialComplex { facets, vertices: vertices.into_iter().collect(), faces: OnceLock::new() }
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn facet_lists(&self) -> Vec<Vec<Vertex>> {
        self.facets.iter().map(|s| s.0.clone()).collect()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn max_label(&self) -> Vertex {
        self.vertices.last().copied().unwrap_or(0)
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.facets.iter().map(Simplex::dim).max()
    }

    pub fn is_pure(&self) -> bool {
        self.facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn face_table(&self) -> &FaceTable {
        self.faces.get_or_init(|| std::sync::Arc::new(FaceTable::build(&self.facets)))
    }

    pub fn faces(&self, j: usize) -> &[Simplex] {
        self.face_table().faces(j)
    }

    pub fn contains_face(&self, face: &Simplex) -> bool {
        self.face_table().position(face).is_some()
    }

    pub fn f_vector(&self) -> FVector {
        let table = self.face_table();
        FVector((0..table.dims()).map(|j| table.faces(j).len() as u64).collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    pub fn facets_containing<'a>(&'a self, face: &'a Simplex) -> impl Iterator<Item = &'a Simplex> + 'a {
        self.facets.iter().filter(move |f| face.is_subset_of(f))
    }

    /// `lk(face) = { s : s ∩ face = ∅, s ∪ face ∈ K }`.
    pub fn link(&self, face: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains_face(face) {
            return Err(ComplexError::NotAFace(face.clone()));
        }
        Ok(Self::from_simplices(self.facets_containing(face).filter_map(|f| f.minus(face))))
    }

    /// Closed star: all faces whose union with `face` is a face.
    pub fn star(&self, face: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains_face(face) {
            return Err(ComplexError::NotAFace(face.clone()));
        }
        Ok(Self::from_simplices(self.facets_containing(face).cloned()))
    }

    /// Induced subcomplex on the vertex set `w`.
    pub fn span(&self, w: &[Vertex]) -> Result<SimplicialComplex, ComplexError> {
        if let Some(&v) = w.iter().find(|v| !self.has_vertex(**v)) {
            return Err(ComplexError::UnknownVertex(v));
        }
        let keep: HashSet<Vertex> = w.iter().copied().collect();
        Ok(Self::from_simplices(self.facets.iter().filter_map(|f| {
            let part: Vec<Vertex> = f.0.iter().copied().filter(|v| keep.contains(v)).collect();
            (!part.is_empty()).then_some(Simplex(part))
        })))
    }

    /// Every `k`-subset of vertices is a face.
    pub fn is_k_neighborly(&self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if k > self.num_vertices() {
            return false;
        }
        self.faces(k - 1).len() as u128 == binomial_u128(self.num_vertices() as u64, k as u64)
    }

    /// Non-faces of dimension `j` on the vertex set whose whole boundary is
    /// present (empty simplices). For `j = 1` these are the missing edges.
    pub fn missing_faces(&self, j: usize) -> Vec<Simplex> {
        if j == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for base in self.faces(j - 1) {
            let top = *base.0.last().unwrap();
            for &v in self.vertices.iter().filter(|&&v| v > top) {
                let candidate = base.with(v);
                if self.contains_face(&candidate) {
                    continue;
                }
                if candidate.boundary().iter().all(|b| self.contains_face(b)) {
                    out.push(candidate);
                }
            }
        }
        out.sort();
        out
    }

    /// Adjacency lists of the 1-skeleton.
    pub fn neighbors(&self) -> HashMap<Vertex, BTreeSet<Vertex>> {
        let mut adj: HashMap<Vertex, BTreeSet<Vertex>> =
            self.vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for e in self.faces(1) {
            adj.get_mut(&e.0[0]).unwrap().insert(e.0[1]);
            adj.get_mut(&e.0[1]).unwrap().insert(e.0[0]);
        }
        adj
    }

    /// Graph distances in the 1-skeleton from `source` (unreachable vertices absent).
    pub fn graph_distances(&self, source: Vertex) -> HashMap<Vertex, usize> {
        let adj = self.neighbors();
        let mut dist = HashMap::new();
        if !self.has_vertex(source) {
            return dist;
        }
        dist.insert(source, 0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for &w in &adj[&v] {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components of the 1-skeleton.
    pub fn connected_components(&self) -> usize {
        let mut dsu = Dsu::new(self.vertices.len());
        for f in &self.facets {
            let a = self.vertex_index(f.0[0]);
            for &v in &f.0[1..] {
                dsu.union(a, self.vertex_index(v));
            }
        }
        dsu.count()
    }

    pub(crate) fn vertex_index(&self, v: Vertex) -> usize {
        self.vertices.binary_search(&v).expect("vertex in complex")
    }

    pub fn pseudomanifold_check(&self) -> Result<PseudomanifoldReport, ComplexError> {
        if !self.is_pure() {
            return Err(ComplexError::NotPure);
        }
        let mut ridge_owners: HashMap<Simplex, Vec<usize>> = HashMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            for r in f.boundary() {
                ridge_owners.entry(r).or_default().push(i);
            }
        }
        let mut boundary_ridges = 0;
        let mut singular_ridges = 0;
        let mut dsu = Dsu::new(self.facets.len());
        for owners in ridge_owners.values() {
            match owners.len() {
                1 => boundary_ridges += 1,
                2 => {}
                _ => singular_ridges += 1,
            }
            for w in owners.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
        let top_is_vertex = self.facets.first().map(|f| f.len() == 1).unwrap_or(false);
        Ok(PseudomanifoldReport {
            closed: !top_is_vertex && boundary_ridges == 0 && singular_ridges == 0,
            boundary_ridges,
            singular_ridges,
            strongly_connected: dsu.count() <= 1,
            components: self.connected_components(),
        })
    }

    /// Ridges lying in exactly one facet (pure complexes only).
    pub fn boundary(&self) -> Result<SimplicialComplex, ComplexError> {
        if !self.is_pure() {
            return Err(ComplexError::NotPure);
        }
        let mut count: HashMap<Simplex, usize> = HashMap::new();
        for f in &self.facets {
            for r in f.boundary() {
                *count.entry(r).or_default() += 1;
            }
        }
        Ok(Self::from_simplices(count.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r)))
    }

    /// Applies an injective relabeling of vertices.
    pub fn relabel<F: Fn(Vertex) -> Vertex>(&self, map: F) -> Result<SimplicialComplex, ComplexError> {
        let images: HashSet<Vertex> = self.vertices.iter().map(|&v| map(v)).collect();
        if images.len() != self.vertices.len() || images.contains(&0) {
            return Err(ComplexError::NonInjectiveRelabel);
        }
        Ok(Self::from_simplices(self.facets.iter().map(|f| {
            let mut vs: Vec<Vertex> = f.0.iter().map(|&v| map(v)).collect();
            vs.sort_unstable();
            Simplex(vs)
        })))
    }

    /// Cone with apex `apex` (must be a fresh label).
    pub fn cone(&self, apex: Vertex) -> SimplicialComplex {
        assert!(!self.has_vertex(apex) && apex > 0, "cone apex must be a fresh positive label");
        if self.is_empty() {
            return Self::from_simplices([Simplex(vec![apex])]);
        }
        Self::from_canonical_facets(self.facets.iter().map(|f| f.with(apex)).sorted().collect())
    }

    /// Vertex degree in the 1-skeleton.
    pub fn degree(&self, v: Vertex) -> usize {
        self.faces(1).iter().filter(|e| e.contains(v)).count()
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
    components: usize,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), components: n }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.components -= 1;
        }
    }

    pub(crate) fn count(&self) -> usize {
        self.components
    }
}

pub(crate) fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
