//! Bistellar moves on closed pseudomanifolds.
//!
//! A move is a pair `(A, B)` of disjoint simplices with `|A| + |B| = d + 2`.
//! It is valid on `M` when `A ∈ M`, `B ∉ M` and `lk_M(A) = ∂B`; applying it
//! replaces `A ∗ ∂B` by `∂A ∗ B`. The index of the move is `|B| − 1`, so a
//! 0-move subdivides the facet `A` with the new vertex `B`, and a `d`-move
//! removes a vertex of degree `d + 1`.

mod anneal;
mod stacked;

pub use anneal::{vertex_reduce, AnnealConfig, ReduceOutcome};
pub use stacked::{
    k_stacked_exact, stackedness_certificate, verify_stacking_ball, ExactOutcome, Stackedness, DEFAULT_EXACT_CEILING,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{to_text, ComplexError, Simplex, SimplicialComplex, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BistellarError {
    #[error("complex is not pure")]
    NotPure,
    #[error("complex is not a closed pseudomanifold")]
    NotClosed,
    #[error("move has |A| + |B| = {got}, expected {expected}")]
    WrongSize { got: usize, expected: usize },
    #[error("A and B share a vertex")]
    Overlap,
    #[error("A = {0} is not a face")]
    MissingFace(Simplex),
    #[error("B = {0} is already a face")]
    CofactorPresent(Simplex),
    #[error("link of A = {0} is not the boundary of B")]
    LinkMismatch(Simplex),
    #[error("k = {k} outside 1..={max} for the move-based certificate")]
    KOutOfRange { k: usize, max: usize },
    #[error("certificate start hash does not match the input complex")]
    StartMismatch,
    #[error("certificate end hash mismatch after replay")]
    EndMismatch,
    #[error("certificate move {step} is invalid: {reason}")]
    InvalidStep { step: usize, reason: String },
    #[error("certificate records max index {recorded}, moves use {actual}")]
    MaxIndexMismatch { recorded: usize, actual: usize },
    #[error("homology changed at accepted move {0}")]
    HomologyChanged(usize),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Replace `A ∗ ∂B` by `∂A ∗ B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BistellarMove {
    #[serde(rename = "A")]
    pub a: Simplex,
    #[serde(rename = "B")]
    pub b: Simplex,
}

impl BistellarMove {
    pub fn new(a: Simplex, b: Simplex) -> Self {
        BistellarMove { a, b }
    }

    pub fn index(&self) -> usize {
        self.b.len() - 1
    }

    /// Dimension of the complexes this move acts on.
    pub fn dim(&self) -> usize {
        self.a.len() + self.b.len() - 2
    }

    pub fn inverse(&self) -> Self {
        BistellarMove { a: self.b.clone(), b: self.a.clone() }
    }

    /// Change of the f-vector `(f_0, …, f_d)`: faces `B ∪ S` for proper
    /// `S ⊂ A` appear and faces `A ∪ S′` for proper `S′ ⊂ B` disappear.
    pub fn f_delta(&self) -> Vec<i64> {
        let (p, q) = (self.a.len(), self.b.len());
        (0..=self.dim())
            .map(|j| {
                let size = j + 1;
                let gained = if size >= q && size - q < p { binom(p, size - q) } else { 0 };
                let lost = if size >= p && size - p < q { binom(q, size - p) } else { 0 };
                gained - lost
            })
            .collect()
    }

    fn removed_facets(&self) -> Vec<Simplex> {
        self.b.vertices().iter().map(|&v| self.b.without(v).map_or_else(|| self.a.clone(), |r| r.union(&self.a))).collect()
    }

    fn added_facets(&self) -> Vec<Simplex> {
        self.a.vertices().iter().map(|&v| self.a.without(v).map_or_else(|| self.b.clone(), |r| r.union(&self.b))).collect()
    }
}

fn binom(n: usize, k: usize) -> i64 {
    crate::complex::binomial_u128(n as u64, k as u64) as i64
}

/// 128-bit fingerprint of the canonical text export, as 32 hex digits.
pub fn complex_hash(k: &SimplicialComplex) -> String {
    let digest = Sha256::digest(to_text(k).as_bytes());
    hex::encode(&digest[..16])
}

/// Checks validity of `mv` on `m`, naming the first failing clause.
pub fn check_move(m: &SimplicialComplex, mv: &BistellarMove) -> Result<(), BistellarError> {
    if !m.is_pure() {
        return Err(BistellarError::NotPure);
    }
    let d = m.dim().unwrap_or(0);
    let size = mv.a.len() + mv.b.len();
    if size != d + 2 {
        return Err(BistellarError::WrongSize { got: size, expected: d + 2 });
    }
    if !mv.a.is_disjoint(&mv.b) {
        return Err(BistellarError::Overlap);
    }
    if !m.contains_face(&mv.a) {
        return Err(BistellarError::MissingFace(mv.a.clone()));
    }
    let b_present = if mv.b.len() == 1 { m.has_vertex(mv.b.vertices()[0]) } else { m.contains_face(&mv.b) };
    if b_present {
        return Err(BistellarError::CofactorPresent(mv.b.clone()));
    }
    let actual: BTreeSet<&Simplex> = m.facets_containing(&mv.a).collect();
    let expected = mv.removed_facets();
    if actual.len() != expected.len() || !expected.iter().all(|f| actual.contains(f)) {
        return Err(BistellarError::LinkMismatch(mv.a.clone()));
    }
    Ok(())
}

pub fn apply_move(m: &SimplicialComplex, mv: &BistellarMove) -> Result<SimplicialComplex, BistellarError> {
    check_move(m, mv)?;
    let removed: BTreeSet<Simplex> = mv.removed_facets().into_iter().collect();
    let mut facets: Vec<Simplex> = m.facets().iter().filter(|f| !removed.contains(*f)).cloned().collect();
    facets.extend(mv.added_facets());
    facets.sort();
    Ok(SimplicialComplex::from_canonical_facets(facets))
}

/// All valid moves whose index lies in `indices`, sorted. Index-0 moves use
/// the fresh label `max_label + 1`.
pub fn valid_moves(m: &SimplicialComplex, indices: &[usize]) -> Result<Vec<BistellarMove>, BistellarError> {
    if !m.is_pure() {
        return Err(BistellarError::NotPure);
    }
    let w = Working::new(m);
    let mut out = Vec::new();
    for &i in indices {
        out.extend(w.moves_of_index(i));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Mutable facet set with a per-vertex incidence index, for move search.
#[derive(Clone, Debug)]
pub(crate) struct Working {
    pub(crate) d: usize,
    facets: BTreeSet<Simplex>,
    by_vertex: BTreeMap<Vertex, BTreeSet<Simplex>>,
}

impl Working {
    pub(crate) fn new(m: &SimplicialComplex) -> Self {
        let mut w = Working { d: m.dim().unwrap_or(0), facets: BTreeSet::new(), by_vertex: BTreeMap::new() };
        for f in m.facets() {
            w.insert(f.clone());
        }
        w
    }

    fn insert(&mut self, f: Simplex) {
        for &v in f.vertices() {
            self.by_vertex.entry(v).or_default().insert(f.clone());
        }
        self.facets.insert(f);
    }

    fn remove(&mut self, f: &Simplex) {
        for v in f.vertices() {
            let set = self.by_vertex.get_mut(v).expect("indexed vertex");
            set.remove(f);
            if set.is_empty() {
                self.by_vertex.remove(v);
            }
        }
        self.facets.remove(f);
    }

    pub(crate) fn num_vertices(&self) -> usize {
        self.by_vertex.len()
    }

    pub(crate) fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub(crate) fn max_label(&self) -> Vertex {
        self.by_vertex.keys().next_back().copied().unwrap_or(0)
    }

    pub(crate) fn facets(&self) -> impl Iterator<Item = &Simplex> {
        self.facets.iter()
    }

    fn containing<'a>(&'a self, a: &'a Simplex) -> impl Iterator<Item = &'a Simplex> + 'a {
        let pivot = a.vertices().iter().min_by_key(|v| self.by_vertex.get(v).map_or(0, BTreeSet::len)).expect("nonempty");
        self.by_vertex.get(pivot).into_iter().flatten().filter(move |f| a.is_subset_of(f))
    }

    pub(crate) fn is_face(&self, s: &Simplex) -> bool {
        s.vertices().iter().all(|v| self.by_vertex.contains_key(v)) && self.containing(s).next().is_some()
    }

    /// The unique valid move removing the face `a`, if any.
    pub(crate) fn move_at(&self, a: &Simplex) -> Option<BistellarMove> {
        if a.len() == self.d + 1 {
            return self.facets.contains(a).then(|| {
                BistellarMove::new(a.clone(), Simplex::from_sorted(vec![self.max_label() + 1]))
            });
        }
        let b = self.link_partner(a)?;
        (!self.is_face(&b)).then(|| BistellarMove::new(a.clone(), b))
    }

    /// For a face `a` with `|a| ≤ d` whose link is the boundary of a simplex
    /// `b` on the remaining `d + 2 − |a|` vertices, that `b`. The move `(a, b)`
    /// is valid iff `b` is not a face.
    pub(crate) fn link_partner(&self, a: &Simplex) -> Option<Simplex> {
        let d = self.d;
        if a.is_empty() || a.len() > d {
            return None;
        }
        let want = d + 2 - a.len();
        let mut union: BTreeSet<Vertex> = BTreeSet::new();
        let mut count = 0;
        for f in self.containing(a) {
            count += 1;
            if count > want {
                return None;
            }
            union.extend(f.vertices());
        }
        if count != want || union.len() != d + 2 {
            return None;
        }
        Some(Simplex::from_sorted(union.into_iter().filter(|v| !a.contains(*v)).collect()))
    }

    /// All valid moves of index `i`, sorted by `A`.
    pub(crate) fn moves_of_index(&self, i: usize) -> Vec<BistellarMove> {
        if i > self.d {
            return Vec::new();
        }
        let size = self.d + 1 - i;
        let faces: BTreeSet<Simplex> = self.facets.iter().flat_map(|f| f.subfaces(size)).collect();
        faces.iter().filter_map(|a| self.move_at(a)).collect()
    }

    /// Applies a move known to be valid.
    pub(crate) fn apply(&mut self, mv: &BistellarMove) {
        for f in mv.removed_facets() {
            debug_assert!(self.facets.contains(&f));
            self.remove(&f);
        }
        for f in mv.added_facets() {
            self.insert(f);
        }
    }

    pub(crate) fn to_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_canonical_facets(self.facets.iter().cloned().collect())
    }

    /// Boundary of the `(d+1)`-simplex.
    pub(crate) fn is_simplex_boundary(&self) -> bool {
        self.num_vertices() == self.d + 2 && self.num_facets() == self.d + 2
    }
}

/// A replayable sequence of moves between two fingerprinted complexes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCertificate {
    pub start: String,
    pub moves: Vec<BistellarMove>,
    pub end: String,
    pub max_index_used: usize,
}

impl MoveCertificate {
    pub fn new(start: &SimplicialComplex, moves: Vec<BistellarMove>, end: &SimplicialComplex) -> Self {
        let max_index_used = moves.iter().map(BistellarMove::index).max().unwrap_or(0);
        MoveCertificate { start: complex_hash(start), moves, end: complex_hash(end), max_index_used }
    }

    /// Replays the moves from `start`, checking every step and both hashes.
    /// Returns the end complex.
    pub fn verify(&self, start: &SimplicialComplex) -> Result<SimplicialComplex, BistellarError> {
        if complex_hash(start) != self.start {
            return Err(BistellarError::StartMismatch);
        }
        let actual = self.moves.iter().map(BistellarMove::index).max().unwrap_or(0);
        if actual != self.max_index_used {
            return Err(BistellarError::MaxIndexMismatch { recorded: self.max_index_used, actual });
        }
        let mut current = start.clone();
        for (step, mv) in self.moves.iter().enumerate() {
            current = apply_move(&current, mv)
                .map_err(|e| BistellarError::InvalidStep { step, reason: e.to_string() })?;
        }
        if complex_hash(&current) != self.end {
            return Err(BistellarError::EndMismatch);
        }
        Ok(current)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ComplexError> {
        serde_json::from_str(s).map_err(|e| ComplexError::Json(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[Vertex]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn sphere(n: u32) -> SimplicialComplex {
        let all: Vec<u32> = (1..=n).collect();
        let facets: Vec<Vec<u32>> = (0..n as usize)
            .map(|skip| all.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect())
            .collect();
        SimplicialComplex::from_facets(&facets).unwrap()
    }

    fn octahedron() -> SimplicialComplex {
        let mut f = Vec::new();
        for a in [1, 2] {
            for b in [3, 4] {
                for c in [5, 6] {
                    f.push(vec![a, b, c]);
                }
            }
        }
        SimplicialComplex::from_facets(&f).unwrap()
    }

    /// Moves found by trying every pair of disjoint vertex sets.
    fn brute_force_moves(m: &SimplicialComplex, index: usize) -> Vec<BistellarMove> {
        let d = m.dim().unwrap();
        let vs = m.vertices().to_vec();
        let mut out = Vec::new();
        for a in itertools::Itertools::combinations(vs.iter().copied(), d + 1 - index) {
            let rest: Vec<Vertex> = vs.iter().copied().filter(|v| !a.contains(v)).collect();
            for b in itertools::Itertools::combinations(rest.into_iter(), index + 1) {
                let mv = BistellarMove::new(s(&a), s(&b));
                if index > 0 && check_move(m, &mv).is_ok() {
                    out.push(mv);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn simplex_boundary_has_no_positive_index_moves() {
        for n in 4..8 {
            let k = sphere(n);
            let d = k.dim().unwrap();
            assert!(valid_moves(&k, &(1..=d).collect::<Vec<_>>()).unwrap().is_empty());
            assert_eq!(valid_moves(&k, &[0]).unwrap().len(), n as usize);
        }
    }

    #[test]
    fn octahedron_one_moves_match_brute_force() {
        let k = octahedron();
        let found = valid_moves(&k, &[1]).unwrap();
        assert_eq!(found, brute_force_moves(&k, 1));
        assert_eq!(found.len(), 12);
        assert!(found.contains(&BistellarMove::new(s(&[1, 3]), s(&[5, 6]))));
        assert!(valid_moves(&k, &[2]).unwrap().is_empty());
    }

    #[test]
    fn single_subdivision_vertex_removals() {
        // the new vertex and the old opposite vertex play symmetric roles
        let k = sphere(5);
        let sub = apply_move(&k, &BistellarMove::new(s(&[1, 2, 3, 4]), s(&[6]))).unwrap();
        let rev = valid_moves(&sub, &[3]).unwrap();
        assert_eq!(
            rev,
            vec![BistellarMove::new(s(&[5]), s(&[1, 2, 3, 4])), BistellarMove::new(s(&[6]), s(&[1, 2, 3, 4]))]
        );
        assert_eq!(rev, brute_force_moves(&sub, 3));
    }

    #[test]
    fn zero_move_counts_and_round_trip() {
        let k = sphere(4);
        let mv = BistellarMove::new(s(&[1, 2, 3]), s(&[5]));
        let sub = apply_move(&k, &mv).unwrap();
        assert_eq!(sub.f_vector().0, vec![5, 9, 6]);
        assert_eq!(mv.f_delta(), vec![1, 3, 2]);
        assert_eq!(apply_move(&sub, &mv.inverse()).unwrap(), k);
    }

    #[test]
    fn two_tetrahedra_one_move_round_trip() {
        // two tetrahedra glued along a triangle, closed up as a 3-sphere
        let k = apply_move(&sphere(5), &BistellarMove::new(s(&[1, 2, 3, 4]), s(&[6]))).unwrap();
        let mv = valid_moves(&k, &[1]).unwrap().into_iter().next().unwrap();
        let flipped = apply_move(&k, &mv).unwrap();
        let fk = k.f_vector().0;
        let delta = mv.f_delta();
        let expected: Vec<u64> = fk.iter().zip(&delta).map(|(&f, &d)| (f as i64 + d) as u64).collect();
        assert_eq!(flipped.f_vector().0, expected);
        assert_eq!(apply_move(&flipped, &mv.inverse()).unwrap(), k);
    }

    #[test]
    fn invalid_moves_name_the_clause() {
        let k = octahedron();
        assert!(matches!(apply_move(&k, &BistellarMove::new(s(&[1, 2]), s(&[3, 5]))), Err(BistellarError::MissingFace(_))));
        assert!(matches!(
            apply_move(&k, &BistellarMove::new(s(&[1, 3]), s(&[4, 5]))),
            Err(BistellarError::CofactorPresent(_))
        ));
        let k = sphere(5);
        let sub = apply_move(&k, &BistellarMove::new(s(&[1, 2, 3, 4]), s(&[6]))).unwrap();
        assert!(matches!(
            apply_move(&sub, &BistellarMove::new(s(&[1, 2, 3]), s(&[5, 7]))),
            Err(BistellarError::LinkMismatch(_))
        ));
        assert!(matches!(apply_move(&k, &BistellarMove::new(s(&[1]), s(&[2]))), Err(BistellarError::WrongSize { .. })));
    }

    #[test]
    fn certificate_replay_and_tamper() {
        let k = sphere(5);
        let m1 = BistellarMove::new(s(&[1, 2, 3, 4]), s(&[6]));
        let mid = apply_move(&k, &m1).unwrap();
        let m2 = valid_moves(&mid, &[1]).unwrap()[0].clone();
        let end = apply_move(&mid, &m2).unwrap();
        let cert = MoveCertificate::new(&k, vec![m1, m2], &end);
        assert_eq!(cert.verify(&k).unwrap(), end);
        let back = MoveCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(cert.to_json().starts_with("{\"start\":\""));
        let mut bad = cert.clone();
        bad.moves.pop();
        assert!(bad.verify(&k).is_err());
        let mut bad = cert.clone();
        bad.end = "0".repeat(32);
        assert_eq!(bad.verify(&k), Err(BistellarError::EndMismatch));
        assert_eq!(cert.verify(&mid), Err(BistellarError::StartMismatch));
    }
}
