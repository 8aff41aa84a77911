//! Critical point counts of regular simplex-wise linear functions.
//!
//! Such a function is determined up to the counts that matter here by the
//! order of its vertex values. The contribution of `v` in degree `i` is
//! `β̃_{i−1}` of the span of the earlier vertices inside `lk v`; the global
//! minimum sees the empty span and contributes one to `μ_0`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::TightnessError;
use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::homology::SpanHomology;

/// A vertex ordering standing for the function; position is value rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RslOrdering {
    order: Vec<Vertex>,
}

impl RslOrdering {
    /// Checks that `order` lists every vertex of `m` exactly once.
    pub fn new(m: &SimplicialComplex, order: Vec<Vertex>) -> Result<Self, TightnessError> {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(TightnessError::BadOrdering("repeated vertex".into()));
        }
        if sorted != m.vertices() {
            return Err(TightnessError::BadOrdering(format!(
                "{} labels given for {} vertices, or labels outside the complex",
                order.len(),
                m.num_vertices()
            )));
        }
        Ok(RslOrdering { order })
    }

    /// Increasing label order.
    pub fn natural(m: &SimplicialComplex) -> Self {
        RslOrdering { order: m.vertices().to_vec() }
    }

    /// Uniform random ordering from a seeded ChaCha8 stream.
    pub fn seeded(m: &SimplicialComplex, seed: u64) -> Self {
        let mut order = m.vertices().to_vec();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        RslOrdering { order }
    }

    /// The ordering of `−f`.
    pub fn reversed(&self) -> Self {
        RslOrdering { order: self.order.iter().rev().copied().collect() }
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }
}

/// Morse multiplicities `μ_0..μ_d` with the contribution of each vertex,
/// listed in ordering position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuVector {
    pub mu: Vec<u64>,
    pub per_vertex: Vec<(Vertex, Vec<u64>)>,
}

impl MuVector {
    pub fn alternating_sum(&self) -> i64 {
        self.mu.iter().enumerate().map(|(i, &m)| if i % 2 == 0 { m as i64 } else { -(m as i64) }).sum()
    }

    /// `μ_i ≥ β_i` for every `i` present in both.
    pub fn dominates(&self, betti: &[u64]) -> bool {
        self.mu.iter().zip(betti).all(|(m, b)| m >= b)
    }

    /// Vertices with a nonzero contribution.
    pub fn critical_vertices(&self) -> Vec<Vertex> {
        self.per_vertex.iter().filter(|(_, c)| c.iter().any(|&x| x > 0)).map(|(v, _)| *v).collect()
    }
}

/// Link homology engines for every vertex, reused across orderings.
#[derive(Clone, Debug)]
pub struct MorseEngine {
    d: usize,
    vertices: Vec<Vertex>,
    links: Vec<SpanHomology>,
}

impl MorseEngine {
    pub fn new(m: &SimplicialComplex) -> Result<Self, TightnessError> {
        let d = m.dim().filter(|_| m.is_pure()).ok_or(TightnessError::NotPure)?;
        let vertices = m.vertices().to_vec();
        let links = vertices
            .par_iter()
            .map(|&v| m.link(&Simplex::from_sorted(vec![v])).map(|l| SpanHomology::new(&l)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MorseEngine { d, vertices, links })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn mu_vector(&self, f: &RslOrdering) -> MuVector {
        let mut mu = vec![0u64; self.d + 1];
        let mut per_vertex = Vec::with_capacity(f.order.len());
        for (p, &v) in f.order.iter().enumerate() {
            let idx = self.vertices.binary_search(&v).expect("ordering validated against the complex");
            let link = &self.links[idx];
            let mask = link.mask_of(f.order[..p].iter().copied());
            let mut c = link.reduced_betti(&mask, self.d.saturating_sub(1));
            c.resize(self.d + 1, 0);
            for (m, x) in mu.iter_mut().zip(&c) {
                *m += x;
            }
            per_vertex.push((v, c));
        }
        MuVector { mu, per_vertex }
    }
}

/// `μ(f)` for a single ordering.
pub fn mu_vector(m: &SimplicialComplex, f: &RslOrdering) -> Result<MuVector, TightnessError> {
    Ok(MorseEngine::new(m)?.mu_vector(f))
}

/// `μ`-vectors of `count` seeded random orderings (seeds `seed..seed+count`),
/// tallied by value.
pub fn mu_histogram(
    m: &SimplicialComplex,
    count: usize,
    seed: u64,
) -> Result<BTreeMap<Vec<u64>, usize>, TightnessError> {
    let engine = MorseEngine::new(m)?;
    let mus: Vec<Vec<u64>> = (0..count as u64)
        .into_par_iter()
        .map(|i| engine.mu_vector(&RslOrdering::seeded(m, seed.wrapping_add(i))).mu)
        .collect();
    let mut hist = BTreeMap::new();
    for mu in mus {
        *hist.entry(mu).or_insert(0) += 1;
    }
    Ok(hist)
}
