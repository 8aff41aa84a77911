//! Exact tightness verification and class-membership checks.
//!
//! A triangulation is tight in its ambient polytope when every half-space
//! cut induces injective maps in homology. Half-spaces meet the vertex set
//! of the simplex in arbitrary subsets; on the cross polytope with vertices
//! `±e_i` the traces are exactly the sets meeting every diagonal at most once
//! or meeting every diagonal at least once. Each trace `W` is checked through
//! `ker(H_i(span W) → H_i(M)) = 0`.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{AmbientPolytope, TightnessError};
use crate::bistellar::{
    k_stacked_exact, stackedness_certificate, ExactOutcome, MoveCertificate, Stackedness, DEFAULT_EXACT_CEILING,
};
use crate::bounds::{heawood_bound, tight_neighborly_bound};
use crate::complex::{automorphisms, Permutation, Simplex, SimplicialComplex, Vertex};
use crate::homology::{betti_numbers, SpanHomology};

pub const DEFAULT_SUBSET_CEILING: usize = 20;

/// Largest automorphism group enumerated by [`central_symmetry`].
const SYMMETRY_ORDER_CAP: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessConfig {
    /// Highest homology degree checked; degree 0 is span connectivity.
    pub i_max: usize,
    /// Exhaustive enumeration is refused above this many vertices.
    pub ceiling: usize,
    /// Number of random admissible subsets to check instead, when above the ceiling.
    pub sample: Option<usize>,
    pub seed: u64,
}

impl TightnessConfig {
    pub fn new(i_max: usize) -> Self {
        TightnessConfig { i_max, ceiling: DEFAULT_SUBSET_CEILING, sample: None, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Tight,
    /// The first admissible subset (by size, then lexicographically) whose
    /// span has a nonzero kernel, at the lowest such degree.
    Witness { subset: Vec<Vertex>, degree: usize, kernel_dim: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightnessReport {
    pub verdict: Verdict,
    pub ambient: &'static str,
    pub i_max: usize,
    /// Subsets in the enumeration (or sample).
    pub admissible: usize,
    /// Subsets examined up to and including a witness.
    pub checked: usize,
    /// False when the subsets were sampled; a `Tight` verdict is then not a proof.
    pub exhaustive: bool,
    pub seed: Option<u64>,
}

impl TightnessReport {
    pub fn is_tight(&self) -> bool {
        self.verdict == Verdict::Tight
    }

    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            Verdict::Tight => json!({ "kind": "tight" }),
            Verdict::Witness { subset, degree, kernel_dim } => {
                json!({ "kind": "witness", "subset": subset, "degree": degree, "kernel_dim": kernel_dim })
            }
        };
        json!({
            "verdict": verdict,
            "ambient": self.ambient,
            "i_max": self.i_max,
            "admissible": self.admissible,
            "checked": self.checked,
            "mode": if self.exhaustive { "exhaustive" } else { "sampled, not exhaustive" },
            "seed": self.seed,
        })
    }
}

fn diagonal_indices(m: &SimplicialComplex, ambient: &AmbientPolytope) -> Vec<(usize, usize)> {
    match ambient {
        AmbientPolytope::Simplex(_) => Vec::new(),
        AmbientPolytope::CrossPolytope(pairs) => {
            let idx = |v: Vertex| m.vertices().binary_search(&v).expect("validated pairing");
            pairs.iter().map(|&(a, b)| (idx(a), idx(b))).collect()
        }
    }
}

fn bit(w: &[u64], i: usize) -> u64 {
    (w[i / 64] >> (i % 64)) & 1
}

fn admissible(w: &[u64], diagonals: &[(usize, usize)]) -> bool {
    let hits = || diagonals.iter().map(|&(a, b)| bit(w, a) + bit(w, b));
    hits().all(|h| h <= 1) || hits().all(|h| h >= 1)
}

/// All admissible subsets of `n ≤ 64` vertices by size, then lexicographically.
fn enumerate_subsets(n: usize, diagonals: &[(usize, usize)]) -> Vec<u64> {
    (0..=n)
        .flat_map(|size| (0..n).combinations(size).map(|c| c.iter().fold(0u64, |m, &i| m | 1 << i)))
        .filter(|&m| admissible(&[m], diagonals))
        .collect()
}

fn sample_subsets(n: usize, diagonals: &[(usize, usize)], count: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = n.div_ceil(64).max(1);
    (0..count)
        .map(|_| {
            let mut w = vec![0u64; words];
            let mut set = |i: usize| w[i / 64] |= 1 << (i % 64);
            if diagonals.is_empty() {
                (0..n).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>().into_iter().for_each(&mut set);
            } else {
                // low traces pick none/one end per diagonal, high traces one/both ends
                let high = rng.gen_bool(0.5);
                for &(a, b) in diagonals {
                    match (rng.gen_range(0..3), high) {
                        (0, false) => {}
                        (0, true) => {
                            set(a);
                            set(b)
                        }
                        (1, _) => set(a),
                        _ => set(b),
                    }
                }
            }
            w
        })
        .collect()
}

/// Checks injectivity of `H_i(span W) → H_i(M)` for `0 ≤ i ≤ i_max` over
/// every half-space trace `W` of the ambient polytope.
pub fn tightness_verify(
    m: &SimplicialComplex,
    ambient: &AmbientPolytope,
    config: &TightnessConfig,
) -> Result<TightnessReport, TightnessError> {
    ambient.validate(m)?;
    if m.connected_components() != 1 {
        return Err(TightnessError::NotConnected);
    }
    let n = m.num_vertices();
    let i_max = config.i_max.min(m.dim().unwrap_or(0));
    let engine = SpanHomology::new(m).with_cohomology(i_max);
    let diagonals = diagonal_indices(m, ambient);
    let first_kernel = |w: &[u64]| -> Option<(usize, u64)> {
        engine.kernel_dims(w, i_max).into_iter().enumerate().find(|&(_, k)| k > 0)
    };
    let labels = |w: &[u64]| -> Vec<Vertex> { (0..n).filter(|&i| bit(w, i) == 1).map(|i| m.vertices()[i]).collect() };

    let (subsets, exhaustive): (Vec<Vec<u64>>, bool) = if n <= config.ceiling && n <= 64 {
        (enumerate_subsets(n, &diagonals).into_iter().map(|w| vec![w]).collect(), true)
    } else if let Some(count) = config.sample {
        (sample_subsets(n, &diagonals, count, config.seed), false)
    } else {
        return Err(TightnessError::TooManyVertices { vertices: n, ceiling: config.ceiling });
    };
    let found = subsets.par_iter().position_first(|w| first_kernel(w).is_some());
    let (verdict, checked) = match found {
        None => (Verdict::Tight, subsets.len()),
        Some(p) => {
            let (degree, kernel_dim) = first_kernel(&subsets[p]).expect("witness re-check");
            (Verdict::Witness { subset: labels(&subsets[p]), degree, kernel_dim }, p + 1)
        }
    };
    Ok(TightnessReport {
        verdict,
        ambient: ambient.name(),
        i_max,
        admissible: subsets.len(),
        checked,
        exhaustive,
        seed: (!exhaustive).then_some(config.seed),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkEvidence {
    /// Reverse moves of index at most `k − 1` down to a simplex boundary.
    Certificate(MoveCertificate),
    /// A ball with no interior faces of dimension `≤ d − 1 − k`.
    Ball(SimplicialComplex),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Certified(Vec<(Vertex, LinkEvidence)>),
    /// Some links could be neither certified nor refused within the budget.
    Unknown { vertices: Vec<Vertex> },
    /// The exact decider proved a link is not `k`-stacked.
    Refuted { vertex: Vertex },
}

impl Membership {
    pub fn is_certified(&self) -> bool {
        matches!(self, Membership::Certified(_))
    }
}

enum LinkOutcome {
    Yes(LinkEvidence),
    No,
    Unknown,
}

/// Whether every vertex link of `m` is a `k`-stacked sphere. Links of
/// dimension `e = d − 1` go through move certificates when
/// `1 ≤ k ≤ ⌈e/2⌉`, using seed `seed + v` and `budget` attempts per link;
/// otherwise the exact decider runs on links of at most ten vertices.
pub fn walkup_class_membership(
    m: &SimplicialComplex,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<Membership, TightnessError> {
    let d = m.dim().filter(|_| m.is_pure()).ok_or(TightnessError::NotPure)?;
    let e = d.saturating_sub(1);
    let via_moves = k >= 1 && k <= e.div_ceil(2).max(1);
    let outcomes = m
        .vertices()
        .par_iter()
        .map(|&v| -> Result<(Vertex, LinkOutcome), TightnessError> {
            let link = m.link(&Simplex::from_sorted(vec![v]))?;
            let outcome = if via_moves {
                match stackedness_certificate(&link, k, budget, seed.wrapping_add(v as u64))? {
                    Stackedness::Certified(c) => LinkOutcome::Yes(LinkEvidence::Certificate(c)),
                    Stackedness::Unknown { .. } => LinkOutcome::Unknown,
                }
            } else {
                match k_stacked_exact(&link, k, DEFAULT_EXACT_CEILING)? {
                    ExactOutcome::Yes(ball) => LinkOutcome::Yes(LinkEvidence::Ball(ball)),
                    ExactOutcome::No => LinkOutcome::No,
                    ExactOutcome::Aborted { .. } => LinkOutcome::Unknown,
                }
            };
            Ok((v, outcome))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if let Some((v, _)) = outcomes.iter().find(|(_, o)| matches!(o, LinkOutcome::No)) {
        return Ok(Membership::Refuted { vertex: *v });
    }
    let unknown: Vec<Vertex> =
        outcomes.iter().filter(|(_, o)| matches!(o, LinkOutcome::Unknown)).map(|(v, _)| *v).collect();
    if !unknown.is_empty() {
        return Ok(Membership::Unknown { vertices: unknown });
    }
    Ok(Membership::Certified(
        outcomes
            .into_iter()
            .map(|(v, o)| match o {
                LinkOutcome::Yes(ev) => (v, ev),
                _ => unreachable!("refuted and unknown links handled above"),
            })
            .collect(),
    ))
}

/// Whether `m` contains every ambient face of dimension `≤ k`: the full
/// `k`-skeleton of the simplex, or every diagonal-free `k`-simplex of the
/// cross polytope.
pub fn hamiltonian_check(m: &SimplicialComplex, k: usize, ambient: &AmbientPolytope) -> Result<bool, TightnessError> {
    ambient.validate(m)?;
    match ambient {
        AmbientPolytope::Simplex(_) => Ok(m.is_k_neighborly(k + 1)),
        AmbientPolytope::CrossPolytope(pairs) => {
            let partner: std::collections::HashMap<Vertex, Vertex> =
                pairs.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
            Ok((1..=k + 1).all(|size| {
                m.vertices().iter().copied().combinations(size).all(|c| {
                    c.iter().any(|v| c.contains(&partner[v])) || m.contains_face(&Simplex::from_sorted(c))
                })
            }))
        }
    }
}

/// The lexicographically least (by image vector) involutive automorphism
/// fixing no face: no fixed vertex and no edge `{v, I(v)}`.
pub fn central_symmetry(m: &SimplicialComplex) -> Result<Option<Permutation>, TightnessError> {
    if m.num_vertices() % 2 == 1 {
        return Ok(None);
    }
    let neighbors = m.neighbors();
    Ok(automorphisms(m, SYMMETRY_ORDER_CAP)?.into_iter().find(|p| {
        p.is_involution()
            && p.fixed_points().is_empty()
            && m.vertices().iter().all(|v| !neighbors.get(v).is_some_and(|n| n.contains(&p.apply(*v))))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightNeighborlyReport {
    pub d: usize,
    pub f0: usize,
    pub beta1: u64,
    pub euler_characteristic: i64,
    pub bound: i64,
    pub equality: bool,
    pub two_neighborly: bool,
}

impl TightNeighborlyReport {
    pub fn is_tight_neighborly(&self) -> bool {
        self.equality && self.two_neighborly
    }

    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "f0": self.f0,
            "beta1": self.beta1,
            "chi": self.euler_characteristic,
            "bound": self.bound,
            "slack": self.f0 as i64 - self.bound,
            "equality": self.equality,
            "two_neighborly": self.two_neighborly,
            "field": "GF2",
        })
    }
}

/// Compares `f_0` with the vertex bound in terms of `β_1` over GF(2); for
/// surfaces the Heawood bound in terms of `χ` is used.
pub fn tight_neighborly_check(m: &SimplicialComplex) -> Result<TightNeighborlyReport, TightnessError> {
    let d = m.dim().filter(|_| m.is_pure()).ok_or(TightnessError::NotPure)?;
    if m.connected_components() != 1 {
        return Err(TightnessError::NotConnected);
    }
    let homology = betti_numbers(m);
    let beta1 = homology.betti.get(1).copied().unwrap_or(0);
    let chi = homology.euler_characteristic();
    let bound = if d == 2 { heawood_bound(&chi)? } else { tight_neighborly_bound(&(d as i64), &(beta1 as i64))? };
    let f0 = m.num_vertices();
    Ok(TightNeighborlyReport {
        d,
        f0,
        beta1,
        euler_characteristic: chi,
        bound,
        equality: f0 as i64 == bound,
        two_neighborly: m.is_k_neighborly(2),
    })
}
