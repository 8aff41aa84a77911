//! Stackedness: a randomized move-based certificate and an exact decider
//! for small spheres.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BistellarError, MoveCertificate, Working};
use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::homology::betti_numbers;

pub const DEFAULT_EXACT_CEILING: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stackedness {
    /// Reverse moves reducing the sphere to the boundary of a simplex.
    Certified(MoveCertificate),
    /// Budget exhausted; says nothing either way.
    Unknown { attempts: usize },
}

impl Stackedness {
    pub fn is_certified(&self) -> bool {
        matches!(self, Stackedness::Certified(_))
    }
}

fn require_closed(s: &SimplicialComplex) -> Result<usize, BistellarError> {
    let report = s.pseudomanifold_check().map_err(|_| BistellarError::NotPure)?;
    if !report.is_closed_pseudomanifold() {
        return Err(BistellarError::NotClosed);
    }
    Ok(s.dim().unwrap_or(0))
}

/// Searches for reverse `i`-moves with `i ≤ k − 1` (moves of index
/// `d − k + 1 ..= d`) that reduce `s` to the boundary of the `(d+1)`-simplex.
/// Vertex removals are preferred; other moves are picked at random, and a dead
/// end restarts from `s`. Every applied move and every restart counts
/// against `budget`.
pub fn stackedness_certificate(
    s: &SimplicialComplex,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<Stackedness, BistellarError> {
    let d = require_closed(s)?;
    let max = d.div_ceil(2).max(1);
    if k < 1 || k > max {
        return Err(BistellarError::KOutOfRange { k, max });
    }
    let indices: Vec<usize> = (d + 1 - k..=d).rev().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    let mut first_run = true;
    loop {
        let mut w = Working::new(s);
        let mut moves = Vec::new();
        loop {
            if w.is_simplex_boundary() {
                let end = w.to_complex();
                return Ok(Stackedness::Certified(MoveCertificate::new(s, moves, &end)));
            }
            if attempts >= budget {
                return Ok(Stackedness::Unknown { attempts });
            }
            attempts += 1;
            let greedy = first_run || rng.gen_bool(0.9);
            let chosen = if greedy {
                indices.iter().map(|&i| w.moves_of_index(i)).find(|ms| !ms.is_empty()).map(|ms| {
                    let pick = rng.gen_range(0..ms.len());
                    ms[pick].clone()
                })
            } else {
                let all: Vec<_> = indices.iter().flat_map(|&i| w.moves_of_index(i)).collect();
                (!all.is_empty()).then(|| all[rng.gen_range(0..all.len())].clone())
            };
            match chosen {
                Some(mv) => {
                    w.apply(&mv);
                    moves.push(mv);
                }
                None => break,
            }
        }
        if first_run && attempts == 1 {
            // no allowed move at all from the start: restarts cannot help
            return Ok(Stackedness::Unknown { attempts });
        }
        first_run = false;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    /// A `(d+1)`-ball with boundary `S` and no interior faces of dimension `≤ d − k`.
    Yes(SimplicialComplex),
    No,
    Aborted { vertices: usize, ceiling: usize },
}

/// Checks that `ball` witnesses `k`-stackedness of `s`: a strongly
/// connected pseudomanifold of dimension `d + 1`, acyclic over GF(2), whose
/// boundary is `s` and whose faces of dimension `≤ d − k` all lie in `s`.
pub fn verify_stacking_ball(s: &SimplicialComplex, ball: &SimplicialComplex, k: usize) -> bool {
    let Some(d) = s.dim() else { return false };
    if ball.dim() != Some(d + 1) || !ball.is_pure() || k > d {
        return false;
    }
    let Ok(report) = ball.pseudomanifold_check() else { return false };
    if report.singular_ridges > 0 || !report.strongly_connected {
        return false;
    }
    if ball.boundary().ok().as_ref() != Some(s) {
        return false;
    }
    if betti_numbers(ball).reduced.iter().any(|&b| b != 0) {
        return false;
    }
    ball.faces(d - k).iter().all(|f| s.contains_face(f))
}

struct ExactSearch<'a> {
    s: &'a SimplicialComplex,
    k: usize,
    candidates: Vec<Simplex>,
    /// d-faces of each candidate, as ids into `count`.
    ridges: Vec<Vec<usize>>,
    by_ridge: Vec<Vec<usize>>,
    on_sphere: Vec<bool>,
    count: Vec<u8>,
    chosen: Vec<usize>,
}

impl ExactSearch<'_> {
    fn fits(&self, c: usize) -> bool {
        self.ridges[c].iter().all(|&r| self.count[r] < if self.on_sphere[r] { 1 } else { 2 })
    }

    fn open_ridges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.count.len()).filter(|&r| if self.on_sphere[r] { self.count[r] == 0 } else { self.count[r] == 1 })
    }

    fn run(&mut self) -> Option<SimplicialComplex> {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for r in self.open_ridges() {
            let options: Vec<usize> =
                self.by_ridge[r].iter().copied().filter(|&c| !self.chosen.contains(&c) && self.fits(c)).collect();
            if best.as_ref().is_none_or(|(_, o)| options.len() < o.len()) {
                let empty = options.is_empty();
                best = Some((r, options));
                if empty {
                    break;
                }
            }
        }
        let Some((_, options)) = best else {
            let ball = SimplicialComplex::from_simplices(self.chosen.iter().map(|&c| self.candidates[c].clone()));
            return verify_stacking_ball(self.s, &ball, self.k).then_some(ball);
        };
        for c in options {
            for &r in &self.ridges[c] {
                self.count[r] += 1;
            }
            self.chosen.push(c);
            if let Some(ball) = self.run() {
                return Some(ball);
            }
            self.chosen.pop();
            for &r in &self.ridges[c] {
                self.count[r] -= 1;
            }
        }
        None
    }
}

/// Decides `k`-stackedness of a small sphere by exhaustive search over
/// `(d+1)`-simplices on its vertex set. Interior vertices are never needed
/// for `k ≤ d`, so the ball lives on `V(S)`.
pub fn k_stacked_exact(s: &SimplicialComplex, k: usize, ceiling: usize) -> Result<ExactOutcome, BistellarError> {
    let d = require_closed(s)?;
    if k > d {
        return Err(BistellarError::KOutOfRange { k, max: d });
    }
    if s.num_vertices() > ceiling {
        return Ok(ExactOutcome::Aborted { vertices: s.num_vertices(), ceiling });
    }
    let vs: Vec<Vertex> = s.vertices().to_vec();
    let candidates: Vec<Simplex> = itertools::Itertools::combinations(vs.iter().copied(), d + 2)
        .map(Simplex::from_sorted)
        .filter(|c| c.subfaces(d - k + 1).all(|f| s.contains_face(&f)))
        .collect();
    let mut ridge_id: HashMap<Simplex, usize> = HashMap::new();
    let mut on_sphere = Vec::new();
    for f in s.facets() {
        ridge_id.insert(f.clone(), on_sphere.len());
        on_sphere.push(true);
    }
    let mut ridges = Vec::with_capacity(candidates.len());
    for c in &candidates {
        let ids: Vec<usize> = c
            .boundary()
            .into_iter()
            .map(|r| {
                let next = on_sphere.len();
                *ridge_id.entry(r).or_insert_with(|| {
                    on_sphere.push(false);
                    next
                })
            })
            .collect();
        ridges.push(ids);
    }
    let mut by_ridge = vec![Vec::new(); on_sphere.len()];
    for (c, ids) in ridges.iter().enumerate() {
        for &r in ids {
            by_ridge[r].push(c);
        }
    }
    let mut search = ExactSearch {
        s,
        k,
        candidates,
        ridges,
        by_ridge,
        count: vec![0; on_sphere.len()],
        on_sphere,
        chosen: Vec::new(),
    };
    Ok(search.run().map_or(ExactOutcome::No, ExactOutcome::Yes))
}
