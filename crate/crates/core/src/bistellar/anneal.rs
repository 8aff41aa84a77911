//! Vertex reduction by simulated annealing over bistellar moves.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BistellarError, BistellarMove, MoveCertificate, Working};
use crate::complex::{Simplex, SimplicialComplex, Vertex};
use crate::homology::betti_numbers;

/// Annealing schedule. Temperature after `t` steps is
/// `max(t_initial · cooling^t, t_min)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    /// Steps per chain; each step applies one valid move.
    pub max_attempts: usize,
    /// Independent chains from the input; the best result wins.
    pub restarts: usize,
    pub t_initial: f64,
    pub cooling: f64,
    pub t_min: f64,
    /// Recompute GF(2) Betti numbers after every accepted move.
    pub check_homology: bool,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            max_attempts: 10_000,
            restarts: 1,
            t_initial: 1.5,
            cooling: 0.9995,
            t_min: 0.05,
            check_homology: cfg!(debug_assertions),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReduceOutcome {
    pub complex: SimplicialComplex,
    /// Moves from the input to `complex`.
    pub certificate: MoveCertificate,
    pub attempts: usize,
    pub accepted: usize,
    pub reached_target: bool,
}

/// `2^{d+2} f_0 + Σ f_j`: fewer vertices first, then fewer faces.
fn energy(f: &[i64], d: usize) -> i64 {
    (1i64 << (d + 2)) * f[0] + f.iter().sum::<i64>()
}

struct Chain {
    best_energy: i64,
    best_f0: usize,
    best_moves: Vec<BistellarMove>,
    best: SimplicialComplex,
    attempts: usize,
    accepted: usize,
}

/// Faces `A` of one index, with O(1) insertion, removal and uniform choice.
#[derive(Default)]
struct Pool {
    items: Vec<Simplex>,
    pos: HashMap<Simplex, usize>,
}

impl Pool {
    fn insert(&mut self, a: Simplex) {
        if !self.pos.contains_key(&a) {
            self.pos.insert(a.clone(), self.items.len());
            self.items.push(a);
        }
    }

    fn remove(&mut self, a: &Simplex) {
        if let Some(p) = self.pos.remove(a) {
            self.items.swap_remove(p);
            if let Some(moved) = self.items.get(p) {
                self.pos.insert(moved.clone(), p);
            }
        }
    }
}

/// Every move of index `≥ 1` on the working complex, kept current under
/// applied moves. `partner[A] = B` whenever `lk(A) = ∂B`; the move is valid
/// when `B` is not a face, and `blocked_by` finds the `A`s to recheck when a
/// face `B` appears or disappears.
struct MoveTable {
    partner: HashMap<Simplex, Simplex>,
    blocked_by: HashMap<Simplex, Vec<Simplex>>,
    /// `pools[i]` holds the `A`s of valid moves of index `i`.
    pools: Vec<Pool>,
}

impl MoveTable {
    fn new(w: &Working) -> Self {
        let mut t = MoveTable { partner: HashMap::new(), blocked_by: HashMap::new(), pools: Vec::new() };
        t.pools.resize_with(w.d + 1, Pool::default);
        let faces: BTreeSet<Simplex> = w.facets().flat_map(proper_subfaces).collect();
        for a in faces {
            t.refresh(w, &a);
        }
        t
    }

    fn index_of(d: usize, a: &Simplex) -> usize {
        d + 1 - a.len()
    }

    fn forget(&mut self, d: usize, a: &Simplex) {
        if let Some(b) = self.partner.remove(a) {
            if let Some(list) = self.blocked_by.get_mut(&b) {
                list.retain(|x| x != a);
                if list.is_empty() {
                    self.blocked_by.remove(&b);
                }
            }
        }
        self.pools[Self::index_of(d, a)].remove(a);
    }

    fn refresh(&mut self, w: &Working, a: &Simplex) {
        self.forget(w.d, a);
        if let Some(b) = w.link_partner(a) {
            if !w.is_face(&b) {
                self.pools[Self::index_of(w.d, a)].insert(a.clone());
            }
            self.blocked_by.entry(b.clone()).or_default().push(a.clone());
            self.partner.insert(a.clone(), b);
        }
    }

    /// Updates after `mv` has been applied to `w`.
    fn update(&mut self, w: &Working, mv: &BistellarMove) {
        let changed: Vec<Simplex> = mv.removed_facets().into_iter().chain(mv.added_facets()).collect();
        let touched: BTreeSet<Simplex> = changed.iter().flat_map(proper_subfaces).collect();
        for a in &touched {
            self.refresh(w, a);
        }
        // faces whose status may have flipped, possibly unblocking or blocking a move
        let mut recheck: BTreeSet<Simplex> = BTreeSet::new();
        for f in &changed {
            for s in proper_subfaces(f).chain(std::iter::once(f.clone())) {
                if let Some(list) = self.blocked_by.get(&s) {
                    recheck.extend(list.iter().cloned());
                }
            }
        }
        for a in recheck {
            if !touched.contains(&a) {
                let b = &self.partner[&a];
                let pool = &mut self.pools[Self::index_of(w.d, &a)];
                if w.is_face(b) {
                    pool.remove(&a);
                } else {
                    pool.insert(a.clone());
                }
            }
        }
    }
}

/// Nonempty faces of `f` other than `f` itself.
fn proper_subfaces(f: &Simplex) -> impl Iterator<Item = Simplex> + '_ {
    let n = f.len();
    (1..(1u32 << n) - 1).map(move |bits| {
        Simplex::from_sorted(f.vertices().iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, v)| *v).collect())
    })
}

/// Energy change of an `i`-move in dimension `d`.
fn index_delta(d: usize, i: usize) -> i64 {
    let a = Simplex::from_sorted((1..=(d + 1 - i) as Vertex).collect());
    let b = Simplex::from_sorted(((d + 2 - i) as Vertex..=(d + 2) as Vertex).collect());
    let delta = BistellarMove::new(a, b).f_delta();
    energy(&delta, d)
}

fn run_chain(
    m: &SimplicialComplex,
    target_f0: usize,
    config: &AnnealConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Chain, BistellarError> {
    let mut w = Working::new(m);
    let d = w.d;
    let mut table = MoveTable::new(&w);
    let deltas: Vec<i64> = (0..=d).map(|i| index_delta(d, i)).collect();
    let mut f: Vec<i64> = m.f_vector().0.iter().map(|&x| x as i64).collect();
    let reference = config.check_homology.then(|| betti_numbers(m).betti);
    let mut moves: Vec<BistellarMove> = Vec::new();
    let mut chain = Chain {
        best_energy: energy(&f, d),
        best_f0: w.num_vertices(),
        best_moves: Vec::new(),
        best: m.clone(),
        attempts: 0,
        accepted: 0,
    };
    let mut temperature = config.t_initial;
    while chain.attempts < config.max_attempts && chain.best_f0 > target_f0 && !w.is_simplex_boundary() {
        chain.attempts += 1;
        temperature = (temperature * config.cooling).max(config.t_min);
        // heat-bath choice of the index, then a uniform move of that index
        let counts: Vec<usize> =
            (0..=d).map(|i| if i == 0 { w.num_facets() } else { table.pools[i].items.len() }).collect();
        let low = (0..=d).filter(|&i| counts[i] > 0).map(|i| deltas[i]).min().expect("0-moves always exist");
        let weights: Vec<f64> =
            (0..=d)
                .map(|i| if counts[i] == 0 { 0.0 } else { counts[i] as f64 * (-((deltas[i] - low) as f64) / temperature).exp() })
                .collect();
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            break;
        }
        let mut x = rng.gen::<f64>() * total;
        let mut index = d;
        for (i, wt) in weights.iter().enumerate() {
            if x < *wt {
                index = i;
                break;
            }
            x -= wt;
        }
        let mv = if index == 0 {
            let facet = w.facets().nth(rng.gen_range(0..w.num_facets())).expect("facet index in range").clone();
            BistellarMove::new(facet, Simplex::from_sorted(vec![w.max_label() + 1]))
        } else {
            let pool = &table.pools[index].items;
            if pool.is_empty() {
                continue;
            }
            let a = pool[rng.gen_range(0..pool.len())].clone();
            BistellarMove::new(a.clone(), table.partner[&a].clone())
        };
        let delta = mv.f_delta();
        w.apply(&mv);
        table.update(&w, &mv);
        f = f.iter().zip(&delta).map(|(a, b)| a + b).collect();
        moves.push(mv);
        chain.accepted += 1;
        if let Some(betti) = &reference {
            if &betti_numbers(&w.to_complex()).betti != betti {
                return Err(BistellarError::HomologyChanged(chain.accepted));
            }
        }
        let e = energy(&f, d);
        if e < chain.best_energy {
            chain.best_energy = e;
            chain.best_f0 = w.num_vertices();
            chain.best_moves = moves.clone();
            chain.best = w.to_complex();
        }
    }
    Ok(chain)
}

/// Best-effort reduction of the vertex count of a closed pseudomanifold
/// towards `target_f0`. Deterministic for a fixed seed and configuration.
pub fn vertex_reduce(
    m: &SimplicialComplex,
    target_f0: usize,
    config: &AnnealConfig,
    seed: u64,
) -> Result<ReduceOutcome, BistellarError> {
    let report = m.pseudomanifold_check().map_err(|_| BistellarError::NotPure)?;
    if !report.is_closed_pseudomanifold() {
        return Err(BistellarError::NotClosed);
    }
    let mut best: Option<Chain> = None;
    let mut attempts = 0;
    let mut accepted = 0;
    for c in 0..config.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(c as u64));
        let chain = run_chain(m, target_f0, config, &mut rng)?;
        attempts += chain.attempts;
        accepted += chain.accepted;
        let done = chain.best_f0 <= target_f0;
        if best.as_ref().is_none_or(|b| chain.best_energy < b.best_energy) {
            best = Some(chain);
        }
        if done {
            break;
        }
    }
    let best = best.expect("at least one chain");
    Ok(ReduceOutcome {
        certificate: MoveCertificate::new(m, best.best_moves, &best.best),
        reached_target: best.best.num_vertices() <= target_f0,
        complex: best.best,
        attempts,
        accepted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bistellar::apply_move;

    fn sphere(n: u32) -> SimplicialComplex {
        let all: Vec<u32> = (1..=n).collect();
        let facets: Vec<Vec<u32>> = (0..n as usize)
            .map(|skip| all.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect())
            .collect();
        SimplicialComplex::from_facets(&facets).unwrap()
    }

    fn table_moves(t: &MoveTable) -> Vec<Simplex> {
        let mut v: Vec<Simplex> = t.pools.iter().flat_map(|p| p.items.iter().cloned()).collect();
        v.sort();
        v
    }

    #[test]
    fn move_table_tracks_brute_force() {
        let mut k = sphere(6);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for label in 7..12 {
            let facet = k.facets()[rng.gen_range(0..k.facets().len())].clone();
            k = apply_move(&k, &BistellarMove::new(facet, Simplex::from_sorted(vec![label]))).unwrap();
        }
        let mut w = Working::new(&k);
        let mut table = MoveTable::new(&w);
        for _ in 0..200 {
            let mut brute: Vec<Simplex> = (1..=w.d).flat_map(|i| w.moves_of_index(i)).map(|mv| mv.a).collect();
            brute.sort();
            assert_eq!(table_moves(&table), brute);
            let a = brute[rng.gen_range(0..brute.len())].clone();
            let mv = w.move_at(&a).unwrap();
            w.apply(&mv);
            table.update(&w, &mv);
        }
    }

    #[test]
    fn minimal_sphere_is_left_alone() {
        let k = sphere(5);
        let out = vertex_reduce(&k, 3, &AnnealConfig::default(), 9).unwrap();
        assert_eq!(out.complex, k);
        assert!(out.certificate.moves.is_empty());
        assert!(!out.reached_target);
    }

    #[test]
    fn subdivisions_are_undone() {
        let mut k = sphere(5);
        for label in 6..12 {
            let facet = k.facets()[label as usize % k.facets().len()].clone();
            k = apply_move(&k, &BistellarMove::new(facet, Simplex::from_sorted(vec![label]))).unwrap();
        }
        let config = AnnealConfig { check_homology: true, ..AnnealConfig::default() };
        let out = vertex_reduce(&k, 5, &config, 4).unwrap();
        assert!(out.reached_target);
        assert_eq!(out.complex.f_vector().0, vec![5, 10, 10, 5]);
        assert_eq!(out.certificate.verify(&k).unwrap(), out.complex);
        let again = vertex_reduce(&k, 5, &config, 4).unwrap();
        assert_eq!(again.certificate, out.certificate);
    }
}
