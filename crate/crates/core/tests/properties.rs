use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tnt::bistellar::{apply_move, stackedness_certificate, valid_moves, Stackedness};
use tnt::constructors::{
    boundary_simplex, connected_sum, cross_polytope_boundary, cyclic_polytope_boundary, kuehnel_series,
    simplicial_product, stacked_sphere,
};
use tnt::homology::{betti_numbers, SpanHomology};
use tnt::tightness::{
    lacunary_tight_pattern, tight_neighborly_check, tightness_verify, AmbientPolytope, MorseEngine, RslOrdering,
    TightnessConfig, Verdict,
};
use tnt::SimplicialComplex;

/// Small closed manifolds of several kinds, chosen by index.
fn closed_manifold(kind: usize, seed: u64) -> SimplicialComplex {
    match kind % 6 {
        0 => stacked_sphere(3 + (seed % 3) as usize, 7 + (seed % 5) as usize, seed).unwrap(),
        1 => kuehnel_series(2 + (seed % 3) as usize).unwrap(),
        2 => cyclic_polytope_boundary(4, 6 + (seed % 4) as usize).unwrap(),
        3 => cross_polytope_boundary(3 + (seed % 2) as usize).unwrap(),
        4 => simplicial_product(&boundary_simplex(2).unwrap(), &boundary_simplex(3).unwrap()).unwrap(),
        _ => {
            let a = kuehnel_series(2).unwrap();
            let b = kuehnel_series(2).unwrap();
            connected_sum(&a, &b, &a.facets()[0].clone(), &b.facets()[0].clone(), None).unwrap()
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn morse_relations_and_duality(kind in 0usize..6, seed in 0u64..1000, order_seed in any::<u64>()) {
        let m = closed_manifold(kind, seed);
        let d = m.dim().unwrap();
        let homology = betti_numbers(&m);
        let engine = MorseEngine::new(&m).unwrap();
        let f = RslOrdering::seeded(&m, order_seed);
        let mu = engine.mu_vector(&f);
        let rev = engine.mu_vector(&f.reversed());
        prop_assert_eq!(mu.alternating_sum(), homology.euler_characteristic());
        prop_assert!(mu.dominates(&homology.betti));
        for i in 0..=d {
            prop_assert_eq!(mu.mu[i], rev.mu[d - i]);
        }
        prop_assert_eq!(mu.per_vertex[0].1[0], 1);
    }

    #[test]
    fn poincare_duality_mod_two(kind in 0usize..6, seed in 0u64..1000) {
        let m = closed_manifold(kind, seed);
        let d = m.dim().unwrap();
        let betti = betti_numbers(&m).betti;
        for i in 0..=d {
            prop_assert_eq!(betti[i], betti[d - i]);
        }
    }

    #[test]
    fn zero_tightness_is_two_neighborliness(kind in 0usize..6, seed in 0u64..200) {
        let m = closed_manifold(kind, seed);
        prop_assume!(m.num_vertices() <= 14);
        let report = tightness_verify(&m, &AmbientPolytope::simplex_for(&m), &TightnessConfig::new(0)).unwrap();
        prop_assert_eq!(report.is_tight(), m.is_k_neighborly(2));
        if let Verdict::Witness { subset, degree, .. } = report.verdict {
            prop_assert_eq!(degree, 0);
            prop_assert_eq!(subset.len(), 2);
        }
    }

    #[test]
    fn stacked_spans_have_no_middle_homology(d in 3usize..6, extra in 0usize..6, seed in any::<u64>()) {
        let s = stacked_sphere(d, d + 2 + extra, seed).unwrap();
        let engine = SpanHomology::new(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let w: Vec<u32> = s.vertices().iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            let betti = engine.betti(&engine.mask_of(w.iter().copied()), d);
            for j in 2..d {
                prop_assert_eq!(betti[d - j], 0, "span {:?} has H_{}", w, d - j);
            }
        }
    }

    #[test]
    fn moves_round_trip(kind in 0usize..6, seed in 0u64..500) {
        let m = closed_manifold(kind, seed);
        let d = m.dim().unwrap();
        let all: Vec<usize> = (0..=d).collect();
        let moves = valid_moves(&m, &all).unwrap();
        let mv = moves.choose(&mut ChaCha8Rng::seed_from_u64(seed)).unwrap().clone();
        let there = apply_move(&m, &mv).unwrap();
        prop_assert_eq!(betti_numbers(&there).betti, betti_numbers(&m).betti);
        let back = apply_move(&there, &mv.inverse()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn stacked_spheres_are_certified(d in 2usize..6, extra in 0usize..8, seed in any::<u64>()) {
        let s = stacked_sphere(d, d + 2 + extra, seed).unwrap();
        match stackedness_certificate(&s, 1, 10_000, seed).unwrap() {
            Stackedness::Certified(cert) => {
                let end = cert.verify(&s).unwrap();
                prop_assert_eq!(end.num_vertices(), d + 2);
                prop_assert_eq!(cert.moves.len(), extra);
            }
            Stackedness::Unknown { attempts } => prop_assert!(false, "no certificate after {} attempts", attempts),
        }
    }
}

#[test]
fn kuehnel_series_is_tight_neighborly_and_lacunary() {
    for d in 2..=5 {
        let m = kuehnel_series(d).unwrap();
        let report = tight_neighborly_check(&m).unwrap();
        assert!(report.is_tight_neighborly(), "d = {d}: {report:?}");
        assert_eq!(report.f0, 2 * d + 3);
        let engine = MorseEngine::new(&m).unwrap();
        for seed in 0..20 {
            let mu = engine.mu_vector(&RslOrdering::seeded(&m, seed));
            let mut want = vec![0; d + 1];
            want[0] = 1;
            want[1] = 1;
            want[d - 1] += 1;
            want[d] = 1;
            assert_eq!(mu.mu, want, "d = {d}, seed {seed}");
            // polar functions on surfaces are tight; the middle degrees of a 3-manifold are not forced
            assert_eq!(lacunary_tight_pattern(&mu, d), d != 3);
        }
    }
}

#[test]
fn kuehnel_series_is_tight_by_enumeration() {
    for d in 2..=4 {
        let m = kuehnel_series(d).unwrap();
        let report = tightness_verify(&m, &AmbientPolytope::simplex_for(&m), &TightnessConfig::new(d)).unwrap();
        assert!(report.is_tight(), "d = {d}: {:?}", report.verdict);
        assert_eq!(report.admissible, 1 << (2 * d + 3));
    }
}
