//! Automorphisms and isomorphisms of small complexes by backtracking.
//!
//! Vertices are first partitioned by invariants (1-skeleton degree, number of
//! facets, f-vector of the vertex link). A partial map is extended one vertex
//! at a time and rejected as soon as it sends an edge to a non-edge or a face
//! spanned by mapped vertices to a non-face.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use super::{ComplexError, Simplex, SimplicialComplex, Vertex};

pub const DEFAULT_SEARCH_CEILING: usize = 32;

/// A bijection of a vertex set onto itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(BTreeMap<Vertex, Vertex>);

impl Permutation {
    pub fn identity(domain: &[Vertex]) -> Self {
        Permutation(domain.iter().map(|&v| (v, v)).collect())
    }

    /// Builds a permutation of `domain` from disjoint cycles.
    pub fn from_cycles(domain: &[Vertex], cycles: &[&[Vertex]]) -> Self {
        let mut map: BTreeMap<Vertex, Vertex> = domain.iter().map(|&v| (v, v)).collect();
        for cycle in cycles {
            for (i, &v) in cycle.iter().enumerate() {
                map.insert(v, cycle[(i + 1) % cycle.len()]);
            }
        }
        Permutation(map)
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.0.get(&v).copied().unwrap_or(v)
    }

    pub fn apply_simplex(&self, s: &Simplex) -> Simplex {
        let mut vs: Vec<Vertex> = s.vertices().iter().map(|&v| self.apply(v)).collect();
        vs.sort_unstable();
        Simplex::from_sorted(vs)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|(a, b)| a == b)
    }

    pub fn fixed_points(&self) -> Vec<Vertex> {
        self.0.iter().filter(|(a, b)| a == b).map(|(a, _)| *a).collect()
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.0.iter().all(|(a, b)| self.apply(*b) == *a)
    }

    /// Images in increasing order of the domain.
    pub fn images(&self) -> Vec<Vertex> {
        self.0.values().copied().collect()
    }

    /// Non-trivial cycles, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<Vertex>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for &start in self.0.keys() {
            if seen.contains(&start) || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen.insert(start);
            let mut v = self.apply(start);
            while v != start {
                seen.insert(v);
                cycle.push(v);
                v = self.apply(v);
            }
            out.push(cycle);
        }
        out
    }

    pub fn preserves(&self, complex: &SimplicialComplex) -> bool {
        let mut image: Vec<Simplex> = complex.facets().iter().map(|f| self.apply_simplex(f)).collect();
        image.sort();
        image == complex.facets()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Invariant {
    degree: usize,
    facets: usize,
    link_f: Vec<u64>,
}

struct Indexed {
    labels: Vec<Vertex>,
    faces: HashSet<u64>,
    faces_by_vertex: Vec<Vec<u64>>,
    adj: Vec<u64>,
    invariants: Vec<Invariant>,
}

impl Indexed {
    fn new(k: &SimplicialComplex) -> Self {
        let labels = k.vertices().to_vec();
        let n = labels.len();
        let mask_of = |s: &Simplex| s.vertices().iter().fold(0u64, |m, &v| m | 1 << k.vertex_index(v));
        let mut faces = HashSet::new();
        let mut faces_by_vertex = vec![Vec::new(); n];
        let table = k.face_table();
        for j in 0..table.dims() {
            for s in table.faces(j) {
                let m = mask_of(s);
                faces.insert(m);
                for &v in s.vertices() {
                    faces_by_vertex[k.vertex_index(v)].push(m);
                }
            }
        }
        let mut adj = vec![0u64; n];
        for e in k.faces(1) {
            let (a, b) = (k.vertex_index(e.vertices()[0]), k.vertex_index(e.vertices()[1]));
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        let invariants = labels
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let vs = Simplex::from_sorted(vec![v]);
                Invariant {
                    degree: adj[i].count_ones() as usize,
                    facets: k.facets_containing(&vs).count(),
                    link_f: k.link(&vs).map(|l| l.f_vector().0).unwrap_or_default(),
                }
            })
            .collect();
        Indexed { labels, faces, faces_by_vertex, adj, invariants }
    }
}

struct Search<'a> {
    a: &'a Indexed,
    b: &'a Indexed,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl Search<'_> {
    fn run(&mut self, pos: usize, mask_a: u64, mask_b: u64) {
        if self.found.len() >= self.limit {
            return;
        }
        if pos == self.order.len() {
            self.found.push(self.map.clone());
            return;
        }
        let u = self.order[pos];
        for w in 0..self.b.labels.len() {
            if self.used[w] || self.a.invariants[u] != self.b.invariants[w] {
                continue;
            }
            if !self.consistent(u, w, pos, mask_a, mask_b) {
                continue;
            }
            self.map[u] = w;
            self.used[w] = true;
            self.run(pos + 1, mask_a | 1 << u, mask_b | 1 << w);
            self.used[w] = false;
            self.map[u] = usize::MAX;
            if self.found.len() >= self.limit {
                return;
            }
        }
    }

    fn consistent(&self, u: usize, w: usize, pos: usize, mask_a: u64, mask_b: u64) -> bool {
        for &prev in &self.order[..pos] {
            let ea = self.a.adj[u] >> prev & 1;
            let eb = self.b.adj[w] >> self.map[prev] & 1;
            if ea != eb {
                return false;
            }
        }
        let full_a = mask_a | 1 << u;
        let full_b = mask_b | 1 << w;
        let mut count = 0usize;
        for &face in &self.a.faces_by_vertex[u] {
            if face & !full_a != 0 {
                continue;
            }
            let mut image = 0u64;
            let mut rest = face;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                image |= 1 << if i == u { w } else { self.map[i] };
            }
            if !self.b.faces.contains(&image) {
                return false;
            }
            count += 1;
        }
        let count_b = self.b.faces_by_vertex[w].iter().filter(|&&g| g & !full_b == 0).count();
        count == count_b
    }
}

fn assignment_order(a: &Indexed) -> Vec<usize> {
    let n = a.labels.len();
    let mut class_size: HashMap<&Invariant, usize> = HashMap::new();
    for inv in &a.invariants {
        *class_size.entry(inv).or_default() += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let next = (0..n)
            .filter(|&i| placed >> i & 1 == 0)
            .min_by_key(|&i| {
                let links = (a.adj[i] & placed).count_ones();
                (std::cmp::Reverse(links), class_size[&a.invariants[i]], i)
            })
            .unwrap();
        order.push(next);
        placed |= 1 << next;
    }
    order
}

fn run_search(a: &Indexed, b: &Indexed, limit: usize) -> Vec<Vec<usize>> {
    let n = a.labels.len();
    let mut search = Search {
        a,
        b,
        order: assignment_order(a),
        map: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
        limit,
    };
    search.run(0, 0, 0);
    search.found
}

fn check_ceiling(k: &SimplicialComplex, ceiling: usize) -> Result<(), ComplexError> {
    let ceiling = ceiling.min(64);
    if k.num_vertices() > ceiling {
        return Err(ComplexError::SearchCeiling { vertices: k.num_vertices(), ceiling });
    }
    Ok(())
}

/// All automorphisms (vertex permutations mapping the facet set onto
/// itself), sorted by image vector. Fails once more than `order_cap` are
/// found.
pub fn automorphisms(k: &SimplicialComplex, order_cap: usize) -> Result<Vec<Permutation>, ComplexError> {
    automorphisms_with_ceiling(k, order_cap, DEFAULT_SEARCH_CEILING)
}

pub fn automorphisms_with_ceiling(
    k: &SimplicialComplex,
    order_cap: usize,
    ceiling: usize,
) -> Result<Vec<Permutation>, ComplexError> {
    check_ceiling(k, ceiling)?;
    let idx = Indexed::new(k);
    let found = run_search(&idx, &idx, order_cap.saturating_add(1));
    if found.len() > order_cap {
        return Err(ComplexError::OrderCap(order_cap));
    }
    let mut perms: Vec<Permutation> = found
        .into_iter()
        .map(|m| Permutation(m.iter().enumerate().map(|(i, &j)| (idx.labels[i], idx.labels[j])).collect()))
        .collect();
    perms.sort_by_key(|p| p.images());
    Ok(perms)
}

/// A vertex bijection carrying `a` onto `b`, if one exists.
pub fn find_isomorphism(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Result<Option<BTreeMap<Vertex, Vertex>>, ComplexError> {
    check_ceiling(a, DEFAULT_SEARCH_CEILING)?;
    check_ceiling(b, DEFAULT_SEARCH_CEILING)?;
    if a.f_vector() != b.f_vector() {
        return Ok(None);
    }
    let (ia, ib) = (Indexed::new(a), Indexed::new(b));
    Ok(run_search(&ia, &ib, 1)
        .into_iter()
        .next()
        .map(|m| m.iter().enumerate().map(|(i, &j)| (ia.labels[i], ib.labels[j])).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_boundary_has_full_symmetric_group() {
        let k = SimplicialComplex::from_facets(&[vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]])
            .unwrap();
        let auts = automorphisms(&k, 100).unwrap();
        assert_eq!(auts.len(), 24);
        assert!(auts[0].is_identity());
        assert!(matches!(automorphisms(&k, 10), Err(ComplexError::OrderCap(10))));
    }

    #[test]
    fn path_has_reflection() {
        let k = SimplicialComplex::from_facets(&[vec![1, 2], vec![2, 3]]).unwrap();
        let auts = automorphisms(&k, 10).unwrap();
        assert_eq!(auts.len(), 2);
        assert_eq!(auts[1].to_string(), "(1 3)");
    }

    #[test]
    fn isomorphism_between_relabeled_copies() {
        let a = SimplicialComplex::from_facets(&[vec![1, 2, 3], vec![2, 3, 4], vec![3, 4, 5]]).unwrap();
        let b = a.relabel(|v| 10 + (v * 7) % 5).unwrap();
        let map = find_isomorphism(&a, &b).unwrap().unwrap();
        assert_eq!(a.relabel(|v| map[&v]).unwrap(), b);
        let c = SimplicialComplex::from_facets(&[vec![1, 2, 3], vec![2, 3, 4], vec![2, 3, 5]]).unwrap();
        assert!(find_isomorphism(&a, &c).unwrap().is_none());
    }

    #[test]
    fn ceiling_enforced() {
        let facets: Vec<Vec<u32>> = (1..40).map(|i| vec![i, i + 1]).collect();
        let k = SimplicialComplex::from_facets(&facets).unwrap();
        assert!(matches!(automorphisms(&k, 4), Err(ComplexError::SearchCeiling { .. })));
    }
}
