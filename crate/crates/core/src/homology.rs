//! Simplicial homology with GF(2) coefficients.
//!
//! Betti numbers come from ranks of boundary matrices,
//! `β_j = f_j − rank ∂_j − rank ∂_{j+1}`. Reduced homology augments the
//! chain complex with the empty simplex in degree −1, so `β̃_{−1}(∅) = 1`.
//!
//! [`SpanHomology`] precomputes the face data of one complex and answers
//! homology questions about induced subcomplexes `span(W)` without building
//! them as [`SimplicialComplex`] values. It is the inner loop of both the
//! Morse-vector computation and the tightness enumeration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, Simplex, SimplicialComplex, Vertex};
use crate::gf2::{kernel_basis, BitVec, ChainMatrixGF2, Echelon};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error("boundary degree {j} out of range for a complex of dimension {dim:?}")]
    DegreeOutOfRange { j: usize, dim: Option<usize> },
    #[error("{0} is a face of the subcomplex but not of the ambient complex")]
    NotSubcomplex(Simplex),
    #[error("vertex {0} is not in the complex")]
    UnknownVertex(Vertex),
    #[error("lower set contains the vertex {0} itself")]
    LowerContainsVertex(Vertex),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Betti numbers over GF(2). `reduced[0]` is `β̃_{−1}`, so `reduced[j + 1]`
/// is `β̃_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyReport {
    pub betti: Vec<u64>,
    pub reduced: Vec<u64>,
    pub field: String,
}

impl HomologyReport {
    fn from_ranks(counts: &[usize], ranks: &[usize]) -> Self {
        // ranks[j] = rank ∂_j for j >= 1; ranks[0] is the augmentation rank
        let top = counts.len();
        let rank = |j: usize| ranks.get(j).copied().unwrap_or(0);
        let betti: Vec<u64> = (0..top)
            .map(|j| (counts[j] - if j == 0 { 0 } else { rank(j) } - rank(j + 1)) as u64)
            .collect();
        let mut reduced = vec![(1 - rank(0)) as u64];
        reduced.extend((0..top).map(|j| (counts[j] - rank(j) - rank(j + 1)) as u64));
        HomologyReport { betti, reduced, field: "GF2".into() }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.betti.iter().enumerate().map(|(j, &b)| if j % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Supports of the columns of `∂_j`: for each `j`-face, the positions of its
/// codimension-one faces. For `j = 0` every vertex maps to the single
/// augmentation row.
fn boundary_columns(k: &SimplicialComplex, j: usize) -> Vec<Vec<usize>> {
    let table = k.face_table();
    if j == 0 {
        return vec![vec![0]; table.faces(0).len()];
    }
    table
        .faces(j)
        .iter()
        .map(|s| s.boundary().iter().map(|b| table.position(b).expect("boundary face present")).collect())
        .collect()
}

fn support_vectors(len: usize, columns: &[Vec<usize>]) -> Vec<BitVec> {
    columns.iter().map(|c| BitVec::from_ones(len, c.iter().copied())).collect()
}

fn column_rank(len: usize, columns: &[Vec<usize>]) -> usize {
    let mut e = Echelon::new(len);
    for c in columns {
        e.insert(BitVec::from_ones(len, c.iter().copied()));
    }
    e.rank()
}

/// Matrix of `∂_j` from `j`-chains to `(j−1)`-chains, faces in lexicographic
/// order. `j = 0` gives the augmentation `1 × f_0` row of ones.
pub fn boundary_matrix(k: &SimplicialComplex, j: usize) -> Result<ChainMatrixGF2, HomologyError> {
    let dim = k.dim();
    if dim.is_none_or(|d| j > d) {
        return Err(HomologyError::DegreeOutOfRange { j, dim });
    }
    let rows = if j == 0 { 1 } else { k.faces(j - 1).len() };
    let row_labels = if j == 0 { Vec::new() } else { k.faces(j - 1).to_vec() };
    Ok(ChainMatrixGF2::from_columns(rows, &boundary_columns(k, j)).with_labels(row_labels, k.faces(j).to_vec()))
}

pub fn betti_numbers(k: &SimplicialComplex) -> HomologyReport {
    let counts: Vec<usize> = k.f_vector().0.iter().map(|&f| f as usize).collect();
    let mut ranks = vec![usize::from(!counts.is_empty())];
    for j in 1..counts.len() {
        ranks.push(column_rank(counts[j - 1], &boundary_columns(k, j)));
    }
    HomologyReport::from_ranks(&counts, &ranks)
}

/// `dim ker(H_i(A) → H_i(K))` for a subcomplex `A ⊆ K`, computed as
/// `dim(Z_i(A) ∩ B_i(K)) − dim B_i(A)` inside the chain space of `K`.
pub fn induced_kernel_dim(k: &SimplicialComplex, a: &SimplicialComplex, i: usize) -> Result<u64, HomologyError> {
    if let Some(f) = a.facets().iter().find(|f| !k.contains_face(f)) {
        return Err(HomologyError::NotSubcomplex(f.clone()));
    }
    let a_faces = a.faces(i);
    if a_faces.is_empty() {
        return Ok(0);
    }
    let ktab = k.face_table();
    let n_k = ktab.faces(i).len();
    let embed: Vec<usize> = a_faces.iter().map(|s| ktab.position(s).expect("subcomplex face")).collect();

    let z_local: Vec<BitVec> = if i == 0 {
        (0..a_faces.len()).map(|p| BitVec::from_ones(a_faces.len(), [p])).collect()
    } else {
        let cols = boundary_columns(a, i);
        kernel_basis(a.faces(i - 1).len(), &support_vectors(a.faces(i - 1).len(), &cols))
    };
    let z: Vec<BitVec> = z_local.iter().map(|v| BitVec::from_ones(n_k, v.ones().map(|p| embed[p]))).collect();

    let b_k: Vec<BitVec> = if ktab.dims() > i + 1 { support_vectors(n_k, &boundary_columns(k, i + 1)) } else { Vec::new() };
    let b_a_dim = if a.face_table().dims() > i + 1 { column_rank(a_faces.len(), &boundary_columns(a, i + 1)) } else { 0 };

    let mut e = Echelon::new(n_k);
    for v in &b_k {
        e.insert(v.clone());
    }
    let dim_b = e.rank();
    for v in &z {
        e.insert(v.clone());
    }
    let dim_sum = e.rank();
    let dim_z = z.len();
    let dim_cap = dim_z + dim_b - dim_sum;
    Ok((dim_cap - b_a_dim) as u64)
}

/// Per-index Morse multiplicities contributed by `v` when the vertices in
/// `lower` come before it: entry `k` is `β̃_{k−1}` of the span of
/// `lower ∩ V(lk v)` inside `lk v`, for `k = 0..=dim K`.
pub fn relative_mu_contribution(
    k: &SimplicialComplex,
    v: Vertex,
    lower: &[Vertex],
) -> Result<Vec<u64>, HomologyError> {
    if !k.has_vertex(v) {
        return Err(HomologyError::UnknownVertex(v));
    }
    if lower.contains(&v) {
        return Err(HomologyError::LowerContainsVertex(v));
    }
    if let Some(&u) = lower.iter().find(|u| !k.has_vertex(**u)) {
        return Err(HomologyError::UnknownVertex(u));
    }
    let d = k.dim().unwrap_or(0);
    let link = k.link(&Simplex::from_sorted(vec![v]))?;
    let engine = SpanHomology::new(&link);
    let mask = engine.mask_of(lower.iter().copied());
    let mut out = engine.reduced_betti(&mask, d.saturating_sub(1));
    out.resize(d + 1, 0);
    Ok(out)
}

const NONE: u32 = u32::MAX;

/// Precomputed face data of a complex for homology of induced subcomplexes.
/// Vertex subsets are bit masks over the complex's sorted vertex list.
#[derive(Clone, Debug)]
pub struct SpanHomology {
    labels: Vec<Vertex>,
    words: usize,
    counts: Vec<usize>,
    masks: Vec<Vec<u64>>,
    boundary: Vec<Vec<u32>>,
    cocycles: Vec<Vec<BitVec>>,
}

struct Selection {
    faces: Vec<Vec<u32>>,
    local: Vec<Vec<u32>>,
}

impl SpanHomology {
    pub fn new(k: &SimplicialComplex) -> Self {
        let labels = k.vertices().to_vec();
        let words = labels.len().div_ceil(64).max(1);
        let table = k.face_table();
        let mut masks = Vec::with_capacity(table.dims());
        let mut boundary = Vec::with_capacity(table.dims());
        let mut counts = Vec::with_capacity(table.dims());
        for j in 0..table.dims() {
            let faces = table.faces(j);
            counts.push(faces.len());
            let mut m = vec![0u64; faces.len() * words];
            let mut b = Vec::with_capacity(if j == 0 { 0 } else { faces.len() * (j + 1) });
            for (p, s) in faces.iter().enumerate() {
                for &v in s.vertices() {
                    let i = k.vertex_index(v);
                    m[p * words + i / 64] |= 1 << (i % 64);
                }
                if j > 0 {
                    b.extend(s.boundary().iter().map(|f| table.position(f).expect("boundary face") as u32));
                }
            }
            masks.push(m);
            boundary.push(b);
        }
        SpanHomology { labels, words, counts, masks, boundary, cocycles: Vec::new() }
    }

    /// Also precomputes cohomology classes of the whole complex in degrees
    /// `0..=i_max`, needed by [`Self::kernel_dims`].
    pub fn with_cohomology(mut self, i_max: usize) -> Self {
        self.cocycles = (0..=i_max).map(|i| self.cohomology_basis(i)).collect();
        self
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.labels
    }

    pub fn dim(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    /// Mask of the given labels; labels outside the complex are ignored.
    pub fn mask_of<I: IntoIterator<Item = Vertex>>(&self, vertices: I) -> Vec<u64> {
        let mut m = vec![0u64; self.words];
        for v in vertices {
            if let Ok(i) = self.labels.binary_search(&v) {
                m[i / 64] |= 1 << (i % 64);
            }
        }
        m
    }

    pub fn full_mask(&self) -> Vec<u64> {
        self.mask_of(self.labels.iter().copied())
    }

    fn select(&self, w: &[u64], dims: usize) -> Selection {
        let dims = dims.min(self.counts.len());
        let mut faces = Vec::with_capacity(dims);
        let mut local = Vec::with_capacity(dims);
        for j in 0..dims {
            let mut f = Vec::new();
            let mut l = vec![NONE; self.counts[j]];
            for (p, m) in self.masks[j].chunks_exact(self.words).enumerate() {
                if m.iter().zip(w).all(|(a, b)| a & !b == 0) {
                    l[p] = f.len() as u32;
                    f.push(p as u32);
                }
            }
            faces.push(f);
            local.push(l);
        }
        Selection { faces, local }
    }

    fn local_column(&self, sel: &Selection, j: usize, global: u32) -> BitVec {
        let stride = j + 1;
        let start = global as usize * stride;
        BitVec::from_ones(
            sel.faces[j - 1].len(),
            self.boundary[j][start..start + stride].iter().map(|&b| sel.local[j - 1][b as usize] as usize),
        )
    }

    /// `rank ∂_j` on the selection for `j = 1..sel.faces.len()`; index 0 holds 0.
    fn ranks(&self, sel: &Selection) -> Vec<usize> {
        let mut ranks = vec![0];
        for j in 1..sel.faces.len() {
            let mut e = Echelon::new(sel.faces[j - 1].len());
            for &g in &sel.faces[j] {
                e.insert(self.local_column(sel, j, g));
            }
            ranks.push(e.rank());
        }
        ranks
    }

    /// Basis of `Z_i` on the selection, as vectors over the local `i`-faces.
    fn cycles(&self, sel: &Selection, i: usize) -> Vec<BitVec> {
        let n = sel.faces[i].len();
        if i == 0 {
            return (0..n).map(|p| BitVec::from_ones(n, [p])).collect();
        }
        let cols: Vec<BitVec> = sel.faces[i].iter().map(|&g| self.local_column(sel, i, g)).collect();
        kernel_basis(sel.faces[i - 1].len(), &cols)
    }

    /// Reduced Betti numbers `β̃_{−1}, …, β̃_top` of `span(w)`.
    pub fn reduced_betti(&self, w: &[u64], top: usize) -> Vec<u64> {
        let sel = self.select(w, top + 2);
        let ranks = self.ranks(&sel);
        let n = |j: usize| sel.faces.get(j).map_or(0, Vec::len);
        let r = |j: usize| ranks.get(j).copied().unwrap_or(0);
        let aug = usize::from(n(0) > 0);
        let mut out = vec![(1 - aug) as u64];
        for j in 0..=top {
            let down = if j == 0 { aug } else { r(j) };
            out.push((n(j) - down - r(j + 1)) as u64);
        }
        out
    }

    /// Ordinary Betti numbers `β_0, …, β_top` of `span(w)`.
    pub fn betti(&self, w: &[u64], top: usize) -> Vec<u64> {
        let sel = self.select(w, top + 2);
        let ranks = self.ranks(&sel);
        (0..=top)
            .map(|j| {
                let n = sel.faces.get(j).map_or(0, Vec::len);
                let r = |j: usize| ranks.get(j).copied().unwrap_or(0);
                (n - r(j) - r(j + 1)) as u64
            })
            .collect()
    }

    /// Representatives of a basis of `H^i` of the whole complex, as cochains
    /// over its `i`-faces: cocycles independent modulo coboundaries.
    fn cohomology_basis(&self, i: usize) -> Vec<BitVec> {
        let n_i = self.counts.get(i).copied().unwrap_or(0);
        if n_i == 0 {
            return Vec::new();
        }
        let n_up = self.counts.get(i + 1).copied().unwrap_or(0);
        let mut cob: Vec<Vec<usize>> = vec![Vec::new(); n_i];
        if n_up > 0 {
            for (s, faces) in self.boundary[i + 1].chunks_exact(i + 2).enumerate() {
                for &f in faces {
                    cob[f as usize].push(s);
                }
            }
        }
        let cocycles = kernel_basis(n_up, &support_vectors(n_up, &cob));
        let mut e = Echelon::new(n_i);
        if i > 0 {
            let mut down: Vec<Vec<usize>> = vec![Vec::new(); self.counts[i - 1]];
            for (s, faces) in self.boundary[i].chunks_exact(i + 1).enumerate() {
                for &f in faces {
                    down[f as usize].push(s);
                }
            }
            for d in &down {
                e.insert(BitVec::from_ones(n_i, d.iter().copied()));
            }
        }
        cocycles.into_iter().filter(|c| e.insert(c.clone()).is_none()).collect()
    }

    /// `dim ker(H_i(span w) → H_i(K))` for `i = 0..=i_max`, where `K` is the
    /// whole complex. The image rank is read off the pairing between cycles
    /// of the span and a cohomology basis of `K`. Requires
    /// [`Self::with_cohomology`] with at least `i_max`.
    pub fn kernel_dims(&self, w: &[u64], i_max: usize) -> Vec<u64> {
        assert!(self.cocycles.len() > i_max, "cohomology not precomputed up to degree {i_max}");
        let sel = self.select(w, i_max + 2);
        let ranks = self.ranks(&sel);
        let n = |j: usize| sel.faces.get(j).map_or(0, Vec::len);
        let r = |j: usize| ranks.get(j).copied().unwrap_or(0);
        (0..=i_max)
            .map(|i| {
                let beta = n(i) - r(i) - r(i + 1);
                let classes = &self.cocycles[i];
                if beta == 0 || classes.is_empty() {
                    return beta as u64;
                }
                let z = self.cycles(&sel, i);
                let mut e = Echelon::new(z.len());
                for phi in classes {
                    let restricted = BitVec::from_ones(n(i), sel.faces[i].iter().enumerate().filter(|(_, &g)| phi.get(g as usize)).map(|(l, _)| l));
                    e.insert(BitVec::from_ones(z.len(), z.iter().enumerate().filter(|(_, c)| c.dot(&restricted)).map(|(l, _)| l)));
                }
                (beta - e.rank()) as u64
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(n: u32) -> SimplicialComplex {
        let all: Vec<u32> = (1..=n).collect();
        let facets: Vec<Vec<u32>> = (0..n as usize)
            .map(|skip| all.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect())
            .collect();
        SimplicialComplex::from_facets(&facets).unwrap()
    }

    #[test]
    fn triangle_boundary_matrix() {
        let k = SimplicialComplex::from_facets(&[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap();
        let m = boundary_matrix(&k, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        assert!((0..3).all(|c| m.column(c).count_ones() == 2));
        assert!(boundary_matrix(&k, 2).is_err());
        let aug = boundary_matrix(&k, 0).unwrap();
        assert_eq!((aug.rows(), aug.cols()), (1, 3));
    }

    #[test]
    fn boundary_squared_vanishes() {
        let k = sphere(4);
        let d1 = boundary_matrix(&k, 1).unwrap();
        let d2 = boundary_matrix(&k, 2).unwrap();
        assert!(d1.mul(&d2).unwrap().is_zero());
        assert!(boundary_matrix(&k, 0).unwrap().mul(&d1).unwrap().is_zero());
    }

    #[test]
    fn spheres_and_empty() {
        let r = betti_numbers(&sphere(5));
        assert_eq!(r.betti, vec![1, 0, 0, 1]);
        assert_eq!(r.reduced, vec![0, 0, 0, 0, 1]);
        let e = betti_numbers(&SimplicialComplex::empty());
        assert!(e.betti.is_empty());
        assert_eq!(e.reduced, vec![1]);
        assert_eq!(r.to_json(), r#"{"betti":[1,0,0,1],"reduced":[0,0,0,0,1],"field":"GF2"}"#);
    }

    #[test]
    fn kernel_of_circle_in_disk_and_sphere() {
        let k = sphere(5);
        let facet = SimplicialComplex::from_facets(&[k.facets()[0].vertices()]).unwrap();
        for i in 0..3 {
            assert_eq!(induced_kernel_dim(&k, &facet, i).unwrap(), 0);
            assert_eq!(induced_kernel_dim(&k, &k, i).unwrap(), 0);
        }
        let two_points = SimplicialComplex::from_facets(&[vec![1], vec![3]]).unwrap();
        assert_eq!(induced_kernel_dim(&k, &two_points, 0).unwrap(), 1);
        let alien = SimplicialComplex::from_facets(&[vec![1, 9]]).unwrap();
        assert!(matches!(induced_kernel_dim(&k, &alien, 0), Err(HomologyError::NotSubcomplex(_))));
    }

    #[test]
    fn mu_contributions() {
        let k = sphere(5);
        assert_eq!(relative_mu_contribution(&k, 1, &[]).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(relative_mu_contribution(&k, 5, &[1, 2, 3, 4]).unwrap(), vec![0, 0, 0, 1]);
        let cycle = SimplicialComplex::from_facets(&[vec![1, 2], vec![2, 3], vec![1, 3]]).unwrap();
        assert_eq!(relative_mu_contribution(&cycle, 2, &[1]).unwrap(), vec![0, 0]);
        assert_eq!(relative_mu_contribution(&cycle, 3, &[1, 2]).unwrap(), vec![0, 1]);
        assert!(relative_mu_contribution(&cycle, 2, &[2]).is_err());
    }

    #[test]
    fn span_engine_matches_direct_computation() {
        let k = sphere(6);
        let engine = SpanHomology::new(&k).with_cohomology(4);
        for bits in 0u32..64 {
            let w: Vec<Vertex> = (1..=6).filter(|v| bits >> (v - 1) & 1 == 1).collect();
            let span = k.span(&w).unwrap();
            let mask = engine.mask_of(w.iter().copied());
            let direct = betti_numbers(&span);
            let mut reduced = engine.reduced_betti(&mask, 4);
            while reduced.len() > direct.reduced.len() && reduced.last() == Some(&0) {
                reduced.pop();
            }
            assert_eq!(reduced, direct.reduced, "W = {w:?}");
            let kernels = engine.kernel_dims(&mask, 4);
            for (i, &kernel) in kernels.iter().enumerate() {
                assert_eq!(kernel, induced_kernel_dim(&k, &span, i).unwrap(), "W = {w:?}, i = {i}");
            }
        }
    }
}
