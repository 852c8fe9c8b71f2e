//! Random valid pairs `(L ⊂ M)` with known structure, disguised by
//! random changes of basis.
//!
//! `L` is a sum of sphere pieces (one cycle) and disc pieces (`e_p ↦ e_{p−1}`).
//! `M = L ⊕ N`, where the sphere generators of `N` may bound cycles of `L`
//! through a twist `φ`, so `ι_*` is genuinely non-injective.

#![allow(dead_code)]

use intspace_core::chain::{FiniteChainComplex, PairComplex};
use intspace_core::matrix::QMatrix;
use intspace_core::rational::{int, Rational};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_DIM: usize = 8;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Basis of a complex built from pieces, with the boundary on generators.
struct Pieces {
    dims: Vec<usize>,
    /// `(degree, index)` of each cycle generator that may receive a twist.
    cycles: Vec<(usize, usize)>,
    /// Boundary entries `(degree of source, source index, target index)`.
    edges: Vec<(usize, usize, usize)>,
}

impl Pieces {
    fn new(len: usize) -> Self {
        Self {
            dims: vec![0; len],
            cycles: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn room(&self, q: usize) -> bool {
        self.dims[q] < MAX_DIM
    }

    fn sphere(&mut self, q: usize) -> usize {
        let i = self.dims[q];
        self.dims[q] += 1;
        self.cycles.push((q, i));
        i
    }

    fn disc(&mut self, q: usize) {
        let top = self.dims[q];
        let bottom = self.dims[q - 1];
        self.dims[q] += 1;
        self.dims[q - 1] += 1;
        self.cycles.push((q - 1, bottom));
        self.edges.push((q, top, bottom));
    }

    fn fill(&mut self, rng: &mut ChaCha8Rng, pieces: usize) {
        let len = self.dims.len();
        for _ in 0..pieces {
            let q = rng.gen_range(0..len);
            if rng.gen_bool(0.5) || q == 0 {
                if self.room(q) {
                    self.sphere(q);
                }
            } else if self.room(q) && self.room(q - 1) {
                self.disc(q);
            }
        }
    }
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> (QMatrix, QMatrix) {
    loop {
        let g = QMatrix::from_fn(n, n, |i, j| {
            if i == j {
                int(rng.gen_range(1..=2))
            } else if rng.gen_bool(0.35) {
                int(rng.gen_range(-2..=2))
            } else {
                Rational::zero()
            }
        });
        if let Some(inv) = g.inverse() {
            return (g, inv);
        }
    }
}

fn random_cycle(rng: &mut ChaCha8Rng, link: &Pieces, q: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); link.dims[q]];
    for &(deg, i) in &link.cycles {
        if deg == q && rng.gen_bool(0.6) {
            v[i] = int(rng.gen_range(-2..=2));
        }
    }
    v
}

/// A random valid pair of manifold dimension `1..=4` with a random cutoff.
pub fn random_pair(rng: &mut ChaCha8Rng) -> PairComplex {
    let m = rng.gen_range(1..=4);
    let mut link = Pieces::new(m);
    let pieces = rng.gen_range(1..=6);
    link.fill(rng, pieces);
    let mut extra = Pieces::new(m + 1);
    let link_dims_ext: Vec<usize> = (0..=m)
        .map(|q| link.dims.get(q).copied().unwrap_or(0))
        .collect();

    // Pieces of N, keeping the total below the per-degree limit.
    let mut twist: Vec<(usize, usize, Vec<Rational>)> = Vec::new();
    for _ in 0..rng.gen_range(0..=5) {
        let q = rng.gen_range(0..=m);
        let total = |p: &Pieces, d: usize| link_dims_ext[d] + p.dims[d];
        if q == 0 || rng.gen_bool(0.6) {
            if total(&extra, q) < MAX_DIM {
                let i = extra.sphere(q);
                if q >= 1 && q - 1 < m && rng.gen_bool(0.7) {
                    twist.push((q, i, random_cycle(rng, &link, q - 1)));
                }
            }
        } else if total(&extra, q) < MAX_DIM && total(&extra, q - 1) < MAX_DIM {
            extra.disc(q);
        }
    }

    let link_complex = assemble(&link.dims, &link.edges, &[], &[]);
    let ext_dims: Vec<usize> = (0..=m).map(|q| link_dims_ext[q] + extra.dims[q]).collect();
    let exterior = assemble(
        &ext_dims,
        &link.edges,
        &extra_offset(&extra, &link_dims_ext),
        &twist_entries(&twist, &link_dims_ext),
    );

    // Disguise: ∂' = G⁻¹ ∂ G on M, H⁻¹ ∂ H on L, f = G⁻¹ ι H.
    let g: Vec<(QMatrix, QMatrix)> = ext_dims
        .iter()
        .map(|&n| random_invertible(rng, n))
        .collect();
    let h: Vec<(QMatrix, QMatrix)> = link
        .dims
        .iter()
        .map(|&n| random_invertible(rng, n))
        .collect();
    let ext_bd: Vec<QMatrix> = (1..=m)
        .map(|q| g[q - 1].1.mul(&exterior.boundary(q)).mul(&g[q].0))
        .collect();
    let link_bd: Vec<QMatrix> = (1..m)
        .map(|q| h[q - 1].1.mul(&link_complex.boundary(q)).mul(&h[q].0))
        .collect();
    let inclusion: Vec<QMatrix> = (0..m)
        .map(|q| {
            let iota = QMatrix::from_fn(ext_dims[q], link.dims[q], |i, j| {
                if i == j {
                    int(1)
                } else {
                    Rational::zero()
                }
            });
            g[q].1.mul(&iota).mul(&h[q].0)
        })
        .collect();
    let link_c =
        FiniteChainComplex::new(link.dims.clone(), link_bd).expect("disguised link is a complex");
    let ext_c = FiniteChainComplex::new(ext_dims, ext_bd).expect("disguised exterior is a complex");
    let cutoff = rng.gen_range(0..=m);
    PairComplex::new(link_c, ext_c, inclusion, m, cutoff).expect("disguised pair is valid")
}

/// `N` edges shifted past the `L` block.
fn extra_offset(extra: &Pieces, offset: &[usize]) -> Vec<(usize, usize, usize)> {
    extra
        .edges
        .iter()
        .map(|&(q, s, t)| (q, offset[q] + s, offset[q - 1] + t))
        .collect()
}

/// Twist entries `(degree, column in M, column of L-coefficients)`.
fn twist_entries(
    twist: &[(usize, usize, Vec<Rational>)],
    offset: &[usize],
) -> Vec<(usize, usize, Vec<Rational>)> {
    twist
        .iter()
        .map(|(q, i, v)| (*q, offset[*q] + i, v.clone()))
        .collect()
}

fn assemble(
    dims: &[usize],
    link_edges: &[(usize, usize, usize)],
    extra_edges: &[(usize, usize, usize)],
    twist: &[(usize, usize, Vec<Rational>)],
) -> FiniteChainComplex {
    let mut boundaries: Vec<QMatrix> = (1..dims.len())
        .map(|q| QMatrix::zeros(dims[q - 1], dims[q]))
        .collect();
    let mut rows: Vec<Vec<Vec<Rational>>> = boundaries
        .iter()
        .map(|b| (0..b.rows()).map(|i| b.row(i).to_vec()).collect())
        .collect();
    for &(q, s, t) in link_edges.iter().chain(extra_edges) {
        rows[q - 1][t][s] = int(1);
    }
    for (q, col, v) in twist {
        for (i, c) in v.iter().enumerate() {
            rows[q - 1][i][*col] = c.clone();
        }
    }
    for (q, r) in rows.into_iter().enumerate() {
        boundaries[q] = QMatrix::from_rows(dims[q + 1], r);
    }
    FiniteChainComplex::new(dims.to_vec(), boundaries).expect("assembled pieces form a complex")
}
