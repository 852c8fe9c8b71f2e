//! Intersection-space homology straight from boundary matrices.
//!
//! A pair `(M, L)` is given by two finite chain complexes over `ℚ` and a
//! chain map `L → M` modelling the inclusion of the boundary. Homology of
//! the intersection space is computed twice: once through closed formulas in
//! `H(M)`, `H(M, L)` and one induced map, and once by building the chain
//! level truncation `t_{<k} L` and taking the mapping cone of the composite
//! `t_{<k} L → L → M`.

use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::topology::BettiVector;

/// `C_0 ← C_1 ← ... ← C_top` with `boundaries[i] = ∂_{i+1} : C_{i+1} → C_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<QMatrix>,
}

impl FiniteChainComplex {
    /// Checks shapes and `∂∂ = 0`. `boundaries` may be shorter than
    /// `dims.len() − 1`; missing maps are zero.
    pub fn new(dims: Vec<usize>, boundaries: Vec<QMatrix>) -> Result<Self> {
        if boundaries.len() + 1 > dims.len().max(1) {
            return Err(Error::MalformedComplex(format!(
                "{} boundary maps for {} degrees",
                boundaries.len(),
                dims.len()
            )));
        }
        let mut full = Vec::with_capacity(dims.len().saturating_sub(1));
        for k in 1..dims.len() {
            let d = match boundaries.get(k - 1) {
                Some(d) => d.clone(),
                None => QMatrix::zeros(dims[k - 1], dims[k]),
            };
            if d.shape() != (dims[k - 1], dims[k]) {
                return Err(Error::MalformedComplex(format!(
                    "∂_{k} is {}×{}, expected {}×{}",
                    d.rows(),
                    d.cols(),
                    dims[k - 1],
                    dims[k]
                )));
            }
            full.push(d);
        }
        for k in 1..full.len() {
            if !full[k - 1].mul(&full[k]).is_zero() {
                return Err(Error::MalformedComplex(format!(
                    "∂_{} ∘ ∂_{} ≠ 0",
                    k,
                    k + 1
                )));
            }
        }
        Ok(Self {
            dims,
            boundaries: full,
        })
    }

    pub fn zero() -> Self {
        Self {
            dims: Vec::new(),
            boundaries: Vec::new(),
        }
    }

    /// Number of degrees `0..len`.
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `∂_k : C_k → C_{k−1}`, zero outside the stored range.
    pub fn boundary(&self, k: usize) -> QMatrix {
        if k >= 1 && k < self.dims.len() {
            self.boundaries[k - 1].clone()
        } else {
            QMatrix::zeros(if k == 0 { 0 } else { self.dim(k - 1) }, self.dim(k))
        }
    }

    pub fn boundaries(&self) -> &[QMatrix] {
        &self.boundaries
    }

    fn boundary_rank(&self, k: usize) -> usize {
        if k >= 1 && k < self.dims.len() {
            self.boundaries[k - 1].rank()
        } else {
            0
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
}

/// Degreewise matrices `f_k : A_k → B_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    matrices: Vec<QMatrix>,
}

impl ChainMap {
    /// Checks shapes and `∂^B f = f ∂^A`. Missing degrees are zero maps.
    pub fn new(
        source: &FiniteChainComplex,
        target: &FiniteChainComplex,
        matrices: Vec<QMatrix>,
    ) -> Result<Self> {
        let len = source.len();
        if matrices.len() > len {
            return Err(Error::MalformedComplex(format!(
                "{} chain map components for a source with {} degrees",
                matrices.len(),
                len
            )));
        }
        let mut full = Vec::with_capacity(len);
        for k in 0..len {
            let f = match matrices.get(k) {
                Some(f) => f.clone(),
                None => QMatrix::zeros(target.dim(k), source.dim(k)),
            };
            if f.shape() != (target.dim(k), source.dim(k)) {
                return Err(Error::MalformedComplex(format!(
                    "f_{k} is {}×{}, expected {}×{}",
                    f.rows(),
                    f.cols(),
                    target.dim(k),
                    source.dim(k)
                )));
            }
            full.push(f);
        }
        let map = Self { matrices: full };
        for k in 1..len {
            let left = target.boundary(k).mul(&map.matrices[k]);
            let right = map.matrices[k - 1].mul(&source.boundary(k));
            if left != right {
                return Err(Error::MalformedComplex(format!(
                    "chain map does not commute with ∂ in degree {k}"
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(c: &FiniteChainComplex) -> Self {
        Self {
            matrices: c.dims.iter().map(|&d| QMatrix::identity(d)).collect(),
        }
    }

    /// `f_k`, with the supplied shape when `k` is out of range.
    pub fn component(&self, k: usize, rows: usize, cols: usize) -> QMatrix {
        match self.matrices.get(k) {
            Some(f) => f.clone(),
            None => QMatrix::zeros(rows, cols),
        }
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.matrices
    }

    /// `self ∘ first`, for `first : A → B` and `self : B → C`.
    pub fn compose(
        &self,
        first: &ChainMap,
        a: &FiniteChainComplex,
        b: &FiniteChainComplex,
        c: &FiniteChainComplex,
    ) -> ChainMap {
        ChainMap {
            matrices: (0..a.len())
                .map(|k| {
                    self.component(k, c.dim(k), b.dim(k)).mul(&first.component(
                        k,
                        b.dim(k),
                        a.dim(k),
                    ))
                })
                .collect(),
        }
    }
}

/// An exterior `M` with boundary `L`, an inclusion `L → M`, the real
/// dimension `m` of `M` and the truncation cutoff `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairComplex {
    pub link: FiniteChainComplex,
    pub exterior: FiniteChainComplex,
    pub inclusion: ChainMap,
    pub manifold_dim: usize,
    pub cutoff: usize,
}

impl PairComplex {
    pub fn new(
        link: FiniteChainComplex,
        exterior: FiniteChainComplex,
        inclusion: Vec<QMatrix>,
        manifold_dim: usize,
        cutoff: usize,
    ) -> Result<Self> {
        if cutoff > manifold_dim + 1 {
            return Err(Error::Range(format!(
                "cutoff {cutoff} exceeds manifold dimension {manifold_dim} + 1"
            )));
        }
        if exterior.len() > manifold_dim + 1 {
            return Err(Error::MalformedComplex(format!(
                "exterior has cells in degree {} above the dimension {manifold_dim}",
                exterior.len() - 1
            )));
        }
        let inclusion = ChainMap::new(&link, &exterior, inclusion)?;
        Ok(Self {
            link,
            exterior,
            inclusion,
            manifold_dim,
            cutoff,
        })
    }

    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        if cutoff > self.manifold_dim + 1 {
            return Err(Error::Range(format!(
                "cutoff {cutoff} exceeds {}",
                self.manifold_dim + 1
            )));
        }
        Ok(Self {
            cutoff,
            ..self.clone()
        })
    }
}

/// `dim ker ∂_k − rank ∂_{k+1}` for every degree.
pub fn homology_ranks(c: &FiniteChainComplex) -> BettiVector {
    BettiVector::new(
        (0..c.len())
            .map(|k| (c.dim(k) - c.boundary_rank(k) - c.boundary_rank(k + 1)) as u64)
            .collect(),
    )
}

/// `Cone(f)_q = B_q ⊕ A_{q−1}` with `∂(b, a) = (∂b + f a, −∂a)`.
pub fn mapping_cone(
    f: &ChainMap,
    a: &FiniteChainComplex,
    b: &FiniteChainComplex,
) -> FiniteChainComplex {
    let len = b.len().max(a.len() + 1);
    let dims: Vec<usize> = (0..len)
        .map(|q| b.dim(q) + if q == 0 { 0 } else { a.dim(q - 1) })
        .collect();
    let boundaries = (1..len)
        .map(|q| {
            let lower_a = if q >= 2 { a.dim(q - 2) } else { 0 };
            let d_a = if q >= 2 {
                a.boundary(q - 1).neg()
            } else {
                QMatrix::zeros(0, a.dim(q - 1))
            };
            QMatrix::block(
                &b.boundary(q),
                &f.component(q - 1, b.dim(q - 1), a.dim(q - 1)),
                &QMatrix::zeros(lower_a, b.dim(q)),
                &d_a,
            )
        })
        .collect();
    FiniteChainComplex { dims, boundaries }
}

/// `H(M, L)`, as the homology of the cone of the inclusion.
pub fn relative_homology_ranks(p: &PairComplex) -> BettiVector {
    homology_ranks(&mapping_cone(&p.inclusion, &p.link, &p.exterior))
}

/// Rank of `f_* : H_k(A) → H_k(B)`.
pub fn induced_rank(
    f: &ChainMap,
    a: &FiniteChainComplex,
    b: &FiniteChainComplex,
    k: usize,
) -> usize {
    if k >= a.len() || b.dim(k) == 0 {
        return 0;
    }
    let cycles = a.boundary(k).kernel_basis();
    let images = f.component(k, b.dim(k), a.dim(k)).mul(&cycles);
    let bounds = b.boundary(k + 1);
    images.hstack(&bounds).rank() - bounds.rank()
}

/// The chain-level truncation `t_{<k} C` and its inclusion into `C`.
///
/// Degrees below `k` are kept, degree `k` is replaced by a complement `Y`
/// of the cycles (spanned by unit vectors at the pivot columns of `∂_k`),
/// and everything above `k` is dropped. Then `H_r(t_{<k} C) = 0` for
/// `r ≥ k` and the inclusion is an isomorphism on `H_r` for `r < k`.
pub fn chain_truncation(c: &FiniteChainComplex, k: usize) -> (FiniteChainComplex, ChainMap) {
    if k >= c.len() {
        return (c.clone(), ChainMap::identity(c));
    }
    let y = c.boundary(k).image_complement_basis();
    let mut dims: Vec<usize> = c.dims[..k].to_vec();
    dims.push(y.cols());
    let mut boundaries: Vec<QMatrix> = c.boundaries[..k.saturating_sub(1)].to_vec();
    if k >= 1 {
        boundaries.push(c.boundary(k).mul(&y));
    }
    let mut maps: Vec<QMatrix> = c.dims[..k].iter().map(|&d| QMatrix::identity(d)).collect();
    maps.push(y);
    (
        FiniteChainComplex { dims, boundaries },
        ChainMap { matrices: maps },
    )
}

fn padded(b: &BettiVector, len: usize) -> BettiVector {
    BettiVector::new((0..len).map(|i| b.get(i)).collect())
}

/// Reduced intersection-space homology from `H(M)`, `H(M, L)` and the map
/// `H_{k−1}(L) → H_{k−1}(M)`:
///
/// * `i > k`: `H_i(M)`,
/// * `i < k`: `H_i(M, L)`,
/// * `i = k`: `H_k(M)` plus the kernel of `H_{k−1}(L) → H_{k−1}(M)`.
///
/// For `k = 0` (or an empty link) the result is the unreduced `H(M)`: the
/// cone on an empty truncation is a disjoint base point.
pub fn hi_from_pair(p: &PairComplex) -> BettiVector {
    let k = p.cutoff;
    let absolute = homology_ranks(&p.exterior);
    let relative = relative_homology_ranks(p);
    let link = homology_ranks(&p.link);
    let top = p.manifold_dim + 1;
    BettiVector::new(
        (0..top)
            .map(|i| {
                if i > k {
                    absolute.get(i)
                } else if i < k {
                    relative.get(i)
                } else if k == 0 {
                    absolute.get(0)
                } else {
                    let rank = induced_rank(&p.inclusion, &p.link, &p.exterior, k - 1) as u64;
                    absolute.get(k) + link.get(k - 1) - rank
                }
            })
            .collect(),
    )
}

/// Reduced intersection-space homology as `H(Cone(t_{<k} L → L → M))`.
pub fn hi_via_cone(p: &PairComplex) -> BettiVector {
    let (truncated, into_link) = chain_truncation(&p.link, p.cutoff);
    let g = p
        .inclusion
        .compose(&into_link, &truncated, &p.link, &p.exterior);
    let cone = mapping_cone(&g, &truncated, &p.exterior);
    padded(&homology_ranks(&cone), p.manifold_dim + 1)
}

/// Reduced ranks with the base point put back in degree 0.
pub fn augmented(reduced: &BettiVector) -> BettiVector {
    let mut b = reduced.clone();
    b.set(0, reduced.get(0) + 1);
    b
}

/// `HI^k_i` and `HI^{m−k}_{m−i}` have the same rank for every `i`.
pub fn duality_rank_check(p: &PairComplex) -> bool {
    let m = p.manifold_dim;
    if p.cutoff > m {
        return false;
    }
    let Ok(dual) = p.with_cutoff(m - p.cutoff) else {
        return false;
    };
    let hi = hi_via_cone(p);
    let hi_dual = hi_via_cone(&dual);
    (0..=m).all(|i| hi.get(i) == hi_dual.get(m - i))
}

/// Small pairs with known answers.
pub mod fixtures {
    use super::*;

    fn q(rows: &[&[i64]], cols: usize) -> QMatrix {
        if rows.is_empty() {
            QMatrix::zeros(0, cols)
        } else {
            QMatrix::from_i64(rows)
        }
    }

    /// `k` disjoint circles, one vertex and one loop each.
    pub fn circles(k: usize) -> FiniteChainComplex {
        FiniteChainComplex::new(vec![k, k], vec![QMatrix::zeros(k, k)]).expect("valid complex")
    }

    /// Cylinder `I × S¹` (cells `v0, v1 | a0, a1, e | σ`, `∂e = v1 − v0`,
    /// `∂σ = a0 − a1`) with its two boundary circles, cut off at `k = 1`.
    /// Gluing a cone on each boundary circle gives the pinched torus.
    pub fn pinched_torus() -> PairComplex {
        let cylinder = FiniteChainComplex::new(
            vec![2, 3, 1],
            vec![q(&[&[0, 0, -1], &[0, 0, 1]], 3), q(&[&[1], &[-1], &[0]], 1)],
        )
        .expect("valid complex");
        let f0 = QMatrix::identity(2);
        let f1 = q(&[&[1, 0], &[0, 1], &[0, 0]], 2);
        PairComplex::new(circles(2), cylinder, vec![f0, f1], 2, 1).expect("valid pair")
    }

    /// Disk `D²` (cells `v | a | σ`, `∂σ = a`) with its boundary circle.
    pub fn disk_pair() -> PairComplex {
        let disk =
            FiniteChainComplex::new(vec![1, 1, 1], vec![QMatrix::zeros(1, 1), q(&[&[1]], 1)])
                .expect("valid complex");
        PairComplex::new(
            circles(1),
            disk,
            vec![QMatrix::identity(1), QMatrix::identity(1)],
            2,
            1,
        )
        .expect("valid pair")
    }

    /// Two disjoint disks with their boundary circles: the exterior of the
    /// crossing point of two lines.
    pub fn two_disks() -> PairComplex {
        let disks = FiniteChainComplex::new(
            vec![2, 2, 2],
            vec![QMatrix::zeros(2, 2), QMatrix::identity(2)],
        )
        .expect("valid complex");
        PairComplex::new(
            circles(2),
            disks,
            vec![QMatrix::identity(2), QMatrix::identity(2)],
            2,
            1,
        )
        .expect("valid pair")
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn bv(v: &[u64]) -> BettiVector {
        BettiVector::new(v.to_vec())
    }

    #[test]
    fn basic_homology() {
        assert_eq!(homology_ranks(&circles(1)), bv(&[1, 1]));
        let interval =
            FiniteChainComplex::new(vec![2, 1], vec![QMatrix::from_i64(&[&[-1], &[1]])]).unwrap();
        assert_eq!(homology_ranks(&interval), bv(&[1, 0]));
        let torus = FiniteChainComplex::new(vec![1, 2, 1], vec![]).unwrap();
        assert_eq!(homology_ranks(&torus), bv(&[1, 2, 1]));
        assert_eq!(homology_ranks(&FiniteChainComplex::zero()), bv(&[]));
    }

    #[test]
    fn rejects_malformed_complexes() {
        let d1 = QMatrix::from_i64(&[&[1]]);
        let d2 = QMatrix::from_i64(&[&[1]]);
        assert!(matches!(
            FiniteChainComplex::new(vec![1, 1, 1], vec![d1, d2]),
            Err(Error::MalformedComplex(_))
        ));
        assert!(FiniteChainComplex::new(vec![1, 2], vec![QMatrix::zeros(2, 1)]).is_err());
        assert!(FiniteChainComplex::new(vec![1], vec![QMatrix::zeros(1, 1)]).is_err());
    }

    #[test]
    fn rejects_non_chain_maps() {
        let interval =
            FiniteChainComplex::new(vec![2, 1], vec![QMatrix::from_i64(&[&[-1], &[1]])]).unwrap();
        let c = circles(1);
        // sending the loop to the interval's edge is not a chain map
        let bad = ChainMap::new(
            &c,
            &interval,
            vec![QMatrix::from_i64(&[&[1], &[0]]), QMatrix::identity(1)],
        );
        assert!(matches!(bad, Err(Error::MalformedComplex(_))));
        let wrong_shape = ChainMap::new(&c, &interval, vec![QMatrix::identity(1)]);
        assert!(wrong_shape.is_err());
    }

    #[test]
    fn relative_homology_examples() {
        assert_eq!(relative_homology_ranks(&pinched_torus()), bv(&[0, 1, 1]));
        assert_eq!(relative_homology_ranks(&disk_pair()), bv(&[0, 0, 1]));
        let p = pinched_torus();
        let empty = FiniteChainComplex::zero();
        let alone = PairComplex::new(empty, p.exterior.clone(), vec![], 2, 1).unwrap();
        assert_eq!(relative_homology_ranks(&alone), homology_ranks(&p.exterior));
    }

    #[test]
    fn truncation_examples() {
        let (t, f) = chain_truncation(&circles(1), 1);
        assert_eq!(homology_ranks(&t), bv(&[1, 0]));
        assert_eq!(t.dims(), &[1, 0]);
        assert_eq!(f.matrices().len(), 2);

        let (t, _) = chain_truncation(&circles(2), 1);
        assert_eq!(t.dim(0), 2);
        assert_eq!(homology_ranks(&t), bv(&[2, 0]));

        let c = pinched_torus().exterior;
        let (t, f) = chain_truncation(&c, 5);
        assert_eq!(t, c);
        assert_eq!(f, ChainMap::identity(&c));
    }

    #[test]
    fn truncation_keeps_low_homology() {
        let c = pinched_torus().exterior;
        for k in 0..=3 {
            let (t, f) = chain_truncation(&c, k);
            let h = homology_ranks(&t);
            let hc = homology_ranks(&c);
            for r in 0..3 {
                if r >= k && k < c.len() {
                    assert_eq!(h.get(r), 0, "k = {k}, r = {r}");
                } else {
                    assert_eq!(h.get(r), hc.get(r));
                    assert_eq!(induced_rank(&f, &t, &c, r) as u64, hc.get(r));
                }
            }
        }
    }

    #[test]
    fn pinched_torus_hi() {
        let p = pinched_torus();
        assert_eq!(hi_from_pair(&p), bv(&[0, 2, 0]));
        assert_eq!(hi_via_cone(&p), bv(&[0, 2, 0]));
        assert_eq!(augmented(&hi_via_cone(&p)), bv(&[1, 2, 0]));
        assert!(duality_rank_check(&p));
    }

    #[test]
    fn crossing_lines_hi_vanishes() {
        let p = two_disks();
        assert_eq!(hi_from_pair(&p), bv(&[0, 0, 0]));
        assert_eq!(hi_via_cone(&p), bv(&[0, 0, 0]));
    }

    #[test]
    fn disk_pair_hi() {
        let p = disk_pair();
        assert_eq!(hi_via_cone(&p), bv(&[0, 0, 0]));
        assert_eq!(hi_from_pair(&p), bv(&[0, 0, 0]));
        assert!(duality_rank_check(&p));
        for k in 0..=2 {
            assert!(duality_rank_check(&p.with_cutoff(k).unwrap()));
        }
    }

    #[test]
    fn cutoff_zero_is_exterior_homology() {
        let p = pinched_torus().with_cutoff(0).unwrap();
        assert_eq!(hi_from_pair(&p), bv(&[1, 1, 0]));
        assert_eq!(hi_via_cone(&p), bv(&[1, 1, 0]));
    }

    #[test]
    fn cutoff_past_top_cones_off_the_link() {
        // both ends coned to one point: a sphere with two points identified
        let p = pinched_torus().with_cutoff(3).unwrap();
        assert_eq!(hi_via_cone(&p), bv(&[0, 1, 1]));
        assert_eq!(hi_from_pair(&p), bv(&[0, 1, 1]));
    }

    #[test]
    fn corrupted_inclusion_breaks_duality() {
        let p = pinched_torus();
        // boundary loops sent to zero
        let f1 = QMatrix::zeros(3, 2);
        let bad = PairComplex::new(
            p.link.clone(),
            p.exterior.clone(),
            vec![QMatrix::identity(2), f1],
            2,
            0,
        )
        .unwrap();
        assert_eq!(hi_from_pair(&bad), hi_via_cone(&bad));
        assert!(!duality_rank_check(&bad));
        assert!(duality_rank_check(&p.with_cutoff(0).unwrap()));
    }

    #[test]
    fn relative_euler_characteristic() {
        for p in [pinched_torus(), disk_pair(), two_disks()] {
            let rel = relative_homology_ranks(&p);
            let expected = p.exterior.euler_characteristic() - p.link.euler_characteristic();
            assert_eq!(rel.euler_characteristic(), expected);
        }
    }

    #[test]
    fn pair_validation() {
        let p = pinched_torus();
        assert!(PairComplex::new(p.link.clone(), p.exterior.clone(), vec![], 2, 4).is_err());
        assert!(PairComplex::new(p.link.clone(), p.exterior.clone(), vec![], 1, 1).is_err());
    }
}
