//! Rational Betti numbers of the spaces around an isolated hypersurface
//! singularity: the smooth deformation `V_s`, the Milnor fiber `F`, the link
//! `L` and the singular fiber `V`.
//!
//! Everything here is closed-form bookkeeping over a handful of integers.
//! The exact sequences that justify the formulas are exposed as well so the
//! callers (and the tests) can confirm that a set of numbers is coherent.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ranks `b_0, b_1, ...` of a graded vector space; missing degrees are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BettiVector(Vec<u64>);

impl BettiVector {
    pub fn new(ranks: Vec<u64>) -> Self {
        Self(ranks)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `b_i`, or 0 past the end.
    pub fn get(&self, i: usize) -> u64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, value: u64) {
        if i >= self.0.len() {
            self.0.resize(i + 1, 0);
        }
        self.0[i] = value;
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn total_rank(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Euler characteristic with `b_0` lowered by one.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.euler_characteristic() - 1
    }

    /// The same ranks with `b_0` lowered by one (saturating at zero).
    pub fn reduced(&self) -> BettiVector {
        let mut r = self.clone();
        if let Some(b0) = r.0.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        r
    }

    /// `b_i = b_{len−1−i}` for every `i`.
    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// Degreewise sum, padded to the longer length.
    pub fn add(&self, other: &BettiVector) -> BettiVector {
        let len = self.len().max(other.len());
        BettiVector((0..len).map(|i| self.get(i) + other.get(i)).collect())
    }

    pub fn scaled(&self, k: u64) -> BettiVector {
        BettiVector(self.0.iter().map(|b| b * k).collect())
    }
}

impl From<Vec<u64>> for BettiVector {
    fn from(ranks: Vec<u64>) -> Self {
        Self(ranks)
    }
}

impl Index<usize> for BettiVector {
    type Output = u64;
    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// One link type together with how many singular points share it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkComponent {
    pub betti: BettiVector,
    pub count: u64,
}

/// The links of all singular points of an `n`-dimensional hypersurface.
///
/// Each link is a closed `(2n−1)`-manifold, so its Betti vector has length
/// `2n` and is palindromic. For `n ≥ 2` it is connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkProfile {
    n: usize,
    links: Vec<LinkComponent>,
}

impl LinkProfile {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("dimension must be at least 1".into()));
        }
        Ok(Self {
            n,
            links: Vec::new(),
        })
    }

    pub fn push(&mut self, betti: BettiVector, count: u64) -> Result<()> {
        let n = self.n;
        if betti.len() != 2 * n {
            return Err(Error::Inconsistent(format!(
                "link Betti vector {betti} should have length {}",
                2 * n
            )));
        }
        if !betti.is_palindromic() {
            return Err(Error::Inconsistent(format!(
                "link Betti vector {betti} violates Poincaré duality"
            )));
        }
        if n >= 2 && betti.get(0) != 1 {
            return Err(Error::Inconsistent(format!(
                "link Betti vector {betti} must be connected for n ≥ 2"
            )));
        }
        if count > 0 {
            self.links.push(LinkComponent { betti, count });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn links(&self) -> &[LinkComponent] {
        &self.links
    }

    /// Betti vector of the disjoint union of all links.
    pub fn total(&self) -> BettiVector {
        self.links
            .iter()
            .fold(BettiVector::zeros(2 * self.n), |acc, c| {
                acc.add(&c.betti.scaled(c.count))
            })
    }

    /// Number of singular points.
    pub fn singular_points(&self) -> u64 {
        self.links.iter().map(|c| c.count).sum()
    }
}

/// Betti numbers of a smooth degree-`d` hypersurface in `P^{n+1}`.
pub fn smooth_hypersurface_betti(n: usize, d: u64) -> Result<BettiVector> {
    if n == 0 || d == 0 {
        return Err(Error::Range(format!(
            "smooth hypersurface needs n ≥ 1 and d ≥ 1 (got n = {n}, d = {d})"
        )));
    }
    let d_big = BigInt::from(d);
    let one = BigInt::one();
    let power: BigInt = Pow::pow(&one - &d_big, (n + 2) as u32);
    let chi = BigInt::from(n + 2) + (power - &one) / &d_big;
    let middle = if n.is_multiple_of(2) {
        chi - BigInt::from(n)
    } else {
        BigInt::from(n + 1) - chi
    };
    let middle = middle.to_u64().ok_or_else(|| {
        Error::Range(format!(
            "middle Betti number for n = {n}, d = {d} does not fit in 64 bits"
        ))
    })?;
    let mut b = BettiVector::new((0..=2 * n).map(|i| u64::from(i % 2 == 0)).collect());
    b.set(n, middle);
    Ok(b)
}

/// A bouquet of `μ` spheres of dimension `n`, recorded up to degree `2n`.
pub fn milnor_fiber_betti(mu: u64, n: usize) -> BettiVector {
    let mut b = BettiVector::zeros(2 * n + 1);
    b.set(0, 1);
    b.set(n, b.get(n) + mu);
    b
}

/// Betti numbers of the link of a singularity with Milnor number `mu` and
/// `rank_t1 = rk(T − 1)`.
///
/// For curves the link is a union of circles, one per branch; if `branches`
/// is given it must agree with the count forced by the Wang sequence.
pub fn link_betti(mu: u64, rank_t1: u64, n: usize, branches: Option<u64>) -> Result<BettiVector> {
    if n == 0 {
        return Err(Error::Range("dimension must be at least 1".into()));
    }
    if rank_t1 > mu {
        return Err(Error::Range(format!(
            "rk(T−1) = {rank_t1} exceeds μ = {mu}"
        )));
    }
    let kernel = mu - rank_t1;
    let mut b = BettiVector::zeros(2 * n);
    if n == 1 {
        let r = 1 + kernel;
        if let Some(given) = branches {
            if given != r {
                return Err(Error::Inconsistent(format!(
                    "{given} branches supplied but μ − rk(T−1) + 1 = {r}"
                )));
            }
        }
        b.set(0, r);
        b.set(1, r);
    } else {
        b.set(0, 1);
        b.set(2 * n - 1, 1);
        b.set(n - 1, b.get(n - 1) + kernel);
        b.set(n, b.get(n) + kernel);
    }
    Ok(b)
}

/// Betti numbers of the singular fiber `V` from those of a smoothing.
///
/// `rho` is the rank of `H_n(L) → H_n(M)`, with `M` the exterior of the
/// singular points; the image of `H_n(F) → H_n(V_s)` then has rank
/// `rho + rank_t1_total`. Only `n ≥ 2` is handled.
pub fn singular_fiber_betti(
    smooth: &BettiVector,
    mu_total: u64,
    rank_t1_total: u64,
    rho: u64,
    n: usize,
) -> Result<BettiVector> {
    if n < 2 {
        return Err(Error::Range(
            "singular fiber Betti numbers need n ≥ 2".into(),
        ));
    }
    if smooth.len() != 2 * n + 1 {
        return Err(Error::Range(format!(
            "smooth Betti vector {smooth} should have length {}",
            2 * n + 1
        )));
    }
    let image = rho + rank_t1_total;
    if image > mu_total {
        return Err(Error::Range(format!(
            "ρ + rk(T−1) = {image} exceeds μ = {mu_total}"
        )));
    }
    if image > smooth.get(n) {
        return Err(Error::Range(format!(
            "ρ + rk(T−1) = {image} exceeds b_{n}(V_s) = {}",
            smooth.get(n)
        )));
    }
    let mut b = smooth.clone();
    b.set(n, smooth.get(n) - image);
    b.set(n + 1, smooth.get(n + 1) + mu_total - image);
    Ok(b)
}

/// `Σ_{i<n} (−1)^i b_i` of the total link.
pub fn truncated_link_euler(links: &LinkProfile) -> i64 {
    let total = links.total();
    (0..links.n())
        .map(|i| {
            let b = total.get(i) as i64;
            if i % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .sum()
}

/// Alternating sum of the dimensions along a finite sequence.
pub fn alternating_sum(dims: &[u64]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// Checks `0 → V_0 → V_1 → ... → V_k → 0` for exactness at the level of
/// ranks: `ranks[i]` is the rank of `V_i → V_{i+1}`, and exactness at `V_i`
/// means `dim V_i = ranks[i−1] + ranks[i]`.
pub fn ranks_are_exact(dims: &[u64], ranks: &[u64]) -> bool {
    if dims.is_empty() {
        return ranks.is_empty();
    }
    if ranks.len() + 1 != dims.len() {
        return false;
    }
    (0..dims.len()).all(|i| {
        let incoming = if i == 0 { 0 } else { ranks[i - 1] };
        let outgoing = ranks.get(i).copied().unwrap_or(0);
        dims[i] == incoming + outgoing
    })
}

/// Dimensions along the Wang sequence of the Milnor fibration, with the
/// homology of the sphere complement rewritten through Alexander duality.
///
/// `n ≥ 2`: `H_{n+1}(S−L), H_n F, H_n F, H_n(S−L)`.
/// `n = 1`: `H_2(S−L), H_1 F, H_1 F, H_1(S−L), H_0 F`.
pub fn wang_sequence(link: &BettiVector, mu: u64, n: usize) -> Vec<u64> {
    if n == 1 {
        vec![link.get(0).saturating_sub(1), mu, mu, link.get(1), 1]
    } else {
        vec![link.get(n - 1), mu, mu, link.get(n)]
    }
}

/// Whether the Wang sequence is exact when `T − 1` has rank `rank_t1`.
pub fn wang_is_exact(link: &BettiVector, mu: u64, rank_t1: u64, n: usize) -> bool {
    let dims = wang_sequence(link, mu, n);
    if rank_t1 > mu {
        return false;
    }
    let mut ranks = vec![dims[0], rank_t1, mu - rank_t1];
    if n == 1 {
        ranks.push(1);
    }
    ranks_are_exact(&dims, &ranks)
}

/// Dimensions along the specialization sequence
/// `H_{n+1}(V_s), H_{n+1}(V), H_n F, H_n(V_s), H_n(V)`.
pub fn specialization_sequence(
    smooth: &BettiVector,
    singular: &BettiVector,
    mu: u64,
    n: usize,
) -> Vec<u64> {
    vec![
        smooth.get(n + 1),
        singular.get(n + 1),
        mu,
        smooth.get(n),
        singular.get(n),
    ]
}

/// Whether the specialization sequence is exact when `H_n F → H_n V_s` has
/// rank `image`.
pub fn specialization_is_exact(
    smooth: &BettiVector,
    singular: &BettiVector,
    mu: u64,
    image: u64,
    n: usize,
) -> bool {
    let dims = specialization_sequence(smooth, singular, mu, n);
    if image > mu {
        return false;
    }
    let ranks = [dims[0], mu - image, image, dims[4]];
    ranks_are_exact(&dims, &ranks)
}
