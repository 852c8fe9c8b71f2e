//! Characteristic data of the Milnor monodromy.
//!
//! The characteristic polynomial of a finite-order operator is recorded as a
//! *divisor*: an integer combination of the symbols `Λ_m`, where `Λ_m` stands
//! for the full set of `m`-th roots of unity (the roots of `t^m − 1`). The
//! product rule `Λ_a · Λ_b = gcd(a, b) · Λ_lcm(a, b)` makes this a ring in
//! which the Milnor–Orlik formula for weighted-homogeneous germs is a plain
//! product.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Integer combination `Σ c_m · Λ_m`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonodromyDivisor {
    entries: BTreeMap<u64, i64>,
}

impl MonodromyDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `Λ_m`: every `m`-th root of unity once.
    pub fn lambda(m: u64) -> Self {
        assert!(m > 0, "root-of-unity order must be positive");
        Self {
            entries: BTreeMap::from([(m, 1)]),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut d = Self::zero();
        for (m, c) in entries {
            assert!(m > 0, "root-of-unity order must be positive");
            *d.entries.entry(m).or_insert(0) += c;
        }
        d.entries.retain(|_, c| *c != 0);
        d
    }

    pub fn entries(&self) -> &BTreeMap<u64, i64> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Multiplicity of each primitive `k`-th root of unity, keyed by `k`.
    ///
    /// A primitive `k`-th root lies in `Λ_m` exactly when `k | m`, so its
    /// multiplicity is the sum of `c_m` over multiples `m` of `k`. All
    /// primitive roots of one order share a multiplicity.
    pub fn eigenvalue_multiplicities(&self) -> BTreeMap<u64, i64> {
        let mut orders: Vec<u64> = Vec::new();
        for &m in self.entries.keys() {
            for k in divisors(m) {
                if !orders.contains(&k) {
                    orders.push(k);
                }
            }
        }
        orders.sort_unstable();
        orders
            .into_iter()
            .map(|k| {
                let mult = self
                    .entries
                    .iter()
                    .filter(|(&m, _)| m % k == 0)
                    .map(|(_, &c)| c)
                    .sum();
                (k, mult)
            })
            .filter(|&(_, mult)| mult != 0)
            .collect()
    }

    /// Number of eigenvalues with multiplicity, `Σ c_m · m`.
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(&m, &c)| c * m as i64).sum()
    }

    /// True when every eigenvalue multiplicity is non-negative, i.e. the
    /// divisor is the characteristic data of an actual operator.
    pub fn is_effective(&self) -> bool {
        self.eigenvalue_multiplicities().values().all(|&c| c >= 0)
    }

    pub fn eigenvalue_one_multiplicity(&self) -> u64 {
        let total: i64 = self.entries.values().sum();
        total.max(0) as u64
    }
}

impl fmt::Display for MonodromyDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(m, c)| format!("{c}·Λ{m}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn divisors(m: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=m.isqrt())
        .filter(|d| m.is_multiple_of(*d))
        .flat_map(|d| [d, m / d])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Rational-coefficient divisor used while expanding products.
#[derive(Clone, Debug, Default)]
struct RationalDivisor(BTreeMap<u64, Rational>);

impl RationalDivisor {
    fn one() -> Self {
        Self(BTreeMap::from([(1, Rational::one())]))
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (&a, ca) in &self.0 {
            for (&b, cb) in &other.0 {
                let g = a.gcd(&b);
                let entry = out.entry(a.lcm(&b)).or_insert_with(Rational::zero);
                *entry += ca * cb * Rational::from_integer(g.into());
            }
        }
        out.retain(|_, c: &mut Rational| !c.is_zero());
        Self(out)
    }

    fn into_integral(self) -> Result<MonodromyDivisor> {
        let mut entries = BTreeMap::new();
        for (m, c) in self.0 {
            if !c.is_integer() {
                return Err(Error::Inconsistent(format!(
                    "monodromy divisor has non-integral coefficient {c} at Λ{m}; \
                     no weighted-homogeneous isolated singularity has these weights"
                )));
            }
            let c = c
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::Range("divisor coefficient overflow".into()))?;
            entries.insert(m, c);
        }
        Ok(MonodromyDivisor { entries })
    }
}

fn check_weights(weights: &[u64], degree: u64) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::Invalid("at least one weight is required".into()));
    }
    if degree == 0 || weights.contains(&0) {
        return Err(Error::Invalid(
            "weights and weighted degree must be positive".into(),
        ));
    }
    if let Some(w) = weights.iter().find(|&&w| w > degree) {
        return Err(Error::Invalid(format!(
            "weight {w} exceeds the weighted degree {degree}"
        )));
    }
    Ok(())
}

/// Milnor–Orlik divisor `Π ((1/vᵢ)·Λ_{uᵢ} − 1)` with `d/wᵢ = uᵢ/vᵢ` reduced.
pub fn milnor_orlik(weights: &[u64], degree: u64) -> Result<MonodromyDivisor> {
    check_weights(weights, degree)?;
    let mut acc = RationalDivisor::one();
    for &w in weights {
        let g = w.gcd(&degree);
        let (u, v) = (degree / g, w / g);
        let mut factor = BTreeMap::new();
        *factor.entry(u).or_insert_with(Rational::zero) +=
            Rational::new(1.into(), (v as i64).into());
        *factor.entry(1).or_insert_with(Rational::zero) -= Rational::one();
        factor.retain(|_, c: &mut Rational| !c.is_zero());
        acc = acc.mul(&RationalDivisor(factor));
    }
    let divisor = acc.into_integral()?;
    if !divisor.is_effective() {
        return Err(Error::Inconsistent(format!(
            "weights {weights:?} with degree {degree} give a non-effective divisor {divisor}"
        )));
    }
    Ok(divisor)
}

/// `Π (d/wᵢ − 1)`, the Milnor number of a weighted-homogeneous germ.
pub fn weighted_milnor_number(weights: &[u64], degree: u64) -> Result<u64> {
    check_weights(weights, degree)?;
    let d = Rational::from_integer(degree.into());
    let prod = weights.iter().fold(Rational::one(), |acc, &w| {
        acc * (&d / Rational::from_integer(w.into()) - Rational::one())
    });
    if !prod.is_integer() {
        return Err(Error::Inconsistent(format!(
            "weights {weights:?} with degree {degree} give a non-integral Milnor number"
        )));
    }
    prod.to_integer()
        .to_u64()
        .ok_or_else(|| Error::Range("Milnor number overflow".into()))
}

/// `μ − mult(1)`; valid for finite-order (hence semisimple) monodromy.
pub fn rank_t_minus_1(mu: u64, divisor: &MonodromyDivisor) -> Result<u64> {
    if divisor.degree() != mu as i64 {
        return Err(Error::Inconsistent(format!(
            "divisor {divisor} has {} eigenvalues but μ = {mu}",
            divisor.degree()
        )));
    }
    Ok(mu - divisor.eigenvalue_one_multiplicity())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonodromySource {
    MilnorOrlik,
    NodeRule,
    UserSupplied,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyReport {
    pub mu: u64,
    pub rank_t_minus_1: u64,
    pub trivial: bool,
    pub source: MonodromySource,
}

impl MonodromyReport {
    pub fn new(mu: u64, rank_t_minus_1: u64, source: MonodromySource) -> Result<Self> {
        if rank_t_minus_1 > mu {
            return Err(Error::Range(format!(
                "rk(T−1) = {rank_t_minus_1} exceeds μ = {mu}"
            )));
        }
        Ok(Self {
            mu,
            rank_t_minus_1,
            trivial: rank_t_minus_1 == 0,
            source,
        })
    }
}

/// Weighted-homogeneous germ: μ and rk(T−1) from the Milnor–Orlik divisor.
pub fn milnor_orlik_report(weights: &[u64], degree: u64) -> Result<MonodromyReport> {
    let divisor = milnor_orlik(weights, degree)?;
    let mu = weighted_milnor_number(weights, degree)?;
    MonodromyReport::new(
        mu,
        rank_t_minus_1(mu, &divisor)?,
        MonodromySource::MilnorOrlik,
    )
}

/// Node in `k` variables: `μ = 1`, single eigenvalue `(−1)^k`.
pub fn node_rule(k: usize) -> Result<MonodromyReport> {
    if k < 2 {
        return Err(Error::Invalid(format!(
            "node rule needs at least 2 variables, got {k}"
        )));
    }
    let rank = if k.is_multiple_of(2) { 0 } else { 1 };
    MonodromyReport::new(1, rank, MonodromySource::NodeRule)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::{jacobian_standard_basis, staircase_monomials};
    use crate::poly::parse;
    use num_bigint::BigInt;

    fn euler_phi(k: u64) -> u64 {
        (1..=k).filter(|j| j.gcd(&k) == 1).count() as u64
    }

    /// Brieskorn–Pham oracle: eigenvalues of `Σ xᵢ^{aᵢ}` are the products
    /// `Π ζᵢ` with `ζᵢ^{aᵢ} = 1`, `ζᵢ ≠ 1`. Each eigenvalue is stored as an
    /// angle `Σ jᵢ/aᵢ (mod 1)`; returns counts keyed by the root's order.
    fn brieskorn_pham_eigenvalues(exponents: &[u64]) -> BTreeMap<u64, u64> {
        let mut angles = vec![Rational::zero()];
        for &a in exponents {
            let mut next = Vec::new();
            for base in &angles {
                for j in 1..a {
                    next.push(base + Rational::new((j as i64).into(), (a as i64).into()));
                }
            }
            angles = next;
        }
        let mut counts = BTreeMap::new();
        for t in angles {
            let frac = &t - t.floor();
            let order = frac.denom().to_u64().unwrap();
            *counts.entry(order).or_insert(0) += 1;
        }
        counts
    }

    /// Eigenvalue orders read off the monomial basis of the Milnor algebra:
    /// `x^β` contributes `exp(2πi Σ (βᵢ + 1) wᵢ / d)`.
    fn milnor_algebra_eigenvalues(germ: &str, weights: &[u64], d: u64) -> BTreeMap<u64, u64> {
        let g = parse(germ).unwrap();
        let basis = jacobian_standard_basis(&g).unwrap();
        let stairs = staircase_monomials(&basis.leading_monomials()).unwrap();
        let mut counts = BTreeMap::new();
        for m in stairs {
            let t =
                m.0.iter()
                    .zip(weights)
                    .fold(Rational::zero(), |acc, (&b, &w)| {
                        acc + Rational::new(BigInt::from((b as u64 + 1) * w), BigInt::from(d))
                    });
            let frac = &t - t.floor();
            *counts.entry(frac.denom().to_u64().unwrap()).or_insert(0) += 1;
        }
        counts
    }

    fn expanded_counts(div: &MonodromyDivisor) -> BTreeMap<u64, u64> {
        div.eigenvalue_multiplicities()
            .into_iter()
            .map(|(k, c)| (k, euler_phi(k) * c as u64))
            .collect()
    }

    #[test]
    fn even_node_has_eigenvalue_one() {
        let d = milnor_orlik(&[1, 1, 1, 1], 2).unwrap();
        assert_eq!(d, MonodromyDivisor::lambda(1));
        assert_eq!(d.eigenvalue_one_multiplicity(), 1);
        assert_eq!(rank_t_minus_1(1, &d).unwrap(), 0);
    }

    #[test]
    fn odd_node_has_eigenvalue_minus_one() {
        let d = milnor_orlik(&[1, 1, 1], 2).unwrap();
        assert_eq!(d.eigenvalue_multiplicities(), BTreeMap::from([(2, 1)]));
        assert_eq!(expanded_counts(&d), brieskorn_pham_eigenvalues(&[2, 2, 2]));
        assert_eq!(rank_t_minus_1(1, &d).unwrap(), 1);
    }

    #[test]
    fn e8_against_enumeration() {
        let d = milnor_orlik(&[5, 3], 15).unwrap();
        let oracle = brieskorn_pham_eigenvalues(&[3, 5]);
        assert_eq!(oracle.values().sum::<u64>(), 8);
        assert!(!oracle.contains_key(&1));
        assert_eq!(expanded_counts(&d), oracle);
        assert_eq!(d.eigenvalue_one_multiplicity(), 0);
        assert_eq!(rank_t_minus_1(8, &d).unwrap(), 8);
        assert_eq!(weighted_milnor_number(&[5, 3], 15).unwrap(), 8);
    }

    #[test]
    fn empty_divisor() {
        let d = MonodromyDivisor::zero();
        assert_eq!(d.eigenvalue_one_multiplicity(), 0);
        assert_eq!(rank_t_minus_1(0, &d).unwrap(), 0);
    }

    #[test]
    fn unit_weight_ratio_kills_the_product() {
        // d/w = 1: a linear coordinate, so the germ is smooth.
        assert!(milnor_orlik(&[3, 1], 3).unwrap().is_empty());
        assert_eq!(weighted_milnor_number(&[3, 1], 3).unwrap(), 0);
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(milnor_orlik(&[0, 1], 2).is_err());
        assert!(milnor_orlik(&[1, 1], 0).is_err());
        assert!(milnor_orlik(&[5, 1], 3).is_err());
        assert!(milnor_orlik(&[], 3).is_err());
        // (2, 2) with degree 5 is not realized by any isolated germ.
        assert!(weighted_milnor_number(&[2, 2], 5).is_err());
        assert!(milnor_orlik(&[2, 2], 5).is_err());
    }

    #[test]
    fn count_mismatch_is_inconsistent() {
        let d = milnor_orlik(&[5, 3], 15).unwrap();
        assert!(matches!(rank_t_minus_1(7, &d), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn non_brieskorn_weights_match_milnor_algebra() {
        // E7: x³ + x·y³, weights (3, 2), degree 9.
        let d = milnor_orlik(&[3, 2], 9).unwrap();
        assert_eq!(d, MonodromyDivisor::from_entries([(9, 1), (3, -1), (1, 1)]));
        assert_eq!(
            expanded_counts(&d),
            milnor_algebra_eigenvalues("x^3 + x*y^3", &[3, 2], 9)
        );
        assert_eq!(d.eigenvalue_one_multiplicity(), 1);
        // D4: x²·y + y³, weights (1, 1), degree 3.
        let d = milnor_orlik(&[1, 1], 3).unwrap();
        assert_eq!(
            expanded_counts(&d),
            milnor_algebra_eigenvalues("x^2*y + y^3", &[1, 1], 3)
        );
        // E8 through the staircase route as well.
        let d = milnor_orlik(&[5, 3], 15).unwrap();
        assert_eq!(
            expanded_counts(&d),
            milnor_algebra_eigenvalues("x^3 + y^5", &[5, 3], 15)
        );
    }

    #[test]
    fn node_rule_parities() {
        assert!(node_rule(2).unwrap().trivial);
        assert_eq!(node_rule(3).unwrap().rank_t_minus_1, 1);
        assert!(node_rule(4).unwrap().trivial);
        assert!(node_rule(1).is_err());
        for k in 2..=6 {
            let rule = node_rule(k).unwrap();
            let mo = milnor_orlik_report(&vec![1; k], 2).unwrap();
            assert_eq!((rule.mu, rule.rank_t_minus_1), (mo.mu, mo.rank_t_minus_1));
        }
    }

    #[test]
    fn report_rejects_excess_rank() {
        assert!(MonodromyReport::new(1, 2, MonodromySource::UserSupplied).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn brieskorn_pham_agrees(exps in prop::collection::vec(2u64..7, 1..4)) {
                let d = exps.iter().fold(1u64, |acc, &a| acc.lcm(&a));
                let weights: Vec<u64> = exps.iter().map(|&a| d / a).collect();
                let div = milnor_orlik(&weights, d).unwrap();
                let mu = weighted_milnor_number(&weights, d).unwrap();
                prop_assert_eq!(div.degree(), mu as i64);
                prop_assert_eq!(expanded_counts(&div), brieskorn_pham_eigenvalues(&exps));
                let rk = rank_t_minus_1(mu, &div).unwrap();
                prop_assert!(rk <= mu);
            }

            #[test]
            fn permutation_invariant(exps in prop::collection::vec(2u64..7, 1..4)) {
                let d = exps.iter().fold(1u64, |acc, &a| acc.lcm(&a));
                let weights: Vec<u64> = exps.iter().map(|&a| d / a).collect();
                let mut reversed = weights.clone();
                reversed.reverse();
                prop_assert_eq!(milnor_orlik(&weights, d).unwrap(), milnor_orlik(&reversed, d).unwrap());
            }
        }
    }
}
