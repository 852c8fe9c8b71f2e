//! Intersection-space Betti numbers of a singular hypersurface and how they
//! compare with those of its smoothing.
//!
//! The pipeline is: resolve every singular point to a pair `(μ, rk(T−1))`,
//! build the link profile, then evaluate the closed formulas for `HI`, the
//! per-degree stability flags, the two-sided bound in the middle degree and
//! the Euler characteristic identity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local::{is_node, milnor_number_with_limit, DEFAULT_REDUCTION_LIMIT};
use crate::monodromy::{milnor_orlik_report, node_rule, weighted_milnor_number};
use crate::poly::{is_singular_point, localize_at, Polynomial, ProjectivePoint};
use crate::topology::{
    link_betti, singular_fiber_betti, smooth_hypersurface_betti, specialization_is_exact,
    truncated_link_euler, wang_is_exact, BettiVector, LinkProfile,
};

/// Which engine produced a number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Groebner,
    MilnorOrlik,
    NodeRule,
    User,
    Formula,
    Assumed,
    LinearAlgebra,
    MappingCone,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Groebner => "groebner",
            Provenance::MilnorOrlik => "milnor-orlik",
            Provenance::NodeRule => "node-rule",
            Provenance::User => "user",
            Provenance::Formula => "formula",
            Provenance::Assumed => "assumed",
            Provenance::LinearAlgebra => "linear-algebra",
            Provenance::MappingCone => "mapping-cone",
        })
    }
}

/// A weighted-homogeneous germ type: weights of the variables and the
/// common weighted degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedType {
    pub weights: Vec<u64>,
    pub degree: u64,
}

/// What the caller knows about one singular point (or `count` identical
/// ones).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityData {
    pub label: String,
    pub germ: Option<Polynomial>,
    pub point: Option<ProjectivePoint>,
    pub weighted: Option<WeightedType>,
    pub mu: Option<u64>,
    pub rank_t_minus_1: Option<u64>,
    pub branches: Option<u64>,
    pub count: u64,
}

impl SingularityData {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            germ: None,
            point: None,
            weighted: None,
            mu: None,
            rank_t_minus_1: None,
            branches: None,
            count: 1,
        }
    }

    pub fn with_germ(mut self, germ: Polynomial) -> Self {
        self.germ = Some(germ);
        self
    }

    pub fn with_point(mut self, point: ProjectivePoint) -> Self {
        self.point = Some(point);
        self
    }

    pub fn with_weights(mut self, weights: Vec<u64>, degree: u64) -> Self {
        self.weighted = Some(WeightedType { weights, degree });
        self
    }

    pub fn with_invariants(mut self, mu: u64, rank_t_minus_1: u64) -> Self {
        self.mu = Some(mu);
        self.rank_t_minus_1 = Some(rank_t_minus_1);
        self
    }

    pub fn with_mu(mut self, mu: u64) -> Self {
        self.mu = Some(mu);
        self
    }

    pub fn with_rank(mut self, rank_t_minus_1: u64) -> Self {
        self.rank_t_minus_1 = Some(rank_t_minus_1);
        self
    }

    pub fn with_branches(mut self, branches: u64) -> Self {
        self.branches = Some(branches);
        self
    }

    pub fn with_count(mut self, count: u64) -> Self {
        self.count = count;
        self
    }
}

/// A number together with where it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sourced<T> {
    pub value: T,
    pub provenance: Provenance,
}

impl<T> Sourced<T> {
    pub fn new(value: T, provenance: Provenance) -> Self {
        Self { value, provenance }
    }
}

/// A singular point with `μ` and `rk(T−1)` known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedSingularity {
    pub label: String,
    /// Local equation at the origin, when one was available.
    pub germ: Option<Polynomial>,
    pub mu: Sourced<u64>,
    pub rank_t_minus_1: Sourced<u64>,
    /// Only for curves.
    pub branches: Option<Sourced<u64>>,
    pub count: u64,
    pub link: BettiVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceProfile {
    pub n: usize,
    pub d: u64,
    pub polynomial: Option<Polynomial>,
    pub singularities: Vec<SingularityData>,
    pub rho: Option<u64>,
    pub ih_ranks: Option<BettiVector>,
}

impl HypersurfaceProfile {
    pub fn new(n: usize, d: u64) -> Self {
        Self {
            n,
            d,
            polynomial: None,
            singularities: Vec::new(),
            rho: None,
            ih_ranks: None,
        }
    }

    pub fn with_singularity(mut self, s: SingularityData) -> Self {
        self.singularities.push(s);
        self
    }

    pub fn with_polynomial(mut self, f: Polynomial) -> Self {
        self.polynomial = Some(f);
        self
    }

    pub fn with_rho(mut self, rho: u64) -> Self {
        self.rho = Some(rho);
        self
    }

    pub fn with_ih_ranks(mut self, ih: Vec<u64>) -> Self {
        self.ih_ranks = Some(BettiVector::new(ih));
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Replaces the profile's `rho`.
    pub rho: Option<u64>,
    /// Fill a missing `rk(T−1)` with 0 instead of failing.
    pub assume_trivial_monodromy: bool,
    pub reduction_limit: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            rho: None,
            assume_trivial_monodromy: false,
            reduction_limit: DEFAULT_REDUCTION_LIMIT,
        }
    }
}

fn check_agrees(
    label: &str,
    what: &str,
    supplied: Option<u64>,
    computed: u64,
    engine: Provenance,
) -> Result<()> {
    match supplied {
        Some(v) if v != computed => Err(Error::Inconsistent(format!(
            "{label}: supplied {what} = {v} but {engine} gives {computed}"
        ))),
        _ => Ok(()),
    }
}

/// Fills in `μ`, `rk(T−1)` and (for curves) the branch count.
///
/// `μ` comes from a local standard basis when a germ is known, else from
/// the weights, else from the caller. `rk(T−1)` comes from the node rule for
/// Morse points, else from the weights, else from the caller. Supplied
/// values are checked against whatever could be computed.
pub fn resolve_singularity(
    s: &SingularityData,
    n: usize,
    polynomial: Option<&Polynomial>,
    options: &AnalyzeOptions,
    trace: &mut Vec<String>,
) -> Result<ResolvedSingularity> {
    let label = s.label.as_str();
    if s.count == 0 {
        return Err(Error::Range(format!("{label}: count must be at least 1")));
    }
    let germ = match (&s.germ, &s.point) {
        (Some(_), Some(_)) => {
            return Err(Error::Invalid(format!(
                "{label}: give either a germ or a point, not both"
            )))
        }
        (Some(g), None) => Some(g.clone()),
        (None, Some(p)) => {
            let f = polynomial.ok_or_else(|| {
                Error::InsufficientData(format!("{label}: a point needs the profile polynomial"))
            })?;
            if !is_singular_point(f, p)? {
                return Err(Error::Inconsistent(format!(
                    "{label}: point is not a singular point of the polynomial"
                )));
            }
            let g = localize_at(f, p)?;
            trace.push(format!(
                "{label}: local equation {g} after moving the point to the origin"
            ));
            Some(g)
        }
        (None, None) => None,
    };
    if let Some(g) = &germ {
        if g.nvars() != n + 1 {
            return Err(Error::Invalid(format!(
                "{label}: germ has {} variables, expected {}",
                g.nvars(),
                n + 1
            )));
        }
    }
    if let Some(w) = &s.weighted {
        if w.weights.len() != n + 1 {
            return Err(Error::Invalid(format!(
                "{label}: {} weights given, expected {}",
                w.weights.len(),
                n + 1
            )));
        }
        if let Some(g) = &germ {
            if g.weighted_degree(&w.weights)? != Some(w.degree) {
                return Err(Error::Inconsistent(format!(
                    "{label}: germ is not weighted homogeneous of degree {} for weights {:?}",
                    w.degree, w.weights
                )));
            }
        }
    }

    let mu = if let Some(g) = &germ {
        let mu = milnor_number_with_limit(g, options.reduction_limit)?;
        check_agrees(label, "μ", s.mu, mu, Provenance::Groebner)?;
        trace.push(format!(
            "{label}: μ = {mu} from the staircase of a local standard basis of the Jacobian ideal"
        ));
        Sourced::new(mu, Provenance::Groebner)
    } else if let Some(w) = &s.weighted {
        let mu = weighted_milnor_number(&w.weights, w.degree)?;
        check_agrees(label, "μ", s.mu, mu, Provenance::MilnorOrlik)?;
        trace.push(format!("{label}: μ = Π(d/wᵢ − 1) = {mu}"));
        Sourced::new(mu, Provenance::MilnorOrlik)
    } else if let Some(mu) = s.mu {
        trace.push(format!("{label}: μ = {mu} as supplied"));
        Sourced::new(mu, Provenance::User)
    } else {
        return Err(Error::InsufficientData(format!(
            "{label}: no germ, weights or Milnor number"
        )));
    };

    let node = match &germ {
        Some(g) => is_node(g)?,
        None => false,
    };
    let rank = if node {
        let r = node_rule(n + 1)?;
        check_agrees(
            label,
            "rk(T−1)",
            s.rank_t_minus_1,
            r.rank_t_minus_1,
            Provenance::NodeRule,
        )?;
        trace.push(format!(
            "{label}: Morse point in {} variables, eigenvalue (−1)^{} gives rk(T−1) = {}",
            n + 1,
            n + 1,
            r.rank_t_minus_1
        ));
        Sourced::new(r.rank_t_minus_1, Provenance::NodeRule)
    } else if let Some(w) = &s.weighted {
        let r = milnor_orlik_report(&w.weights, w.degree)?;
        if r.mu != mu.value {
            return Err(Error::Inconsistent(format!(
                "{label}: weights give μ = {} but μ = {}",
                r.mu, mu.value
            )));
        }
        check_agrees(
            label,
            "rk(T−1)",
            s.rank_t_minus_1,
            r.rank_t_minus_1,
            Provenance::MilnorOrlik,
        )?;
        trace.push(format!(
            "{label}: rk(T−1) = μ − mult(1) = {} from the monodromy divisor",
            r.rank_t_minus_1
        ));
        Sourced::new(r.rank_t_minus_1, Provenance::MilnorOrlik)
    } else if let Some(r) = s.rank_t_minus_1 {
        trace.push(format!("{label}: rk(T−1) = {r} as supplied"));
        Sourced::new(r, Provenance::User)
    } else if options.assume_trivial_monodromy {
        trace.push(format!("{label}: rk(T−1) = 0 assumed"));
        Sourced::new(0, Provenance::Assumed)
    } else {
        return Err(Error::InsufficientData(format!(
            "{label}: rk(T−1) unknown and cannot be computed"
        )));
    };
    if rank.value > mu.value {
        return Err(Error::Range(format!(
            "{label}: rk(T−1) = {} exceeds μ = {}",
            rank.value, mu.value
        )));
    }

    let branches = if n == 1 {
        let r = 1 + mu.value - rank.value;
        check_agrees(label, "branch count", s.branches, r, Provenance::Formula)?;
        trace.push(format!("{label}: {r} branches = 1 + μ − rk(T−1)"));
        Some(Sourced::new(
            r,
            if s.branches.is_some() {
                Provenance::User
            } else {
                Provenance::Formula
            },
        ))
    } else {
        if let Some(b) = s.branches {
            if b != 1 {
                return Err(Error::Inconsistent(format!(
                    "{label}: {b} branches supplied but links are connected for n ≥ 2"
                )));
            }
        }
        None
    };
    let link = link_betti(mu.value, rank.value, n, branches.map(|b| b.value))?;

    Ok(ResolvedSingularity {
        label: s.label.clone(),
        germ,
        mu,
        rank_t_minus_1: rank,
        branches,
        count: s.count,
        link,
    })
}

/// A profile whose singular points have all been resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedProfile {
    pub n: usize,
    pub d: u64,
    pub singularities: Vec<ResolvedSingularity>,
    pub rho: Sourced<u64>,
    pub ih_ranks: Option<BettiVector>,
    pub warnings: Vec<String>,
    pub trace: Vec<String>,
}

impl ResolvedProfile {
    /// Number of singular points `r`.
    pub fn singular_points(&self) -> u64 {
        self.singularities.iter().map(|s| s.count).sum()
    }

    pub fn mu_total(&self) -> u64 {
        self.singularities
            .iter()
            .map(|s| s.count * s.mu.value)
            .sum()
    }

    pub fn rank_total(&self) -> u64 {
        self.singularities
            .iter()
            .map(|s| s.count * s.rank_t_minus_1.value)
            .sum()
    }

    pub fn links(&self) -> LinkProfile {
        let mut p = LinkProfile::new(self.n).expect("resolved profile has n ≥ 1");
        for s in &self.singularities {
            p.push(s.link.clone(), s.count)
                .expect("link vectors produced by the link formula are valid");
        }
        p
    }

    pub fn smooth_betti(&self) -> Result<BettiVector> {
        smooth_hypersurface_betti(self.n, self.d)
    }
}

/// Validates the profile and resolves every singular point.
pub fn resolve_profile(
    profile: &HypersurfaceProfile,
    options: &AnalyzeOptions,
) -> Result<ResolvedProfile> {
    let n = profile.n;
    if n == 0 {
        return Err(Error::Range("dimension n must be at least 1".into()));
    }
    if profile.d == 0 {
        return Err(Error::Range("degree d must be at least 1".into()));
    }
    if let Some(f) = &profile.polynomial {
        if f.nvars() != n + 2 {
            return Err(Error::Invalid(format!(
                "polynomial has {} variables, expected {}",
                f.nvars(),
                n + 2
            )));
        }
        match f.homogeneous_degree()? {
            Some(d) if u64::from(d) == profile.d => {}
            Some(d) => {
                return Err(Error::Inconsistent(format!(
                    "polynomial has degree {d} but d = {}",
                    profile.d
                )))
            }
            None => return Err(Error::Invalid("polynomial is not homogeneous".into())),
        }
    }
    if let Some(ih) = &profile.ih_ranks {
        if ih.len() != 2 * n + 1 {
            return Err(Error::Inconsistent(format!(
                "ih_ranks {ih} should have length {}",
                2 * n + 1
            )));
        }
    }
    let mut warnings = Vec::new();
    if n == 2 {
        warnings.push(
            "n = 2: the intersection space is not constructed in general for surfaces; the Betti formulas are evaluated anyway"
                .to_string(),
        );
    }
    let mut trace = Vec::new();
    let singularities = profile
        .singularities
        .iter()
        .map(|s| resolve_singularity(s, n, profile.polynomial.as_ref(), options, &mut trace))
        .collect::<Result<Vec<_>>>()?;
    let rho = match (options.rho, profile.rho) {
        (Some(r), _) | (None, Some(r)) => Sourced::new(r, Provenance::User),
        (None, None) => Sourced::new(0, Provenance::Assumed),
    };
    Ok(ResolvedProfile {
        n,
        d: profile.d,
        singularities,
        rho,
        ih_ranks: profile.ih_ranks.clone(),
        warnings,
        trace,
    })
}

/// The two closed expressions for `b_n(IV)`: `b_n(V_s) − Σ rk(T−1)` and
/// `b_n(V_s) + b_n(L) − μ`.
pub fn middle_expressions(p: &ResolvedProfile) -> Result<(i64, i64)> {
    let smooth = p.smooth_betti()?;
    let bn = smooth.get(p.n) as i64;
    let links = p.links().total();
    let (first, second) = if p.n == 1 {
        let r = p.singular_points() as i64;
        let by_rank = bn - p.rank_total() as i64 + 2 * (r - 1);
        let by_link = bn + links.get(1) as i64 - p.mu_total() as i64 + r - 2;
        (by_rank, by_link)
    } else {
        (
            bn - p.rank_total() as i64,
            bn + links.get(p.n) as i64 - p.mu_total() as i64,
        )
    };
    if p.singular_points() == 0 {
        return Ok((bn, bn));
    }
    Ok((first, second))
}

/// Betti numbers of the intersection space `IV`.
pub fn hi_betti(p: &ResolvedProfile) -> Result<BettiVector> {
    let n = p.n;
    let smooth = p.smooth_betti()?;
    let r = p.singular_points();
    if r == 0 {
        return Ok(smooth);
    }
    let (middle, check) = middle_expressions(p)?;
    if middle != check {
        return Err(Error::Inconsistent(format!(
            "middle Betti number evaluates to {middle} and {check}"
        )));
    }
    if middle < 0 {
        return Err(Error::Range(format!(
            "Σ rk(T−1) = {} exceeds b_{n}(V_s) = {}",
            p.rank_total(),
            smooth.get(n)
        )));
    }
    let mut b = smooth.clone();
    b.set(n, middle as u64);
    if n >= 2 {
        b.set(1, smooth.get(1) + r - 1);
        b.set(2 * n - 1, smooth.get(2 * n - 1) + r - 1);
    }
    b.set(2 * n, 0);
    b.set(0, 1);
    Ok(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityVerdict {
    /// Degree `i` (for `0 ≤ i < 2n`) is stable iff `b_i(IV) = b_i(V_s)`.
    pub degree_stable: Vec<bool>,
    pub middle_stable: bool,
    /// Every local monodromy operator is the identity.
    pub trivial_monodromy: bool,
    /// The rank criterion: `Σ rk(T−1) = 0` for `n ≥ 2`, `rk(T−1) = 2(r−1)`
    /// for curves.
    pub stable: bool,
}

pub fn stability_verdict(p: &ResolvedProfile) -> Result<StabilityVerdict> {
    let smooth = p.smooth_betti()?;
    let hi = hi_betti(p)?;
    let degree_stable: Vec<bool> = (0..2 * p.n).map(|i| hi.get(i) == smooth.get(i)).collect();
    let rank = p.rank_total();
    let stable = if p.n == 1 {
        rank == 2 * p.singular_points().saturating_sub(1)
    } else {
        rank == 0
    };
    Ok(StabilityVerdict {
        middle_stable: degree_stable[p.n],
        degree_stable,
        trivial_monodromy: rank == 0,
        stable,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundComponent {
    pub name: String,
    pub value: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiddleBounds {
    pub lower: u64,
    pub upper: u64,
    pub value: u64,
    pub components: Vec<BoundComponent>,
    /// Lower-bound quantities that could not be evaluated, with the reason.
    pub skipped: Vec<String>,
}

impl MiddleBounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper
    }
}

/// `max{IH_n(V), H_n(M), H_n(M, ∂M)} ≤ HI_n(V) ≤ H_n(V_s)`.
///
/// `H_n(M, ∂M) ≅ H_n(V)` and, by Lefschetz duality, `H_n(M)` has the same
/// rank; both need `ρ`, so they are only used when `ρ` was supplied.
pub fn middle_bounds(p: &ResolvedProfile) -> Result<MiddleBounds> {
    let n = p.n;
    let smooth = p.smooth_betti()?;
    let hi = hi_betti(p)?;
    let mut components = Vec::new();
    let mut skipped = Vec::new();
    match &p.ih_ranks {
        Some(ih) => components.push(BoundComponent {
            name: format!("IH_{n}(V)"),
            value: ih.get(n),
        }),
        None => skipped.push(format!(
            "IH_{n}(V): no intersection homology ranks supplied"
        )),
    }
    if p.singular_points() == 0 {
        for name in [format!("H_{n}(M)"), format!("H_{n}(M,∂M)")] {
            components.push(BoundComponent {
                name,
                value: smooth.get(n),
            });
        }
    } else if n == 1 {
        for name in [format!("H_{n}(M)"), format!("H_{n}(M,∂M)")] {
            skipped.push(format!("{name}: not evaluated for curves"));
        }
    } else if p.rho.provenance == Provenance::Assumed {
        for name in [format!("H_{n}(M)"), format!("H_{n}(M,∂M)")] {
            skipped.push(format!("{name}: needs ρ"));
        }
    } else {
        let v = singular_fiber_betti(&smooth, p.mu_total(), p.rank_total(), p.rho.value, n)?;
        for name in [format!("H_{n}(M)"), format!("H_{n}(M,∂M)")] {
            components.push(BoundComponent {
                name,
                value: v.get(n),
            });
        }
    }
    let lower = components.iter().map(|c| c.value).max().unwrap_or(0);
    Ok(MiddleBounds {
        lower,
        upper: smooth.get(n),
        value: hi.get(n),
        components,
        skipped,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerIdentity {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// `χ(reduced HI) − χ(IH) = −2 χ_{<n}(L)`.
pub fn euler_identity(p: &ResolvedProfile) -> Result<EulerIdentity> {
    let ih = p
        .ih_ranks
        .as_ref()
        .ok_or_else(|| Error::InsufficientData("euler identity needs ih_ranks".into()))?;
    let hi = hi_betti(p)?;
    let lhs = hi.reduced_euler_characteristic() - ih.euler_characteristic();
    let rhs = -2 * truncated_link_euler(&p.links());
    Ok(EulerIdentity {
        lhs,
        rhs,
        holds: lhs == rhs,
    })
}

/// Exactness of the Wang sequence at every singular point and, for
/// `n ≥ 2`, of the specialization sequence for the whole hypersurface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceChecks {
    pub wang: bool,
    pub specialization: Option<bool>,
}

pub fn sequence_checks(p: &ResolvedProfile) -> Result<SequenceChecks> {
    let wang = p
        .singularities
        .iter()
        .all(|s| wang_is_exact(&s.link, s.mu.value, s.rank_t_minus_1.value, p.n));
    let specialization = if p.n >= 2 {
        let smooth = p.smooth_betti()?;
        let v = singular_fiber_betti(&smooth, p.mu_total(), p.rank_total(), p.rho.value, p.n)?;
        Some(specialization_is_exact(
            &smooth,
            &v,
            p.mu_total(),
            p.rho.value + p.rank_total(),
            p.n,
        ))
    } else {
        None
    };
    Ok(SequenceChecks {
        wang,
        specialization,
    })
}

/// Everything computed for one profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub profile: ResolvedProfile,
    pub smooth_betti: BettiVector,
    pub hi_betti: BettiVector,
    /// Only for `n ≥ 2`.
    pub singular_betti: Option<BettiVector>,
    pub link_betti: BettiVector,
    pub mu_total: u64,
    pub rank_total: u64,
    pub verdict: StabilityVerdict,
    pub bounds: MiddleBounds,
    pub euler: Option<EulerIdentity>,
    pub sequences: SequenceChecks,
    /// `b_n(V) = b_n(IV) − ρ`, when `b(V)` is known.
    pub rho_consistent: Option<bool>,
}

pub fn analyze(profile: &HypersurfaceProfile, options: &AnalyzeOptions) -> Result<StabilityReport> {
    let mut p = resolve_profile(profile, options)?;
    let n = p.n;
    let smooth_betti = p.smooth_betti()?;
    let hi = hi_betti(&p)?;
    let singular_betti = if n >= 2 {
        Some(singular_fiber_betti(
            &smooth_betti,
            p.mu_total(),
            p.rank_total(),
            p.rho.value,
            n,
        )?)
    } else {
        None
    };
    let rho_consistent = singular_betti
        .as_ref()
        .map(|v| v.get(n) + p.rho.value == hi.get(n));
    let verdict = stability_verdict(&p)?;
    let bounds = middle_bounds(&p)?;
    let euler = match p.ih_ranks {
        Some(_) => Some(euler_identity(&p)?),
        None => None,
    };
    let sequences = sequence_checks(&p)?;

    let r = p.singular_points();
    p.trace.push(format!(
        "b(V_s) = {smooth_betti} for a smooth degree-{} hypersurface of dimension {n}",
        p.d
    ));
    if r > 0 {
        if n >= 2 {
            p.trace.push(format!(
                "b_1(IV) = b_{}(IV) = b_1(V_s) + b_0(L) − 1 = {}",
                2 * n - 1,
                hi.get(1)
            ));
            p.trace.push(format!(
                "b_{n}(IV) = b_{n}(V_s) + b_{n}(L) − μ = {}",
                hi.get(n)
            ));
            p.trace.push(format!("b_{}(IV) = 0", 2 * n));
        } else {
            p.trace.push(format!(
                "b_1(IV) = b_1(V_s) + b_1(L) − μ + r − 2 = {}",
                hi.get(1)
            ));
        }
    }
    if let Some(v) = &singular_betti {
        p.trace.push(format!("b(V) = {v} with ρ = {}", p.rho.value));
    }

    Ok(StabilityReport {
        smooth_betti,
        hi_betti: hi,
        singular_betti,
        link_betti: p.links().total(),
        mu_total: p.mu_total(),
        rank_total: p.rank_total(),
        verdict,
        bounds,
        euler,
        sequences,
        rho_consistent,
        profile: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse, parse_with_vars};
    use crate::rational::int;

    fn bv(v: &[u64]) -> BettiVector {
        BettiVector::new(v.to_vec())
    }

    fn resolve(s: SingularityData, n: usize) -> Result<ResolvedSingularity> {
        resolve_singularity(&s, n, None, &AnalyzeOptions::default(), &mut Vec::new())
    }

    fn kummer() -> HypersurfaceProfile {
        HypersurfaceProfile::new(2, 4)
            .with_singularity(
                SingularityData::new("A1")
                    .with_germ(parse("x^2+y^2+z^2").unwrap())
                    .with_count(16),
            )
            .with_rho(0)
            .with_ih_ranks(vec![1, 0, 6, 0, 1])
    }

    fn nodes(n: usize, d: u64, count: u64) -> HypersurfaceProfile {
        let rank = if (n + 1).is_multiple_of(2) { 0 } else { 1 };
        HypersurfaceProfile::new(n, d).with_singularity(
            SingularityData::new("node")
                .with_invariants(1, rank)
                .with_count(count),
        )
    }

    #[test]
    fn resolves_surface_node() {
        let s = resolve(
            SingularityData::new("A1").with_germ(parse("x^2+y^2+z^2").unwrap()),
            2,
        )
        .unwrap();
        assert_eq!(s.mu, Sourced::new(1, Provenance::Groebner));
        assert_eq!(s.rank_t_minus_1, Sourced::new(1, Provenance::NodeRule));
        assert_eq!(s.branches, None);
    }

    #[test]
    fn resolves_curve_node() {
        let g = parse_with_vars("e^2-x^2*(x-1)", &["x".into(), "e".into()]).unwrap();
        let s = resolve(SingularityData::new("node").with_germ(g), 1).unwrap();
        assert_eq!(s.mu.value, 1);
        assert_eq!(s.rank_t_minus_1.value, 0);
        assert_eq!(s.branches, Some(Sourced::new(2, Provenance::Formula)));
    }

    #[test]
    fn resolves_from_weights() {
        let s = resolve(SingularityData::new("E8").with_weights(vec![5, 3], 15), 1).unwrap();
        assert_eq!(s.mu, Sourced::new(8, Provenance::MilnorOrlik));
        assert_eq!(s.rank_t_minus_1, Sourced::new(8, Provenance::MilnorOrlik));
        assert_eq!(s.branches.unwrap().value, 1);
    }

    #[test]
    fn germ_and_weights_together() {
        let s = SingularityData::new("E8")
            .with_germ(parse("x^3+y^5").unwrap())
            .with_weights(vec![5, 3], 15);
        let s = resolve(s, 1).unwrap();
        assert_eq!(s.mu, Sourced::new(8, Provenance::Groebner));
        assert_eq!(s.rank_t_minus_1, Sourced::new(8, Provenance::MilnorOrlik));

        let wrong = SingularityData::new("E8")
            .with_germ(parse("x^3+y^5").unwrap())
            .with_weights(vec![3, 5], 15);
        assert!(matches!(resolve(wrong, 1), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn rejects_contradictions() {
        let s = SingularityData::new("A1")
            .with_germ(parse("x^2+y^2+z^2").unwrap())
            .with_mu(2);
        assert!(matches!(resolve(s, 2), Err(Error::Inconsistent(_))));
        let s = SingularityData::new("A1")
            .with_germ(parse("x^2+y^2+z^2").unwrap())
            .with_rank(0);
        assert!(matches!(resolve(s, 2), Err(Error::Inconsistent(_))));
        let s = SingularityData::new("node")
            .with_invariants(1, 0)
            .with_branches(1);
        assert!(matches!(resolve(s, 1), Err(Error::Inconsistent(_))));
        let s = SingularityData::new("bad").with_invariants(1, 2);
        assert!(matches!(resolve(s, 2), Err(Error::Range(_))));
    }

    #[test]
    fn missing_rank_is_an_error_unless_assumed() {
        let s = SingularityData::new("x").with_mu(3);
        assert!(matches!(
            resolve(s.clone(), 2),
            Err(Error::InsufficientData(_))
        ));
        let opts = AnalyzeOptions {
            assume_trivial_monodromy: true,
            ..AnalyzeOptions::default()
        };
        let r = resolve_singularity(&s, 2, None, &opts, &mut Vec::new()).unwrap();
        assert_eq!(r.rank_t_minus_1, Sourced::new(0, Provenance::Assumed));
        assert!(matches!(
            resolve(SingularityData::new("y"), 2),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn computation_errors_propagate() {
        let s = SingularityData::new("line").with_germ(parse("x^2*y^2").unwrap());
        assert_eq!(resolve(s, 1).unwrap_err(), Error::NonIsolated);
        let s = SingularityData::new("smooth").with_germ(parse("x+y^2").unwrap());
        assert_eq!(resolve(s, 1).unwrap_err(), Error::SmoothGerm);
    }

    #[test]
    fn point_needs_polynomial_and_singular_point() {
        let pt = ProjectivePoint::new(vec![int(0), int(0), int(1)]).unwrap();
        let s = SingularityData::new("p").with_point(pt.clone());
        assert!(matches!(
            resolve(s.clone(), 1),
            Err(Error::InsufficientData(_))
        ));
        let cubic = parse("v^2*w - u^2*(u-w)").unwrap();
        let r = resolve_singularity(
            &s,
            1,
            Some(&cubic),
            &AnalyzeOptions::default(),
            &mut Vec::new(),
        )
        .unwrap();
        assert_eq!((r.mu.value, r.rank_t_minus_1.value), (1, 0));
        let off = ProjectivePoint::new(vec![int(1), int(0), int(1)]).unwrap();
        let s = SingularityData::new("q").with_point(off);
        assert!(resolve_singularity(
            &s,
            1,
            Some(&cubic),
            &AnalyzeOptions::default(),
            &mut Vec::new()
        )
        .is_err());
    }

    #[test]
    fn kummer_numbers() {
        let rep = analyze(&kummer(), &AnalyzeOptions::default()).unwrap();
        assert_eq!(rep.hi_betti, bv(&[1, 15, 6, 15, 0]));
        assert_eq!(rep.smooth_betti.get(2), 22);
        assert_eq!(rep.singular_betti, Some(bv(&[1, 0, 6, 0, 1])));
        assert_eq!(
            rep.euler,
            Some(EulerIdentity {
                lhs: -32,
                rhs: -32,
                holds: true
            })
        );
        assert!(!rep.verdict.middle_stable);
        assert!(!rep.verdict.stable);
        assert_eq!(
            (rep.bounds.lower, rep.bounds.upper, rep.bounds.value),
            (6, 22, 6)
        );
        assert_eq!(rep.profile.warnings.len(), 1);
        assert_eq!(rep.rho_consistent, Some(true));
    }

    #[test]
    fn quintic_numbers() {
        let p = nodes(3, 5, 125).with_rho(101);
        let rep = analyze(&p, &AnalyzeOptions::default()).unwrap();
        assert_eq!(rep.hi_betti, bv(&[1, 124, 1, 204, 1, 124, 0]));
        assert_eq!(rep.singular_betti, Some(bv(&[1, 0, 1, 103, 25, 0, 1])));
        let flags = &rep.verdict.degree_stable;
        assert_eq!(flags, &[true, false, true, true, true, false]);
        assert!(rep.verdict.middle_stable && rep.verdict.stable);
        assert_eq!(rep.bounds.upper, 204);
        assert_eq!(rep.bounds.value, 204);
        assert!(rep.bounds.holds());
    }

    #[test]
    fn plane_quintic_sixteen_nodes() {
        let p = nodes(3, 5, 16)
            .with_rho(15)
            .with_ih_ranks(vec![1, 0, 2, 174, 2, 0, 1]);
        let rep = analyze(&p, &AnalyzeOptions::default()).unwrap();
        assert_eq!(rep.hi_betti, bv(&[1, 15, 1, 204, 1, 15, 0]));
        assert_eq!(
            rep.euler,
            Some(EulerIdentity {
                lhs: -64,
                rhs: -64,
                holds: true
            })
        );
    }

    #[test]
    fn curves() {
        let cubic = nodes(1, 3, 1);
        let rep = analyze(&cubic, &AnalyzeOptions::default()).unwrap();
        assert_eq!(rep.hi_betti, bv(&[1, 2, 0]));
        assert!(rep.verdict.stable && rep.verdict.degree_stable[1]);

        let conic = nodes(1, 2, 1).with_ih_ranks(vec![2, 0, 2]);
        let rep = analyze(&conic, &AnalyzeOptions::default()).unwrap();
        assert_eq!(rep.hi_betti, bv(&[1, 0, 0]));
        assert_eq!(rep.hi_betti.reduced(), bv(&[0, 0, 0]));
        assert_eq!(
            rep.euler,
            Some(EulerIdentity {
                lhs: -4,
                rhs: -4,
                holds: true
            })
        );
    }

    #[test]
    fn smooth_profile_bounds_collapse() {
        let rep = analyze(&HypersurfaceProfile::new(2, 3), &AnalyzeOptions::default()).unwrap();
        assert_eq!(rep.hi_betti, rep.smooth_betti);
        assert_eq!(rep.bounds.lower, rep.bounds.upper);
        assert!(rep.verdict.stable);
    }

    #[test]
    fn euler_needs_ih() {
        let p = resolve_profile(&nodes(3, 5, 2), &AnalyzeOptions::default()).unwrap();
        assert!(matches!(
            euler_identity(&p),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn rho_option_overrides_profile() {
        let opts = AnalyzeOptions {
            rho: Some(3),
            ..AnalyzeOptions::default()
        };
        let p = resolve_profile(&nodes(3, 5, 16).with_rho(15), &opts).unwrap();
        assert_eq!(p.rho, Sourced::new(3, Provenance::User));
        let p = resolve_profile(&nodes(3, 5, 16), &AnalyzeOptions::default()).unwrap();
        assert_eq!(p.rho, Sourced::new(0, Provenance::Assumed));
    }

    #[test]
    fn profile_validation() {
        let f = parse("x^3+y^3+z^3").unwrap();
        let p = HypersurfaceProfile::new(1, 4).with_polynomial(f.clone());
        assert!(matches!(
            resolve_profile(&p, &AnalyzeOptions::default()),
            Err(Error::Inconsistent(_))
        ));
        let p = HypersurfaceProfile::new(2, 3).with_polynomial(f);
        assert!(matches!(
            resolve_profile(&p, &AnalyzeOptions::default()),
            Err(Error::Invalid(_))
        ));
        let p = HypersurfaceProfile::new(1, 3).with_ih_ranks(vec![1, 0]);
        assert!(resolve_profile(&p, &AnalyzeOptions::default()).is_err());
        assert!(
            resolve_profile(&HypersurfaceProfile::new(0, 3), &AnalyzeOptions::default()).is_err()
        );
    }

    #[test]
    fn too_much_rank_is_a_range_error() {
        let p = HypersurfaceProfile::new(2, 2).with_singularity(
            SingularityData::new("A1")
                .with_invariants(1, 1)
                .with_count(3),
        );
        assert!(matches!(
            analyze(&p, &AnalyzeOptions::default()),
            Err(Error::Range(_))
        ));
    }
}
