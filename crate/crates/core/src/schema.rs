//! JSON documents: hypersurface profiles, chain pairs and the reports
//! produced from them.
//!
//! Rationals travel as `"p/q"` strings. Every number in a report carries the
//! engine that produced it.

use serde::{Deserialize, Serialize};

use crate::chain::{
    augmented, duality_rank_check, hi_from_pair, hi_via_cone, homology_ranks,
    relative_homology_ranks, FiniteChainComplex, PairComplex,
};
use crate::error::{Error, Result};
use crate::matrix::QMatrix;
use crate::poly::{parse, parse_with_vars, ProjectivePoint};
use crate::rational::{format_rational, int, parse_rational, Rational};
use crate::stability::{
    middle_expressions, HypersurfaceProfile, Provenance, SingularityData, Sourced, StabilityReport,
    StabilityVerdict,
};
use crate::topology::BettiVector;

/// Maps a `serde_json` failure onto the crate error: malformed JSON keeps
/// its position, schema violations become `Invalid`.
pub fn json_error(e: serde_json::Error) -> Error {
    use serde_json::error::Category;
    match e.classify() {
        Category::Syntax | Category::Eof => Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
        _ => Error::Invalid(e.to_string()),
    }
}

/// A rational literal: `"p/q"` or a plain JSON integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalLiteral {
    Text(String),
    Integer(i64),
}

impl RationalLiteral {
    pub fn value(&self) -> Result<Rational> {
        match self {
            RationalLiteral::Text(s) => parse_rational(s),
            RationalLiteral::Integer(i) => Ok(int(*i)),
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        RationalLiteral::Text(format_rational(q))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularityDocument {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub germ: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<RationalLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weighted_degree: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<u64>,
    #[serde(
        rename = "rank_T_minus_1",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub rank_t_minus_1: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<u64>,
    #[serde(default = "one")]
    pub count: u64,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDocument {
    pub n: u64,
    pub d: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
    /// Variable order of `polynomial`; inferred when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ih_ranks: Option<Vec<u64>>,
    #[serde(default)]
    pub singularities: Vec<SingularityDocument>,
}

impl ProfileDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_profile(&self) -> Result<HypersurfaceProfile> {
        let polynomial = match (&self.polynomial, &self.variables) {
            (Some(f), Some(vars)) => Some(parse_with_vars(f, vars)?),
            (Some(f), None) => Some(parse(f)?),
            (None, Some(_)) => {
                return Err(Error::Invalid(
                    "`variables` given without `polynomial`".into(),
                ))
            }
            (None, None) => None,
        };
        let singularities = self
            .singularities
            .iter()
            .map(SingularityDocument::to_data)
            .collect::<Result<Vec<_>>>()?;
        Ok(HypersurfaceProfile {
            n: self.n as usize,
            d: self.d,
            polynomial,
            singularities,
            rho: self.rho,
            ih_ranks: self.ih_ranks.clone().map(BettiVector::new),
        })
    }
}

impl SingularityDocument {
    fn to_data(&self) -> Result<SingularityData> {
        let mut s = SingularityData::new(self.label.clone());
        if let Some(g) = &self.germ {
            s.germ = Some(parse(g)?);
        }
        if let Some(p) = &self.point {
            let coords = p
                .iter()
                .map(RationalLiteral::value)
                .collect::<Result<Vec<_>>>()?;
            s.point = Some(ProjectivePoint::new(coords)?);
        }
        match (&self.weights, self.weighted_degree) {
            (Some(w), Some(d)) => s = s.with_weights(w.clone(), d),
            (None, None) => {}
            _ => {
                return Err(Error::Invalid(format!(
                    "{}: `weights` and `weighted_degree` must be given together",
                    self.label
                )))
            }
        }
        s.mu = self.mu;
        s.rank_t_minus_1 = self.rank_t_minus_1;
        s.branches = self.branches;
        s.count = self.count;
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularityReport {
    pub label: String,
    pub count: Sourced<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub germ: Option<String>,
    pub mu: Sourced<u64>,
    #[serde(rename = "rank_T_minus_1")]
    pub rank_t_minus_1: Sourced<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branches: Option<Sourced<u64>>,
    pub link_betti: Sourced<BettiVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TotalsReport {
    pub singular_points: Sourced<u64>,
    pub mu: Sourced<u64>,
    #[serde(rename = "rank_T_minus_1")]
    pub rank_t_minus_1: Sourced<u64>,
    /// `b_0(L)` of the total link.
    pub link_components: Sourced<u64>,
    /// `b_n(L)` of the total link.
    pub link_middle: Sourced<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BettiReport {
    pub smooth: Sourced<BettiVector>,
    pub intersection_space: Sourced<BettiVector>,
    pub intersection_space_reduced: Sourced<BettiVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular_fiber: Option<Sourced<BettiVector>>,
    pub link: Sourced<BettiVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersection_homology: Option<Sourced<BettiVector>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundComponentReport {
    pub name: String,
    pub value: Sourced<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsReport {
    pub lower: Sourced<u64>,
    pub upper: Sourced<u64>,
    pub value: Sourced<u64>,
    pub components: Vec<BoundComponentReport>,
    pub skipped: Vec<String>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerReport {
    pub lhs: Sourced<i64>,
    pub rhs: Sourced<i64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksReport {
    pub middle_expressions_agree: bool,
    pub wang_exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specialization_exact: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_consistent: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub n: Sourced<u64>,
    pub d: Sourced<u64>,
    pub singularities: Vec<SingularityReport>,
    pub totals: TotalsReport,
    pub rho: Sourced<u64>,
    pub betti: BettiReport,
    pub stability: StabilityVerdict,
    pub middle_bounds: BoundsReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_identity: Option<EulerReport>,
    pub checks: ChecksReport,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl ReportDocument {
    pub fn from_report(r: &StabilityReport, verbose: bool) -> Result<Self> {
        let p = &r.profile;
        let f = |v: u64| Sourced::new(v, Provenance::Formula);
        let fv = |v: &BettiVector| Sourced::new(v.clone(), Provenance::Formula);
        let singularities = p
            .singularities
            .iter()
            .map(|s| SingularityReport {
                label: s.label.clone(),
                count: Sourced::new(s.count, Provenance::User),
                germ: s.germ.as_ref().map(|g| g.to_string()),
                mu: s.mu,
                rank_t_minus_1: s.rank_t_minus_1,
                branches: s.branches,
                link_betti: fv(&s.link),
            })
            .collect();
        let (by_rank, by_link) = middle_expressions(p)?;
        let bounds = &r.bounds;
        let ih_component = format!("IH_{}(V)", p.n);
        Ok(Self {
            n: Sourced::new(p.n as u64, Provenance::User),
            d: Sourced::new(p.d, Provenance::User),
            singularities,
            totals: TotalsReport {
                singular_points: f(p.singular_points()),
                mu: f(r.mu_total),
                rank_t_minus_1: f(r.rank_total),
                link_components: f(r.link_betti.get(0)),
                link_middle: f(r.link_betti.get(p.n)),
            },
            rho: p.rho,
            betti: BettiReport {
                smooth: fv(&r.smooth_betti),
                intersection_space: fv(&r.hi_betti),
                intersection_space_reduced: fv(&r.hi_betti.reduced()),
                singular_fiber: r.singular_betti.as_ref().map(fv),
                link: fv(&r.link_betti),
                intersection_homology: p
                    .ih_ranks
                    .as_ref()
                    .map(|ih| Sourced::new(ih.clone(), Provenance::User)),
            },
            stability: r.verdict.clone(),
            middle_bounds: BoundsReport {
                lower: f(bounds.lower),
                upper: f(bounds.upper),
                value: f(bounds.value),
                components: bounds
                    .components
                    .iter()
                    .map(|c| BoundComponentReport {
                        name: c.name.clone(),
                        value: Sourced::new(
                            c.value,
                            if c.name == ih_component {
                                Provenance::User
                            } else {
                                Provenance::Formula
                            },
                        ),
                    })
                    .collect(),
                skipped: bounds.skipped.clone(),
                holds: bounds.holds(),
            },
            euler_identity: r.euler.map(|e| EulerReport {
                lhs: Sourced::new(e.lhs, Provenance::Formula),
                rhs: Sourced::new(e.rhs, Provenance::Formula),
                holds: e.holds,
            }),
            checks: ChecksReport {
                middle_expressions_agree: by_rank == by_link,
                wang_exact: r.sequences.wang,
                specialization_exact: r.sequences.specialization,
                rho_consistent: r.rho_consistent,
            },
            warnings: p.warnings.clone(),
            trace: if verbose { p.trace.clone() } else { Vec::new() },
        })
    }
}

type MatrixDocument = Vec<Vec<RationalLiteral>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub boundaries: Vec<MatrixDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    pub dim: usize,
    pub cutoff: usize,
    pub link: ComplexDocument,
    pub exterior: ComplexDocument,
    #[serde(default)]
    pub inclusion: Vec<MatrixDocument>,
}

fn matrix_from_document(
    m: &MatrixDocument,
    rows: usize,
    cols: usize,
    what: &str,
) -> Result<QMatrix> {
    if m.len() != rows {
        return Err(Error::MalformedComplex(format!(
            "{what} has {} rows, expected {rows}",
            m.len()
        )));
    }
    let mut data = Vec::with_capacity(rows);
    for (i, row) in m.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::MalformedComplex(format!(
                "{what} row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        data.push(
            row.iter()
                .map(RationalLiteral::value)
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(QMatrix::from_rows(cols, data))
}

fn matrix_to_document(m: &QMatrix) -> MatrixDocument {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(RationalLiteral::from_rational)
                .collect()
        })
        .collect()
}

impl ComplexDocument {
    pub fn to_complex(&self, name: &str) -> Result<FiniteChainComplex> {
        let dims = &self.dims;
        if self.boundaries.len() + 1 > dims.len().max(1) {
            return Err(Error::MalformedComplex(format!(
                "{name}: {} boundary maps for {} degrees",
                self.boundaries.len(),
                dims.len()
            )));
        }
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(i, m)| {
                matrix_from_document(m, dims[i], dims[i + 1], &format!("{name} ∂_{}", i + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteChainComplex::new(dims.clone(), boundaries)
            .map_err(|e| Error::MalformedComplex(format!("{name}: {}", strip_kind(&e))))
    }

    pub fn from_complex(c: &FiniteChainComplex) -> Self {
        Self {
            dims: c.dims().to_vec(),
            boundaries: c.boundaries().iter().map(matrix_to_document).collect(),
        }
    }
}

fn strip_kind(e: &Error) -> String {
    match e {
        Error::MalformedComplex(m) => m.clone(),
        other => other.to_string(),
    }
}

impl ChainDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_pair(&self) -> Result<PairComplex> {
        let link = self.link.to_complex("link")?;
        let exterior = self.exterior.to_complex("exterior")?;
        if self.inclusion.len() > link.len() {
            return Err(Error::MalformedComplex(format!(
                "{} inclusion components for a link with {} degrees",
                self.inclusion.len(),
                link.len()
            )));
        }
        let inclusion = self
            .inclusion
            .iter()
            .enumerate()
            .map(|(k, m)| {
                matrix_from_document(m, exterior.dim(k), link.dim(k), &format!("inclusion f_{k}"))
            })
            .collect::<Result<Vec<_>>>()?;
        PairComplex::new(link, exterior, inclusion, self.dim, self.cutoff)
    }

    pub fn from_pair(p: &PairComplex) -> Self {
        Self {
            dim: p.manifold_dim,
            cutoff: p.cutoff,
            link: ComplexDocument::from_complex(&p.link),
            exterior: ComplexDocument::from_complex(&p.exterior),
            inclusion: p
                .inclusion
                .matrices()
                .iter()
                .map(matrix_to_document)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HiRoute {
    pub reduced: Sourced<BettiVector>,
    pub augmented: Sourced<BettiVector>,
}

impl HiRoute {
    fn new(reduced: BettiVector, provenance: Provenance) -> Self {
        Self {
            augmented: Sourced::new(augmented(&reduced), provenance),
            reduced: Sourced::new(reduced, provenance),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomologyReport {
    pub link: Sourced<BettiVector>,
    pub exterior: Sourced<BettiVector>,
    pub relative: Sourced<BettiVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainReportDocument {
    pub dim: Sourced<u64>,
    pub cutoff: Sourced<u64>,
    pub homology: HomologyReport,
    pub hi_from_pair: HiRoute,
    pub hi_via_cone: HiRoute,
    pub routes_agree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality: Option<bool>,
}

impl ChainReportDocument {
    pub fn compute(p: &PairComplex, check_duality: bool) -> Self {
        let la = |v: BettiVector| Sourced::new(v, Provenance::LinearAlgebra);
        let closed = hi_from_pair(p);
        let cone = hi_via_cone(p);
        Self {
            dim: Sourced::new(p.manifold_dim as u64, Provenance::User),
            cutoff: Sourced::new(p.cutoff as u64, Provenance::User),
            homology: HomologyReport {
                link: la(homology_ranks(&p.link)),
                exterior: la(homology_ranks(&p.exterior)),
                relative: la(relative_homology_ranks(p)),
            },
            routes_agree: closed == cone,
            hi_from_pair: HiRoute::new(closed, Provenance::Formula),
            hi_via_cone: HiRoute::new(cone, Provenance::MappingCone),
            duality: check_duality.then(|| duality_rank_check(p)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::fixtures;
    use crate::stability::{analyze, AnalyzeOptions};

    const KUMMER: &str = r#"{
        "n": 2, "d": 4, "rho": 0, "ih_ranks": [1, 0, 6, 0, 1],
        "singularities": [{"label": "A1", "germ": "x^2+y^2+z^2", "count": 16}]
    }"#;

    #[test]
    fn profile_round_trip() {
        let doc = ProfileDocument::from_json(KUMMER).unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(ProfileDocument::from_json(&text).unwrap(), doc);
        let p = doc.to_profile().unwrap();
        assert_eq!(p.singularities[0].count, 16);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = r#"{"n": 2, "d": 4, "singularities": [], "extra": 1}"#;
        assert!(matches!(
            ProfileDocument::from_json(bad),
            Err(Error::Invalid(_))
        ));
        let bad = r#"{"n": 2, "d": 4, "singularities": [{"label": "a", "milnor": 1}]}"#;
        assert!(matches!(
            ProfileDocument::from_json(bad),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn malformed_json_has_position() {
        let err = ProfileDocument::from_json("{\n  \"n\": 2,\n  oops").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
    }

    #[test]
    fn weights_need_degree() {
        let doc = r#"{"n": 1, "d": 5, "singularities": [{"label": "E8", "weights": [5, 3]}]}"#;
        let doc = ProfileDocument::from_json(doc).unwrap();
        assert!(matches!(doc.to_profile(), Err(Error::Invalid(_))));
    }

    #[test]
    fn points_and_variables() {
        let doc = r#"{
            "n": 1, "d": 2, "polynomial": "y*z", "variables": ["x", "y", "z"],
            "singularities": [{"label": "node", "point": ["1", "0", 0]}]
        }"#;
        let p = ProfileDocument::from_json(doc)
            .unwrap()
            .to_profile()
            .unwrap();
        assert_eq!(p.polynomial.as_ref().unwrap().nvars(), 3);
        let rep = analyze(&p, &AnalyzeOptions::default()).unwrap();
        assert_eq!(rep.hi_betti, BettiVector::new(vec![1, 0, 0]));
    }

    #[test]
    fn report_round_trip() {
        let p = ProfileDocument::from_json(KUMMER)
            .unwrap()
            .to_profile()
            .unwrap();
        let rep = analyze(&p, &AnalyzeOptions::default()).unwrap();
        let doc = ReportDocument::from_report(&rep, true).unwrap();
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(
            doc.betti.intersection_space.value,
            BettiVector::new(vec![1, 15, 6, 15, 0])
        );
        assert_eq!(doc.singularities[0].mu.provenance, Provenance::Groebner);
        assert!(text.contains("\"node-rule\""));
        assert!(!doc.trace.is_empty());
    }

    #[test]
    fn chain_round_trip() {
        let p = fixtures::pinched_torus();
        let doc = ChainDocument::from_pair(&p);
        let text = serde_json::to_string(&doc).unwrap();
        let back = ChainDocument::from_json(&text).unwrap().to_pair().unwrap();
        assert_eq!(back, p);
        let rep = ChainReportDocument::compute(&back, true);
        assert!(rep.routes_agree);
        assert_eq!(
            rep.hi_via_cone.augmented.value,
            BettiVector::new(vec![1, 2, 0])
        );
        assert_eq!(rep.duality, Some(true));
        let text = serde_json::to_string(&rep).unwrap();
        assert_eq!(
            serde_json::from_str::<ChainReportDocument>(&text).unwrap(),
            rep
        );
    }

    #[test]
    fn chain_shape_errors() {
        let doc = r#"{"dim": 1, "cutoff": 1,
            "link": {"dims": [1]},
            "exterior": {"dims": [1, 1], "boundaries": [[["1", "0"]]]}}"#;
        let err = ChainDocument::from_json(doc)
            .unwrap()
            .to_pair()
            .unwrap_err();
        assert!(matches!(err, Error::MalformedComplex(_)));
        let doc = r#"{"dim": 2, "cutoff": 1,
            "link": {"dims": []},
            "exterior": {"dims": [1, 1, 1], "boundaries": [[["1"]], [["1"]]]}}"#;
        let err = ChainDocument::from_json(doc)
            .unwrap()
            .to_pair()
            .unwrap_err();
        assert!(matches!(err, Error::MalformedComplex(_)));
    }
}
