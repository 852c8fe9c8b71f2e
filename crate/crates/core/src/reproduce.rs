//! Bundled worked examples with their expected numbers.

use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::schema::{json_error, ProfileDocument, ReportDocument};
use crate::stability::{analyze, AnalyzeOptions, Provenance};

pub struct Example {
    pub id: &'static str,
    pub description: &'static str,
    pub profile: &'static str,
    expected: &'static str,
}

macro_rules! example {
    ($id:literal, $description:literal) => {
        Example {
            id: $id,
            description: $description,
            profile: include_str!(concat!("../fixtures/", $id, ".json")),
            expected: include_str!(concat!("../fixtures/", $id, ".expected.json")),
        }
    };
}

pub const EXAMPLES: &[Example] = &[
    example!("intro-cubic", "nodal plane cubic"),
    example!("conic", "pair of crossing lines"),
    example!("kummer", "quartic surface with 16 nodes"),
    example!(
        "fermat-quintic-125",
        "Fermat-type quintic threefold with 125 nodes"
    ),
    example!(
        "plane-quintic-16",
        "quintic threefold containing a plane, 16 nodes"
    ),
];

pub fn find(id: &str) -> Result<&'static Example> {
    EXAMPLES.iter().find(|e| e.id == id).ok_or_else(|| {
        let known: Vec<&str> = EXAMPLES.iter().map(|e| e.id).collect();
        Error::Invalid(format!(
            "unknown example `{id}` (known: {})",
            known.join(", ")
        ))
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectedSingularity {
    label: String,
    mu: u64,
    #[serde(rename = "rank_T_minus_1")]
    rank_t_minus_1: Option<u64>,
    branches: Option<u64>,
    provenance: Option<Provenance>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Expected {
    intersection_space: Option<Vec<u64>>,
    intersection_space_reduced: Option<Vec<u64>>,
    smooth: Option<Vec<u64>>,
    singular_fiber: Option<Vec<u64>>,
    link: Option<Vec<u64>>,
    euler: Option<[i64; 2]>,
    bounds: Option<[u64; 2]>,
    stable: Option<bool>,
    #[serde(default)]
    singularities: Vec<ExpectedSingularity>,
}

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Cell {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Clone, Debug)]
pub struct Reproduction {
    pub id: String,
    pub description: String,
    pub cells: Vec<Cell>,
}

impl Reproduction {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(Cell::passed)
    }
}

impl fmt::Display for Reproduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({})", self.id, self.description)?;
        let width = self
            .cells
            .iter()
            .map(|c| c.name.chars().count())
            .max()
            .unwrap_or(0);
        for c in &self.cells {
            let mark = if c.passed() { "PASS" } else { "FAIL" };
            write!(f, "  {mark}  {:<width$}  {}", c.name, c.actual)?;
            if !c.passed() {
                write!(f, "  (expected {})", c.expected)?;
            }
            writeln!(f)?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn vector(v: &[u64]) -> String {
    crate::topology::BettiVector::new(v.to_vec()).to_string()
}

pub fn reproduce(id: &str) -> Result<Reproduction> {
    let example = find(id)?;
    let expected: Expected = serde_json::from_str(example.expected).map_err(json_error)?;
    let profile = ProfileDocument::from_json(example.profile)?.to_profile()?;
    let report = analyze(&profile, &AnalyzeOptions::default())?;
    let doc = ReportDocument::from_report(&report, false)?;

    let mut cells = Vec::new();
    let mut push = |name: &str, expected: String, actual: String| {
        cells.push(Cell {
            name: name.to_string(),
            expected,
            actual,
        })
    };
    let b = &doc.betti;
    if let Some(v) = &expected.intersection_space {
        push("b(IV)", vector(v), b.intersection_space.value.to_string());
    }
    if let Some(v) = &expected.intersection_space_reduced {
        push(
            "reduced b(IV)",
            vector(v),
            b.intersection_space_reduced.value.to_string(),
        );
    }
    if let Some(v) = &expected.smooth {
        push("b(V_s)", vector(v), b.smooth.value.to_string());
    }
    if let Some(v) = &expected.singular_fiber {
        let actual = b
            .singular_fiber
            .as_ref()
            .map_or_else(|| "none".to_string(), |s| s.value.to_string());
        push("b(V)", vector(v), actual);
    }
    if let Some(v) = &expected.link {
        for s in &doc.singularities {
            push(
                &format!("b(L) at {}", s.label),
                vector(v),
                s.link_betti.value.to_string(),
            );
        }
    }
    if let Some([lhs, rhs]) = expected.euler {
        let actual = doc.euler_identity.as_ref().map_or_else(
            || "none".to_string(),
            |e| format!("{} = {}", e.lhs.value, e.rhs.value),
        );
        push("euler identity", format!("{lhs} = {rhs}"), actual);
    }
    if let Some([lower, upper]) = expected.bounds {
        let m = &doc.middle_bounds;
        push(
            "middle bounds",
            format!("{lower} ≤ b_n(IV) ≤ {upper}"),
            format!("{} ≤ b_n(IV) ≤ {}", m.lower.value, m.upper.value),
        );
    }
    if let Some(stable) = expected.stable {
        push(
            "stable",
            stable.to_string(),
            doc.stability.stable.to_string(),
        );
    }
    for e in &expected.singularities {
        let found = doc.singularities.iter().find(|s| s.label == e.label);
        let Some(s) = found else {
            push(&format!("{} present", e.label), "yes".into(), "no".into());
            continue;
        };
        let (want, got) = match e.provenance {
            Some(p) => (
                format!("{} ({p})", e.mu),
                format!("{} ({})", s.mu.value, s.mu.provenance),
            ),
            None => (e.mu.to_string(), s.mu.value.to_string()),
        };
        push(&format!("μ at {}", e.label), want, got);
        if let Some(r) = e.rank_t_minus_1 {
            push(
                &format!("rk(T−1) at {}", e.label),
                r.to_string(),
                s.rank_t_minus_1.value.to_string(),
            );
        }
        if let Some(r) = e.branches {
            let actual = s
                .branches
                .map_or_else(|| "none".to_string(), |b| b.value.to_string());
            push(&format!("branches at {}", e.label), r.to_string(), actual);
        }
    }
    Ok(Reproduction {
        id: example.id.to_string(),
        description: example.description.to_string(),
        cells,
    })
}
