//! `intspace`: intersection-space Betti numbers from the command line.
//!
//! Exit codes: 0 on success, 2 for bad input, 3 when the input is fine but
//! the computation fails (non-isolated germ, reduction limit, a reproduced
//! example that does not match).

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use intspace_core::reproduce::{reproduce, Reproduction, EXAMPLES};
use intspace_core::schema::{ChainDocument, ChainReportDocument, ProfileDocument, ReportDocument};
use intspace_core::stability::{analyze, AnalyzeOptions};
use intspace_core::Error;

#[derive(Parser)]
#[command(
    name = "intspace",
    version,
    about = "Betti numbers of intersection spaces of singular hypersurfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a hypersurface profile (JSON; `-` reads standard input).
    Analyze {
        path: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Show which formula produced each number.
        #[arg(long)]
        verbose: bool,
        /// Rank of H_n(L) → H_n(M), replacing the profile value.
        #[arg(long, value_name = "N")]
        rho: Option<u64>,
        /// Take rk(T−1) = 0 wherever it is neither given nor computable.
        #[arg(long)]
        assume_trivial_monodromy: bool,
        /// Cap on intermediate polynomials per normal-form reduction.
        #[arg(long, value_name = "N")]
        reduction_limit: Option<usize>,
    },
    /// Intersection-space homology of a chain-level pair (JSON).
    Chain {
        path: PathBuf,
        /// Truncation cutoff, replacing the document value.
        #[arg(long, value_name = "K")]
        cutoff: Option<usize>,
        /// Also compare ranks with the complementary cutoff.
        #[arg(long)]
        check_duality: bool,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        verbose: bool,
    },
    /// Rerun a bundled worked example, or all of them.
    Reproduce {
        id: Option<String>,
        #[arg(long)]
        json: bool,
        /// List the known examples.
        #[arg(long)]
        list: bool,
    },
}

enum Failure {
    Error(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    let result = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    };
    result.map_err(|e| {
        Failure::Error(Error::Invalid(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })
}

fn to_json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("report documents serialize")
}

fn print_analysis(doc: &ReportDocument) {
    let n = doc.n.value;
    println!("dimension n = {n}, degree d = {}", doc.d.value);
    let t = &doc.totals;
    println!(
        "singular points: {} (μ = {}, rk(T−1) = {})",
        t.singular_points.value, t.mu.value, t.rank_t_minus_1.value
    );
    for s in &doc.singularities {
        let mut line = format!(
            "  {} ×{}: μ = {} [{}], rk(T−1) = {} [{}]",
            s.label,
            s.count.value,
            s.mu.value,
            s.mu.provenance,
            s.rank_t_minus_1.value,
            s.rank_t_minus_1.provenance
        );
        if let Some(b) = &s.branches {
            line.push_str(&format!(", branches = {}", b.value));
        }
        println!("{line}");
    }
    let b = &doc.betti;
    println!("b(V_s) = {}", b.smooth.value);
    println!("b(IV)  = {}", b.intersection_space.value);
    if let Some(v) = &b.singular_fiber {
        println!(
            "b(V)   = {}  with ρ = {} [{}]",
            v.value, doc.rho.value, doc.rho.provenance
        );
    }
    println!("b(L)   = {}", b.link.value);
    if let Some(ih) = &b.intersection_homology {
        println!("IH     = {}", ih.value);
    }
    let s = &doc.stability;
    let differing: Vec<String> = s
        .degree_stable
        .iter()
        .enumerate()
        .filter(|(_, &ok)| !ok)
        .map(|(i, _)| i.to_string())
        .collect();
    println!(
        "stability: {}; trivial monodromy: {}; degrees where b(IV) differs from b(V_s): {}",
        if s.stable { "stable" } else { "unstable" },
        if s.trivial_monodromy { "yes" } else { "no" },
        if differing.is_empty() {
            "none".to_string()
        } else {
            differing.join(", ")
        }
    );
    let m = &doc.middle_bounds;
    println!(
        "middle bounds: {} ≤ b_{n}(IV) = {} ≤ {}",
        m.lower.value, m.value.value, m.upper.value
    );
    if let Some(e) = &doc.euler_identity {
        println!(
            "euler identity: {} = {} ({})",
            e.lhs.value,
            e.rhs.value,
            if e.holds { "holds" } else { "fails" }
        );
    }
    for w in &doc.warnings {
        println!("warning: {w}");
    }
    if !doc.trace.is_empty() {
        println!("derivation:");
        for line in &doc.trace {
            println!("  {line}");
        }
        for skipped in &m.skipped {
            println!("  lower bound skips {skipped}");
        }
    }
}

fn print_chain(doc: &ChainReportDocument, verbose: bool) {
    println!(
        "dimension m = {}, cutoff k = {}",
        doc.dim.value, doc.cutoff.value
    );
    if verbose {
        println!("H(L)   = {}", doc.homology.link.value);
        println!("H(M)   = {}", doc.homology.exterior.value);
        println!("H(M,L) = {}", doc.homology.relative.value);
        println!(
            "closed formulas: reduced HI = {}",
            doc.hi_from_pair.reduced.value
        );
        println!(
            "mapping cone:    reduced HI = {}",
            doc.hi_via_cone.reduced.value
        );
    }
    println!("HI = {}", doc.hi_via_cone.augmented.value);
    println!(
        "routes agree: {}",
        if doc.routes_agree { "yes" } else { "no" }
    );
    if let Some(d) = doc.duality {
        println!("duality: {}", if d { "holds" } else { "fails" });
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            path,
            json,
            verbose,
            rho,
            assume_trivial_monodromy,
            reduction_limit,
        } => {
            let text = read_input(&path)?;
            let profile = ProfileDocument::from_json(&text)?.to_profile()?;
            let mut options = AnalyzeOptions {
                rho,
                assume_trivial_monodromy,
                ..AnalyzeOptions::default()
            };
            if let Some(limit) = reduction_limit {
                options.reduction_limit = limit;
            }
            let report = analyze(&profile, &options)?;
            let doc = ReportDocument::from_report(&report, verbose)?;
            if json {
                println!("{}", to_json(&doc));
            } else {
                print_analysis(&doc);
            }
        }
        Command::Chain {
            path,
            cutoff,
            check_duality,
            json,
            verbose,
        } => {
            let text = read_input(&path)?;
            let mut pair = ChainDocument::from_json(&text)?.to_pair()?;
            if let Some(k) = cutoff {
                pair = pair.with_cutoff(k)?;
            }
            let doc = ChainReportDocument::compute(&pair, check_duality);
            if json {
                println!("{}", to_json(&doc));
            } else {
                print_chain(&doc, verbose);
            }
            if !doc.routes_agree {
                return Err(Failure::Mismatch(
                    "closed formulas and mapping cone disagree".into(),
                ));
            }
        }
        Command::Reproduce { id, json, list } => {
            if list {
                for e in EXAMPLES {
                    println!("{:<20} {}", e.id, e.description);
                }
                return Ok(());
            }
            let runs: Vec<Reproduction> = match id.as_deref() {
                Some("all") | None => EXAMPLES
                    .iter()
                    .map(|e| reproduce(e.id))
                    .collect::<Result<_, _>>()?,
                Some(id) => vec![reproduce(id)?],
            };
            if json {
                let value: Vec<_> = runs
                    .iter()
                    .map(|r| {
                        json!({
                            "id": r.id,
                            "passed": r.passed(),
                            "cells": r.cells.iter().map(|c| json!({
                                "name": c.name,
                                "expected": c.expected,
                                "actual": c.actual,
                                "passed": c.passed(),
                            })).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                println!("{}", to_json(&value));
            } else {
                for r in &runs {
                    println!("{r}");
                }
            }
            let failed: Vec<&str> = runs
                .iter()
                .filter(|r| !r.passed())
                .map(|r| r.id.as_str())
                .collect();
            if !failed.is_empty() {
                return Err(Failure::Mismatch(format!(
                    "mismatch in {}",
                    failed.join(", ")
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (kind, message, code) = match failure {
                Failure::Error(e) => {
                    let code = if e.is_input_error() { 2 } else { 3 };
                    (e.kind().to_string(), e.to_string(), code)
                }
                Failure::Mismatch(m) => ("mismatch".to_string(), m, 3),
            };
            let body = json!({ "error": { "kind": kind, "message": message, "exit_code": code } });
            eprintln!("{body}");
            ExitCode::from(code)
        }
    }
}
