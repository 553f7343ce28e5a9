use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use schurci::catalog::{build_catalog, enumerate_srings, is_p_sring, match_catalog, schurian_check, ENUMERATION_MAX_ORDER};
use schurci::ci::{babai_ci_check_with, verify_main_theorem, BabaiOptions, CiVerdict, SamplerConfig};
use schurci::group::{is_prime, parse_group, prime_factors, AbelianGroup};
use schurci::schur::{detect_gwreath, detect_star, p1_q1, trichotomy_classify, SchurPartition, TrichotomyError};
use schurci::Error;

#[derive(Parser)]
#[command(name = "schurci", version, about = "Schur rings and CI checks over finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Directory receiving the report (and refutation artifacts).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the S-ring axioms for a partition file.
    Validate { file: PathBuf },
    /// Babai's criterion for the S-ring in a partition file.
    CiCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        max_order: usize,
    },
    /// Generalized wreath and star certificates, P1/Q1 and the trichotomy table.
    Decompose { file: PathBuf },
    /// Sample transitivity modules over Z_p^3 x Z_q and run the case analysis.
    VerifyTheorem {
        p: u32,
        q: u32,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Enumerate the S-rings over a group and match them against the catalog.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = ENUMERATION_MAX_ORDER)]
        max_order: usize,
    },
}

/// A finished report: its JSON form, its text form and the exit code.
struct Outcome {
    json: Value,
    text: String,
    code: u8,
    artifacts: Vec<(String, String)>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => match emit(&cli, &outcome) {
            Ok(()) => ExitCode::from(outcome.code),
            Err(e) => fail(&e),
        },
        Err(e) => fail(&e),
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::SizeLimit { .. } => 3,
        Error::InvalidSpec(_) | Error::Parse(_) | Error::Json(_) | Error::Io(_) | Error::InvalidPartition(_) => 2,
        _ => 1,
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> schurci::Result<()> {
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&outcome.json)? + "\n",
        Format::Text => outcome.text.clone(),
    };
    match &cli.out {
        None => print!("{body}"),
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let name = match cli.format {
                Format::Json => "report.json",
                Format::Text => "report.txt",
            };
            std::fs::write(dir.join(name), &body)?;
            for (file, content) in &outcome.artifacts {
                std::fs::write(dir.join(file), content)?;
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> schurci::Result<Outcome> {
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::CiCheck { file, max_order } => ci_check(file, *max_order),
        Command::Decompose { file } => decompose(file),
        Command::VerifyTheorem { p, q, samples, seed } => {
            if !is_prime(*p) || !is_prime(*q) || p == q {
                return Err(Error::InvalidSpec(format!("p = {p} and q = {q} must be distinct primes")));
            }
            let mut cfg = SamplerConfig::new(*p, *q, *samples, *seed);
            cfg.workers = cli.workers;
            verify(&cfg)
        }
        Command::Classify { group, max_order } => classify(&parse_group(group)?, *max_order),
    }
}

fn read_partition(file: &Path) -> schurci::Result<SchurPartition> {
    let text = std::fs::read_to_string(file)?;
    SchurPartition::from_json(&text)
}

fn validate(file: &Path) -> schurci::Result<Outcome> {
    let p = read_partition(file)?;
    Ok(match p.validate() {
        Ok(()) => Outcome {
            json: json!({ "partition": p.to_json_value(), "valid": true, "rank": p.rank() }),
            text: format!("valid S-ring over {} of rank {}\n", p.group(), p.rank()),
            code: 0,
            artifacts: Vec::new(),
        },
        Err(v) => Outcome {
            json: json!({ "partition": p.to_json_value(), "valid": false, "violation": v }),
            text: format!("not an S-ring: {v}\n"),
            code: 1,
            artifacts: Vec::new(),
        },
    })
}

fn require_valid(p: &SchurPartition) -> schurci::Result<()> {
    p.validate()
        .map_err(|v| Error::Precondition(format!("not an S-ring: {v}")))
}

fn ci_check(file: &Path, max_order: usize) -> schurci::Result<Outcome> {
    let p = read_partition(file)?;
    let opts = BabaiOptions {
        max_degree: max_order.min(64),
        ..BabaiOptions::default()
    };
    if p.group().order() > opts.max_degree {
        return Err(Error::SizeLimit {
            what: "group order",
            actual: p.group().order() as u128,
            bound: opts.max_degree as u128,
        });
    }
    require_valid(&p)?;
    let v = babai_ci_check_with(&p, &opts)?;
    let code = if v.is_ci() { 0 } else { 1 };
    Ok(Outcome {
        text: verdict_text(&v),
        json: serde_json::from_str(&v.to_json())?,
        code,
        artifacts: Vec::new(),
    })
}

fn verdict_text(v: &CiVerdict) -> String {
    let mut out = format!(
        "{} over {}: {} ({})\n",
        v.partition.to_json(),
        v.partition.group(),
        v.verdict.as_str(),
        v.method.as_str()
    );
    out.push_str(&format!("|Aut| = {}\n", v.automorphism_group_order));
    if let Some(k) = &v.regular_subgroup_count {
        out.push_str(&format!("regular subgroups: {k}\n"));
    }
    if let Some(c) = v.class_count {
        out.push_str(&format!("conjugacy classes: {c}\n"));
    }
    if let Some(r) = &v.refusal {
        out.push_str(&format!("refusal: induced coloring {:?}\n", r.induced_coloring));
    }
    out
}

fn decompose(file: &Path) -> schurci::Result<Outcome> {
    let p = read_partition(file)?;
    require_valid(&p)?;
    let group = p.group().clone();
    let gwreath: Vec<_> = detect_gwreath(&p).into_iter().filter(|c| !c.trivial).collect();
    let subs = p.asubgroups();
    let mut stars = Vec::new();
    for k in &subs {
        for l in &subs {
            if k == l {
                continue;
            }
            if let Ok(c) = detect_star(&p, k, l) {
                if !c.trivial {
                    stars.push(c);
                }
            }
        }
    }
    let mut text = format!("{}\n", p.to_json());
    text.push_str(&format!("generalized wreath (L, U), nontrivial: {}\n", gwreath.len()));
    for c in &gwreath {
        text.push_str(&format!("  {:?} < {:?}\n", c.first.members(), c.second.members()));
    }
    text.push_str(&format!("star (K, L), nontrivial: {}\n", stars.len()));
    for c in &stars {
        text.push_str(&format!("  {:?} * {:?}\n", c.first.members(), c.second.members()));
    }

    let mut primes = Vec::new();
    for q in simple_primes(&group) {
        let (p1, q1) = p1_q1(&p, q)?;
        text.push_str(&format!("q = {q}: P1 = {:?}, Q1 = {:?}\n", p1.members(), q1.members()));
        let mut table = Vec::new();
        for i in 0..p.rank() {
            let (entry, line) = match trichotomy_classify(&p, q, i) {
                Ok(t) => (json!({ "block": p.block(i), "trichotomy": t }), format!("case {:?}", t.case)),
                Err(TrichotomyError::Precondition(e)) => (
                    json!({ "block": p.block(i), "skipped": e.to_string() }),
                    format!("skipped ({e})"),
                ),
                Err(TrichotomyError::Refutation { block, reason }) => (
                    json!({ "block": block, "refutation": reason }),
                    format!("REFUTED: {reason}"),
                ),
            };
            text.push_str(&format!("  {:?}: {line}\n", p.block(i)));
            table.push(entry);
        }
        primes.push(json!({ "q": q, "p1": p1.members(), "q1": q1.members(), "trichotomy": table }));
    }
    Ok(Outcome {
        json: json!({
            "partition": p.to_json_value(),
            "gwreath": gwreath,
            "star": stars,
            "primes": primes,
        }),
        text,
        code: 0,
        artifacts: Vec::new(),
    })
}

/// Primes dividing the order exactly once.
fn simple_primes(group: &AbelianGroup) -> Vec<u32> {
    let mut ps = prime_factors(group.order() as u32);
    ps.dedup();
    ps.into_iter().filter(|&q| group.is_simple_divisor(q)).collect()
}

fn verify(cfg: &SamplerConfig) -> schurci::Result<Outcome> {
    let report = verify_main_theorem(cfg)?;
    let clean = report.refutations.is_empty() && report.structural_counterexamples.is_empty();
    let mut artifacts = Vec::new();
    for (i, r) in report.refutations.iter().enumerate() {
        artifacts.push((format!("refutation-{i:03}.json"), serde_json::to_string_pretty(r)? + "\n"));
    }
    for (i, r) in report.structural_counterexamples.iter().enumerate() {
        artifacts.push((format!("structural-{i:03}.json"), serde_json::to_string_pretty(r)? + "\n"));
    }
    Ok(Outcome {
        json: serde_json::from_str(&report.to_json())?,
        text: report.to_text(),
        code: if clean { 0 } else { 1 },
        artifacts,
    })
}

fn classify(group: &Arc<AbelianGroup>, max_order: usize) -> schurci::Result<Outcome> {
    let bound = max_order.min(ENUMERATION_MAX_ORDER);
    if group.order() > bound {
        return Err(Error::SizeLimit {
            what: "group order",
            actual: group.order() as u128,
            bound: bound as u128,
        });
    }
    let all = enumerate_srings(group)?;
    // the catalog covers C_p^3
    let catalog_prime = match group.factors() {
        [a, b, c] if a == b && b == c && (*a == 2 || *a == 3) => Some(*a),
        _ => None,
    };
    let catalog = match catalog_prime {
        Some(p) => build_catalog(p)?,
        None => Vec::new(),
    };
    let mut rows = Vec::new();
    let mut labels: BTreeMap<String, usize> = BTreeMap::new();
    let mut text = format!("{}: {} S-rings\n", group, all.len());
    for s in &all {
        let schurian = schurian_check(s)?;
        let label = match catalog_prime {
            Some(p) if schurian && is_p_sring(s, p) => {
                Some(match_catalog(s, &catalog)?.unwrap_or_else(|| "unmatched".into()))
            }
            _ => None,
        };
        if let Some(l) = &label {
            *labels.entry(l.clone()).or_default() += 1;
        }
        text.push_str(&format!(
            "  rank {:>2}  schurian {:<5}  {:<9}  {:?}\n",
            s.rank(),
            schurian,
            label.as_deref().unwrap_or("-"),
            s.blocks()
        ));
        rows.push(json!({ "partition": s.to_json_value(), "rank": s.rank(), "schurian": schurian, "catalog": label }));
    }
    if catalog_prime.is_some() {
        text.push_str(&format!("catalog labels: {labels:?}\n"));
    }
    Ok(Outcome {
        json: json!({ "group": group.to_string(), "count": all.len(), "srings": rows, "catalog_labels": labels }),
        text,
        code: 0,
        artifacts: Vec::new(),
    })
}
