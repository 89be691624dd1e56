//! `reflat`: command-line front end. Every subcommand prints one JSON document
//! on stdout and a one-line summary on stderr.
//!
//! Exit codes: 0 success (including every verdict), 1 computation error,
//! 2 usage or input error, 3 a search cap was reached.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use reflat::discform::{discriminant_form, splits_2u_by_length};
use reflat::lattice::{parse_lattice, root_sublattice, roots, GramLattice};
use reflat::pipeline::{classify, configured_bound, enumerate_candidates, Config};
use reflat::pool::{compute_a_n, construct_generic_k, min_chamber_norm, Pool, SplitLattice};
use reflat::weilrep::{borcherds_obstruction, TwoUEvidence};
use reflat::{HeegnerLabel, Rational};

mod selftest;

#[derive(Parser)]
#[command(name = "reflat", version, about = "Exact tools for 2-reflective lattices of signature (2, n)")]
struct Cli {
    /// JSON config (slope table, f values, caps).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant form of a lattice.
    Discform { lattice: String },
    /// Roots and ADE type of a negative definite lattice.
    Roots {
        lattice: String,
        /// Print every root (one per ± pair).
        #[arg(long)]
        list: bool,
    },
    /// The set π_L and the components of the (-2)-Heegner divisor.
    Heegner { lattice: String },
    /// The constant a_n.
    An { n: usize },
    /// The constant b_n.
    Bn { n: usize },
    /// The pool P_n of lattices of signature (2,1).
    Pool { n: usize },
    /// A generic-curve certificate for `2U ⊕ M` given in standard form.
    Curve {
        lattice: String,
        /// `H0` or `mu:<index into π_L>`.
        #[arg(long, default_value = "H0")]
        target: String,
    },
    /// The weight and invariance obstruction (n >= 26).
    Obstruct { lattice: String },
    /// Classification verdict with its reason chain.
    Classify { lattice: String },
    /// Discriminant forms below the configured (or given) bound.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Use this B instead of deriving it from the config.
        #[arg(long)]
        bound: Option<String>,
        #[arg(long, default_value_t = 0)]
        offset: usize,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Cross-checks against the brute-force oracles.
    Selftest,
}

/// Errors tagged with the exit code they map to.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((value, summary)) => {
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&value).expect("serializable output"));
            let _ = writeln!(std::io::stderr().lock(), "{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<reflat::Error>() {
        Some(err) if err.is_cap() => 3,
        Some(reflat::Error::Parse(_)) => 2,
        _ => 1,
    }
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    let Some(path) = path else { return Ok(Config::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read config {}: {e}", path.display())))?;
    Ok(Config::from_json(&text)?)
}

/// A lattice expression, inline JSON, or a path to a JSON lattice file.
fn load_lattice(arg: &str) -> Result<GramLattice> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    } else {
        arg.to_string()
    };
    parse_lattice(&text).map_err(|e| anyhow!(Usage(format!("invalid lattice '{arg}': {e}"))))
}

fn run(cli: Cli) -> Result<(Value, String)> {
    let cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Discform { lattice } => {
            let l = load_lattice(&lattice)?;
            let d = discriminant_form(&l)?;
            let a = &d.module;
            let (p, q) = l.signature();
            let sig = a.milgram_signature(cfg.tol)?;
            let summary = format!("{}: |A| = {}, invariants {:?}, Milgram signature {sig}", l.label(), a.order(), a.elementary_divisors());
            Ok((
                json!({
                    "lattice": l.label(),
                    "signature": [p, q],
                    "order": a.order(),
                    "elementary_divisors": a.elementary_divisors(),
                    "exponent": a.exponent(),
                    "milgram_signature": sig,
                    "module": a.to_json(),
                }),
                summary,
            ))
        }
        Command::Roots { lattice, list } => {
            let l = load_lattice(&lattice)?;
            let r = roots(&l)?;
            let dec = root_sublattice(&l)?;
            let summary = format!("{}: {} roots (±), root system {}", l.label(), 2 * r.len(), dec.label());
            let mut out = json!({ "lattice": l.label(), "root_count": 2 * r.len(), "root_system": dec.label() });
            if list {
                out["roots"] = json!(r);
            }
            Ok((out, summary))
        }
        Command::Heegner { lattice } => {
            let l = load_lattice(&lattice)?;
            let d = discriminant_form(&l)?;
            let pi = d.module.pi_l();
            let entries: Vec<Value> = pi
                .iter()
                .enumerate()
                .map(|(i, mu)| json!({ "index": i, "mu": mu, "q": d.module.q(mu).to_string(), "label": format!("mu:{i}") }))
                .collect();
            let mut components = vec!["H0".to_string()];
            components.extend((0..pi.len()).map(|i| format!("mu:{i}")));
            let summary = format!("{}: |π_L| = {}, components {}", l.label(), pi.len(), components.join(", "));
            Ok((json!({ "lattice": l.label(), "pi_l": entries, "components": components }), summary))
        }
        Command::An { n } => {
            check_n(n)?;
            let a = compute_a_n(n, &cfg.caps)?;
            Ok((json!({ "n": n, "a_n": a }), format!("a_{n} = {a}")))
        }
        Command::Bn { n } => {
            check_n(n)?;
            let points = (0..=n - 2).map(|k| min_chamber_norm(k, &cfg.caps)).collect::<reflat::Result<Vec<_>>>()?;
            let b = points.iter().map(|p| p.norm).max().unwrap_or(0);
            let per_k: Vec<Value> = points.iter().map(|p| json!({ "k": p.k, "norm": p.norm, "vector": p.vector() })).collect();
            Ok((json!({ "n": n, "b_n": b, "chamber_points": per_k }), format!("b_{n} = {b}")))
        }
        Command::Pool { n } => {
            check_n(n)?;
            let pool = Pool::compute(n, &cfg.caps)?;
            let summary = format!("P_{n}: a_n = {}, b_n = {}, {} members", pool.a_n, pool.b_n, pool.members.len());
            Ok((serde_json::to_value(&pool)?, summary))
        }
        Command::Curve { lattice, target } => {
            let l = load_lattice(&lattice)?;
            let d = discriminant_form(&l)?;
            let label = parse_target(&target, &d)?;
            let split = SplitLattice::standard(l.clone())?;
            let cert = construct_generic_k(&split, &label, &cfg.caps)?;
            let check = cert.verify(&l)?;
            if !check.passed() {
                bail!("certificate failed verification: {check:?}");
            }
            let summary = format!("{} target {target}: K ≅ {} (case {:?}), verified", l.label(), cert.pool_member.label(), cert.case_tag);
            Ok((json!({ "lattice": l.label(), "certificate": cert, "check": check }), summary))
        }
        Command::Obstruct { lattice } => {
            let l = load_lattice(&lattice)?;
            let a = discriminant_form(&l)?.module;
            let evidence = if splits_2u_by_length(&a, l.signature().1) {
                TwoUEvidence::LengthCondition
            } else if SplitLattice::standard(l.clone()).is_ok() {
                TwoUEvidence::ExplicitSplit
            } else {
                return Err(anyhow!(Usage(
                    "2U containment not established (length condition fails and the Gram matrix is not in 2U+M form); use `classify`".into()
                )));
            };
            let report = borcherds_obstruction(&l, Some(evidence))?;
            let summary = format!("{}: {:?}", l.label(), report.verdict);
            Ok((json!({ "lattice": l.label(), "evidence": evidence, "report": report }), summary))
        }
        Command::Classify { lattice } => {
            let l = load_lattice(&lattice)?;
            let v = classify(&l, &cfg)?;
            let summary = format!("{}: {:?} ({})", v.lattice, v.status, v.summary);
            Ok((serde_json::to_value(&v)?, summary))
        }
        Command::Enumerate { n, bound, offset, limit } => {
            if !(3..=25).contains(&n) {
                return Err(anyhow!(Usage(format!("enumerate needs 3 <= n <= 25, got {n}"))));
            }
            let b: Rational = match bound {
                Some(s) => s.parse().map_err(|e| Usage(format!("invalid bound '{s}': {e}")))?,
                None => configured_bound(n, &cfg)?.1,
            };
            let page = enumerate_candidates(n, &b, &cfg, offset, limit)?;
            let summary = format!(
                "n = {n}, B = {}: {} form(s) from offset {offset}{}",
                page.bound.0,
                page.forms.len(),
                page.next_offset.map(|o| format!(", more from offset {o}")).unwrap_or_default()
            );
            Ok((serde_json::to_value(&page)?, summary))
        }
        Command::Selftest => {
            let report = selftest::run(&cfg)?;
            let failed = report.iter().filter(|c| !c.passed).count();
            let summary = format!("selftest: {} checks, {failed} failed", report.len());
            if failed > 0 {
                eprintln!("{}", serde_json::to_string_pretty(&report)?);
                bail!(summary);
            }
            Ok((serde_json::to_value(&report)?, summary))
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(anyhow!(Usage(format!("n must be at least 3, got {n}"))));
    }
    Ok(())
}

fn parse_target(target: &str, d: &reflat::DiscriminantForm) -> Result<HeegnerLabel> {
    if target.eq_ignore_ascii_case("h0") {
        return Ok(HeegnerLabel::H0);
    }
    let idx = target
        .strip_prefix("mu:")
        .and_then(|s| s.parse::<usize>().ok())
        .ok_or_else(|| Usage(format!("target must be H0 or mu:<index>, got '{target}'")))?;
    let pi = d.module.pi_l();
    let mu = pi.get(idx).ok_or_else(|| Usage(format!("π_L has {} element(s); index {idx} is out of range", pi.len())))?;
    Ok(HeegnerLabel::mu(&d.module, mu.clone())?)
}
