use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pilelab::checker::{analyze, AnalyzeOptions, RouteSet};
use pilelab::config::Config;
use pilelab::ep::{ep_reduce_kernel, ep_solve_brute, ep_solve_linear, solve_chain, EmbeddingProblem, Solution};
use pilelab::error::Error;
use pilelab::homology::{compute, Side};
use pilelab::json::{
    ep_from_json, group_document, module_from_json, module_to_json, morphism_to_json, parse, pile_document,
    pile_from_json, read_file, to_pretty, CorpusEntry, EpCorpusEntry, EpJson, GroupJson, ModuleJson, PileJson, SCHEMA,
};
use pilelab::meataxe::simple_modules;
use pilelab::pile::Pile;
use pilelab::selftest::run_selftest;

/// Relative projectivity of finite piles.
#[derive(Parser)]
#[command(name = "pilelab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide projectivity of a pile by every requested route.
    Analyze {
        pile: PathBuf,
        /// Comma-separated primes (default: the primes dividing the group order).
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u32>>,
        /// all, homological, dual or oracle.
        #[arg(long, default_value = "all")]
        routes: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// List the simple modules of a group over F_p.
    Simples {
        group: PathBuf,
        #[arg(short, long)]
        p: u32,
    },
    /// Compute H_i or H^i of a group with coefficients in a module.
    Homology {
        group: PathBuf,
        module: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "homology")]
        side: SideArg,
    },
    /// Solve an embedding problem.
    EpSolve { ep: PathBuf },
    /// Run the corpus expectations and all invariant suites.
    Selftest {
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Homology,
    Cohomology,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// A bare pile document, or a corpus entry wrapping one.
fn load_pile(path: &Path, cfg: &Config) -> Result<(Arc<Pile>, String, Option<Vec<u32>>)> {
    let text = read_text(path)?;
    let value: Value = parse(&text).with_context(|| path.display().to_string())?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    if value.get("pile").is_some() {
        let entry: CorpusEntry = parse(&text).with_context(|| path.display().to_string())?;
        let pile = pile_from_json(&entry.pile, cfg)?;
        return Ok((pile, entry.name, entry.primes));
    }
    let doc: PileJson = parse(&text).with_context(|| path.display().to_string())?;
    let name = doc.name.clone().unwrap_or(stem);
    Ok((pile_document(&doc, cfg)?, name, None))
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<()> {
    let text = to_pretty(doc);
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_analyze(
    path: &Path,
    primes: Option<Vec<u32>>,
    routes: &str,
    out: Option<&Path>,
    timings: bool,
    cfg: &Config,
) -> Result<()> {
    let (pile, name, entry_primes) = load_pile(path, cfg)?;
    let routes: RouteSet = routes.parse()?;
    let opts = AnalyzeOptions { primes: primes.or(entry_primes), routes, timings };
    match analyze(&pile, &name, &opts, cfg) {
        Ok(report) => {
            emit(&report.to_json(), out)?;
            if out.is_some() {
                let verdict = match report.projective() {
                    Some(true) => "projective",
                    Some(false) => "not projective",
                    None => "no verdict",
                };
                println!("{name}: {verdict}");
            }
            Ok(())
        }
        Err(Error::RouteDisagreement { p, module, report }) => {
            emit(&report, out)?;
            Err(Error::RouteDisagreement { p, module, report }.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_simples(path: &Path, p: u32, cfg: &Config) -> Result<()> {
    let doc: GroupJson = read_file(path)?;
    let g = group_document(&doc, cfg)?;
    let modules: Vec<Value> = simple_modules(&g, p, cfg)?
        .iter()
        .enumerate()
        .map(|(i, m)| {
            json!({
                "index": i,
                "dim": m.dim(),
                "fingerprint": m.fingerprint(),
                "module": module_to_json(m),
            })
        })
        .collect();
    emit(&json!({ "schema": SCHEMA, "p": p, "count": modules.len(), "modules": modules }), None)
}

fn cmd_homology(group: &Path, module: &Path, degree: usize, side: SideArg, cfg: &Config) -> Result<()> {
    let gdoc: GroupJson = read_file(group)?;
    let g = group_document(&gdoc, cfg)?;
    let mdoc: ModuleJson = read_file(module)?;
    let m = module_from_json(&mdoc, &g)?;
    if degree > 2 {
        bail!(Error::Schema(format!("degree {degree} is not supported (0, 1 or 2)")));
    }
    let side = match side {
        SideArg::Homology => Side::Homology,
        SideArg::Cohomology => Side::Cohomology,
    };
    let h = compute(&m, degree, side, cfg)?;
    emit(
        &json!({
            "schema": SCHEMA,
            "side": side,
            "degree": degree,
            "p": h.p(),
            "dim": h.dim(),
            "chain_dim": h.ambient_dim(),
            "representatives": h.representatives(),
        }),
        None,
    )
}

fn solve(ep: &EmbeddingProblem, cfg: &Config) -> Result<(Option<Solution>, Value)> {
    if ep.is_id_ep() && ep.is_rigid() && ep.kernel_elementary_abelian() {
        let sol = ep_solve_linear(ep, cfg)?;
        return Ok((sol, json!({ "method": "linear", "kernel_order": ep.kernel().order() })));
    }
    if ep.is_rigid() {
        let chain = ep_reduce_kernel(ep)?;
        let sol = solve_chain(ep.phi(), &chain, cfg)?;
        let witness = json!({
            "method": "kernel-chain",
            "kernel_order": ep.kernel().order(),
            "chain_length": chain.steps.len(),
        });
        return Ok((sol, witness));
    }
    let out = ep_solve_brute(ep, cfg)?;
    let witness = json!({
        "method": "brute-force",
        "kernel_order": ep.kernel().order(),
        "group_level_solution": out.weak_solution,
        "nodes": out.nodes,
    });
    Ok((out.solution, witness))
}

fn cmd_ep_solve(path: &Path, cfg: &Config) -> Result<()> {
    let text = read_text(path)?;
    let value: Value = parse(&text).with_context(|| path.display().to_string())?;
    let doc: EpJson = if value.get("ep").is_some() {
        parse::<EpCorpusEntry>(&text).with_context(|| path.display().to_string())?.ep
    } else {
        parse(&text).with_context(|| path.display().to_string())?
    };
    let ep = ep_from_json(&doc, cfg)?;
    let (sol, witness) = solve(&ep, cfg)?;
    let doc = match sol {
        Some(s) => json!({
            "schema": SCHEMA,
            "status": "solved",
            "solution": morphism_to_json(&s.gamma),
            "witness": witness,
        }),
        None => json!({ "schema": SCHEMA, "status": "unsolvable", "witness": witness }),
    };
    emit(&doc, None)
}

fn cmd_selftest(corpus: &Path, seed: u64, cfg: Config) -> Result<()> {
    let report = run_selftest(corpus, &cfg.with_seed(seed))?;
    print!("{}", report.table());
    if let Some(bad) = report.first_failure() {
        bail!("selftest failed: {} {}: {}", bad.suite, bad.subject, bad.detail);
    }
    println!("all {} rows passed", report.rows.len());
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::RouteDisagreement { .. }) => 2,
        Some(e) if e.is_resource_cap() => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = Config::from_env();
    match cli.command {
        Command::Analyze { pile, primes, routes, json, timings } => {
            cmd_analyze(&pile, primes, &routes, json.as_deref(), timings, &cfg)
        }
        Command::Simples { group, p } => cmd_simples(&group, p, &cfg),
        Command::Homology { group, module, degree, side } => cmd_homology(&group, &module, degree, side, &cfg),
        Command::EpSolve { ep } => cmd_ep_solve(&ep, &cfg),
        Command::Selftest { corpus, seed } => cmd_selftest(&corpus, seed, cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let disagree = Error::RouteDisagreement { p: 2, module: 0, report: Box::new(Value::Null) };
        assert_eq!(exit_code(&anyhow::Error::from(disagree).context("analyze")), 2);
        let cap = Error::ResourceCap { what: "chain entries", size: 10, cap: 5 };
        assert_eq!(exit_code(&cap.into()), 3);
        assert_eq!(exit_code(&Error::Schema("x".into()).into()), 1);
        assert_eq!(exit_code(&anyhow::anyhow!("plain")), 1);
    }
}
