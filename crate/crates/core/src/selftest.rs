//! Runs the corpus expectations and the invariant suites in one pass.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::checker::{analyze, AnalyzeOptions};
use crate::config::Config;
use crate::ep::{
    ep_pullback_to_id, ep_reduce_kernel, ep_solve_brute, ep_solve_linear, rigid_idep_enumerate, solve_chain,
};
use crate::error::Result;
use crate::group::FiniteGroup;
use crate::homology::{
    cohomology, corestriction, cyclic_cohomology_dims, cyclic_homology_dims, homology, is_split, restriction, shapiro,
};
use crate::json::{ep_from_json, load_corpus, pile_from_json, to_pretty, CorpusEntry, EpCorpusEntry, Expected};
use crate::linalg::{is_zero, FpMatrix};
use crate::meataxe::{find_isomorphic, simple_modules, simple_modules_bruteforce};
use crate::pile::Pile;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub suite: &'static str,
    pub subject: String,
    pub checks: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub rows: Vec<CheckRow>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckRow> {
        self.rows.iter().find(|r| !r.passed)
    }

    pub fn table(&self) -> String {
        let w = self.rows.iter().map(|r| r.subject.len()).max().unwrap_or(0).max(7);
        let mut out = format!("{:<12} {:<w$} {:>6}  {:<4}  detail\n", "suite", "subject", "checks", "ok");
        for r in &self.rows {
            let ok = if r.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{:<12} {:<w$} {:>6}  {:<4}  {}", r.suite, r.subject, r.checks, ok, r.detail);
        }
        out
    }
}

/// Counts checks and keeps the first failing property.
#[derive(Default)]
struct Tally {
    checks: usize,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn absorb(&mut self, r: Result<()>, what: &str) {
        if let Err(e) = r {
            self.check(false, || format!("{what}: {e}"));
        }
    }

    fn row(self, suite: &'static str, subject: String, ok_detail: String) -> CheckRow {
        let passed = self.failure.is_none();
        CheckRow { suite, subject, checks: self.checks, passed, detail: self.failure.unwrap_or(ok_detail) }
    }
}

fn verdict_word(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "unknown",
    }
}

fn corpus_row(entry: &CorpusEntry, pile: &Arc<Pile>, cfg: &Config) -> CheckRow {
    let mut t = Tally::default();
    let opts = AnalyzeOptions { primes: entry.primes.clone(), ..AnalyzeOptions::default() };
    let mut verdict = None;
    let r = (|| -> Result<()> {
        let first = analyze(pile, &entry.name, &opts, cfg)?;
        t.check(first.agree, || "routes disagree".into());
        verdict = first.projective();
        let want = match entry.expected {
            Expected::Yes => Some(true),
            Expected::No => Some(false),
            Expected::Unknown => None,
        };
        if want.is_some() {
            t.check(want == verdict, || {
                format!("expected {} but analyze says {}", verdict_word(want), verdict_word(verdict))
            });
        }
        let again = analyze(pile, &entry.name, &opts, cfg)?;
        t.check(to_pretty(&first) == to_pretty(&again), || "report is not byte-stable".into());
        let reseeded = analyze(pile, &entry.name, &opts, &cfg.clone().with_seed(cfg.seed.wrapping_add(1)))?;
        t.check(reseeded.projective() == verdict, || "verdict depends on the seed".into());
        Ok(())
    })();
    t.absorb(r, "analyze");
    t.row("corpus", entry.name.clone(), format!("projective: {}", verdict_word(verdict)))
}

fn ep_row(entry: &EpCorpusEntry, cfg: &Config) -> CheckRow {
    let mut t = Tally::default();
    let r = (|| -> Result<()> {
        let ep = ep_from_json(&entry.ep, cfg)?;
        let chain = ep_reduce_kernel(&ep)?;
        t.check(chain.steps.len() == entry.chain_length, || {
            format!("chain length {} but the entry says {}", chain.steps.len(), entry.chain_length)
        });
        let by_chain = solve_chain(ep.phi(), &chain, cfg)?;
        let brute = ep_solve_brute(&ep, cfg)?;
        let want = entry.expected == Expected::Yes;
        if entry.expected != Expected::Unknown {
            t.check(brute.solution.is_some() == want, || "brute-force verdict differs from the entry".into());
        }
        t.check(by_chain.is_some() == brute.solution.is_some(), || "kernel chain and brute force disagree".into());
        for s in by_chain.iter().chain(brute.solution.iter()) {
            t.check(ep.is_solution(&s.gamma), || "returned map is not a solution".into());
        }
        if ep.is_rigid() {
            let pb = ep_pullback_to_id(&ep)?;
            t.check(pb.id_ep.alpha().is_rigid().holds, || "pulled-back map is not rigid".into());
            let id_sol = ep_solve_brute(&pb.id_ep, cfg)?.solution;
            t.check(id_sol.is_some() == brute.solution.is_some(), || "pulled-back problem changes solvability".into());
            if let Some(s) = id_sol {
                t.check(ep.is_solution(&pb.transport(&s).gamma), || "transported solution fails".into());
            }
        }
        Ok(())
    })();
    t.absorb(r, "embedding problem");
    t.row(
        "eps",
        entry.name.clone(),
        format!(
            "solvable: {}",
            verdict_word(match entry.expected {
                Expected::Yes => Some(true),
                Expected::No => Some(false),
                Expected::Unknown => None,
            })
        ),
    )
}

fn scalar(p: u32, n: usize, c: usize) -> FpMatrix {
    FpMatrix::identity(p, n).scaled((c % p as usize) as u8)
}

fn invariant_rows(name: &str, pile: &Arc<Pile>, primes: &[u32], cfg: &Config) -> Vec<CheckRow> {
    let mut homol = Tally::default();
    let mut eps = Tally::default();
    let g = pile.group();
    for &p in primes {
        let r = (|| -> Result<()> {
            for m in simple_modules(g, p, cfg)? {
                let dual = m.dual();
                let (mut hdims, mut cdims) = (Vec::new(), Vec::new());
                for i in 0..=2 {
                    let c = cohomology(&m, i, cfg)?.dim();
                    hdims.push(homology(&m, i, cfg)?.dim());
                    cdims.push(c);
                    let hd = homology(&dual, i, cfg)?.dim();
                    homol.check(c == hd, || format!("p={p}: dim H^{i}(M) != dim H_{i}(M*)"));
                    for &t in pile.orbit_reps() {
                        let s = shapiro(pile, t, &m, i, cfg)?;
                        let local = s.psi.cols();
                        homol.check(s.psi.rows() == local, || format!("p={p}: Shapiro dims differ at point {t}"));
                        homol.check(s.cor.mul(&s.phi) == s.epsilon, || format!("p={p}: Shapiro square at point {t}"));
                        let h = pile.stabilizer(t);
                        let index = g.order() / h.order();
                        let res = restriction(&m, h, i, cfg)?;
                        let cor = corestriction(&m, h, i, cfg)?;
                        let n = cohomology(&m, i, cfg)?.dim();
                        homol.check(cor.mul(&res) == scalar(p, n, index), || format!("p={p}: Cor∘Res at point {t}"));
                    }
                }
                if let (Some(hc), Some(cc)) = (cyclic_homology_dims(&m), cyclic_cohomology_dims(&m)) {
                    homol
                        .check(hc[..] == hdims[..] && cc[..] == cdims[..], || format!("p={p}: cyclic resolution dims"));
                }
                for e in rigid_idep_enumerate(pile, &m, cfg)? {
                    let split = is_split(&e.extension.alpha, cfg)?.is_some();
                    eps.check(split == is_zero(&e.beta), || format!("p={p}: is_split against the extension class"));
                    let lin = ep_solve_linear(&e.ep, cfg)?;
                    let brute = ep_solve_brute(&e.ep, cfg)?;
                    eps.check(lin.is_some() == brute.solution.is_some(), || format!("p={p}: linear and brute solvers"));
                    if let Some(s) = lin {
                        eps.check(e.ep.is_solution(&s.gamma), || format!("p={p}: linear solution fails"));
                    }
                }
            }
            Ok(())
        })();
        homol.absorb(r, "homology");
    }
    vec![
        homol.row("homology", name.to_string(), "duality, Shapiro, transfer, cyclic".into()),
        eps.row("id-eps", name.to_string(), "split test, linear vs brute".into()),
    ]
}

fn simples_row(name: &str, g: &Arc<FiniteGroup>, primes: &[u32], cfg: &Config) -> CheckRow {
    let mut t = Tally::default();
    let mut counts = Vec::new();
    for &p in primes {
        let r = (|| -> Result<()> {
            let fast = simple_modules(g, p, cfg)?;
            let slow = simple_modules_bruteforce(g, p, cfg)?;
            t.check(fast.len() == slow.len(), || {
                format!("p={p}: {} simples vs {} by brute force", fast.len(), slow.len())
            });
            for m in &slow {
                t.check(find_isomorphic(&fast, m)?.is_some(), || format!("p={p}: brute-force simple missing"));
            }
            counts.push(format!("p={p}: {}", fast.len()));
            Ok(())
        })();
        t.absorb(r, "simples");
    }
    t.row("simples", name.to_string(), counts.join(", "))
}

/// Loads the corpus at `dir` and runs every suite against it.
pub fn run_selftest(dir: &Path, cfg: &Config) -> Result<SelftestReport> {
    let corpus = load_corpus(dir)?;
    let mut rows = Vec::new();
    let mut groups: Vec<(String, Arc<FiniteGroup>)> = Vec::new();
    let mut invariants = Vec::new();
    for (_, entry) in &corpus.piles {
        let pile = pile_from_json(&entry.pile, cfg)?;
        rows.push(corpus_row(entry, &pile, cfg));
        let primes = entry.primes.clone().unwrap_or_else(|| pile.group().prime_divisors());
        invariants.extend(invariant_rows(&entry.name, &pile, &primes, cfg));
        if !groups.iter().any(|(_, g)| g.same_table(pile.group())) {
            groups.push((entry.name.clone(), pile.group().clone()));
        }
    }
    for (_, entry) in &corpus.eps {
        rows.push(ep_row(entry, cfg));
    }
    rows.extend(invariants);
    for (name, g) in &groups {
        rows.push(simples_row(name, g, &[2, 3], cfg));
    }
    Ok(SelftestReport { seed: cfg.seed, rows })
}
