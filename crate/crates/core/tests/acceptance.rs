//! End-to-end acceptance run over the shipped corpus.
//!
//! Prints one line per criterion and exits nonzero if any criterion fails.
//! Every comparison is exact; the only tolerance is the runtime bound of criterion 1.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use pilelab::checker::{analyze, AnalyzeOptions};
use pilelab::config::Config;
use pilelab::ep::{
    all_vectors, ep_pullback_to_id, ep_solve_brute, ep_solve_linear, ep_validate, rigid_idep_enumerate,
    EmbeddingProblem,
};
use pilelab::group::{FiniteGroup, GroupHom};
use pilelab::homology::transfer::restrict_module;
use pilelab::homology::{
    cohomology, corestriction, cyclic_cohomology_dims, cyclic_homology_dims, homology, is_split, kappa_maps,
    restriction, shapiro,
};
use pilelab::json::{ep_from_json, load_corpus, pile_from_json, to_pretty, Expected};
use pilelab::linalg::{is_zero, FpMatrix};
use pilelab::meataxe::{find_isomorphic, simple_modules, simple_modules_bruteforce};
use pilelab::module::{orbit_module, permutation_module, FpModule};
use pilelab::pile::{Pile, PileMorphism};
use pilelab::selftest::run_selftest;

const RUNTIME_LIMIT: Duration = Duration::from_secs(300);
const MAX_GROUP_ORDER: usize = 24;
const MAX_POINTS: usize = 12;

struct Case {
    name: String,
    pile: Arc<Pile>,
    primes: Vec<u32>,
    expected: Expected,
}

struct Corpus {
    dir: PathBuf,
    cases: Vec<Case>,
    eps: Vec<(String, EmbeddingProblem, Expected)>,
}

fn load(cfg: &Config) -> Corpus {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let raw = load_corpus(&dir).expect("corpus loads");
    let cases = raw
        .piles
        .iter()
        .map(|(_, e)| {
            let pile = pile_from_json(&e.pile, cfg).expect("corpus pile parses");
            let primes = e.primes.clone().unwrap_or_else(|| pile.group().prime_divisors());
            Case { name: e.name.clone(), pile, primes, expected: e.expected }
        })
        .collect();
    let eps = raw
        .eps
        .iter()
        .map(|(_, e)| (e.name.clone(), ep_from_json(&e.ep, cfg).expect("corpus ep parses"), e.expected))
        .collect();
    Corpus { dir, cases, eps }
}

/// Outcome of one criterion: number of exact comparisons and the mismatches found.
#[derive(Default)]
struct Outcome {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }
}

fn simples(g: &Arc<FiniteGroup>, p: u32, cfg: &Config) -> Vec<FpModule> {
    simple_modules(g, p, cfg).expect("simple modules")
}

fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
    a.same_table(b)
}

/// Distinct groups of the pile corpus, with the name of their first pile.
fn corpus_groups(c: &Corpus) -> Vec<(String, Arc<FiniteGroup>)> {
    let mut out: Vec<(String, Arc<FiniteGroup>)> = Vec::new();
    let all = c
        .cases
        .iter()
        .map(|k| (k.name.clone(), k.pile.group().clone()))
        .chain(c.eps.iter().map(|(n, ep, _)| (n.clone(), ep.mid().group().clone())));
    for (name, g) in all {
        if !out.iter().any(|(_, h)| same_group(h, &g)) {
            out.push((name, g));
        }
    }
    out
}

/// Simple modules, permutation modules and their tensor products with simples.
fn corpus_modules(c: &Corpus, g: &Arc<FiniteGroup>, p: u32, cfg: &Config) -> Vec<FpModule> {
    let s = simples(g, p, cfg);
    let mut out = s.clone();
    for case in c.cases.iter().filter(|k| same_group(k.pile.group(), g) && k.primes.contains(&p)) {
        let perm = permutation_module(&case.pile, p).module;
        for m in &s {
            out.push(perm.tensor(m).expect("tensor"));
        }
    }
    out
}

fn criterion_1(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    let start = Instant::now();
    o.check(c.cases.len() >= 12, || format!("only {} corpus piles", c.cases.len()));
    for k in &c.cases {
        let g = k.pile.group().order();
        o.check(g <= MAX_GROUP_ORDER && k.pile.points() <= MAX_POINTS, || format!("{}: outside desk scale", k.name));
        o.check(k.primes.iter().all(|p| [2, 3].contains(p)), || format!("{}: primes outside {{2, 3}}", k.name));
        let opts = AnalyzeOptions { primes: Some(k.primes.clone()), ..AnalyzeOptions::default() };
        match analyze(&k.pile, &k.name, &opts, cfg) {
            Ok(r) => {
                let v = &r.verdicts;
                o.check(v.homological.is_some() && v.homological == v.dual && v.dual == v.oracle, || {
                    format!("{}: verdicts {:?} {:?} {:?}", k.name, v.homological, v.dual, v.oracle)
                });
                let want = match k.expected {
                    Expected::Yes => Some(true),
                    Expected::No => Some(false),
                    Expected::Unknown => v.homological,
                };
                o.check(want == v.homological, || format!("{}: corpus expectation differs", k.name));
            }
            Err(e) => o.error(format!("{}: {e}", k.name)),
        }
    }
    let elapsed = start.elapsed();
    o.check(elapsed < RUNTIME_LIMIT, || format!("runtime {elapsed:?} exceeds {RUNTIME_LIMIT:?}"));
    o.notes.push(format!(
        "{} piles, runtime {:.2}s (limit {}s)",
        c.cases.len(),
        elapsed.as_secs_f64(),
        RUNTIME_LIMIT.as_secs()
    ));
    o
}

fn criterion_2(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    let mut problems = 0;
    let mut classes = 0;
    for k in &c.cases {
        for &p in &k.primes {
            for m in simples(k.pile.group(), p, cfg) {
                let eps = match rigid_idep_enumerate(&k.pile, &m, cfg) {
                    Ok(e) => e,
                    Err(e) => {
                        o.error(format!("{} p={p}: {e}", k.name));
                        continue;
                    }
                };
                for e in &eps {
                    problems += 1;
                    let split = is_split(&e.extension.alpha, cfg).expect("split test").is_some();
                    o.check(split == is_zero(&e.beta), || format!("{} p={p}: split test vs class", k.name));
                }

                let h2 = cohomology(&m, 2, cfg).expect("H^2").dim();
                let res: Vec<FpMatrix> = k
                    .pile
                    .orbit_reps()
                    .iter()
                    .map(|&t| restriction(&m, k.pile.stabilizer(t), 2, cfg).expect("restriction"))
                    .collect();
                let mut only_zero = true;
                for beta in all_vectors(p, h2) {
                    classes += 1;
                    if !is_zero(&beta) && res.iter().all(|r| is_zero(&r.mul_vec(&beta))) {
                        only_zero = false;
                    }
                }
                let surj = kappa_maps(&k.pile, &m.dual(), cfg).expect("kappa").kappa2_surjective;
                o.check(surj == only_zero, || format!("{} p={p}: kappa2 at M* vs restriction kernel at M", k.name));
            }
        }
    }
    o.notes.push(format!("{problems} enumerated id-EPs, {classes} H^2 classes"));
    o
}

fn criterion_3(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    let (mut split, mut total) = (0, 0);
    for k in &c.cases {
        for &p in &k.primes {
            for m in simples(k.pile.group(), p, cfg) {
                for e in rigid_idep_enumerate(&k.pile, &m, cfg).expect("enumeration") {
                    total += 1;
                    if is_zero(&e.beta) {
                        split += 1;
                    }
                    let lin = ep_solve_linear(&e.ep, cfg);
                    let brute = ep_solve_brute(&e.ep, cfg);
                    match (lin, brute) {
                        (Ok(lin), Ok(brute)) => {
                            o.check(lin.is_some() == brute.solution.is_some(), || {
                                format!(
                                    "{} p={p}: linear {} vs brute {}",
                                    k.name,
                                    lin.is_some(),
                                    brute.solution.is_some()
                                )
                            });
                            if let Some(s) = lin {
                                o.check(e.ep.is_solution(&s.gamma), || {
                                    format!("{} p={p}: bad linear solution", k.name)
                                });
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => o.error(format!("{} p={p}: {e}", k.name)),
                    }
                }
            }
        }
    }
    o.notes.push(format!("{total} id-EPs ({split} with split extension)"));
    o
}

fn criterion_4(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    for k in &c.cases {
        let pile = &k.pile;
        for &p in &k.primes {
            for m in simples(pile.group(), p, cfg) {
                for (orbit, &t) in pile.orbit_reps().iter().enumerate() {
                    let induced = orbit_module(pile, orbit, p).tensor(&m).expect("tensor");
                    let (local, _) = restrict_module(&m, pile.stabilizer(t)).expect("restrict");
                    for i in 0..=2 {
                        let a = homology(&induced, i, cfg).expect("induced").dim();
                        let b = homology(&local, i, cfg).expect("local").dim();
                        o.check(a == b, || format!("{} p={p} t={t} i={i}: {a} != {b}", k.name));
                        match shapiro(pile, t, &m, i, cfg) {
                            Ok(s) => o.check(s.cor.mul(&s.phi) == s.epsilon, || {
                                format!("{} p={p} t={t} i={i}: square fails", k.name)
                            }),
                            Err(e) => o.error(format!("{} p={p} t={t} i={i}: {e}", k.name)),
                        }
                    }
                }
            }
        }
    }
    o
}

fn criterion_5(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    let mut groups = 0;
    for (name, g) in corpus_groups(c) {
        if g.cyclic_generator().is_none() {
            continue;
        }
        groups += 1;
        for p in [2, 3] {
            for m in corpus_modules(c, &g, p, cfg) {
                let hc = cyclic_homology_dims(&m).expect("cyclic");
                let cc = cyclic_cohomology_dims(&m).expect("cyclic");
                for i in 0..=2 {
                    let h = homology(&m, i, cfg).expect("homology").dim();
                    let co = cohomology(&m, i, cfg).expect("cohomology").dim();
                    o.check(h == hc[i] && co == cc[i], || format!("{name} p={p} dim {} i={i}", m.dim()));
                }
            }
        }
    }
    o.notes.push(format!("{groups} cyclic groups"));
    o
}

fn criterion_6(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    for (name, g) in corpus_groups(c) {
        for p in [2, 3] {
            for m in corpus_modules(c, &g, p, cfg) {
                let d = m.dual();
                for i in 0..=2 {
                    let a = cohomology(&m, i, cfg).expect("cohomology").dim();
                    let b = homology(&d, i, cfg).expect("homology").dim();
                    o.check(a == b, || format!("{name} p={p} dim {} i={i}: {a} != {b}", m.dim()));
                }
            }
        }
    }
    o
}

fn criterion_7(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    for k in &c.cases {
        let g = k.pile.group();
        for &p in &k.primes {
            for m in simples(g, p, cfg) {
                for &t in k.pile.orbit_reps() {
                    let h = k.pile.stabilizer(t);
                    let index = (g.order() / h.order()) % p as usize;
                    for i in 0..=2 {
                        let n = cohomology(&m, i, cfg).expect("cohomology").dim();
                        let res = restriction(&m, h, i, cfg).expect("res");
                        let cor = corestriction(&m, h, i, cfg).expect("cor");
                        let want = FpMatrix::identity(p, n).scaled(index as u8);
                        o.check(cor.mul(&res) == want, || format!("{} p={p} t={t} i={i}", k.name));
                    }
                }
            }
        }
    }
    o
}

fn criterion_8(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    let mut groups = corpus_groups(c);
    groups.push(("c2".into(), Arc::new(FiniteGroup::cyclic(2))));
    groups.push(("c3".into(), Arc::new(FiniteGroup::cyclic(3))));
    for (name, g) in &groups {
        for p in [2, 3] {
            let fast = simples(g, p, cfg);
            let slow = simple_modules_bruteforce(g, p, cfg).expect("brute-force chop");
            o.check(fast.len() == slow.len(), || format!("{name} p={p}: {} vs {}", fast.len(), slow.len()));
            for m in &slow {
                o.check(find_isomorphic(&fast, m).expect("iso").is_some(), || format!("{name} p={p}: missing simple"));
            }
        }
    }
    for (n, want) in [(3, 2), (2, 1)] {
        let g = Arc::new(FiniteGroup::cyclic(n));
        let fast = simples(&g, 2, cfg).len();
        let slow = simple_modules_bruteforce(&g, 2, cfg).expect("chop").len();
        o.check(fast == want && slow == want, || format!("C{n} p=2: {fast}, {slow}, want {want}"));
        o.notes.push(format!("|simples(C{n}, 2)| = {fast}"));
    }
    o
}

/// `φ: (H, H) -> (A, A)` between regular piles along a surjection `H -> A`.
fn regular_cover(h: &Arc<FiniteGroup>, target: &Arc<Pile>, images: &[usize]) -> Option<PileMorphism> {
    let a = target.group();
    let hom = GroupHom::from_generator_images(h.clone(), a.clone(), images).ok()?;
    let src = Arc::new(Pile::regular(h.clone()));
    let pts = h.elements().map(|x| hom.apply(x)).collect();
    PileMorphism::new(src, target.clone(), hom, pts).ok()
}

fn criterion_9(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    let mut problems: Vec<(String, EmbeddingProblem)> = Vec::new();
    for (name, ep, _) in &c.eps {
        problems.push((name.clone(), ep.clone()));
        let target = ep.target();
        if target.points() != target.group().order() {
            continue;
        }
        let a_gen = target.group().generators().to_vec();
        for n in [2usize, 4, 6] {
            let h = Arc::new(FiniteGroup::cyclic(n));
            if a_gen.len() != 1 || n % target.group().order() != 0 {
                continue;
            }
            if let Some(phi) = regular_cover(&h, target, &a_gen) {
                if let Ok(ep2) = ep_validate(phi, ep.alpha().clone()) {
                    problems.push((format!("{name} under C{n}"), ep2));
                }
            }
        }
    }
    let mut rigid = 0;
    for (name, ep) in &problems {
        if !ep.is_rigid() {
            continue;
        }
        rigid += 1;
        let pb = match ep_pullback_to_id(ep) {
            Ok(pb) => pb,
            Err(e) => {
                o.error(format!("{name}: {e}"));
                continue;
            }
        };
        o.check(pb.id_ep.alpha().is_rigid().holds, || format!("{name}: pulled-back map not rigid"));
        o.check(pb.id_ep.is_id_ep(), || format!("{name}: not an id-EP"));
        let orig = ep_solve_brute(ep, cfg).expect("brute").solution;
        let pulled = ep_solve_brute(&pb.id_ep, cfg).expect("brute").solution;
        o.check(orig.is_some() == pulled.is_some(), || format!("{name}: solvability changes"));
        if let Some(s) = pulled {
            o.check(ep.is_solution(&pb.transport(&s).gamma), || format!("{name}: transported solution fails"));
        }
    }
    o.check(rigid >= c.eps.len(), || "a corpus EP is not rigid".into());
    o.notes.push(format!("{rigid} rigid problems"));
    o
}

fn criterion_10(c: &Corpus, cfg: &Config) -> Outcome {
    let mut o = Outcome::default();
    for k in &c.cases {
        let opts = AnalyzeOptions { primes: Some(k.primes.clone()), ..AnalyzeOptions::default() };
        let a = analyze(&k.pile, &k.name, &opts, cfg).map(|r| to_pretty(&r));
        let b = analyze(&k.pile, &k.name, &opts, cfg).map(|r| to_pretty(&r));
        match (a, b) {
            (Ok(a), Ok(b)) => o.check(a == b, || format!("{}: reports differ", k.name)),
            _ => o.error(format!("{}: analyze failed", k.name)),
        }
    }
    let a = run_selftest(&c.dir, cfg).map(|r| to_pretty(&r));
    let b = run_selftest(&c.dir, cfg).map(|r| to_pretty(&r));
    match (a, b) {
        (Ok(a), Ok(b)) => o.check(a == b, || "selftest reports differ".into()),
        _ => o.error("selftest failed to run".into()),
    }
    o
}

fn main() {
    let cfg = Config::default();
    let corpus = load(&cfg);
    type Criterion = fn(&Corpus, &Config) -> Outcome;
    let criteria: [(&str, Criterion); 10] = [
        ("route agreement", criterion_1),
        ("split test and kappa2 by enumeration", criterion_2),
        ("linear vs brute id-EP solver", criterion_3),
        ("Shapiro dims and square", criterion_4),
        ("bar vs periodic resolution", criterion_5),
        ("cohomology/homology duality", criterion_6),
        ("Cor∘Res = index", criterion_7),
        ("MeatAxe vs brute-force chop", criterion_8),
        ("pull-back rigidity and transport", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run(&corpus, &cfg);
        let ok = o.failures.is_empty();
        if !ok {
            failed += 1;
        }
        let mut line = format!(
            "criterion {:>2} {:<40} {}  {} exact checks, {} mismatches (tolerance 0), {:.2}s",
            i + 1,
            title,
            if ok { "PASS" } else { "FAIL" },
            o.checks,
            o.failures.len(),
            start.elapsed().as_secs_f64(),
        );
        for n in &o.notes {
            line.push_str(&format!("; {n}"));
        }
        println!("{line}");
        for f in o.failures.iter().take(5) {
            println!("    {f}");
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
