//! Three independent verdicts on π-projectivity of a finite pile, cross-checked.
//!
//! * homological: `κ₁` injective and `κ₂` surjective at every simple module;
//! * dual: `∩_t ker Res²_t = 0` and the joint `Res¹` onto `⊕_t H¹(G_t, M)` is surjective;
//! * oracle: every enumerated rigid id-EP with kernel `M` is solved by brute force.
//!
//! Linear duality pairs `κ_i` at `M*` with the restriction maps at `M`, and the oracle at `M`
//! with the dual route at `M`; every such pair is compared and a mismatch is an error.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Config;
use crate::ep::{ep_solve_brute, joint_restriction, rigid_idep_enumerate};
use crate::error::{Error, Result};
use crate::homology::{cohomology, kappa_maps, KappaPair};
use crate::json::{ep_to_json, SCHEMA};
use crate::linalg::{self, Echelon, FpMatrix};
use crate::meataxe::{find_isomorphic, simple_modules};
use crate::module::{unit, FpModule};
use crate::pile::Pile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Homological,
    Dual,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouteSet {
    pub homological: bool,
    pub dual: bool,
    pub oracle: bool,
}

impl RouteSet {
    pub const ALL: RouteSet = RouteSet { homological: true, dual: true, oracle: true };

    pub fn only(r: Route) -> RouteSet {
        RouteSet { homological: r == Route::Homological, dual: r == Route::Dual, oracle: r == Route::Oracle }
    }
}

impl FromStr for RouteSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(RouteSet::ALL),
            "homological" => Ok(RouteSet::only(Route::Homological)),
            "dual" => Ok(RouteSet::only(Route::Dual)),
            "oracle" => Ok(RouteSet::only(Route::Oracle)),
            other => Err(Error::Schema(format!("unknown route {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    /// `None`: the primes dividing the group order.
    pub primes: Option<Vec<u32>>,
    pub routes: RouteSet,
    pub timings: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { primes: None, routes: RouteSet::ALL, timings: false }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModuleRecord {
    pub p: u32,
    /// Position in the canonical list of simple modules at `p`.
    pub module: usize,
    pub module_fingerprint: String,
    pub dim: usize,
    /// Position of `M*` in the same list.
    pub dual_module: usize,
    pub kappa1_injective: Option<bool>,
    pub kappa2_surjective: Option<bool>,
    /// `κ₁`, `κ₂` verdicts at `M*` (the labeling paired with the dual route at `M`).
    pub kappa1_injective_at_dual: Option<bool>,
    pub kappa2_surjective_at_dual: Option<bool>,
    pub dual_res2_trivial_intersection: Option<bool>,
    pub dual_res1_surjective: Option<bool>,
    pub dual_ok: Option<bool>,
    pub oracle_ok: Option<bool>,
    pub oracle_problems: Option<usize>,
    pub witness: Value,
}

impl ModuleRecord {
    pub fn homological_ok(&self) -> Option<bool> {
        Some(self.kappa1_injective? && self.kappa2_surjective?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub homological: Option<bool>,
    pub dual: Option<bool>,
    pub oracle: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FirstFailure {
    pub route: Route,
    pub p: u32,
    pub module: usize,
    pub module_fingerprint: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub pile: String,
    pub group_order: usize,
    pub points: usize,
    pub primes: Vec<u32>,
    pub records: Vec<ModuleRecord>,
    pub verdicts: Verdicts,
    pub agree: bool,
    pub first_failure: Vec<FirstFailure>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    /// The common verdict of the routes that ran (`None` if none ran).
    pub fn projective(&self) -> Option<bool> {
        let v = &self.verdicts;
        v.homological.or(v.dual).or(v.oracle)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

struct Timer {
    on: bool,
    map: BTreeMap<String, u64>,
}

impl Timer {
    fn time<T>(&mut self, key: String, f: impl FnOnce() -> T) -> T {
        if !self.on {
            return f();
        }
        let start = Instant::now();
        let out = f();
        self.map.insert(key, start.elapsed().as_millis() as u64);
        out
    }
}

/// Coordinates of a class missing from the column span of `m` (rows = target dimension).
fn missing_from_image(m: &FpMatrix) -> Option<Vec<u8>> {
    let span = Echelon::from_rows(m.p(), m.rows(), m.transpose().rows_iter());
    (0..m.rows()).map(|i| unit(m.rows(), i)).find(|v| !span.contains(v))
}

fn homological_witness(k: &KappaPair) -> Value {
    if !k.kappa1_injective {
        let v = linalg::right_kernel(&k.kappa1).remove(0);
        return json!({"route": "homological", "kind": "kappa1_kernel_vector", "block_dims": k.block_dims[0], "vector": v});
    }
    if !k.kappa2_surjective {
        let v = missing_from_image(&k.kappa2).expect("non-surjective map misses a unit vector");
        return json!({"route": "homological", "kind": "kappa2_missing_class", "h2_class": v});
    }
    Value::Null
}

struct DualResult {
    res2_trivial: bool,
    res1_surjective: bool,
    witness: Value,
}

fn dual_route(pile: &Pile, m: &FpModule, cfg: &Config) -> Result<DualResult> {
    let (res2, _) = joint_restriction(pile, m, 2, cfg)?;
    let (res1, dims1) = joint_restriction(pile, m, 1, cfg)?;
    let kernel = linalg::right_kernel(&res2);
    let res2_trivial = kernel.is_empty();
    let res1_surjective = res1.rank() == res1.rows();
    let witness = if !res2_trivial {
        let h2 = cohomology(m, 2, cfg)?;
        json!({"route": "dual", "kind": "nonsplit_admissible_class", "h2_class": kernel[0], "cocycle": h2.lift(&kernel[0])})
    } else if !res1_surjective {
        let fam = missing_from_image(&res1).expect("non-surjective map misses a unit vector");
        json!({"route": "dual", "kind": "non_extendable_derivation_family", "h1_dims": dims1, "family": fam})
    } else {
        Value::Null
    };
    Ok(DualResult { res2_trivial, res1_surjective, witness })
}

fn oracle_route(pile: &Arc<Pile>, m: &FpModule, cfg: &Config) -> Result<(bool, usize, Value)> {
    let eps = rigid_idep_enumerate(pile, m, cfg)?;
    let n = eps.len();
    for e in &eps {
        if ep_solve_brute(&e.ep, cfg)?.solution.is_none() {
            let w = json!({
                "route": "oracle",
                "kind": "unsolvable_embedding_problem",
                "beta": e.beta,
                "beta_t": e.beta_t,
                "embedding_problem": ep_to_json(&e.ep),
            });
            return Ok((false, n, w));
        }
    }
    Ok((true, n, Value::Null))
}

struct Task {
    p: u32,
    index: usize,
    dual_index: usize,
    module: FpModule,
}

fn evaluate(
    pile: &Arc<Pile>,
    task: &Task,
    routes: RouteSet,
    cfg: &Config,
    timings: bool,
) -> Result<(ModuleRecord, BTreeMap<String, u64>)> {
    let m = &task.module;
    let mut timer = Timer { on: timings, map: BTreeMap::new() };
    let tag = format!("p{}/m{}", task.p, task.index);
    let mut witness = serde_json::Map::new();
    let mut rec = ModuleRecord {
        p: task.p,
        module: task.index,
        module_fingerprint: m.fingerprint(),
        dim: m.dim(),
        dual_module: task.dual_index,
        kappa1_injective: None,
        kappa2_surjective: None,
        kappa1_injective_at_dual: None,
        kappa2_surjective_at_dual: None,
        dual_res2_trivial_intersection: None,
        dual_res1_surjective: None,
        dual_ok: None,
        oracle_ok: None,
        oracle_problems: None,
        witness: Value::Null,
    };
    if routes.homological {
        let k = timer.time(format!("{tag}/homological"), || kappa_maps(pile, m, cfg))?;
        rec.kappa1_injective = Some(k.kappa1_injective);
        rec.kappa2_surjective = Some(k.kappa2_surjective);
        let w = homological_witness(&k);
        if !w.is_null() {
            witness.insert("homological".into(), w);
        }
    }
    if routes.dual {
        let d = timer.time(format!("{tag}/dual"), || dual_route(pile, m, cfg))?;
        rec.dual_res2_trivial_intersection = Some(d.res2_trivial);
        rec.dual_res1_surjective = Some(d.res1_surjective);
        rec.dual_ok = Some(d.res2_trivial && d.res1_surjective);
        if !d.witness.is_null() {
            witness.insert("dual".into(), d.witness);
        }
    }
    if routes.oracle {
        let (ok, n, w) = timer.time(format!("{tag}/oracle"), || oracle_route(pile, m, cfg))?;
        rec.oracle_ok = Some(ok);
        rec.oracle_problems = Some(n);
        if !w.is_null() {
            witness.insert("oracle".into(), w);
        }
    }
    if !witness.is_empty() {
        rec.witness = Value::Object(witness);
    }
    Ok((rec, timer.map))
}

fn and_all(mut it: impl Iterator<Item = Option<bool>>) -> Option<bool> {
    it.try_fold(true, |acc, x| Some(acc && x?))
}

/// Run the selected routes on every `(p, M)` and cross-check them.
pub fn analyze(pile: &Arc<Pile>, name: &str, opts: &AnalyzeOptions, cfg: &Config) -> Result<Report> {
    let g = pile.group();
    if g.order() > cfg.group_order_cap {
        return Err(Error::GroupTooLarge { cap: cfg.group_order_cap });
    }
    let mut primes = opts.primes.clone().unwrap_or_else(|| g.prime_divisors());
    primes.sort_unstable();
    primes.dedup();
    for &p in &primes {
        linalg::check_prime(p)?;
    }
    let started = Instant::now();

    let mut tasks = Vec::new();
    for &p in &primes {
        let simples = simple_modules(g, p, cfg)?;
        for (i, m) in simples.iter().enumerate() {
            let j = find_isomorphic(&simples, &m.dual())?
                .ok_or_else(|| Error::Internal(format!("dual of simple module {i} at p = {p} not found")))?;
            tasks.push(Task { p, index: i, dual_index: j, module: m.clone() });
        }
    }
    let results: Vec<Result<(ModuleRecord, BTreeMap<String, u64>)>> =
        tasks.par_iter().map(|t| evaluate(pile, t, opts.routes, cfg, opts.timings)).collect();
    let mut records = Vec::with_capacity(results.len());
    let mut timings_ms = BTreeMap::new();
    for r in results {
        let (rec, t) = r?;
        records.push(rec);
        timings_ms.extend(t);
    }

    // Pair κ at M* with the dual route at M.
    let lookup: BTreeMap<(u32, usize), usize> = records.iter().enumerate().map(|(k, r)| ((r.p, r.module), k)).collect();
    for k in 0..records.len() {
        let d = lookup[&(records[k].p, records[k].dual_module)];
        records[k].kappa1_injective_at_dual = records[d].kappa1_injective;
        records[k].kappa2_surjective_at_dual = records[d].kappa2_surjective;
    }

    let verdicts = Verdicts {
        homological: if opts.routes.homological { and_all(records.iter().map(|r| r.homological_ok())) } else { None },
        dual: if opts.routes.dual { and_all(records.iter().map(|r| r.dual_ok)) } else { None },
        oracle: if opts.routes.oracle { and_all(records.iter().map(|r| r.oracle_ok)) } else { None },
    };
    let mut first_failure = Vec::new();
    for (route, get) in [
        (Route::Homological, ModuleRecord::homological_ok as fn(&ModuleRecord) -> Option<bool>),
        (Route::Dual, |r: &ModuleRecord| r.dual_ok),
        (Route::Oracle, |r: &ModuleRecord| r.oracle_ok),
    ] {
        if let Some(r) = records.iter().find(|r| get(r) == Some(false)) {
            first_failure.push(FirstFailure {
                route,
                p: r.p,
                module: r.module,
                module_fingerprint: r.module_fingerprint.clone(),
            });
        }
    }

    let mismatch = records
        .iter()
        .map(|r| (r.p, r.module))
        .zip(records.iter())
        .find(|(_, r)| {
            let pair = |a: Option<bool>, b: Option<bool>| matches!((a, b), (Some(x), Some(y)) if x != y);
            pair(r.kappa2_surjective_at_dual, r.dual_res2_trivial_intersection)
                || pair(r.kappa1_injective_at_dual, r.dual_res1_surjective)
                || pair(r.oracle_ok, r.dual_ok)
                || pair(r.oracle_ok, r.kappa1_injective_at_dual.zip(r.kappa2_surjective_at_dual).map(|(a, b)| a && b))
        })
        .map(|(key, _)| key);
    let outcomes: Vec<bool> = [verdicts.homological, verdicts.dual, verdicts.oracle].into_iter().flatten().collect();
    let agree = mismatch.is_none() && outcomes.windows(2).all(|w| w[0] == w[1]);
    if opts.timings {
        timings_ms.insert("total".into(), started.elapsed().as_millis() as u64);
    }
    let report = Report {
        schema: SCHEMA,
        pile: name.to_string(),
        group_order: g.order(),
        points: pile.points(),
        primes,
        records,
        verdicts,
        agree,
        first_failure,
        timings_ms,
    };
    if !agree {
        let (p, module) = mismatch.unwrap_or((0, 0));
        return Err(Error::RouteDisagreement { p, module, report: Box::new(report.to_json()) });
    }
    Ok(report)
}

#[cfg(test)]
mod tests;
