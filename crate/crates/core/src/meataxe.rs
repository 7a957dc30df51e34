//! Simple 𝔽_pG-modules by chopping the regular module.
//!
//! The randomized chop follows the usual MeatAxe pattern: take a random
//! element `a` of the group algebra, a smallest irreducible factor `f` of its
//! characteristic polynomial, and spin a null vector of `f(a)`. When the null
//! space has dimension `deg f`, Norton's test on the transposed action decides
//! irreducibility outright.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::poly::{charpoly, smallest_irreducible_factor};
use crate::linalg::{self, Echelon, FpMatrix, SubspaceBasis};
use crate::module::{module_iso_test, FpModule};

/// Lines (1-dimensional subspaces) beyond which brute force refuses to run.
const BRUTE_LINE_LIMIT: u64 = 1_000_000;

fn spin_with(p: u32, dim: usize, mats: &[FpMatrix], seed: Vec<u8>) -> Echelon {
    let mut ech = Echelon::new(p, dim);
    let mut queue = Vec::new();
    if let Ok(j) = ech.insert(seed) {
        queue.push(ech.row(j));
    }
    while let Some(v) = queue.pop() {
        if ech.rank() == dim {
            break;
        }
        for m in mats {
            if let Ok(j) = ech.insert(m.mul_vec(&v)) {
                queue.push(ech.row(j));
            }
        }
    }
    ech
}

fn random_algebra_element<R: Rng>(m: &FpModule, rng: &mut R) -> FpMatrix {
    let p = m.p();
    let mut a = FpMatrix::zeros(p, m.dim(), m.dim());
    for g in m.group().elements() {
        let c = rng.gen_range(0..p) as u8;
        if c != 0 {
            a = a.add(&m.matrix(g).scaled(c));
        }
    }
    a
}

/// A proper nonzero submodule, or `None` when the module is irreducible.
pub fn find_proper_submodule<R: Rng>(m: &FpModule, retries: usize, rng: &mut R) -> Result<Option<SubspaceBasis>> {
    let (p, dim) = (m.p(), m.dim());
    if dim <= 1 {
        return Ok(None);
    }
    let gens = m.gen_matrices();
    let transposed: Vec<FpMatrix> = gens.iter().map(FpMatrix::transpose).collect();
    for _ in 0..retries {
        let a = random_algebra_element(m, rng);
        let f = smallest_irreducible_factor(&charpoly(&a), rng);
        let fa = f.eval_matrix(&a);
        let null = linalg::right_kernel(&fa);
        let w = spin_with(p, dim, gens, null[0].clone());
        if w.rank() < dim {
            return Ok(Some(w.rref_basis()));
        }
        if null.len() == f.degree().unwrap() {
            let nt = linalg::right_kernel(&fa.transpose());
            let wt = spin_with(p, dim, &transposed, nt[0].clone());
            if wt.rank() == dim {
                return Ok(None);
            }
            let ann = FpMatrix::from_rows_with_cols(p, dim, wt.rows());
            return Ok(Some(linalg::kernel_basis(&ann)));
        }
    }
    Err(Error::ChopFailure { dim, retries })
}

fn brute_force_allowed(m: &FpModule, cfg: &Config) -> bool {
    let lines = line_count(m.p(), m.dim());
    lines <= BRUTE_LINE_LIMIT || (m.dim() <= cfg.certification_dim && lines <= 100 * BRUTE_LINE_LIMIT)
}

fn line_count(p: u32, dim: usize) -> u64 {
    let total = (p as u64).checked_pow(dim as u32).unwrap_or(u64::MAX);
    (total - 1) / (p as u64 - 1)
}

/// Every vector whose first nonzero coordinate is 1, in lexicographic order.
fn lines(p: u32, dim: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..dim).flat_map(move |lead| {
        let tail = dim - lead - 1;
        let count = (p as u64).pow(tail as u32);
        (0..count).map(move |mut code| {
            let mut v = vec![0u8; dim];
            v[lead] = 1;
            for x in v[lead + 1..].iter_mut().rev() {
                *x = (code % p as u64) as u8;
                code /= p as u64;
            }
            v
        })
    })
}

/// No line spins to a proper submodule (checked on the module and its dual).
pub fn is_irreducible_bruteforce(m: &FpModule) -> Result<bool> {
    is_irreducible_bruteforce_with(m, &Config::default())
}

pub fn is_irreducible_bruteforce_with(m: &FpModule, cfg: &Config) -> Result<bool> {
    if m.dim() == 0 {
        return Ok(false);
    }
    if !brute_force_allowed(m, cfg) {
        return Err(Error::TooLarge { dim: m.dim(), p: m.p() });
    }
    for module in [m.clone(), m.dual()] {
        for v in lines(module.p(), module.dim()) {
            if module.spin(&[v]).rank() < module.dim() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Composition factors by the randomized chop, each certified by brute force when small.
pub fn composition_factors<R: Rng>(m: &FpModule, cfg: &Config, rng: &mut R) -> Result<Vec<FpModule>> {
    match find_proper_submodule(m, cfg.chop_retries, rng)? {
        None => {
            if m.dim() <= cfg.certification_dim
                && brute_force_allowed(m, cfg)
                && !is_irreducible_bruteforce_with(m, cfg)?
            {
                return Err(Error::Internal(format!("chop accepted a reducible module of dimension {}", m.dim())));
            }
            Ok(vec![m.clone()])
        }
        Some(w) => {
            let mut out = composition_factors(&m.submodule(&w)?, cfg, rng)?;
            out.extend(composition_factors(&m.quotient(&w)?, cfg, rng)?);
            Ok(out)
        }
    }
}

/// Composition factors by exhaustive line spinning: a line whose spin has minimal
/// dimension generates a simple submodule.
pub fn composition_factors_bruteforce(m: &FpModule, cfg: &Config) -> Result<Vec<FpModule>> {
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    if !brute_force_allowed(m, cfg) {
        return Err(Error::TooLarge { dim: m.dim(), p: m.p() });
    }
    let mut best: Option<Echelon> = None;
    for v in lines(m.p(), m.dim()) {
        let w = m.spin(&[v]);
        if best.as_ref().is_none_or(|b| w.rank() < b.rank()) {
            let done = w.rank() == 1;
            best = Some(w);
            if done {
                break;
            }
        }
    }
    let w = best.unwrap().rref_basis();
    let mut out = vec![m.submodule(&w)?];
    if w.dim() < m.dim() {
        out.extend(composition_factors_bruteforce(&m.quotient(&w)?, cfg)?);
    }
    Ok(out)
}

/// Isomorphism-class representatives, sorted by `(dim, rank profile)`.
fn dedupe(factors: Vec<FpModule>) -> Result<Vec<FpModule>> {
    let mut keyed: Vec<((usize, Vec<u32>), FpModule)> = factors.into_iter().map(|m| (m.sort_key(), m)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<((usize, Vec<u32>), FpModule)> = Vec::new();
    for (key, m) in keyed {
        let mut seen = false;
        for (k2, m2) in out.iter().rev() {
            if *k2 != key {
                break;
            }
            if module_iso_test(&m, m2)?.is_some() {
                seen = true;
                break;
            }
        }
        if !seen {
            out.push((key, m));
        }
    }
    Ok(out.into_iter().map(|(_, m)| m).collect())
}

/// Every simple 𝔽_pG-module exactly once up to isomorphism, in canonical order.
pub fn simple_modules(g: &Arc<FiniteGroup>, p: u32, cfg: &Config) -> Result<Vec<FpModule>> {
    linalg::check_prime(p)?;
    if g.order() > cfg.group_order_cap {
        return Err(Error::GroupTooLarge { cap: cfg.group_order_cap });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let reg = FpModule::regular(g.clone(), p);
    dedupe(composition_factors(&reg, cfg, &mut rng)?)
}

/// The same list computed by brute-force chopping of the regular module.
pub fn simple_modules_bruteforce(g: &Arc<FiniteGroup>, p: u32, cfg: &Config) -> Result<Vec<FpModule>> {
    linalg::check_prime(p)?;
    let reg = FpModule::regular(g.clone(), p);
    dedupe(composition_factors_bruteforce(&reg, cfg)?)
}

/// Position in `list` of a module isomorphic to `m`.
pub fn find_isomorphic(list: &[FpModule], m: &FpModule) -> Result<Option<usize>> {
    for (i, x) in list.iter().enumerate() {
        if x.dim() == m.dim() && module_iso_test(x, m)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
