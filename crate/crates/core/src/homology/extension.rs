//! Extensions of `G` by an elementary abelian `M` and their 2-cocycles;
//! sections and derivations.

use std::collections::HashMap;
use std::sync::Arc;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::homsearch::homomorphism_search;
use crate::linalg::{self, Echelon, FpMatrix, SubspaceBasis};
use crate::module::FpModule;

use super::{cohomology, Bar, HomologySpace};

/// `B = M × G` with `(m, g)(n, h) = (m + g·n + c(g, h), gh)`.
///
/// The element `(m, g)` has index `g * p^dim + code(m)` where `code(m) = Σ m_j p^j`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub group: Arc<FiniteGroup>,
    pub alpha: GroupHom,
    pub kernel: Subgroup,
    pub module: FpModule,
    q: usize,
}

impl Extension {
    pub fn element(&self, m: &[u8], g: usize) -> usize {
        g * self.q + encode(m, self.module.p())
    }

    /// `(m, g)` for an element of `B`.
    pub fn split(&self, b: usize) -> (Vec<u8>, usize) {
        (decode(b % self.q, self.module.p(), self.module.dim()), b / self.q)
    }
}

fn encode(m: &[u8], p: u32) -> usize {
    m.iter().rev().fold(0, |acc, &x| acc * p as usize + x as usize)
}

fn decode(mut code: usize, p: u32, d: usize) -> Vec<u8> {
    (0..d)
        .map(|_| {
            let x = (code % p as usize) as u8;
            code /= p as usize;
            x
        })
        .collect()
}

/// The full value `c(g, h)` of a normalized 2-cochain.
fn cocycle_value(bar: &Bar<'_>, c: &[u8], g: usize, h: usize) -> Vec<u8> {
    if g == 0 || h == 0 {
        vec![0u8; bar.d]
    } else {
        bar.block(c, &[g, h]).to_vec()
    }
}

/// First triple where the 2-cocycle identity fails, if any.
pub fn cocycle_violation(module: &FpModule, c: &[u8]) -> Option<(usize, usize, usize)> {
    let bar = Bar::new(module);
    let dc = bar.coboundary(2, c);
    let d = module.dim();
    (0..bar.tuples(3)).find(|&t| !linalg::is_zero(&dc[t * d..(t + 1) * d])).map(|t| {
        let g = bar.decode(t, 3);
        (g[0], g[1], g[2])
    })
}

pub fn extension_from_cocycle(module: &FpModule, c: &[u8], cfg: &Config) -> Result<Extension> {
    let bar = Bar::new(module);
    if c.len() != bar.dim(2) {
        return Err(Error::DimensionMismatch { expected: bar.dim(2), got: c.len() });
    }
    if let Some((g, h, k)) = cocycle_violation(module, c) {
        return Err(Error::NotACocycle(g, h, k));
    }
    let grp = module.group();
    let (p, d, n) = (module.p(), module.dim(), grp.order());
    let q = (p as usize).checked_pow(d as u32).unwrap_or(usize::MAX);
    let size = q.saturating_mul(n);
    if size > cfg.group_order_cap {
        return Err(Error::GroupTooLarge { cap: cfg.group_order_cap });
    }
    let codes: Vec<Vec<u8>> = (0..q).map(|x| decode(x, p, d)).collect();
    let moved: Vec<Vec<usize>> =
        grp.elements().map(|g| codes.iter().map(|m| encode(&module.act(g, m), p)).collect()).collect();
    let cval: Vec<Vec<u8>> = (0..n * n).map(|i| cocycle_value(&bar, c, i / n, i % n)).collect();
    let mut table = vec![0u32; size * size];
    for a in 0..size {
        let (m, g) = (&codes[a % q], a / q);
        for b in 0..size {
            let h = b / q;
            let gn = &codes[moved[g][b % q]];
            let cg = &cval[g * n + h];
            let sum: Vec<u8> = (0..d).map(|j| linalg::add(linalg::add(m[j], gn[j], p), cg[j], p)).collect();
            table[a * size + b] = (grp.mul(g, h) * q + encode(&sum, p)) as u32;
        }
    }
    let mut gens: Vec<usize> = grp.generators().iter().map(|&s| s * q).collect();
    gens.extend((0..d).map(|j| p.pow(j as u32) as usize));
    let group = Arc::new(FiniteGroup::from_table(size, table, Some(gens), None)?);
    let alpha = GroupHom::new_unchecked(group.clone(), grp.clone(), (0..size).map(|b| b / q).collect());
    let kernel = alpha.kernel();
    Ok(Extension { group, alpha, kernel, module: module.clone(), q })
}

/// Cocycle data read off an extension `1 -> K -> B -> G -> 1` with `K` elementary abelian.
#[derive(Debug, Clone)]
pub struct ExtensionData {
    pub alpha: GroupHom,
    /// `K` with conjugation action `g·k = σ(g) k σ(g)⁻¹`, coordinates in `kernel_basis`.
    pub module: FpModule,
    pub kernel_basis: Vec<usize>,
    /// `σ(g)`: the smallest preimage of `g`.
    pub section: Vec<usize>,
    /// Normalized cochain `c(g, h) = σ(g) σ(h) σ(gh)⁻¹`.
    pub cocycle: Vec<u8>,
    coords: HashMap<usize, Vec<u8>>,
    combos: HashMap<Vec<u8>, usize>,
}

impl ExtensionData {
    /// Coordinates of a kernel element.
    pub fn coords(&self, k: usize) -> Option<&[u8]> {
        self.coords.get(&k).map(|v| v.as_slice())
    }

    /// The kernel element with the given coordinates.
    pub fn kernel_element(&self, m: &[u8]) -> usize {
        self.combos[m]
    }

    pub fn p(&self) -> u32 {
        self.module.p()
    }
}

/// Prime `p` when `K` is an elementary abelian `p`-group (`None` for trivial `K`).
pub fn elementary_abelian_prime(b: &FiniteGroup, k: &Subgroup) -> Result<Option<u32>> {
    if k.is_trivial() {
        return Ok(None);
    }
    let mem = k.members();
    let p = b.element_order(mem[1]);
    let ok = crate::linalg::is_prime(p as u32)
        && mem.iter().skip(1).all(|&x| b.element_order(x) == p)
        && mem.iter().all(|&x| mem.iter().all(|&y| b.mul(x, y) == b.mul(y, x)));
    if ok {
        Ok(Some(p as u32))
    } else {
        Err(Error::KernelNotElementaryAbelian)
    }
}

pub fn cocycle_of_extension(alpha: &GroupHom) -> Result<ExtensionData> {
    let b = alpha.source();
    let g = alpha.target();
    if !alpha.is_surjective() {
        return Err(Error::NotEpimorphism("group map is not surjective".into()));
    }
    let k = alpha.kernel();
    let p = elementary_abelian_prime(b, &k)?.unwrap_or(2);

    // Greedy basis in index order; `coords` grows as the span does.
    let mut basis: Vec<usize> = Vec::new();
    let mut span: Vec<(usize, Vec<u8>)> = vec![(0, Vec::new())];
    for &x in k.members().iter().skip(1) {
        if span.iter().any(|(y, _)| *y == x) {
            continue;
        }
        let mut next = Vec::with_capacity(span.len() * p as usize);
        for (y, v) in &span {
            let mut cur = *y;
            for c in 0..p {
                let mut w = v.clone();
                w.push(c as u8);
                next.push((cur, w));
                cur = b.mul(cur, x);
            }
        }
        span = next;
        basis.push(x);
    }
    let d = basis.len();
    let coords: HashMap<usize, Vec<u8>> = span.into_iter().collect();
    let combos: HashMap<Vec<u8>, usize> = coords.iter().map(|(x, v)| (v.clone(), *x)).collect();

    let mut section = vec![usize::MAX; g.order()];
    for x in b.elements() {
        let y = alpha.apply(x);
        if section[y] == usize::MAX {
            section[y] = x;
        }
    }
    let gen_action = g
        .generators()
        .iter()
        .map(|&s| {
            let sg = section[s];
            let cols = basis.iter().map(|&kb| coords[&b.mul(b.mul(sg, kb), b.inv(sg))].clone()).collect();
            FpMatrix::from_cols(p, d, cols)
        })
        .collect();
    let module = FpModule::new(g.clone(), p, d, gen_action)?;
    let bar = Bar::new(&module);
    let mut cocycle = vec![0u8; bar.dim(2)];
    for t in 0..bar.tuples(2) {
        let gh = bar.decode(t, 2);
        let prod = b.mul(b.mul(section[gh[0]], section[gh[1]]), b.inv(section[g.mul(gh[0], gh[1])]));
        cocycle[t * d..(t + 1) * d].copy_from_slice(&coords[&prod]);
    }
    Ok(ExtensionData { alpha: alpha.clone(), module, kernel_basis: basis, section, cocycle, coords, combos })
}

/// A section `γ` of `α` (`α∘γ = id`), if one exists.
pub fn is_split(alpha: &GroupHom, cfg: &Config) -> Result<Option<GroupHom>> {
    let data = cocycle_of_extension(alpha)?;
    let found = split_from_data(&data)?;
    let b = alpha.source();
    if b.order() <= cfg.brute_group_cap {
        let mut search =
            homomorphism_search(alpha.target(), b, |x, y| alpha.apply(y) == x).with_budget(cfg.search_node_budget);
        match search.next() {
            Some(Err(Error::SearchCap { .. })) => {}
            Some(Err(e)) => return Err(e),
            other => {
                if other.is_some() != found.is_some() {
                    return Err(Error::Internal("section search disagrees with the coboundary equation".into()));
                }
            }
        }
    }
    Ok(found)
}

/// Solve `δv = c`; the section is `γ(g) = k(-v(g)) σ(g)`.
pub(crate) fn split_from_data(data: &ExtensionData) -> Result<Option<GroupHom>> {
    let bar = Bar::new(&data.module);
    let delta = bar.coboundary_matrix(1);
    let Some(v) = linalg::solve(&delta, &data.cocycle)? else {
        return Ok(None);
    };
    Ok(Some(section_from_cochain(data, &v, |x| linalg::neg(x, data.p()))))
}

/// `g ↦ k(f(w(g))) σ(g)` for a normalized 1-cochain `w`.
pub(crate) fn section_from_cochain(data: &ExtensionData, w: &[u8], f: impl Fn(u8) -> u8) -> GroupHom {
    let b = data.alpha.source();
    let g = data.alpha.target();
    let d = data.module.dim();
    let images = g
        .elements()
        .map(|x| {
            if x == 0 {
                return 0;
            }
            let m: Vec<u8> = w[(x - 1) * d..x * d].iter().map(|&c| f(c)).collect();
            b.mul(data.kernel_element(&m), data.section[x])
        })
        .collect();
    GroupHom::new_unchecked(g.clone(), b.clone(), images)
}

/// `Z¹`, `B¹` and `H¹` of a module; derivations are normalized 1-cochains.
#[derive(Debug, Clone)]
pub struct DerivationSpace {
    pub z1: SubspaceBasis,
    pub b1: SubspaceBasis,
    pub h1: HomologySpace,
}

pub fn derivation_space(module: &FpModule, cfg: &Config) -> Result<DerivationSpace> {
    let bar = Bar::new(module);
    let d1 = bar.coboundary_matrix(1);
    let z1 = SubspaceBasis::from_independent(
        module.p(),
        bar.dim(1),
        linalg::kernel_of_rows(&Echelon::from_rows(module.p(), bar.dim(1), d1.rows_iter())),
    );
    let b1 = linalg::image_basis(&bar.coboundary_matrix(0));
    let h1 = cohomology(module, 1, cfg)?;
    Ok(DerivationSpace { z1, b1, h1 })
}

/// The complement `{(d(g), g)}` of `M` in a split extension.
pub fn complement_of(ext: &Extension, d: &[u8]) -> Result<Subgroup> {
    let g = ext.alpha.target();
    let dim = ext.module.dim();
    if d.len() != (g.order() - 1) * dim {
        return Err(Error::DimensionMismatch { expected: (g.order() - 1) * dim, got: d.len() });
    }
    let members: Vec<usize> =
        g.elements().map(|x| if x == 0 { 0 } else { ext.element(&d[(x - 1) * dim..x * dim], x) }).collect();
    let b = &ext.group;
    for &x in &members {
        for &y in &members {
            if !members.contains(&b.mul(x, y)) {
                return Err(Error::NotAHomomorphism("not a derivation of a split extension".into()));
            }
        }
    }
    Ok(Subgroup::from_members(b, members))
}
