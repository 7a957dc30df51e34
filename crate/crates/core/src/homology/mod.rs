//! Group homology and cohomology in degrees 0, 1, 2 from the normalized bar
//! resolution, truncated at degree 3.
//!
//! A chain of degree `k` with coefficients in `M` is a vector indexed by
//! `(tuple, j)` at `tuple * dim M + j`, where tuples run over `k` non-identity
//! elements encoded in base `|G| - 1` (first entry most significant). Cochains
//! use the same indexing for `f(g_1, ..., g_k)`.

pub mod cyclic;
pub mod extension;
pub mod kappa;
pub mod shapiro;
pub mod transfer;

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};
use crate::linalg::{self, Echelon, FpMatrix, QuotientBasis};
use crate::module::{FpModule, ModuleMap};

pub use cyclic::{cyclic_cohomology_dims, cyclic_homology_dims};
pub use extension::{
    cocycle_of_extension, complement_of, derivation_space, extension_from_cocycle, is_split, DerivationSpace,
    Extension, ExtensionData,
};
pub use kappa::{kappa_maps, KappaPair};
pub use shapiro::{shapiro, ShapiroMaps};
pub use transfer::{corestriction, corestriction_homology, restriction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Homology,
    Cohomology,
}

/// Index arithmetic and (co)boundary formulas for one coefficient module.
#[derive(Debug, Clone, Copy)]
pub struct Bar<'a> {
    module: &'a FpModule,
    group: &'a FiniteGroup,
    m: usize,
    d: usize,
    p: u32,
}

impl<'a> Bar<'a> {
    pub fn new(module: &'a FpModule) -> Self {
        let group = module.group().as_ref();
        Bar { module, group, m: group.order() - 1, d: module.dim(), p: module.p() }
    }

    pub fn tuples(&self, k: usize) -> usize {
        self.m.pow(k as u32)
    }

    /// Dimension of the degree-`k` chain (or cochain) space.
    pub fn dim(&self, k: usize) -> usize {
        self.tuples(k) * self.d
    }

    pub fn encode(&self, t: &[usize]) -> usize {
        t.iter().fold(0, |acc, &g| acc * self.m + (g - 1))
    }

    pub fn decode(&self, mut idx: usize, k: usize) -> Vec<usize> {
        let mut t = vec![0usize; k];
        for x in t.iter_mut().rev() {
            *x = idx % self.m + 1;
            idx /= self.m;
        }
        t
    }

    fn sign(&self, i: usize) -> u8 {
        if i.is_multiple_of(2) {
            1
        } else {
            linalg::neg(1, self.p)
        }
    }

    fn add_at(&self, out: &mut [u8], tuple: &[usize], j: usize, c: u8) {
        let idx = self.encode(tuple) * self.d + j;
        out[idx] = linalg::add(out[idx], c, self.p);
    }

    /// `∂(e_j ⊗ [g_1|…|g_k])`:
    /// `ρ(g_1⁻¹)e_j ⊗ [g_2|…] + Σ (-1)^i e_j ⊗ […|g_i g_{i+1}|…] + (-1)^k e_j ⊗ [g_1|…|g_{k-1}]`.
    pub fn boundary_of_basis(&self, k: usize, tuple_idx: usize, j: usize) -> Vec<u8> {
        let g = self.decode(tuple_idx, k);
        let mut out = vec![0u8; self.dim(k - 1)];
        let first = self.module.matrix(self.group.inv(g[0]));
        let base = self.encode(&g[1..]) * self.d;
        for r in 0..self.d {
            out[base + r] = linalg::add(out[base + r], first.get(r, j), self.p);
        }
        for i in 0..k - 1 {
            let prod = self.group.mul(g[i], g[i + 1]);
            if prod != 0 {
                let mut t = Vec::with_capacity(k - 1);
                t.extend_from_slice(&g[..i]);
                t.push(prod);
                t.extend_from_slice(&g[i + 2..]);
                self.add_at(&mut out, &t, j, self.sign(i + 1));
            }
        }
        self.add_at(&mut out, &g[..k - 1], j, self.sign(k));
        out
    }

    pub fn boundary(&self, k: usize, z: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.dim(k - 1)];
        for (idx, &c) in z.iter().enumerate() {
            if c != 0 {
                let b = self.boundary_of_basis(k, idx / self.d, idx % self.d);
                linalg::axpy(&mut out, c, &b, self.p);
            }
        }
        out
    }

    /// Value block `f(tuple)` of a cochain.
    fn block<'v>(&self, f: &'v [u8], tuple: &[usize]) -> &'v [u8] {
        let base = self.encode(tuple) * self.d;
        &f[base..base + self.d]
    }

    /// `(δf)(g_1,…,g_{k+1}) = g_1·f(g_2,…) + Σ (-1)^i f(…,g_i g_{i+1},…) + (-1)^{k+1} f(g_1,…,g_k)`.
    pub fn coboundary(&self, k: usize, f: &[u8]) -> Vec<u8> {
        let p = self.p;
        let mut out = vec![0u8; self.dim(k + 1)];
        for t in 0..self.tuples(k + 1) {
            let g = self.decode(t, k + 1);
            let dst = &mut out[t * self.d..(t + 1) * self.d];
            let moved = self.module.act(g[0], self.block(f, &g[1..]));
            linalg::axpy(dst, 1, &moved, p);
            for i in 0..k {
                let prod = self.group.mul(g[i], g[i + 1]);
                if prod != 0 {
                    let mut s = Vec::with_capacity(k);
                    s.extend_from_slice(&g[..i]);
                    s.push(prod);
                    s.extend_from_slice(&g[i + 2..]);
                    linalg::axpy(dst, self.sign(i + 1), self.block(f, &s), p);
                }
            }
            linalg::axpy(dst, self.sign(k + 1), self.block(f, &g[..k]), p);
        }
        out
    }

    /// Row `(tuple, j)` of the matrix of `δ^k`, as a vector over `C^k`.
    pub fn coboundary_row(&self, k: usize, tuple_idx: usize, j: usize) -> Vec<u8> {
        let g = self.decode(tuple_idx, k + 1);
        let mut row = vec![0u8; self.dim(k)];
        let first = self.module.matrix(g[0]);
        let base = self.encode(&g[1..]) * self.d;
        for c in 0..self.d {
            row[base + c] = linalg::add(row[base + c], first.get(j, c), self.p);
        }
        for i in 0..k {
            let prod = self.group.mul(g[i], g[i + 1]);
            if prod != 0 {
                let mut s = Vec::with_capacity(k);
                s.extend_from_slice(&g[..i]);
                s.push(prod);
                s.extend_from_slice(&g[i + 2..]);
                self.add_at(&mut row, &s, j, self.sign(i + 1));
            }
        }
        self.add_at(&mut row, &g[..k], j, self.sign(k + 1));
        row
    }

    /// The matrix of `δ^k: C^k -> C^{k+1}`.
    pub fn coboundary_matrix(&self, k: usize) -> FpMatrix {
        let rows = (0..self.dim(k + 1)).map(|r| self.coboundary_row(k, r / self.d, r % self.d)).collect();
        FpMatrix::from_rows_with_cols(self.p, self.dim(k), rows)
    }
}

fn check_cap(module: &FpModule, top: usize, cfg: &Config) -> Result<()> {
    let n = module.group().order();
    let size = n.checked_pow(top as u32).and_then(|x| x.checked_mul(module.dim())).unwrap_or(usize::MAX);
    if size > cfg.chain_entry_cap {
        return Err(Error::ResourceCap { what: "bar chain entries", size, cap: cfg.chain_entry_cap });
    }
    Ok(())
}

/// A computed `H_i` or `H^i`: representative (co)cycles and a projection onto class coordinates.
#[derive(Debug, Clone)]
pub struct HomologySpace {
    degree: usize,
    side: Side,
    p: u32,
    quotient: QuotientBasis,
}

impl HomologySpace {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Length of (co)chain vectors.
    pub fn ambient_dim(&self) -> usize {
        self.quotient.ambient_dim()
    }

    /// `reps[i]` projects to the unit vector `e_i`.
    pub fn representatives(&self) -> &[Vec<u8>] {
        self.quotient.representatives()
    }

    /// Class coordinates of a (co)cycle; `NotContained` for non-cycles.
    pub fn project(&self, z: &[u8]) -> Result<Vec<u8>> {
        if z.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: z.len() });
        }
        self.quotient.project(z)
    }

    /// The (co)cycle `Σ c_i reps[i]`.
    pub fn lift(&self, coords: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.ambient_dim()];
        for (c, r) in coords.iter().zip(self.representatives()) {
            linalg::axpy(&mut out, *c, r, self.p);
        }
        out
    }
}

/// `H_i(G, M)` for `i ≤ 2`.
pub fn homology(module: &FpModule, i: usize, cfg: &Config) -> Result<HomologySpace> {
    if i > 2 {
        return Err(Error::Internal(format!("homology degree {i} is not supported")));
    }
    check_cap(module, i + 1, cfg)?;
    let bar = Bar::new(module);
    let p = module.p();
    let cycles: Vec<Vec<u8>> = if i == 0 {
        (0..bar.dim(0)).map(|j| crate::module::unit(bar.dim(0), j)).collect()
    } else {
        let (lo, hi) = (bar.dim(i - 1), bar.dim(i));
        let mut ech = Echelon::with_pivot_limit(p, lo + hi, lo);
        let mut out = Vec::new();
        for s in 0..hi {
            let mut row = bar.boundary_of_basis(i, s / bar.d, s % bar.d);
            row.resize(lo + hi, 0);
            row[lo + s] = 1;
            if let Err(rem) = ech.insert(row) {
                out.push(rem[lo..].to_vec());
            }
        }
        out
    };
    let mut boundaries = Echelon::new(p, bar.dim(i));
    let target_rank = cycles.len();
    for s in 0..bar.dim(i + 1) {
        if boundaries.rank() == target_rank {
            break;
        }
        let _ = boundaries.insert(bar.boundary_of_basis(i + 1, s / bar.d, s % bar.d));
    }
    Ok(HomologySpace { degree: i, side: Side::Homology, p, quotient: QuotientBasis::build(boundaries, cycles) })
}

/// `H^i(G, M)` for `i ≤ 2`, with normalized cochains.
pub fn cohomology(module: &FpModule, i: usize, cfg: &Config) -> Result<HomologySpace> {
    if i > 2 {
        return Err(Error::Internal(format!("cohomology degree {i} is not supported")));
    }
    check_cap(module, i + 1, cfg)?;
    let bar = Bar::new(module);
    let p = module.p();
    let mut rows = Echelon::new(p, bar.dim(i));
    for r in 0..bar.dim(i + 1) {
        if rows.rank() == bar.dim(i) {
            break;
        }
        let _ = rows.insert(bar.coboundary_row(i, r / bar.d, r % bar.d));
    }
    let cocycles = linalg::kernel_of_rows(&rows);
    let mut coboundaries = Echelon::new(p, bar.dim(i));
    if i > 0 {
        let delta = bar.coboundary_matrix(i - 1);
        for c in 0..delta.cols() {
            let _ = coboundaries.insert(delta.col(c));
        }
    }
    Ok(HomologySpace { degree: i, side: Side::Cohomology, p, quotient: QuotientBasis::build(coboundaries, cocycles) })
}

pub fn compute(module: &FpModule, i: usize, side: Side, cfg: &Config) -> Result<HomologySpace> {
    match side {
        Side::Homology => homology(module, i, cfg),
        Side::Cohomology => cohomology(module, i, cfg),
    }
}

/// Apply a coefficient matrix blockwise to a (co)chain.
pub(crate) fn apply_coefficients(f: &FpMatrix, z: &[u8]) -> Vec<u8> {
    let (din, dout) = (f.cols(), f.rows());
    let tuples = z.len().checked_div(din).unwrap_or(0);
    let mut out = vec![0u8; tuples * dout];
    for t in 0..tuples {
        let v = f.mul_vec(&z[t * din..(t + 1) * din]);
        out[t * dout..(t + 1) * dout].copy_from_slice(&v);
    }
    out
}

/// Matrix (target classes × source classes) of the map induced by a module map.
pub fn induced_map_between(f: &ModuleMap, src: &HomologySpace, tgt: &HomologySpace) -> Result<FpMatrix> {
    let tuples = src.ambient_dim().checked_div(f.source().dim()).unwrap_or(0);
    let n = f.source().group().order();
    let expected_tuples = (n - 1).pow(src.degree() as u32);
    if src.side != tgt.side
        || src.degree != tgt.degree
        || (f.source().dim() > 0 && tuples != expected_tuples)
        || src.ambient_dim() != expected_tuples * f.source().dim()
        || tgt.ambient_dim() != expected_tuples * f.target().dim()
    {
        return Err(Error::BasisMismatch);
    }
    let cols: Vec<Vec<u8>> =
        src.representatives().iter().map(|z| tgt.project(&apply_coefficients(f.matrix(), z))).collect::<Result<_>>()?;
    Ok(FpMatrix::from_cols(src.p(), tgt.dim(), cols))
}

/// The induced map together with the spaces it was computed on.
#[derive(Debug, Clone)]
pub struct InducedMap {
    pub source: HomologySpace,
    pub target: HomologySpace,
    pub matrix: FpMatrix,
}

pub fn induced_map(f: &ModuleMap, i: usize, side: Side, cfg: &Config) -> Result<InducedMap> {
    let source = compute(f.source(), i, side, cfg)?;
    let target = compute(f.target(), i, side, cfg)?;
    let matrix = induced_map_between(f, &source, &target)?;
    Ok(InducedMap { source, target, matrix })
}

/// Homology chain map of a compatible pair `(ι: H -> G, j: M -> N)` with
/// `j(h·m) = ι(h)·j(m)`: `m ⊗ [h_1|…|h_k] ↦ j(m) ⊗ [ι h_1|…|ι h_k]`.
pub(crate) fn chain_map_along(
    iota: &GroupHom,
    j: &FpMatrix,
    k: usize,
    z: &[u8],
    src_bar: &Bar<'_>,
    tgt_bar: &Bar<'_>,
) -> Vec<u8> {
    let (din, dout) = (src_bar.d, tgt_bar.d);
    let mut out = vec![0u8; tgt_bar.dim(k)];
    for t in 0..src_bar.tuples(k) {
        let block = &z[t * din..(t + 1) * din];
        if linalg::is_zero(block) {
            continue;
        }
        let imgs: Vec<usize> = src_bar.decode(t, k).iter().map(|&h| iota.apply(h)).collect();
        if imgs.contains(&0) {
            continue;
        }
        let base = tgt_bar.encode(&imgs) * dout;
        let v = j.mul_vec(block);
        linalg::axpy(&mut out[base..base + dout], 1, &v, src_bar.p);
    }
    out
}

/// Cochain pull-back along `ι: H -> G`: `(ι^* f)(h_1,…,h_k) = f(ι h_1,…,ι h_k)`.
pub(crate) fn cochain_pullback(iota: &GroupHom, k: usize, f: &[u8], src_bar: &Bar<'_>, tgt_bar: &Bar<'_>) -> Vec<u8> {
    // src_bar: bar of G (domain of f); tgt_bar: bar of H.
    let d = src_bar.d;
    let mut out = vec![0u8; tgt_bar.dim(k)];
    for t in 0..tgt_bar.tuples(k) {
        let imgs: Vec<usize> = tgt_bar.decode(t, k).iter().map(|&h| iota.apply(h)).collect();
        if imgs.contains(&0) {
            continue;
        }
        out[t * d..(t + 1) * d].copy_from_slice(src_bar.block(f, &imgs));
    }
    out
}

/// Check `j(h·m) = ι(h)·j(m)` on generators of `H`.
pub(crate) fn check_compatible_pair(iota: &GroupHom, j: &FpMatrix, src: &FpModule, tgt: &FpModule) -> Result<()> {
    for &h in src.group().generators() {
        if j.mul(src.matrix(h)) != tgt.matrix(iota.apply(h)).mul(j) {
            return Err(Error::NotEquivariant(format!("coefficient map fails at generator element {h}")));
        }
    }
    Ok(())
}

/// Matrix of the homology map induced by a compatible pair.
pub fn homology_map_along(
    iota: &GroupHom,
    j: &FpMatrix,
    src_module: &FpModule,
    tgt_module: &FpModule,
    src: &HomologySpace,
    tgt: &HomologySpace,
) -> Result<FpMatrix> {
    check_compatible_pair(iota, j, src_module, tgt_module)?;
    let (sb, tb) = (Bar::new(src_module), Bar::new(tgt_module));
    let k = src.degree();
    if src.side != Side::Homology
        || tgt.side != Side::Homology
        || tgt.degree() != k
        || src.ambient_dim() != sb.dim(k)
        || tgt.ambient_dim() != tb.dim(k)
    {
        return Err(Error::BasisMismatch);
    }
    let cols: Vec<Vec<u8>> = src
        .representatives()
        .iter()
        .map(|z| tgt.project(&chain_map_along(iota, j, k, z, &sb, &tb)))
        .collect::<Result<_>>()?;
    Ok(FpMatrix::from_cols(src.p(), tgt.dim(), cols))
}
