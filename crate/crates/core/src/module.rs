//! Finite-dimensional 𝔽_pG-modules as matrix representations.
//!
//! Modules are left modules acting on column vectors, `ρ(gh) = ρ(g)ρ(h)`.
//! The permutation module of a right action sends `e_t` to `e_{t^{g⁻¹}}`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};
use crate::linalg::{self, check_prime, Echelon, FpMatrix, QuotientBasis, SubspaceBasis};
use crate::pile::Pile;

/// Solution spaces up to this size are searched exhaustively for an isomorphism.
pub const ISO_EXHAUSTIVE_LIMIT: u64 = 1_000_000;
const ISO_RANDOM_TRIES: usize = 256;

#[derive(Debug, Clone)]
pub struct FpModule {
    p: u32,
    dim: usize,
    group: Arc<FiniteGroup>,
    gen_action: Vec<FpMatrix>,
    elems: Vec<FpMatrix>,
}

impl FpModule {
    /// Validates invertibility and every Cayley-table relation.
    pub fn new(group: Arc<FiniteGroup>, p: u32, dim: usize, gen_action: Vec<FpMatrix>) -> Result<FpModule> {
        check_prime(p)?;
        let gens = group.generators();
        if gen_action.len() != gens.len() {
            return Err(Error::DimensionMismatch { expected: gens.len(), got: gen_action.len() });
        }
        for (k, m) in gen_action.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.rows().max(m.cols()) });
            }
            if m.p() != p {
                return Err(Error::MixedPrimes(p, m.p()));
            }
            if m.rank() != dim {
                return Err(Error::NotInvertible(k));
            }
        }
        let mut elems = vec![FpMatrix::identity(p, dim); group.order()];
        for &x in group.bfs_order().iter().skip(1) {
            let (parent, k) = group.word_step(x).unwrap();
            elems[x] = elems[parent].mul(&gen_action[k]);
        }
        for x in group.elements() {
            for (k, &s) in gens.iter().enumerate() {
                if elems[group.mul(x, s)] != elems[x].mul(&gen_action[k]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "module relation fails at element {x}, generator {k}"
                    )));
                }
            }
        }
        Ok(FpModule { p, dim, group, gen_action, elems })
    }

    pub(crate) fn from_element_matrices(group: Arc<FiniteGroup>, p: u32, dim: usize, elems: Vec<FpMatrix>) -> FpModule {
        let gen_action = group.generators().iter().map(|&s| elems[s].clone()).collect();
        FpModule { p, dim, group, gen_action, elems }
    }

    pub fn trivial(group: Arc<FiniteGroup>, p: u32, dim: usize) -> FpModule {
        let elems = vec![FpMatrix::identity(p, dim); group.order()];
        Self::from_element_matrices(group, p, dim, elems)
    }

    /// `𝔽_p[G]` with basis the group elements.
    pub fn regular(group: Arc<FiniteGroup>, p: u32) -> FpModule {
        permutation_module(&Pile::regular(group), p).module
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn gen_matrices(&self) -> &[FpMatrix] {
        &self.gen_action
    }

    /// `ρ(g)`.
    pub fn matrix(&self, g: usize) -> &FpMatrix {
        &self.elems[g]
    }

    /// `ρ(g) v`.
    pub fn act(&self, g: usize, v: &[u8]) -> Vec<u8> {
        self.elems[g].mul_vec(v)
    }

    pub fn same_group(&self, other: &FpModule) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || self.group.same_table(&other.group)
    }

    fn check_compatible(&self, other: &FpModule) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MixedPrimes(self.p, other.p));
        }
        if !self.same_group(other) {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    /// Diagonal action on `self ⊗ other`, basis `(i, j)` at `i * other.dim + j`.
    pub fn tensor(&self, other: &FpModule) -> Result<FpModule> {
        self.check_compatible(other)?;
        let elems = self.elems.iter().zip(&other.elems).map(|(a, b)| a.kronecker(b)).collect();
        Ok(Self::from_element_matrices(self.group.clone(), self.p, self.dim * other.dim, elems))
    }

    /// Contragredient: `g ↦ ρ(g⁻¹)ᵀ`.
    pub fn dual(&self) -> FpModule {
        let elems = self.group.elements().map(|g| self.elems[self.group.inv(g)].transpose()).collect();
        Self::from_element_matrices(self.group.clone(), self.p, self.dim, elems)
    }

    /// The module pulled back along `f: H -> G` (restriction when `f` is an inclusion).
    pub fn pullback(&self, f: &GroupHom) -> Result<FpModule> {
        if !f.target().same_table(&self.group) {
            return Err(Error::GroupMismatch);
        }
        let elems = f.source().elements().map(|h| self.elems[f.apply(h)].clone()).collect();
        Ok(Self::from_element_matrices(f.source().clone(), self.p, self.dim, elems))
    }

    /// `M^G`.
    pub fn invariants(&self) -> SubspaceBasis {
        let id = FpMatrix::identity(self.p, self.dim);
        let stacked =
            self.gen_action.iter().fold(FpMatrix::zeros(self.p, 0, self.dim), |acc, m| acc.vstack(&m.sub(&id)));
        linalg::kernel_basis(&stacked)
    }

    /// `span{ (ρ(g) - 1) m }`.
    pub fn augmentation_submodule(&self) -> SubspaceBasis {
        let mut ech = Echelon::new(self.p, self.dim);
        for m in &self.gen_action {
            let d = m.minus_scalar(1);
            for c in 0..self.dim {
                let _ = ech.insert(d.col(c));
            }
        }
        ech.rref_basis()
    }

    /// `M_G = M / span{(ρ(g) - 1) m}`.
    pub fn coinvariants(&self) -> QuotientBasis {
        let sub = self.augmentation_submodule();
        let whole = (0..self.dim).map(|i| unit(self.dim, i));
        QuotientBasis::build(sub.echelon(), whole)
    }

    /// Ranks of `ρ(g) - λ` for every element `g` (in index order) and `λ ∈ 𝔽_p`.
    /// Isomorphic modules over the same group have equal profiles.
    pub fn rank_profile(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.elems.len() * self.p as usize);
        for m in &self.elems {
            for lambda in 0..self.p {
                out.push(m.minus_scalar(lambda as u8).rank() as u32);
            }
        }
        out
    }

    /// Sort key used for canonical ordering of module lists.
    pub fn sort_key(&self) -> (usize, Vec<u32>) {
        (self.dim, self.rank_profile())
    }

    /// `d{dim}:{hash}`, a stable 64-bit FNV-1a digest of the rank profile.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for x in self.rank_profile() {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        format!("d{}:{:016x}", self.dim, h)
    }

    /// Submodule spanned by `basis` (RREF rows, invariant) with its action in those coordinates.
    pub fn submodule(&self, basis: &SubspaceBasis) -> Result<FpModule> {
        let k = basis.dim();
        let ech = basis.echelon();
        let mut elems = Vec::with_capacity(self.group.order());
        for g in self.group.elements() {
            let mut cols = Vec::with_capacity(k);
            for w in basis.as_slice() {
                let mut v = self.act(g, w);
                let coeffs = ech.reduce(&mut v);
                if !linalg::is_zero(&v) {
                    return Err(Error::NotContained);
                }
                cols.push(coeffs);
            }
            elems.push(FpMatrix::from_cols(self.p, k, cols));
        }
        Ok(Self::from_element_matrices(self.group.clone(), self.p, k, elems))
    }

    /// `M / W` for an invariant RREF subspace `W`, with basis the non-pivot unit vectors.
    pub fn quotient(&self, basis: &SubspaceBasis) -> Result<FpModule> {
        let ech = basis.echelon();
        let free: Vec<usize> = (0..self.dim).filter(|c| !ech.pivots().contains(c)).collect();
        let k = free.len();
        let mut elems = Vec::with_capacity(self.group.order());
        for g in self.group.elements() {
            let mut cols = Vec::with_capacity(k);
            for &j in &free {
                let mut v = self.elems[g].col(j);
                ech.reduce(&mut v);
                cols.push(free.iter().map(|&f| v[f]).collect());
            }
            elems.push(FpMatrix::from_cols(self.p, k, cols));
        }
        let m = Self::from_element_matrices(self.group.clone(), self.p, k, elems);
        // Invariance of W is what makes this a module; verify the relations.
        for x in self.group.elements() {
            for &s in self.group.generators() {
                if m.elems[self.group.mul(x, s)] != m.elems[x].mul(&m.elems[s]) {
                    return Err(Error::NotContained);
                }
            }
        }
        Ok(m)
    }

    /// Closure of `vectors` under the action: the submodule they generate.
    pub fn spin(&self, vectors: &[Vec<u8>]) -> Echelon {
        let mut ech = Echelon::new(self.p, self.dim);
        let mut queue: Vec<Vec<u8>> = Vec::new();
        for v in vectors {
            if let Ok(j) = ech.insert(v.clone()) {
                queue.push(ech.row(j));
            }
        }
        while let Some(v) = queue.pop() {
            for m in &self.gen_action {
                if let Ok(j) = ech.insert(m.mul_vec(&v)) {
                    queue.push(ech.row(j));
                }
            }
            if ech.rank() == self.dim {
                break;
            }
        }
        ech
    }

    /// Exhaustive relation check on all element pairs.
    pub fn check_all_relations(&self) -> bool {
        let g = &self.group;
        self.elems[0].is_identity()
            && g.elements().all(|x| g.elements().all(|y| self.elems[g.mul(x, y)] == self.elems[x].mul(&self.elems[y])))
    }
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0u8; n];
    v[i] = 1;
    v
}

/// A permutation module together with its orbit blocks (lists of points, ascending).
#[derive(Debug, Clone)]
pub struct PermutationModule {
    pub module: FpModule,
    pub blocks: Vec<Vec<usize>>,
}

/// `𝔽_p[T]`: `ρ(g) e_t = e_{t^{g⁻¹}}`.
pub fn permutation_module(pile: &Pile, p: u32) -> PermutationModule {
    let g = pile.group();
    let n = pile.points();
    let elems = g
        .elements()
        .map(|x| {
            let xi = g.inv(x);
            let mut m = FpMatrix::zeros(p, n, n);
            for t in 0..n {
                m.set(pile.act(t, xi), t, 1);
            }
            m
        })
        .collect();
    let module = FpModule::from_element_matrices(g.clone(), p, n, elems);
    let blocks = (0..pile.orbit_count()).map(|o| pile.orbit(o)).collect();
    PermutationModule { module, blocks }
}

/// `𝔽_p[ṫ]` for a single orbit, basis the orbit's points in ascending order.
pub fn orbit_module(pile: &Pile, orbit: usize, p: u32) -> FpModule {
    let pts = pile.orbit(orbit);
    let pos = |t: usize| pts.binary_search(&t).unwrap();
    let g = pile.group();
    let k = pts.len();
    let elems = g
        .elements()
        .map(|x| {
            let xi = g.inv(x);
            let mut m = FpMatrix::zeros(p, k, k);
            for (i, &t) in pts.iter().enumerate() {
                m.set(pos(pile.act(t, xi)), i, 1);
            }
            m
        })
        .collect();
    FpModule::from_element_matrices(g.clone(), p, k, elems)
}

/// A `G`-equivariant linear map, `matrix` of shape `target.dim × source.dim`.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    source: FpModule,
    target: FpModule,
    matrix: FpMatrix,
}

impl ModuleMap {
    pub fn new(source: FpModule, target: FpModule, matrix: FpMatrix) -> Result<ModuleMap> {
        source.check_compatible(&target)?;
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim() * source.dim(),
                got: matrix.rows() * matrix.cols(),
            });
        }
        for (k, (a, b)) in source.gen_action.iter().zip(&target.gen_action).enumerate() {
            if matrix.mul(a) != b.mul(&matrix) {
                return Err(Error::NotEquivariant(format!("fails at generator {k}")));
            }
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: &FpModule) -> ModuleMap {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: FpMatrix::identity(m.p, m.dim) }
    }

    pub fn zero(source: &FpModule, target: &FpModule) -> ModuleMap {
        ModuleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: FpMatrix::zeros(source.p, target.dim, source.dim),
        }
    }

    /// `𝔽_p[X] ⊗ M -> M`, `e_x ⊗ m ↦ m`, for a permutation module `perm` of dimension `n`.
    pub fn augmentation(perm_tensor_m: &FpModule, m: &FpModule, n: usize) -> Result<ModuleMap> {
        let d = m.dim();
        let mut a = FpMatrix::zeros(m.p(), d, n * d);
        for x in 0..n {
            for j in 0..d {
                a.set(j, x * d + j, 1);
            }
        }
        ModuleMap::new(perm_tensor_m.clone(), m.clone(), a)
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap { source: self.source.clone(), target: other.target.clone(), matrix: other.matrix.mul(&self.matrix) }
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.rows() == self.matrix.cols() && self.matrix.rank() == self.matrix.rows()
    }
}

/// Basis of `Hom_G(a, b)` as flattened `b.dim × a.dim` matrices (row-major).
pub fn hom_space(a: &FpModule, b: &FpModule) -> Result<Vec<FpMatrix>> {
    a.check_compatible(b)?;
    let (da, db) = (a.dim, b.dim);
    let p = a.p;
    let nvars = db * da;
    // X A_s - B_s X = 0; unknown X[r][c] at r * da + c.
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for (ma, mb) in a.gen_action.iter().zip(&b.gen_action) {
        for r in 0..db {
            for c in 0..da {
                let mut eq = vec![0u8; nvars];
                for k in 0..da {
                    let v = ma.get(k, c);
                    if v != 0 {
                        eq[r * da + k] = linalg::add(eq[r * da + k], v, p);
                    }
                }
                for k in 0..db {
                    let v = mb.get(r, k);
                    if v != 0 {
                        eq[k * da + c] = linalg::sub(eq[k * da + c], v, p);
                    }
                }
                rows.push(eq);
            }
        }
    }
    let sys = FpMatrix::from_rows_with_cols(p, nvars, rows);
    Ok(linalg::right_kernel(&sys).into_iter().map(|v| FpMatrix::from_data(p, db, da, v)).collect())
}

/// An invertible equivariant map `a -> b`, if one exists.
pub fn module_iso_test(a: &FpModule, b: &FpModule) -> Result<Option<ModuleMap>> {
    a.check_compatible(b)?;
    if a.dim != b.dim {
        return Ok(None);
    }
    if a.rank_profile() != b.rank_profile() {
        return Ok(None);
    }
    let basis = hom_space(a, b)?;
    let p = a.p;
    let k = basis.len();
    if k == 0 {
        return Ok(None);
    }
    let combine = |coeffs: &[u8]| {
        let mut m = FpMatrix::zeros(p, b.dim, a.dim);
        for (c, x) in coeffs.iter().zip(&basis) {
            if *c != 0 {
                m = m.add(&x.scaled(*c));
            }
        }
        m
    };
    let found = |m: FpMatrix| ModuleMap { source: a.clone(), target: b.clone(), matrix: m };
    for x in &basis {
        if x.rank() == a.dim {
            return Ok(Some(found(x.clone())));
        }
    }
    let space = (p as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if space <= ISO_EXHAUSTIVE_LIMIT {
        let mut coeffs = vec![0u8; k];
        for _ in 1..space {
            // odometer increment
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c as u32 == p {
                    *c = 0;
                } else {
                    break;
                }
            }
            let m = combine(&coeffs);
            if m.rank() == a.dim {
                return Ok(Some(found(m)));
            }
        }
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    for _ in 0..ISO_RANDOM_TRIES {
        let coeffs: Vec<u8> = (0..k).map(|_| rng.gen_range(0..p) as u8).collect();
        let m = combine(&coeffs);
        if m.rank() == a.dim {
            return Ok(Some(found(m)));
        }
    }
    Err(Error::InconclusiveIso)
}
