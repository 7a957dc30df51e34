//! Embedding problems for finite piles: validation, kernel reduction,
//! pull-back to id-EPs, enumeration of rigid id-EPs and two solvers.

use std::sync::Arc;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::group::{coset_transversal, minimal_normal_subgroups_within, GroupHom, Subgroup};
use crate::homology::extension::{elementary_abelian_prime, section_from_cochain};
use crate::homology::transfer::restrict_module;
use crate::homology::{
    cochain_pullback, cocycle_of_extension, cohomology, extension_from_cocycle, restriction, Bar, Extension,
};
use crate::homsearch::homomorphism_search;
use crate::linalg::{self, FpMatrix};
use crate::module::FpModule;
use crate::pile::{pile_pullback, pile_quotient, Pile, PileMorphism};

/// `φ: (G,T) -> (A,X)` and an epimorphism `α: (B,Y) -> (A,X)`; flags are recomputed on construction.
#[derive(Debug, Clone)]
pub struct EmbeddingProblem {
    phi: PileMorphism,
    alpha: PileMorphism,
    kernel: Subgroup,
    rigid: bool,
    kernel_prime: Option<u32>,
    kernel_elementary_abelian: bool,
}

impl EmbeddingProblem {
    pub fn phi(&self) -> &PileMorphism {
        &self.phi
    }

    pub fn alpha(&self) -> &PileMorphism {
        &self.alpha
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn is_finite(&self) -> bool {
        true
    }

    pub fn is_rigid(&self) -> bool {
        self.rigid
    }

    /// Whether the kernel is an elementary abelian `p`-group (trivial counts).
    pub fn kernel_elementary_abelian(&self) -> bool {
        self.kernel_elementary_abelian
    }

    /// The prime of a nontrivial elementary abelian kernel.
    pub fn kernel_prime(&self) -> Option<u32> {
        self.kernel_prime
    }

    pub fn is_id_ep(&self) -> bool {
        self.phi.is_identity()
    }

    /// `(G, T)`.
    pub fn source(&self) -> &Arc<Pile> {
        self.phi.source()
    }

    /// `(B, Y)`.
    pub fn mid(&self) -> &Arc<Pile> {
        self.alpha.source()
    }

    /// `(A, X)`.
    pub fn target(&self) -> &Arc<Pile> {
        self.phi.target()
    }

    /// Whether `γ: (G,T) -> (B,Y)` satisfies `α∘γ = φ`.
    pub fn is_solution(&self, gamma: &PileMorphism) -> bool {
        gamma.source().same_as(self.source())
            && gamma.target().same_as(self.mid())
            && gamma.then(&self.alpha).same_as(&self.phi)
    }
}

pub fn ep_validate(phi: PileMorphism, alpha: PileMorphism) -> Result<EmbeddingProblem> {
    if !phi.target().same_as(alpha.target()) {
        return Err(Error::TargetMismatch);
    }
    let epi = alpha.is_epimorphism();
    if !epi.holds {
        return Err(Error::NotEpimorphism(epi.failure.unwrap_or_default()));
    }
    let kernel = alpha.group_map().kernel();
    let rigid = alpha.is_rigid().holds;
    let (kernel_prime, kernel_elementary_abelian) = match elementary_abelian_prime(alpha.source().group(), &kernel) {
        Ok(p) => (p, true),
        Err(_) => (None, false),
    };
    Ok(EmbeddingProblem { phi, alpha, kernel, rigid, kernel_prime, kernel_elementary_abelian })
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub gamma: PileMorphism,
}

/// Outcome of the exhaustive search.
#[derive(Debug, Clone)]
pub struct BruteOutcome {
    pub solution: Option<Solution>,
    /// A group homomorphism `γ` with `α∘γ = φ` exists (whether or not points can follow).
    pub weak_solution: bool,
    pub nodes: usize,
}

fn check_brute_size(ep: &EmbeddingProblem, cfg: &Config) -> Result<()> {
    let n = ep.mid().group().order();
    if n > cfg.brute_group_cap {
        return Err(Error::ResourceCap { what: "brute-force group order", size: n, cap: cfg.brute_group_cap });
    }
    Ok(())
}

/// Per orbit representative `t`, the points `y` over `φ(t)` with `γ(G_t) ⊆ B_y`.
fn point_candidates(ep: &EmbeddingProblem, gamma: &GroupHom) -> Vec<Vec<usize>> {
    let (t_pile, y_pile) = (ep.source(), ep.mid());
    t_pile
        .orbit_reps()
        .iter()
        .map(|&t| {
            let x = ep.phi.apply_point(t);
            let stab = t_pile.stabilizer(t);
            (0..y_pile.points())
                .filter(|&y| ep.alpha.apply_point(y) == x)
                .filter(|&y| stab.members().iter().all(|&h| y_pile.stabilizer(y).contains(gamma.apply(h))))
                .collect()
        })
        .collect()
}

/// Extend a choice `t ↦ y` on orbit representatives equivariantly.
fn point_map_from(ep: &EmbeddingProblem, gamma: &GroupHom, choice: &[usize]) -> Vec<usize> {
    let (t_pile, y_pile) = (ep.source(), ep.mid());
    let mut map = vec![usize::MAX; t_pile.points()];
    for (&t, &y) in t_pile.orbit_reps().iter().zip(choice) {
        for g in t_pile.group().elements() {
            map[t_pile.act(t, g)] = y_pile.act(y, gamma.apply(g));
        }
    }
    map
}

fn make_solution(ep: &EmbeddingProblem, gamma: GroupHom, points: Vec<usize>) -> Result<Solution> {
    let gamma = PileMorphism::new(ep.source().clone(), ep.mid().clone(), gamma, points)?;
    if !ep.is_solution(&gamma) {
        return Err(Error::Internal("constructed morphism does not solve the embedding problem".into()));
    }
    Ok(Solution { gamma })
}

/// Backtracking over group maps with `α∘γ = φ`, then over point maps; first solution in
/// deterministic order.
pub fn ep_solve_brute(ep: &EmbeddingProblem, cfg: &Config) -> Result<BruteOutcome> {
    check_brute_size(ep, cfg)?;
    let (alpha, phi) = (ep.alpha.group_map(), ep.phi.group_map());
    let mut search = homomorphism_search(ep.source().group(), ep.mid().group(), |x, y| alpha.apply(y) == phi.apply(x))
        .with_budget(cfg.search_node_budget);
    let mut weak = false;
    for gamma in search.by_ref() {
        let gamma = gamma?;
        weak = true;
        let cands = point_candidates(ep, &gamma);
        if cands.iter().all(|c| !c.is_empty()) {
            let choice: Vec<usize> = cands.iter().map(|c| c[0]).collect();
            let points = point_map_from(ep, &gamma, &choice);
            let nodes = search.nodes_visited();
            return Ok(BruteOutcome { solution: Some(make_solution(ep, gamma, points)?), weak_solution: true, nodes });
        }
    }
    Ok(BruteOutcome { solution: None, weak_solution: weak, nodes: search.nodes_visited() })
}

/// Every solution, up to `cfg.enumeration_cap` of them.
pub fn ep_solutions_brute(ep: &EmbeddingProblem, cfg: &Config) -> Result<Vec<Solution>> {
    check_brute_size(ep, cfg)?;
    let (alpha, phi) = (ep.alpha.group_map(), ep.phi.group_map());
    let search = homomorphism_search(ep.source().group(), ep.mid().group(), |x, y| alpha.apply(y) == phi.apply(x))
        .with_budget(cfg.search_node_budget);
    let mut out = Vec::new();
    for gamma in search {
        let gamma = gamma?;
        let cands = point_candidates(ep, &gamma);
        for choice in product(&cands) {
            if out.len() >= cfg.enumeration_cap {
                return Err(Error::ResourceCap {
                    what: "enumerated solutions",
                    size: out.len() + 1,
                    cap: cfg.enumeration_cap,
                });
            }
            let points = point_map_from(ep, &gamma, &choice);
            out.push(make_solution(ep, gamma.clone(), points)?);
        }
    }
    Ok(out)
}

/// Cartesian product in lexicographic order.
fn product(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    sets.iter().fold(vec![Vec::new()], |acc, s| {
        acc.iter()
            .flat_map(|prefix| {
                s.iter().map(move |&x| {
                    let mut v = prefix.clone();
                    v.push(x);
                    v
                })
            })
            .collect()
    })
}

/// `α = steps[0] ∘ steps[1] ∘ … ∘ steps[n-1]`, each step with a minimal normal kernel.
///
/// Solving goes top-down: a solution `γ_i` of `(γ_{i-1}, steps[i])` feeds the next step,
/// starting from `γ_{-1} = φ`.
#[derive(Debug, Clone)]
pub struct KernelChain {
    pub steps: Vec<PileMorphism>,
}

pub fn ep_reduce_kernel(ep: &EmbeddingProblem) -> Result<KernelChain> {
    if !ep.rigid {
        return Err(Error::NotRigid(ep.alpha.is_rigid().failure.unwrap_or_default()));
    }
    Ok(KernelChain { steps: reduce(&ep.alpha)? })
}

fn reduce(alpha: &PileMorphism) -> Result<Vec<PileMorphism>> {
    let b = alpha.source();
    let k = alpha.group_map().kernel();
    if k.is_trivial() {
        return Ok(Vec::new());
    }
    let minimal = minimal_normal_subgroups_within(b.group(), &k)?;
    let c = &minimal[0];
    if c.order() == k.order() {
        return Ok(vec![alpha.clone()]);
    }
    let (q, proj) = pile_quotient(b, c)?;
    let mut images = vec![usize::MAX; q.group().order()];
    for x in b.group().elements() {
        images[proj.apply_group(x)] = alpha.apply_group(x);
    }
    let mut points = vec![usize::MAX; q.points()];
    for y in 0..b.points() {
        points[proj.apply_point(y)] = alpha.apply_point(y);
    }
    let hom = GroupHom::new(q.group().clone(), alpha.target().group().clone(), images)?;
    let upper = PileMorphism::new(q, alpha.target().clone(), hom, points)?;
    let mut chain = reduce(&upper)?;
    chain.push(proj);
    Ok(chain)
}

/// Depth-first search through the chain over all intermediate solutions.
pub fn solve_chain(phi: &PileMorphism, chain: &KernelChain, cfg: &Config) -> Result<Option<Solution>> {
    fn go(phi: &PileMorphism, steps: &[PileMorphism], cfg: &Config) -> Result<Option<PileMorphism>> {
        let Some((first, rest)) = steps.split_first() else {
            return Ok(Some(phi.clone()));
        };
        let ep = ep_validate(phi.clone(), first.clone())?;
        for s in ep_solutions_brute(&ep, cfg)? {
            if let Some(g) = go(&s.gamma, rest, cfg)? {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
    Ok(go(phi, &chain.steps, cfg)?.map(|gamma| Solution { gamma }))
}

/// The id-EP `(id_{(G,T)}, α̂)` over the pull-back `(B̂, Ŷ) = (B, Y) ×_{(A,X)} (G, T)`.
#[derive(Debug, Clone)]
pub struct PulledBack {
    pub id_ep: EmbeddingProblem,
    /// `(B̂, Ŷ) -> (B, Y)`.
    pub proj_b: PileMorphism,
}

impl PulledBack {
    /// `proj_b ∘ γ̂`.
    pub fn transport(&self, sol: &Solution) -> Solution {
        Solution { gamma: sol.gamma.then(&self.proj_b) }
    }
}

pub fn ep_pullback_to_id(ep: &EmbeddingProblem) -> Result<PulledBack> {
    if !ep.rigid {
        return Err(Error::NotRigid(ep.alpha.is_rigid().failure.unwrap_or_default()));
    }
    let pb = pile_pullback(&ep.phi, &ep.alpha)?;
    let rigid = pb.proj_g.is_rigid();
    if !rigid.holds {
        return Err(Error::NotRigid(format!("pulled-back map: {}", rigid.failure.unwrap_or_default())));
    }
    let id = PileMorphism::identity(ep.source());
    let id_ep = ep_validate(id, pb.proj_g)?;
    Ok(PulledBack { id_ep, proj_b: pb.proj_b })
}

/// An enumerated rigid id-EP with the data it was built from.
#[derive(Debug, Clone)]
pub struct EnumeratedEp {
    pub ep: EmbeddingProblem,
    pub extension: Extension,
    /// Coordinates of the extension class in `H²(G, M)`.
    pub beta: Vec<u8>,
    /// Coordinates of the splitting class in `H¹(G_t, M)`, per orbit representative.
    pub beta_t: Vec<Vec<u8>>,
}

/// Every vector of `𝔽_p^n`, lexicographic with the first coordinate most significant.
pub fn all_vectors(p: u32, n: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = (p as usize).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0u8; n];
        for x in v.iter_mut().rev() {
            *x = (code % p as usize) as u8;
            code /= p as usize;
        }
        v
    })
}

fn count_or_cap(p: u32, n: usize, what: &'static str, cap: usize) -> Result<usize> {
    match (p as usize).checked_pow(n as u32) {
        Some(c) if c <= cap => Ok(c),
        c => Err(Error::ResourceCap { what, size: c.unwrap_or(usize::MAX), cap }),
    }
}

/// Coordinates (in the basis `basis`) of every vector of its span.
fn span_vectors(p: u32, basis: &[Vec<u8>], ambient: usize) -> Vec<Vec<u8>> {
    all_vectors(p, basis.len())
        .map(|c| {
            let mut v = vec![0u8; ambient];
            for (x, b) in c.iter().zip(basis) {
                linalg::axpy(&mut v, *x, b, p);
            }
            v
        })
        .collect()
}

/// Joint restriction matrices `Res^i_t` stacked over orbit representatives.
pub fn joint_restriction(pile: &Pile, module: &FpModule, i: usize, cfg: &Config) -> Result<(FpMatrix, Vec<usize>)> {
    let p = module.p();
    let source_dim = cohomology(module, i, cfg)?.dim();
    let mut stacked = FpMatrix::zeros(p, 0, source_dim);
    let mut dims = Vec::new();
    for &t in pile.orbit_reps() {
        let r = restriction(module, pile.stabilizer(t), i, cfg)?;
        dims.push(r.rows());
        stacked = stacked.vstack(&r);
    }
    Ok((stacked, dims))
}

/// The rigid id-EPs `(id, α: (B,Y) -> (G,T))` with kernel `M`, one per admissible class
/// `β ∈ ∩_t ker Res²_t` and family of splitting classes `(β_t) ∈ ⊕_t H¹(G_t, M)`.
pub fn rigid_idep_enumerate(pile: &Arc<Pile>, module: &FpModule, cfg: &Config) -> Result<Vec<EnumeratedEp>> {
    if !module.group().same_table(pile.group()) {
        return Err(Error::GroupMismatch);
    }
    let p = module.p();
    let h2 = cohomology(module, 2, cfg)?;
    let (res2, _) = joint_restriction(pile, module, 2, cfg)?;
    let admissible = linalg::right_kernel(&res2);
    let betas = span_vectors(p, &admissible, h2.dim());

    let reps = pile.orbit_reps().to_vec();
    let mut local = Vec::new();
    for &t in &reps {
        let (mh, incl) = restrict_module(module, pile.stabilizer(t))?;
        let h1 = cohomology(&mh, 1, cfg)?;
        local.push((mh, incl, h1));
    }
    let family_dim: usize = local.iter().map(|l| l.2.dim()).sum();
    let families = count_or_cap(p, family_dim, "enumerated embedding problems", cfg.enumeration_cap)?;
    if families.saturating_mul(betas.len()) > cfg.enumeration_cap {
        return Err(Error::ResourceCap {
            what: "enumerated embedding problems",
            size: families.saturating_mul(betas.len()),
            cap: cfg.enumeration_cap,
        });
    }

    let id = PileMorphism::identity(pile);
    let bar = Bar::new(module);
    let mut out = Vec::new();
    for beta in betas {
        let c = h2.lift(&beta);
        let ext = extension_from_cocycle(module, &c, cfg)?;
        // v_t with δv_t = c restricted to G_t.
        let mut vs = Vec::new();
        for (mh, incl, _) in &local {
            let bh = Bar::new(mh);
            let ct = cochain_pullback(incl, 2, &c, &bar, &bh);
            let v = linalg::solve(&bh.coboundary_matrix(1), &ct)?
                .ok_or_else(|| Error::Internal("admissible class does not restrict to zero".into()))?;
            vs.push(v);
        }
        for family in all_vectors(p, family_dim) {
            let mut beta_t = Vec::new();
            let mut offset = 0;
            let mut subgroups = Vec::new();
            for ((mh, incl, h1), v) in local.iter().zip(&vs) {
                let coords = family[offset..offset + h1.dim()].to_vec();
                offset += h1.dim();
                let mut u = h1.lift(&coords);
                linalg::axpy(&mut u, linalg::neg(1, p), v, p);
                let d = mh.dim();
                let members: Vec<usize> = mh
                    .group()
                    .elements()
                    .map(|h| if h == 0 { 0 } else { ext.element(&u[(h - 1) * d..h * d], incl.apply(h)) })
                    .collect();
                subgroups.push(Subgroup::from_members(&ext.group, members));
                beta_t.push(coords);
            }
            let alpha = coset_union_morphism(pile, &ext, &subgroups)?;
            let ep = ep_validate(id.clone(), alpha)?;
            if !ep.rigid {
                return Err(Error::Internal("enumerated embedding problem is not rigid".into()));
            }
            out.push(EnumeratedEp { ep, extension: ext.clone(), beta: beta.clone(), beta_t });
        }
    }
    Ok(out)
}

/// `Y = ⊔_t Γ_t\B` with right multiplication, mapped by `Γ_t b ↦ t^{α(b)}`.
fn coset_union_morphism(pile: &Arc<Pile>, ext: &Extension, subgroups: &[Subgroup]) -> Result<PileMorphism> {
    let b = &ext.group;
    let mut offsets = Vec::new();
    let mut transversals = Vec::new();
    let mut total = 0;
    for s in subgroups {
        let tr = coset_transversal(b, s);
        offsets.push(total);
        total += tr.index();
        transversals.push(tr);
    }
    let action: Vec<Vec<u32>> = b
        .elements()
        .map(|x| {
            let mut row = Vec::with_capacity(total);
            for (tr, &off) in transversals.iter().zip(&offsets) {
                row.extend(tr.reps.iter().map(|&r| (off + tr.coset_of[b.mul(r, x)]) as u32));
            }
            row
        })
        .collect();
    let y = Arc::new(Pile::from_element_action(b.clone(), total, action)?);
    let mut points = Vec::with_capacity(total);
    for (tr, &t) in transversals.iter().zip(pile.orbit_reps()) {
        points.extend(tr.reps.iter().map(|&r| pile.act(t, ext.alpha.apply(r))));
    }
    let hom = GroupHom::new(b.clone(), pile.group().clone(), ext.alpha.images().to_vec())?;
    PileMorphism::new(y, pile.clone(), hom, points)
}

/// Decide an id-EP with elementary abelian kernel by linear algebra, and build a solution.
///
/// A section exists iff the extension class vanishes; sections are `k(d - v)σ` for
/// derivations `d`, and the points can follow iff `[d|_{G_t}]` equals the class read
/// off the stabilizers over each orbit representative.
pub fn ep_solve_linear(ep: &EmbeddingProblem, cfg: &Config) -> Result<Option<Solution>> {
    if !ep.is_id_ep() {
        return Err(Error::NotIdEp);
    }
    if !ep.rigid {
        return Err(Error::NotRigid(ep.alpha.is_rigid().failure.unwrap_or_default()));
    }
    let data = cocycle_of_extension(ep.alpha.group_map())?;
    let module = &data.module;
    let p = module.p();
    let bar = Bar::new(module);
    let Some(v) = linalg::solve(&bar.coboundary_matrix(1), &data.cocycle)? else {
        return Ok(None);
    };
    let b = ep.mid().group().clone();
    let (t_pile, y_pile) = (ep.source(), ep.mid());
    let h1 = cohomology(module, 1, cfg)?;

    let mut rhs = Vec::new();
    for &t in t_pile.orbit_reps() {
        let stab = t_pile.stabilizer(t);
        let (mh, incl) = restrict_module(module, stab)?;
        let bh = Bar::new(&mh);
        let y0 = (0..y_pile.points())
            .find(|&y| ep.alpha.apply_point(y) == t)
            .ok_or(Error::NotEpimorphism(format!("no point over {t}")))?;
        let by = y_pile.stabilizer(y0);
        let d = module.dim();
        let mut u = vec![0u8; bh.dim(1)];
        for (i, &h) in stab.members().iter().enumerate().skip(1) {
            let lift = *by
                .members()
                .iter()
                .find(|&&x| ep.alpha.apply_group(x) == h)
                .ok_or_else(|| Error::NotRigid(format!("stabilizer of point {y0} misses {h}")))?;
            let k = b.mul(lift, b.inv(data.section[h]));
            let m = data.coords(k).ok_or_else(|| Error::Internal("element outside the kernel".into()))?;
            u[(i - 1) * d..i * d].copy_from_slice(m);
        }
        let vt = cochain_pullback(&incl, 1, &v, &bar, &bh);
        linalg::axpy(&mut u, 1, &vt, p);
        let ht = cohomology(&mh, 1, cfg)?;
        rhs.extend(ht.project(&u)?);
    }
    let (res1, _) = joint_restriction(t_pile, module, 1, cfg)?;
    let Some(x) = linalg::solve(&res1, &rhs)? else {
        return Ok(None);
    };
    let mut w = h1.lift(&x);
    linalg::axpy(&mut w, linalg::neg(1, p), &v, p);
    let gamma = section_from_cochain(&data, &w, |c| c);
    let gamma = GroupHom::new(t_pile.group().clone(), b.clone(), gamma.images().to_vec())?;

    let cands = point_candidates(ep, &gamma);
    if let Some(i) = cands.iter().position(|c| c.is_empty()) {
        return Err(Error::Internal(format!("linear solution has no point over orbit {i}")));
    }
    let choice: Vec<usize> = cands.iter().map(|c| c[0]).collect();
    let points = point_map_from(ep, &gamma, &choice);
    make_solution(ep, gamma, points).map(Some)
}

#[cfg(test)]
mod tests;
