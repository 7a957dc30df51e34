//! Restriction and corestriction between a group and a subgroup.

use crate::config::Config;
use crate::error::Result;
use crate::group::{coset_transversal, GroupHom, Subgroup};
use crate::linalg::{self, FpMatrix};
use crate::module::FpModule;

use super::{cochain_pullback, cohomology, homology, homology_map_along, Bar};

/// `M` viewed as a module for `H`, with the inclusion `H -> G`.
pub fn restrict_module(module: &FpModule, h: &Subgroup) -> Result<(FpModule, GroupHom)> {
    let (_, incl) = h.to_group(module.group());
    let mh = module.pullback(&incl)?;
    Ok((mh, incl))
}

/// `Res: H^i(G, M) -> H^i(H, M)` by cochain pull-back.
pub fn restriction(module: &FpModule, h: &Subgroup, i: usize, cfg: &Config) -> Result<FpMatrix> {
    let (mh, incl) = restrict_module(module, h)?;
    let sg = cohomology(module, i, cfg)?;
    let sh = cohomology(&mh, i, cfg)?;
    let (bg, bh) = (Bar::new(module), Bar::new(&mh));
    let cols = sg
        .representatives()
        .iter()
        .map(|f| sh.project(&cochain_pullback(&incl, i, f, &bg, &bh)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FpMatrix::from_cols(module.p(), sh.dim(), cols))
}

/// Cochain-level transfer of an `H`-cochain `f` of degree `k` to a `G`-cochain.
///
/// With right cosets `H r` and `x̄` the representative of `H x`:
/// `(Cor f)(g_1,…,g_k) = Σ_r r⁻¹·f(h_1,…,h_k)` where `x_0 = r`, `y_i = x_{i-1} g_i`,
/// `h_i = y_i ȳ_i⁻¹` and `x_i = ȳ_i`.
pub fn corestriction_cochain(module: &FpModule, h: &Subgroup, k: usize, f: &[u8]) -> Result<Vec<u8>> {
    let (mh, _) = restrict_module(module, h)?;
    let g = module.group();
    let p = module.p();
    let tr = coset_transversal(g, h);
    let (bg, bh) = (Bar::new(module), Bar::new(&mh));
    let d = module.dim();
    let local = |x: usize| h.members().binary_search(&x).expect("coset factor lies in the subgroup");
    let mut out = vec![0u8; bg.dim(k)];
    for t in 0..bg.tuples(k) {
        let gs = bg.decode(t, k);
        let mut acc = vec![0u8; d];
        'reps: for &r in &tr.reps {
            let mut x = r;
            let mut hs = Vec::with_capacity(k);
            for &gi in &gs {
                let y = g.mul(x, gi);
                let ybar = tr.rep_of(y);
                let hi = local(g.mul(y, g.inv(ybar)));
                if hi == 0 {
                    continue 'reps;
                }
                hs.push(hi);
                x = ybar;
            }
            let base = bh.encode(&hs) * d;
            let v = module.act(g.inv(r), &f[base..base + d]);
            linalg::axpy(&mut acc, 1, &v, p);
        }
        out[t * d..(t + 1) * d].copy_from_slice(&acc);
    }
    Ok(out)
}

/// `Cor: H^i(H, M) -> H^i(G, M)` by the transversal transfer.
pub fn corestriction(module: &FpModule, h: &Subgroup, i: usize, cfg: &Config) -> Result<FpMatrix> {
    let (mh, _) = restrict_module(module, h)?;
    let sg = cohomology(module, i, cfg)?;
    let sh = cohomology(&mh, i, cfg)?;
    let cols = sh
        .representatives()
        .iter()
        .map(|f| sg.project(&corestriction_cochain(module, h, i, f)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(FpMatrix::from_cols(module.p(), sg.dim(), cols))
}

/// `H_i(H, M) -> H_i(G, M)` induced by the inclusion.
pub fn corestriction_homology(module: &FpModule, h: &Subgroup, i: usize, cfg: &Config) -> Result<FpMatrix> {
    let (mh, incl) = restrict_module(module, h)?;
    let sg = homology(module, i, cfg)?;
    let sh = homology(&mh, i, cfg)?;
    let id = FpMatrix::identity(module.p(), module.dim());
    homology_map_along(&incl, &id, &mh, module, &sh, &sg)
}
