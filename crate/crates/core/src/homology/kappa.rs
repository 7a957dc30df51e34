//! The maps `κ_i: H_i(G, 𝔽_p[T] ⊗ M) -> H_i(G, M)` induced by `e_t ⊗ m ↦ m`.

use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::module::{orbit_module, FpModule, ModuleMap};
use crate::pile::Pile;

use super::{homology, induced_map_between};

#[derive(Debug, Clone)]
pub struct KappaPair {
    pub p: u32,
    pub module_fingerprint: String,
    /// Blocks in orbit order.
    pub kappa1: FpMatrix,
    pub kappa2: FpMatrix,
    /// Domain dimension contributed by each orbit, per degree.
    pub block_dims: [Vec<usize>; 2],
    pub target_dims: [usize; 2],
    pub kappa1_injective: bool,
    pub kappa2_surjective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KappaSummary {
    pub kappa1_rank: usize,
    pub kappa1_domain: usize,
    pub kappa2_rank: usize,
    pub h2_dim: usize,
}

impl KappaPair {
    pub fn summary(&self) -> KappaSummary {
        KappaSummary {
            kappa1_rank: self.kappa1.rank(),
            kappa1_domain: self.kappa1.cols(),
            kappa2_rank: self.kappa2.rank(),
            h2_dim: self.target_dims[1],
        }
    }
}

/// Per-orbit matrices of `H_i(G, 𝔽_p[ṫ] ⊗ M) -> H_i(G, M)`, orbits in representative order.
pub fn kappa_blocks(pile: &Pile, module: &FpModule, i: usize, cfg: &Config) -> Result<Vec<FpMatrix>> {
    if !module.group().same_table(pile.group()) {
        return Err(Error::GroupMismatch);
    }
    let target = homology(module, i, cfg)?;
    (0..pile.orbit_count())
        .map(|o| {
            let orb = orbit_module(pile, o, module.p());
            let tensor = orb.tensor(module)?;
            let aug = ModuleMap::augmentation(&tensor, module, orb.dim())?;
            let src = homology(&tensor, i, cfg)?;
            induced_map_between(&aug, &src, &target)
        })
        .collect()
}

pub fn assemble(blocks: &[FpMatrix], p: u32, target_dim: usize) -> FpMatrix {
    blocks.iter().fold(FpMatrix::zeros(p, target_dim, 0), |acc, b| acc.hstack(b))
}

pub fn kappa_maps(pile: &Pile, module: &FpModule, cfg: &Config) -> Result<KappaPair> {
    let p = module.p();
    let b1 = kappa_blocks(pile, module, 1, cfg)?;
    let b2 = kappa_blocks(pile, module, 2, cfg)?;
    let t1 = homology(module, 1, cfg)?.dim();
    let t2 = homology(module, 2, cfg)?.dim();
    let kappa1 = assemble(&b1, p, t1);
    let kappa2 = assemble(&b2, p, t2);
    let kappa1_injective = kappa1.rank() == kappa1.cols();
    let kappa2_surjective = kappa2.rank() == t2;
    Ok(KappaPair {
        p,
        module_fingerprint: module.fingerprint(),
        block_dims: [b1.iter().map(|b| b.cols()).collect(), b2.iter().map(|b| b.cols()).collect()],
        target_dims: [t1, t2],
        kappa1,
        kappa2,
        kappa1_injective,
        kappa2_surjective,
    })
}
