//! Shapiro's isomorphism `H_i(G, 𝔽_p[ṫ] ⊗ M) ≅ H_i(G_t, M)` for one orbit.

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::module::{orbit_module, FpModule, ModuleMap};
use crate::pile::Pile;

use super::transfer::{corestriction_homology, restrict_module};
use super::{homology, homology_map_along, induced_map_between};

/// The maps around the Shapiro square for one orbit and one degree.
#[derive(Debug, Clone)]
pub struct ShapiroMaps {
    /// `H_i(G_t, M) -> H_i(G, 𝔽_p[ṫ] ⊗ M)`, induced by `m ↦ e_t ⊗ m` and the inclusion.
    pub psi: FpMatrix,
    /// `ψ⁻¹`.
    pub phi: FpMatrix,
    /// `ε_i: H_i(G, 𝔽_p[ṫ] ⊗ M) -> H_i(G, M)` from the augmentation.
    pub epsilon: FpMatrix,
    /// `Cor_t: H_i(G_t, M) -> H_i(G, M)`.
    pub cor: FpMatrix,
}

pub fn shapiro(pile: &Pile, t: usize, module: &FpModule, i: usize, cfg: &Config) -> Result<ShapiroMaps> {
    if t >= pile.points() || pile.orbit_reps()[pile.orbit_of(t)] != t {
        return Err(Error::NotOrbitRep(t));
    }
    if !module.group().same_table(pile.group()) {
        return Err(Error::GroupMismatch);
    }
    let p = module.p();
    let d = module.dim();
    let orbit = pile.orbit_of(t);
    let pts = pile.orbit(orbit);
    let pos = pts.binary_search(&t).unwrap();
    let induced = orbit_module(pile, orbit, p).tensor(module)?;

    let stab = pile.stabilizer(t);
    let (mh, incl) = restrict_module(module, stab)?;
    let mut j = FpMatrix::zeros(p, induced.dim(), d);
    for r in 0..d {
        j.set(pos * d + r, r, 1);
    }
    let h_local = homology(&mh, i, cfg)?;
    let h_induced = homology(&induced, i, cfg)?;
    let h_g = homology(module, i, cfg)?;
    let psi = homology_map_along(&incl, &j, &mh, &induced, &h_local, &h_induced)?;
    let phi = psi
        .inverse()
        .ok_or_else(|| Error::Internal(format!("Shapiro map at point {t} in degree {i} is not invertible")))?;

    let aug = ModuleMap::augmentation(&induced, module, pts.len())?;
    let epsilon = induced_map_between(&aug, &h_induced, &h_g)?;
    let cor = corestriction_homology(module, stab, i, cfg)?;
    if cor.mul(&phi) != epsilon {
        return Err(Error::Internal(format!("Shapiro square fails to commute at point {t} in degree {i}")));
    }
    Ok(ShapiroMaps { psi, phi, epsilon, cor })
}
