//! Homology of cyclic groups from the 2-periodic resolution
//! `… -> M --N--> M --(g-1)--> M`, kept apart from the bar machinery as an oracle.

use crate::linalg::FpMatrix;
use crate::module::FpModule;

fn ranks(module: &FpModule) -> Option<(usize, usize, usize)> {
    let grp = module.group();
    let g = grp.cyclic_generator()?;
    let p = module.p();
    let d = module.dim();
    let rho = module.matrix(g);
    let r1 = rho.sub(&FpMatrix::identity(p, d)).rank();
    let mut norm = FpMatrix::zeros(p, d, d);
    let mut power = FpMatrix::identity(p, d);
    for _ in 0..grp.order() {
        norm = norm.add(&power);
        power = power.mul(rho);
    }
    Some((d, r1, norm.rank()))
}

/// `[dim H_0, dim H_1, dim H_2]`, or `None` when the group is not cyclic.
pub fn cyclic_homology_dims(module: &FpModule) -> Option<[usize; 3]> {
    let (d, r1, rn) = ranks(module)?;
    Some([d - r1, d - r1 - rn, d - r1 - rn])
}

/// `[dim H^0, dim H^1, dim H^2]`, or `None` when the group is not cyclic.
pub fn cyclic_cohomology_dims(module: &FpModule) -> Option<[usize; 3]> {
    let (d, r1, rn) = ranks(module)?;
    Some([d - r1, d - rn - r1, d - r1 - rn])
}
