//! Finite piles: a finite group acting on a finite set from the right.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{fiber_product, quotient_group, FiniteGroup, GroupHom, Subgroup};

#[derive(Debug, Clone)]
pub struct Pile {
    group: Arc<FiniteGroup>,
    points: usize,
    /// `action[g][t] = t^g`.
    action: Vec<Vec<u32>>,
    orbit_of: Vec<usize>,
    orbit_reps: Vec<usize>,
    stabilizers: Vec<Subgroup>,
}

impl Pile {
    /// Extend generator permutations (0-based images) to the whole group.
    pub fn new(group: Arc<FiniteGroup>, points: usize, gen_action: &[Vec<usize>]) -> Result<Pile> {
        let gens = group.generators();
        if gen_action.len() != gens.len() {
            return Err(Error::ActionInconsistent(format!(
                "{} generator permutations for {} generators",
                gen_action.len(),
                gens.len()
            )));
        }
        for (k, perm) in gen_action.iter().enumerate() {
            let mut seen = vec![false; points];
            if perm.len() != points || perm.iter().any(|&t| t >= points || std::mem::replace(&mut seen[t], true)) {
                return Err(Error::ActionInconsistent(format!("generator {k} does not permute the points")));
            }
        }
        let n = group.order();
        let mut action = vec![Vec::new(); n];
        action[0] = (0..points as u32).collect();
        for &x in group.bfs_order().iter().skip(1) {
            let (parent, k) = group.word_step(x).unwrap();
            action[x] = action[parent].iter().map(|&t| gen_action[k][t as usize] as u32).collect();
        }
        for x in 0..n {
            for (k, &s) in gens.iter().enumerate() {
                let xs = group.mul(x, s);
                let ok = (0..points).all(|t| action[xs][t] as usize == gen_action[k][action[x][t] as usize]);
                if !ok {
                    return Err(Error::ActionInconsistent(format!("relation fails at element {x}, generator {k}")));
                }
            }
        }
        Ok(Self::assemble(group, points, action))
    }

    /// From a full per-element table; checked to be a right action.
    pub fn from_element_action(group: Arc<FiniteGroup>, points: usize, action: Vec<Vec<u32>>) -> Result<Pile> {
        if action.len() != group.order() || action.iter().any(|a| a.len() != points) {
            return Err(Error::ActionInconsistent("action table has the wrong shape".into()));
        }
        if action[0].iter().enumerate().any(|(t, &u)| t != u as usize) {
            return Err(Error::ActionInconsistent("identity does not act trivially".into()));
        }
        for x in group.elements() {
            for &s in group.generators() {
                let xs = group.mul(x, s);
                if (0..points).any(|t| action[xs][t] != action[s][action[x][t] as usize]) {
                    return Err(Error::ActionInconsistent(format!(
                        "relation fails at element {x}, generator element {s}"
                    )));
                }
            }
        }
        Ok(Self::assemble(group, points, action))
    }

    fn assemble(group: Arc<FiniteGroup>, points: usize, action: Vec<Vec<u32>>) -> Pile {
        let mut orbit_of = vec![usize::MAX; points];
        let mut orbit_reps = Vec::new();
        for t in 0..points {
            if orbit_of[t] != usize::MAX {
                continue;
            }
            let id = orbit_reps.len();
            orbit_reps.push(t);
            for a in &action {
                orbit_of[a[t] as usize] = id;
            }
        }
        let stabilizers = (0..points)
            .map(|t| {
                let members = group.elements().filter(|&g| action[g][t] as usize == t).collect();
                Subgroup::from_members(&group, members)
            })
            .collect();
        Pile { group, points, action, orbit_of, orbit_reps, stabilizers }
    }

    /// The group acting on its own underlying set by right multiplication.
    pub fn regular(group: Arc<FiniteGroup>) -> Pile {
        let action = group.elements().map(|b| group.elements().map(|x| group.mul(x, b) as u32).collect()).collect();
        let n = group.order();
        Self::assemble(group, n, action)
    }

    /// A single point fixed by everything.
    pub fn point(group: Arc<FiniteGroup>) -> Pile {
        let action = vec![vec![0u32]; group.order()];
        Self::assemble(group, 1, action)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// `t^g`.
    #[inline]
    pub fn act(&self, t: usize, g: usize) -> usize {
        self.action[g][t] as usize
    }

    pub fn action_of(&self, g: usize) -> &[u32] {
        &self.action[g]
    }

    /// Permutation of the points induced by each generator of the group.
    pub fn generator_action(&self) -> Vec<Vec<usize>> {
        self.group.generators().iter().map(|&s| self.action[s].iter().map(|&t| t as usize).collect()).collect()
    }

    pub fn orbit_of(&self, t: usize) -> usize {
        self.orbit_of[t]
    }

    /// Smallest point of each orbit, in increasing order.
    pub fn orbit_reps(&self) -> &[usize] {
        &self.orbit_reps
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_reps.len()
    }

    /// Points of an orbit, ascending.
    pub fn orbit(&self, id: usize) -> Vec<usize> {
        (0..self.points).filter(|&t| self.orbit_of[t] == id).collect()
    }

    pub fn stabilizer(&self, t: usize) -> &Subgroup {
        &self.stabilizers[t]
    }

    /// Some `g` with `rep^g = t`, where `rep` is the representative of `t`'s orbit.
    pub fn transporter(&self, t: usize) -> usize {
        let r = self.orbit_reps[self.orbit_of[t]];
        self.group.elements().find(|&g| self.act(r, g) == t).unwrap()
    }

    pub fn same_as(&self, other: &Pile) -> bool {
        self.group.same_table(&other.group) && self.points == other.points && self.action == other.action
    }
}

/// Yes/no with a certificate: witnesses on success, a reason on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    /// For epimorphisms: a witness point `y` per target point `x`.
    pub witnesses: Vec<usize>,
    pub failure: Option<String>,
}

impl Check {
    fn pass(witnesses: Vec<usize>) -> Check {
        Check { holds: true, witnesses, failure: None }
    }

    fn fail(msg: String) -> Check {
        Check { holds: false, witnesses: Vec::new(), failure: Some(msg) }
    }
}

#[derive(Debug, Clone)]
pub struct PileMorphism {
    source: Arc<Pile>,
    target: Arc<Pile>,
    group_map: GroupHom,
    point_map: Vec<usize>,
}

impl PileMorphism {
    /// Validates group-map consistency and equivariance `a(y^b) = a(y)^{a(b)}`.
    pub fn new(source: Arc<Pile>, target: Arc<Pile>, group_map: GroupHom, point_map: Vec<usize>) -> Result<Self> {
        if !group_map.source().same_table(source.group()) || !group_map.target().same_table(target.group()) {
            return Err(Error::GroupMismatch);
        }
        if point_map.len() != source.points() {
            return Err(Error::NotEquivariant("point map has the wrong length".into()));
        }
        if let Some(&x) = point_map.iter().find(|&&x| x >= target.points()) {
            return Err(Error::InvalidIndex { index: x, size: target.points() });
        }
        for &b in source.group().generators() {
            let ab = group_map.apply(b);
            for y in 0..source.points() {
                if point_map[source.act(y, b)] != target.act(point_map[y], ab) {
                    return Err(Error::NotEquivariant(format!("fails at point {y}, generator element {b}")));
                }
            }
        }
        Ok(PileMorphism { source, target, group_map, point_map })
    }

    pub fn identity(p: &Arc<Pile>) -> PileMorphism {
        PileMorphism {
            source: p.clone(),
            target: p.clone(),
            group_map: GroupHom::identity(p.group()),
            point_map: (0..p.points()).collect(),
        }
    }

    pub fn source(&self) -> &Arc<Pile> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Pile> {
        &self.target
    }

    pub fn group_map(&self) -> &GroupHom {
        &self.group_map
    }

    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    #[inline]
    pub fn apply_group(&self, b: usize) -> usize {
        self.group_map.apply(b)
    }

    #[inline]
    pub fn apply_point(&self, y: usize) -> usize {
        self.point_map[y]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PileMorphism) -> PileMorphism {
        PileMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            group_map: self.group_map.then(&other.group_map),
            point_map: self.point_map.iter().map(|&y| other.point_map[y]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.source.same_as(&self.target)
            && self.group_map.images().iter().enumerate().all(|(i, &x)| i == x)
            && self.point_map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Same underlying maps (and same piles).
    pub fn same_as(&self, other: &PileMorphism) -> bool {
        self.source.same_as(&other.source)
            && self.target.same_as(&other.target)
            && self.group_map.images() == other.group_map.images()
            && self.point_map == other.point_map
    }

    fn image_of(&self, h: &Subgroup) -> Vec<usize> {
        let mut img: Vec<usize> = h.members().iter().map(|&b| self.group_map.apply(b)).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn is_epimorphism(&self) -> Check {
        if !self.group_map.is_surjective() {
            return Check::fail("group map is not surjective".into());
        }
        let mut witnesses = vec![usize::MAX; self.target.points()];
        for y in 0..self.source.points() {
            let x = self.point_map[y];
            if witnesses[x] != usize::MAX {
                continue;
            }
            if self.image_of(self.source.stabilizer(y)) == self.target.stabilizer(x).members() {
                witnesses[x] = y;
            }
        }
        if let Some(x) = witnesses.iter().position(|&w| w == usize::MAX) {
            let covered = self.point_map.contains(&x);
            return Check::fail(if covered {
                format!("no point over {x} has stabilizer mapping onto its stabilizer")
            } else {
                format!("point {x} is not in the image")
            });
        }
        Check::pass(witnesses)
    }

    pub fn is_rigid(&self) -> Check {
        for y in 0..self.source.points() {
            let by = self.source.stabilizer(y);
            let x = self.point_map[y];
            let img = self.image_of(by);
            if img.len() != by.order() {
                return Check::fail(format!("stabilizer of point {y} is not mapped injectively"));
            }
            if img != self.target.stabilizer(x).members() {
                return Check::fail(format!("stabilizer of point {y} does not map onto the stabilizer of {x}"));
            }
        }
        let (so, to) = (self.source.orbit_count(), self.target.orbit_count());
        let mut hit = vec![usize::MAX; to];
        for (i, &r) in self.source.orbit_reps().iter().enumerate() {
            let j = self.target.orbit_of(self.point_map[r]);
            if hit[j] != usize::MAX {
                return Check::fail(format!("orbits {} and {i} map to the same orbit {j}", hit[j]));
            }
            hit[j] = i;
        }
        if so != to {
            let j = hit.iter().position(|&h| h == usize::MAX).unwrap();
            return Check::fail(format!("orbit {j} of the target is not hit"));
        }
        Check::pass(Vec::new())
    }
}

/// `(B/C, Y/C)` with the canonical morphism. C-orbits are numbered by their smallest point.
pub fn pile_quotient(p: &Arc<Pile>, c: &Subgroup) -> Result<(Arc<Pile>, PileMorphism)> {
    let (q, proj) = quotient_group(p.group(), c)?;
    let mut class = vec![usize::MAX; p.points()];
    let mut reps = Vec::new();
    for y in 0..p.points() {
        if class[y] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(y);
        for &k in c.members() {
            class[p.act(y, k)] = id;
        }
    }
    let mut action = vec![Vec::new(); q.order()];
    for b in p.group().elements() {
        let qb = proj.apply(b);
        if action[qb].is_empty() {
            action[qb] = reps.iter().map(|&y| class[p.act(y, b)] as u32).collect();
        }
    }
    let qp = Arc::new(Pile::from_element_action(q, reps.len(), action)?);
    let m = PileMorphism::new(p.clone(), qp.clone(), proj, class)?;
    Ok((qp, m))
}

/// The pull-back of piles along `phi: (G,T) -> (A,X)` and `alpha: (B,Y) -> (A,X)`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub pile: Arc<Pile>,
    /// Projection to `(B, Y)`.
    pub proj_b: PileMorphism,
    /// Projection to `(G, T)`; rigid whenever `alpha` is.
    pub proj_g: PileMorphism,
    pub alpha_rigid: bool,
}

pub fn pile_pullback(phi: &PileMorphism, alpha: &PileMorphism) -> Result<Pullback> {
    if !phi.target().same_as(alpha.target()) {
        return Err(Error::TargetMismatch);
    }
    let (fp, pb, pg) = fiber_product(alpha.group_map(), phi.group_map())?;
    let (bp, gp) = (alpha.source(), phi.source());
    let mut pts = Vec::new();
    for y in 0..bp.points() {
        for t in 0..gp.points() {
            if alpha.apply_point(y) == phi.apply_point(t) {
                pts.push((y, t));
            }
        }
    }
    let index: std::collections::HashMap<(usize, usize), usize> =
        pts.iter().enumerate().map(|(i, &pt)| (pt, i)).collect();
    let action = fp
        .elements()
        .map(|e| {
            let (b, g) = (pb.apply(e), pg.apply(e));
            pts.iter().map(|&(y, t)| index[&(bp.act(y, b), gp.act(t, g))] as u32).collect()
        })
        .collect();
    let pile = Arc::new(Pile::from_element_action(fp, pts.len(), action)?);
    let proj_b = PileMorphism::new(pile.clone(), bp.clone(), pb, pts.iter().map(|p| p.0).collect())?;
    let proj_g = PileMorphism::new(pile.clone(), gp.clone(), pg, pts.iter().map(|p| p.1).collect())?;
    Ok(Pullback { pile, proj_b, proj_g, alpha_rigid: alpha.is_rigid().holds })
}
