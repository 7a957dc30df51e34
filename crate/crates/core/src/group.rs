//! Finite groups as fully enumerated Cayley tables.
//!
//! Elements are indices `0..order`, with `0` the identity. Permutations
//! compose left to right, matching right actions: `(g * h)(i) = h(g(i))`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::config::DEFAULT_GROUP_ORDER_CAP;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct PermRep {
    degree: usize,
    images: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    gens: Vec<usize>,
    /// `tree[x] = (parent, k)` with `x = parent * gens[k]`; `None` for the identity.
    tree: Vec<Option<(usize, usize)>>,
    bfs: Vec<usize>,
    perms: Option<PermRep>,
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&i| b[i as usize]).collect()
}

/// Closure of permutation generators (1-based images), breadth-first from the
/// identity with generators tried in input order. Uses the default order cap.
pub fn group_from_generators(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
    group_from_generators_capped(degree, gens, DEFAULT_GROUP_ORDER_CAP)
}

pub fn group_from_generators_capped(degree: usize, gens: &[Vec<usize>], cap: usize) -> Result<FiniteGroup> {
    let mut perms0: Vec<Vec<u32>> = Vec::with_capacity(gens.len());
    for (index, g) in gens.iter().enumerate() {
        if g.len() != degree {
            return Err(Error::NotAPermutation { index, degree });
        }
        let mut seen = vec![false; degree];
        let mut img = Vec::with_capacity(degree);
        for &x in g {
            if x == 0 || x > degree || seen[x - 1] {
                return Err(Error::NotAPermutation { index, degree });
            }
            seen[x - 1] = true;
            img.push((x - 1) as u32);
        }
        perms0.push(img);
    }

    let identity: Vec<u32> = (0..degree as u32).collect();
    let mut images = vec![identity.clone()];
    let mut lookup = HashMap::new();
    lookup.insert(identity, 0usize);
    let mut tree = vec![None];
    let mut queue = VecDeque::from([0usize]);
    // right_gen[x][k] = x * gens[k]
    let mut right_gen: Vec<Vec<usize>> = Vec::new();
    while let Some(x) = queue.pop_front() {
        let mut row = Vec::with_capacity(perms0.len());
        for (k, s) in perms0.iter().enumerate() {
            let y = compose(&images[x], s);
            let idx = match lookup.get(&y) {
                Some(&i) => i,
                None => {
                    let i = images.len();
                    if i >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    lookup.insert(y.clone(), i);
                    images.push(y);
                    tree.push(Some((x, k)));
                    queue.push_back(i);
                    i
                }
            };
            row.push(idx);
        }
        right_gen.push(row);
    }
    let n = images.len();
    let gen_elems: Vec<usize> = perms0.iter().map(|s| lookup[s]).collect();

    // table[a][b] built along the BFS tree of b: a * (parent * s) = (a * parent) * s.
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        table[a * n] = a as u32;
        for b in 1..n {
            let (parent, k) = tree[b].unwrap();
            let ap = table[a * n + parent] as usize;
            table[a * n + b] = right_gen[ap][k] as u32;
        }
    }
    let bfs = (0..n).collect();
    let mut inverse = vec![0u32; n];
    for a in 0..n {
        for b in 0..n {
            if table[a * n + b] == 0 {
                inverse[a] = b as u32;
                break;
            }
        }
    }
    Ok(FiniteGroup {
        order: n,
        table,
        inverse,
        gens: gen_elems,
        tree,
        bfs,
        perms: Some(PermRep { degree, images, lookup }),
    })
}

impl FiniteGroup {
    /// Group from a multiplication table (`table[a * n + b] = a * b`, identity 0).
    ///
    /// When `gens` is `None` a generating set is chosen greedily in index order.
    /// `perms`, when given, must be a faithful right permutation representation
    /// (0-based images) consistent with the table.
    pub fn from_table(
        order: usize,
        table: Vec<u32>,
        gens: Option<Vec<usize>>,
        perms: Option<(usize, Vec<Vec<u32>>)>,
    ) -> Result<FiniteGroup> {
        if table.len() != order * order || order == 0 {
            return Err(Error::Internal("table size does not match order".into()));
        }
        let mut inverse = vec![u32::MAX; order];
        for a in 0..order {
            if table[a * order] != a as u32 || table[a] != a as u32 {
                return Err(Error::Internal("element 0 is not the identity".into()));
            }
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b as u32;
                    break;
                }
            }
            if inverse[a] == u32::MAX {
                return Err(Error::Internal(format!("element {a} has no inverse")));
            }
        }
        let mut g = FiniteGroup {
            order,
            table,
            inverse,
            gens: Vec::new(),
            tree: vec![None; order],
            bfs: Vec::new(),
            perms: perms.map(|(degree, images)| {
                let lookup = images.iter().enumerate().map(|(i, im)| (im.clone(), i)).collect();
                PermRep { degree, images, lookup }
            }),
        };
        let gens = match gens {
            Some(gs) => gs,
            None => g.greedy_generators(),
        };
        g.set_generators(gens)?;
        Ok(g)
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        for x in 1..self.order {
            if !inside[x] {
                gens.push(x);
                let members = self.closure(&gens);
                for m in members {
                    inside[m] = true;
                }
            }
        }
        gens
    }

    fn set_generators(&mut self, gens: Vec<usize>) -> Result<()> {
        let n = self.order;
        let mut tree = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut bfs = vec![0usize];
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head];
            head += 1;
            for (k, &s) in gens.iter().enumerate() {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    tree[y] = Some((x, k));
                    bfs.push(y);
                }
            }
        }
        if bfs.len() != n {
            return Err(Error::Internal("generators do not generate the group".into()));
        }
        self.gens = gens;
        self.tree = tree;
        self.bfs = bfs;
        Ok(())
    }

    pub fn trivial() -> FiniteGroup {
        group_from_generators(1, &[]).expect("trivial group")
    }

    /// Cyclic group of order `n` generated by an `n`-cycle.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n + 1).collect();
        let gens = if n > 1 { vec![gen] } else { vec![] };
        group_from_generators(n.max(1), &gens).expect("cyclic group")
    }

    /// Symmetric group on `n` points, generated by a transposition and an `n`-cycle.
    pub fn symmetric(n: usize) -> FiniteGroup {
        if n <= 1 {
            return Self::trivial();
        }
        let mut t: Vec<usize> = (1..=n).collect();
        t.swap(0, 1);
        let c: Vec<usize> = (0..n).map(|i| (i + 1) % n + 1).collect();
        group_from_generators(n, &[t, c]).expect("symmetric group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `g^{-1} x g`.
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// `(parent, generator position)` with `x = parent * generators()[k]`.
    pub fn word_step(&self, x: usize) -> Option<(usize, usize)> {
        self.tree[x]
    }

    /// Elements in breadth-first order from the identity; parents precede children.
    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs
    }

    pub fn degree(&self) -> Option<usize> {
        self.perms.as_ref().map(|p| p.degree)
    }

    /// 0-based permutation images of an element, when the group carries a permutation representation.
    pub fn perm(&self, x: usize) -> Option<&[u32]> {
        self.perms.as_ref().map(|p| p.images[x].as_slice())
    }

    pub fn find_perm(&self, images: &[u32]) -> Option<usize> {
        self.perms.as_ref().and_then(|p| p.lookup.get(images).copied())
    }

    /// Degree and per-element 0-based images; falls back to the right regular representation.
    pub fn permutation_rep(&self) -> (usize, Vec<Vec<u32>>) {
        match &self.perms {
            Some(p) => (p.degree, p.images.clone()),
            None => {
                let n = self.order;
                let images = (0..n).map(|b| (0..n).map(|x| self.mul(x, b) as u32).collect()).collect();
                (n, images)
            }
        }
    }

    pub fn has_permutations(&self) -> bool {
        self.perms.is_some()
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A generator when the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        if self.order == 1 {
            return Some(0);
        }
        self.elements().find(|&x| self.element_order(x) == self.order)
    }

    pub fn is_p_group(&self, p: u32) -> bool {
        let mut n = self.order;
        while n.is_multiple_of(p as usize) {
            n /= p as usize;
        }
        n == 1
    }

    /// Prime divisors of the order, ascending.
    pub fn prime_divisors(&self) -> Vec<u32> {
        let mut n = self.order;
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                out.push(d as u32);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n as u32);
        }
        out
    }

    /// Exhaustive associativity check; quadratic in memory, cubic in time.
    pub fn check_associativity(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    /// Sorted member list of the subgroup generated by `seed`.
    fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for &s in seed {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Structural equality of the multiplication tables.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.table == other.table
    }
}

/// A subgroup, held as a sorted member set of its parent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
    gens: Vec<usize>,
}

impl Subgroup {
    pub fn trivial() -> Subgroup {
        Subgroup { members: vec![0], gens: vec![] }
    }

    pub fn whole(g: &FiniteGroup) -> Subgroup {
        Subgroup { members: g.elements().collect(), gens: g.generators().to_vec() }
    }

    /// Members must be closed; used for sets known to be subgroups (kernels, stabilizers).
    pub(crate) fn from_members(g: &FiniteGroup, mut members: Vec<usize>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        debug_assert!(members.first() == Some(&0));
        let mut gens = Vec::new();
        let mut inside = vec![false; g.order()];
        inside[0] = true;
        for &x in &members {
            if !inside[x] {
                gens.push(x);
                for m in g.closure(&gens) {
                    inside[m] = true;
                }
            }
        }
        Subgroup { members, gens }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        g.generators().iter().all(|&s| self.gens.iter().all(|&h| self.contains(g.conj(h, s))))
    }

    /// `g^{-1} H g`.
    pub fn conjugate(&self, grp: &FiniteGroup, g: usize) -> Subgroup {
        Subgroup::from_members(grp, self.members.iter().map(|&h| grp.conj(h, g)).collect())
    }

    /// The subgroup as a group in its own right (members in parent index order),
    /// with the inclusion into the parent.
    pub fn to_group(&self, parent: &Arc<FiniteGroup>) -> (Arc<FiniteGroup>, GroupHom) {
        let n = self.members.len();
        let pos: HashMap<usize, usize> = self.members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut table = vec![0u32; n * n];
        for (i, &a) in self.members.iter().enumerate() {
            for (j, &b) in self.members.iter().enumerate() {
                table[i * n + j] = pos[&parent.mul(a, b)] as u32;
            }
        }
        let gens = self.gens.iter().map(|g| pos[g]).collect();
        let perms =
            parent.perms.as_ref().map(|p| (p.degree, self.members.iter().map(|&x| p.images[x].clone()).collect()));
        let sub = Arc::new(FiniteGroup::from_table(n, table, Some(gens), perms).expect("subgroup table is a group"));
        let incl = GroupHom { source: sub.clone(), target: parent.clone(), images: self.members.clone() };
        (sub, incl)
    }
}

/// Smallest subgroup containing `seed`.
pub fn subgroup_generated(g: &FiniteGroup, seed: &[usize]) -> Result<Subgroup> {
    for &s in seed {
        if s >= g.order() {
            return Err(Error::InvalidIndex { index: s, size: g.order() });
        }
    }
    let mut gens: Vec<usize> = seed.iter().copied().filter(|&s| s != 0).collect();
    gens.sort_unstable();
    gens.dedup();
    let members = g.closure(&gens);
    Ok(Subgroup { members, gens })
}

/// Right cosets `H r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetTransversal {
    /// One representative per coset; the identity represents `H` itself.
    pub reps: Vec<usize>,
    /// `coset_of[x]` = position of the representative of `H x`.
    pub coset_of: Vec<usize>,
}

impl CosetTransversal {
    pub fn index(&self) -> usize {
        self.reps.len()
    }

    /// Representative of the coset containing `x`.
    pub fn rep_of(&self, x: usize) -> usize {
        self.reps[self.coset_of[x]]
    }
}

pub fn coset_transversal(g: &FiniteGroup, h: &Subgroup) -> CosetTransversal {
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for r in 0..n {
        if coset_of[r] != usize::MAX {
            continue;
        }
        let pos = reps.len();
        reps.push(r);
        for &x in h.members() {
            coset_of[g.mul(x, r)] = pos;
        }
    }
    CosetTransversal { reps, coset_of }
}

/// Smallest normal subgroup containing `seed`.
pub fn normal_closure(g: &FiniteGroup, seed: &[usize]) -> Subgroup {
    let mut members = g.closure(seed);
    loop {
        let mut extra: Vec<usize> = Vec::new();
        for &x in &members {
            for &s in g.generators() {
                let c = g.conj(x, s);
                if members.binary_search(&c).is_err() && !extra.contains(&c) {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            break;
        }
        let mut seed2 = members.clone();
        seed2.extend(extra);
        members = g.closure(&seed2);
    }
    Subgroup::from_members(g, members)
}

/// Nontrivial normal subgroups of `b` inside `k`, minimal with these properties.
pub fn minimal_normal_subgroups_within(b: &FiniteGroup, k: &Subgroup) -> Result<Vec<Subgroup>> {
    if !k.is_normal_in(b) {
        return Err(Error::NotNormal);
    }
    // Every minimal one is the normal closure of any of its nonidentity elements.
    let mut candidates: Vec<Subgroup> = Vec::new();
    for &x in k.members().iter().skip(1) {
        let c = normal_closure(b, &[x]);
        if !candidates.contains(&c) {
            candidates.push(c);
        }
    }
    let minimal: Vec<Subgroup> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| d.order() < c.order() && d.is_subgroup_of(c)))
        .cloned()
        .collect();
    let mut minimal = minimal;
    minimal.sort_by(|a, b| a.members().cmp(b.members()));
    Ok(minimal)
}

/// `B / N` with the canonical projection. Cosets are numbered by their smallest element.
pub fn quotient_group(b: &Arc<FiniteGroup>, n: &Subgroup) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if !n.is_normal_in(b) {
        return Err(Error::NotNormal);
    }
    let t = coset_transversal(b, n);
    let m = t.index();
    let mut table = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            table[i * m + j] = t.coset_of[b.mul(t.reps[i], t.reps[j])] as u32;
        }
    }
    let mut gens: Vec<usize> = b.generators().iter().map(|&s| t.coset_of[s]).filter(|&c| c != 0).collect();
    gens.dedup();
    let q = Arc::new(FiniteGroup::from_table(m, table, Some(gens), None)?);
    let proj = GroupHom { source: b.clone(), target: q.clone(), images: t.coset_of.clone() };
    Ok((q, proj))
}

/// Direct product with elements `(a, b)` at index `a * |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    let mut table = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            let (xa, xb) = (x / nb, x % nb);
            let (ya, yb) = (y / nb, y % nb);
            table[x * n + y] = (a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32;
        }
    }
    let perms = match (&a.perms, &b.perms) {
        (Some(pa), Some(pb)) => Some((
            pa.degree + pb.degree,
            (0..n)
                .map(|x| {
                    let mut v = pa.images[x / nb].clone();
                    v.extend(pb.images[x % nb].iter().map(|&i| i + pa.degree as u32));
                    v
                })
                .collect(),
        )),
        _ => None,
    };
    let mut gens: Vec<usize> = a.generators().iter().map(|&s| s * nb).collect();
    gens.extend(b.generators().iter().copied());
    gens.retain(|&g| g != 0);
    FiniteGroup::from_table(n, table, Some(gens), perms).expect("direct product is a group")
}

/// A homomorphism, stored as its full image table.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl GroupHom {
    /// Validates the homomorphism property on all (element, generator) pairs.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<usize>) -> Result<GroupHom> {
        if images.len() != source.order() {
            return Err(Error::NotAHomomorphism("image table has the wrong length".into()));
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= target.order()) {
            return Err(Error::InvalidIndex { index: bad, size: target.order() });
        }
        if images[0] != 0 {
            return Err(Error::NotAHomomorphism("identity not mapped to identity".into()));
        }
        for x in source.elements() {
            for &s in source.generators() {
                if images[source.mul(x, s)] != target.mul(images[x], images[s]) {
                    return Err(Error::NotAHomomorphism(format!("relation fails at element {x}, generator {s}")));
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub(crate) fn new_unchecked(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<usize>) -> GroupHom {
        GroupHom { source, target, images }
    }

    /// Extend generator images along the word tree, then validate.
    pub fn from_generator_images(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        gen_images: &[usize],
    ) -> Result<GroupHom> {
        if gen_images.len() != source.generators().len() {
            return Err(Error::NotAHomomorphism(format!(
                "expected {} generator images, got {}",
                source.generators().len(),
                gen_images.len()
            )));
        }
        let mut images = vec![0usize; source.order()];
        for &x in source.bfs_order().iter().skip(1) {
            let (parent, k) = source.word_step(x).unwrap();
            if gen_images[k] >= target.order() {
                return Err(Error::InvalidIndex { index: gen_images[k], size: target.order() });
            }
            images[x] = target.mul(images[parent], gen_images[k]);
        }
        GroupHom::new(source, target, images)
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> GroupHom {
        GroupHom { source: g.clone(), target: g.clone(), images: g.elements().collect() }
    }

    pub fn trivial(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> GroupHom {
        GroupHom { source: source.clone(), target: target.clone(), images: vec![0; source.order()] }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|&y| other.images[y]).collect(),
        }
    }

    pub fn kernel(&self) -> Subgroup {
        let members = self.source.elements().filter(|&x| self.images[x] == 0).collect();
        Subgroup::from_members(&self.source, members)
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::from_members(&self.target, self.images.clone())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().order() == self.target.order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    /// Exhaustive check of `f(xy) = f(x) f(y)`.
    pub fn check_all_pairs(&self) -> bool {
        let s = &self.source;
        s.elements()
            .all(|x| s.elements().all(|y| self.images[s.mul(x, y)] == self.target.mul(self.images[x], self.images[y])))
    }
}

/// `{(b, x) : f(b) = g(x)}` with its coordinate projections.
pub fn fiber_product(f: &GroupHom, g: &GroupHom) -> Result<(Arc<FiniteGroup>, GroupHom, GroupHom)> {
    if !f.target().same_table(g.target()) {
        return Err(Error::TargetMismatch);
    }
    let (b, gg) = (f.source(), g.source());
    let mut pairs = Vec::new();
    for x in gg.elements() {
        for y in b.elements() {
            if f.apply(y) == g.apply(x) {
                pairs.push((y, x));
            }
        }
    }
    // Identity first, then lexicographic in (b, x).
    pairs.sort_unstable();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let n = pairs.len();
    let mut table = vec![0u32; n * n];
    for (i, &(b1, x1)) in pairs.iter().enumerate() {
        for (j, &(b2, x2)) in pairs.iter().enumerate() {
            table[i * n + j] = index[&(b.mul(b1, b2), gg.mul(x1, x2))] as u32;
        }
    }
    let perms = match (b.perm(0), gg.perm(0)) {
        (Some(_), Some(_)) => {
            let db = b.degree().unwrap();
            Some((
                db + gg.degree().unwrap(),
                pairs
                    .iter()
                    .map(|&(y, x)| {
                        let mut v = b.perm(y).unwrap().to_vec();
                        v.extend(gg.perm(x).unwrap().iter().map(|&i| i + db as u32));
                        v
                    })
                    .collect(),
            ))
        }
        _ => None,
    };
    let fp = Arc::new(FiniteGroup::from_table(n, table, None, perms)?);
    let proj_b = GroupHom::new_unchecked(fp.clone(), b.clone(), pairs.iter().map(|p| p.0).collect());
    let proj_g = GroupHom::new_unchecked(fp.clone(), gg.clone(), pairs.iter().map(|p| p.1).collect());
    Ok((fp, proj_b, proj_g))
}
