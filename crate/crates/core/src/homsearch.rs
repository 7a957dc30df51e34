//! Backtracking enumeration of homomorphisms between finite groups.
//!
//! Generator images are chosen in source-generator order, candidates in
//! ascending target index. After each choice the partial map is extended to
//! the subgroup generated so far by following `x -> x * s` edges; a clash
//! with an already assigned value, or a value rejected by the constraint,
//! prunes the branch.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom};

type Constraint<'a> = Box<dyn Fn(usize, usize) -> bool + Send + Sync + 'a>;

/// Lazily yields every homomorphism `source -> target` whose value `y` at each
/// element `x` satisfies `constraint(x, y)`.
pub struct HomSearch<'a> {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    constraint: Constraint<'a>,
    /// Candidate images per generator (element orders and constraint prefiltered).
    candidates: Vec<Vec<usize>>,
    /// `stack[k]` = (next candidate position for generator k, map before choosing it).
    stack: Vec<(usize, Vec<usize>)>,
    budget: usize,
    nodes: usize,
    done: bool,
}

const UNSET: usize = usize::MAX;

/// All homomorphisms `source -> target` satisfying `constraint(x, image(x))` for every `x`.
pub fn homomorphism_search<'a, F>(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, constraint: F) -> HomSearch<'a>
where
    F: Fn(usize, usize) -> bool + Send + Sync + 'a,
{
    HomSearch::new(source.clone(), target.clone(), Box::new(constraint), usize::MAX)
}

impl<'a> HomSearch<'a> {
    fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, constraint: Constraint<'a>, budget: usize) -> Self {
        let candidates = source
            .generators()
            .iter()
            .map(|&s| {
                let o = source.element_order(s);
                target.elements().filter(|&y| o.is_multiple_of(target.element_order(y)) && constraint(s, y)).collect()
            })
            .collect();
        let mut init = vec![UNSET; source.order()];
        init[0] = 0;
        let done = !constraint(0, 0);
        HomSearch { source, target, constraint, candidates, stack: vec![(0, init)], budget, nodes: 0, done }
    }

    /// Stop with `SearchCap` after visiting this many search nodes.
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn nodes_visited(&self) -> usize {
        self.nodes
    }

    /// Assign generator `k` the image `y` and close the map over `<s_0..s_k>`.
    fn extend(&self, map: &[usize], k: usize, y: usize) -> Option<Vec<usize>> {
        let g = &self.source;
        let t = &self.target;
        let gens = &g.generators()[..=k];
        let mut imgs: Vec<usize> = Vec::with_capacity(k + 1);
        for (j, &s) in gens.iter().enumerate() {
            imgs.push(if j == k { y } else { map[s] });
        }
        let mut map = map.to_vec();
        let s = gens[k];
        if map[s] != UNSET && map[s] != y {
            return None;
        }
        // Worklist over defined elements; every edge x -> x s_j must be consistent.
        let mut work: Vec<usize> = g.elements().filter(|&x| map[x] != UNSET).collect();
        while let Some(x) = work.pop() {
            for (j, &sj) in gens.iter().enumerate() {
                let z = g.mul(x, sj);
                let v = t.mul(map[x], imgs[j]);
                if map[z] == UNSET {
                    if !(self.constraint)(z, v) {
                        return None;
                    }
                    map[z] = v;
                    work.push(z);
                } else if map[z] != v {
                    return None;
                }
            }
        }
        Some(map)
    }
}

impl Iterator for HomSearch<'_> {
    type Item = Result<GroupHom>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let ngens = self.source.generators().len();
        while let Some((pos, map)) = self.stack.last().cloned() {
            let k = self.stack.len() - 1;
            if k == ngens {
                self.stack.pop();
                let hom = GroupHom::new_unchecked(self.source.clone(), self.target.clone(), map);
                return Some(Ok(hom));
            }
            if pos >= self.candidates[k].len() {
                self.stack.pop();
                continue;
            }
            self.stack.last_mut().unwrap().0 += 1;
            self.nodes += 1;
            if self.nodes > self.budget {
                self.done = true;
                return Some(Err(Error::SearchCap { budget: self.budget }));
            }
            let y = self.candidates[k][pos];
            if let Some(next) = self.extend(&map, k, y) {
                self.stack.push((0, next));
            }
        }
        self.done = true;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{direct_product, FiniteGroup};

    fn count(s: &Arc<FiniteGroup>, t: &Arc<FiniteGroup>) -> usize {
        homomorphism_search(s, t, |_, _| true).collect::<Result<Vec<_>>>().unwrap().len()
    }

    /// Oracle: every map on generators, filtered by exhaustive relation check.
    fn brute_count(s: &Arc<FiniteGroup>, t: &Arc<FiniteGroup>) -> usize {
        let k = s.generators().len();
        let n = t.order();
        let mut total = 0;
        for code in 0..n.pow(k as u32) {
            let mut c = code;
            let imgs: Vec<usize> = (0..k)
                .map(|_| {
                    let y = c % n;
                    c /= n;
                    y
                })
                .collect();
            if let Ok(h) = GroupHom::from_generator_images(s.clone(), t.clone(), &imgs) {
                if h.check_all_pairs() {
                    total += 1;
                }
            }
        }
        total
    }

    #[test]
    fn spec_examples() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        assert_eq!(count(&c2, &c2), 2);
        let one = Arc::new(FiniteGroup::trivial());
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        assert_eq!(count(&one, &s3), 1);

        let c4 = Arc::new(FiniteGroup::cyclic(4));
        let q = GroupHom::from_generator_images(c4.clone(), c2.clone(), &[c2.generators()[0]]).unwrap();
        let sections = homomorphism_search(&c2, &c4, |x, y| q.apply(y) == x).count();
        assert_eq!(sections, 0);
    }

    #[test]
    fn counts_match_brute_force() {
        let groups: Vec<Arc<FiniteGroup>> = vec![
            Arc::new(FiniteGroup::cyclic(2)),
            Arc::new(FiniteGroup::cyclic(4)),
            Arc::new(FiniteGroup::symmetric(3)),
            Arc::new(direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
        ];
        for s in &groups {
            for t in &groups {
                assert_eq!(count(s, t), brute_count(s, t));
            }
        }
    }

    #[test]
    fn results_are_homomorphisms_and_distinct() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let homs: Vec<GroupHom> = homomorphism_search(&s3, &s3, |_, _| true).map(|h| h.unwrap()).collect();
        // 6 automorphisms, 3 maps onto the order-2 subgroups, 1 trivial.
        assert_eq!(homs.len(), 10);
        for h in &homs {
            assert!(h.check_all_pairs());
        }
        for i in 0..homs.len() {
            for j in i + 1..homs.len() {
                assert_ne!(homs[i].images(), homs[j].images());
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        let mut it = homomorphism_search(&s3, &s3, |_, _| true).with_budget(2);
        let errs: Vec<_> = it.by_ref().filter_map(|r| r.err()).collect();
        assert!(matches!(errs[..], [Error::SearchCap { budget: 2 }]));
        assert!(it.next().is_none());
    }
}
