use super::*;
use crate::group::{direct_product, subgroup_generated, FiniteGroup};
use crate::homology::is_split;
use crate::meataxe::simple_modules;

fn cfg() -> Config {
    Config::default()
}

fn c(n: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(n))
}

fn regular_quotient(big: &Arc<FiniteGroup>, small: &Arc<FiniteGroup>, images: &[usize]) -> PileMorphism {
    let hom = GroupHom::from_generator_images(big.clone(), small.clone(), images).unwrap();
    let y = Arc::new(Pile::regular(big.clone()));
    let x = Arc::new(Pile::regular(small.clone()));
    let pm = big.elements().map(|b| hom.apply(b)).collect();
    PileMorphism::new(y, x, hom, pm).unwrap()
}

fn coset_pile(g: &Arc<FiniteGroup>, h: &Subgroup) -> Arc<Pile> {
    let tr = coset_transversal(g, h);
    let action = g.elements().map(|x| tr.reps.iter().map(|&r| tr.coset_of[g.mul(r, x)] as u32).collect()).collect();
    Arc::new(Pile::from_element_action(g.clone(), tr.index(), action).unwrap())
}

fn two_fixed() -> Arc<Pile> {
    Arc::new(Pile::new(c(2), 2, &[vec![0, 1]]).unwrap())
}

fn sample_piles() -> Vec<Arc<Pile>> {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let v4 = Arc::new(direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)));
    let c4 = c(4);
    let two = subgroup_generated(&c4, &[c4.generators()[0]]).unwrap();
    let c2_in_c4 = subgroup_generated(&c4, &[c4.mul(c4.generators()[0], c4.generators()[0])]).unwrap();
    let _ = two;
    vec![
        Arc::new(Pile::point(c(2))),
        Arc::new(Pile::point(c(3))),
        Arc::new(Pile::regular(c(2))),
        Arc::new(Pile::regular(c(3))),
        two_fixed(),
        coset_pile(&c4, &c2_in_c4),
        Arc::new(Pile::new(s3.clone(), 3, &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap()),
        coset_pile(&v4, &subgroup_generated(&v4, &[v4.generators()[0]]).unwrap()),
        Arc::new(Pile::point(s3)),
    ]
}

#[test]
fn validate_examples() {
    let p = Arc::new(Pile::regular(c(3)));
    let id = PileMorphism::identity(&p);
    let ep = ep_validate(id.clone(), id.clone()).unwrap();
    assert!(ep.is_rigid() && ep.kernel().is_trivial() && ep.is_id_ep() && ep.is_finite());
    assert!(ep.kernel_elementary_abelian());

    let alpha = regular_quotient(&c(4), &c(2), &[1]);
    let ep = ep_validate(PileMorphism::identity(alpha.target()), alpha).unwrap();
    assert!(ep.is_rigid());
    assert_eq!(ep.kernel().order(), 2);
    assert_eq!(ep.kernel_prime(), Some(2));

    // Points: map the two fixed points of C2 onto one of two fixed points.
    let src = Arc::new(Pile::new(c(2), 1, &[vec![0]]).unwrap());
    let tgt = two_fixed();
    let alpha = PileMorphism::new(src, tgt.clone(), GroupHom::identity(tgt.group()), vec![0]).unwrap();
    let err = ep_validate(PileMorphism::identity(&tgt), alpha).unwrap_err();
    assert!(matches!(err, Error::NotEpimorphism(_)));

    let other = Arc::new(Pile::regular(c(2)));
    let alpha = regular_quotient(&c(4), &c(2), &[1]);
    let err = ep_validate(PileMorphism::identity(&Arc::new(Pile::point(c(2)))), alpha).unwrap_err();
    assert!(matches!(err, Error::TargetMismatch));
    let _ = other;
}

#[test]
fn reduce_kernel_examples() {
    let p = Arc::new(Pile::regular(c(2)));
    let id = PileMorphism::identity(&p);
    let ep = ep_validate(id.clone(), id).unwrap();
    assert!(ep_reduce_kernel(&ep).unwrap().steps.is_empty());

    let alpha = regular_quotient(&c(4), &c(2), &[1]);
    let ep = ep_validate(PileMorphism::identity(alpha.target()), alpha.clone()).unwrap();
    let chain = ep_reduce_kernel(&ep).unwrap();
    assert_eq!(chain.steps.len(), 1);
    assert!(chain.steps[0].same_as(&alpha));

    // C2^3 -> C2 with kernel V4: two steps.
    let c2 = FiniteGroup::cyclic(2);
    let b = Arc::new(direct_product(&direct_product(&c2, &c2), &c2));
    let imgs: Vec<usize> = b.generators().iter().enumerate().map(|(i, _)| if i == 0 { 1 } else { 0 }).collect();
    let alpha = regular_quotient(&b, &c(2), &imgs);
    assert_eq!(alpha.group_map().kernel().order(), 4);
    let ep = ep_validate(PileMorphism::identity(alpha.target()), alpha).unwrap();
    let chain = ep_reduce_kernel(&ep).unwrap();
    assert_eq!(chain.steps.len(), 2);
    for s in &chain.steps {
        assert!(s.is_rigid().holds && s.is_epimorphism().holds);
        assert_eq!(s.group_map().kernel().order(), 2);
    }
    let composed = chain.steps[1].then(&chain.steps[0]);
    assert!(composed.same_as(ep.alpha()));
    assert!(solve_chain(ep.phi(), &chain, &cfg()).unwrap().is_some());
    assert!(ep_solve_brute(&ep, &cfg()).unwrap().solution.is_some());

    // C8 -> C2: kernel C4, two steps, unsolvable.
    let alpha = regular_quotient(&c(8), &c(2), &[1]);
    let ep = ep_validate(PileMorphism::identity(alpha.target()), alpha).unwrap();
    let chain = ep_reduce_kernel(&ep).unwrap();
    assert_eq!(chain.steps.len(), 2);
    assert!(solve_chain(ep.phi(), &chain, &cfg()).unwrap().is_none());
    assert!(ep_solve_brute(&ep, &cfg()).unwrap().solution.is_none());
}

#[test]
fn pullback_examples() {
    // phi = id: the pull-back is an isomorphic copy.
    let alpha = regular_quotient(&c(4), &c(2), &[1]);
    let ep = ep_validate(PileMorphism::identity(alpha.target()), alpha).unwrap();
    let pb = ep_pullback_to_id(&ep).unwrap();
    assert_eq!(pb.id_ep.mid().group().order(), 4);
    assert_eq!(pb.id_ep.mid().points(), 4);
    assert!(pb.id_ep.alpha().is_rigid().holds);

    // phi: C2 -> 1 on a point, alpha: regular C2 -> 1 on a point.
    let one = Arc::new(Pile::point(c(1)));
    let g = Arc::new(Pile::point(c(2)));
    let to_one = |p: &Arc<Pile>| {
        let pts = vec![0; p.points()];
        PileMorphism::new(p.clone(), one.clone(), GroupHom::trivial(p.group(), one.group()), pts).unwrap()
    };
    let ep = ep_validate(to_one(&g), to_one(&Arc::new(Pile::regular(c(2))))).unwrap();
    let pb = ep_pullback_to_id(&ep).unwrap();
    assert_eq!(pb.id_ep.mid().group().order(), 4);
    assert!(pb.id_ep.is_id_ep() && pb.id_ep.is_rigid());
    let sol = ep_solve_brute(&pb.id_ep, &cfg()).unwrap().solution.unwrap();
    assert!(ep.is_solution(&pb.transport(&sol).gamma));

    // Non-rigid problems are refused.
    let ep = ep_validate(to_one(&g), to_one(&g)).unwrap();
    assert!(!ep.is_rigid());
    assert!(matches!(ep_pullback_to_id(&ep), Err(Error::NotRigid(_))));
}

#[test]
fn enumerate_examples() {
    for g in [c(2), c(3)] {
        let pile = Arc::new(Pile::point(g.clone()));
        for p in [2, 3] {
            for m in simple_modules(&g, p, &cfg()).unwrap() {
                let eps = rigid_idep_enumerate(&pile, &m, &cfg()).unwrap();
                let h1 = cohomology(&m, 1, &cfg()).unwrap().dim();
                assert_eq!(eps.len(), (p as usize).pow(h1 as u32));
                assert!(eps.iter().all(|e| e.beta.iter().all(|&x| x == 0)));
            }
        }
    }
    let f2 = FpModule::trivial(c(2), 2, 1);
    let eps = rigid_idep_enumerate(&Arc::new(Pile::regular(c(2))), &f2, &cfg()).unwrap();
    assert_eq!(eps.len(), 2);
    assert!(eps.iter().any(|e| e.ep.mid().group().elements().any(|x| e.ep.mid().group().element_order(x) == 4)));

    let eps = rigid_idep_enumerate(&two_fixed(), &f2, &cfg()).unwrap();
    assert_eq!(eps.len(), 4);
    for e in &eps {
        assert!(e.ep.is_rigid());
        assert_eq!(e.ep.kernel().order(), 2);
    }
}

#[test]
fn solver_examples() {
    let f2 = FpModule::trivial(c(2), 2, 1);
    let eps = rigid_idep_enumerate(&two_fixed(), &f2, &cfg()).unwrap();
    for e in &eps {
        let brute = ep_solve_brute(&e.ep, &cfg()).unwrap();
        let linear = ep_solve_linear(&e.ep, &cfg()).unwrap();
        let equal = e.beta_t[0] == e.beta_t[1];
        assert_eq!(brute.solution.is_some(), equal);
        assert_eq!(linear.is_some(), equal);
        assert!(brute.weak_solution);
    }
    let free = rigid_idep_enumerate(&Arc::new(Pile::regular(c(2))), &f2, &cfg()).unwrap();
    for e in &free {
        let zero = e.beta.iter().all(|&x| x == 0);
        let brute = ep_solve_brute(&e.ep, &cfg()).unwrap();
        assert_eq!(brute.solution.is_some(), zero);
        assert_eq!(brute.weak_solution, zero);
        assert_eq!(ep_solve_linear(&e.ep, &cfg()).unwrap().is_some(), zero);
    }
    // A split EP built with all beta_t = 0: the zero derivation and the identity cosets.
    let pile = Arc::new(Pile::point(c(2)));
    let eps = rigid_idep_enumerate(&pile, &f2, &cfg()).unwrap();
    let sol = ep_solve_brute(&eps[0].ep, &cfg()).unwrap().solution.unwrap();
    assert_eq!(sol.gamma.point_map(), &[0]);
    assert_eq!(sol.gamma.apply_group(1), eps[0].extension.element(&[0], 1));

    let alpha = regular_quotient(&c(4), &c(2), &[1]);
    let ep = ep_validate(PileMorphism::identity(alpha.target()), alpha.clone()).unwrap();
    assert!(ep_solve_linear(&ep, &cfg()).unwrap().is_none());
    let phi = PileMorphism::new(
        Arc::new(Pile::regular(c(4))),
        alpha.target().clone(),
        alpha.group_map().clone(),
        alpha.point_map().to_vec(),
    )
    .unwrap();
    let not_id = ep_validate(phi, alpha).unwrap();
    assert!(matches!(ep_solve_linear(&not_id, &cfg()), Err(Error::NotIdEp)));
    assert!(ep_solve_brute(&not_id, &cfg()).unwrap().solution.is_some());
}

#[test]
fn solvers_agree_on_enumerated_problems() {
    for pile in sample_piles() {
        for p in [2, 3] {
            for m in simple_modules(pile.group(), p, &cfg()).unwrap() {
                for e in rigid_idep_enumerate(&pile, &m, &cfg()).unwrap() {
                    let brute = ep_solve_brute(&e.ep, &cfg()).unwrap();
                    let linear = ep_solve_linear(&e.ep, &cfg()).unwrap();
                    assert_eq!(brute.solution.is_some(), linear.is_some());
                    if let Some(s) = &linear {
                        assert!(e.ep.is_solution(&s.gamma));
                    }
                    let zero = e.beta.iter().all(|&x| x == 0);
                    assert_eq!(is_split(e.ep.alpha().group_map(), &cfg()).unwrap().is_some(), zero);
                    assert!(e.ep.alpha().is_rigid().holds);
                    assert_eq!(e.ep.kernel().order(), (p as usize).pow(m.dim() as u32));
                }
            }
        }
    }
}

#[test]
fn brute_size_cap() {
    let small = Config { brute_group_cap: 2, ..cfg() };
    let alpha = regular_quotient(&c(4), &c(2), &[1]);
    let ep = ep_validate(PileMorphism::identity(alpha.target()), alpha).unwrap();
    assert!(matches!(ep_solve_brute(&ep, &small), Err(Error::ResourceCap { .. })));
    // Mismatched classes on two fixed points: both sections get tried and rejected.
    let tiny = Config { search_node_budget: 1, ..cfg() };
    let f2 = FpModule::trivial(c(2), 2, 1);
    let eps = rigid_idep_enumerate(&two_fixed(), &f2, &cfg()).unwrap();
    let e = eps.iter().find(|e| e.beta_t[0] != e.beta_t[1]).unwrap();
    assert!(matches!(ep_solve_brute(&e.ep, &tiny), Err(Error::SearchCap { .. })));
}
