use super::*;
use crate::group::{coset_transversal, direct_product, subgroup_generated, FiniteGroup};

fn cfg() -> Config {
    Config::default()
}

fn c(n: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(n))
}

fn run(pile: &Pile, primes: Option<Vec<u32>>) -> Report {
    let opts = AnalyzeOptions { primes, ..AnalyzeOptions::default() };
    analyze(&Arc::new(pile.clone()), "test", &opts, &cfg()).unwrap()
}

fn all_three(r: &Report) -> (Option<bool>, Option<bool>, Option<bool>) {
    (r.verdicts.homological, r.verdicts.dual, r.verdicts.oracle)
}

fn with_extra_fixed_point(pile: &Pile) -> Pile {
    let g = pile.group();
    let n = pile.points();
    let action = g
        .elements()
        .map(|x| {
            let mut v = pile.action_of(x).to_vec();
            v.push(n as u32);
            v
        })
        .collect();
    Pile::from_element_action(g.clone(), n + 1, action).unwrap()
}

fn coset_pile(g: &Arc<FiniteGroup>, seeds: &[&[usize]]) -> Pile {
    let mut action: Vec<Vec<u32>> = vec![Vec::new(); g.order()];
    let mut offset = 0;
    for seed in seeds {
        let h = subgroup_generated(g, seed).unwrap();
        let tr = coset_transversal(g, &h);
        for x in g.elements() {
            action[x].extend(tr.reps.iter().map(|&r| (offset + tr.coset_of[g.mul(r, x)]) as u32));
        }
        offset += tr.index();
    }
    Pile::from_element_action(g.clone(), offset, action).unwrap()
}

#[test]
fn spec_examples() {
    let r = run(&Pile::point(c(2)), Some(vec![2]));
    assert_eq!(all_three(&r), (Some(true), Some(true), Some(true)));
    assert!(r.agree);

    let r = run(&Pile::regular(c(2)), Some(vec![2]));
    assert_eq!(all_three(&r), (Some(false), Some(false), Some(false)));
    assert_eq!(r.records[0].kappa2_surjective, Some(false));
    assert_eq!(r.records[0].kappa1_injective, Some(true));
    let w = &r.records[0].witness;
    assert!(w["homological"].is_object() && w["dual"].is_object() && w["oracle"].is_object());

    let two = Pile::new(c(2), 2, &[vec![0, 1]]).unwrap();
    let r = run(&two, Some(vec![2]));
    assert_eq!(all_three(&r), (Some(false), Some(false), Some(false)));
    assert_eq!(r.records[0].kappa1_injective, Some(false));
    assert_eq!(r.records[0].witness["homological"]["vector"], json!([1, 1]));
    assert_eq!(r.records[0].dual_res1_surjective, Some(false));
}

#[test]
fn routes_agree_on_small_piles() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let v4 = Arc::new(direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)));
    let (t, r3) = (s3.generators()[0], s3.generators()[1]);
    let piles = vec![
        Pile::point(s3.clone()),
        Pile::regular(c(3)),
        Pile::regular(c(4)),
        coset_pile(&s3, &[&[t], &[r3]]),
        coset_pile(&s3, &[&[t]]),
        coset_pile(&s3, &[&[r3]]),
        coset_pile(&v4, &[&[v4.generators()[0]], &[v4.generators()[1]]]),
        with_extra_fixed_point(&Pile::regular(c(2))),
    ];
    for pile in piles {
        let r = run(&pile, None);
        assert!(r.agree);
        let (a, b, o) = all_three(&r);
        assert_eq!(a, b);
        assert_eq!(b, o);
        for rec in &r.records {
            assert_eq!(rec.kappa2_surjective_at_dual, rec.dual_res2_trivial_intersection);
            assert_eq!(rec.kappa1_injective_at_dual, rec.dual_res1_surjective);
            assert_eq!(rec.oracle_ok, rec.dual_ok);
        }
    }
}

#[test]
fn route_subsets() {
    let opts = AnalyzeOptions { routes: RouteSet::only(Route::Dual), ..AnalyzeOptions::default() };
    let r = analyze(&Arc::new(Pile::regular(c(2))), "x", &opts, &cfg()).unwrap();
    assert_eq!(all_three(&r), (None, Some(false), None));
    assert_eq!(r.projective(), Some(false));
    assert_eq!("oracle".parse::<RouteSet>().unwrap(), RouteSet::only(Route::Oracle));
    assert!("sideways".parse::<RouteSet>().is_err());
}

#[test]
fn p_group_uses_only_the_trivial_module() {
    for g in [c(2), c(4), Arc::new(direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)))] {
        let r = run(&Pile::regular(g.clone()), Some(vec![2]));
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.records[0].dim, 1);
    }
}

#[test]
fn adding_a_fixed_point_keeps_kappa2_surjective() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let (t, r3) = (s3.generators()[0], s3.generators()[1]);
    for pile in [Pile::regular(c(3)), coset_pile(&s3, &[&[t]]), coset_pile(&s3, &[&[r3]]), Pile::regular(c(2))] {
        let before = run(&pile, None);
        let after = run(&with_extra_fixed_point(&pile), None);
        for (a, b) in before.records.iter().zip(&after.records) {
            if a.kappa2_surjective == Some(true) {
                assert_eq!(b.kappa2_surjective, Some(true));
            }
        }
    }
}

#[test]
fn relabeling_points_keeps_verdicts() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let (t, r3) = (s3.generators()[0], s3.generators()[1]);
    let pile = coset_pile(&s3, &[&[t], &[r3]]);
    let n = pile.points();
    let perm: Vec<u32> = (0..n as u32).rev().collect();
    let inv: Vec<usize> = {
        let mut v = vec![0; n];
        for (i, &x) in perm.iter().enumerate() {
            v[x as usize] = i;
        }
        v
    };
    let action = s3.elements().map(|x| (0..n).map(|i| perm[pile.act(inv[i], x)]).collect()).collect();
    let relabeled = Pile::from_element_action(s3.clone(), n, action).unwrap();
    let a = run(&pile, None);
    let b = run(&relabeled, None);
    assert_eq!(all_three(&a), all_three(&b));
    let flags = |r: &Report| r.records.iter().map(|x| (x.homological_ok(), x.dual_ok, x.oracle_ok)).collect::<Vec<_>>();
    assert_eq!(flags(&a), flags(&b));
}

#[test]
fn reports_are_deterministic() {
    let s3 = Arc::new(FiniteGroup::symmetric(3));
    let pile = Arc::new(coset_pile(&s3, &[&[s3.generators()[0]]]));
    let a = analyze(&pile, "s3", &AnalyzeOptions::default(), &cfg()).unwrap();
    let b = analyze(&pile, "s3", &AnalyzeOptions::default(), &cfg()).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let other = analyze(&pile, "s3", &AnalyzeOptions::default(), &cfg().with_seed(1)).unwrap();
    assert_eq!(all_three(&a), all_three(&other));
    assert!(a.timings_ms.is_empty());
    let timed = AnalyzeOptions { timings: true, ..AnalyzeOptions::default() };
    assert!(analyze(&pile, "s3", &timed, &cfg()).unwrap().timings_ms.contains_key("total"));
}
