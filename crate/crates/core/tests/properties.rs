use proptest::prelude::*;

use stabcover::covering::{gamma_exact, oracle_gamma_dfs, CoveringProblem, GammaStatus, SearchConfig};
use stabcover::elemset::ElemSet;
use stabcover::permcore::{PermGroup, Permutation};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn group(n: usize) -> impl Strategy<Value = PermGroup> {
    prop::collection::vec(perm(n), 1..3).prop_map(move |gens| PermGroup::new(n, gens).unwrap())
}

fn any_group() -> impl Strategy<Value = PermGroup> {
    (3usize..=6).prop_flat_map(group)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_and_chain_agree(g in any_group(), x in perm(6)) {
        let e = g.enumeration().unwrap();
        prop_assert_eq!(e.order() as u128, g.order());
        let x = x.restrict(0, g.degree()).ok().unwrap_or_else(|| g.identity());
        prop_assert_eq!(e.contains(&x), g.contains(&x));
    }

    #[test]
    fn orbit_stabilizer(g in any_group(), p in 0usize..3) {
        let orbit = g.orbit(p).unwrap();
        let stab = g.point_stabilizer(p).unwrap();
        prop_assert_eq!(orbit.len() as u128 * stab.order(), g.order());
    }

    #[test]
    fn conjugation_preserves_order(g in group(5), x in perm(5)) {
        let h = g.point_stabilizer(0).unwrap();
        prop_assert_eq!(h.conjugate(&x).unwrap().order(), h.order());
    }

    #[test]
    fn products_by_subgroups_grow(g in group(5), seed in prop::collection::vec(0usize..1000, 1..6)) {
        let e = g.enumeration().unwrap();
        let h = g.point_stabilizer(0).unwrap();
        let s = ElemSet::from_indices(&e, seed.iter().map(|i| i % e.order()));
        let hs: Vec<usize> = ElemSet::of_subgroup(&e, &h).unwrap().iter().collect();
        let sh = s.product(&e, &hs).unwrap();
        prop_assert!(sh.contains_set(&s).unwrap());
        prop_assert_eq!(sh.count() % h.order() as usize, 0);
    }

    #[test]
    fn pruning_and_oracle_agree(g in group(5)) {
        let h = g.point_stabilizer(0).unwrap();
        let p = CoveringProblem::new(g, h).unwrap();
        let pruned = gamma_exact(&p, &SearchConfig::default()).unwrap();
        let plain = gamma_exact(&p, &SearchConfig::default().without_pruning()).unwrap();
        prop_assert_eq!(pruned.status, plain.status);
        prop_assert_eq!(pruned.value, plain.value);
        if pruned.status == GammaStatus::Exact {
            prop_assert_eq!(oracle_gamma_dfs(&p, 12).unwrap(), pruned.value.unwrap());
        }
    }
}
