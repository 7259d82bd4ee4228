//! Covering numbers of point stabilizers, frozen from an independent
//! brute-force DFS over distinct conjugates.

use stabcover::constructions::{build_affine, build_diagonal, named_group};
use stabcover::covering::{gamma_exact, lower_bound_counting, oracle_gamma_dfs, CoveringProblem, SearchConfig};
use stabcover::permcore::PermGroup;

const FROZEN: &[(&str, u128, usize)] = &[
    ("S3", 6, 3),
    ("A4", 12, 3),
    ("S4", 24, 3),
    ("D10", 10, 4),
    ("D14", 14, 4),
    ("A5", 60, 3),
    ("S5", 120, 3),
    ("PSL(2,7)", 168, 3),
    ("A6", 360, 3),
];

const AFFINE: &[(u64, u64, u128, usize)] = &[(5, 2, 20, 3), (7, 3, 42, 3), (13, 2, 156, 3)];

fn point_problem(g: PermGroup) -> CoveringProblem {
    let h = g.point_stabilizer(0).unwrap();
    CoveringProblem::new(g, h).unwrap()
}

#[test]
fn named_groups_match_frozen_values() {
    for &(name, order, gamma) in FROZEN {
        let g = named_group(name).unwrap();
        assert_eq!(g.order(), order, "{name}");
        let p = point_problem(g);
        let r = gamma_exact(&p, &SearchConfig::default()).unwrap();
        assert!(r.is_exact(), "{name}: {r:?}");
        assert_eq!(r.value, Some(gamma), "{name}");
        assert_eq!(oracle_gamma_dfs(&p, 8).unwrap(), gamma, "{name}");
    }
}

#[test]
fn affine_lines_match_frozen_values() {
    for &(p, root, order, gamma) in AFFINE {
        let a = build_affine(p, 1, &[vec![root as i64]], "affine").unwrap();
        assert_eq!(a.group.order(), order);
        let prob = point_problem(a.group.clone());
        let r = gamma_exact(&prob, &SearchConfig::default()).unwrap();
        assert_eq!(r.value, Some(gamma), "AGL(1,{p})");
        assert_eq!(oracle_gamma_dfs(&prob, 8).unwrap(), gamma, "AGL(1,{p})");
    }
}

#[test]
fn diagonal_a5_squared() {
    let d = build_diagonal(&named_group("A5").unwrap(), 2);
    let p = CoveringProblem::new(d.b.clone(), d.delta.clone()).unwrap();
    let r = gamma_exact(&p, &SearchConfig::default()).unwrap();
    assert_eq!(r.value, Some(3));
    assert_eq!(lower_bound_counting(3600, 60), Some(2));
    assert!(r.value.unwrap() >= 2 && r.value.unwrap() <= 4);
}

#[test]
fn exact_values_sit_between_bounds() {
    for &(name, _, _) in FROZEN {
        let p = point_problem(named_group(name).unwrap());
        let r = gamma_exact(&p, &SearchConfig::default()).unwrap();
        let lower = lower_bound_counting(p.group.order(), p.sub.order()).unwrap();
        let (upper, conj) = stabcover::covering::gamma_upper_greedy(&p, 20).unwrap();
        assert!(lower <= r.value.unwrap() && r.value.unwrap() <= upper, "{name}");
        assert_eq!(conj.len(), upper);
    }
}
