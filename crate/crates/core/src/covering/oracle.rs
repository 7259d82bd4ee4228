//! Brute-force reference for `γ`, deliberately sharing nothing with the
//! set-algebra engine: elements are explicit permutations in hash sets.

use std::collections::{BTreeSet, HashSet};

use super::{lower_bound_counting, CoveringProblem, Target};
use crate::error::{Error, Result};
use crate::permcore::Permutation;

fn closure(gens: &[Permutation], identity: &Permutation) -> Vec<Permutation> {
    let mut seen: HashSet<Permutation> = HashSet::new();
    seen.insert(identity.clone());
    let mut out = vec![identity.clone()];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = out[i].mul(g);
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
        i += 1;
    }
    out
}

/// Exhaustive search over tuples of distinct conjugates `H^{g_2}, ..., H^{g_m}`
/// (the first factor fixed to `H`), for `m` ascending from the counting
/// bound. Returns the least `m` that works, or an error past `max_len`.
pub fn oracle_gamma_dfs(problem: &CoveringProblem, max_len: usize) -> Result<usize> {
    let id = problem.group.identity();
    let group = closure(problem.group.generators(), &id);
    let sub = closure(problem.sub.generators(), &id);
    let target: HashSet<Permutation> = match problem.target {
        Target::Group => group.iter().cloned().collect(),
        Target::Socle => closure(problem.target_group().generators(), &id).into_iter().collect(),
    };
    let mut seen: BTreeSet<Vec<Permutation>> = BTreeSet::new();
    let mut conjugates: Vec<Vec<Permutation>> = Vec::new();
    for g in &group {
        let mut c: Vec<Permutation> = sub.iter().map(|h| h.conjugate_by(g)).collect();
        c.sort();
        if seen.insert(c.clone()) {
            conjugates.push(c);
        }
    }
    let start: HashSet<Permutation> = sub.iter().cloned().collect();
    let covers = |s: &HashSet<Permutation>| target.iter().all(|t| s.contains(t));
    if covers(&start) {
        return Ok(1);
    }
    let first = lower_bound_counting(target.len() as u128, sub.len() as u128)
        .ok_or_else(|| Error::Search("trivial subgroup".into()))?
        .max(2);
    for m in first..=max_len {
        if dfs(&start, m - 1, &conjugates, &covers) {
            return Ok(m);
        }
    }
    Err(Error::Search(format!("no covering with at most {max_len} conjugates")))
}

fn dfs(
    current: &HashSet<Permutation>,
    remaining: usize,
    conjugates: &[Vec<Permutation>],
    covers: &dyn Fn(&HashSet<Permutation>) -> bool,
) -> bool {
    if remaining == 0 {
        return covers(current);
    }
    for c in conjugates {
        let next: HashSet<Permutation> = current.iter().flat_map(|x| c.iter().map(move |y| x.mul(y))).collect();
        if dfs(&next, remaining - 1, conjugates, covers) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::{parse_cycles, PermGroup};

    #[test]
    fn s3_is_three() {
        let g = PermGroup::new(3, vec![parse_cycles("(1 2 3)", 3).unwrap(), parse_cycles("(1 2)", 3).unwrap()])
            .unwrap();
        let h = g.point_stabilizer(0).unwrap();
        let p = CoveringProblem::new(g.clone(), h).unwrap();
        assert_eq!(oracle_gamma_dfs(&p, 4).unwrap(), 3);
        assert!(oracle_gamma_dfs(&p, 2).is_err());
        let whole = CoveringProblem::new(g.clone(), g).unwrap();
        assert_eq!(oracle_gamma_dfs(&whole, 4).unwrap(), 1);
    }
}
