//! Small standalone checks: the prime inequality behind the affine constant,
//! the maximal-subgroup bound `|M ∩ T| ≥ 6`, and the index inequality.

use std::collections::HashSet;

use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::permcore::{sub_elements, PermGroup, Permutation};

/// Subgroup lattices are enumerated by brute force only up to this order.
pub const M0_ORDER_CAP: usize = 5000;

#[derive(Clone, Debug, Serialize)]
pub struct FpReport {
    pub bound: u64,
    pub primes_checked: usize,
    /// Primes with `5^⌈log₂p⌉ = p³`.
    pub equality_at: Vec<u64>,
    /// Primes with `5^⌈log₂p⌉ > p³`.
    pub violations: Vec<u64>,
    pub passed: bool,
}

fn ceil_log2(p: u64) -> u32 {
    64 - (p - 1).leading_zeros()
}

/// For every prime `p ≤ bound`, checks `5^⌈log₂p⌉ ≤ p³` in exact integers,
/// i.e. `⌈log₂p⌉/log₂p ≤ 3/log₂5` with equality only at `p = 5`.
pub fn fp_lemma_check(bound: u64) -> FpReport {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut report = FpReport { bound, primes_checked: 0, equality_at: vec![], violations: vec![], passed: false };
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        for m in (p * p..=n).step_by(p) {
            composite[m] = true;
        }
        let lhs = 5u128.pow(ceil_log2(p as u64));
        let rhs = (p as u128).pow(3);
        report.primes_checked += 1;
        if lhs == rhs {
            report.equality_at.push(p as u64);
        } else if lhs > rhs {
            report.violations.push(p as u64);
        }
    }
    report.passed = report.violations.is_empty() && report.equality_at.iter().all(|&p| p == 5);
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct MaximalRecord {
    pub order: usize,
    pub intersection_order: usize,
    pub generators: Vec<Permutation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct M0Report {
    pub group_order: usize,
    pub socle_order: usize,
    pub subgroups: usize,
    /// Subgroups maximal among the proper subgroups not containing `T`.
    pub maximal: Vec<MaximalRecord>,
    pub passed: bool,
}

/// Enumerates every subgroup of `g` (joins of cyclic subgroups) and checks
/// `|M ∩ T| ≥ 6` for each `M` maximal among proper subgroups not containing `t`.
pub fn m0_lemma_check(g: &PermGroup, t: &PermGroup) -> Result<M0Report> {
    if g.order() > M0_ORDER_CAP as u128 {
        return Err(Error::TooLarge { order: g.order(), cap: M0_ORDER_CAP });
    }
    if !t.is_normal_in(g) {
        return Err(Error::NotSubgroup);
    }
    let e = g.enumeration()?;
    let t_set = ElemSet::of_subgroup(&e, t)?;
    let full = ElemSet::full(&e);

    let mut seen: HashSet<ElemSet> = HashSet::new();
    let mut all: Vec<(ElemSet, Vec<usize>)> = Vec::new();
    let mut cyclic: Vec<usize> = Vec::new();
    for x in 0..e.order() {
        let s = ElemSet::from_indices(&e, sub_elements(&e, &[x]));
        if seen.insert(s.clone()) {
            cyclic.push(x);
            all.push((s, vec![x]));
        }
    }
    let mut i = 0;
    while i < all.len() {
        let (set, gens) = all[i].clone();
        for &c in &cyclic {
            if set.contains(c) {
                continue;
            }
            let mut g2 = gens.clone();
            g2.push(c);
            let s = ElemSet::from_indices(&e, sub_elements(&e, &g2));
            if seen.insert(s.clone()) {
                all.push((s, g2));
            }
        }
        i += 1;
    }

    let family: Vec<&(ElemSet, Vec<usize>)> =
        all.iter().filter(|(s, _)| *s != full && !s.contains_set(&t_set).unwrap_or(false)).collect();
    let mut maximal = Vec::new();
    for (s, gens) in &family {
        let dominated = family
            .iter()
            .any(|(o, _)| o.count() > s.count() && o.contains_set(s).unwrap_or(false));
        if !dominated {
            maximal.push(MaximalRecord {
                order: s.count(),
                intersection_order: s.intersection_count(&t_set)?,
                generators: gens.iter().map(|&x| e.element(x)).collect(),
            });
        }
    }
    maximal.sort_by_key(|m| (m.order, m.intersection_order));
    let passed = !maximal.is_empty() && maximal.iter().all(|m| m.intersection_order >= 6);
    Ok(M0Report { group_order: e.order(), socle_order: t_set.count(), subgroups: all.len(), maximal, passed })
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexLemmaReport {
    pub group_order: u128,
    pub sub_order: u128,
    /// `|H| ≥ 4` and `|G:H| ≥ 4`.
    pub applicable: bool,
    /// `|G| ≥ 4|H|`, exact.
    pub integer_check: bool,
    pub ratio: f64,
    pub log_index: f64,
    pub passed: bool,
}

/// `log|G| / log|H| ≤ log|G:H|` (base 2) with margin `1e-9`, for `|H| ≥ 4`
/// and `|G:H| ≥ 4`. Inapplicable pairs pass vacuously.
pub fn index_lemma_check(group_order: u128, sub_order: u128) -> IndexLemmaReport {
    let index = if sub_order == 0 || !group_order.is_multiple_of(sub_order) { 0 } else { group_order / sub_order };
    let applicable = sub_order >= 4 && index >= 4;
    let ratio = (group_order as f64).log2() / (sub_order as f64).log2();
    let log_index = (index as f64).log2();
    let integer_check = group_order >= 4 * sub_order;
    let passed = !applicable || (integer_check && ratio <= log_index + 1e-9);
    IndexLemmaReport { group_order, sub_order, applicable, integer_check, ratio, log_index, passed }
}
