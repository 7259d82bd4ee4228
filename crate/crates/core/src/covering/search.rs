use std::collections::HashMap;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use rayon::prelude::*;

use super::{
    covering_exists, lower_bound_counting, Bound, CoveringProblem, GammaResult, GammaStatus, SearchStats, Target,
};
use crate::elemset::{CosetPartition, ElemSet};
use crate::error::{Error, Result};
use crate::permcore::{Enumeration, Permutation, DEFAULT_ENUMERATION_CAP};

pub const DEFAULT_FRONTIER_CAP: usize = 100_000;
pub const DEFAULT_MEM_BUDGET: u64 = 2 << 30;
/// Default bound on `Σ frontier × conjugates × |G|` per search.
pub const DEFAULT_WORK_BUDGET: u128 = 200_000_000_000;
/// Levels larger than this skip the quadratic dominance pass.
const PRUNE_LIMIT: usize = 20_000;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// `None` means `⌈3·log₂ n⌉ + 2` with `n = |G:H|`.
    pub max_len: Option<usize>,
    pub frontier_cap: usize,
    pub mem_budget: u64,
    pub prune: bool,
    pub enumeration_cap: usize,
    pub work_budget: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let mem_budget = std::env::var("STABCOVER_MEM_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MEM_BUDGET);
        SearchConfig {
            max_len: None,
            frontier_cap: DEFAULT_FRONTIER_CAP,
            mem_budget,
            prune: true,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            work_budget: DEFAULT_WORK_BUDGET,
        }
    }
}

impl SearchConfig {
    pub fn with_max_len(mut self, m: usize) -> Self {
        self.max_len = Some(m);
        self
    }

    pub fn without_pruning(mut self) -> Self {
        self.prune = false;
        self
    }

    pub fn resolved_max_len(&self, index: u128) -> usize {
        self.max_len.unwrap_or_else(|| default_max_len(index))
    }
}

/// `⌈3·log₂ n⌉ + 2`, computed as the least `k` with `2^k ≥ n³`.
pub fn default_max_len(n: u128) -> usize {
    let cube = n.saturating_mul(n).saturating_mul(n);
    let mut k = 0usize;
    while k < 127 && (1u128 << k) < cube {
        k += 1;
    }
    k + 2
}

/// The distinct conjugates of `H`, one per right coset of `N_G(H)`, with
/// their coset partitions built on demand.
pub(crate) struct Conjugates {
    pub reps: Vec<usize>,
    conj_gens: Vec<Vec<usize>>,
    parts: Vec<OnceLock<CosetPartition>>,
}

impl Conjugates {
    pub fn new(problem: &CoveringProblem, e: &Enumeration) -> Result<Self> {
        let h_gens = indices(e, problem.sub.generators())?;
        let norm = problem.group.normalizer(&problem.sub)?;
        let n_gens = indices(e, norm.generators())?;
        let left = CosetPartition::new(e, &n_gens);
        let mut seen = vec![false; left.index()];
        let mut reps = Vec::with_capacity(left.index());
        // Ng = (g⁻¹N)⁻¹, so right cosets are labelled through inverses.
        for g in 0..e.order() {
            let l = left.label(e.inverse(g));
            if !seen[l] {
                seen[l] = true;
                reps.push(g);
            }
        }
        let conj_gens = reps.iter().map(|&g| h_gens.iter().map(|&h| e.conjugate(h, g)).collect()).collect();
        let parts = reps.iter().map(|_| OnceLock::new()).collect();
        Ok(Conjugates { reps, conj_gens, parts })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn partition(&self, e: &Enumeration, r: usize) -> &CosetPartition {
        self.parts[r].get_or_init(|| CosetPartition::new(e, &self.conj_gens[r]))
    }
}

pub(crate) fn indices(e: &Enumeration, perms: &[Permutation]) -> Result<Vec<usize>> {
    perms.iter().map(|p| e.index_of(p).ok_or(Error::NotMember)).collect()
}

struct Goal {
    socle: Option<ElemSet>,
}

impl Goal {
    fn new(problem: &CoveringProblem, e: &Enumeration) -> Result<Self> {
        Ok(match problem.target {
            Target::Group => Goal { socle: None },
            Target::Socle => Goal { socle: Some(ElemSet::of_subgroup(e, problem.target_group())?) },
        })
    }

    fn reached(&self, s: &ElemSet) -> bool {
        match &self.socle {
            None => s.is_full(),
            Some(t) => s.contains_set_unchecked(t),
        }
    }
}

struct Node {
    set: ElemSet,
    parent: u32,
    rep: u32,
}

/// Exact `γ` by breadth-first search over product sets.
pub fn gamma_exact(problem: &CoveringProblem, config: &SearchConfig) -> Result<GammaResult> {
    let start = Instant::now();
    let mut result = gamma_exact_inner(problem, config)?;
    result.wall_time = start.elapsed();
    Ok(result)
}

fn gamma_exact_inner(problem: &CoveringProblem, config: &SearchConfig) -> Result<GammaResult> {
    let mut stats = SearchStats::default();
    if !covering_exists(problem)? {
        return Ok(GammaResult::infinite(stats));
    }
    let lower0 = lower_bound_counting(problem.target_group().order(), problem.sub.order()).unwrap_or(1);
    let max_len = config.resolved_max_len(problem.index());
    if !problem.group.is_enumerable(config.enumeration_cap) {
        stats.note = Some(format!("group of order {} is past the enumeration cap", problem.group.order()));
        return Ok(bounds_only(lower0, Bound::Infinite, Vec::new(), stats));
    }
    let e = problem.group.enumeration_with_cap(config.enumeration_cap)?;
    let goal = Goal::new(problem, &e)?;
    let hset = ElemSet::of_subgroup(&e, &problem.sub)?;
    let identity = problem.group.identity();
    stats.frontier_sizes.push(1);
    if goal.reached(&hset) {
        return Ok(exact(1, vec![identity], stats));
    }
    let conj = Conjugates::new(problem, &e)?;
    stats.conjugates = conj.len();
    let order = e.order();
    let set_bytes = order.div_ceil(64) as u64 * 8 + 48;

    let mut levels: Vec<Vec<(u32, u32)>> = vec![vec![(u32::MAX, u32::MAX)]];
    let mut frontier: Vec<ElemSet> = vec![hset];
    // Every set at levels ≤ complete has been generated and tested.
    let mut complete = 1usize;
    let mut work: u128 = 0;

    for level in 2..=max_len {
        let step = frontier.len() as u128 * conj.len() as u128 * order as u128;
        if work + step > config.work_budget {
            stats.note = Some(format!("work budget exhausted before level {level}"));
            break;
        }
        work += step;
        let (nodes, found) = expand(&e, &conj, &frontier, &goal, config, set_bytes, &mut stats);
        if let Some((parent, rep)) = found {
            let mut path = trace(&levels, parent);
            path.push(rep);
            let conjugators = conjugators_of(&e, &conj, &identity, &path);
            if complete >= level - 1 {
                return Ok(exact(level, conjugators, stats));
            }
            return Ok(bounds_only(lower0.max(complete + 1), Bound::Finite(level), conjugators, stats));
        }
        if nodes.is_empty() {
            // Every product stabilized without reaching the target.
            return Err(Error::Search("search space exhausted below the target".into()));
        }
        if stats.exactness_lost_at.is_none() {
            complete = level;
        }
        let mut nodes = nodes;
        if config.prune && nodes.len() <= PRUNE_LIMIT {
            let before = nodes.len();
            nodes = prune(nodes);
            stats.pruned += (before - nodes.len()) as u64;
        } else if config.prune && stats.note.is_none() {
            stats.note = Some(format!("dominance pruning skipped at level {level} ({} sets)", nodes.len()));
        }
        let mem_cap = (config.mem_budget / set_bytes).max(1) as usize;
        let cap = config.frontier_cap.min(mem_cap);
        if nodes.len() > cap {
            // Keep the largest sets; ties by discovery order.
            nodes.sort_by(|a, b| b.set.count().cmp(&a.set.count()));
            nodes.truncate(cap);
            stats.exactness_lost_at.get_or_insert(level);
        }
        stats.frontier_sizes.push(nodes.len());
        levels.push(nodes.iter().map(|n| (n.parent, n.rep)).collect());
        frontier = nodes.into_iter().map(|n| n.set).collect();
    }

    let lower = lower0.max(complete + 1);
    let (upper, conjugators) = match gamma_upper_greedy(problem, max_len.max(lower) * 4) {
        Ok((m, c)) => (Bound::Finite(m), c),
        Err(_) => (Bound::Infinite, Vec::new()),
    };
    if let Bound::Finite(u) = upper {
        if u <= lower {
            return Ok(exact(u, conjugators, stats));
        }
    }
    Ok(bounds_only(lower, upper, conjugators, stats))
}

/// Generates level successors chunk by chunk, deduplicating as it goes.
/// Returns the new level and, if some successor reaches the goal, its
/// `(parent, rep)` pair (the first in canonical order).
fn expand(
    e: &Enumeration,
    conj: &Conjugates,
    frontier: &[ElemSet],
    goal: &Goal,
    config: &SearchConfig,
    set_bytes: u64,
    stats: &mut SearchStats,
) -> (Vec<Node>, Option<(u32, u32)>) {
    let reps = conj.len();
    // Bound transient memory to a quarter of the budget.
    let chunk = ((config.mem_budget / 4 / set_bytes) as usize / reps.max(1)).clamp(1, 4096);
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<u128, Vec<u32>> = HashMap::new();
    for (c, block) in frontier.chunks(chunk).enumerate() {
        let base = c * chunk;
        let produced: Vec<Vec<(ElemSet, u32, u32)>> = block
            .par_iter()
            .enumerate()
            .map(|(j, s)| {
                let parent = (base + j) as u32;
                let count = s.count();
                (0..reps)
                    .filter_map(|r| {
                        let t = conj.partition(e, r).right_multiply_unchecked(s);
                        (t.count() > count).then_some((t, parent, r as u32))
                    })
                    .collect()
            })
            .collect();
        for (set, parent, rep) in produced.into_iter().flatten() {
            stats.sets_expanded += 1;
            if goal.reached(&set) {
                return (nodes, Some((parent, rep)));
            }
            let fp = set.fingerprint();
            let slot = index.entry(fp).or_default();
            if slot.iter().any(|&k| nodes[k as usize].set == set) {
                stats.dedup_hits += 1;
                continue;
            }
            slot.push(nodes.len() as u32);
            nodes.push(Node { set, parent, rep });
        }
    }
    (nodes, None)
}

/// Keeps only ⊆-maximal sets, in their original order.
fn prune(nodes: Vec<Node>) -> Vec<Node> {
    let mut by_size: Vec<usize> = (0..nodes.len()).collect();
    by_size.sort_by(|&a, &b| nodes[b].set.count().cmp(&nodes[a].set.count()));
    let counts: Vec<usize> = nodes.iter().map(|n| n.set.count()).collect();
    let dominated: Vec<bool> = (0..nodes.len())
        .into_par_iter()
        .map(|i| {
            by_size
                .iter()
                .take_while(|&&j| counts[j] > counts[i])
                .any(|&j| nodes[j].set.contains_set_unchecked(&nodes[i].set))
        })
        .collect();
    nodes.into_iter().zip(dominated).filter(|(_, d)| !d).map(|(n, _)| n).collect()
}

fn trace(levels: &[Vec<(u32, u32)>], mut idx: u32) -> Vec<u32> {
    let mut path = Vec::new();
    for level in levels.iter().skip(1).rev() {
        let (parent, rep) = level[idx as usize];
        path.push(rep);
        idx = parent;
    }
    path.reverse();
    path
}

fn conjugators_of(e: &Enumeration, conj: &Conjugates, identity: &Permutation, path: &[u32]) -> Vec<Permutation> {
    std::iter::once(identity.clone())
        .chain(path.iter().map(|&r| e.element(conj.reps[r as usize])))
        .collect()
}

fn exact(value: usize, conjugators: Vec<Permutation>, stats: SearchStats) -> GammaResult {
    GammaResult {
        status: GammaStatus::Exact,
        value: Some(value),
        lower: Bound::Finite(value),
        upper: Bound::Finite(value),
        conjugators,
        stats,
        wall_time: Default::default(),
    }
}

fn bounds_only(lower: usize, upper: Bound, conjugators: Vec<Permutation>, stats: SearchStats) -> GammaResult {
    GammaResult {
        status: GammaStatus::BoundsOnly,
        value: None,
        lower: Bound::Finite(lower),
        upper,
        conjugators,
        stats,
        wall_time: Default::default(),
    }
}

/// Greedy upper bound: each step appends the conjugate adding the most new
/// elements (ties to the smallest representative). Returns the length and
/// the conjugators, or an error once `max_len` factors did not suffice.
pub fn gamma_upper_greedy(problem: &CoveringProblem, max_len: usize) -> Result<(usize, Vec<Permutation>)> {
    if !covering_exists(problem)? {
        return Err(Error::Search("normal closure of the subgroup misses the target".into()));
    }
    let e = problem.group.enumeration()?;
    let goal = Goal::new(problem, &e)?;
    let mut set = ElemSet::of_subgroup(&e, &problem.sub)?;
    let mut conjugators = vec![problem.group.identity()];
    if goal.reached(&set) {
        return Ok((1, conjugators));
    }
    let conj = Conjugates::new(problem, &e)?;
    for len in 2..=max_len {
        let counts: Vec<usize> =
            (0..conj.len()).into_par_iter().map(|r| conj.partition(&e, r).product_count(&set)).collect();
        let mut best = 0;
        for r in 1..counts.len() {
            if counts[r] > counts[best] {
                best = r;
            }
        }
        set = conj.partition(&e, best).right_multiply_unchecked(&set);
        conjugators.push(e.element(conj.reps[best]));
        if goal.reached(&set) {
            return Ok((len, conjugators));
        }
    }
    Err(Error::Search(format!("greedy did not reach the target within {max_len} factors")))
}

/// Shared by the verifier: the product `H^{g_1} ... H^{g_m}` as a set.
pub(crate) fn product_of_conjugates(
    e: &Arc<Enumeration>,
    sub: &[Permutation],
    conjugators: &[Permutation],
) -> Result<ElemSet> {
    let h_gens = indices(e, sub)?;
    let mut set = ElemSet::from_indices(e, [0]);
    for g in conjugators {
        let gi = e.index_of(g).ok_or(Error::NotMember)?;
        let gens: Vec<usize> = h_gens.iter().map(|&h| e.conjugate(h, gi)).collect();
        set = CosetPartition::new(e, &gens).right_multiply_unchecked(&set);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::{parse_cycles, PermGroup};

    fn group(list: &[&str], n: usize) -> PermGroup {
        PermGroup::new(n, list.iter().map(|s| parse_cycles(s, n).unwrap()).collect()).unwrap()
    }

    fn stab_problem(g: PermGroup) -> CoveringProblem {
        let h = g.point_stabilizer(0).unwrap();
        CoveringProblem::new(g, h).unwrap()
    }

    #[test]
    fn max_len_default() {
        assert_eq!(default_max_len(1), 2);
        assert_eq!(default_max_len(2), 5);
        assert_eq!(default_max_len(5), 9);
        assert_eq!(default_max_len(60), 20);
    }

    #[test]
    fn s3_point_stabilizer() {
        let p = stab_problem(group(&["(1 2 3)", "(1 2)"], 3));
        let r = gamma_exact(&p, &SearchConfig::default()).unwrap();
        assert_eq!(r.value, Some(3));
        assert_eq!(r.conjugators.len(), 3);
        assert!(r.conjugators[0].is_identity());
        let e = p.group.enumeration().unwrap();
        assert!(product_of_conjugates(&e, p.sub.generators(), &r.conjugators).unwrap().is_full());
        assert_eq!(gamma_upper_greedy(&p, 10).unwrap().0, 3);
    }

    #[test]
    fn whole_group_is_one() {
        let g = group(&["(1 2 3 4 5)", "(1 2 3)"], 5);
        let p = CoveringProblem::new(g.clone(), g).unwrap();
        assert_eq!(gamma_exact(&p, &SearchConfig::default()).unwrap().value, Some(1));
        assert_eq!(gamma_upper_greedy(&p, 3).unwrap().0, 1);
    }

    #[test]
    fn deficient_normal_closure_is_infinite() {
        let g = group(&["(1 2 3 4 5)", "(1 2)"], 5);
        let h = group(&["(1 2 3)"], 5);
        let r = gamma_exact(&CoveringProblem::new(g, h).unwrap(), &SearchConfig::default()).unwrap();
        assert_eq!(r.status, GammaStatus::Infinite);
        assert_eq!(serde_json::to_value(&r).unwrap()["upper"], "infinity");
    }

    #[test]
    fn a5_stabilizer_is_three() {
        let p = stab_problem(group(&["(1 2 3 4 5)", "(1 2 3)"], 5));
        let r = gamma_exact(&p, &SearchConfig::default()).unwrap();
        assert_eq!(r.value, Some(3));
        assert_eq!(r.stats.conjugates, 5);
    }

    #[test]
    fn tiny_frontier_cap_stays_sound() {
        // D14 needs four factors; a one-set frontier loses exactness at level 2.
        let p = stab_problem(group(&["(1 2 3 4 5 6 7)", "(2 7)(3 6)(4 5)"], 7));
        let full = gamma_exact(&p, &SearchConfig::default()).unwrap();
        assert_eq!(full.value, Some(4));
        let cfg = SearchConfig { frontier_cap: 1, ..SearchConfig::default() };
        let r = gamma_exact(&p, &cfg).unwrap();
        assert!(r.lower <= Bound::Finite(4));
        assert!(r.upper >= Bound::Finite(4));
        if r.status == GammaStatus::BoundsOnly {
            assert_eq!(r.stats.exactness_lost_at, Some(2));
        }
    }
}
