//! Covering numbers: the least `m` with `G = H^{g_1} ... H^{g_m}`.
//!
//! [`gamma_exact`] runs a level-synchronous breadth-first search over the
//! product sets reachable from `H`; [`oracle_gamma_dfs`] is an independent
//! brute-force route over explicit permutations used to cross-check it.
//! Certificates assert a concrete conjugator list and are checked by
//! [`verify_certificate`].

mod certificate;
mod oracle;
mod search;
mod verify;

use serde::{Deserialize, Serialize};

pub use certificate::{ClassWitnessRecord, CoveringCertificate, StabilizerSpec, Witness};
pub use oracle::oracle_gamma_dfs;
pub use search::{gamma_exact, gamma_upper_greedy, SearchConfig, DEFAULT_FRONTIER_CAP, DEFAULT_MEM_BUDGET};
pub use verify::{verify_against, verify_certificate, VerifyMode, VerifyReport};

use crate::error::{Error, Result};
use crate::permcore::{PermGroup, Permutation};

/// What the product of conjugates has to cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// The product must equal the whole group.
    Group,
    /// The product must contain the socle (a normal subgroup known by
    /// construction).
    Socle,
}

#[derive(Clone, Debug)]
pub struct CoveringProblem {
    pub group: PermGroup,
    pub sub: PermGroup,
    pub target: Target,
    pub socle: Option<PermGroup>,
}

impl CoveringProblem {
    pub fn new(group: PermGroup, sub: PermGroup) -> Result<Self> {
        if !sub.is_subgroup_of(&group) {
            return Err(Error::NotSubgroup);
        }
        Ok(CoveringProblem { group, sub, target: Target::Group, socle: None })
    }

    pub fn with_socle(group: PermGroup, sub: PermGroup, socle: PermGroup) -> Result<Self> {
        if !sub.is_subgroup_of(&group) {
            return Err(Error::NotSubgroup);
        }
        if !socle.is_normal_in(&group) {
            return Err(Error::Search("socle is not a normal subgroup of the group".into()));
        }
        Ok(CoveringProblem { group, sub, target: Target::Socle, socle: Some(socle) })
    }

    /// The group whose elements must be covered.
    pub fn target_group(&self) -> &PermGroup {
        match self.target {
            Target::Group => &self.group,
            Target::Socle => self.socle.as_ref().expect("socle target carries a socle"),
        }
    }

    /// `|G:H|`.
    pub fn index(&self) -> u128 {
        self.group.order() / self.sub.order()
    }
}

/// Smallest `m` with `|H|^m ≥ |target|`, by exact integer comparison.
/// `None` stands for infinity (`|H| = 1` below a nontrivial target).
pub fn lower_bound_counting(target_order: u128, sub_order: u128) -> Option<usize> {
    if target_order <= 1 {
        return Some(1);
    }
    if sub_order <= 1 {
        return None;
    }
    let mut m = 1;
    let mut pow = sub_order;
    while pow < target_order {
        pow = pow.saturating_mul(sub_order);
        m += 1;
    }
    Some(m)
}

/// Necessary condition for a finite covering: the normal closure of `H`
/// must contain the target. It is also sufficient, since products of
/// enough conjugates exhaust the normal closure.
pub fn covering_exists(problem: &CoveringProblem) -> Result<bool> {
    let closure = problem.group.normal_closure(&problem.sub)?;
    Ok(match problem.target {
        Target::Group => closure.order() == problem.group.order(),
        Target::Socle => problem.target_group().is_subgroup_of(&closure),
    })
}

/// Upper bound on a covering length: a finite integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    Finite(usize),
    Infinite,
}

impl Bound {
    pub fn finite(self) -> Option<usize> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Infinite => None,
        }
    }
}

impl From<Option<usize>> for Bound {
    fn from(v: Option<usize>) -> Self {
        v.map_or(Bound::Infinite, Bound::Finite)
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(v) => s.serialize_u64(*v as u64),
            Bound::Infinite => s.serialize_str("infinity"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaStatus {
    Exact,
    BoundsOnly,
    /// The normal closure of `H` misses part of the target.
    Infinite,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchStats {
    pub frontier_sizes: Vec<usize>,
    pub sets_expanded: u64,
    pub dedup_hits: u64,
    pub pruned: u64,
    pub conjugates: usize,
    /// First level whose frontier had to be truncated, if any.
    pub exactness_lost_at: Option<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaResult {
    pub status: GammaStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<usize>,
    pub lower: Bound,
    pub upper: Bound,
    /// Conjugators realizing `upper` (or `value`), when known.
    pub conjugators: Vec<Permutation>,
    pub stats: SearchStats,
    #[serde(skip)]
    pub wall_time: std::time::Duration,
}

impl GammaResult {
    pub(crate) fn infinite(stats: SearchStats) -> Self {
        GammaResult {
            status: GammaStatus::Infinite,
            value: None,
            lower: Bound::Infinite,
            upper: Bound::Infinite,
            conjugators: Vec::new(),
            stats,
            wall_time: Default::default(),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.status == GammaStatus::Exact
    }
}
