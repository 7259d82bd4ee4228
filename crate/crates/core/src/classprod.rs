//! Products of conjugacy classes: pairs `α, β` with `α^T β^T ∪ {1} = T`
//! and the three-class factorization `T = α^T β^T γ^T`, `γ = β⁻¹α⁻¹`.

use rayon::prelude::*;
use serde::Serialize;

use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::permcore::{all_classes, conjugacy_class_of, ConjugacyClass, Enumeration, PermGroup, Permutation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassProductWitness {
    pub alpha: Permutation,
    pub beta: Permutation,
    pub gamma: Permutation,
    /// Positions of the classes of `α` and `β` in `all_classes` order.
    pub class_pair: (usize, usize),
    /// Whether `α^T β^T` also contains the identity, i.e. equals `T`.
    pub covers_identity: bool,
}

impl ClassProductWitness {
    pub fn new(alpha: Permutation, beta: Permutation, class_pair: (usize, usize), covers_identity: bool) -> Self {
        let gamma = beta.inverse().mul(&alpha.inverse());
        ClassProductWitness { alpha, beta, gamma, class_pair, covers_identity }
    }
}

/// `{ cd : c ∈ C, d ∈ D }`, as `|C|` left translates of `D`.
pub fn class_product(e: &Enumeration, c: &ConjugacyClass, d: &ConjugacyClass) -> Result<ElemSet> {
    set_product(e, &c.members, &d.members)
}

/// `{ ab : a ∈ A, b ∈ B }`.
pub fn set_product(e: &Enumeration, a: &ElemSet, b: &ElemSet) -> Result<ElemSet> {
    let factors: Vec<usize> = a.iter().collect();
    b.left_product(e, &factors)
}

/// First class pair, in `all_classes` order, whose product contains every
/// non-identity element. `Ok(None)` if no pair works (e.g. abelian input).
pub fn find_near_cover_pair(t: &PermGroup) -> Result<Option<ClassProductWitness>> {
    let e = t.enumeration()?;
    let classes = all_classes(&e);
    let n = classes.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let hit = pairs.par_iter().find_map_first(|&(i, j)| {
        let prod = class_product(&e, &classes[i], &classes[j]).ok()?;
        let missing = e.order() - prod.count();
        let near = missing == 0 || (missing == 1 && !prod.contains(0));
        near.then(|| (i, j, prod.contains(0)))
    });
    Ok(hit.map(|(i, j, covers_identity)| {
        ClassProductWitness::new(
            classes[i].representative.clone(),
            classes[j].representative.clone(),
            (i, j),
            covers_identity,
        )
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct ThreeClassVerdict {
    pub passed: bool,
    /// `α^T β^T ∪ {1} = T`.
    pub near_cover: bool,
    pub first_missing: Option<Permutation>,
}

/// Checks `γ = β⁻¹α⁻¹`, `α^T β^T ∪ {1} = T` and `α^T β^T γ^T = T`.
pub fn verify_three_class(t: &PermGroup, w: &ClassProductWitness) -> Result<ThreeClassVerdict> {
    let e = t.enumeration()?;
    if w.gamma != w.beta.inverse().mul(&w.alpha.inverse()) {
        return Ok(ThreeClassVerdict { passed: false, near_cover: false, first_missing: None });
    }
    let ca = conjugacy_class_of(&e, &w.alpha)?;
    let cb = conjugacy_class_of(&e, &w.beta)?;
    let cg = conjugacy_class_of(&e, &w.gamma)?;
    let ab = class_product(&e, &ca, &cb)?;
    let mut with_one = ab.clone();
    with_one.insert(0);
    let near_cover = with_one.is_full();
    let members: Vec<usize> = cg.members.iter().collect();
    let abc = ab.product(&e, &members)?;
    let first_missing = abc.first_missing().map(|i| e.element(i));
    Ok(ThreeClassVerdict { passed: near_cover && abc.is_full(), near_cover, first_missing })
}

/// `α^T β^T S = T` for a set `S` of at least two elements.
pub fn shift_cover_check(t: &PermGroup, alpha: &Permutation, beta: &Permutation, s: &[Permutation]) -> Result<bool> {
    let e = t.enumeration()?;
    let s_idx: Vec<usize> = s.iter().map(|x| e.index_of(x).ok_or(Error::NotMember)).collect::<Result<_>>()?;
    let mut distinct = s_idx.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Search("shift set needs at least two distinct elements".into()));
    }
    let ca = conjugacy_class_of(&e, alpha)?;
    let cb = conjugacy_class_of(&e, beta)?;
    Ok(class_product(&e, &ca, &cb)?.product(&e, &distinct)?.is_full())
}
