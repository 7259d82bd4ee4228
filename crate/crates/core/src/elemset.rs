//! Dense subsets of an enumerated group and the product kernels the search
//! and the certificate verifier run on.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::permcore::{sub_elements, Enumeration, PermGroup, Permutation};

/// A bitset over the element indices of one enumeration.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    ambient: u64,
    len: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ElemSet({}/{})", self.count(), self.len)
    }
}

impl ElemSet {
    pub fn empty(e: &Enumeration) -> Self {
        ElemSet { ambient: e.ambient_id(), len: e.order(), words: vec![0; e.order().div_ceil(64)] }
    }

    pub fn full(e: &Enumeration) -> Self {
        let mut s = Self::empty(e);
        for i in 0..s.len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(e: &Enumeration, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(e);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// The elements of `sub`, which must be a subgroup of the enumerated group.
    pub fn of_subgroup(e: &Enumeration, sub: &PermGroup) -> Result<Self> {
        let gens: Vec<usize> = sub
            .generators()
            .iter()
            .map(|g| e.index_of(g).ok_or(Error::NotSubgroup))
            .collect::<Result<_>>()?;
        Ok(Self::from_indices(e, sub_elements(e, &gens)))
    }

    /// Elements given as permutations; fails on a non-member.
    pub fn of_elements<'a>(e: &Enumeration, elems: impl IntoIterator<Item = &'a Permutation>) -> Result<Self> {
        let mut s = Self::empty(e);
        for x in elems {
            s.insert(e.index_of(x).ok_or(Error::NotMember)?);
        }
        Ok(s)
    }

    #[inline]
    pub fn ambient(&self) -> u64 {
        self.ambient
    }

    /// Size of the ambient group.
    #[inline]
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn first_missing(&self) -> Option<usize> {
        (0..self.len).find(|&i| !self.contains(i))
    }

    fn check(&self, other: &ElemSet) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    /// `other ⊆ self`.
    pub fn contains_set(&self, other: &ElemSet) -> Result<bool> {
        self.check(other)?;
        Ok(self.contains_set_unchecked(other))
    }

    #[inline]
    pub(crate) fn contains_set_unchecked(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| b & !a == 0)
    }

    pub fn union_with(&mut self, other: &ElemSet) -> Result<()> {
        self.check(other)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(())
    }

    pub fn intersection_count(&self, other: &ElemSet) -> Result<usize> {
        self.check(other)?;
        Ok(self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum())
    }

    /// `{ s * k : s ∈ self, k ∈ factors }`.
    pub fn product(&self, e: &Enumeration, factors: &[usize]) -> Result<ElemSet> {
        if self.ambient != e.ambient_id() {
            return Err(Error::AmbientMismatch);
        }
        let mut out = ElemSet::empty(e);
        let members: Vec<usize> = self.iter().collect();
        for &k in factors {
            let table = e.right_table(k);
            for &s in &members {
                out.insert(table[s] as usize);
            }
        }
        Ok(out)
    }

    /// `{ k * s : k ∈ factors, s ∈ self }`.
    pub fn left_product(&self, e: &Enumeration, factors: &[usize]) -> Result<ElemSet> {
        if self.ambient != e.ambient_id() {
            return Err(Error::AmbientMismatch);
        }
        let mut out = ElemSet::empty(e);
        let members: Vec<usize> = self.iter().collect();
        for &k in factors {
            let table = e.left_table(k);
            for &s in &members {
                out.insert(table[s] as usize);
            }
        }
        Ok(out)
    }

    /// `g^-1 * self * g` for the element with index `g`.
    pub fn conjugate(&self, e: &Enumeration, g: usize) -> Result<ElemSet> {
        if self.ambient != e.ambient_id() {
            return Err(Error::AmbientMismatch);
        }
        let left = e.left_table(e.inverse(g));
        let right = e.right_table(g);
        Ok(ElemSet::from_indices(e, self.iter().map(|i| right[left[i] as usize] as usize)))
    }

    /// 128-bit fingerprint of the raw bits, used for deduplication.
    pub fn fingerprint(&self) -> u128 {
        let mut a = DefaultHasher::new();
        self.words.hash(&mut a);
        let mut b = DefaultHasher::new();
        0x9e37_79b9_7f4a_7c15u64.hash(&mut b);
        self.words.hash(&mut b);
        ((a.finish() as u128) << 64) | b.finish() as u128
    }
}

/// The partition of an enumerated group into left cosets `xK` of a subgroup
/// `K`. Right multiplication of any set by `K` is then a union of whole
/// classes, so `S * K` costs one pass over the group.
#[derive(Debug)]
pub struct CosetPartition {
    ambient: u64,
    label: Vec<u32>,
    classes: usize,
    subgroup_order: usize,
}

impl CosetPartition {
    /// Left cosets of the subgroup generated by the given element indices.
    pub fn new(e: &Enumeration, sub_gens: &[usize]) -> Self {
        let tables: Vec<Vec<u32>> = sub_gens.iter().map(|&g| e.right_table(g)).collect();
        let n = e.order();
        let mut label = vec![u32::MAX; n];
        let mut classes = 0u32;
        let mut stack = Vec::new();
        let mut subgroup_order = 0;
        for start in 0..n {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = classes;
            stack.push(start);
            let mut size = 0;
            while let Some(x) = stack.pop() {
                size += 1;
                for t in &tables {
                    let y = t[x] as usize;
                    if label[y] == u32::MAX {
                        label[y] = classes;
                        stack.push(y);
                    }
                }
            }
            if classes == 0 {
                subgroup_order = size;
            }
            classes += 1;
        }
        CosetPartition { ambient: e.ambient_id(), label, classes: classes as usize, subgroup_order }
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup_order
    }

    pub fn index(&self) -> usize {
        self.classes
    }

    /// Coset number of element `i`; the subgroup itself is coset 0.
    #[inline]
    pub fn label(&self, i: usize) -> usize {
        self.label[i] as usize
    }

    /// The subgroup itself: the coset of the identity.
    pub fn subgroup(&self, e: &Enumeration) -> ElemSet {
        ElemSet::from_indices(e, (0..self.label.len()).filter(|&i| self.label[i] == 0))
    }

    /// `set * K`.
    pub fn right_multiply(&self, set: &ElemSet) -> Result<ElemSet> {
        if set.ambient != self.ambient {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.right_multiply_unchecked(set))
    }

    pub(crate) fn right_multiply_unchecked(&self, set: &ElemSet) -> ElemSet {
        let mut hit = vec![false; self.classes];
        for i in set.iter() {
            hit[self.label[i] as usize] = true;
        }
        let mut out = ElemSet { ambient: self.ambient, len: set.len, words: vec![0; set.words.len()] };
        for (i, &l) in self.label.iter().enumerate() {
            if hit[l as usize] {
                out.insert(i);
            }
        }
        out
    }

    /// `|set * K|` without materializing the product.
    pub(crate) fn product_count(&self, set: &ElemSet) -> usize {
        let mut hit = vec![false; self.classes];
        let mut n = 0;
        for i in set.iter() {
            let l = self.label[i] as usize;
            if !hit[l] {
                hit[l] = true;
                n += 1;
            }
        }
        n * self.subgroup_order
    }
}
