//! Canonical breadth-first enumeration of a permutation group.
//!
//! Elements are numbered in BFS order from the identity, applying the
//! generators (sorted lexicographically by image sequence) on the right.
//! Index 0 is always the identity. Right-multiplication tables for the
//! generators fall out of the BFS, and every other translation table is
//! derived from them by walking the BFS tree, without composing permutations.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::permcore::Permutation;

pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

static NEXT_AMBIENT_ID: AtomicU64 = AtomicU64::new(1);

/// Open-addressing index from image arrays to element numbers.
struct IndexTable {
    mask: usize,
    slots: Vec<u32>,
}

const EMPTY: u32 = u32::MAX;

fn hash_images(images: &[u32]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &x in images {
        h ^= x as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^= h >> 29;
    h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h ^ (h >> 32)
}

impl IndexTable {
    fn with_capacity(n: usize) -> Self {
        let size = (2 * n.max(8)).next_power_of_two();
        IndexTable { mask: size - 1, slots: vec![EMPTY; size] }
    }

    fn find(&self, elems: &[u32], degree: usize, images: &[u32]) -> std::result::Result<u32, usize> {
        let mut pos = hash_images(images) as usize & self.mask;
        loop {
            let s = self.slots[pos];
            if s == EMPTY {
                return Err(pos);
            }
            let start = s as usize * degree;
            if &elems[start..start + degree] == images {
                return Ok(s);
            }
            pos = (pos + 1) & self.mask;
        }
    }

    fn grow(&mut self, elems: &[u32], degree: usize, count: usize) {
        let mut bigger = IndexTable::with_capacity(2 * count);
        for i in 0..count {
            let images = &elems[i * degree..(i + 1) * degree];
            let pos = bigger.find(elems, degree, images).unwrap_err();
            bigger.slots[pos] = i as u32;
        }
        *self = bigger;
    }
}

/// An enumerated group: element list, index, and translation tables.
pub struct Enumeration {
    ambient: u64,
    degree: usize,
    order: usize,
    generators: Vec<Permutation>,
    elems: Vec<u32>,
    table: IndexTable,
    parent: Vec<u32>,
    parent_gen: Vec<u32>,
    right_gen: Vec<Vec<u32>>,
    inverse: Vec<u32>,
}

impl std::fmt::Debug for Enumeration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Enumeration")
            .field("degree", &self.degree)
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

/// Canonical generator list: sorted by image sequence, duplicates and the
/// identity removed.
pub fn canonical_generators(gens: &[Permutation]) -> Vec<Permutation> {
    let mut g: Vec<Permutation> = gens.iter().filter(|p| !p.is_identity()).cloned().collect();
    g.sort();
    g.dedup();
    g
}

/// BFS closure of `gens` on `degree` points, failing once more than `cap`
/// elements have been found.
pub fn closure_enumerate(degree: usize, gens: &[Permutation], cap: usize) -> Result<Enumeration> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }
    }
    let generators = canonical_generators(gens);
    let ngens = generators.len();
    let mut elems: Vec<u32> = (0..degree as u32).collect();
    let mut table = IndexTable::with_capacity(1024);
    let first = table.find(&elems, degree, &elems[0..degree]).unwrap_err();
    table.slots[first] = 0;
    let mut count = 1usize;
    let mut parent = vec![EMPTY];
    let mut parent_gen = vec![EMPTY];
    let mut right_gen: Vec<Vec<u32>> = vec![Vec::new(); ngens];
    let mut scratch = vec![0u32; degree];
    let mut i = 0usize;
    while i < count {
        for (s, g) in generators.iter().enumerate() {
            let base = i * degree;
            for (k, x) in scratch.iter_mut().enumerate() {
                *x = g.images()[elems[base + k] as usize];
            }
            let idx = match table.find(&elems, degree, &scratch) {
                Ok(idx) => idx,
                Err(pos) => {
                    if count >= cap {
                        return Err(Error::CapExceeded { cap, partial: count + 1 });
                    }
                    elems.extend_from_slice(&scratch);
                    table.slots[pos] = count as u32;
                    parent.push(i as u32);
                    parent_gen.push(s as u32);
                    count += 1;
                    if 2 * count > table.mask {
                        table.grow(&elems, degree, count);
                    }
                    (count - 1) as u32
                }
            };
            right_gen[s].push(idx);
        }
        i += 1;
    }
    let mut e = Enumeration {
        ambient: NEXT_AMBIENT_ID.fetch_add(1, Ordering::Relaxed),
        degree,
        order: count,
        generators,
        elems,
        table,
        parent,
        parent_gen,
        right_gen,
        inverse: Vec::new(),
    };
    let mut inverse = vec![0u32; count];
    let mut inv = vec![0u32; degree];
    for i in 0..count {
        for (k, &x) in e.images(i).iter().enumerate() {
            inv[x as usize] = k as u32;
        }
        inverse[i] = e.index_of_images(&inv).expect("group closed under inverses") as u32;
    }
    e.inverse = inverse;
    Ok(e)
}

impl Enumeration {
    /// Tag identifying this enumeration; element sets over different tags
    /// cannot be combined.
    #[inline]
    pub fn ambient_id(&self) -> u64 {
        self.ambient
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    #[inline]
    pub fn images(&self, i: usize) -> &[u32] {
        &self.elems[i * self.degree..(i + 1) * self.degree]
    }

    pub fn element(&self, i: usize) -> Permutation {
        Permutation::from_images_unchecked(self.images(i).to_vec())
    }

    pub fn elements(&self) -> impl Iterator<Item = Permutation> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn index_of_images(&self, images: &[u32]) -> Option<usize> {
        if images.len() != self.degree {
            return None;
        }
        self.table.find(&self.elems, self.degree, images).ok().map(|i| i as usize)
    }

    pub fn index_of(&self, x: &Permutation) -> Option<usize> {
        self.index_of_images(x.images())
    }

    pub fn contains(&self, x: &Permutation) -> bool {
        self.index_of(x).is_some()
    }

    #[inline]
    pub fn inverse(&self, i: usize) -> usize {
        self.inverse[i] as usize
    }

    /// Index of `e_i * e_j`.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        let a = self.images(i);
        let b = self.images(j);
        let prod: Vec<u32> = a.iter().map(|&x| b[x as usize]).collect();
        self.index_of_images(&prod).expect("group closed under products")
    }

    /// Index of `e_g^-1 * e_x * e_g`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inverse(g), x), g)
    }

    /// Table `i -> index(e_x * e_i)`.
    pub fn left_table(&self, x: usize) -> Vec<u32> {
        let mut t = vec![0u32; self.order];
        t[0] = x as u32;
        for i in 1..self.order {
            let p = self.parent[i] as usize;
            let s = self.parent_gen[i] as usize;
            t[i] = self.right_gen[s][t[p] as usize];
        }
        t
    }

    /// Table `i -> index(e_i * e_x)`.
    pub fn right_table(&self, x: usize) -> Vec<u32> {
        let left = self.left_table(self.inverse(x));
        (0..self.order)
            .map(|i| self.inverse[left[self.inverse[i] as usize] as usize])
            .collect()
    }

    /// Right-multiplication table of the `s`-th canonical generator.
    pub fn generator_table(&self, s: usize) -> &[u32] {
        &self.right_gen[s]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::parse_cycles;

    fn gens(list: &[&str], n: usize) -> Vec<Permutation> {
        list.iter().map(|s| parse_cycles(s, n).unwrap()).collect()
    }

    #[test]
    fn a5_has_order_60() {
        let e = closure_enumerate(5, &gens(&["(1 2 3 4 5)", "(1 2 3)"], 5), 1_000_000).unwrap();
        assert_eq!(e.order(), 60);
        assert!(e.element(0).is_identity());
    }

    #[test]
    fn trivial_group() {
        let e = closure_enumerate(4, &gens(&["id"], 4), 1).unwrap();
        assert_eq!(e.order(), 1);
        assert!(e.generators().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let err = closure_enumerate(5, &gens(&["(1 2 3 4 5)", "(1 2)"], 5), 100).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 100, partial: 101 }));
        assert_eq!(closure_enumerate(5, &gens(&["(1 2 3 4 5)", "(1 2)"], 5), 120).unwrap().order(), 120);
    }

    #[test]
    fn order_independent_of_generator_order() {
        let a = closure_enumerate(5, &gens(&["(1 2 3 4 5)", "(1 2)"], 5), 1000).unwrap();
        let b = closure_enumerate(5, &gens(&["(1 2)", "(1 2 3 4 5)", "(1 2)"], 5), 1000).unwrap();
        assert_eq!(a.elems, b.elems);
    }

    #[test]
    fn translation_tables_match_composition() {
        let e = closure_enumerate(5, &gens(&["(1 2 3 4 5)", "(1 2)"], 5), 1000).unwrap();
        for x in [0, 1, 17, 63, 119] {
            let l = e.left_table(x);
            let r = e.right_table(x);
            for i in 0..e.order() {
                assert_eq!(l[i] as usize, e.mul(x, i));
                assert_eq!(r[i] as usize, e.mul(i, x));
            }
        }
        for i in 0..e.order() {
            assert_eq!(e.mul(i, e.inverse(i)), 0);
        }
    }
}
