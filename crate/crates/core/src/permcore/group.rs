use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::permcore::enumerate::{closure_enumerate, DEFAULT_ENUMERATION_CAP};
use crate::permcore::{Enumeration, Permutation, StabChain};

/// Image arrays held by one enumeration may not exceed this many bytes.
pub const ENUMERATION_BYTE_LIMIT: u128 = 1 << 30;

/// A permutation group given by generators, with lazily derived
/// stabilizer chain and element enumeration.
///
/// Derived data is computed at most once and is deterministic, so a group can
/// be shared freely across threads.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
    enumeration: OnceLock<Arc<Enumeration>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let g = PermGroup::from_parts(self.degree, self.generators.clone());
        if let Some(c) = self.chain.get() {
            let _ = g.chain.set(c.clone());
        }
        if let Some(e) = self.enumeration.get() {
            let _ = g.enumeration.set(e.clone());
        }
        g
    }
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PermGroup(degree {}, gens [", self.degree)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Malformed("degree must be positive".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }
        Ok(Self::from_parts(degree, generators))
    }

    fn from_parts(degree: usize, generators: Vec<Permutation>) -> Self {
        PermGroup { degree, generators, chain: OnceLock::new(), enumeration: OnceLock::new() }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_parts(degree, Vec::new())
    }

    pub fn from_gens_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let (degree, gens) = crate::permcore::read_gens_file(path)?;
        PermGroup::new(degree, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::new(self.degree, &self.generators))
    }

    pub fn order(&self) -> u128 {
        match self.enumeration.get() {
            Some(e) => e.order() as u128,
            None => self.chain().order(),
        }
    }

    pub fn contains(&self, x: &Permutation) -> bool {
        if x.degree() != self.degree {
            return false;
        }
        match self.enumeration.get() {
            Some(e) => e.contains(x),
            None => self.chain().contains(x),
        }
    }

    pub fn is_enumerable(&self, cap: usize) -> bool {
        let order = self.order();
        order <= cap as u128 && order * self.degree as u128 * 4 <= ENUMERATION_BYTE_LIMIT
    }

    pub fn enumeration(&self) -> Result<Arc<Enumeration>> {
        self.enumeration_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumeration_with_cap(&self, cap: usize) -> Result<Arc<Enumeration>> {
        if let Some(e) = self.enumeration.get() {
            return Ok(e.clone());
        }
        if !self.is_enumerable(cap) {
            return Err(Error::TooLarge { order: self.order(), cap });
        }
        let e = Arc::new(closure_enumerate(self.degree, &self.generators, cap)?);
        Ok(self.enumeration.get_or_init(|| e).clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }

    /// Orbit of a 0-based point, sorted.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        if point >= self.degree {
            return Err(Error::PointOutOfRange { point: point + 1, degree: self.degree });
        }
        let mut seen = vec![false; self.degree];
        seen[point] = true;
        let mut queue = VecDeque::from([point]);
        let mut orbit = vec![point];
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        Ok(orbit)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// Stabilizer of a 0-based point.
    pub fn point_stabilizer(&self, point: usize) -> Result<PermGroup> {
        self.pointwise_stabilizer(&[point])
    }

    /// Pointwise stabilizer of a list of 0-based points.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        if let Some(&p) = points.iter().find(|&&p| p >= self.degree) {
            return Err(Error::PointOutOfRange { point: p + 1, degree: self.degree });
        }
        let chain = StabChain::with_base_prefix(self.degree, &self.generators, points);
        let gens = chain.stabilizer_generators(points.len());
        Ok(PermGroup::from_parts(self.degree, gens))
    }

    /// The subgroup generated by `g^-1 h g` for the generators `h`.
    pub fn conjugate(&self, g: &Permutation) -> Result<PermGroup> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, g.degree()));
        }
        let gi = g.inverse();
        let gens = self.generators.iter().map(|h| gi.mul(h).mul(g)).collect();
        Ok(PermGroup::from_parts(self.degree, gens))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    /// True when every generator of `by` conjugates `self` into itself.
    pub fn is_normalized_by(&self, by: &[Permutation]) -> bool {
        by.iter().all(|g| {
            let gi = g.inverse();
            self.generators.iter().all(|h| self.contains(&gi.mul(h).mul(g)))
        })
    }

    pub fn is_normal_in(&self, ambient: &PermGroup) -> bool {
        self.is_subgroup_of(ambient) && self.is_normalized_by(ambient.generators())
    }

    /// Same set of elements (compared by order and mutual containment).
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }

    /// Smallest normal subgroup of `self` containing `sub`.
    pub fn normal_closure(&self, sub: &PermGroup) -> Result<PermGroup> {
        if !sub.is_subgroup_of(self) {
            return Err(Error::NotSubgroup);
        }
        let mut gens: Vec<Permutation> =
            sub.generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = StabChain::new(self.degree, &gens);
        let mut i = 0;
        while i < gens.len() {
            for g in &self.generators {
                let c = gens[i].conjugate_by(g);
                if !chain.contains(&c) {
                    gens.push(c);
                    chain = StabChain::new(self.degree, &gens);
                }
            }
            i += 1;
        }
        let closure = PermGroup::from_parts(self.degree, gens);
        let _ = closure.chain.set(chain);
        Ok(closure)
    }

    /// `N_G(H)` by brute force over the enumerated elements of `self`.
    pub fn normalizer(&self, sub: &PermGroup) -> Result<PermGroup> {
        if !sub.is_subgroup_of(self) {
            return Err(Error::NotSubgroup);
        }
        let e = self.enumeration()?;
        let sub_gens: Vec<usize> = sub
            .generators
            .iter()
            .map(|h| e.index_of(h).ok_or(Error::NotSubgroup))
            .collect::<Result<_>>()?;
        let mut member = vec![false; e.order()];
        for x in sub_elements(&e, &sub_gens) {
            member[x] = true;
        }
        let mut gens = sub.generators.clone();
        let mut found = PermGroup::from_parts(self.degree, gens.clone());
        for g in 0..e.order() {
            if member[g] || found.contains(&e.element(g)) {
                continue;
            }
            if sub_gens.iter().all(|&h| member[e.conjugate(h, g)]) {
                gens.push(e.element(g));
                found = PermGroup::from_parts(self.degree, gens.clone());
            }
        }
        Ok(found)
    }

    /// Direct product acting on disjoint consecutive blocks of points.
    pub fn direct_product(factors: &[&PermGroup]) -> PermGroup {
        let degree: usize = factors.iter().map(|f| f.degree).sum();
        let mut gens = Vec::new();
        let mut offset = 0;
        for f in factors {
            for g in &f.generators {
                gens.push(embed(g, offset, degree));
            }
            offset += f.degree;
        }
        PermGroup::from_parts(degree, gens)
    }
}

/// `g` moved onto points `offset..offset+g.degree()` of a larger domain.
pub fn embed(g: &Permutation, offset: usize, degree: usize) -> Permutation {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for i in 0..g.degree() {
        images[offset + i] = (offset + g.apply(i)) as u32;
    }
    Permutation::from_images_unchecked(images)
}

/// Element indices of the subgroup generated by `gens` inside an enumeration.
pub fn sub_elements(e: &Enumeration, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; e.order()];
    seen[0] = true;
    let mut out = vec![0usize];
    let tables: Vec<Vec<u32>> = gens.iter().map(|&g| e.right_table(g)).collect();
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        for t in &tables {
            let y = t[x] as usize;
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
        i += 1;
    }
    out
}
