//! Stabilizer chains built by the deterministic incremental Schreier-Sims
//! algorithm.
//!
//! Level `i` stores generators of `G^(i)`, the pointwise stabilizer of the
//! first `i` base points, together with the orbit of `base[i]` under them and
//! a transversal `u_b` mapping `base[i]` to each orbit point `b`.

use rand::Rng;

use crate::permcore::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// slot into `reps` per point, `u32::MAX` when outside the orbit
    slot: Vec<u32>,
    reps: Vec<Permutation>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut slot = vec![u32::MAX; degree];
        slot[base] = 0;
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            slot,
            reps: vec![Permutation::identity(degree)],
        }
    }

    #[inline]
    fn rep(&self, point: usize) -> Option<&Permutation> {
        match self.slot[point] {
            u32::MAX => None,
            s => Some(&self.reps[s as usize]),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    prefix: Vec<usize>,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        Self::with_base_prefix(degree, gens, &[])
    }

    /// Chain whose base starts with `prefix` (0-based points), so level
    /// `prefix.len()` holds the pointwise stabilizer of those points.
    pub fn with_base_prefix(degree: usize, gens: &[Permutation], prefix: &[usize]) -> Self {
        let mut chain = StabChain { degree, prefix: prefix.to_vec(), levels: Vec::new() };
        for g in gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            if !chain.contains_from(0, g) {
                chain.add_generator(0, g.clone());
            }
        }
        // materialize the requested prefix even when the group fixes it
        while chain.levels.len() < prefix.len() {
            let lvl = Level::new(degree, prefix[chain.levels.len()]);
            chain.levels.push(lvl);
        }
        chain
    }

    fn add_generator(&mut self, i: usize, g: Permutation) {
        if i == self.levels.len() {
            let base = match self.prefix.get(i) {
                Some(&b) => b,
                None => g.first_moved_point().expect("identity is never added"),
            };
            self.levels.push(Level::new(self.degree, base));
        }
        let schreier_pairs = {
            let lvl = &mut self.levels[i];
            lvl.gens.push(g);
            let new_gen = lvl.gens.len() - 1;
            let old_len = lvl.orbit.len();
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            let visit = |lvl: &mut Level, j: usize, s: usize, pairs: &mut Vec<(usize, usize)>| {
                let b = lvl.orbit[j];
                let c = lvl.gens[s].apply(b);
                if lvl.slot[c] == u32::MAX {
                    let rep = lvl.reps[lvl.slot[b] as usize].mul(&lvl.gens[s]);
                    lvl.slot[c] = lvl.reps.len() as u32;
                    lvl.reps.push(rep);
                    lvl.orbit.push(c);
                } else {
                    pairs.push((b, s));
                }
            };
            for j in 0..old_len {
                visit(lvl, j, new_gen, &mut pairs);
            }
            let mut j = old_len;
            while j < lvl.orbit.len() {
                for s in 0..lvl.gens.len() {
                    visit(lvl, j, s, &mut pairs);
                }
                j += 1;
            }
            pairs
        };
        for (b, s) in schreier_pairs {
            let h = {
                let lvl = &self.levels[i];
                let c = lvl.gens[s].apply(b);
                lvl.rep(b).unwrap().mul(&lvl.gens[s]).mul(&lvl.rep(c).unwrap().inverse())
            };
            if h.is_identity() {
                continue;
            }
            if !self.contains_from(i + 1, &h) {
                self.add_generator(i + 1, h);
            }
        }
    }

    /// Sifts `x` from level `i`; returns the residue and the level reached.
    fn sift(&self, i: usize, x: &Permutation) -> (Permutation, usize) {
        let mut h = x.clone();
        for (j, lvl) in self.levels.iter().enumerate().skip(i) {
            let b = h.apply(lvl.base);
            match lvl.rep(b) {
                Some(u) => h = h.mul(&u.inverse()),
                None => return (h, j),
            }
        }
        (h, self.levels.len())
    }

    fn contains_from(&self, i: usize, x: &Permutation) -> bool {
        let (h, j) = self.sift(i, x);
        j == self.levels.len() && h.is_identity()
    }

    pub fn contains(&self, x: &Permutation) -> bool {
        x.degree() == self.degree && self.contains_from(0, x)
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().fold(1u128, |acc, l| acc.saturating_mul(l.orbit.len() as u128))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Generators of the pointwise stabilizer of the first `i` base points.
    pub fn stabilizer_generators(&self, i: usize) -> Vec<Permutation> {
        self.levels.get(i).map(|l| l.gens.clone()).unwrap_or_default()
    }

    /// Orbit of the `i`-th base point under `G^(i)`.
    pub fn basic_orbit(&self, i: usize) -> &[usize] {
        &self.levels[i].orbit
    }

    /// Uniformly random element: a product of random transversal elements.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for lvl in self.levels.iter().rev() {
            let b = lvl.orbit[rng.gen_range(0..lvl.orbit.len())];
            g = g.mul(lvl.rep(b).unwrap());
        }
        g
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
    fn orders_of_small_groups() {
        let a5 = StabChain::new(5, &gens(&["(1 2 3 4 5)", "(1 2 3)"], 5));
        assert_eq!(a5.order(), 60);
        assert!(!a5.contains(&parse_cycles("(1 2)", 5).unwrap()));
        assert!(a5.contains(&parse_cycles("(1 2)(3 4)", 5).unwrap()));
        let s5 = StabChain::new(5, &gens(&["(1 2 3 4 5)", "(1 2)"], 5));
        assert_eq!(s5.order(), 120);
        assert!(s5.contains(&parse_cycles("(1 2)", 5).unwrap()));
        let trivial = StabChain::new(4, &gens(&["id"], 4));
        assert_eq!(trivial.order(), 1);
        assert!(trivial.contains(&Permutation::identity(4)));
        let m11 = StabChain::new(11, &gens(&["(1 2 3 4 5 6 7 8 9 10 11)", "(3 7 11 8)(4 10 5 6)"], 11));
        assert_eq!(m11.order(), 7920);
    }

    #[test]
    fn base_prefix_gives_point_stabilizer() {
        let s5 = StabChain::with_base_prefix(5, &gens(&["(1 2 3 4 5)", "(1 2)"], 5), &[4]);
        assert_eq!(s5.base()[0], 4);
        let stab = StabChain::new(5, &s5.stabilizer_generators(1));
        assert_eq!(stab.order(), 24);
        assert!(s5.stabilizer_generators(1).iter().all(|g| g.apply(4) == 4));
        // a prefix point fixed by everything still yields a level
        let fix = StabChain::with_base_prefix(4, &gens(&["(1 2)"], 4), &[3]);
        assert_eq!(fix.base()[0], 3);
        assert_eq!(fix.order(), 2);
    }

    #[test]
    fn random_elements_are_members() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let m11 = StabChain::new(11, &gens(&["(1 2 3 4 5 6 7 8 9 10 11)", "(3 7 11 8)(4 10 5 6)"], 11));
        for _ in 0..50 {
            assert!(m11.contains(&m11.random_element(&mut rng)));
        }
    }
}
