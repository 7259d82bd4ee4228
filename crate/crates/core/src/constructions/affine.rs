use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::named::is_prime;
use super::{invalid, BuiltGroup, GroupSpec};
use crate::covering::{CoveringCertificate, StabilizerSpec, Target};
use crate::error::{Error, Result};
use crate::permcore::{PermGroup, Permutation};

/// Irreducibility is decided exactly by spinning every vector up to this
/// many points, and by a seeded sample beyond.
const EXACT_SPIN_LIMIT: u64 = 1 << 16;
const MAX_DEGREE: u64 = 1 << 20;

/// `V ⋊ H` acting on `F_p^l`. Vector `(x_0, ..., x_{l-1})` is point
/// `1 + Σ x_i p^i`, so the zero vector is point 1.
#[derive(Clone, Debug)]
pub struct AffineGroup {
    pub p: u64,
    pub l: usize,
    pub h_gens: Vec<Vec<i64>>,
    pub group: PermGroup,
    pub h: PermGroup,
    pub v: PermGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct AffineCertificateTrace {
    pub k: usize,
    pub v: Vec<u64>,
    pub h: Permutation,
    pub w: Vec<u64>,
    pub basis_conjugators: Vec<Permutation>,
    pub basis: Vec<Vec<u64>>,
    pub block_vectors: Vec<Vec<u64>>,
    pub shifts: Vec<Vec<u64>>,
    /// Translation vectors of the final conjugators, in order.
    pub conjugator_vectors: Vec<Vec<u64>>,
}

struct Space {
    p: u64,
    l: usize,
}

impl Space {
    fn size(&self) -> usize {
        self.p.pow(self.l as u32) as usize
    }

    fn vector(&self, mut idx: usize) -> Vec<u64> {
        (0..self.l)
            .map(|_| {
                let x = idx as u64 % self.p;
                idx /= self.p as usize;
                x
            })
            .collect()
    }

    fn index(&self, v: &[u64]) -> usize {
        v.iter().rev().fold(0usize, |acc, &x| acc * self.p as usize + x as usize)
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    fn scale(&self, c: u64, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| c % self.p * x % self.p).collect()
    }

    /// Row vector times matrix.
    fn apply(&self, v: &[u64], m: &[u64]) -> Vec<u64> {
        (0..self.l).map(|j| (0..self.l).map(|i| v[i] * m[i * self.l + j]).sum::<u64>() % self.p).collect()
    }

    fn translation(&self, v: &[u64]) -> Permutation {
        let images = (0..self.size()).map(|i| self.index(&self.add(&self.vector(i), v)) as u32).collect();
        Permutation::from_images(images).expect("translations are bijective")
    }

    fn inv(&self, x: u64) -> u64 {
        let mut r = 1;
        let mut b = x % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }

    /// Reduces `v` against an echelon basis (pivot, row); adds it if
    /// independent. Returns whether it was added.
    fn absorb(&self, basis: &mut Vec<(usize, Vec<u64>)>, v: &[u64]) -> bool {
        let mut v = v.to_vec();
        for (pivot, row) in basis.iter() {
            let c = v[*pivot];
            if c != 0 {
                v = self.sub(&v, &self.scale(c, row));
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => false,
            Some(pivot) => {
                let v = self.scale(self.inv(v[pivot]), &v);
                for (_, row) in basis.iter_mut() {
                    let c = row[pivot];
                    if c != 0 {
                        *row = self.sub(row, &self.scale(c, &v));
                    }
                }
                basis.push((pivot, v));
                true
            }
        }
    }

    /// Dimension of the smallest subspace containing `x` and invariant
    /// under the matrices.
    fn spin(&self, x: &[u64], mats: &[Vec<u64>]) -> usize {
        let mut basis = Vec::new();
        let mut queue = vec![x.to_vec()];
        while let Some(y) = queue.pop() {
            if self.absorb(&mut basis, &y) {
                for m in mats {
                    queue.push(self.apply(&y, m));
                }
            }
        }
        basis.len()
    }
}

pub fn build_affine(p: u64, l: usize, h_gens: &[Vec<i64>], path: &str) -> Result<AffineGroup> {
    if !is_prime(p) {
        return Err(invalid(&format!("{path}.p"), format!("{p} is not prime")));
    }
    if l == 0 {
        return Err(invalid(&format!("{path}.l"), "dimension must be positive"));
    }
    match p.checked_pow(l as u32) {
        Some(n) if n <= MAX_DEGREE => {}
        _ => return Err(invalid(path, format!("{p}^{l} points is too many"))),
    }
    let space = Space { p, l };
    let mut mats = Vec::new();
    for (i, m) in h_gens.iter().enumerate() {
        if m.len() != l * l {
            return Err(invalid(&format!("{path}.h_gens[{i}]"), format!("expected {} entries, got {}", l * l, m.len())));
        }
        mats.push(m.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect::<Vec<u64>>());
    }
    let mut h_perms = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        let images = (0..space.size()).map(|x| space.index(&space.apply(&space.vector(x), m)) as u32).collect();
        let perm = Permutation::from_images(images)
            .map_err(|_| invalid(&format!("{path}.h_gens[{i}]"), format!("matrix is singular mod {p}")))?;
        h_perms.push(perm);
    }
    check_irreducible(&space, &mats).map_err(|v| {
        invalid(&format!("{path}.h_gens"), format!("matrices are reducible: {v:?} spans a proper invariant subspace"))
    })?;
    let n = space.size();
    let units: Vec<Permutation> = (0..l)
        .map(|i| {
            let mut e = vec![0; l];
            e[i] = 1;
            space.translation(&e)
        })
        .collect();
    let v = PermGroup::new(n, units.clone())?;
    let h = PermGroup::new(n, h_perms.clone())?;
    let group = PermGroup::new(n, units.into_iter().chain(h_perms).collect())?;
    Ok(AffineGroup { p, l, h_gens: h_gens.to_vec(), group, h, v })
}

/// Returns a vector whose spin is a proper subspace, if one is found.
fn check_irreducible(space: &Space, mats: &[Vec<u64>]) -> std::result::Result<(), Vec<u64>> {
    let check = |x: Vec<u64>| if space.spin(&x, mats) < space.l { Err(x) } else { Ok(()) };
    if space.size() as u64 <= EXACT_SPIN_LIMIT {
        for i in 1..space.size() {
            check(space.vector(i))?;
        }
        return Ok(());
    }
    for i in 0..space.l {
        let mut e = vec![0; space.l];
        e[i] = 1;
        check(e)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..16 {
        let x: Vec<u64> = (0..space.l).map(|_| rng.gen_range(0..space.p)).collect();
        if x.iter().any(|&c| c != 0) {
            check(x)?;
        }
    }
    Ok(())
}

impl AffineGroup {
    pub fn built(&self) -> BuiltGroup {
        BuiltGroup {
            group: self.group.clone(),
            stabilizer: self.h.clone(),
            stabilizer_spec: StabilizerSpec::Point { point: 1 },
            socle: Some(self.v.clone()),
            default_target: Target::Group,
        }
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec::Affine { p: self.p, l: self.l, h_gens: self.h_gens.clone() }
    }

    fn space(&self) -> Space {
        Space { p: self.p, l: self.l }
    }
}

/// `⌈log₂ p⌉`.
fn bits(p: u64) -> usize {
    let mut k = 0;
    while (1u64 << k) < p {
        k += 1;
    }
    k
}

/// The `1 + l⌈log₂ p⌉` certificate: telescoped blocks of translated
/// conjugates, one block per basis vector `w^{h_i}`, closed by plain `H`.
pub fn affine_certificate(a: &AffineGroup) -> Result<(CoveringCertificate, AffineCertificateTrace)> {
    let space = a.space();
    let e = a.h.enumeration()?;
    let point = |v: &[u64]| space.index(v);
    let mut choice = None;
    'outer: for vi in 1..space.size() {
        for hi in 1..e.order() {
            let h = e.element(hi);
            if h.inverse().apply(vi) != vi {
                choice = Some((vi, h));
                break 'outer;
            }
        }
    }
    let (vi, h) = choice.ok_or_else(|| Error::Search("every nonzero vector is central; H is not core-free".into()))?;
    let v = space.vector(vi);
    let w = space.sub(&space.vector(h.inverse().apply(vi)), &v);

    let mut echelon = Vec::new();
    let mut basis_conjugators = Vec::new();
    let mut basis = Vec::new();
    for hj in e.elements() {
        let wh = space.vector(hj.apply(point(&w)));
        if space.absorb(&mut echelon, &wh) {
            basis.push(wh);
            basis_conjugators.push(hj);
            if basis.len() == space.l {
                break;
            }
        }
    }
    if basis.len() < space.l {
        return Err(Error::Search("the H-images of w do not span V".into()));
    }
    let block_vectors: Vec<Vec<u64>> =
        basis_conjugators.iter().map(|hj| space.vector(hj.apply(vi))).collect();

    let k = bits(a.p);
    let top = (1u64 << k) - 1;
    // Coefficients 2^k - 1, 2^k - 2, 2^k - 4, ..., 2^k - 2^{k-1}, 0.
    let mut coeffs = vec![top % a.p];
    for j in 1..k {
        coeffs.push(((1u64 << k) - (1u64 << j)) % a.p);
    }
    coeffs.push(0);

    let l = space.l;
    let mut shifts = vec![vec![0u64; l]; l];
    for i in (0..l.saturating_sub(1)).rev() {
        shifts[i] = space.add(&space.scale(top, &block_vectors[i + 1]), &shifts[i + 1]);
    }
    let mut conjugator_vectors: Vec<Vec<u64>> = Vec::new();
    for i in 0..l {
        for &c in &coeffs {
            let x = space.add(&space.scale(c, &block_vectors[i]), &shifts[i]);
            // H^x H^x = H^x: adjacent repeats merge.
            if conjugator_vectors.last() != Some(&x) {
                conjugator_vectors.push(x);
            }
        }
    }
    debug_assert!(conjugator_vectors.last().is_some_and(|x| x.iter().all(|&c| c == 0)));
    let conjugators = conjugator_vectors.iter().map(|x| space.translation(x)).collect();
    let cert = CoveringCertificate {
        recipe: a.spec(),
        stabilizer: StabilizerSpec::Point { point: 1 },
        target: Target::Group,
        conjugators,
        witnesses: None,
        provenance: format!("affine(p={},l={})", a.p, a.l),
        class_witness: None,
    };
    let trace = AffineCertificateTrace { k, v, h, w, basis_conjugators, basis, block_vectors, shifts, conjugator_vectors };
    Ok((cert, trace))
}
