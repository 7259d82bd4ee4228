//! Twisted wreath products `G = B₀ ⋊ P` in their regular-socle action.
//!
//! `B₀ ≅ T^k` through `f ↦ (f(l_1), ..., f(l_k))` for the transversal
//! `l_1, ..., l_k` of `Q` in `P`. Points are the tuples of `T^k`, numbered
//! `Σ idx(t_j)·|T|^{j-1}` with `idx` the canonical enumeration index in `T`,
//! so the identity tuple is point 1 and its stabilizer is `P`. `B₀` acts by
//! coordinatewise right multiplication and `p ∈ P` by `(f^p)_j = f_i^{φ(q)}`
//! where `p·l_j = l_i·q`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{invalid, perm_at, BuiltGroup, GroupSpec, TwistedSpec};
use crate::classprod::find_near_cover_pair;
use crate::covering::{ClassWitnessRecord, CoveringCertificate, StabilizerSpec, Target, Witness};
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::permcore::{Enumeration, PermGroup, Permutation};

const MAX_POINTS: u128 = 1_000_000;

#[derive(Clone, Debug)]
pub struct TwistedWreathGroup {
    pub spec: TwistedSpec,
    pub k: usize,
    pub t: PermGroup,
    pub p: PermGroup,
    pub q: PermGroup,
    /// Action of every element of `P` on the `k` blocks.
    action: HashMap<Permutation, Permutation>,
    /// `φ(q)` for every `q ∈ Q`, as a permutation of `T`'s domain.
    phi: HashMap<Permutation, Permutation>,
    pub transversal: Vec<Permutation>,
    t_enum: Arc<Enumeration>,
    /// `G` on `|T|^k` points.
    pub group: PermGroup,
    /// `B₀`.
    pub socle: PermGroup,
    /// `P` inside `G`: the stabilizer of point 1.
    pub complement: PermGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    /// `t_{i,j}` in `T`'s own coordinates.
    pub t: Permutation,
    pub orbit_size: usize,
    /// `O_{i,j}` is closed under conjugation by `T`.
    pub normal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedWreathTrace {
    pub transversal: Vec<Permutation>,
    /// Per block `i`, the three orbit records.
    pub orbits: Vec<[OrbitRecord; 3]>,
    /// `X_{i,1} X_{i,2} X_{i,3} ⊇ T_i`, checked inside `T`.
    pub x_product_covers: Vec<bool>,
    pub witnesses: usize,
}

/// Splits the elements of `⟨a_i ⊕ b_i⟩` into a map `a ↦ b`; fails unless
/// the projection to the first factor is injective, i.e. `a_i ↦ b_i`
/// extends to a homomorphism.
fn graph_map(pairs: &[(Permutation, Permutation)], domain_order: u128) -> Option<HashMap<Permutation, Permutation>> {
    let (da, db) = match pairs.first() {
        Some((a, b)) => (a.degree(), b.degree()),
        None => return None,
    };
    let graph = PermGroup::new(da + db, pairs.iter().map(|(a, b)| a.direct_sum(b)).collect()).ok()?;
    if graph.order() != domain_order {
        return None;
    }
    let e = graph.enumeration().ok()?;
    Some(
        e.elements()
            .map(|g| (g.restrict(0, da).expect("block"), g.restrict(da, db).expect("block")))
            .collect(),
    )
}

pub fn build_twisted_wreath(spec: &TwistedSpec, path: &str) -> Result<TwistedWreathGroup> {
    let k = spec.k;
    if k == 0 {
        return Err(invalid(&format!("{path}.k"), "k must be at least 1"));
    }
    let p = super::group_at(&spec.p, &format!("{path}.p"))?;
    let t = super::group_at(&spec.t, &format!("{path}.t"))?;
    let n_points = t.order().checked_pow(k as u32).unwrap_or(u128::MAX);
    if n_points > MAX_POINTS {
        return Err(invalid(path, format!("|T|^k = {n_points} points is too many")));
    }
    let t_enum = t.enumeration()?;

    // P and its action on k points.
    let mut pairs = Vec::new();
    for (i, a) in spec.p_action.iter().enumerate() {
        let x = perm_at(&a.element, p.degree(), &format!("{path}.p_action[{i}].element"))?;
        if !p.contains(&x) {
            return Err(invalid(&format!("{path}.p_action[{i}].element"), "not an element of P"));
        }
        let y = perm_at(&a.image, k, &format!("{path}.p_action[{i}].image"))?;
        pairs.push((x, y));
    }
    let p_gens: Vec<Permutation> = pairs.iter().map(|(x, _)| x.clone()).collect();
    if PermGroup::new(p.degree(), p_gens.clone())?.order() != p.order() {
        return Err(invalid(&format!("{path}.p_action"), "listed elements do not generate P"));
    }
    let action = if pairs.is_empty() {
        // P trivial.
        std::iter::once((p.identity(), Permutation::identity(k))).collect()
    } else {
        graph_map(&pairs, p.order())
            .ok_or_else(|| invalid(&format!("{path}.p_action"), "images do not define a homomorphism"))?
    };
    let act_group = PermGroup::new(k, pairs.iter().map(|(_, y)| y.clone()).collect())?;
    if !act_group.is_transitive() {
        return Err(invalid(&format!("{path}.p_action"), "P is not transitive on the k blocks"));
    }

    // Q and φ.
    let q_gens = spec
        .q_gens
        .iter()
        .enumerate()
        .map(|(i, s)| perm_at(s, p.degree(), &format!("{path}.q_gens[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    for (i, q) in q_gens.iter().enumerate() {
        if !p.contains(q) || action[q].apply(0) != 0 {
            return Err(invalid(&format!("{path}.q_gens[{i}]"), "not in the stabilizer of block 1"));
        }
    }
    let q = PermGroup::new(p.degree(), q_gens.clone())?;
    if q.order() * k as u128 != p.order() {
        return Err(invalid(&format!("{path}.q_gens"), "does not generate the stabilizer of block 1"));
    }
    let mut sigma: Vec<Option<Permutation>> = vec![None; q_gens.len()];
    for (i, ph) in spec.phi.iter().enumerate() {
        let at = format!("{path}.phi[{i}]");
        if ph.q_gen == 0 || ph.q_gen > q_gens.len() {
            return Err(invalid(&format!("{at}.q_gen"), format!("index outside 1..={}", q_gens.len())));
        }
        if sigma[ph.q_gen - 1].is_some() {
            return Err(invalid(&format!("{at}.q_gen"), "listed twice"));
        }
        let s = perm_at(&ph.automorphism, t.degree(), &format!("{at}.automorphism"))?;
        if !t.is_normalized_by(std::slice::from_ref(&s)) {
            return Err(invalid(&format!("{at}.automorphism"), "does not normalize T"));
        }
        sigma[ph.q_gen - 1] = Some(s);
    }
    let sigma: Vec<Permutation> = sigma
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| invalid(&format!("{path}.phi"), format!("no image for q_gen {}", i + 1))))
        .collect::<Result<_>>()?;
    let phi = if q_gens.is_empty() {
        std::iter::once((p.identity(), t.identity())).collect()
    } else {
        let pairs: Vec<(Permutation, Permutation)> = q_gens.iter().cloned().zip(sigma).collect();
        graph_map(&pairs, q.order())
            .ok_or_else(|| invalid(&format!("{path}.phi"), "images do not define a homomorphism on Q"))?
    };
    // Inn(T) ≤ φ(Q): each inner automorphism by a generator is some φ(q).
    for (i, g) in t.generators().iter().enumerate() {
        let realized = phi.values().any(|s| t.generators().iter().all(|x| x.conjugate_by(s) == x.conjugate_by(g)));
        if !realized {
            return Err(invalid(
                &format!("{path}.phi"),
                format!("inner automorphism by T generator {} is not in φ(Q)", i + 1),
            ));
        }
    }

    // Transversal: l_i is the first element x of P with 1^{x⁻¹} = i.
    let pe = p.enumeration()?;
    let mut transversal: Vec<Option<Permutation>> = vec![None; k];
    for x in pe.elements() {
        let c = action[&x].inverse().apply(0);
        if transversal[c].is_none() {
            transversal[c] = Some(x);
        }
    }
    let transversal: Vec<Permutation> = transversal.into_iter().map(|x| x.expect("transitive")).collect();

    let mut tw = TwistedWreathGroup {
        spec: spec.clone(),
        k,
        t: t.clone(),
        p: p.clone(),
        q,
        action,
        phi,
        transversal,
        t_enum,
        group: PermGroup::trivial(1),
        socle: PermGroup::trivial(1),
        complement: PermGroup::trivial(1),
    };
    let socle_gens: Vec<Permutation> =
        (0..k).flat_map(|i| t.generators().iter().map(move |s| (i, s))).map(|(i, s)| tw.coordinate(i, s)).collect();
    let complement_gens: Vec<Permutation> = p_gens.iter().map(|x| tw.p_perm(x)).collect();
    let n = tw.degree();
    tw.socle = PermGroup::new(n, socle_gens.clone())?;
    tw.complement = PermGroup::new(n, complement_gens.clone())?;
    tw.group = PermGroup::new(n, socle_gens.into_iter().chain(complement_gens).collect())?;
    if tw.group.order() != tw.socle.order() * p.order() || tw.socle.order() != n_points {
        return Err(invalid(path, "construction is inconsistent: |G| ≠ |T|^k·|P|"));
    }
    Ok(tw)
}

impl TwistedWreathGroup {
    pub fn degree(&self) -> usize {
        self.t_enum.order().pow(self.k as u32)
    }

    fn decode(&self, mut point: usize) -> Vec<usize> {
        let m = self.t_enum.order();
        (0..self.k)
            .map(|_| {
                let c = point % m;
                point /= m;
                c
            })
            .collect()
    }

    fn encode(&self, coords: &[usize]) -> usize {
        let m = self.t_enum.order();
        coords.iter().rev().fold(0, |acc, &c| acc * m + c)
    }

    /// `f_{t, l_i}` (block `i` 0-based) as a permutation of the points.
    pub fn coordinate(&self, i: usize, t: &Permutation) -> Permutation {
        let e = &self.t_enum;
        let right = e.right_table(e.index_of(t).expect("element of T"));
        let images = (0..self.degree())
            .map(|x| {
                let mut c = self.decode(x);
                c[i] = right[c[i]] as usize;
                self.encode(&c) as u32
            })
            .collect();
        Permutation::from_images(images).expect("right multiplication is bijective")
    }

    /// The point action of `p ∈ P`.
    pub fn p_perm(&self, p: &Permutation) -> Permutation {
        let e = &self.t_enum;
        // For each target coordinate j: source block i and the table of φ(q).
        let maps: Vec<(usize, Vec<usize>)> = (0..self.k)
            .map(|j| {
                let x = p.mul(&self.transversal[j]);
                let i = self.action[&x].inverse().apply(0);
                let q = self.transversal[i].inverse().mul(&x);
                let s = &self.phi[&q];
                let table = (0..e.order())
                    .map(|c| e.index_of(&e.element(c).conjugate_by(s)).expect("φ(q) normalizes T"))
                    .collect();
                (i, table)
            })
            .collect();
        let images = (0..self.degree())
            .map(|x| {
                let c = self.decode(x);
                let d: Vec<usize> = maps.iter().map(|(i, table)| table[c[*i]]).collect();
                self.encode(&d) as u32
            })
            .collect();
        Permutation::from_images(images).expect("P acts by automorphisms")
    }

    pub fn built(&self) -> BuiltGroup {
        BuiltGroup {
            group: self.group.clone(),
            stabilizer: self.complement.clone(),
            stabilizer_spec: StabilizerSpec::Point { point: 1 },
            socle: Some(self.socle.clone()),
            default_target: Target::Socle,
        }
    }
}

/// Orbit of `t` under `φ(Q)` in `T`'s coordinates: element index ↦ first
/// `q` (canonical order of `Q`) reaching it.
fn phi_orbit(tw: &TwistedWreathGroup, q_elems: &[Permutation], t: &Permutation) -> HashMap<usize, Permutation> {
    let mut out = HashMap::new();
    for q in q_elems {
        let o = tw.t_enum.index_of(&t.conjugate_by(&tw.phi[q])).expect("φ(q) normalizes T");
        out.entry(o).or_insert_with(|| q.clone());
    }
    out
}

/// The `5k` certificate for socle coverage, with a factorization of every
/// element of every `T_i`.
pub fn twisted_certificate(tw: &TwistedWreathGroup) -> Result<(CoveringCertificate, TwistedWreathTrace)> {
    let w = find_near_cover_pair(&tw.t)?.ok_or_else(|| Error::Search("T has no near-covering class pair".into()))?;
    let ts = [w.alpha.clone(), w.beta.clone(), w.gamma.clone()];
    let e = &tw.t_enum;
    let q_elems: Vec<Permutation> = tw.q.enumeration()?.elements().collect();
    let id = tw.group.identity();

    // The orbits O_j and sets X_j live in T's coordinates; they are the same
    // for every block because Q_i acts on T_i as φ(Q).
    let orbits: Vec<HashMap<usize, Permutation>> = ts.iter().map(|t| phi_orbit(tw, &q_elems, t)).collect();
    let records: [OrbitRecord; 3] = std::array::from_fn(|j| {
        let set = ElemSet::from_indices(e, orbits[j].keys().copied());
        let normal = tw.t.generators().iter().all(|g| {
            let gi = e.index_of(g).unwrap();
            set.conjugate(e, gi).map(|c| c == set).unwrap_or(false)
        });
        OrbitRecord { t: ts[j].clone(), orbit_size: orbits[j].len(), normal }
    });
    // X_j as (element index, q) lists.
    let x_sets: Vec<Vec<(usize, Permutation)>> = (0..3)
        .map(|j| {
            let tinv = ts[j].inverse();
            let mut v: Vec<(usize, Permutation)> = orbits[j]
                .iter()
                .map(|(&o, q)| {
                    let x = if j < 2 { tinv.mul(&e.element(o)) } else { e.element(o).mul(&tinv) };
                    (e.index_of(&x).unwrap(), q.clone())
                })
                .collect();
            v.sort_by_key(|(x, _)| *x);
            v
        })
        .collect();
    // First (x1, x2, x3) for each element of T.
    let mut choice: Vec<Option<[usize; 3]>> = vec![None; e.order()];
    let mut remaining = e.order();
    'outer: for (a, (xa, _)) in x_sets[0].iter().enumerate() {
        for (b, (xb, _)) in x_sets[1].iter().enumerate() {
            let ab = e.mul(*xa, *xb);
            for (c, (xc, _)) in x_sets[2].iter().enumerate() {
                let abc = e.mul(ab, *xc);
                if choice[abc].is_none() {
                    choice[abc] = Some([a, b, c]);
                    remaining -= 1;
                    if remaining == 0 {
                        break 'outer;
                    }
                }
            }
        }
    }
    let covers = remaining == 0;
    if !covers {
        return Err(Error::Search("X_1 X_2 X_3 does not cover T".into()));
    }

    let mut conjugators = Vec::with_capacity(5 * tw.k);
    let mut witnesses = Vec::new();
    let mut p_cache: HashMap<Permutation, Permutation> = HashMap::new();
    for i in 0..tw.k {
        let t_g: Vec<Permutation> = ts.iter().map(|t| tw.coordinate(i, t)).collect();
        conjugators.extend([t_g[0].clone(), id.clone(), t_g[1].clone(), id.clone(), t_g[2].inverse()]);
        let li = &tw.transversal[i];
        let mut p_of = |q: &Permutation| -> Permutation {
            p_cache.entry(li.mul(q).mul(&li.inverse())).or_insert_with_key(|p| tw.p_perm(p)).clone()
        };
        for (x, pick) in choice.iter().enumerate() {
            if i > 0 && x == 0 {
                continue;
            }
            let [a, b, c] = pick.expect("covered");
            let p1 = p_of(&x_sets[0][a].1);
            let p2 = p_of(&x_sets[1][b].1);
            let p3 = p_of(&x_sets[2][c].1);
            let factors = vec![
                t_g[0].inverse().mul(&p1.inverse()).mul(&t_g[0]),
                p1,
                t_g[1].inverse().mul(&p2.inverse()).mul(&t_g[1]),
                p2.mul(&p3.inverse()),
                t_g[2].mul(&p3).mul(&t_g[2].inverse()),
            ];
            let mut full = vec![id.clone(); 5 * tw.k];
            for (s, f) in factors.into_iter().enumerate() {
                full[5 * i + s] = f;
            }
            witnesses.push(Witness { element: tw.coordinate(i, &e.element(x)), factors: full });
        }
    }
    let trace = TwistedWreathTrace {
        transversal: tw.transversal.clone(),
        orbits: (0..tw.k).map(|_| records.clone()).collect(),
        x_product_covers: vec![covers; tw.k],
        witnesses: witnesses.len(),
    };
    let mut cert = CoveringCertificate {
        recipe: GroupSpec::TwistedWreath(tw.spec.clone()),
        stabilizer: StabilizerSpec::Point { point: 1 },
        target: Target::Socle,
        conjugators,
        witnesses: None,
        provenance: format!("twisted_wreath(k={})", tw.k),
        class_witness: Some(ClassWitnessRecord { alpha: w.alpha, beta: w.beta, gamma: w.gamma }),
    };
    cert.set_witnesses(witnesses);
    Ok((cert, trace))
}
