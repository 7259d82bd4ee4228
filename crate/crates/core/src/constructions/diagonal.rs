use super::{BuiltGroup, GroupSpec};
use crate::classprod::{find_near_cover_pair, ClassProductWitness};
use crate::covering::{ClassWitnessRecord, CoveringCertificate, StabilizerSpec, Target};
use crate::error::{Error, Result};
use crate::permcore::{embed, PermGroup, Permutation};

/// `B = T^k` on `k` disjoint copies of `T`'s domain, with the diagonal `Δ`.
#[derive(Clone, Debug)]
pub struct DiagonalGroup {
    pub t: PermGroup,
    pub k: usize,
    pub b: PermGroup,
    pub delta: PermGroup,
    /// Name used in the recipe, when built from one.
    pub name: Option<String>,
}

fn diagonal_copy(g: &Permutation, k: usize) -> Permutation {
    (1..k).fold(g.clone(), |acc, _| acc.direct_sum(g))
}

pub fn build_diagonal(t: &PermGroup, k: usize) -> DiagonalGroup {
    let copies: Vec<&PermGroup> = std::iter::repeat_n(t, k).collect();
    let b = PermGroup::direct_product(&copies);
    let delta = PermGroup::new(b.degree(), t.generators().iter().map(|g| diagonal_copy(g, k)).collect())
        .expect("diagonal copies share the degree");
    DiagonalGroup { t: t.clone(), k, b, delta, name: None }
}

impl DiagonalGroup {
    pub fn named(name: &str, k: usize) -> Result<Self> {
        let t = super::named_group(name)?;
        Ok(DiagonalGroup { name: Some(name.to_string()), ..build_diagonal(&t, k) })
    }

    pub fn built(&self) -> BuiltGroup {
        BuiltGroup {
            group: self.b.clone(),
            stabilizer: self.delta.clone(),
            stabilizer_spec: StabilizerSpec::Generators { generators: self.delta.generators().to_vec() },
            socle: Some(self.b.clone()),
            default_target: Target::Group,
        }
    }

    /// `τ_i(t)`: `t` in coordinate `i` (1-based), identity elsewhere.
    pub fn tau(&self, i: usize, t: &Permutation) -> Permutation {
        embed(t, (i - 1) * self.t.degree(), self.b.degree())
    }
}

/// `[id, τ₂(a), τ₂(b), id, τ₃(a), τ₃(b), ..., id]` with `a = α⁻¹`, `b = γ`:
/// `3k − 2` conjugates of `Δ`.
pub fn diagonal_certificate(d: &DiagonalGroup) -> Result<(CoveringCertificate, ClassProductWitness)> {
    let name = d
        .name
        .clone()
        .ok_or_else(|| Error::Search("diagonal certificates need a named simple factor".into()))?;
    let w = find_near_cover_pair(&d.t)?
        .ok_or_else(|| Error::Search(format!("{name}: no class pair covers T∖{{1}}")))?;
    let a = w.alpha.inverse();
    let b = w.gamma.clone();
    let id = d.b.identity();
    let mut conjugators = Vec::with_capacity(3 * d.k - 2);
    for i in 2..=d.k {
        conjugators.push(id.clone());
        conjugators.push(d.tau(i, &a));
        conjugators.push(d.tau(i, &b));
    }
    conjugators.push(id);
    let cert = CoveringCertificate {
        recipe: GroupSpec::Diagonal { t: name.clone(), k: d.k },
        stabilizer: StabilizerSpec::Generators { generators: d.delta.generators().to_vec() },
        target: Target::Group,
        conjugators,
        witnesses: None,
        provenance: format!("diagonal(T={name},k={})", d.k),
        class_witness: Some(ClassWitnessRecord { alpha: w.alpha.clone(), beta: w.beta.clone(), gamma: w.gamma.clone() }),
    };
    Ok((cert, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{verify_certificate, VerifyMode};

    #[test]
    fn orders() {
        let d = DiagonalGroup::named("A5", 2).unwrap();
        assert_eq!((d.b.order(), d.delta.order()), (3600, 60));
        let d1 = DiagonalGroup::named("A5", 1).unwrap();
        assert_eq!((d1.b.order(), d1.delta.order()), (60, 60));
        assert_eq!(DiagonalGroup::named("A5", 3).unwrap().b.order(), 216000);
    }

    #[test]
    fn a5_squared_certificate() {
        let d = DiagonalGroup::named("A5", 2).unwrap();
        let (cert, _) = diagonal_certificate(&d).unwrap();
        assert_eq!(cert.len(), 4);
        let r = verify_certificate(&cert, VerifyMode::Exhaustive).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.product_size, Some(3600));
    }
}
