use super::{invalid, BuiltGroup, GroupSpec};
use crate::covering::{verify_certificate, CoveringCertificate, StabilizerSpec, Target, VerifyMode};
use crate::error::{Error, Result};
use crate::permcore::{PermGroup, Permutation};

/// `B = K^ℓ` on `ℓ` disjoint copies of `K`'s domain and `B_α = (K_γ)^ℓ`.
#[derive(Clone, Debug)]
pub struct ProductActionGroup {
    pub k: PermGroup,
    pub k_stab: PermGroup,
    pub base_point: usize,
    pub l: usize,
    pub b: PermGroup,
    pub b_alpha: PermGroup,
}

/// `base_point` is 1-based.
pub fn build_product_action(k: &PermGroup, base_point: usize, l: usize, path: &str) -> Result<ProductActionGroup> {
    if base_point == 0 || base_point > k.degree() {
        return Err(invalid(&format!("{path}.base_point"), format!("point {base_point} outside 1..={}", k.degree())));
    }
    if l == 0 {
        return Err(invalid(&format!("{path}.l"), "l must be at least 1"));
    }
    if !k.is_transitive() {
        return Err(invalid(&format!("{path}.group"), "K must be transitive"));
    }
    let k_stab = k.point_stabilizer(base_point - 1)?;
    if k_stab.order() == 1 {
        return Err(invalid(&format!("{path}.group"), "K is regular, so the point stabilizer is trivial"));
    }
    let ks: Vec<&PermGroup> = std::iter::repeat_n(k, l).collect();
    let ss: Vec<&PermGroup> = std::iter::repeat_n(&k_stab, l).collect();
    Ok(ProductActionGroup {
        k: k.clone(),
        k_stab: k_stab.clone(),
        base_point,
        l,
        b: PermGroup::direct_product(&ks),
        b_alpha: PermGroup::direct_product(&ss),
    })
}

impl ProductActionGroup {
    pub fn built(&self) -> BuiltGroup {
        BuiltGroup {
            group: self.b.clone(),
            stabilizer: self.b_alpha.clone(),
            stabilizer_spec: StabilizerSpec::Generators { generators: self.b_alpha.generators().to_vec() },
            socle: Some(self.b.clone()),
            default_target: Target::Group,
        }
    }
}

fn repeat(g: &Permutation, l: usize) -> Permutation {
    (1..l).fold(g.clone(), |acc, _| acc.direct_sum(g))
}

/// Lifts a verified full-group certificate for `(K, K_γ)` to `(K^ℓ, (K_γ)^ℓ)`
/// by repeating every conjugator in each coordinate.
pub fn lift_certificate(base: &CoveringCertificate, l: usize) -> Result<CoveringCertificate> {
    if base.target != Target::Group {
        return Err(Error::BadCertificate("only full-group certificates lift".into()));
    }
    let StabilizerSpec::Point { point } = base.stabilizer else {
        return Err(Error::BadCertificate("the base certificate must use a point stabilizer".into()));
    };
    let report = verify_certificate(base, VerifyMode::Exhaustive)?;
    if !report.passed {
        return Err(Error::BadCertificate(format!(
            "base certificate does not verify: {}",
            report.failure.unwrap_or_default()
        )));
    }
    if l == 1 {
        return Ok(base.clone());
    }
    let recipe = GroupSpec::ProductAction { group: Box::new(base.recipe.clone()), base_point: point, l };
    let built = super::build(&recipe)?;
    Ok(CoveringCertificate {
        recipe,
        stabilizer: built.stabilizer_spec,
        target: Target::Group,
        conjugators: base.conjugators.iter().map(|g| repeat(g, l)).collect(),
        witnesses: None,
        provenance: format!("lift(l={l}) of {}", base.provenance),
        class_witness: None,
    })
}
