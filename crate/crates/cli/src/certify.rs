//! Certificates for every recipe family: the explicit constructions where
//! one exists, otherwise the conjugators found by the exact search.

use anyhow::{bail, Result};

use stabcover::constructions::{
    affine_certificate, build, build_affine, build_twisted_wreath, diagonal_certificate, lift_certificate,
    twisted_certificate, DiagonalGroup, GroupSpec,
};
use stabcover::covering::{gamma_exact, CoveringCertificate, CoveringProblem, SearchConfig, StabilizerSpec, Target};

pub fn certify(spec: &GroupSpec, config: &SearchConfig) -> Result<CoveringCertificate> {
    Ok(match spec {
        GroupSpec::Affine { p, l, h_gens } => affine_certificate(&build_affine(*p, *l, h_gens, "affine")?)?.0,
        GroupSpec::Diagonal { t, k } => diagonal_certificate(&DiagonalGroup::named(t, *k)?)?.0,
        GroupSpec::ProductAction { group, base_point, l } => {
            let base = certify_point(group, *base_point, config)?;
            lift_certificate(&base, *l)?
        }
        GroupSpec::TwistedWreath(t) => twisted_certificate(&build_twisted_wreath(t, "twisted_wreath")?)?.0,
        GroupSpec::Raw { .. } | GroupSpec::Named { .. } => certify_point(spec, 1, config)?,
    })
}

/// A full-group certificate for the stabilizer of `point` (1-based).
pub fn certify_point(spec: &GroupSpec, point: usize, config: &SearchConfig) -> Result<CoveringCertificate> {
    if point == 1 {
        if let GroupSpec::Affine { .. } = spec {
            return certify(spec, config);
        }
    }
    let built = build(spec)?;
    let stabilizer = StabilizerSpec::Point { point };
    let h = stabilizer.resolve(&built.group)?;
    let problem = CoveringProblem::new(built.group, h)?;
    let result = gamma_exact(&problem, config)?;
    if result.conjugators.is_empty() {
        bail!("search found no covering ({:?})", result.status);
    }
    let provenance = if result.is_exact() { "search (minimal)" } else { "search (upper bound)" };
    Ok(CoveringCertificate {
        recipe: spec.clone(),
        stabilizer,
        target: Target::Group,
        conjugators: result.conjugators,
        witnesses: None,
        provenance: provenance.into(),
        class_witness: None,
    })
}

/// Length the construction guarantees, if the family has one.
pub fn family_bound(spec: &GroupSpec) -> Option<usize> {
    match spec {
        GroupSpec::Affine { p, l, .. } => Some(1 + l * ceil_log2(*p)),
        GroupSpec::Diagonal { k, .. } => Some(3 * k - 2),
        GroupSpec::TwistedWreath(t) => Some(5 * t.k),
        _ => None,
    }
}

pub fn ceil_log2(p: u64) -> usize {
    (64 - (p - 1).leading_zeros()) as usize
}
