//! Group recipes and the builders behind the explicit certificates:
//! affine, diagonal, product action and twisted wreath, plus the small
//! standalone lemma checks.

mod affine;
mod diagonal;
mod lemmas;
mod named;
mod product_action;
mod twisted;

use std::path::Path;

use serde::{Deserialize, Serialize};

pub use affine::{affine_certificate, build_affine, AffineCertificateTrace, AffineGroup};
pub use diagonal::{build_diagonal, diagonal_certificate, DiagonalGroup};
pub use lemmas::{fp_lemma_check, index_lemma_check, m0_lemma_check, FpReport, IndexLemmaReport, M0Report, MaximalRecord};
pub use named::named_group;
pub use product_action::{build_product_action, lift_certificate, ProductActionGroup};
pub use twisted::{build_twisted_wreath, twisted_certificate, TwistedWreathGroup, TwistedWreathTrace};

use crate::covering::{StabilizerSpec, Target};
use crate::error::{Error, Result};
use crate::permcore::{parse_cycles, read_gens_file, PermGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionImage {
    /// An element of `P`, in cycle notation on `P`'s own domain.
    pub element: String,
    /// Its action on the `k` blocks.
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiImage {
    /// 1-based index into `q_gens`.
    pub q_gen: usize,
    /// A permutation of `T`'s domain normalizing `T`; acts by conjugation.
    pub automorphism: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedSpec {
    pub p: Box<GroupSpec>,
    pub k: usize,
    /// Images of a generating set of `P` under its action on `k` points.
    pub p_action: Vec<ActionImage>,
    /// Generators of `Q`, the stabilizer of block 1.
    pub q_gens: Vec<String>,
    pub phi: Vec<PhiImage>,
    pub t: Box<GroupSpec>,
}

/// A construction recipe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GroupSpec {
    Raw {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degree: Option<usize>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        generators: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gens_file: Option<String>,
    },
    Named {
        name: String,
    },
    /// `V ⋊ H` on `p^l` points, `H` given by row-major `l×l` matrices.
    Affine {
        p: u64,
        l: usize,
        h_gens: Vec<Vec<i64>>,
    },
    Diagonal {
        t: String,
        k: usize,
    },
    ProductAction {
        group: Box<GroupSpec>,
        base_point: usize,
        l: usize,
    },
    TwistedWreath(TwistedSpec),
}

impl GroupSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GroupSpec::Raw { .. } => "raw",
            GroupSpec::Named { .. } => "named",
            GroupSpec::Affine { .. } => "affine",
            GroupSpec::Diagonal { .. } => "diagonal",
            GroupSpec::ProductAction { .. } => "product_action",
            GroupSpec::TwistedWreath(_) => "twisted_wreath",
        }
    }

    /// Replaces every `gens_file` by inline generators, resolving relative
    /// paths against `base`.
    pub fn inline_files(&self, base: &Path) -> Result<GroupSpec> {
        Ok(match self {
            GroupSpec::Raw { gens_file: Some(file), .. } => {
                let path = base.join(file);
                let (degree, gens) = read_gens_file(&path)?;
                GroupSpec::Raw {
                    degree: Some(degree),
                    generators: gens.iter().map(|g| g.to_string()).collect(),
                    gens_file: None,
                }
            }
            GroupSpec::ProductAction { group, base_point, l } => GroupSpec::ProductAction {
                group: Box::new(group.inline_files(base)?),
                base_point: *base_point,
                l: *l,
            },
            GroupSpec::TwistedWreath(t) => GroupSpec::TwistedWreath(TwistedSpec {
                p: Box::new(t.p.inline_files(base)?),
                t: Box::new(t.t.inline_files(base)?),
                ..t.clone()
            }),
            other => other.clone(),
        })
    }
}

/// A built group with the subgroup and target its certificates refer to.
#[derive(Clone, Debug)]
pub struct BuiltGroup {
    pub group: PermGroup,
    pub stabilizer: PermGroup,
    pub stabilizer_spec: StabilizerSpec,
    /// Known by construction; `None` for raw input.
    pub socle: Option<PermGroup>,
    pub default_target: Target,
}

pub(crate) fn invalid(path: &str, reason: impl Into<String>) -> Error {
    Error::recipe(path, reason)
}

/// Parses `text` as a permutation on `degree` points, reporting `path`.
pub(crate) fn perm_at(text: &str, degree: usize, path: &str) -> Result<crate::permcore::Permutation> {
    parse_cycles(text, degree).map_err(|e| invalid(path, e.to_string()))
}

/// Builds just the group a spec describes.
pub(crate) fn group_at(spec: &GroupSpec, path: &str) -> Result<PermGroup> {
    Ok(build_at(spec, path)?.group)
}

pub fn build(spec: &GroupSpec) -> Result<BuiltGroup> {
    build_at(spec, spec.family())
}

fn point_built(group: PermGroup) -> Result<BuiltGroup> {
    let stabilizer = group.point_stabilizer(0)?;
    Ok(BuiltGroup {
        group,
        stabilizer,
        stabilizer_spec: StabilizerSpec::Point { point: 1 },
        socle: None,
        default_target: Target::Group,
    })
}

pub(crate) fn build_at(spec: &GroupSpec, path: &str) -> Result<BuiltGroup> {
    match spec {
        GroupSpec::Raw { degree, generators, gens_file } => {
            let group = match (gens_file, degree) {
                (Some(file), _) => {
                    if !generators.is_empty() {
                        return Err(invalid(path, "give either gens_file or generators, not both"));
                    }
                    let (degree, gens) =
                        read_gens_file(file).map_err(|e| invalid(&format!("{path}.gens_file"), e.to_string()))?;
                    PermGroup::new(degree, gens)?
                }
                (None, Some(degree)) => {
                    if *degree == 0 {
                        return Err(invalid(&format!("{path}.degree"), "degree must be positive"));
                    }
                    let gens = generators
                        .iter()
                        .enumerate()
                        .map(|(i, g)| perm_at(g, *degree, &format!("{path}.generators[{i}]")))
                        .collect::<Result<Vec<_>>>()?;
                    if gens.is_empty() {
                        PermGroup::trivial(*degree)
                    } else {
                        PermGroup::new(*degree, gens)?
                    }
                }
                (None, None) => return Err(invalid(path, "missing degree (or gens_file)")),
            };
            point_built(group)
        }
        GroupSpec::Named { name } => {
            let group = named_group(name).map_err(|e| invalid(&format!("{path}.name"), e.to_string()))?;
            point_built(group)
        }
        GroupSpec::Affine { p, l, h_gens } => {
            let a = build_affine(*p, *l, h_gens, path)?;
            Ok(a.built())
        }
        GroupSpec::Diagonal { t, k } => {
            if *k == 0 {
                return Err(invalid(&format!("{path}.k"), "k must be at least 1"));
            }
            let d = DiagonalGroup::named(t, *k).map_err(|e| invalid(&format!("{path}.t"), e.to_string()))?;
            Ok(d.built())
        }
        GroupSpec::ProductAction { group, base_point, l } => {
            let k = group_at(group, &format!("{path}.group"))?;
            Ok(build_product_action(&k, *base_point, *l, path)?.built())
        }
        GroupSpec::TwistedWreath(t) => Ok(build_twisted_wreath(t, path)?.built()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_inline_and_named() {
        let spec: GroupSpec =
            serde_json::from_str(r#"{"type":"raw","degree":3,"generators":["(1 2 3)","(1 2)"]}"#).unwrap();
        let b = build(&spec).unwrap();
        assert_eq!(b.group.order(), 6);
        assert_eq!(b.stabilizer.order(), 2);
        let named: GroupSpec = serde_json::from_str(r#"{"type":"named","name":"A5"}"#).unwrap();
        assert_eq!(build(&named).unwrap().group.order(), 60);
    }

    #[test]
    fn errors_carry_field_paths() {
        let spec: GroupSpec =
            serde_json::from_str(r#"{"type":"raw","degree":3,"generators":["(1 2 3)","(1 4)"]}"#).unwrap();
        match build(&spec).unwrap_err() {
            Error::InvalidRecipe { path, .. } => assert_eq!(path, "raw.generators[1]"),
            e => panic!("{e:?}"),
        }
        let spec: GroupSpec = serde_json::from_str(
            r#"{"type":"product_action","group":{"type":"named","name":"A7x"},"base_point":1,"l":2}"#,
        )
        .unwrap();
        match build(&spec).unwrap_err() {
            Error::InvalidRecipe { path, .. } => assert_eq!(path, "product_action.group.name"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn spec_round_trips() {
        let text = r#"{"type":"affine","p":5,"l":1,"h_gens":[[2]]}"#;
        let spec: GroupSpec = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&spec).unwrap(), text);
    }
}
