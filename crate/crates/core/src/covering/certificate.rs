use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Target;
use crate::constructions::GroupSpec;
use crate::error::{Error, Result};
use crate::permcore::{PermGroup, Permutation};

/// How the certificate names `H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StabilizerSpec {
    /// Stabilizer of a 1-based point.
    Point { point: usize },
    Generators { generators: Vec<Permutation> },
}

impl StabilizerSpec {
    pub fn resolve(&self, group: &PermGroup) -> Result<PermGroup> {
        match self {
            StabilizerSpec::Point { point } => {
                if *point == 0 || *point > group.degree() {
                    return Err(Error::PointOutOfRange { point: *point, degree: group.degree() });
                }
                group.point_stabilizer(point - 1)
            }
            StabilizerSpec::Generators { generators } => {
                let h = PermGroup::new(group.degree(), generators.clone())?;
                if !h.is_subgroup_of(group) {
                    return Err(Error::NotSubgroup);
                }
                Ok(h)
            }
        }
    }
}

/// Lemma-3 style class witness `(α, β, γ)` in the simple factor's own
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassWitnessRecord {
    pub alpha: Permutation,
    pub beta: Permutation,
    pub gamma: Permutation,
}

/// A factorization `element = factors[0] * ... * factors[m-1]` with
/// `factors[i] ∈ H^{g_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub element: Permutation,
    pub factors: Vec<Permutation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringCertificate {
    pub recipe: GroupSpec,
    pub stabilizer: StabilizerSpec,
    pub target: Target,
    pub conjugators: Vec<Permutation>,
    /// Keyed by the element's 1-based image array written as compact JSON.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<BTreeMap<String, Vec<Permutation>>>,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_witness: Option<ClassWitnessRecord>,
}

pub(crate) fn witness_key(x: &Permutation) -> String {
    serde_json::to_string(&x.to_one_based()).expect("integer arrays serialize")
}

impl CoveringCertificate {
    pub fn len(&self) -> usize {
        self.conjugators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjugators.is_empty()
    }

    pub fn set_witnesses(&mut self, witnesses: Vec<Witness>) {
        self.witnesses = Some(witnesses.into_iter().map(|w| (witness_key(&w.element), w.factors)).collect());
    }

    /// Decodes the witness map; malformed keys are errors.
    pub fn witness_list(&self) -> Result<Vec<Witness>> {
        let Some(map) = &self.witnesses else {
            return Ok(Vec::new());
        };
        map.iter()
            .map(|(k, factors)| {
                let images: Vec<u32> = serde_json::from_str(k)
                    .map_err(|e| Error::BadCertificate(format!("witness key {k:?}: {e}")))?;
                Ok(Witness { element: Permutation::from_one_based(&images)?, factors: factors.clone() })
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::BadCertificate(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::parse_cycles;

    #[test]
    fn stabilizer_spec_forms() {
        let p: StabilizerSpec = serde_json::from_str(r#"{"point": 3}"#).unwrap();
        assert_eq!(p, StabilizerSpec::Point { point: 3 });
        let g: StabilizerSpec = serde_json::from_str(r#"{"generators": [[2,1,3]]}"#).unwrap();
        assert_eq!(g, StabilizerSpec::Generators { generators: vec![parse_cycles("(1 2)", 3).unwrap()] });
    }

    #[test]
    fn witness_round_trip() {
        let x = parse_cycles("(1 2 3)", 3).unwrap();
        let mut cert = CoveringCertificate {
            recipe: GroupSpec::Named { name: "S3".into() },
            stabilizer: StabilizerSpec::Point { point: 1 },
            target: Target::Group,
            conjugators: vec![Permutation::identity(3)],
            witnesses: None,
            provenance: "test".into(),
            class_witness: None,
        };
        cert.set_witnesses(vec![Witness { element: x.clone(), factors: vec![x.clone()] }]);
        let back = CoveringCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.witness_list().unwrap()[0].element, x);
        assert!(cert.witnesses.unwrap().contains_key("[2,3,1]"));
    }
}
