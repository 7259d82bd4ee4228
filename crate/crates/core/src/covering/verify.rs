use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::certificate::{CoveringCertificate, Witness};
use super::search::product_of_conjugates;
use super::{CoveringProblem, Target};
use crate::constructions::build;
use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::permcore::{PermGroup, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Full set product over the enumerated group.
    Exhaustive,
    /// Per-element factorizations only.
    Witnessed,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub mode: VerifyMode,
    pub target: Target,
    pub length: usize,
    pub group_order: u128,
    pub target_order: u128,
    /// Size of the computed product set (exhaustive mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product_size: Option<u128>,
    pub covers_target: bool,
    /// Whether the product is the whole group, when that was decided.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covers_group: Option<bool>,
    pub witnesses_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl VerifyReport {
    fn new(problem: &CoveringProblem, mode: VerifyMode, length: usize) -> Self {
        VerifyReport {
            passed: false,
            mode,
            target: problem.target,
            length,
            group_order: problem.group.order(),
            target_order: problem.target_group().order(),
            product_size: None,
            covers_target: false,
            covers_group: None,
            witnesses_checked: 0,
            failure: None,
        }
    }

    fn fail(mut self, reason: impl Into<String>) -> Self {
        self.passed = false;
        self.failure = Some(reason.into());
        self
    }
}

/// Rebuilds the certificate's group from its recipe and checks it.
pub fn verify_certificate(cert: &CoveringCertificate, mode: VerifyMode) -> Result<VerifyReport> {
    let built = build(&cert.recipe)?;
    let sub = cert.stabilizer.resolve(&built.group)?;
    let problem = match cert.target {
        Target::Group => CoveringProblem::new(built.group, sub)?,
        Target::Socle => {
            let socle = built
                .socle
                .ok_or_else(|| Error::BadCertificate("socle target on a recipe without a known socle".into()))?;
            CoveringProblem::with_socle(built.group, sub, socle)?
        }
    };
    let witnesses = cert.witness_list()?;
    verify_against(&problem, &cert.conjugators, &witnesses, mode)
}

pub fn verify_against(
    problem: &CoveringProblem,
    conjugators: &[Permutation],
    witnesses: &[Witness],
    mode: VerifyMode,
) -> Result<VerifyReport> {
    let report = VerifyReport::new(problem, mode, conjugators.len());
    if conjugators.is_empty() {
        return Ok(report.fail("no conjugators"));
    }
    for (i, g) in conjugators.iter().enumerate() {
        if g.degree() != problem.group.degree() || !problem.group.contains(g) {
            return Ok(report.fail(format!("conjugator {} is not an element of the group", i + 1)));
        }
    }
    match mode {
        VerifyMode::Exhaustive => exhaustive(problem, conjugators, report),
        VerifyMode::Witnessed => witnessed(problem, conjugators, witnesses, report),
    }
}

fn exhaustive(problem: &CoveringProblem, conjugators: &[Permutation], mut report: VerifyReport) -> Result<VerifyReport> {
    let e = problem.group.enumeration()?;
    let product = product_of_conjugates(&e, problem.sub.generators(), conjugators)?;
    report.product_size = Some(product.count() as u128);
    report.covers_group = Some(product.is_full());
    report.covers_target = match problem.target {
        Target::Group => product.is_full(),
        Target::Socle => product.contains_set(&ElemSet::of_subgroup(&e, problem.target_group())?)?,
    };
    report.passed = report.covers_target;
    if !report.passed {
        let missing = match problem.target {
            Target::Group => product.first_missing(),
            Target::Socle => {
                let t = ElemSet::of_subgroup(&e, problem.target_group())?;
                let first = t.iter().find(|&i| !product.contains(i));
                first
            }
        };
        report.failure = missing.map(|i| format!("product misses {}", e.element(i)));
    }
    Ok(report)
}

/// Checks one factorization; the error names the offending factor.
fn check_witness(problem: &CoveringProblem, conjugators: &[Permutation], w: &Witness) -> std::result::Result<(), String> {
    let degree = problem.group.degree();
    if w.element.degree() != degree {
        return Err(format!("witness element {} has the wrong degree", w.element));
    }
    if !problem.target_group().contains(&w.element) {
        return Err(format!("witness element {} is not in the target", w.element));
    }
    if w.factors.len() != conjugators.len() {
        return Err(format!(
            "witness for {} has {} factors, expected {}",
            w.element,
            w.factors.len(),
            conjugators.len()
        ));
    }
    let mut acc = Permutation::identity(degree);
    for (i, (f, g)) in w.factors.iter().zip(conjugators).enumerate() {
        if f.degree() != degree {
            return Err(format!("witness for {}: factor {} has the wrong degree", w.element, i + 1));
        }
        // f ∈ H^g  ⟺  g f g⁻¹ ∈ H
        if !problem.sub.contains(&g.mul(f).mul(&g.inverse())) {
            return Err(format!("witness for {}: factor {} is not in its conjugate", w.element, i + 1));
        }
        acc = acc.mul(f);
    }
    if acc != w.element {
        return Err(format!("witness for {}: factors multiply to {}", w.element, acc));
    }
    Ok(())
}

fn witnessed(
    problem: &CoveringProblem,
    conjugators: &[Permutation],
    witnesses: &[Witness],
    mut report: VerifyReport,
) -> Result<VerifyReport> {
    if witnesses.is_empty() {
        return Ok(report.fail("certificate carries no witnesses"));
    }
    for w in witnesses {
        if let Err(reason) = check_witness(problem, conjugators, w) {
            return Ok(report.fail(reason));
        }
        report.witnesses_checked += 1;
    }
    let target_order = problem.target_group().order();
    let distinct: HashSet<&Permutation> = witnesses.iter().map(|w| &w.element).collect();
    let exhausted = distinct.len() as u128 + u128::from(!distinct.iter().any(|x| x.is_identity())) >= target_order;
    if exhausted || blocks_generate(problem, witnesses) {
        report.passed = true;
        report.covers_target = true;
        if problem.target == Target::Group {
            report.covers_group = Some(true);
        }
        return Ok(report);
    }
    Ok(report.fail("witnessed elements neither exhaust the target nor generate it through commuting blocks"))
}

/// Witnesses whose non-identity factors sit in disjoint, ordered position
/// ranges combine freely: if the range blocks are subgroups that commute
/// pairwise, the product set contains their join.
fn blocks_generate(problem: &CoveringProblem, witnesses: &[Witness]) -> bool {
    let mut spans: Vec<((usize, usize), &Permutation)> = Vec::new();
    for w in witnesses {
        let moved: Vec<usize> = (0..w.factors.len()).filter(|&i| !w.factors[i].is_identity()).collect();
        if let (Some(&a), Some(&b)) = (moved.first(), moved.last()) {
            spans.push(((a, b), &w.element));
        }
    }
    spans.sort_by_key(|s| s.0);
    let mut blocks: Vec<((usize, usize), Vec<&Permutation>)> = Vec::new();
    for ((a, b), x) in spans {
        match blocks.last_mut() {
            Some((span, members)) if a <= span.1 => {
                span.1 = span.1.max(b);
                members.push(x);
            }
            _ => blocks.push(((a, b), vec![x])),
        }
    }
    if blocks.is_empty() {
        return false;
    }
    let degree = problem.group.degree();
    let mut all_gens = Vec::new();
    for (_, members) in &blocks {
        let distinct: HashSet<&Permutation> = members.iter().copied().filter(|x| !x.is_identity()).collect();
        let gens: Vec<Permutation> = distinct.iter().map(|&x| x.clone()).collect();
        let Ok(sub) = PermGroup::new(degree, gens.clone()) else {
            return false;
        };
        if sub.order() != distinct.len() as u128 + 1 {
            return false;
        }
        all_gens.push(gens);
    }
    for i in 0..all_gens.len() {
        for j in i + 1..all_gens.len() {
            for x in &all_gens[i] {
                for y in &all_gens[j] {
                    if x.mul(y) != y.mul(x) {
                        return false;
                    }
                }
            }
        }
    }
    let join = PermGroup::new(degree, all_gens.concat()).expect("degrees checked");
    join.order() == problem.target_group().order() && join.is_subgroup_of(problem.target_group())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::parse_cycles;

    fn s3_problem() -> CoveringProblem {
        let g = PermGroup::new(3, vec![parse_cycles("(1 2 3)", 3).unwrap(), parse_cycles("(1 2)", 3).unwrap()])
            .unwrap();
        let h = g.point_stabilizer(0).unwrap();
        CoveringProblem::new(g, h).unwrap()
    }

    #[test]
    fn identity_conjugators_fail() {
        let p = s3_problem();
        let id = Permutation::identity(3);
        let r = verify_against(&p, &[id.clone(), id.clone(), id], &[], VerifyMode::Exhaustive).unwrap();
        assert!(!r.passed);
        assert_eq!(r.product_size, Some(2));
    }

    #[test]
    fn s3_exhaustive_and_witnessed() {
        let p = s3_problem();
        let id = Permutation::identity(3);
        let c = vec![id.clone(), parse_cycles("(1 2)", 3).unwrap(), id.clone()];
        let r = verify_against(&p, &c, &[], VerifyMode::Exhaustive).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.product_size, Some(6));

        // H = <(2 3)>, H^(1 2) = <(1 3)>.
        let e = p.group.enumeration().unwrap();
        let conj: Vec<Vec<Permutation>> = c
            .iter()
            .map(|g| vec![id.clone(), parse_cycles("(2 3)", 3).unwrap().conjugate_by(g)])
            .collect();
        let mut witnesses = Vec::new();
        for x in e.elements() {
            'search: for a in &conj[0] {
                for b in &conj[1] {
                    for d in &conj[2] {
                        if a.mul(b).mul(d) == x {
                            witnesses.push(Witness { element: x.clone(), factors: vec![a.clone(), b.clone(), d.clone()] });
                            break 'search;
                        }
                    }
                }
            }
        }
        assert_eq!(witnesses.len(), 6);
        let r = verify_against(&p, &c, &witnesses, VerifyMode::Witnessed).unwrap();
        assert!(r.passed, "{r:?}");

        let mut bad = witnesses.clone();
        let w = bad.iter_mut().find(|w| !w.factors[1].is_identity()).unwrap();
        w.factors[1] = parse_cycles("(2 3)", 3).unwrap();
        let r = verify_against(&p, &c, &bad, VerifyMode::Witnessed).unwrap();
        assert!(!r.passed);
        assert!(r.failure.unwrap().contains("factor 2"));
    }
}
