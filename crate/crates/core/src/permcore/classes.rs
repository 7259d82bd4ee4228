use crate::elemset::ElemSet;
use crate::error::{Error, Result};
use crate::permcore::{Enumeration, Permutation};

/// A conjugacy class `x^G` of an enumerated group.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    pub representative: Permutation,
    pub rep_index: usize,
    pub members: ElemSet,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.count()
    }
}

/// Conjugation tables `i -> index(s^-1 e_i s)`, one per generator.
fn conjugation_tables(e: &Enumeration) -> Vec<Vec<u32>> {
    (0..e.generators().len())
        .map(|s| {
            let g = e.index_of(&e.generators()[s]).unwrap();
            let left = e.left_table(e.inverse(g));
            let right = e.generator_table(s);
            (0..e.order()).map(|i| right[left[i] as usize]).collect()
        })
        .collect()
}

fn class_from(e: &Enumeration, tables: &[Vec<u32>], x: usize) -> ElemSet {
    let mut members = ElemSet::empty(e);
    members.insert(x);
    let mut stack = vec![x];
    while let Some(y) = stack.pop() {
        for t in tables {
            let z = t[y] as usize;
            if !members.contains(z) {
                members.insert(z);
                stack.push(z);
            }
        }
    }
    members
}

pub fn conjugacy_class_of(e: &Enumeration, x: &Permutation) -> Result<ConjugacyClass> {
    let idx = e.index_of(x).ok_or(Error::NotMember)?;
    let tables = conjugation_tables(e);
    Ok(ConjugacyClass { representative: x.clone(), rep_index: idx, members: class_from(e, &tables, idx) })
}

/// All classes, ordered by the canonical index of their first element.
pub fn all_classes(e: &Enumeration) -> Vec<ConjugacyClass> {
    let tables = conjugation_tables(e);
    let mut assigned = vec![false; e.order()];
    let mut out = Vec::new();
    for x in 0..e.order() {
        if assigned[x] {
            continue;
        }
        let members = class_from(e, &tables, x);
        for i in members.iter() {
            assigned[i] = true;
        }
        out.push(ConjugacyClass { representative: e.element(x), rep_index: x, members });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permcore::{parse_cycles, PermGroup};

    fn a5() -> PermGroup {
        PermGroup::new(5, vec![parse_cycles("(1 2 3 4 5)", 5).unwrap(), parse_cycles("(1 2 3)", 5).unwrap()])
            .unwrap()
    }

    #[test]
    fn a5_classes() {
        let g = a5();
        let e = g.enumeration().unwrap();
        let c = conjugacy_class_of(&e, &parse_cycles("(1 2)(3 4)", 5).unwrap()).unwrap();
        assert_eq!(c.size(), 15);
        assert_eq!(conjugacy_class_of(&e, &Permutation::identity(5)).unwrap().size(), 1);
        let mut sizes: Vec<usize> = all_classes(&e).iter().map(|c| c.size()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 60);
        sizes.sort();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        assert_eq!(
            conjugacy_class_of(&e, &parse_cycles("(1 2)", 5).unwrap()).unwrap_err(),
            Error::NotMember
        );
    }
}
