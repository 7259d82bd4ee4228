//! Permutations, enumeration, stabilizer chains, orbits and conjugacy
//! classes.

mod chain;
mod classes;
mod enumerate;
mod group;
mod parse;
mod perm;

pub use chain::StabChain;
pub use classes::{all_classes, conjugacy_class_of, ConjugacyClass};
pub use enumerate::{canonical_generators, closure_enumerate, Enumeration, DEFAULT_ENUMERATION_CAP};
pub use group::{embed, sub_elements, PermGroup, ENUMERATION_BYTE_LIMIT};
pub use parse::{format_gens, parse_cycles, parse_gens, read_gens_file};
pub use perm::Permutation;
