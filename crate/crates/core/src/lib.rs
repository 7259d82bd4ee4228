//! Covering numbers of finite permutation groups by products of conjugates
//! of a subgroup, together with explicit, machine-checkable covering
//! certificates for the affine, diagonal, product-action and twisted wreath
//! families of primitive groups.

pub mod classprod;
pub mod constructions;
pub mod covering;
pub mod elemset;
pub mod error;
pub mod permcore;

pub use error::{Error, Result};
