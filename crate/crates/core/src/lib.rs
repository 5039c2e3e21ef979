//! Character-covariant function spaces on locally compact groups.
//!
//! Finite groups are handled exactly through Cayley tables; the affine group
//! of the line is handled numerically with tensor Gauss–Legendre quadrature.

pub mod axb;
pub mod characters;
pub mod cli;
pub mod covariant;
pub mod error;
pub mod group;
pub mod haar;
pub mod linalg;
pub mod verifier;

pub use characters::{enumerate_characters, Character};
pub use covariant::{CovariantFunction, CovariantSpace, GroupFunction, SubspaceBasis};
pub use error::{Error, Result};
pub use group::{
    builtin_by_name, builtin_group, enumerate_normal_subgroups, FiniteGroup, GroupFamily, Subgroup,
};
pub use haar::{weil_normalize, HaarData, WeightPolicy};
pub use verifier::{run_suite, verify_theorem, SuiteConfig, SuiteReport, TheoremId, TheoremReport};
