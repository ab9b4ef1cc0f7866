//! Exact factorizations `G = AH` of finite groups, their matched pairs and
//! bicrossed products, deformation maps, and the classification of all
//! `A`-complements of `H` up to isomorphism.
//!
//! Elements of every group are indices into a fixed roster with the identity
//! at index 0. Permutations compose right to left: `p * q` applies `q` first.

pub mod audit;
pub mod budget;
pub mod error;
pub mod group;
pub mod io;
pub mod iso;
pub mod matched_pair;
pub mod complement;
pub mod census;
pub mod deformation;
mod par;
pub mod perm;
pub mod worked;

pub use budget::{Budget, DEFAULT_BUDGET};
pub use error::{Error, Result};
pub use group::{FiniteGroup, Limits, SubgroupHandle};
pub use perm::Perm;
