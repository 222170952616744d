//! Finite group actions on compact Riemann surfaces.
//!
//! The crate works with groups given as permutation groups, encodes actions
//! by generating vectors, classifies them up to topological equivalence, and
//! restricts actions to subgroups in order to find points where two different
//! subgroups induce the same equisymmetric family.

pub mod budget;
pub mod equivalence;
pub mod error;
pub mod group;
pub mod perm;
pub mod restriction;
pub mod signature;
pub mod ske;
pub mod strata;

pub use budget::Budget;
pub use error::{Error, Result};
pub use group::{Elem, FiniteGroup, GroupFingerprint, Isomorphism, Subgroup, SubgroupClass};
pub use perm::Perm;
pub use signature::Signature;
pub use ske::GeneratingVector;
