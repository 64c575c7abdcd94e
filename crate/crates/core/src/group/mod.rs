//! Enumerated finite groups and their subgroup structure.

pub mod corpus;
mod fingroup;
mod structure;
mod subgroup;

pub use fingroup::{
    Enumerated, FinGroup, FiniteGroup, QuotientBackend, SubgroupBackend, ENUMERATION_BOUND, LATTICE_BOUND,
};
pub use structure::{is_subprimitive, NarrowWitness, SubprimitiveFailure, SUBGROUP_SCAN_BOUND};
pub use subgroup::{Subgroup, SubgroupDescriptor};
