pub mod congruence;
pub mod construction;
pub mod error;
pub mod group;
pub mod invariants;
pub mod lab;
pub mod perm;
pub mod wreath;

pub use error::{Error, Result};
