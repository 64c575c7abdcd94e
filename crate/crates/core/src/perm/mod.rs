//! Permutations, stabilizer chains and block systems.

mod blocks;
mod chain;
mod group;
mod permutation;

pub use blocks::{block_system_joining, minimal_blocks, BlockResult, BlockSystem};
pub use chain::StabChain;
pub use group::{GroupDescriptor, PermGroup};
pub use permutation::Permutation;
