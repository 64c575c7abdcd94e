//! Iterated wreath products of non-abelian simple groups.
//!
//! Two modes: [`Tower`] keeps structural elements with sparse base maps
//! for the full iterated construction, sampled where the sets involved are
//! huge; [`HarnessWreath`] is a single wreath product `X wr H` over a small
//! permutation group `H`, represented as an imprimitive permutation group
//! and checked exhaustively.

mod auto;
mod harness;
mod tower;

pub use auto::Automorphism;
pub use harness::{
    check_simple, class_representatives, coordinate_psi_samples, normal_closure_battery, outer_certificate,
    product_action_verify, CoordinatePsi, HarnessWreath, NormalClosureCheck, NormalClosureReport, OuterCertificate,
    OuterVerdict, ProductAction, ProductActionReport, PsiSampleReport, PRODUCT_DEGREE_BOUND,
};
pub use tower::{
    Action, BaseMap, ComposeReport, LevelReport, LevelSpec, OmegaPoint, OmegaSize, Psi, Tower, TowerElement,
    TowerReport, WreathSpec, OMEGA_ENUMERATION_BOUND,
};
