//! Gamma sets, obliquity, narrow chains and inverse-system stage checks.

mod census;
mod chains;
mod gamma;
mod lattice;

pub use census::{semidirect_census, SemidirectCensus};
pub use chains::{
    check_surjective_hom, narrow_chain, verify_chain, verify_hereditary_condition_v, verify_invlim_stage,
    CandidateVerdict, ChainReport, ConditionVReport, InvLimReport, NarrowLink, StageData, CONDITION_V_SCAN_BOUND,
};
pub use gamma::{
    astar_union_check, covering_edges, gamma_set, gamma_set_by_scan, obliquity_graph, obliquity_set, EdgeCheck,
    GammaMember, GammaSet, GammaSource, ObliquityGraph, Variant,
};
pub use lattice::{chief_factor_battery, mel_inclusion_battery, ChiefFactorReport, MelInclusionReport};
