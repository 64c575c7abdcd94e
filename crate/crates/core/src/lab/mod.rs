//! Pipelines: TOML job lists validated up front, run concurrently, and
//! reported as JSON lines with an optional content-addressed cache.

mod cache;
mod config;
mod jobs;
mod report;

pub use cache::{sha256_hex, Cache, CacheEntry, Lookup, CACHE_ENV};
pub use config::{
    Bounds, CensusParams, GammaParams, GroupParams, GroupRef, Job, JobConfig, NarrowChainParams, OuterParams,
    PipelineConfig, PlannedJob, ScalarPsiParams, Sl1Params, SlCheck, StageParams, TowerParams, WreathParams,
    OPERATIONS,
};
pub use jobs::{canonical_group_hash, canonical_input, execute, sl1_job};
pub use report::{
    all_ok, cache_key, read_reports, run_pipeline, verify_cache, write_reports, CacheCheck, Status, Timing,
    VerificationReport, TOOL_VERSION,
};
