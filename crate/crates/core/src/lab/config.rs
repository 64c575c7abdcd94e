use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::construction::CbParams;
use crate::error::{Error, Result};
use crate::group::{corpus, ENUMERATION_BOUND};
use crate::perm::{GroupDescriptor, PermGroup};
use crate::wreath::{LevelSpec, PRODUCT_DEGREE_BOUND};

/// A pipeline file: seed, bounds, output path and an ordered job list.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub jobs: Vec<JobConfig>,
}

/// Limits applied on top of the library's own; they may only tighten them.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Bounds {
    pub enumeration: usize,
    pub product_degree: usize,
    pub samples: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            enumeration: ENUMERATION_BOUND,
            product_degree: PRODUCT_DEGREE_BOUND,
            samples: 10_000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub id: Option<String>,
    pub module: String,
    pub operation: String,
    #[serde(default)]
    pub params: toml::Table,
}

/// A corpus name or an explicit permutation group.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Named(String),
    Explicit(GroupDescriptor),
}

impl GroupRef {
    pub fn resolve(&self) -> Result<PermGroup> {
        match self {
            GroupRef::Named(n) => {
                corpus::perm_group(n).ok_or_else(|| Error::InvalidParams(format!("unknown corpus group `{n}`")))
            }
            GroupRef::Explicit(d) => PermGroup::from_descriptor(d),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupParams {
    pub group: GroupRef,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaParams {
    pub group: GroupRef,
    #[serde(default)]
    pub c: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NarrowChainParams {
    pub group: GroupRef,
    #[serde(default)]
    pub c: usize,
    #[serde(default = "default_max_len")]
    pub max_len: usize,
}

fn default_max_len() -> usize {
    8
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusParams {
    pub p: u8,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WreathParams {
    pub x: GroupRef,
    pub h: GroupRef,
}

/// `phi` is conjugation by a permutation normalizing `X`, given as cycles.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterParams {
    pub x: GroupRef,
    pub h: GroupRef,
    pub phi: Vec<Vec<u32>>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    1000
}

/// A tower with one normalizing permutation per level for `psi`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerParams {
    pub levels: Vec<LevelSpec>,
    pub depth: usize,
    #[serde(default)]
    pub psi: Option<Vec<Vec<Vec<u32>>>>,
    #[serde(default = "default_tower_samples")]
    pub samples: usize,
}

fn default_tower_samples() -> usize {
    50
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageParams {
    #[serde(flatten)]
    pub params: CbParams,
    #[serde(default = "default_stage_samples")]
    pub samples: usize,
}

fn default_stage_samples() -> usize {
    100
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalarPsiParams {
    #[serde(flatten)]
    pub params: CbParams,
    pub lambda0: u32,
    pub lambda1: u32,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sl1Params {
    pub n: usize,
    pub p: u32,
    pub k: usize,
    #[serde(default = "default_sl_checks")]
    pub verify: Vec<SlCheck>,
}

fn default_sl_checks() -> Vec<SlCheck> {
    vec![SlCheck::Lcs, SlCheck::Graded, SlCheck::Nottingham]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlCheck {
    Lcs,
    Graded,
    Nottingham,
}

impl std::str::FromStr for SlCheck {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lcs" => Ok(SlCheck::Lcs),
            "graded" => Ok(SlCheck::Graded),
            "nottingham" => Ok(SlCheck::Nottingham),
            _ => Err(Error::InvalidParams(format!("unknown check `{s}`"))),
        }
    }
}

/// A validated job.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "operation", rename_all = "snake_case")]
pub enum Job {
    StabilizerChain(GroupParams),
    Orbits(GroupParams),
    NormalSubgroups(GroupParams),
    MelInclusion(GroupParams),
    NarrowAboveChief(GroupParams),
    #[serde(rename = "example_2_8")]
    Census(CensusParams),
    GammaSet(GammaParams),
    NarrowChain(NarrowChainParams),
    NormalClosureBattery(WreathParams),
    ProductAction(WreathParams),
    OuterCertificate(OuterParams),
    Tower(TowerParams),
    Commutators(StageParams),
    NormalForm(StageParams),
    CentreD(StageParams),
    CentreG1(StageParams),
    ScalarPsi(ScalarPsiParams),
    Sl1(Sl1Params),
}

/// `(module, operation)` pairs accepted in job lists.
pub const OPERATIONS: &[(&str, &str)] = &[
    ("perm-engine", "stabilizer_chain"),
    ("perm-engine", "orbits"),
    ("group-kernel", "normal_subgroups"),
    ("group-kernel", "mel_inclusion"),
    ("group-kernel", "narrow_above_chief"),
    ("jnnf-invariants", "example_2_8"),
    ("jnnf-invariants", "gamma_set"),
    ("jnnf-invariants", "narrow_chain"),
    ("wreath-tower", "normal_closure_battery"),
    ("wreath-tower", "product_action"),
    ("wreath-tower", "outer_certificate"),
    ("wreath-tower", "tower"),
    ("construction-b", "commutators"),
    ("construction-b", "normal_form"),
    ("construction-b", "centre_d"),
    ("construction-b", "centre_g1"),
    ("construction-b", "scalar_psi"),
    ("congruence-sl", "sl1"),
];

impl Job {
    /// Stable report tag of each job kind.
    pub fn tag(&self) -> &'static str {
        match self {
            Job::StabilizerChain(_) => "stabilizer-chain",
            Job::Orbits(_) => "orbits",
            Job::NormalSubgroups(_) => "normal-lattice",
            Job::MelInclusion(_) => "mel-inclusion",
            Job::NarrowAboveChief(_) => "narrow-above-chief",
            Job::Census(_) => "semidirect-census",
            Job::GammaSet(_) => "gamma-set",
            Job::NarrowChain(_) => "narrow-chain",
            Job::NormalClosureBattery(_) => "base-normal-closure",
            Job::ProductAction(_) => "product-action-subprimitive",
            Job::OuterCertificate(_) => "psi-outer",
            Job::Tower(_) => "tower-structure",
            Job::Commutators(_) => "commutator-relations",
            Job::NormalForm(_) => "d-normal-form",
            Job::CentreD(_) => "centre-of-d",
            Job::CentreG1(_) => "centre-of-g1",
            Job::ScalarPsi(_) => "scalar-psi",
            Job::Sl1(_) => "congruence-lcs",
        }
    }

    pub fn module(&self) -> &'static str {
        let op = self.operation();
        OPERATIONS
            .iter()
            .find(|(_, o)| *o == op)
            .map(|(m, _)| *m)
            .expect("every job is registered")
    }

    pub fn operation(&self) -> &'static str {
        match self {
            Job::StabilizerChain(_) => "stabilizer_chain",
            Job::Orbits(_) => "orbits",
            Job::NormalSubgroups(_) => "normal_subgroups",
            Job::MelInclusion(_) => "mel_inclusion",
            Job::NarrowAboveChief(_) => "narrow_above_chief",
            Job::Census(_) => "example_2_8",
            Job::GammaSet(_) => "gamma_set",
            Job::NarrowChain(_) => "narrow_chain",
            Job::NormalClosureBattery(_) => "normal_closure_battery",
            Job::ProductAction(_) => "product_action",
            Job::OuterCertificate(_) => "outer_certificate",
            Job::Tower(_) => "tower",
            Job::Commutators(_) => "commutators",
            Job::NormalForm(_) => "normal_form",
            Job::CentreD(_) => "centre_d",
            Job::CentreG1(_) => "centre_g1",
            Job::ScalarPsi(_) => "scalar_psi",
            Job::Sl1(_) => "sl1",
        }
    }

    fn samples(&self) -> Option<usize> {
        match self {
            Job::OuterCertificate(p) => Some(p.samples),
            Job::Tower(p) => Some(p.samples),
            Job::Commutators(p) | Job::NormalForm(p) | Job::CentreD(p) | Job::CentreG1(p) => Some(p.samples),
            Job::ScalarPsi(p) => Some(p.samples),
            _ => None,
        }
    }
}

/// A validated job with its identifier.
#[derive(Clone, Debug)]
pub struct PlannedJob {
    pub id: String,
    pub job: Job,
}

fn parse<T: serde::de::DeserializeOwned>(params: &toml::Table, field: &str) -> Result<T> {
    toml::Value::Table(params.clone())
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config {
            field: field.to_string(),
            msg: e.message().to_string(),
        })
}

impl PipelineConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config {
            field: e.span().map_or("<root>".into(), |r| format!("byte {}", r.start)),
            msg: e.message().to_string(),
        })
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// The pipeline shipped with the library.
    pub fn default_pipeline() -> Self {
        Self::from_toml(include_str!("../../configs/default.toml")).expect("bundled pipeline parses")
    }

    /// Checks every job before any runs; errors name the offending field.
    pub fn validate(&self) -> Result<Vec<PlannedJob>> {
        let b = &self.bounds;
        let limits = Bounds::default();
        for (name, v, max) in [
            ("bounds.enumeration", b.enumeration, limits.enumeration),
            ("bounds.product_degree", b.product_degree, limits.product_degree),
            ("bounds.samples", b.samples, limits.samples),
        ] {
            if v > max {
                return Err(Error::Config {
                    field: name.into(),
                    msg: format!("{v} exceeds the library limit {max}"),
                });
            }
        }
        let mut out = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, jc) in self.jobs.iter().enumerate() {
            let field = |f: &str| format!("jobs[{i}].{f}");
            if !OPERATIONS.iter().any(|(m, _)| *m == jc.module) {
                return Err(Error::Config {
                    field: field("module"),
                    msg: format!("unknown module `{}`", jc.module),
                });
            }
            if !OPERATIONS.contains(&(jc.module.as_str(), jc.operation.as_str())) {
                return Err(Error::Config {
                    field: field("operation"),
                    msg: format!("unknown operation `{}` in module `{}`", jc.operation, jc.module),
                });
            }
            let pf = field("params");
            let p = &jc.params;
            let job = match jc.operation.as_str() {
                "stabilizer_chain" => Job::StabilizerChain(parse(p, &pf)?),
                "orbits" => Job::Orbits(parse(p, &pf)?),
                "normal_subgroups" => Job::NormalSubgroups(parse(p, &pf)?),
                "mel_inclusion" => Job::MelInclusion(parse(p, &pf)?),
                "narrow_above_chief" => Job::NarrowAboveChief(parse(p, &pf)?),
                "example_2_8" => Job::Census(parse(p, &pf)?),
                "gamma_set" => Job::GammaSet(parse(p, &pf)?),
                "narrow_chain" => Job::NarrowChain(parse(p, &pf)?),
                "normal_closure_battery" => Job::NormalClosureBattery(parse(p, &pf)?),
                "product_action" => Job::ProductAction(parse(p, &pf)?),
                "outer_certificate" => Job::OuterCertificate(parse(p, &pf)?),
                "tower" => Job::Tower(parse(p, &pf)?),
                "commutators" => Job::Commutators(parse(p, &pf)?),
                "normal_form" => Job::NormalForm(parse(p, &pf)?),
                "centre_d" => Job::CentreD(parse(p, &pf)?),
                "centre_g1" => Job::CentreG1(parse(p, &pf)?),
                "scalar_psi" => Job::ScalarPsi(parse(p, &pf)?),
                "sl1" => Job::Sl1(parse(p, &pf)?),
                _ => unreachable!("operation list and parser agree"),
            };
            if let Some(s) = job.samples() {
                if s > b.samples {
                    return Err(Error::Config {
                        field: format!("{pf}.samples"),
                        msg: format!("{s} exceeds bounds.samples = {}", b.samples),
                    });
                }
            }
            let id = jc.id.clone().unwrap_or_else(|| format!("{i:03}-{}", jc.operation));
            if !seen.insert(id.clone()) {
                return Err(Error::Config {
                    field: field("id"),
                    msg: format!("duplicate job id `{id}`"),
                });
            }
            out.push(PlannedJob { id, job });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_names_fields() {
        let c = PipelineConfig::from_toml(
            r#"
            [[jobs]]
            module = "jnnf-invariants"
            operation = "example_2_8"
            params = { p = 2, n = 2 }
            [[jobs]]
            module = "jnnf-invariants"
            operation = "frobnicate"
            "#,
        )
        .unwrap();
        match c.validate() {
            Err(Error::Config { field, .. }) => assert_eq!(field, "jobs[1].operation"),
            other => panic!("{other:?}"),
        }
        let c = PipelineConfig::from_toml(
            r#"
            [[jobs]]
            module = "jnnf-invariants"
            operation = "example_2_8"
            params = { p = "two", n = 2 }
            "#,
        )
        .unwrap();
        assert!(matches!(c.validate(), Err(Error::Config { field, .. }) if field == "jobs[0].params"));
        assert!(PipelineConfig::from_toml("seed = 1\nbogus = 2").is_err());
        assert!(PipelineConfig::default().validate().unwrap().is_empty());
    }

    #[test]
    fn bundled_pipeline_validates() {
        let c = PipelineConfig::default_pipeline();
        let jobs = c.validate().unwrap();
        assert!(jobs.len() >= 10);
        for j in &jobs {
            assert!(OPERATIONS.contains(&(j.job.module(), j.job.operation())));
        }
    }
}
