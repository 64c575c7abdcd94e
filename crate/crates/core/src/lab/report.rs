use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::cache::{sha256_hex, Cache, CacheEntry, Lookup};
use super::config::{PipelineConfig, PlannedJob};
use super::jobs::{canonical_input, execute};
use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Inconclusive,
}

impl Status {
    /// `pass` and `inconclusive` keep the exit code at zero.
    pub fn is_ok(self) -> bool {
        matches!(self, Status::Pass | Status::Inconclusive)
    }
}

/// Wall-clock data kept out of the report body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub ms: f64,
    pub cached: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub job: String,
    pub module: String,
    pub operation: String,
    pub tag: String,
    pub status: Status,
    pub witnesses: Value,
    pub input_hash: String,
    pub version: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl VerificationReport {
    /// The report without timing, as one JSON line.
    pub fn body(&self) -> String {
        let mut r = self.clone();
        r.timing = None;
        serde_json::to_string(&r).expect("reports serialize")
    }

    pub fn line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Cache key: input hash and tool version.
pub fn cache_key(input_hash: &str) -> String {
    sha256_hex(format!("{TOOL_VERSION}:{input_hash}").as_bytes())
}

fn run_one(job: &PlannedJob, config: &PipelineConfig, cache: Option<&Cache>) -> VerificationReport {
    let start = Instant::now();
    let input = canonical_input(&job.job, config.seed, &config.bounds)
        .and_then(|v| Ok(sha256_hex(serde_json::to_string(&v)?.as_bytes())));
    let mut report = VerificationReport {
        job: job.id.clone(),
        module: job.job.module().into(),
        operation: job.job.operation().into(),
        tag: job.job.tag().into(),
        status: Status::Error,
        witnesses: Value::Null,
        input_hash: String::new(),
        version: TOOL_VERSION.into(),
        seed: config.seed,
        timing: None,
    };
    let input_hash = match input {
        Ok(h) => h,
        Err(e) => {
            report.witnesses = serde_json::json!({ "error": e.to_string() });
            report.timing = Some(Timing {
                ms: start.elapsed().as_secs_f64() * 1e3,
                cached: false,
            });
            return report;
        }
    };
    report.input_hash = input_hash.clone();
    let key = cache_key(&input_hash);
    let mut cached = false;
    let hit = cache.and_then(|c| match c.lookup(&key) {
        Lookup::Hit(e) => Some(e),
        Lookup::Miss => None,
        Lookup::Corrupt(msg) => {
            eprintln!("warning: ignoring corrupt cache entry {msg}");
            None
        }
    });
    if let Some(e) = hit {
        report.status = e.status;
        report.witnesses = e.witnesses;
        cached = true;
    } else {
        match execute(&job.job, config.seed, &config.bounds) {
            Ok((status, witnesses)) => {
                report.status = status;
                report.witnesses = witnesses;
                if let Some(c) = cache {
                    let entry = CacheEntry {
                        key,
                        status,
                        witnesses: report.witnesses.clone(),
                    };
                    if let Err(e) = c.store(&entry) {
                        eprintln!("warning: cache write failed: {e}");
                    }
                }
            }
            Err(e) => {
                report.status = Status::Error;
                report.witnesses = serde_json::json!({ "error": e.to_string() });
            }
        }
    }
    report.timing = Some(Timing {
        ms: start.elapsed().as_secs_f64() * 1e3,
        cached,
    });
    report
}

/// Validates the whole config, then runs the jobs concurrently and
/// returns their reports in declared order.
pub fn run_pipeline(config: &PipelineConfig, cache: Option<&Cache>) -> Result<Vec<VerificationReport>> {
    let jobs = config.validate()?;
    Ok(jobs.par_iter().map(|j| run_one(j, config, cache)).collect())
}

/// `true` iff every status is `pass` or `inconclusive`.
pub fn all_ok(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.status.is_ok())
}

/// Writes JSON lines to a temporary file and renames it into place.
pub fn write_reports(path: &Path, reports: &[VerificationReport]) -> Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
        for r in reports {
            writeln!(f, "{}", r.line())?;
        }
        f.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_reports(path: &Path) -> Result<Vec<VerificationReport>> {
    let f = std::io::BufReader::new(fs::File::open(path)?);
    let mut out = Vec::new();
    for line in f.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CacheCheck {
    pub job: String,
    pub hit: bool,
    /// Cached body equals a fresh recomputation; `None` on a miss.
    pub identical: Option<bool>,
}

/// Recomputes every job and compares with its cache entry, if any.
pub fn verify_cache(config: &PipelineConfig, cache: &Cache) -> Result<Vec<CacheCheck>> {
    let jobs = config.validate()?;
    Ok(jobs
        .par_iter()
        .map(|j| {
            let cached = run_one(j, config, Some(cache));
            let fresh = run_one(j, config, None);
            let hit = cached.timing.as_ref().is_some_and(|t| t.cached);
            CacheCheck {
                job: j.id.clone(),
                hit,
                identical: hit.then(|| cached.body() == fresh.body()),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn census_config() -> PipelineConfig {
        PipelineConfig::from_toml(
            r#"
            seed = 3
            [[jobs]]
            id = "census"
            module = "jnnf-invariants"
            operation = "example_2_8"
            params = { p = 2, n = 2 }
            [[jobs]]
            module = "perm-engine"
            operation = "stabilizer_chain"
            params = { group = "A5" }
            "#,
        )
        .unwrap()
    }

    #[test]
    fn census_job_passes() {
        let reports = run_pipeline(&census_config(), None).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].status, Status::Pass);
        assert_eq!(reports[0].witnesses["distinct_derived"], 8);
        assert_eq!(reports[1].witnesses["order"], "60");
        assert!(all_ok(&reports));
        let empty = run_pipeline(&PipelineConfig::default(), None).unwrap();
        assert!(empty.is_empty() && all_ok(&empty));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let cfg = census_config();
        let first = run_pipeline(&cfg, Some(&cache)).unwrap();
        let second = run_pipeline(&cfg, Some(&cache)).unwrap();
        for (a, b) in first.iter().zip(&second) {
            assert!(!a.timing.as_ref().unwrap().cached);
            assert!(b.timing.as_ref().unwrap().cached);
            assert_eq!(a.body(), b.body());
        }
        let checks = verify_cache(&cfg, &cache).unwrap();
        assert!(checks.iter().all(|c| c.hit && c.identical == Some(true)));
    }

    #[test]
    fn errors_and_exit_contract() {
        let cfg = PipelineConfig::from_toml(
            r#"
            [[jobs]]
            module = "congruence-sl"
            operation = "sl1"
            params = { n = 3, p = 3, k = 2 }
            "#,
        )
        .unwrap();
        let r = run_pipeline(&cfg, None).unwrap();
        assert_eq!(r[0].status, Status::Error);
        assert!(!all_ok(&r));
    }

    #[test]
    fn reports_round_trip_through_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        let reports = run_pipeline(&census_config(), None).unwrap();
        write_reports(&path, &reports).unwrap();
        assert_eq!(read_reports(&path).unwrap(), reports);
    }
}
