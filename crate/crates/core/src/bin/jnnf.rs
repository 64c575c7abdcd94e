use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde_json::json;

use jnnf::construction::{validate_params, CbParams, Stage};
use jnnf::group::{FinGroup, LATTICE_BOUND};
use jnnf::invariants::{gamma_set, narrow_chain};
use jnnf::lab::{self, Cache, GroupRef, PipelineConfig, SlCheck};
use jnnf::perm::PermGroup;
use jnnf::wreath::{Tower, WreathSpec};

#[derive(Parser)]
#[command(
    name = "jnnf",
    version,
    about = "Finite-stage group constructions and their verification batteries"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a group, a wreath tower or a construction stage and print its data.
    Build {
        /// Corpus name or group descriptor JSON.
        #[arg(long, conflicts_with_all = ["wreath", "stage"])]
        group: Option<String>,
        /// Wreath spec TOML file.
        #[arg(long)]
        wreath: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Construction parameter TOML file.
        #[arg(long)]
        stage: Option<PathBuf>,
    },
    /// Run a pipeline and write JSON-lines reports.
    Verify {
        /// Pipeline TOML; the bundled default when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Ignore JNNF_CACHE_DIR.
        #[arg(long)]
        no_cache: bool,
    },
    /// Gamma set, Melnikov and Fitting subgroups and a narrow chain of a group.
    Invariants {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 0)]
        c: usize,
    },
    /// Summarize a report file; exit status follows the report statuses.
    Report { input: PathBuf },
    /// Recompute every cached job of a pipeline and compare bodies.
    VerifyCache {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// First congruence subgroup of SL_n over F_p[[T]]/(T^k).
    Sl1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        k: usize,
        /// Comma-separated subset of lcs,graded,nottingham.
        #[arg(long, default_value = "lcs,graded,nottingham", value_delimiter = ',')]
        verify: Vec<SlCheck>,
    },
}

fn group_arg(s: &str) -> anyhow::Result<PermGroup> {
    let r = if s.trim_start().starts_with('{') {
        GroupRef::Explicit(serde_json::from_str(s).context("group descriptor JSON")?)
    } else {
        GroupRef::Named(s.to_string())
    };
    Ok(r.resolve()?)
}

fn load_config(path: Option<&PathBuf>) -> anyhow::Result<PipelineConfig> {
    Ok(match path {
        Some(p) => PipelineConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
        None => PipelineConfig::default_pipeline(),
    })
}

/// Writes a line to stdout; a closed pipe is not an error.
fn out(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn print(v: &serde_json::Value) {
    out(&serde_json::to_string_pretty(v).expect("values serialize"));
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.cmd {
        Cmd::Build {
            group,
            wreath,
            depth,
            stage,
        } => {
            if let Some(g) = group {
                let g = group_arg(&g)?;
                print(&json!({
                    "descriptor": g.to_descriptor(),
                    "order": g.order().to_string(),
                    "base": g.chain().base(),
                    "orbits": g.orbits(),
                }));
            } else if let Some(path) = wreath {
                let spec: WreathSpec = toml::from_str(&std::fs::read_to_string(&path)?)?;
                let t = Tower::build(&spec, depth)?;
                print(&json!({ "levels": t.level_names(), "omega": t.omega_sizes() }));
            } else if let Some(path) = stage {
                let params: CbParams = toml::from_str(&std::fs::read_to_string(&path)?)?;
                let v = validate_params(&params);
                let mut out = json!({ "violations": v.violations, "decomposition": v.decomposition });
                if v.ok() {
                    let s = Stage::build(&params, 1)?;
                    out["gamma"] = json!(s.gamma());
                    out["gamma_tilde"] = json!(s.gamma_tilde());
                    out["dim_v"] = json!(s.v_dim());
                    out["dim_w"] = json!(s.w_dim());
                    out["d_order_exponent"] = json!(s.d_exponent());
                    out["zeta"] = json!(s.zeta);
                }
                print(&out);
                return Ok(v.ok());
            } else {
                bail!("build needs one of --group, --wreath, --stage");
            }
            Ok(true)
        }
        Cmd::Verify {
            config,
            output,
            seed,
            no_cache,
        } => {
            let mut cfg = load_config(config.as_ref())?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let cache = if no_cache { None } else { Cache::from_env()? };
            let reports = lab::run_pipeline(&cfg, cache.as_ref())?;
            match output.or(cfg.output.clone()) {
                Some(path) => lab::write_reports(&path, &reports)?,
                None => reports.iter().for_each(|r| out(&r.line())),
            }
            for r in &reports {
                eprintln!("{:<24} {:<28} {:?}", r.job, r.tag, r.status);
            }
            Ok(lab::all_ok(&reports))
        }
        Cmd::Invariants { group, c } => {
            let g = group_arg(&group)?;
            let fg = FinGroup::enumerate(&g, LATTICE_BOUND)?.group;
            let gs = gamma_set(&fg, c)?;
            let chain = narrow_chain(&fg, c, 8)?;
            let mel = if fg.order() > 1 {
                Some(fg.melnikov()?.order())
            } else {
                None
            };
            print(&json!({
                "order": fg.order(),
                "normal_subgroup_orders": fg.normal_subgroups()?.iter().map(|n| n.order()).collect::<Vec<_>>(),
                "gamma_set_orders": gs.subgroups().iter().map(|s| s.order()).collect::<Vec<_>>(),
                "melnikov_order": mel,
                "fitting_order": fg.fitting_subgroup()?.order(),
                "narrow_chain": chain.iter().map(|l| (l.k.order(), l.l.order())).collect::<Vec<_>>(),
            }));
            Ok(true)
        }
        Cmd::Report { input } => {
            let reports = lab::read_reports(&input)?;
            for r in &reports {
                let ms = r.timing.as_ref().map_or(0.0, |t| t.ms);
                out(&format!(
                    "{:<24} {:<28} {:<13} {:>10.1} ms",
                    r.job,
                    r.tag,
                    format!("{:?}", r.status),
                    ms
                ));
            }
            let ok = lab::all_ok(&reports);
            out(&format!(
                "{} reports, {}",
                reports.len(),
                if ok {
                    "all pass or inconclusive"
                } else {
                    "failures present"
                }
            ));
            Ok(ok)
        }
        Cmd::VerifyCache { config } => {
            let cfg = load_config(config.as_ref())?;
            let Some(cache) = Cache::from_env()? else {
                bail!("set {} to the cache directory", lab::CACHE_ENV);
            };
            let checks = lab::verify_cache(&cfg, &cache)?;
            print(&serde_json::to_value(&checks)?);
            Ok(checks.iter().all(|c| c.identical != Some(false)))
        }
        Cmd::Sl1 { n, p, k, verify } => {
            let (status, v) = lab::sl1_job(n, p, k, &verify)?;
            print(&json!({ "status": status, "result": v }));
            Ok(status.is_ok())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
