//! Running a small pipeline twice against a cache directory.

use jnnf::lab::{all_ok, run_pipeline, Cache, PipelineConfig};

fn main() -> jnnf::Result<()> {
    let config = PipelineConfig::from_toml(
        r#"
        seed = 7

        [[jobs]]
        id = "census"
        module = "jnnf-invariants"
        operation = "example_2_8"
        params = { p = 2, n = 2 }

        [[jobs]]
        id = "a5-chain"
        module = "perm-engine"
        operation = "stabilizer_chain"
        params = { group = { kind = "perm", degree = 5, generators = [[[2, 3, 4]], [[0, 1, 2, 3, 4]]] } }
        "#,
    )?;
    let dir = std::env::temp_dir().join("jnnf-example-cache");
    let cache = Cache::new(&dir)?;
    for round in 0..2 {
        let reports = run_pipeline(&config, Some(&cache))?;
        for r in &reports {
            let t = r.timing.as_ref().expect("fresh reports carry timing");
            println!(
                "round {round}: {} {:?} cached={} {}",
                r.job,
                r.status,
                t.cached,
                r.body()
            );
        }
        println!("exit code {}", if all_ok(&reports) { 0 } else { 1 });
    }
    Ok(())
}
