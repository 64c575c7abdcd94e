//! Structural wreath towers with regular and product actions, and the
//! automorphism `psi` built from one automorphism per level.

use jnnf::perm::Permutation;
use jnnf::wreath::{Action, Automorphism, LevelSpec, Psi, Tower, WreathSpec};

fn main() -> jnnf::Result<()> {
    let spec = WreathSpec {
        levels: vec![
            LevelSpec {
                simple: "A5".into(),
                action: Action::R,
            },
            LevelSpec {
                simple: "A5".into(),
                action: Action::P,
            },
            LevelSpec {
                simple: "A5".into(),
                action: Action::R,
            },
        ],
    };
    let tower = Tower::build(&spec, 2)?;
    for (n, s) in tower.omega_sizes().iter().enumerate() {
        println!("|Omega_{n}| ~ 10^{:.1} (exact {:?})", s.log10, s.exact);
    }

    let swap = Permutation::from_cycles(5, &[vec![0, 1]])?;
    let phis = (0..=2)
        .map(|n| {
            if n == 2 {
                Automorphism::conjugation(tower.simple(n), &swap)
            } else {
                Ok(Automorphism::identity(&tower.simple(n).group))
            }
        })
        .collect::<jnnf::Result<Vec<_>>>()?;
    let psi = tower.psi(phis)?;
    let report = tower.verify(Some(&psi), 30, 7);
    println!("structure clean: {}", report.clean());

    let squared = Psi {
        phis: psi.phis.iter().map(|f| f.then(f)).collect(),
    };
    let c = tower.psi_compose_check(&psi, &squared, 30, 7)?;
    println!("composition: {} checked, {} mismatches", c.checked, c.mismatches);
    let (level, verdict) = tower.outer_certificate(&psi);
    println!(
        "outer certificate at level {level:?}: {}",
        serde_json::to_string(&verdict)?
    );
    Ok(())
}
