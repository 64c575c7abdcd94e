//! Gamma sets computed two ways, narrow chains, and the derived-subgroup
//! census of the shift semidirect products.

use jnnf::group::corpus;
use jnnf::invariants::{gamma_set, gamma_set_by_scan, narrow_chain, semidirect_census};

fn main() -> jnnf::Result<()> {
    for name in ["S4", "SL2(3)", "A5", "C3wrC3"] {
        let g = corpus::enumerate(name).group;
        for c in 0..3 {
            let walk = gamma_set(&g, c)?;
            let scan = gamma_set_by_scan(&g, c)?;
            let orders: Vec<usize> = walk.subgroups().iter().map(|s| s.order()).collect();
            println!(
                "{name} c={c}: {orders:?}, agree {}",
                walk.subgroups() == scan.subgroups()
            );
        }
        let chain: Vec<(usize, usize)> = narrow_chain(&g, 0, 6)?
            .iter()
            .map(|l| (l.k.order(), l.l.order()))
            .collect();
        println!("  narrow chain {chain:?}");
    }
    for (p, n) in [(2, 2), (3, 1), (2, 1)] {
        let r = semidirect_census(p, n)?;
        println!(
            "p={p} n={n}: |G| = {}, {} distinct derived subgroups over {} subsets, formula {}",
            r.order,
            r.distinct_derived,
            r.subsets,
            r.formula_holds()
        );
    }
    Ok(())
}
