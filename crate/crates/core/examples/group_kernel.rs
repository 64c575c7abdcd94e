//! Normal lattices, Melnikov subgroups, chief factors and narrow witnesses
//! over the corpus of small groups.

use jnnf::group::corpus;
use jnnf::invariants::{chief_factor_battery, mel_inclusion_battery};

fn main() -> jnnf::Result<()> {
    for name in corpus::NAMES {
        let g = corpus::enumerate(name).group;
        let normals: Vec<usize> = g.normal_subgroups()?.iter().map(|n| n.order()).collect();
        let mel = g.melnikov()?.order();
        let fit = g.fitting_subgroup()?.order();
        let m = mel_inclusion_battery(&g)?;
        let c = chief_factor_battery(&g)?;
        println!(
            "{name:>7}: |G| = {:>3}, normal orders {normals:?}, |Mel| = {mel}, |F| = {fit}, \
             {} pairs / {} exceptions, {} chief factors / {} failures",
            g.order(),
            m.pairs,
            m.exceptions.len(),
            c.factors,
            c.failures.len()
        );
    }
    Ok(())
}
