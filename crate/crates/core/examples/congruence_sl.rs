//! Congruence filtration, lower central series and substitution
//! automorphisms of the first congruence subgroup of `SL_2`.

use std::time::Instant;

use jnnf::congruence::{build_sl1, find_substitution_of_order, MatrixMap, NottinghamElement, TruncSeries};

fn main() -> jnnf::Result<()> {
    for (n, p, k) in [(2, 3, 4), (2, 5, 3), (2, 3, 3)] {
        let t = Instant::now();
        let g = build_sl1(n, p, k)?;
        println!("SL_{n}^1 over F_{p}[[T]]/(T^{k}): order {}", g.group()?.order());
        let lcs = g.verify_lcs_equals_congruence()?;
        println!("  (i, |gamma_i|, |G_i|): {:?}, equal {}", lcs.orders, lcs.holds);
        let graded = g.graded_check()?;
        println!("  layers {:?}, holds {}", graded.layers, graded.holds);

        let f = NottinghamElement::new(TruncSeries::from_coeffs(p, k, &[0, 1, 1]))?;
        let r = g.nottingham_check(&f)?;
        println!("  T -> T + T^2: automorphism {}", r.holds());
        let inner = g.inner_conjugator_search(&MatrixMap::Substitution(f))?;
        println!("  conjugator: {}", if inner.is_some() { "found" } else { "none" });

        if let Some(a) = find_substitution_of_order(p, k, p as u64) {
            let s = g.semidirect_stage(std::slice::from_ref(&a))?;
            println!(
                "  order-{p} substitution {:?}: semidirect order {}",
                a.f.coeffs,
                s.group.order()
            );
        }
        println!("  {:.2?}", t.elapsed());
    }
    Ok(())
}
