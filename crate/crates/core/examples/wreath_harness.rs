//! Exhaustive wreath-product checks over small top groups.

use std::time::Instant;

use jnnf::group::corpus;
use jnnf::perm::{PermGroup, Permutation};
use jnnf::wreath::{
    normal_closure_battery, outer_certificate, product_action_verify, Automorphism, CoordinatePsi, HarnessWreath,
    OuterVerdict, PRODUCT_DEGREE_BOUND,
};

fn main() -> jnnf::Result<()> {
    let a5 = corpus::perm_group("A5").unwrap();
    let c2 = PermGroup::from_cycles(2, &[vec![vec![0, 1]]])?;
    let s3 = corpus::perm_group("S3").unwrap();

    for (name, h) in [("C2", &c2), ("S3", &s3)] {
        let t = Instant::now();
        let r = normal_closure_battery(&a5, h)?;
        println!("A5 wr {name}: order {}, holds {}", r.w_order, r.holds);
        for c in &r.checks {
            println!(
                "  |L| = {}: {} classes, {} outside the base, {} failures",
                c.l_order,
                c.classes,
                c.reps_outside_base,
                c.failures.len()
            );
        }
        println!("  {:.2?}", t.elapsed());
    }

    let t = Instant::now();
    let r = product_action_verify(&a5, &c2, PRODUCT_DEGREE_BOUND)?;
    println!("product action of A5 wr C2: {r:?} ({:.2?})", t.elapsed());

    let w = HarnessWreath::new(&a5, &s3)?;
    let swap = Permutation::from_cycles(5, &[vec![0, 1]])?;
    let psi = CoordinatePsi {
        phi: Automorphism::conjugation(&w.x_elems, &swap)?,
    };
    match outer_certificate(&w, &psi) {
        OuterVerdict::Certificate(c) => println!("outer: {} maps to {}", c.entry, c.image),
        OuterVerdict::Inconclusive => println!("inconclusive"),
    }
    Ok(())
}
