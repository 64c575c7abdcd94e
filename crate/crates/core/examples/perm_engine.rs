//! Stabilizer chains, orbits, normal closures and block systems.

use jnnf::perm::{PermGroup, Permutation};

fn main() -> jnnf::Result<()> {
    let s5 = PermGroup::from_cycles(5, &[vec![vec![0, 1, 2, 3, 4]], vec![vec![0, 1]]])?;
    let chain = s5.chain();
    println!(
        "S5: order {}, base {:?}, orbit sizes {:?}",
        s5.order(),
        chain.base(),
        chain.orbit_sizes()
    );

    let g = Permutation::from_cycles(5, &[vec![0, 2, 4]])?;
    let r = chain.rank(&g).expect("g lies in S5");
    assert_eq!(chain.unrank(r), g);
    println!("rank of (0 2 4) is {r}");

    let a5 = s5.normal_closure(std::slice::from_ref(&g));
    println!("normal closure of a 3-cycle: order {}", a5.order());

    let d4 = PermGroup::from_cycles(4, &[vec![vec![0, 1, 2, 3]], vec![vec![0, 2]]])?;
    println!("D4 orbits {:?}, transitive {}", d4.orbits(), d4.is_transitive());
    println!("descriptor {}", d4.to_json());
    Ok(())
}
