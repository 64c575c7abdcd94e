use std::collections::HashSet;

use jnnf::perm::{PermGroup, Permutation};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

/// Closure by breadth-first multiplication, independent of the chain.
fn brute_order(gens: &[Permutation]) -> usize {
    let id = Permutation::identity(gens[0].degree());
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

proptest! {
    #[test]
    fn group_laws(a in perm(7), b in perm(7), c in perm(7)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_identity());
        prop_assert_eq!(a.mul(&b).inverse(), b.inverse().mul(&a.inverse()));
        prop_assert!(a.pow(a.order()).is_identity());
        prop_assert_eq!(a.commutator(&b), a.inverse().mul(&b.inverse()).mul(&a).mul(&b));
        prop_assert_eq!(a.conjugate_by(&b), b.inverse().mul(&a).mul(&b));
    }

    #[test]
    fn right_action_convention(a in perm(6), b in perm(6), x in 0u32..6) {
        prop_assert_eq!(a.mul(&b).apply(x), b.apply(a.apply(x)));
    }

    #[test]
    fn cycles_round_trip(a in perm(8)) {
        prop_assert_eq!(Permutation::from_cycles(8, &a.cycles()).unwrap(), a);
    }

    #[test]
    fn chain_order_matches_closure(a in perm(6), b in perm(6)) {
        let g = PermGroup::new(6, vec![a.clone(), b.clone()]).unwrap();
        prop_assert_eq!(g.order() as usize, brute_order(&[a.clone(), b.clone()]));
        prop_assert!(g.contains(&a.mul(&b).inverse()));
        let chain = g.chain();
        for r in [0u64, g.order() as u64 - 1, (g.order() as u64) / 2] {
            let x = chain.unrank(r);
            prop_assert_eq!(chain.rank(&x), Some(r));
        }
    }

    #[test]
    fn descriptors_round_trip(a in perm(5), b in perm(5)) {
        let g = PermGroup::new(5, vec![a, b]).unwrap();
        let h = PermGroup::from_json(&g.to_json()).unwrap();
        prop_assert_eq!(h.order(), g.order());
        prop_assert_eq!(h.generators(), g.generators());
    }

    #[test]
    fn orbits_partition_points(a in perm(9), b in perm(9)) {
        let g = PermGroup::new(9, vec![a.clone(), b.clone()]).unwrap();
        let orbits = g.orbits();
        let mut all: Vec<u32> = orbits.iter().flatten().copied().collect();
        all.sort();
        prop_assert_eq!(all, (0..9).collect::<Vec<_>>());
        for o in &orbits {
            for &x in o {
                prop_assert!(o.contains(&a.apply(x)) && o.contains(&b.apply(x)));
            }
        }
    }
}

#[test]
fn invalid_input_is_rejected() {
    assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    assert!(Permutation::from_cycles(3, &[vec![0, 5]]).is_err());
    let a = Permutation::identity(3);
    let b = Permutation::identity(4);
    assert!(a.multiply(&b).is_err());
}

#[test]
fn symmetric_group_orders() {
    for n in 2..9usize {
        let gens = vec![
            Permutation::from_cycles(n, &[(0..n as u32).collect()]).unwrap(),
            Permutation::from_cycles(n, &[vec![0, 1]]).unwrap(),
        ];
        let g = PermGroup::new(n, gens).unwrap();
        assert_eq!(g.order(), (1..=n as u128).product::<u128>());
    }
}
