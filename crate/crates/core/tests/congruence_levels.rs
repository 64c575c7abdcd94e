use jnnf::congruence::{build_sl1, find_substitution_of_order, MatrixMap, NottinghamElement, TruncMatrix, TruncSeries};

/// Counts `2 x 2` matrices `I + T A` over `F_p[T]/(T^k)` with determinant 1
/// by running over every `A`, with the determinant written out by hand.
fn brute_sl1_order(p: u32, k: usize) -> usize {
    let free = k - 1;
    let total = (p as usize).pow(4 * free as u32);
    let mut count = 0;
    for code in 0..total {
        let mut c = code;
        let mut entries = Vec::new();
        for i in 0..4 {
            let mut coeffs = vec![u32::from(i == 0 || i == 3)];
            for _ in 0..free {
                coeffs.push((c % p as usize) as u32);
                c /= p as usize;
            }
            entries.push(TruncSeries::from_coeffs(p, k, &coeffs));
        }
        let det = entries[0].mul(&entries[3]).sub(&entries[1].mul(&entries[2]));
        if det == TruncSeries::one(p, k) {
            count += 1;
        }
    }
    count
}

#[test]
fn orders_match_brute_count() {
    for (p, k) in [(3, 2), (3, 3), (5, 2)] {
        let g = build_sl1(2, p, k).unwrap();
        let order = g.group().unwrap().order();
        assert_eq!(order, brute_sl1_order(p, k), "p={p} k={k}");
        assert_eq!(order as u128, g.order_formula);
    }
}

#[test]
fn lower_central_series_is_the_congruence_filtration() {
    let g = build_sl1(2, 3, 3).unwrap();
    let r = g.verify_lcs_equals_congruence().unwrap();
    assert!(r.holds);
    assert_eq!(r.orders, vec![(1, 729, 729), (2, 27, 27), (3, 1, 1)]);
    let graded = g.graded_check().unwrap();
    assert!(graded.holds);
}

#[test]
fn substitution_automorphism_and_conjugators() {
    let g = build_sl1(2, 3, 3).unwrap();
    let t = TruncSeries::t(3, 3);
    let f = NottinghamElement::new(t.add(&t.mul(&t))).unwrap();
    assert!(g.nottingham_check(&f).unwrap().holds());
    assert!(g
        .inner_conjugator_search(&MatrixMap::Substitution(f))
        .unwrap()
        .is_none());
    // Conjugation by an element of the group is inner by construction.
    let m = g.generators()[0].clone();
    assert!(g.inner_conjugator_search(&MatrixMap::Conjugation(m)).unwrap().is_some());
}

#[test]
fn semidirect_stage_order() {
    let g = build_sl1(2, 3, 3).unwrap();
    let a = find_substitution_of_order(3, 3, 3).unwrap();
    assert_eq!(a.order(), 3);
    let s = g.semidirect_stage(&[a]).unwrap();
    assert_eq!(s.group.order(), 729 * 3);
}

#[test]
fn invalid_parameters() {
    assert!(build_sl1(3, 3, 2).is_err());
    assert!(build_sl1(2, 4, 2).is_err());
    assert!(build_sl1(5, 7, 2).is_err());
    assert!(TruncMatrix::identity(2, 3, 3).inverse().is_ok());
}
