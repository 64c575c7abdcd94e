use jnnf::congruence::{NottinghamElement, TruncMatrix, TruncSeries};
use proptest::prelude::*;

const P: u32 = 5;
const K: usize = 6;

fn series() -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(0..P, K).prop_map(|c| TruncSeries::from_coeffs(P, K, &c))
}

fn unit() -> impl Strategy<Value = TruncSeries> {
    (1..P, prop::collection::vec(0..P, K - 1)).prop_map(|(a, mut rest)| {
        rest.insert(0, a);
        TruncSeries::from_coeffs(P, K, &rest)
    })
}

fn nottingham() -> impl Strategy<Value = NottinghamElement> {
    prop::collection::vec(0..P, K - 2).prop_map(|mut c| {
        let mut coeffs = vec![0, 1];
        coeffs.append(&mut c);
        NottinghamElement::new(TruncSeries::from_coeffs(P, K, &coeffs)).unwrap()
    })
}

/// Schoolbook product modulo `T^K`, written out here as an oracle.
fn naive_mul(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0u64; K];
    for i in 0..K {
        for j in 0..K - i {
            out[i + j] += a[i] as u64 * b[j] as u64;
        }
    }
    out.into_iter().map(|x| (x % P as u64) as u32).collect()
}

fn coeffs(s: &TruncSeries) -> Vec<u32> {
    let mut c = s.coeffs.clone();
    c.resize(K, 0);
    c
}

proptest! {
    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(coeffs(&a.mul(&b)), naive_mul(&coeffs(&a), &coeffs(&b)));
    }

    #[test]
    fn units_invert(u in unit()) {
        prop_assert_eq!(u.mul(&u.inverse().unwrap()), TruncSeries::one(P, K));
    }

    #[test]
    fn substitution_is_a_ring_map(a in series(), b in series(), f in nottingham()) {
        prop_assert_eq!(a.mul(&b).substitute(&f.f), a.substitute(&f.f).mul(&b.substitute(&f.f)));
        prop_assert_eq!(a.add(&b).substitute(&f.f), a.substitute(&f.f).add(&b.substitute(&f.f)));
    }

    #[test]
    fn nottingham_composition(f in nottingham(), g in nottingham(), s in series()) {
        prop_assert_eq!(f.then(&g).apply_series(&s), g.apply_series(&f.apply_series(&s)));
        prop_assert!(f.then(&f.inverse()).is_identity());
        prop_assert!(f.inverse().then(&f).is_identity());
        let o = f.order();
        let mut x = NottinghamElement::identity(P, K);
        for _ in 0..o {
            x = x.then(&f);
        }
        prop_assert!(x.is_identity());
    }

    #[test]
    fn determinant_is_multiplicative(a in prop::collection::vec(series(), 4), b in prop::collection::vec(series(), 4)) {
        let m = |v: &[TruncSeries]| {
            let mut x = TruncMatrix::identity(2, P, K);
            for (i, s) in v.iter().enumerate() {
                x.set(i / 2, i % 2, s.clone());
            }
            x
        };
        let (x, y) = (m(&a), m(&b));
        prop_assert_eq!(x.mul(&y).det(), x.det().mul(&y.det()));
        let ad_bc = a[0].mul(&a[3]).sub(&a[1].mul(&a[2]));
        prop_assert_eq!(x.det(), ad_bc);
    }
}

#[test]
fn nottingham_rejects_non_tangent_series() {
    assert!(NottinghamElement::new(TruncSeries::from_coeffs(P, K, &[0, 2])).is_err());
    assert!(NottinghamElement::new(TruncSeries::from_coeffs(P, K, &[1, 1])).is_err());
}
