use serde::Serialize;

/// A monomial linear map over `F_q`: basis vector `i` goes to
/// `coef[i] * e_{perm[i]}`. Maps act on the right.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Monomial {
    pub perm: Vec<u32>,
    pub coef: Vec<u32>,
    #[serde(skip)]
    pub q: u32,
}

impl Monomial {
    pub fn identity(dim: usize, q: u32) -> Self {
        Monomial {
            perm: (0..dim as u32).collect(),
            coef: vec![1; dim],
            q,
        }
    }

    pub fn scalar(dim: usize, q: u32, s: u32) -> Self {
        Monomial {
            perm: (0..dim as u32).collect(),
            coef: vec![s % q; dim],
            q,
        }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Monomial) -> Monomial {
        let q = self.q as u64;
        let (perm, coef) = self
            .perm
            .iter()
            .zip(&self.coef)
            .map(|(&p, &c)| {
                (
                    other.perm[p as usize],
                    (c as u64 * other.coef[p as usize] as u64 % q) as u32,
                )
            })
            .unzip();
        Monomial { perm, coef, q: self.q }
    }

    pub fn inverse(&self) -> Monomial {
        let q = self.q as u64;
        let mut perm = vec![0; self.dim()];
        let mut coef = vec![0; self.dim()];
        for (i, (&p, &c)) in self.perm.iter().zip(&self.coef).enumerate() {
            perm[p as usize] = i as u32;
            coef[p as usize] = pow_mod(c as u64, q - 2, q) as u32;
        }
        Monomial { perm, coef, q: self.q }
    }

    /// `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Monomial) -> Monomial {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Monomial) -> Monomial {
        g.inverse().then(self).then(g)
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i as u32 == p) && self.coef.iter().all(|&c| c == 1)
    }

    /// Restriction to the span of `basis`, relabelled in the given order.
    pub fn restrict(&self, basis: &[u32], index: impl Fn(u32) -> Option<u32>) -> Option<Monomial> {
        let mut perm = Vec::with_capacity(basis.len());
        let mut coef = Vec::with_capacity(basis.len());
        for &b in basis {
            perm.push(index(self.perm[b as usize])?);
            coef.push(self.coef[b as usize]);
        }
        Some(Monomial { perm, coef, q: self.q })
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_commutator() {
        let m = Monomial {
            perm: vec![1, 2, 0],
            coef: vec![2, 3, 4],
            q: 7,
        };
        assert!(m.then(&m.inverse()).is_identity());
        let s = Monomial::scalar(3, 7, 2);
        assert!(m.commutator(&s).is_identity());
        assert_eq!(pow_mod(3, 6, 7), 1);
    }
}
