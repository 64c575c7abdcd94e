use serde::{Deserialize, Serialize};

use crate::error::{pre, Error, Result};

/// An element of `F_p[[T]] / (T^k)`, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TruncSeries {
    pub p: u32,
    pub coeffs: Vec<u32>,
}

impl TruncSeries {
    pub fn zero(p: u32, k: usize) -> Self {
        TruncSeries { p, coeffs: vec![0; k] }
    }

    pub fn constant(p: u32, k: usize, c: u32) -> Self {
        let mut s = Self::zero(p, k);
        if k > 0 {
            s.coeffs[0] = c % p;
        }
        s
    }

    pub fn one(p: u32, k: usize) -> Self {
        Self::constant(p, k, 1)
    }

    /// `T`.
    pub fn t(p: u32, k: usize) -> Self {
        Self::from_coeffs(p, k, &[0, 1])
    }

    /// Truncates or zero-pads `c` to length `k`, reducing mod `p`.
    pub fn from_coeffs(p: u32, k: usize, c: &[u32]) -> Self {
        let mut s = Self::zero(p, k);
        for (i, &x) in c.iter().take(k).enumerate() {
            s.coeffs[i] = x % p;
        }
        s
    }

    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|&c| c != 0)
    }

    /// Index of the first non-zero coefficient, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    fn same(&self, o: &Self) {
        assert!(self.p == o.p && self.level() == o.level(), "series of different rings");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same(o);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| (a + b) % self.p)
            .collect();
        TruncSeries { p: self.p, coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| (self.p - a) % self.p).collect();
        TruncSeries { p: self.p, coeffs }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same(o);
        let k = self.level();
        let mut out = vec![0u32; k];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().take(k - i).enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        TruncSeries { p: self.p, coeffs: out }
    }

    pub fn scale(&self, c: u32) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| a * (c % self.p) % self.p).collect();
        TruncSeries { p: self.p, coeffs }
    }

    pub fn inverse(&self) -> Result<Self> {
        pre(self.is_unit(), || "series is not a unit".into())?;
        let (p, k) = (self.p, self.level());
        let a0inv = inv_mod(self.coeffs[0], p);
        let mut out = vec![0u32; k];
        out[0] = a0inv;
        for n in 1..k {
            let mut s = 0;
            for i in 1..=n {
                s = (s + self.coeffs[i] * out[n - i]) % p;
            }
            out[n] = (p - s) % p * a0inv % p;
        }
        Ok(TruncSeries { p, coeffs: out })
    }

    /// `self(f(T))`; `f` must have zero constant term.
    pub fn substitute(&self, f: &Self) -> Self {
        self.same(f);
        assert!(
            f.coeffs.first().is_none_or(|&c| c == 0),
            "substituted series must lie in the maximal ideal"
        );
        let k = self.level();
        let mut out = Self::zero(self.p, k);
        let mut power = Self::one(self.p, k);
        for &c in &self.coeffs {
            if c != 0 {
                out = out.add(&power.scale(c));
            }
            power = power.mul(f);
        }
        out
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    crate::construction::pow_mod(a as u64, p as u64 - 2, p as u64) as u32
}

/// An `n x n` matrix over `F_p[[T]] / (T^k)`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TruncMatrix {
    pub n: usize,
    pub entries: Vec<TruncSeries>,
}

impl TruncMatrix {
    pub fn identity(n: usize, p: u32, k: usize) -> Self {
        let entries = (0..n * n)
            .map(|i| {
                if i / n == i % n {
                    TruncSeries::one(p, k)
                } else {
                    TruncSeries::zero(p, k)
                }
            })
            .collect();
        TruncMatrix { n, entries }
    }

    pub fn p(&self) -> u32 {
        self.entries[0].p
    }

    pub fn level(&self) -> usize {
        self.entries[0].level()
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncSeries {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: TruncSeries) {
        self.entries[i * self.n + j] = s;
    }

    /// `I + s e_ij`.
    pub fn elementary(n: usize, i: usize, j: usize, s: TruncSeries) -> Self {
        let mut m = Self::identity(n, s.p, s.level());
        let e = m.get(i, j).add(&s);
        m.set(i, j, e);
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "matrix sizes differ");
        let (n, p, k) = (self.n, self.p(), self.level());
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut s = TruncSeries::zero(p, k);
                for l in 0..n {
                    s = s.add(&self.get(i, l).mul(o.get(l, j)));
                }
                entries.push(s);
            }
        }
        TruncMatrix { n, entries }
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        let entries = (0..n * n)
            .filter(|&i| i / n != row && i % n != col)
            .map(|i| self.entries[i].clone())
            .collect();
        TruncMatrix { n: n - 1, entries }
    }

    /// Laplace expansion along the first row.
    pub fn det(&self) -> TruncSeries {
        let (p, k) = (self.p(), self.level());
        match self.n {
            1 => self.entries[0].clone(),
            2 => self
                .get(0, 0)
                .mul(self.get(1, 1))
                .sub(&self.get(0, 1).mul(self.get(1, 0))),
            n => (0..n).fold(TruncSeries::zero(p, k), |acc, j| {
                let term = self.get(0, j).mul(&self.minor(0, j).det());
                if j % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                }
            }),
        }
    }

    /// Adjugate over the determinant.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let dinv = self.det().inverse()?;
        if n == 1 {
            return Ok(TruncMatrix { n, entries: vec![dinv] });
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(j, i).det().mul(&dinv);
                entries.push(if (i + j) % 2 == 0 { c } else { c.neg() });
            }
        }
        Ok(TruncMatrix { n, entries })
    }

    /// `self == I` modulo `T^j`.
    pub fn congruent_to_identity(&self, j: usize) -> bool {
        let n = self.n;
        self.entries.iter().enumerate().all(|(i, s)| {
            let want = (i / n == i % n) as u32;
            s.coeffs
                .iter()
                .take(j)
                .enumerate()
                .all(|(d, &c)| c == if d == 0 { want } else { 0 })
        })
    }

    /// Entrywise substitution `T -> f`.
    pub fn substitute(&self, f: &TruncSeries) -> Self {
        TruncMatrix {
            n: self.n,
            entries: self.entries.iter().map(|s| s.substitute(f)).collect(),
        }
    }
}

/// A substitution `T -> f` with `f = T mod T^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NottinghamElement {
    pub f: TruncSeries,
}

impl NottinghamElement {
    pub fn new(f: TruncSeries) -> Result<Self> {
        let k = f.level();
        let ok = f.coeffs.iter().enumerate().all(|(i, &c)| match i {
            0 => c == 0,
            1 => c == 1,
            _ => true,
        });
        if !ok && k >= 2 {
            return Err(Error::InvalidParams("substitution must be T modulo T^2".into()));
        }
        if k < 2 && !f.is_zero() {
            return Err(Error::InvalidParams(
                "substitution must lie in the maximal ideal".into(),
            ));
        }
        Ok(NottinghamElement { f })
    }

    pub fn identity(p: u32, k: usize) -> Self {
        NottinghamElement {
            f: TruncSeries::t(p, k),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.f == TruncSeries::t(self.f.p, self.f.level())
    }

    /// Applying `self` and then `other` (right action): `T -> f(g(T))`.
    pub fn then(&self, other: &Self) -> Self {
        NottinghamElement {
            f: self.f.substitute(&other.f),
        }
    }

    pub fn inverse(&self) -> Self {
        let t = TruncSeries::t(self.f.p, self.f.level());
        let mut h = t.clone();
        for _ in 0..self.f.level() {
            h = h.sub(&self.f.substitute(&h).sub(&t));
        }
        NottinghamElement { f: h }
    }

    pub fn order(&self) -> u64 {
        let mut x = self.clone();
        let mut n = 1;
        while !x.is_identity() {
            x = x.then(self);
            n += 1;
        }
        n
    }

    pub fn apply_series(&self, s: &TruncSeries) -> TruncSeries {
        s.substitute(&self.f)
    }

    pub fn apply(&self, m: &TruncMatrix) -> TruncMatrix {
        m.substitute(&self.f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[u32]) -> TruncSeries {
        TruncSeries::from_coeffs(3, 4, c)
    }

    #[test]
    fn ring_basics() {
        let t = TruncSeries::t(3, 4);
        let t4 = t.mul(&t).mul(&t).mul(&t);
        assert!(t4.is_zero());
        let u = s(&[2, 1, 0, 1]);
        assert_eq!(u.mul(&u.inverse().unwrap()), TruncSeries::one(3, 4));
        assert!(t.inverse().is_err());
        assert_eq!(s(&[0, 0, 1]).valuation(), Some(2));
    }

    #[test]
    fn determinant_and_inverse() {
        let mut m = TruncMatrix::identity(3, 3, 4);
        m.set(0, 1, s(&[0, 1, 2]));
        m.set(2, 0, s(&[0, 0, 1]));
        m.set(1, 1, s(&[1, 1]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), TruncMatrix::identity(3, 3, 4));
        assert_eq!(m.det(), s(&[1, 1]));
    }

    #[test]
    fn substitution() {
        let f = NottinghamElement::new(s(&[0, 1, 1])).unwrap();
        let m = TruncMatrix::elementary(2, 0, 1, TruncSeries::t(3, 4));
        assert_eq!(f.apply(&m), TruncMatrix::elementary(2, 0, 1, s(&[0, 1, 1])));
        assert_eq!(NottinghamElement::identity(3, 4).apply(&m), m);
        assert!(f.then(&f.inverse()).is_identity());
        assert!(f.inverse().then(&f).is_identity());
        let g = NottinghamElement::new(s(&[0, 1, 0, 2])).unwrap();
        let u = s(&[1, 2, 0, 1]);
        assert_eq!(g.apply_series(&f.apply_series(&u)), f.then(&g).apply_series(&u));
        assert!(NottinghamElement::new(s(&[0, 2])).is_err());
    }
}
