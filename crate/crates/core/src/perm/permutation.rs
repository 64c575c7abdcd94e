use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, .., degree-1}` stored as its image array.
///
/// Maps act on the right: `x^(a*b) = (x^a)^b`. Ordering is lexicographic on
/// the image array, which is what canonical subgroup listings sort by.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from an image array, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "image array {images:?} is not a bijection"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let x = x as usize;
                if x >= degree || touched[x] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle list {cycles:?} is not disjoint on degree {degree}"
                    )));
                }
                touched[x] = true;
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self * other`: apply `self` first, then `other`.
    pub fn multiply(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.mul(other))
    }

    /// Unchecked product; panics on degree mismatch.
    pub fn mul(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    /// Writes `self * other` into `out` without allocating.
    #[inline]
    pub fn mul_into(&self, other: &Permutation, out: &mut Vec<u32>) {
        out.clear();
        out.extend(self.images.iter().map(|&x| other.images[x as usize]));
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `other^-1 * self * other`.
    pub fn conjugate_by(&self, other: &Permutation) -> Permutation {
        // x -> x^(g^-1 a g): image of x^g is (x^a)^g
        let mut images = vec![0u32; self.images.len()];
        for (x, &ax) in self.images.iter().enumerate() {
            images[other.images[x] as usize] = other.images[ax as usize];
        }
        Permutation { images }
    }

    /// `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.degree()];
        let mut ord: u64 = 1;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }

    /// Disjoint cycles of length > 1, each starting at its smallest point,
    /// listed by smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Smallest point not fixed, if any.
    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    /// Restriction to an invariant point set, relabelled `0..points.len()`
    /// in the order given.
    pub fn restrict(&self, points: &[u32]) -> Permutation {
        let mut pos = vec![u32::MAX; self.degree()];
        for (i, &p) in points.iter().enumerate() {
            pos[p as usize] = i as u32;
        }
        Permutation {
            images: points
                .iter()
                .map(|&p| {
                    let q = pos[self.images[p as usize] as usize];
                    debug_assert!(q != u32::MAX, "point set not invariant");
                    q
                })
                .collect(),
        }
    }

    /// Extends to a larger degree by fixing the new points.
    pub fn extend(&self, degree: usize) -> Permutation {
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Permutation { images }
    }

    /// Shifts the support by `offset` inside a permutation of `degree`.
    pub fn shifted(&self, offset: usize, degree: usize) -> Permutation {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[i + offset] = x + offset as u32;
        }
        Permutation { images }
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(deg: usize, cycles: &[&[u32]]) -> Permutation {
        let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(deg, &cycles).unwrap()
    }

    #[test]
    fn multiply_composes_left_to_right() {
        // hand oracle: 0 -> 1 -> 0, 1 -> 2 -> 2, 2 -> 0 -> 1
        let a = p(3, &[&[0, 1, 2]]);
        let b = p(3, &[&[0, 1]]);
        assert_eq!(a.multiply(&b).unwrap(), p(3, &[&[1, 2]]));
    }

    #[test]
    fn inverse_and_identity() {
        let a = p(5, &[&[0, 3, 1], &[2, 4]]);
        assert!(a.mul(&a.inverse()).is_identity());
        let e = Permutation::identity(5);
        assert_eq!(e.mul(&a), a);
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert!(matches!(a.multiply(&b), Err(Error::DegreeMismatch(3, 4))));
    }

    #[test]
    fn conjugation_matches_definition() {
        let a = p(4, &[&[0, 1]]);
        let g = p(4, &[&[0, 2, 3]]);
        assert_eq!(a.conjugate_by(&g), g.inverse().mul(&a).mul(&g));
        assert_eq!(a.conjugate_by(&g), p(4, &[&[1, 2]]));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn order_and_display() {
        let a = p(6, &[&[0, 1, 2], &[3, 4]]);
        assert_eq!(a.order(), 6);
        assert_eq!(a.to_string(), "(0 1 2)(3 4)");
        assert_eq!(Permutation::identity(2).to_string(), "()");
    }
}
