use crate::error::{Error, Result};
use crate::group::{Enumerated, FinGroup};
use crate::perm::Permutation;

/// An automorphism of an enumerated group as a table on element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    table: Vec<u32>,
}

impl Automorphism {
    pub fn identity(g: &FinGroup) -> Self {
        Automorphism {
            table: (0..g.order() as u32).collect(),
        }
    }

    /// Checks bijectivity and the homomorphism law on all pairs.
    pub fn from_table(g: &FinGroup, table: Vec<u32>) -> Result<Self> {
        let n = g.order();
        if table.len() != n {
            return Err(Error::Precondition("automorphism table has the wrong length".into()));
        }
        let mut seen = vec![false; n];
        for &y in &table {
            if y as usize >= n || std::mem::replace(&mut seen[y as usize], true) {
                return Err(Error::Precondition("automorphism table is not a bijection".into()));
            }
        }
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if table[g.mul(a, b) as usize] != g.mul(table[a as usize], table[b as usize]) {
                    return Err(Error::Precondition(format!(
                        "automorphism table breaks the product of {a} and {b}"
                    )));
                }
            }
        }
        Ok(Automorphism { table })
    }

    /// `x -> s^-1 x s` for a permutation `s` normalizing the group.
    pub fn conjugation(x: &Enumerated<Permutation>, s: &Permutation) -> Result<Self> {
        let table = x
            .elems
            .iter()
            .map(|e| {
                x.index_of(&e.conjugate_by(s))
                    .ok_or_else(|| Error::Precondition("conjugating element does not normalize".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        Self::from_table(&x.group, table)
    }

    /// Inner automorphism by the element with index `g`.
    pub fn inner(x: &FinGroup, g: u32) -> Self {
        Automorphism {
            table: (0..x.order() as u32).map(|a| x.conj(a, g)).collect(),
        }
    }

    pub fn apply(&self, a: u32) -> u32 {
        self.table[a as usize]
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            table: self.table.iter().map(|&x| other.table[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut table = vec![0; self.table.len()];
        for (i, &x) in self.table.iter().enumerate() {
            table[x as usize] = i as u32;
        }
        Automorphism { table }
    }

    /// Searches for `g` with `self = conj by g`.
    pub fn is_inner(&self, x: &FinGroup) -> bool {
        (0..x.order() as u32).any(|g| x.generators().iter().all(|&s| self.apply(s) == x.conj(s, g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    #[test]
    fn transposition_is_outer_on_a5() {
        let a5 = corpus::enumerate("A5");
        let t = Permutation::from_cycles(5, &[vec![0, 1]]).unwrap();
        let phi = Automorphism::conjugation(&a5, &t).unwrap();
        assert!(!phi.is_inner(&a5.group));
        assert!(phi.then(&phi).is_identity());
        let inner = Automorphism::inner(&a5.group, 5);
        assert!(inner.is_inner(&a5.group));
        assert!(Automorphism::from_table(&a5.group, inner.table().to_vec()).is_ok());
    }

    #[test]
    fn rejects_non_homomorphism() {
        let s3 = corpus::enumerate("S3").group;
        assert!(Automorphism::from_table(&s3, vec![0, 2, 1, 3, 4, 5]).is_err());
        assert!(Automorphism::from_table(&s3, vec![0, 0, 1, 3, 4, 5]).is_err());
    }
}
