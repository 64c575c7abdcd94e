use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{Permutation, StabChain};
use crate::error::{Error, Result};

/// A permutation group given by generators, with a lazily built chain.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            chain,
        }
    }
}

/// Serialized form: `{"kind":"perm","degree":n,"generators":[[cycle,...],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub kind: String,
    pub degree: usize,
    pub generators: Vec<Vec<Vec<u32>>>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    /// Builds a group and seeds its chain with a known order.
    pub fn with_known_order(degree: usize, generators: Vec<Permutation>, order: u128) -> Result<Self> {
        let g = Self::new(degree, generators)?;
        let _ = g.chain.set(StabChain::with_known_order(degree, &g.generators, order));
        Ok(g)
    }

    pub fn from_cycles(degree: usize, gens: &[Vec<Vec<u32>>]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|c| Permutation::from_cycles(degree, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::from_generators(self.degree, &self.generators))
    }

    pub fn order(&self) -> u128 {
        self.chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    pub fn orbit(&self, point: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        seen[point as usize] = true;
        let mut out = vec![point];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// Orbits as sorted point lists, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree as u32 {
            if !seen[x as usize] {
                let o = self.orbit(x);
                for &y in &o {
                    seen[y as usize] = true;
                }
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Smallest subgroup containing `seeds` normalized by every generator.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> PermGroup {
        let mut chain = StabChain::trivial(self.degree);
        let mut gens = Vec::new();
        let mut queue: VecDeque<Permutation> = seeds.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            if chain.extend(&x) {
                for g in &self.generators {
                    queue.push_back(x.conjugate_by(g));
                }
                gens.push(x);
            }
        }
        let out = PermGroup {
            degree: self.degree,
            generators: gens,
            chain: OnceLock::new(),
        };
        let _ = out.chain.set(chain);
        out
    }

    /// All elements via chain unranking; refuses orders above `bound`.
    pub fn elements(&self, bound: u128) -> Result<Vec<Permutation>> {
        let n = self.order();
        crate::error::bound_check("group order", n, bound)?;
        let c = self.chain();
        Ok((0..n as u64).map(|r| c.unrank(r)).collect())
    }

    /// Order by breadth-first closure, independent of the chain.
    pub fn closure_order(&self, bound: usize) -> Result<usize> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = x.mul(g);
                if seen.insert(y.clone()) {
                    crate::error::bound_check("closure size", seen.len() as u128, bound as u128)?;
                    queue.push_back(y);
                }
            }
        }
        Ok(seen.len())
    }

    pub fn to_descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            kind: "perm".into(),
            degree: self.degree,
            generators: self.generators.iter().map(|g| g.cycles()).collect(),
        }
    }

    pub fn from_descriptor(d: &GroupDescriptor) -> Result<Self> {
        if d.kind != "perm" {
            return Err(Error::InvalidParams(format!("unknown group kind `{}`", d.kind)));
        }
        Self::from_cycles(d.degree, &d.generators)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_descriptor()).expect("descriptor serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_descriptor(&serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(deg: usize, gens: &[&[&[u32]]]) -> PermGroup {
        let gens: Vec<Vec<Vec<u32>>> = gens.iter().map(|c| c.iter().map(|x| x.to_vec()).collect()).collect();
        PermGroup::from_cycles(deg, &gens).unwrap()
    }

    #[test]
    fn orbit_partitions() {
        let s3 = g(3, &[&[&[0, 1]], &[&[0, 1, 2]]]);
        assert_eq!(s3.orbits(), vec![vec![0, 1, 2]]);
        let k = g(4, &[&[&[0, 1], &[2, 3]]]);
        assert_eq!(k.orbits(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(PermGroup::trivial(3).orbits().len(), 3);
    }

    #[test]
    fn normal_closures_in_s4() {
        let s4 = g(4, &[&[&[0, 1]], &[&[0, 1, 2, 3]]]);
        let v4 = s4.normal_closure(&[Permutation::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap()]);
        assert_eq!(v4.order(), 4);
        assert_eq!(v4.closure_order(100).unwrap(), 4);
        let all = s4.normal_closure(&[Permutation::from_cycles(4, &[vec![0, 1]]).unwrap()]);
        assert_eq!(all.order(), 24);
        assert_eq!(s4.normal_closure(&[]).order(), 1);
    }

    #[test]
    fn descriptor_roundtrip() {
        let a5 = g(5, &[&[&[0, 1, 2, 3, 4]], &[&[2, 3, 4]]]);
        let json = a5.to_json();
        assert_eq!(
            json,
            r#"{"kind":"perm","degree":5,"generators":[[[0,1,2,3,4]],[[2,3,4]]]}"#
        );
        let back = PermGroup::from_json(&json).unwrap();
        assert_eq!(back.generators(), a5.generators());
        assert_eq!(back.order(), 60);
    }
}
