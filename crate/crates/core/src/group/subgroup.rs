use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::FinGroup;

/// A subgroup of an enumerated group: sorted element indices, a membership
/// bitset and a generating set. Equality and ordering use the element set
/// only; canonical order is by size, then element list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    elems: Vec<u32>,
    bits: FixedBitSet,
    gens: Vec<u32>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}
impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elems.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> Ordering {
        self.elems
            .len()
            .cmp(&other.elems.len())
            .then_with(|| self.elems.cmp(&other.elems))
    }
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Subgroup", 2)?;
        st.serialize_field("order", &self.elems.len())?;
        st.serialize_field("elements", &self.elems)?;
        st.end()
    }
}

/// Serialized subgroup: parent digest plus element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupDescriptor {
    pub parent: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<u32>>,
}

impl Subgroup {
    fn from_bits(bits: FixedBitSet, gens: Vec<u32>) -> Self {
        let elems = bits.ones().map(|i| i as u32).collect();
        Subgroup { elems, bits, gens }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }

    pub fn is_trivial(&self) -> bool {
        self.elems.len() == 1
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_proper_subset(&self, other: &Subgroup) -> bool {
        self.order() < other.order() && self.is_subset(other)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn descriptor(&self, parent: &FinGroup) -> SubgroupDescriptor {
        SubgroupDescriptor {
            parent: parent.digest().to_string(),
            elements: Some(self.elems.clone()),
            generators: None,
        }
    }
}

impl FinGroup {
    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(0);
        Subgroup::from_bits(bits, Vec::new())
    }

    pub fn whole(&self) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert_range(..);
        Subgroup::from_bits(bits, self.generators().to_vec())
    }

    /// `<gens>` by breadth-first right multiplication.
    pub fn closure(&self, gens: &[u32]) -> Subgroup {
        let gens: Vec<u32> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut bits = FixedBitSet::with_capacity(self.order());
        bits.insert(0);
        let mut list = vec![0u32];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &s in &gens {
                let y = self.mul(x, s);
                if !bits.put(y as usize) {
                    list.push(y);
                }
            }
            i += 1;
        }
        Subgroup::from_bits(bits, gens)
    }

    /// `<h, g>`, reusing the elements of `h`.
    pub fn extend(&self, h: &Subgroup, g: u32) -> Subgroup {
        if h.contains(g) {
            return h.clone();
        }
        let mut gens = h.gens.clone();
        gens.push(g);
        let mut bits = h.bits.clone();
        let mut list: Vec<u32> = h.elems.clone();
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &s in &gens {
                let y = self.mul(x, s);
                if !bits.put(y as usize) {
                    list.push(y);
                }
            }
            i += 1;
        }
        Subgroup::from_bits(bits, gens)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        if b.is_subset(a) {
            return a.clone();
        }
        if a.is_subset(b) {
            return b.clone();
        }
        let mut h = a.clone();
        for &g in &b.gens {
            h = self.extend(&h, g);
        }
        h
    }

    /// Subgroup from a known element set, with a greedy generating set.
    pub fn subgroup_from_elements(&self, elems: &[u32]) -> Subgroup {
        let mut h = self.trivial_subgroup();
        for &x in elems {
            if !h.contains(x) {
                h = self.extend(&h, x);
            }
        }
        debug_assert_eq!(h.order(), elems.len());
        h
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        if a.is_subset(b) {
            return a.clone();
        }
        if b.is_subset(a) {
            return b.clone();
        }
        let mut bits = a.bits.clone();
        bits.intersect_with(&b.bits);
        let elems: Vec<u32> = bits.ones().map(|i| i as u32).collect();
        self.subgroup_from_elements(&elems)
    }

    /// `A B` for subgroups whose product is a subgroup (one normalizes
    /// the other).
    pub fn product(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.join(a, b)
    }

    /// Closed under multiplication and inverses on the element set.
    pub fn is_subgroup_set(&self, elems: &[u32]) -> bool {
        let mut bits = FixedBitSet::with_capacity(self.order());
        for &x in elems {
            bits.insert(x as usize);
        }
        bits.contains(0)
            && elems.iter().all(|&x| {
                bits.contains(self.inv(x) as usize) && elems.iter().all(|&y| bits.contains(self.mul(x, y) as usize))
            })
    }

    /// Normalized by every element of `by` (checked on generators).
    pub fn normalizes(&self, by: &Subgroup, h: &Subgroup) -> bool {
        by.gens
            .iter()
            .all(|&g| h.gens.iter().all(|&x| h.contains(self.conj(x, g))))
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        let tables = self.conj_tables();
        tables.iter().all(|t| h.gens.iter().all(|&x| h.contains(t[x as usize])))
    }

    /// Smallest subgroup containing `seeds` and normalized by `within`.
    pub fn normal_closure_in(&self, seeds: &[u32], within: &Subgroup) -> Subgroup {
        let mut h = self.trivial_subgroup();
        let mut queue: Vec<u32> = seeds.to_vec();
        while let Some(x) = queue.pop() {
            if !h.contains(x) {
                h = self.extend(&h, x);
                for &g in &within.gens {
                    queue.push(self.conj(x, g));
                }
            }
        }
        h
    }

    pub fn normal_closure(&self, seeds: &[u32]) -> Subgroup {
        self.normal_closure_in(seeds, &self.whole())
    }

    /// `[A, B]`: commutators of generators, closed under conjugation by
    /// `<A, B>`.
    pub fn commutator(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut seeds = Vec::new();
        for &x in &a.gens {
            for &y in &b.gens {
                let c = self.comm(x, y);
                if c != 0 {
                    seeds.push(c);
                }
            }
        }
        let ab = self.join(a, b);
        self.normal_closure_in(&seeds, &ab)
    }

    /// `[A, B]` from every pair of elements; an oracle for small groups.
    pub fn commutator_brute(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut seeds = Vec::new();
        for &x in a.elements() {
            for &y in b.elements() {
                seeds.push(self.comm(x, y));
            }
        }
        seeds.sort_unstable();
        seeds.dedup();
        self.closure(&seeds)
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: u32) -> Subgroup {
        let elems: Vec<u32> = {
            let mut v: Vec<u32> = h.elements().iter().map(|&x| self.conj(x, g)).collect();
            v.sort_unstable();
            v
        };
        let gens: Vec<u32> = h.gens.iter().map(|&x| self.conj(x, g)).collect();
        let mut bits = FixedBitSet::with_capacity(self.order());
        for &x in &elems {
            bits.insert(x as usize);
        }
        Subgroup { elems, bits, gens }
    }

    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        let elems: Vec<u32> = (0..self.order() as u32)
            .filter(|&x| h.gens.iter().all(|&y| self.mul(x, y) == self.mul(y, x)))
            .collect();
        self.subgroup_from_elements(&elems)
    }

    pub fn centre(&self) -> Subgroup {
        self.centralizer(&self.whole())
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let elems: Vec<u32> = (0..self.order() as u32)
            .filter(|&g| h.gens.iter().all(|&x| h.contains(self.conj(x, g))))
            .collect();
        self.subgroup_from_elements(&elems)
    }

    /// Conjugacy classes, each sorted, ordered by smallest element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<u32>> {
        let tables = self.conj_tables();
        let mut seen = FixedBitSet::with_capacity(self.order());
        let mut out = Vec::new();
        for x in 0..self.order() as u32 {
            if seen.contains(x as usize) {
                continue;
            }
            seen.insert(x as usize);
            let mut class = vec![x];
            let mut i = 0;
            while i < class.len() {
                let y = class[i];
                for t in tables {
                    let z = t[y as usize];
                    if !seen.put(z as usize) {
                        class.push(z);
                    }
                }
                i += 1;
            }
            class.sort_unstable();
            out.push(class);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::group::corpus;

    #[test]
    fn derived_subgroup_of_s4_is_a4() {
        let g = corpus::enumerate("S4").group;
        let all = g.whole();
        let d = g.commutator(&all, &all);
        assert_eq!(d.order(), 12);
        assert_eq!(d, g.commutator_brute(&all, &all));
    }

    #[test]
    fn abelian_commutator_is_trivial() {
        let g = corpus::enumerate("C6").group;
        assert!(g.commutator(&g.whole(), &g.whole()).is_trivial());
    }

    #[test]
    fn klein_commutator_with_s4() {
        let g = corpus::enumerate("S4").group;
        let classes = g.conjugacy_classes();
        // the class of double transpositions has size 3
        let dt = classes.iter().find(|c| c.len() == 3).unwrap();
        let v4 = g.normal_closure(&[dt[0]]);
        assert_eq!(v4.order(), 4);
        let c = g.commutator(&v4, &g.whole());
        assert_eq!(c, v4);
        assert_eq!(c, g.commutator_brute(&v4, &g.whole()));
    }

    #[test]
    fn class_equation() {
        let g = corpus::enumerate("A5").group;
        let mut sizes: Vec<usize> = g.conjugacy_classes().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
    }

    #[test]
    fn intersection_and_join() {
        let g = corpus::enumerate("S4").group;
        let a = g.closure(&[1]);
        let b = g.closure(&[2]);
        let j = g.join(&a, &b);
        let i = g.intersection(&a, &b);
        assert!(a.is_subset(&j) && b.is_subset(&j));
        assert!(i.is_subset(&a) && i.is_subset(&b));
        assert!(g.is_subgroup_set(j.elements()));
    }
}
