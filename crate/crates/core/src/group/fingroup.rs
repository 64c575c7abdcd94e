use std::collections::VecDeque;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, OnceLock};

use rustc_hash::FxHashMap;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::Subgroup;
use crate::error::{bound_check, Result};

/// Default cap on enumerated group orders.
pub const ENUMERATION_BOUND: usize = 2_000_000;
/// Cap on orders for which whole normal lattices are computed.
pub const LATTICE_BOUND: usize = 100_000;
const TABLE_LIMIT: usize = 1 << 23;

/// Uniform interface to a concrete group backend.
pub trait FiniteGroup {
    type Elem: Clone + Eq + Hash + Ord + Debug + Serialize;
    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, a: &Self::Elem) -> Self::Elem;
    fn generators(&self) -> Vec<Self::Elem>;
}

/// An enumerated finite group on indices `0..order`, identity at 0.
///
/// Non-identity elements are indexed in the backend's element order, so
/// indices and subgroup listings are canonical.
#[derive(Clone)]
pub struct FinGroup {
    n: usize,
    gens: Vec<u32>,
    inv: Vec<u32>,
    right: Vec<Vec<u32>>,
    word_parent: Vec<u32>,
    word_gen: Vec<u32>,
    table: Option<Arc<Vec<u32>>>,
    conj: Arc<OnceLock<Vec<Vec<u32>>>>,
    normals: Arc<OnceLock<Vec<Subgroup>>>,
    digest: String,
}

impl std::fmt::Debug for FinGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FinGroup(order {}, {} gens)", self.n, self.gens.len())
    }
}

/// A [`FinGroup`] together with the backend elements behind its indices.
#[derive(Clone, Debug)]
pub struct Enumerated<E> {
    pub group: FinGroup,
    pub elems: Arc<Vec<E>>,
    index: Arc<FxHashMap<E, u32>>,
}

impl<E: Clone + Eq + Hash> Enumerated<E> {
    pub fn index_of(&self, e: &E) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn elem(&self, i: u32) -> &E {
        &self.elems[i as usize]
    }
}

impl FinGroup {
    /// Enumerates `<generators>` of a backend, refusing orders above `bound`.
    pub fn enumerate<B: FiniteGroup>(backend: &B, bound: usize) -> Result<Enumerated<B::Elem>> {
        let id = backend.identity();
        let gens = backend.generators();
        let mut found: Vec<B::Elem> = vec![id.clone()];
        let mut parent: Vec<(u32, u32)> = vec![(u32::MAX, u32::MAX)];
        let mut index: FxHashMap<B::Elem, u32> = FxHashMap::default();
        index.insert(id, 0);
        let mut i = 0;
        while i < found.len() {
            for (gi, s) in gens.iter().enumerate() {
                let y = backend.multiply(&found[i], s);
                if !index.contains_key(&y) {
                    index.insert(y.clone(), found.len() as u32);
                    found.push(y);
                    parent.push((i as u32, gi as u32));
                    bound_check("group order", found.len() as u128, bound as u128)?;
                }
            }
            i += 1;
        }
        let n = found.len();
        // canonical relabelling: identity first, then backend order
        let mut order: Vec<u32> = (1..n as u32).collect();
        order.sort_by(|&a, &b| found[a as usize].cmp(&found[b as usize]));
        order.insert(0, 0);
        let mut relabel = vec![0u32; n];
        for (new, &old) in order.iter().enumerate() {
            relabel[old as usize] = new as u32;
        }
        let elems: Vec<B::Elem> = order.iter().map(|&o| found[o as usize].clone()).collect();
        for v in index.values_mut() {
            *v = relabel[*v as usize];
        }
        let mut word_parent = vec![u32::MAX; n];
        let mut word_gen = vec![u32::MAX; n];
        for old in 1..n {
            let (p, g) = parent[old];
            word_parent[relabel[old] as usize] = relabel[p as usize];
            word_gen[relabel[old] as usize] = g;
        }
        let right: Vec<Vec<u32>> = gens
            .iter()
            .map(|s| elems.iter().map(|x| index[&backend.multiply(x, s)]).collect())
            .collect();
        let inv: Vec<u32> = elems.iter().map(|x| index[&backend.invert(x)]).collect();
        let gen_idx: Vec<u32> = gens.iter().map(|s| index[s]).collect();
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(&elems).expect("elements serialize"));
        let digest = hex::encode(hasher.finalize());
        let mut g = FinGroup {
            n,
            gens: gen_idx,
            inv,
            right,
            word_parent,
            word_gen,
            table: None,
            conj: Arc::new(OnceLock::new()),
            normals: Arc::new(OnceLock::new()),
            digest,
        };
        g.build_table(&relabel);
        Ok(Enumerated {
            group: g,
            elems: Arc::new(elems),
            index: Arc::new(index),
        })
    }

    /// Fills the Cayley table column by column along the BFS tree:
    /// `x * (y s) = (x * y) s`.
    fn build_table(&mut self, relabel: &[u32]) {
        let n = self.n;
        if n * n > TABLE_LIMIT {
            return;
        }
        let mut t = vec![0u32; n * n];
        for x in 0..n {
            t[x * n] = x as u32;
        }
        // discovery order guarantees parents are filled first
        for &j in relabel.iter().skip(1) {
            let j = j as usize;
            let p = self.word_parent[j] as usize;
            let r = &self.right[self.word_gen[j] as usize];
            for x in 0..n {
                t[x * n + j] = r[t[x * n + p] as usize];
            }
        }
        self.table = Some(Arc::new(t));
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// Right multiplication by the `gi`-th generator.
    #[inline]
    pub fn mul_gen(&self, a: u32, gi: usize) -> u32 {
        self.right[gi][a as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if let Some(t) = &self.table {
            return t[a as usize * self.n + b as usize];
        }
        let mut word = Vec::new();
        let mut j = b;
        while j != 0 {
            word.push(self.word_gen[j as usize]);
            j = self.word_parent[j as usize];
        }
        let mut x = a;
        for &g in word.iter().rev() {
            x = self.right[g as usize][x as usize];
        }
        x
    }

    /// `b^-1 a b`.
    pub fn conj(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(b), a), b)
    }

    /// `a^-1 b^-1 a b`.
    pub fn comm(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn elem_order(&self, a: u32) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Conjugation tables `x -> s^-1 x s`, one per generator.
    pub fn conj_tables(&self) -> &[Vec<u32>] {
        self.conj.get_or_init(|| {
            self.gens
                .iter()
                .map(|&s| (0..self.n as u32).map(|x| self.conj(x, s)).collect())
                .collect()
        })
    }

    pub(crate) fn cached_normals(&self) -> &OnceLock<Vec<Subgroup>> {
        &self.normals
    }

    pub fn is_abelian(&self) -> bool {
        self.gens
            .iter()
            .all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Breadth-first element list, independent of the Cayley table; used
    /// by self-checks.
    pub fn bfs_elements(&self) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut q = VecDeque::from([0u32]);
        let mut out = vec![0];
        while let Some(x) = q.pop_front() {
            for gi in 0..self.gens.len() {
                let y = self.mul_gen(x, gi);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                    q.push_back(y);
                }
            }
        }
        out
    }
}

impl FiniteGroup for crate::perm::PermGroup {
    type Elem = crate::perm::Permutation;

    fn identity(&self) -> Self::Elem {
        crate::perm::Permutation::identity(self.degree())
    }

    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(b)
    }

    fn invert(&self, a: &Self::Elem) -> Self::Elem {
        a.inverse()
    }

    fn generators(&self) -> Vec<Self::Elem> {
        crate::perm::PermGroup::generators(self).to_vec()
    }
}

/// A subgroup of an enumerated group, viewed as a group on parent indices.
pub struct SubgroupBackend<'a> {
    pub parent: &'a FinGroup,
    pub gens: Vec<u32>,
}

impl FiniteGroup for SubgroupBackend<'_> {
    type Elem = u32;
    fn identity(&self) -> u32 {
        0
    }
    fn multiply(&self, a: &u32, b: &u32) -> u32 {
        self.parent.mul(*a, *b)
    }
    fn invert(&self, a: &u32) -> u32 {
        self.parent.inv(*a)
    }
    fn generators(&self) -> Vec<u32> {
        self.gens.clone()
    }
}

/// `G/N` on coset representatives (smallest index in each coset).
pub struct QuotientBackend<'a> {
    pub parent: &'a FinGroup,
    pub coset_rep: Vec<u32>,
}

impl<'a> QuotientBackend<'a> {
    pub fn new(parent: &'a FinGroup, normal: &Subgroup) -> Self {
        let mut coset_rep = vec![u32::MAX; parent.order()];
        for x in 0..parent.order() as u32 {
            if coset_rep[x as usize] == u32::MAX {
                for &k in normal.elements() {
                    coset_rep[parent.mul(k, x) as usize] = x;
                }
            }
        }
        QuotientBackend { parent, coset_rep }
    }
}

impl FiniteGroup for QuotientBackend<'_> {
    type Elem = u32;
    fn identity(&self) -> u32 {
        0
    }
    fn multiply(&self, a: &u32, b: &u32) -> u32 {
        self.coset_rep[self.parent.mul(*a, *b) as usize]
    }
    fn invert(&self, a: &u32) -> u32 {
        self.coset_rep[self.parent.inv(*a) as usize]
    }
    fn generators(&self) -> Vec<u32> {
        self.parent
            .generators()
            .iter()
            .map(|&g| self.coset_rep[g as usize])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{PermGroup, Permutation};

    fn s4() -> PermGroup {
        PermGroup::from_cycles(4, &[vec![vec![0, 1]], vec![vec![0, 1, 2, 3]]]).unwrap()
    }

    #[test]
    fn table_matches_backend() {
        let e = FinGroup::enumerate(&s4(), 1000).unwrap();
        let g = &e.group;
        assert_eq!(g.order(), 24);
        assert!(e.elem(0).is_identity());
        for a in 0..24 {
            for b in 0..24 {
                let want = e.elem(a).mul(e.elem(b));
                assert_eq!(e.elem(g.mul(a, b)), &want);
            }
            assert!(e.elem(g.mul(a, g.inv(a))).is_identity());
        }
    }

    #[test]
    fn word_product_matches_table() {
        let e = FinGroup::enumerate(&s4(), 1000).unwrap();
        let mut g = e.group.clone();
        let t = g.table.take().unwrap();
        for a in 0..24u32 {
            for b in 0..24u32 {
                assert_eq!(g.mul(a, b), t[a as usize * 24 + b as usize]);
            }
        }
    }

    #[test]
    fn enumeration_bound_is_enforced() {
        assert!(FinGroup::enumerate(&s4(), 10).is_err());
    }

    #[test]
    fn elements_are_sorted_after_identity() {
        let e = FinGroup::enumerate(&s4(), 1000).unwrap();
        let tail: Vec<&Permutation> = e.elems.iter().skip(1).collect();
        assert!(tail.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(e.group.bfs_elements().len(), 24);
    }
}
