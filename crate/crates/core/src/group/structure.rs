use std::collections::HashSet;

use super::{FinGroup, QuotientBackend, Subgroup, SubgroupBackend, ENUMERATION_BOUND, LATTICE_BOUND};
use crate::error::{bound_check, pre, Error, Result};

/// Cap on the order for which every subgroup is listed.
pub const SUBGROUP_SCAN_BOUND: usize = 5000;

/// Witness for the subprimitivity test: a normal subgroup, one of its
/// orbits, and a nontrivial element of the kernel on that orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubprimitiveFailure<E> {
    pub normal: Vec<E>,
    pub orbit: Vec<u32>,
    pub kernel_element: E,
}

/// Outcome of the chain descent in `narrow_above_chief`.
#[derive(Clone, Debug)]
pub struct NarrowWitness {
    pub narrow: Subgroup,
    pub melnikov: Subgroup,
}

fn insert_sorted(list: &mut Vec<Subgroup>, seen: &mut HashSet<Vec<u32>>, h: Subgroup) -> bool {
    if seen.insert(h.elements().to_vec()) {
        list.push(h);
        true
    } else {
        false
    }
}

impl FinGroup {
    /// All normal subgroups in canonical order: normal closures of class
    /// representatives, closed under pairwise joins.
    pub fn normal_subgroups(&self) -> Result<&[Subgroup]> {
        bound_check("lattice group order", self.order() as u128, LATTICE_BOUND as u128)?;
        Ok(self.cached_normals().get_or_init(|| {
            let mut seen = HashSet::new();
            let mut list = Vec::new();
            insert_sorted(&mut list, &mut seen, self.trivial_subgroup());
            for class in self.conjugacy_classes().iter().skip(1) {
                insert_sorted(&mut list, &mut seen, self.normal_closure(&[class[0]]));
            }
            let minimal_count = list.len();
            let mut i = 0;
            while i < list.len() {
                for j in 1..minimal_count.min(list.len()) {
                    let h = self.join(&list[i], &list[j]);
                    insert_sorted(&mut list, &mut seen, h);
                }
                i += 1;
            }
            list.sort();
            list
        }))
    }

    /// Every subgroup, as joins of cyclic subgroups. Oracle for small orders.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>> {
        self.all_subgroups_within(SUBGROUP_SCAN_BOUND)
    }

    /// [`FinGroup::all_subgroups`] with a caller-chosen order bound.
    pub fn all_subgroups_within(&self, bound: usize) -> Result<Vec<Subgroup>> {
        bound_check("subgroup scan order", self.order() as u128, bound as u128)?;
        let mut seen = HashSet::new();
        let mut cyclic = Vec::new();
        for x in 0..self.order() as u32 {
            let c = self.closure(&[x]);
            if seen.insert(c.elements().to_vec()) {
                cyclic.push(c);
            }
        }
        let mut list = cyclic.clone();
        let mut i = 0;
        while i < list.len() {
            for c in &cyclic {
                if !c.is_subset(&list[i]) {
                    let h = self.join(&list[i], c);
                    insert_sorted(&mut list, &mut seen, h);
                }
            }
            i += 1;
        }
        list.sort();
        Ok(list)
    }

    /// Normal subgroups found by filtering the full subgroup scan.
    pub fn normal_subgroups_by_scan(&self) -> Result<Vec<Subgroup>> {
        Ok(self
            .all_subgroups()?
            .into_iter()
            .filter(|h| self.is_normal_brute(h))
            .collect())
    }

    /// Normality tested against every element, not just generators.
    pub fn is_normal_brute(&self, h: &Subgroup) -> bool {
        (0..self.order() as u32).all(|g| h.elements().iter().all(|&x| h.contains(self.conj(x, g))))
    }

    /// `gamma_1, ..., gamma_depth`.
    pub fn lower_central_series(&self, depth: usize) -> Result<Vec<Subgroup>> {
        pre(depth >= 1, || "depth must be at least 1".into())?;
        let all = self.whole();
        let mut out = vec![all.clone()];
        while out.len() < depth {
            let next = self.commutator(out.last().unwrap(), &all);
            out.push(next);
        }
        Ok(out)
    }

    /// `[N, G, ..., G]` with `i` copies of `G`.
    pub fn iterated_commutator(&self, n: &Subgroup, i: usize) -> Result<Subgroup> {
        pre(self.is_normal(n), || "N must be normal".into())?;
        let all = self.whole();
        let mut cur = n.clone();
        for _ in 0..i {
            cur = self.commutator(&cur, &all);
        }
        Ok(cur)
    }

    /// `gamma_{c+1}` of a subgroup, computed inside the subgroup.
    pub fn gamma_of(&self, k: &Subgroup, c: usize) -> Subgroup {
        let mut cur = k.clone();
        for _ in 0..c {
            cur = self.commutator(&cur, k);
        }
        cur
    }

    pub fn is_nilpotent_subgroup(&self, k: &Subgroup) -> bool {
        let mut cur = k.clone();
        loop {
            if cur.is_trivial() {
                return true;
            }
            let next = self.commutator(&cur, k);
            if next == cur {
                return false;
            }
            cur = next;
        }
    }

    fn require_normal(&self, a: &Subgroup, what: &str) -> Result<()> {
        pre(self.is_normal(a), || format!("{what} is not normal"))
    }

    /// Maximal normal subgroups of `G` strictly inside `a`.
    pub fn maximal_invariant_below(&self, a: &Subgroup) -> Result<Vec<Subgroup>> {
        let normals = self.normal_subgroups()?;
        let below: Vec<&Subgroup> = normals.iter().filter(|n| n.is_proper_subset(a)).collect();
        Ok(below
            .iter()
            .filter(|m| !below.iter().any(|n| m.is_proper_subset(n)))
            .map(|m| (*m).clone())
            .collect())
    }

    /// `M_G(A)`: intersection of the maximal `G`-invariant proper
    /// subgroups of a normal subgroup `A`.
    pub fn melnikov_rel(&self, a: &Subgroup) -> Result<Subgroup> {
        pre(!a.is_trivial(), || "A must be nontrivial".into())?;
        self.require_normal(a, "A")?;
        let maxes = self.maximal_invariant_below(a)?;
        let mut m = a.clone();
        for x in &maxes {
            m = self.intersection(&m, x);
        }
        Ok(m)
    }

    pub fn melnikov(&self) -> Result<Subgroup> {
        pre(self.order() > 1, || "the trivial group has no Melnikov subgroup".into())?;
        self.melnikov_rel(&self.whole())
    }

    /// Narrow test: the unique maximal invariant subgroup, if unique.
    pub fn is_narrow(&self, a: &Subgroup) -> Result<(bool, Option<Subgroup>)> {
        pre(!a.is_trivial(), || "A must be nontrivial".into())?;
        self.require_normal(a, "A")?;
        let maxes = self.maximal_invariant_below(a)?;
        if maxes.len() == 1 {
            Ok((true, Some(maxes[0].clone())))
        } else {
            Ok((false, None))
        }
    }

    pub fn is_chief_factor(&self, k: &Subgroup, l: &Subgroup) -> Result<bool> {
        if !(l.is_proper_subset(k) && self.is_normal(k) && self.is_normal(l)) {
            return Ok(false);
        }
        Ok(!self
            .normal_subgroups()?
            .iter()
            .any(|m| l.is_proper_subset(m) && m.is_proper_subset(k)))
    }

    /// A narrow `A <= K` with `A` not inside `L`, for a chief factor `K/L`:
    /// the smallest normal subgroup inside `K` and not inside `L`.
    pub fn narrow_above_chief(&self, k: &Subgroup, l: &Subgroup) -> Result<NarrowWitness> {
        pre(self.is_chief_factor(k, l)?, || "K/L is not a chief factor".into())?;
        let normals = self.normal_subgroups()?;
        let candidates: Vec<&Subgroup> = normals.iter().filter(|a| a.is_subset(k) && !a.is_subset(l)).collect();
        let a = candidates
            .iter()
            .find(|a| !candidates.iter().any(|b| b.is_proper_subset(a)))
            .expect("K itself is a candidate");
        let (narrow, witness) = self.is_narrow(a)?;
        let mel = self.melnikov_rel(a)?;
        let inter = self.intersection(a, l);
        if !narrow || witness.as_ref() != Some(&mel) || inter != mel {
            return Err(Error::Precondition("narrow selection failed its postcondition".into()));
        }
        Ok(NarrowWitness {
            narrow: (*a).clone(),
            melnikov: mel,
        })
    }

    /// `(K <= L M_G(K), K <= L)`.
    pub fn mel_inclusion_check(&self, k: &Subgroup, l: &Subgroup) -> Result<(bool, bool)> {
        self.require_normal(l, "L")?;
        let m = self.melnikov_rel(k)?;
        let lm = self.product(l, &m);
        Ok((k.is_subset(&lm), k.is_subset(l)))
    }

    /// Join of all nilpotent normal subgroups.
    pub fn fitting_subgroup(&self) -> Result<Subgroup> {
        let mut f = self.trivial_subgroup();
        for n in self.normal_subgroups()? {
            if !n.is_subset(&f) && self.is_nilpotent_subgroup(n) {
                f = self.join(&f, n);
            }
        }
        Ok(f)
    }

    pub fn is_fitting_free(&self) -> Result<bool> {
        Ok(self.fitting_subgroup()?.is_trivial())
    }

    /// Distinct conjugates of `k`, in discovery order starting with `k`.
    pub fn conjugates(&self, k: &Subgroup) -> Vec<Subgroup> {
        let mut out = vec![k.clone()];
        let mut seen: HashSet<Vec<u32>> = HashSet::from([k.elements().to_vec()]);
        let mut i = 0;
        while i < out.len() {
            for &g in self.generators() {
                let c = self.conjugate_subgroup(&out[i], g);
                if seen.insert(c.elements().to_vec()) {
                    out.push(c);
                }
            }
            i += 1;
        }
        out
    }

    /// Basal subgroup from the intersection of a largest family of
    /// conjugates of `k` with nontrivial intersection.
    pub fn reid_basal(&self, k: &Subgroup) -> Result<Subgroup> {
        pre(self.is_fitting_free()?, || "G is not Fitting-free".into())?;
        pre(!k.is_trivial(), || "K must be nontrivial".into())?;
        let conj = self.conjugates(k);
        pre(conj.len() <= 20, || {
            format!("{} conjugates exceed the search bound", conj.len())
        })?;
        let mut kg = self.trivial_subgroup();
        for c in &conj {
            kg = self.join(&kg, c);
        }
        pre(self.normalizes(&kg, k), || {
            "K is not normal in its normal closure".into()
        })?;
        let m = conj.len();
        for size in (1..=m).rev() {
            for subset in combinations(m, size) {
                let mut b = conj[subset[0]].clone();
                for &j in &subset[1..] {
                    b = self.intersection(&b, &conj[j]);
                    if b.is_trivial() {
                        break;
                    }
                }
                if !b.is_trivial() {
                    return Ok(b);
                }
            }
        }
        unreachable!("singletons always qualify")
    }

    /// Distinct conjugates pairwise meet trivially, commute elementwise,
    /// and generate a subgroup of order `|B|^n`.
    pub fn is_basal(&self, b: &Subgroup) -> bool {
        let conj = self.conjugates(b);
        for i in 0..conj.len() {
            for j in i + 1..conj.len() {
                if !self.intersection(&conj[i], &conj[j]).is_trivial() {
                    return false;
                }
                let commute = conj[i]
                    .generators()
                    .iter()
                    .all(|&x| conj[j].generators().iter().all(|&y| self.mul(x, y) == self.mul(y, x)));
                if !commute {
                    return false;
                }
            }
        }
        let mut prod = self.trivial_subgroup();
        for c in &conj {
            prod = self.join(&prod, c);
        }
        (prod.order() as u128) == (b.order() as u128).pow(conj.len() as u32)
    }

    /// `G/N` as an enumerated group, plus the projection on indices.
    pub fn quotient(&self, n: &Subgroup) -> Result<(FinGroup, Vec<u32>)> {
        self.require_normal(n, "N")?;
        let backend = QuotientBackend::new(self, n);
        let e = FinGroup::enumerate(&backend, ENUMERATION_BOUND)?;
        let proj = backend
            .coset_rep
            .iter()
            .map(|r| e.index_of(r).expect("every coset is enumerated"))
            .collect();
        Ok((e.group, proj))
    }

    /// A subgroup as a group in its own right, plus the embedding.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<(FinGroup, Vec<u32>)> {
        let backend = SubgroupBackend {
            parent: self,
            gens: h.generators().to_vec(),
        };
        let e = FinGroup::enumerate(&backend, ENUMERATION_BOUND)?;
        let embed = e.elems.to_vec();
        Ok((e.group, embed))
    }

    /// Image of a subgroup under an index map into `target`.
    pub fn image(&self, h: &Subgroup, map: &[u32], target: &FinGroup) -> Subgroup {
        let gens: Vec<u32> = h.generators().iter().map(|&x| map[x as usize]).collect();
        target.closure(&gens)
    }
}

/// `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Whether every normal subgroup acts faithfully on each of its orbits.
pub fn is_subprimitive(
    g: &super::Enumerated<crate::perm::Permutation>,
) -> Result<Option<SubprimitiveFailure<crate::perm::Permutation>>> {
    let group = &g.group;
    let degree = g.elem(0).degree();
    for k in group.normal_subgroups()? {
        let perms: Vec<&crate::perm::Permutation> = k.elements().iter().map(|&x| g.elem(x)).collect();
        let gens: Vec<crate::perm::Permutation> = k.generators().iter().map(|&x| g.elem(x).clone()).collect();
        let kp = crate::perm::PermGroup::new(degree, gens)?;
        for orbit in kp.orbits() {
            let kernel = perms
                .iter()
                .filter(|p| !p.is_identity() && orbit.iter().all(|&x| p.apply(x) == x))
                .min();
            if let Some(&e) = kernel {
                return Ok(Some(SubprimitiveFailure {
                    normal: perms.iter().map(|p| (*p).clone()).collect(),
                    orbit,
                    kernel_element: e.clone(),
                }));
            }
        }
    }
    Ok(None)
}
