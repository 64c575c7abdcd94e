//! Deterministic Schreier-Sims stabilizer chains.
//!
//! Each level stores a base point, the strong generators that fix all
//! earlier base points, the basic orbit and a transversal. Small degrees
//! keep explicit inverse coset representatives; large degrees keep a
//! Schreier vector and walk it on demand.

use super::Permutation;

const NONE: u32 = u32::MAX;
const EXPLICIT_LIMIT: usize = 1 << 24;

#[derive(Clone, Debug)]
enum Transversal {
    /// `uinv[i]` maps `orbit[i]` back to the base point.
    Explicit(Vec<Permutation>),
    /// `(generator index, parent orbit index)`; the base has `(NONE, NONE)`.
    Vector(Vec<(u32, u32)>),
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<Permutation>,
    gens_inv: Vec<Permutation>,
    orbit: Vec<u32>,
    pos: Vec<u32>,
    trans: Transversal,
    tested: Vec<u32>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Self {
        let mut pos = vec![NONE; degree];
        pos[base as usize] = 0;
        let trans = if degree * degree <= EXPLICIT_LIMIT {
            Transversal::Explicit(vec![Permutation::identity(degree)])
        } else {
            Transversal::Vector(vec![(NONE, NONE)])
        };
        Level {
            base,
            gens: Vec::new(),
            gens_inv: Vec::new(),
            orbit: vec![base],
            pos,
            trans,
            tested: vec![0],
        }
    }

    /// Extends the orbit after a generator has been appended.
    fn extend_orbit(&mut self) {
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            for gi in 0..self.gens.len() {
                let y = self.gens[gi].apply(x);
                if self.pos[y as usize] == NONE {
                    self.pos[y as usize] = self.orbit.len() as u32;
                    self.orbit.push(y);
                    self.tested.push(0);
                    match &mut self.trans {
                        Transversal::Explicit(uinv) => {
                            // u_y = u_x * s, so u_y^-1 = s^-1 * u_x^-1
                            let next = self.gens_inv[gi].mul(&uinv[i]);
                            uinv.push(next);
                        }
                        Transversal::Vector(v) => v.push((gi as u32, i as u32)),
                    }
                }
            }
            i += 1;
        }
    }

    /// Replaces `g` by `g * u_x^-1` where `x = orbit[idx]`.
    fn strip(&self, g: &mut Vec<u32>, idx: usize, scratch: &mut Vec<u32>) {
        match &self.trans {
            Transversal::Explicit(uinv) => {
                let u = uinv[idx].images();
                scratch.clear();
                scratch.extend(g.iter().map(|&x| u[x as usize]));
                std::mem::swap(g, scratch);
            }
            Transversal::Vector(v) => {
                let mut i = idx;
                while v[i].0 != NONE {
                    let sinv = self.gens_inv[v[i].0 as usize].images();
                    for x in g.iter_mut() {
                        *x = sinv[*x as usize];
                    }
                    i = v[i].1 as usize;
                }
            }
        }
    }

    fn inverse_rep(&self, idx: usize, degree: usize) -> Permutation {
        match &self.trans {
            Transversal::Explicit(uinv) => uinv[idx].clone(),
            Transversal::Vector(_) => {
                let mut g: Vec<u32> = (0..degree as u32).collect();
                let mut scratch = Vec::new();
                self.strip(&mut g, idx, &mut scratch);
                Permutation::from_images_unchecked(g)
            }
        }
    }

    fn rep(&self, idx: usize, degree: usize) -> Permutation {
        self.inverse_rep(idx, degree).inverse()
    }
}

/// A base and strong generating set for a permutation group.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
    target: Option<u128>,
}

impl StabChain {
    pub fn trivial(degree: usize) -> Self {
        StabChain {
            degree,
            levels: Vec::new(),
            target: None,
        }
    }

    /// Builds a chain for `<gens>`. The first base point is the smallest
    /// point moved by any generator.
    pub fn from_generators(degree: usize, gens: &[Permutation]) -> Self {
        Self::build(degree, gens, None)
    }

    /// As [`StabChain::from_generators`], but stops sifting once the
    /// orbit-length product reaches `order`. Only sound when `order` is
    /// the true group order.
    pub fn with_known_order(degree: usize, gens: &[Permutation], order: u128) -> Self {
        Self::build(degree, gens, Some(order))
    }

    fn build(degree: usize, gens: &[Permutation], target: Option<u128>) -> Self {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
            target,
        };
        let first = gens.iter().filter_map(|g| g.first_moved_point()).min();
        if let Some(b) = first {
            chain.levels.push(Level::new(b, degree));
            for g in gens {
                if !chain.done() {
                    chain.extend(g);
                }
            }
        }
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn done(&self) -> bool {
        self.target.is_some_and(|t| self.order() >= t)
    }

    /// Adds `g` to the strong generators if it is not already a member.
    /// Returns whether the group grew.
    pub fn extend(&mut self, g: &Permutation) -> bool {
        let mut scratch = Vec::new();
        let (depth, residue) = self.sift_images(g.images().to_vec(), 0, &mut scratch);
        if is_identity(&residue) {
            return false;
        }
        self.insert_residue(0, depth, Permutation::from_images_unchecked(residue));
        true
    }

    /// A residue that sifted down to `depth` belongs to every level from
    /// `from` to `depth`; deeper levels are completed first.
    fn insert_residue(&mut self, from: usize, depth: usize, r: Permutation) {
        if depth == self.levels.len() {
            let b = r.first_moved_point().expect("residue is not identity");
            self.levels.push(Level::new(b, self.degree));
        }
        for l in from..=depth {
            let lvl = &mut self.levels[l];
            lvl.gens_inv.push(r.inverse());
            lvl.gens.push(r.clone());
            lvl.extend_orbit();
        }
        for l in (from..=depth).rev() {
            self.complete(l);
            if self.done() {
                return;
            }
        }
    }

    /// Sifts every untested Schreier generator of level `j`.
    fn complete(&mut self, j: usize) {
        let mut scratch = Vec::new();
        let mut oi = 0;
        while oi < self.levels[j].orbit.len() {
            loop {
                if self.done() {
                    return;
                }
                let lvl = &self.levels[j];
                let gi = lvl.tested[oi] as usize;
                if gi >= lvl.gens.len() {
                    break;
                }
                self.levels[j].tested[oi] += 1;
                let lvl = &self.levels[j];
                let s = &lvl.gens[gi];
                let qi = lvl.pos[s.apply(lvl.orbit[oi]) as usize] as usize;
                // u_p * s * u_q^-1
                let mut h: Vec<u32> = lvl.rep(oi, self.degree).mul(s).images().to_vec();
                lvl.strip(&mut h, qi, &mut scratch);
                let (depth, residue) = self.sift_images(h, j + 1, &mut scratch);
                if !is_identity(&residue) {
                    self.insert_residue(j + 1, depth, Permutation::from_images_unchecked(residue));
                }
            }
            oi += 1;
        }
    }

    fn sift_images(&self, mut g: Vec<u32>, start: usize, scratch: &mut Vec<u32>) -> (usize, Vec<u32>) {
        for l in start..self.levels.len() {
            let lvl = &self.levels[l];
            let x = g[lvl.base as usize];
            let idx = lvl.pos[x as usize];
            if idx == NONE {
                return (l, g);
            }
            lvl.strip(&mut g, idx as usize, scratch);
        }
        (self.levels.len(), g)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let mut scratch = Vec::new();
        let (_, r) = self.sift_images(g.images().to_vec(), 0, &mut scratch);
        is_identity(&r)
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Strong generators, level by level, without repeats.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    /// Mixed-radix index of `g` in `0..order`, or `None` for non-members.
    pub fn rank(&self, g: &Permutation) -> Option<u64> {
        let mut scratch = Vec::new();
        let mut h = g.images().to_vec();
        let mut rank = 0u64;
        let mut stride = 1u64;
        for lvl in &self.levels {
            let idx = lvl.pos[h[lvl.base as usize] as usize];
            if idx == NONE {
                return None;
            }
            rank += idx as u64 * stride;
            stride *= lvl.orbit.len() as u64;
            lvl.strip(&mut h, idx as usize, &mut scratch);
        }
        is_identity(&h).then_some(rank)
    }

    /// Inverse of [`StabChain::rank`].
    pub fn unrank(&self, mut r: u64) -> Permutation {
        let mut digits = Vec::with_capacity(self.levels.len());
        for lvl in &self.levels {
            let n = lvl.orbit.len() as u64;
            digits.push((r % n) as usize);
            r /= n;
        }
        let mut acc = Permutation::identity(self.degree);
        for (lvl, &d) in self.levels.iter().zip(&digits).rev() {
            if d != 0 {
                acc = acc.mul(&lvl.rep(d, self.degree));
            }
        }
        acc
    }

    /// Chain for the pointwise stabilizer of the first `k` base points.
    pub fn stabilizer_tail(&self, k: usize) -> StabChain {
        StabChain {
            degree: self.degree,
            levels: self.levels[k.min(self.levels.len())..].to_vec(),
            target: None,
        }
    }

    /// Builds a chain whose base begins with `prefix`, for the same group.
    pub fn with_base_prefix(degree: usize, gens: &[Permutation], prefix: &[u32]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: prefix.iter().map(|&b| Level::new(b, degree)).collect(),
            target: None,
        };
        if gens.iter().all(|g| g.is_identity()) {
            chain.levels.clear();
            return chain;
        }
        if chain.levels.is_empty() {
            let b = gens.iter().filter_map(|g| g.first_moved_point()).min().unwrap();
            chain.levels.push(Level::new(b, degree));
        }
        for g in gens {
            chain.extend(g);
        }
        chain
    }
}

fn is_identity(g: &[u32]) -> bool {
    g.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(deg: usize, cycles: &[&[u32]]) -> Permutation {
        let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(deg, &cycles).unwrap()
    }

    #[test]
    fn symmetric_three() {
        let c = StabChain::from_generators(3, &[p(3, &[&[0, 1]]), p(3, &[&[0, 1, 2]])]);
        assert_eq!(c.order(), 6);
        assert_eq!(c.base()[0], 0);
    }

    #[test]
    fn alternating_five() {
        let c = StabChain::from_generators(5, &[p(5, &[&[0, 1, 2, 3, 4]]), p(5, &[&[2, 3, 4]])]);
        assert_eq!(c.order(), 60);
        assert!(c.contains(&p(5, &[&[0, 1], &[2, 3]])));
        assert!(!c.contains(&p(5, &[&[0, 1]])));
    }

    #[test]
    fn identity_only() {
        let c = StabChain::from_generators(4, &[Permutation::identity(4)]);
        assert_eq!(c.order(), 1);
        assert!(c.contains(&Permutation::identity(4)));
    }

    #[test]
    fn rank_unrank_roundtrip() {
        let c = StabChain::from_generators(5, &[p(5, &[&[0, 1, 2, 3, 4]]), p(5, &[&[0, 1]])]);
        assert_eq!(c.order(), 120);
        let mut seen = std::collections::HashSet::new();
        for r in 0..120 {
            let g = c.unrank(r);
            assert_eq!(c.rank(&g), Some(r));
            assert!(seen.insert(g));
        }
    }

    #[test]
    fn schreier_vector_mode_matches() {
        // degree above the explicit limit forces Schreier vectors
        let n = 4200;
        let gens = [p(n, &[&[0, 1, 2, 3, 4]]), p(n, &[&[0, 1]])];
        let c = StabChain::from_generators(n, &gens);
        assert_eq!(c.order(), 120);
        for r in 0..120 {
            assert_eq!(c.rank(&c.unrank(r)), Some(r));
        }
        assert!(!c.contains(&p(n, &[&[0, 5]])));
        let c2 = StabChain::with_known_order(n, &gens, 120);
        assert_eq!(c2.order(), 120);
    }

    #[test]
    fn base_prefix_is_respected() {
        let gens = [p(4, &[&[0, 1, 2, 3]]), p(4, &[&[0, 2]])];
        let c = StabChain::with_base_prefix(4, &gens, &[1, 3]);
        assert_eq!(&c.base()[..2], &[1, 3]);
        assert_eq!(c.order(), 8);
        assert_eq!(c.stabilizer_tail(2).order(), 2);
        let c = StabChain::with_base_prefix(4, &gens, &[0, 2]);
        assert_eq!(c.stabilizer_tail(2).order(), 2);
    }
}
