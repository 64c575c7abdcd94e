use rayon::prelude::*;
use serde::Serialize;

use super::series::{NottinghamElement, TruncMatrix, TruncSeries};
use crate::construction::is_prime;
use crate::error::{bound_check, pre, Error, Result};
use crate::group::{Enumerated, FinGroup, FiniteGroup, Subgroup};

/// Largest `p^((n^2-1)(k-1))` enumerated in full.
pub const SL_ENUMERATION_BOUND: u128 = 1_000_000;
/// Largest closure of substitutions used for a semidirect stage.
pub const SUBSTITUTION_CLOSURE_BOUND: usize = 10_000;

/// `I + T e_ij` for `i != j`, and `diag(1+T, (1+T)^-1)` on consecutive
/// diagonal positions.
pub fn sl1_generators(n: usize, p: u32, k: usize) -> Vec<TruncMatrix> {
    let t = TruncSeries::t(p, k);
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(TruncMatrix::elementary(n, i, j, t.clone()));
            }
        }
    }
    let u = TruncSeries::one(p, k).add(&t);
    let uinv = u.inverse().expect("1 + T is a unit");
    for i in 0..n.saturating_sub(1) {
        let mut m = TruncMatrix::identity(n, p, k);
        m.set(i, i, u.clone());
        m.set(i + 1, i + 1, uinv.clone());
        out.push(m);
    }
    out.retain(|m| *m != TruncMatrix::identity(n, p, k));
    out
}

struct Sl1Backend {
    n: usize,
    p: u32,
    k: usize,
}

impl FiniteGroup for Sl1Backend {
    type Elem = TruncMatrix;
    fn identity(&self) -> TruncMatrix {
        TruncMatrix::identity(self.n, self.p, self.k)
    }
    fn multiply(&self, a: &TruncMatrix, b: &TruncMatrix) -> TruncMatrix {
        a.mul(b)
    }
    fn invert(&self, a: &TruncMatrix) -> TruncMatrix {
        a.inverse().expect("group elements are invertible")
    }
    fn generators(&self) -> Vec<TruncMatrix> {
        sl1_generators(self.n, self.p, self.k)
    }
}

/// The first congruence subgroup of `SL_n(F_p[[T]] / (T^k))`.
#[derive(Clone, Debug)]
pub struct Sl1 {
    pub n: usize,
    pub p: u32,
    pub k: usize,
    /// `p^((n^2-1)(k-1))`.
    pub order_formula: u128,
    /// `None` in structural mode.
    pub enumerated: Option<Enumerated<TruncMatrix>>,
}

pub fn build_sl1(n: usize, p: u32, k: usize) -> Result<Sl1> {
    if !is_prime(p as u64) || p > 251 {
        return Err(Error::InvalidParams(format!("p = {p} must be a prime below 256")));
    }
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidParams(format!("n = {n} must be 2 or 3")));
    }
    if k < 1 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    if (n as u32).is_multiple_of(p) {
        return Err(Error::InvalidParams("p divides n".into()));
    }
    let exp = ((n * n - 1) * (k - 1)) as u32;
    let order_formula = (p as u128).checked_pow(exp).unwrap_or(u128::MAX);
    let enumerated = if order_formula <= SL_ENUMERATION_BOUND {
        let en = FinGroup::enumerate(&Sl1Backend { n, p, k }, order_formula as usize)?;
        if en.group.order() as u128 != order_formula {
            return Err(Error::Precondition(format!(
                "generators close to order {} instead of {order_formula}",
                en.group.order()
            )));
        }
        Some(en)
    } else {
        None
    };
    Ok(Sl1 {
        n,
        p,
        k,
        order_formula,
        enumerated,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LcsReport {
    /// `(i, |gamma_i|, |G_i|)` for `1 <= i <= k`.
    pub orders: Vec<(usize, usize, usize)>,
    pub holds: bool,
    /// First level where the two differ, with an element of one but not the other.
    pub witness: Option<(usize, TruncMatrix)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedReport {
    /// `(i, |G_i / G_{i+1}|, rank, abelian, exponent p)`.
    pub layers: Vec<(usize, usize, u32, bool, bool)>,
    pub expected_rank: u32,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NottinghamReport {
    pub f: Vec<u32>,
    /// Images of generators have determinant 1 and are `I` mod `T`.
    pub preserves_group: bool,
    pub generator_pairs: usize,
    pub hom_failures: usize,
    /// Permutes the elements of the group, with the inverse substitution undoing it.
    pub bijective: Option<bool>,
}

impl NottinghamReport {
    pub fn holds(&self) -> bool {
        self.preserves_group && self.hom_failures == 0 && self.bijective != Some(false)
    }
}

/// A map of the group to itself tested by the conjugator search.
#[derive(Clone, Debug)]
pub enum MatrixMap {
    Substitution(NottinghamElement),
    /// `x -> h^-1 x h`.
    Conjugation(TruncMatrix),
}

impl MatrixMap {
    pub fn apply(&self, x: &TruncMatrix) -> TruncMatrix {
        match self {
            MatrixMap::Substitution(a) => a.apply(x),
            MatrixMap::Conjugation(h) => h.inverse().expect("invertible").mul(x).mul(h),
        }
    }
}

impl Sl1 {
    pub fn enumerated(&self) -> Result<&Enumerated<TruncMatrix>> {
        self.enumerated
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("order {} exceeds the enumeration bound", self.order_formula)))
    }

    pub fn group(&self) -> Result<&FinGroup> {
        Ok(&self.enumerated()?.group)
    }

    pub fn generators(&self) -> Vec<TruncMatrix> {
        sl1_generators(self.n, self.p, self.k)
    }

    pub fn identity(&self) -> TruncMatrix {
        TruncMatrix::identity(self.n, self.p, self.k)
    }

    /// `G_1, ..., G_k` by testing each element modulo `T^i`.
    pub fn congruence_filtration(&self) -> Result<Vec<Subgroup>> {
        let en = self.enumerated()?;
        let g = &en.group;
        Ok((1..=self.k)
            .map(|i| {
                let elems: Vec<u32> = (0..g.order() as u32)
                    .into_par_iter()
                    .filter(|&x| en.elem(x).congruent_to_identity(i))
                    .collect();
                g.subgroup_from_elements(&elems)
            })
            .collect())
    }

    pub fn verify_lcs_equals_congruence(&self) -> Result<LcsReport> {
        let en = self.enumerated()?;
        let g = &en.group;
        let filt = self.congruence_filtration()?;
        let lcs = g.lower_central_series(self.k)?;
        let mut orders = Vec::new();
        let mut witness = None;
        for (i, (a, b)) in lcs.iter().zip(&filt).enumerate() {
            orders.push((i + 1, a.order(), b.order()));
            if a != b && witness.is_none() {
                let x = a
                    .elements()
                    .iter()
                    .find(|&&x| !b.contains(x))
                    .or_else(|| b.elements().iter().find(|&&x| !a.contains(x)))
                    .copied()
                    .unwrap_or(0);
                witness = Some((i + 1, en.elem(x).clone()));
            }
        }
        Ok(LcsReport {
            holds: witness.is_none(),
            orders,
            witness,
        })
    }

    pub fn graded_check(&self) -> Result<GradedReport> {
        let g = self.group()?;
        let filt = self.congruence_filtration()?;
        let expected_rank = (self.n * self.n - 1) as u32;
        let mut layers = Vec::new();
        for i in 0..filt.len().saturating_sub(1) {
            let (gi, next) = (&filt[i], &filt[i + 1]);
            let q = gi.order() / next.order();
            let mut rank = 0;
            while (self.p as usize).pow(rank) < q {
                rank += 1;
            }
            let abelian = gi
                .generators()
                .iter()
                .all(|&a| gi.generators().iter().all(|&b| next.contains(g.comm(a, b))));
            let exponent_p = gi
                .elements()
                .par_iter()
                .all(|&x| next.contains(g.pow(x, self.p as u64)));
            layers.push((i + 1, q, rank, abelian, exponent_p));
        }
        let holds = layers
            .iter()
            .all(|&(_, q, r, ab, ex)| (self.p as usize).pow(r) == q && r == expected_rank && ab && ex);
        Ok(GradedReport {
            layers,
            expected_rank,
            holds,
        })
    }

    pub fn nottingham_apply(&self, alpha: &NottinghamElement, m: &TruncMatrix) -> Result<TruncMatrix> {
        pre(alpha.f.p == self.p && alpha.f.level() == self.k, || {
            "substitution over a different ring".into()
        })?;
        pre(m.n == self.n && m.level() == self.k && m.p() == self.p, || {
            "matrix of a different group".into()
        })?;
        Ok(alpha.apply(m))
    }

    pub fn nottingham_check(&self, alpha: &NottinghamElement) -> Result<NottinghamReport> {
        let gens = self.generators();
        let one = TruncSeries::one(self.p, self.k);
        let mut preserves_group = true;
        for x in &gens {
            let y = self.nottingham_apply(alpha, x)?;
            preserves_group &= y.det() == one && y.congruent_to_identity(1);
        }
        let mut hom_failures = 0;
        for a in &gens {
            for b in &gens {
                if alpha.apply(&a.mul(b)) != alpha.apply(a).mul(&alpha.apply(b)) {
                    hom_failures += 1;
                }
            }
        }
        let bijective = self.enumerated.as_ref().map(|en| {
            let inv = alpha.inverse();
            let mut seen = vec![false; en.group.order()];
            en.elems.iter().all(|x| {
                let y = alpha.apply(x);
                match en.index_of(&y) {
                    Some(j) if !seen[j as usize] && inv.apply(&y) == *x => {
                        seen[j as usize] = true;
                        true
                    }
                    _ => false,
                }
            })
        });
        Ok(NottinghamReport {
            f: alpha.f.coeffs.clone(),
            preserves_group,
            generator_pairs: gens.len() * gens.len(),
            hom_failures,
            bijective,
        })
    }

    /// An `h` in the group with `x^h = x^alpha` on every generator, by
    /// exhaustive scan.
    pub fn inner_conjugator_search(&self, alpha: &MatrixMap) -> Result<Option<TruncMatrix>> {
        let en = self.enumerated()?;
        let pairs: Vec<(TruncMatrix, TruncMatrix)> =
            self.generators().into_iter().map(|x| (alpha.apply(&x), x)).collect();
        Ok(en
            .elems
            .par_iter()
            .find_first(|h| pairs.iter().all(|(ax, x)| x.mul(h) == h.mul(ax)))
            .cloned())
    }

    /// `G x| <alphas>` with `x^a = a(x)`.
    pub fn semidirect_stage(
        &self,
        alphas: &[NottinghamElement],
    ) -> Result<Enumerated<(TruncMatrix, NottinghamElement)>> {
        self.enumerated()?;
        for a in alphas {
            pre(a.f.p == self.p && a.f.level() == self.k, || {
                "substitution over a different ring".into()
            })?;
        }
        let closure = substitution_closure(self.p, self.k, alphas)?;
        let backend = SemidirectBackend {
            gens: self
                .generators()
                .into_iter()
                .map(|m| (m, NottinghamElement::identity(self.p, self.k)))
                .chain(alphas.iter().map(|a| (self.identity(), a.clone())))
                .collect(),
        };
        let bound = (self.order_formula as usize).saturating_mul(closure);
        FinGroup::enumerate(&backend, bound)
    }
}

/// Order of `<alphas>` in the substitution group at level `k`.
pub fn substitution_closure(p: u32, k: usize, alphas: &[NottinghamElement]) -> Result<usize> {
    let mut seen = vec![NottinghamElement::identity(p, k)];
    let mut i = 0;
    while i < seen.len() {
        for a in alphas {
            let y = seen[i].then(a);
            if !seen.contains(&y) {
                seen.push(y);
                bound_check(
                    "substitution closure",
                    seen.len() as u128,
                    SUBSTITUTION_CLOSURE_BOUND as u128,
                )?;
            }
        }
        i += 1;
    }
    Ok(seen.len())
}

/// First `T + c_2 T^2 + ...` in lexicographic coefficient order with the
/// given order under composition.
pub fn find_substitution_of_order(p: u32, k: usize, order: u64) -> Option<NottinghamElement> {
    let free = k.saturating_sub(2);
    let total = (p as u64).checked_pow(free as u32)?;
    (1..total).find_map(|code| {
        let mut c = vec![0, 1];
        let mut x = code;
        for _ in 0..free {
            c.push((x % p as u64) as u32);
            x /= p as u64;
        }
        let a = NottinghamElement::new(TruncSeries::from_coeffs(p, k, &c)).ok()?;
        (a.order() == order).then_some(a)
    })
}

struct SemidirectBackend {
    gens: Vec<(TruncMatrix, NottinghamElement)>,
}

impl FiniteGroup for SemidirectBackend {
    type Elem = (TruncMatrix, NottinghamElement);
    fn identity(&self) -> Self::Elem {
        let (m, a) = &self.gens[0];
        (
            TruncMatrix::identity(m.n, m.p(), m.level()),
            NottinghamElement::identity(a.f.p, a.f.level()),
        )
    }
    fn multiply(&self, (m, a): &Self::Elem, (m2, a2): &Self::Elem) -> Self::Elem {
        (m.mul(&a.inverse().apply(m2)), a.then(a2))
    }
    fn invert(&self, (m, a): &Self::Elem) -> Self::Elem {
        (a.apply(&m.inverse().expect("invertible")), a.inverse())
    }
    fn generators(&self) -> Vec<Self::Elem> {
        self.gens.clone()
    }
}
