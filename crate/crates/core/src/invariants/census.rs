use rayon::prelude::*;
use serde::Serialize;

use crate::error::{bound_check, Error, Result};
use crate::group::{FinGroup, FiniteGroup, Subgroup, ENUMERATION_BOUND};

/// `(F_p^p)^{n+1} x| C_p`, the generator cyclically shifting each block.
pub struct ShiftSemidirect {
    pub p: u8,
    pub blocks: usize,
}

type Elem = (Vec<u8>, u8);

impl ShiftSemidirect {
    fn act(&self, w: &[u8], a: u8) -> Vec<u8> {
        let p = self.p as usize;
        let mut out = vec![0; w.len()];
        for (b, chunk) in w.chunks(p).enumerate() {
            for (j, &x) in chunk.iter().enumerate() {
                out[b * p + (j + a as usize) % p] = x;
            }
        }
        out
    }

    fn unit(&self, block: usize, j: usize) -> Elem {
        let mut v = vec![0; self.p as usize * self.blocks];
        v[block * self.p as usize + j] = 1;
        (v, 0)
    }
}

impl FiniteGroup for ShiftSemidirect {
    type Elem = Elem;

    fn identity(&self) -> Elem {
        (vec![0; self.p as usize * self.blocks], 0)
    }

    fn multiply(&self, (v, a): &Elem, (w, b): &Elem) -> Elem {
        let aw = self.act(w, *a);
        let sum = v.iter().zip(&aw).map(|(x, y)| (x + y) % self.p).collect();
        (sum, (a + b) % self.p)
    }

    fn invert(&self, (v, a): &Elem) -> Elem {
        let back = (self.p - a) % self.p;
        let neg: Vec<u8> = v.iter().map(|x| (self.p - x) % self.p).collect();
        (self.act(&neg, back), back)
    }

    fn generators(&self) -> Vec<Elem> {
        let mut g: Vec<Elem> = (0..self.blocks).map(|b| self.unit(b, 0)).collect();
        g.push((vec![0; self.p as usize * self.blocks], 1));
        g
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SemidirectCensus {
    pub p: u8,
    pub n: usize,
    pub order: usize,
    pub subsets: usize,
    pub distinct_derived: usize,
    /// Subsets (as bit masks) whose derived subgroup differs from the
    /// product formula.
    pub formula_mismatches: Vec<u64>,
    pub index_vh: usize,
    pub index_vhh: usize,
    #[serde(skip)]
    pub group: Option<FinGroup>,
}

impl SemidirectCensus {
    pub fn formula_holds(&self) -> bool {
        self.formula_mismatches.is_empty()
    }

    pub fn indices_match(&self) -> bool {
        let p = self.p as usize;
        self.index_vh == p * p && self.index_vhh == p * p * p
    }
}

fn is_prime(p: u8) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// For every `S` in `{0..n}`, builds `U_S = <[V_i,H] (i in S), V_i (i not in S), H>`,
/// computes `U_S'` and compares it with the join of `[V_i,H,H]` (i in S) and
/// `[V_i,H]` (i not in S). Returns the number of distinct `U_S'`.
pub fn semidirect_census(p: u8, n: usize) -> Result<SemidirectCensus> {
    if !is_prime(p) {
        return Err(Error::InvalidParams(format!("p = {p} is not prime")));
    }
    let blocks = n + 1;
    let exp = p as u32 * blocks as u32 + 1;
    let order = (p as u128).checked_pow(exp).unwrap_or(u128::MAX);
    bound_check("semidirect census order", order, ENUMERATION_BOUND as u128)?;
    if blocks > 20 {
        return Err(Error::InvalidParams("too many blocks".into()));
    }
    let backend = ShiftSemidirect { p, blocks };
    let en = FinGroup::enumerate(&backend, ENUMERATION_BOUND)?;
    let g = &en.group;
    let idx = |e: &Elem| en.index_of(e).expect("element lies in the group");
    let h = g.closure(&[idx(&(backend.identity().0, 1))]);
    let vs: Vec<Subgroup> = (0..blocks)
        .map(|b| {
            let gens: Vec<u32> = (0..p as usize).map(|j| idx(&backend.unit(b, j))).collect();
            g.closure(&gens)
        })
        .collect();
    let vh: Vec<Subgroup> = vs.iter().map(|v| g.commutator(v, &h)).collect();
    let vhh: Vec<Subgroup> = vh.iter().map(|v| g.commutator(v, &h)).collect();
    let results: Vec<(u64, Subgroup, bool)> = (0..1u64 << blocks)
        .into_par_iter()
        .map(|mask| {
            let in_s = |i: usize| mask >> i & 1 == 1;
            let mut u = h.clone();
            let mut formula = g.trivial_subgroup();
            for i in 0..blocks {
                let (part, f) = if in_s(i) { (&vh[i], &vhh[i]) } else { (&vs[i], &vh[i]) };
                u = g.join(&u, part);
                formula = g.join(&formula, f);
            }
            let derived = g.commutator(&u, &u);
            let ok = derived == formula;
            (mask, derived, ok)
        })
        .collect();
    let mut derived: Vec<&Subgroup> = results.iter().map(|r| &r.1).collect();
    derived.sort();
    derived.dedup();
    let v0h = g.join(&vs[0], &h);
    Ok(SemidirectCensus {
        p,
        n,
        order: g.order(),
        subsets: results.len(),
        distinct_derived: derived.len(),
        formula_mismatches: results.iter().filter(|r| !r.2).map(|r| r.0).collect(),
        index_vh: v0h.order() / vh[0].order(),
        index_vhh: v0h.order() / vhh[0].order(),
        group: Some(en.group.clone()),
    })
}
