use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::monomial::{pow_mod, Monomial};
use super::params::{validate_params, CbParams};
use crate::error::{bound_check, Error, Result};

/// Cap on `dim W`.
pub const W_DIM_BOUND: u128 = 10_000;

/// `x~^a y~^b z^c`, exponents in `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DElem {
    pub a: Vec<u8>,
    pub b: Vec<u8>,
    pub c: u8,
}

/// Sparse vector of `W` over the basis indexed by tilde exponent vectors.
pub type WVec = BTreeMap<u32, u32>;

/// An element `w d g` of `G_1 = (W x| D) x| G_0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CbElement {
    pub w: WVec,
    pub d: DElem,
    pub g: u32,
}

/// First stage `G_1` over `U = G_0 = F_{q_0}`, with `u_0 = 0`.
///
/// `Gamma = U x {0..t}` is numbered `k * |U| + u`; `Gamma~` drops `u = 0`
/// and is numbered `k * (|U| - 1) + u - 1`. Basis vectors of `V` are
/// exponent vectors in `F_p^Gamma` read as base-`p` integers, and those of
/// `W` are exponent vectors in `F_p^Gamma~` (the `u_0` coordinate of an
/// element of `A~` is minus the block sum).
#[derive(Clone, Debug)]
pub struct Stage {
    pub q0: u32,
    pub p: u32,
    pub q: u32,
    pub t: u32,
    pub zeta: u32,
    zeta_log: Vec<Option<u32>>,
    pub tilde_table: Vec<Vec<u8>>,
}

impl Stage {
    pub fn build(params: &CbParams, n: usize) -> Result<Stage> {
        let v = validate_params(params);
        if !v.ok() {
            return Err(Error::InvalidParams(v.violations.join("; ")));
        }
        if n != 1 {
            return Err(Error::BoundExceeded {
                what: "construction stage".into(),
                value: n as u128,
                bound: 1,
            });
        }
        let (q0, p, q, t) = (
            params.q[0] as u32,
            params.p[0] as u32,
            params.q[1] as u32,
            params.t[0] as u32,
        );
        let gt = (q0 as u128 - 1) * t as u128;
        let w_dim = (p as u128).checked_pow(gt as u32).unwrap_or(u128::MAX);
        bound_check("dim W", w_dim, W_DIM_BOUND)?;
        let zeta = (2..q)
            .find(|&z| (1..=p).find(|&k| pow_mod(z as u64, k as u64, q as u64) == 1) == Some(p))
            .expect("p divides q - 1");
        let mut zeta_log = vec![None; q as usize];
        for k in 0..p {
            zeta_log[pow_mod(zeta as u64, k as u64, q as u64) as usize] = Some(k);
        }
        let mut s = Stage {
            q0,
            p,
            q,
            t,
            zeta,
            zeta_log,
            tilde_table: Vec::new(),
        };
        s.tilde_table = (0..s.gamma_tilde())
            .map(|g| {
                (0..s.gamma_tilde())
                    .map(|d| {
                        let same_block = s.tilde_block(g) == s.tilde_block(d);
                        (((g == d) as u32 + same_block as u32) % p) as u8
                    })
                    .collect()
            })
            .collect();
        Ok(s)
    }

    pub fn gamma(&self) -> usize {
        (self.q0 * self.t) as usize
    }

    pub fn gamma_tilde(&self) -> usize {
        ((self.q0 - 1) * self.t) as usize
    }

    pub fn v_dim(&self) -> usize {
        (self.p as usize).pow(self.gamma() as u32)
    }

    pub fn w_dim(&self) -> usize {
        (self.p as usize).pow(self.gamma_tilde() as u32)
    }

    /// `log_2 |D|` style exponent: `|D| = p^{2 |Gamma~| + 1}`.
    pub fn d_exponent(&self) -> usize {
        2 * self.gamma_tilde() + 1
    }

    fn tilde_block(&self, i: usize) -> usize {
        i / (self.q0 as usize - 1)
    }

    /// `Gamma~` index to `Gamma` index.
    pub fn tilde_to_gamma(&self, i: usize) -> usize {
        let m = self.q0 as usize - 1;
        (i / m) * self.q0 as usize + i % m + 1
    }

    fn decode(&self, mut x: u32, len: usize) -> Vec<u8> {
        (0..len)
            .map(|_| {
                let d = (x % self.p) as u8;
                x /= self.p;
                d
            })
            .collect()
    }

    fn encode(&self, v: &[u8]) -> u32 {
        v.iter().rev().fold(0, |acc, &d| acc * self.p + d as u32)
    }

    fn zeta_pow(&self, k: u32) -> u32 {
        pow_mod(self.zeta as u64, (k % self.p) as u64, self.q as u64) as u32
    }

    /// Exponent `k` with `c = zeta^k`, if any.
    pub fn zeta_log(&self, c: u32) -> Option<u32> {
        self.zeta_log[c as usize]
    }

    // ---- monomial maps on V ----

    fn v_map(&self, f: impl Fn(&mut Vec<u8>) -> u32) -> Monomial {
        let n = self.v_dim();
        let mut perm = Vec::with_capacity(n);
        let mut coef = Vec::with_capacity(n);
        for i in 0..n as u32 {
            let mut r = self.decode(i, self.gamma());
            let c = f(&mut r);
            perm.push(self.encode(&r));
            coef.push(c);
        }
        Monomial { perm, coef, q: self.q }
    }

    /// `x_delta : v -> v a_delta`.
    pub fn x(&self, delta: usize) -> Monomial {
        self.v_map(|r| {
            r[delta] = ((r[delta] as u32 + 1) % self.p) as u8;
            1
        })
    }

    /// `y_delta : a^r -> zeta^{r_delta} a^r`.
    pub fn y(&self, delta: usize) -> Monomial {
        self.v_map(|r| self.zeta_pow(r[delta] as u32))
    }

    pub fn z(&self) -> Monomial {
        Monomial::scalar(self.v_dim(), self.q, self.zeta)
    }

    fn block_base(&self, i: usize) -> usize {
        self.tilde_block(i) * self.q0 as usize
    }

    pub fn x_tilde(&self, i: usize) -> Monomial {
        self.x(self.block_base(i))
            .inverse()
            .then(&self.x(self.tilde_to_gamma(i)))
    }

    pub fn y_tilde(&self, i: usize) -> Monomial {
        self.y(self.block_base(i))
            .inverse()
            .then(&self.y(self.tilde_to_gamma(i)))
    }

    /// `d` on `V` as a product of generator maps.
    pub fn d_monomial(&self, d: &DElem) -> Monomial {
        let mut m = Monomial::identity(self.v_dim(), self.q);
        for (i, &e) in d.a.iter().enumerate() {
            let xi = self.x_tilde(i);
            for _ in 0..e {
                m = m.then(&xi);
            }
        }
        for (i, &e) in d.b.iter().enumerate() {
            let yi = self.y_tilde(i);
            for _ in 0..e {
                m = m.then(&yi);
            }
        }
        m.then(&Monomial::scalar(self.v_dim(), self.q, self.zeta_pow(d.c as u32)))
    }

    /// The linear map of `V` induced by a permutation `pi` of `U`
    /// acting on `Gamma` blockwise.
    pub fn u_permutation(&self, pi: &[u32]) -> Monomial {
        let q0 = self.q0 as usize;
        self.v_map(|r| {
            let old = r.clone();
            for (g, &e) in old.iter().enumerate() {
                let (k, u) = (g / q0, g % q0);
                r[k * q0 + pi[u] as usize] = e;
            }
            1
        })
    }

    // ---- D in normal form ----

    pub fn d_identity(&self) -> DElem {
        DElem {
            a: vec![0; self.gamma_tilde()],
            b: vec![0; self.gamma_tilde()],
            c: 0,
        }
    }

    pub fn d_gen_x(&self, i: usize) -> DElem {
        let mut d = self.d_identity();
        d.a[i] = 1;
        d
    }

    pub fn d_gen_y(&self, i: usize) -> DElem {
        let mut d = self.d_identity();
        d.b[i] = 1;
        d
    }

    pub fn d_gen_z(&self) -> DElem {
        let mut d = self.d_identity();
        d.c = 1;
        d
    }

    /// `beta(a, b) = sum a_g b_d T[g][d]`, so `[x~^a, y~^b] = z^beta(a, b)`.
    pub fn beta(&self, a: &[u8], b: &[u8]) -> u32 {
        let mut s = 0u32;
        for (g, &ag) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (d, &bd) in b.iter().enumerate().filter(|(_, &x)| x != 0) {
                s += ag as u32 * bd as u32 * self.tilde_table[g][d] as u32;
            }
        }
        s % self.p
    }

    fn add(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| ((x as u32 + y as u32) % self.p) as u8)
            .collect()
    }

    fn neg(&self, a: &[u8]) -> Vec<u8> {
        a.iter().map(|&x| ((self.p - x as u32) % self.p) as u8).collect()
    }

    pub fn d_mul(&self, d1: &DElem, d2: &DElem) -> DElem {
        let corr = self.p - self.beta(&d2.a, &d1.b);
        DElem {
            a: self.add(&d1.a, &d2.a),
            b: self.add(&d1.b, &d2.b),
            c: ((d1.c as u32 + d2.c as u32 + corr) % self.p) as u8,
        }
    }

    pub fn d_inv(&self, d: &DElem) -> DElem {
        // (x^a y^b z^c)^-1 = z^-c y^-b x^-a = x^-a y^-b z^{-c - beta(a, b)}
        let a = self.neg(&d.a);
        let b = self.neg(&d.b);
        let c = (2 * self.p - d.c as u32 - self.beta(&d.a, &d.b)) % self.p;
        DElem { a, b, c: c as u8 }
    }

    /// Image of a tilde exponent vector under a permutation `pi` of `U`:
    /// `e_(u,k) - e_(0,k)` goes to `e_(pi u,k) - e_(pi 0,k)`.
    fn permute_tilde(&self, a: &[u8], pi: &[u32]) -> Vec<u8> {
        let q0 = self.q0 as usize;
        let m = q0 - 1;
        let mut full = vec![0u32; self.gamma()];
        for (i, &e) in a.iter().enumerate().filter(|(_, &e)| e != 0) {
            let (k, u) = (i / m, i % m + 1);
            full[k * q0 + pi[u] as usize] += e as u32;
            full[k * q0 + pi[0] as usize] += self.p - e as u32;
        }
        (0..a.len())
            .map(|i| (full[self.tilde_to_gamma(i)] % self.p) as u8)
            .collect()
    }

    /// `U -> U`, `u -> u + g`.
    pub fn translation(&self, g: u32) -> Vec<u32> {
        (0..self.q0).map(|u| (u + g) % self.q0).collect()
    }

    /// `U -> U`, `u -> l u`.
    pub fn scaling(&self, l: u32) -> Vec<u32> {
        (0..self.q0)
            .map(|u| (u as u64 * l as u64 % self.q0 as u64) as u32)
            .collect()
    }

    /// `pi^-1 d pi` for the map of `V` induced by a permutation of `U`.
    pub fn d_conj_perm(&self, d: &DElem, pi: &[u32]) -> DElem {
        DElem {
            a: self.permute_tilde(&d.a, pi),
            b: self.permute_tilde(&d.b, pi),
            c: d.c,
        }
    }

    // ---- W ----

    /// `W` basis vector `rho`, acted on by `d`: `e_rho -> zeta^{phi_b(rho + a) + c} e_{rho + a}`.
    pub fn w_basis_act_d(&self, rho: u32, d: &DElem) -> (u32, u32) {
        let r = self.add(&self.decode(rho, self.gamma_tilde()), &d.a);
        let m = self.q0 as usize - 1;
        let block_sums: Vec<u32> = (0..self.t as usize)
            .map(|k| r[k * m..(k + 1) * m].iter().map(|&x| x as u32).sum())
            .collect();
        let phi: u32 =
            d.b.iter()
                .enumerate()
                .map(|(i, &bi)| bi as u32 * (r[i] as u32 + block_sums[i / m]))
                .sum();
        (self.encode(&r), self.zeta_pow(phi + d.c as u32))
    }

    pub fn w_basis_act_perm(&self, rho: u32, pi: &[u32]) -> u32 {
        self.encode(&self.permute_tilde(&self.decode(rho, self.gamma_tilde()), pi))
    }

    pub fn w_act_d(&self, w: &WVec, d: &DElem) -> WVec {
        let q = self.q as u64;
        w.iter()
            .map(|(&rho, &c)| {
                let (r2, s) = self.w_basis_act_d(rho, d);
                (r2, (c as u64 * s as u64 % q) as u32)
            })
            .collect()
    }

    pub fn w_act_perm(&self, w: &WVec, pi: &[u32]) -> WVec {
        w.iter().map(|(&rho, &c)| (self.w_basis_act_perm(rho, pi), c)).collect()
    }

    fn w_add(&self, a: &WVec, b: &WVec) -> WVec {
        let mut out = a.clone();
        for (&k, &v) in b {
            let e = out.entry(k).or_insert(0);
            *e = (*e + v) % self.q;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Basis vectors of `V` lying in `W`, in `W`-basis order.
    pub fn w_in_v(&self) -> Vec<u32> {
        let m = self.q0 as usize - 1;
        (0..self.w_dim() as u32)
            .map(|rho| {
                let t = self.decode(rho, self.gamma_tilde());
                let mut full = vec![0u8; self.gamma()];
                for k in 0..self.t as usize {
                    let s: u32 = t[k * m..(k + 1) * m].iter().map(|&x| x as u32).sum();
                    full[k * self.q0 as usize] = ((self.p - s % self.p) % self.p) as u8;
                }
                for (i, &e) in t.iter().enumerate() {
                    full[self.tilde_to_gamma(i)] = e;
                }
                self.encode(&full)
            })
            .collect()
    }

    // ---- G_1 ----

    pub fn identity(&self) -> CbElement {
        CbElement {
            w: WVec::new(),
            d: self.d_identity(),
            g: 0,
        }
    }

    /// `(w d g)(w' d' g') = (w + w'^{(dg)^-1}) (d d'^{g^-1}) (g g')`.
    pub fn mul(&self, x: &CbElement, y: &CbElement) -> CbElement {
        let g_inv = (self.q0 - x.g) % self.q0;
        let w2 = self.w_act_d(&self.w_act_perm(&y.w, &self.translation(g_inv)), &self.d_inv(&x.d));
        let d2 = self.d_conj_perm(&y.d, &self.translation(g_inv));
        CbElement {
            w: self.w_add(&x.w, &w2),
            d: self.d_mul(&x.d, &d2),
            g: (x.g + y.g) % self.q0,
        }
    }

    pub fn inv(&self, x: &CbElement) -> CbElement {
        // (w d g)^-1 = g^-1 d^-1 (-w)
        let g = CbElement {
            w: WVec::new(),
            d: self.d_identity(),
            g: (self.q0 - x.g) % self.q0,
        };
        let d = CbElement {
            w: WVec::new(),
            d: self.d_inv(&x.d),
            g: 0,
        };
        let w = CbElement {
            w: x.w.iter().map(|(&k, &v)| (k, self.q - v)).collect(),
            d: self.d_identity(),
            g: 0,
        };
        self.mul(&self.mul(&g, &d), &w)
    }

    pub fn generators(&self) -> Vec<CbElement> {
        let mut out = vec![CbElement {
            w: WVec::from([(0, 1)]),
            d: self.d_identity(),
            g: 0,
        }];
        for i in 0..self.gamma_tilde() {
            for d in [self.d_gen_x(i), self.d_gen_y(i)] {
                out.push(CbElement {
                    w: WVec::new(),
                    d,
                    g: 0,
                });
            }
        }
        out.push(CbElement {
            w: WVec::new(),
            d: self.d_gen_z(),
            g: 0,
        });
        out.push(CbElement {
            w: WVec::new(),
            d: self.d_identity(),
            g: 1,
        });
        out
    }

    pub fn random_d(&self, rng: &mut ChaCha8Rng) -> DElem {
        let n = self.gamma_tilde();
        DElem {
            a: (0..n).map(|_| rng.gen_range(0..self.p) as u8).collect(),
            b: (0..n).map(|_| rng.gen_range(0..self.p) as u8).collect(),
            c: rng.gen_range(0..self.p) as u8,
        }
    }

    pub fn random(&self, rng: &mut ChaCha8Rng) -> CbElement {
        let mut w = WVec::new();
        for _ in 0..4 {
            let c = rng.gen_range(0..self.q);
            if c != 0 {
                w.insert(rng.gen_range(0..self.w_dim() as u32), c);
            }
        }
        CbElement {
            w,
            d: self.random_d(rng),
            g: rng.gen_range(0..self.q0),
        }
    }

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    // ---- scalar automorphisms ----

    /// `psi_1` from `lambda_0 in F_{q_0}^*` and `lambda_1 in F_{q_1}^*`.
    pub fn psi(&self, lambda0: u32, lambda1: u32) -> Result<ScalarPsi> {
        if lambda0.is_multiple_of(self.q0) || lambda1.is_multiple_of(self.q) {
            return Err(Error::InvalidParams("scalars must be non-zero".into()));
        }
        Ok(ScalarPsi {
            lambda0: lambda0 % self.q0,
            lambda1: lambda1 % self.q,
        })
    }

    pub fn psi_apply(&self, psi: &ScalarPsi, x: &CbElement) -> CbElement {
        let pi = self.scaling(psi.lambda0);
        let q = self.q as u64;
        CbElement {
            w: self
                .w_act_perm(&x.w, &pi)
                .into_iter()
                .map(|(k, v)| (k, (v as u64 * psi.lambda1 as u64 % q) as u32))
                .collect(),
            d: self.d_conj_perm(&x.d, &pi),
            g: (x.g as u64 * psi.lambda0 as u64 % self.q0 as u64) as u32,
        }
    }

    /// Whether `lambda` lies in `<zeta>`.
    pub fn in_zeta_subgroup(&self, lambda: u32) -> bool {
        self.zeta_log(lambda % self.q).is_some()
    }
}

/// Scalars defining `psi_0 : x -> lambda_0 x` and the action on `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarPsi {
    pub lambda0: u32,
    pub lambda1: u32,
}

impl ScalarPsi {
    pub fn then(&self, other: &ScalarPsi, stage: &Stage) -> ScalarPsi {
        ScalarPsi {
            lambda0: (self.lambda0 as u64 * other.lambda0 as u64 % stage.q0 as u64) as u32,
            lambda1: (self.lambda1 as u64 * other.lambda1 as u64 % stage.q as u64) as u32,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn stage() -> Stage {
        Stage::build(
            &CbParams {
                p: vec![3],
                q: vec![7, 7],
                t: vec![1],
                scalar_mode: true,
            },
            1,
        )
        .unwrap()
    }

    #[test]
    fn sizes() {
        let s = stage();
        assert_eq!((s.gamma(), s.gamma_tilde(), s.v_dim(), s.w_dim()), (7, 6, 2187, 729));
        assert_eq!(s.d_exponent(), 13);
        assert_eq!(s.zeta, 2);
    }

    #[test]
    fn bound_and_stage_errors() {
        let mut p = CbParams {
            p: vec![3],
            q: vec![7, 7],
            t: vec![2],
            scalar_mode: false,
        };
        assert!(matches!(Stage::build(&p, 1), Err(Error::BoundExceeded { .. })));
        p.t = vec![1];
        assert!(Stage::build(&p, 2).is_err());
    }

    #[test]
    fn d_relations() {
        let s = stage();
        let (x, y) = (s.d_gen_x(0), s.d_gen_y(0));
        let xy = s.d_mul(&x, &y);
        let yx = s.d_mul(&y, &x);
        assert_eq!(xy.c, 0);
        assert_eq!(yx.a, xy.a);
        assert_eq!((yx.c + 2) % 3, xy.c);
        let mut rng = Stage::rng(1);
        for _ in 0..20 {
            let d = s.random_d(&mut rng);
            assert_eq!(s.d_mul(&d, &s.d_inv(&d)), s.d_identity());
            let z = s.d_gen_z();
            assert_eq!(s.d_mul(&z, &d), s.d_mul(&d, &z));
        }
    }

    #[test]
    fn w_inside_v() {
        let s = stage();
        let emb = s.w_in_v();
        let mut sorted = emb.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 729);
    }

    #[test]
    fn group_laws_sampled() {
        let s = stage();
        let mut rng = Stage::rng(2);
        for _ in 0..30 {
            let (a, b, c) = (s.random(&mut rng), s.random(&mut rng), s.random(&mut rng));
            assert_eq!(s.mul(&s.mul(&a, &b), &c), s.mul(&a, &s.mul(&b, &c)));
            assert_eq!(s.mul(&a, &s.inv(&a)), s.identity());
        }
    }
}
