use rayon::prelude::*;
use serde::Serialize;

use super::monomial::Monomial;
use super::stage::{DElem, Stage};
use crate::error::Result;
use crate::group::{FinGroup, FiniteGroup};

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    pub plain_pairs: usize,
    pub tilde_pairs: usize,
    /// `(gamma, delta, expected z-exponent)` for each failing pair.
    pub plain_failures: Vec<(usize, usize, u32)>,
    pub tilde_failures: Vec<(usize, usize, u32)>,
    /// The diagonal commutator equals `z` on every basis vector of `V`.
    pub diagonal_is_z: bool,
}

impl CommutatorReport {
    pub fn holds(&self) -> bool {
        self.plain_failures.is_empty() && self.tilde_failures.is_empty() && self.diagonal_is_z
    }
}

fn z_power(stage: &Stage, k: u32) -> Monomial {
    let z = stage.z();
    let mut m = Monomial::identity(stage.v_dim(), stage.q);
    for _ in 0..k % stage.p {
        m = m.then(&z);
    }
    m
}

/// `[x_g, y_d]` against `z` or `1` over all of `Gamma^2`, and
/// `[x~_g, y~_d]` against `z^2`, `z` or `1` over `Gamma~^2`.
pub fn verify_commutators(stage: &Stage) -> CommutatorReport {
    let n = stage.gamma();
    let xs: Vec<Monomial> = (0..n).map(|g| stage.x(g)).collect();
    let ys: Vec<Monomial> = (0..n).map(|g| stage.y(g)).collect();
    let zs: Vec<Monomial> = (0..stage.p).map(|k| z_power(stage, k)).collect();
    let plain_failures: Vec<(usize, usize, u32)> = (0..n * n)
        .into_par_iter()
        .filter_map(|i| {
            let (g, d) = (i / n, i % n);
            let want = (g == d) as u32;
            (xs[g].commutator(&ys[d]) != zs[want as usize]).then_some((g, d, want))
        })
        .collect();
    let m = stage.gamma_tilde();
    let xt: Vec<Monomial> = (0..m).map(|g| stage.x_tilde(g)).collect();
    let yt: Vec<Monomial> = (0..m).map(|g| stage.y_tilde(g)).collect();
    let tilde_failures: Vec<(usize, usize, u32)> = (0..m * m)
        .into_par_iter()
        .filter_map(|i| {
            let (g, d) = (i / m, i % m);
            let want = stage.tilde_table[g][d] as u32;
            (xt[g].commutator(&yt[d]) != zs[want as usize]).then_some((g, d, want))
        })
        .collect();
    let c = xs[0].commutator(&ys[0]);
    let diagonal_is_z = (0..stage.v_dim()).all(|i| c.perm[i] == i as u32 && c.coef[i] == stage.zeta);
    CommutatorReport {
        plain_pairs: n * n,
        tilde_pairs: m * m,
        plain_failures,
        tilde_failures,
        diagonal_is_z,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalFormReport {
    pub generator_pairs: usize,
    pub sampled_pairs: usize,
    pub failures: usize,
    /// The closed-form action on `W` agrees with the restricted `V` maps.
    pub w_action_failures: usize,
}

fn d_generators(stage: &Stage) -> Vec<DElem> {
    let mut out = Vec::new();
    for i in 0..stage.gamma_tilde() {
        out.push(stage.d_gen_x(i));
        out.push(stage.d_gen_y(i));
    }
    out.push(stage.d_gen_z());
    out
}

/// Normal-form products against composition of the maps on `V`.
pub fn verify_normal_form(stage: &Stage, samples: usize, seed: u64) -> NormalFormReport {
    let gens = d_generators(stage);
    let mut pairs: Vec<(DElem, DElem)> = Vec::new();
    for a in &gens {
        for b in &gens {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let generator_pairs = pairs.len();
    let mut rng = Stage::rng(seed);
    for _ in 0..samples {
        pairs.push((stage.random_d(&mut rng), stage.random_d(&mut rng)));
    }
    let failures = pairs
        .par_iter()
        .filter(|(a, b)| {
            let lhs = stage.d_monomial(&stage.d_mul(a, b));
            lhs != stage.d_monomial(a).then(&stage.d_monomial(b))
        })
        .count();
    let w_basis = stage.w_in_v();
    let w_index = |v: u32| w_basis.iter().position(|&b| b == v).map(|i| i as u32);
    let mut probe: Vec<DElem> = gens.clone();
    probe.extend((0..samples.min(20)).map(|_| stage.random_d(&mut rng)));
    let w_action_failures = probe
        .par_iter()
        .filter(|d| {
            let m = stage.d_monomial(d);
            let Some(r) = m.restrict(&w_basis, w_index) else {
                return true;
            };
            (0..stage.w_dim() as u32).any(|rho| {
                let (to, c) = stage.w_basis_act_d(rho, d);
                r.perm[rho as usize] != to || r.coef[rho as usize] != c
            })
        })
        .count();
    NormalFormReport {
        generator_pairs,
        sampled_pairs: samples,
        failures,
        w_action_failures,
    }
}

/// Rank of a matrix over `F_p` by elimination.
pub fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = super::monomial::pow_mod(rows[rank][c] as u64, p as u64 - 2, p as u64) as u32;
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_multiple_of(p) {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Radical dimension of the alternating form `((a,b),(a',b')) ->
/// beta(a,b') - beta(a',b)` given the table of `beta`.
pub fn form_radical_dim(table: &[Vec<u8>], p: u32) -> usize {
    let m = table.len();
    let mut rows = vec![vec![0u32; 2 * m]; 2 * m];
    for g in 0..m {
        for d in 0..m {
            let t = table[g][d] as u32 % p;
            rows[g][m + d] = t;
            rows[m + d][g] = (p - t) % p;
        }
    }
    2 * m - rank_mod_p(rows, p)
}

#[derive(Clone, Debug, Serialize)]
pub struct CentreReport {
    pub radical_dim: usize,
    /// `|Z(D)| = p^{1 + radical_dim}`.
    pub centre_order: u128,
    pub hypothesis_holds: bool,
    pub centre_is_z: bool,
    pub diagonal_form_value: u8,
    /// Sanity instance: radical order vs brute-force centre order.
    pub sanity_radical_order: u128,
    pub sanity_brute_order: usize,
}

/// `D` restricted to a slice of `U` in one block, as a group of monomial maps.
struct SliceBackend {
    gens: Vec<Monomial>,
}

impl FiniteGroup for SliceBackend {
    type Elem = Monomial;
    fn identity(&self) -> Monomial {
        Monomial::identity(self.gens[0].dim(), self.gens[0].q)
    }
    fn multiply(&self, a: &Monomial, b: &Monomial) -> Monomial {
        a.then(b)
    }
    fn invert(&self, a: &Monomial) -> Monomial {
        a.inverse()
    }
    fn generators(&self) -> Vec<Monomial> {
        self.gens.clone()
    }
}

/// The subgroup generated by `x~, y~` for `u in {1, 2}` of block 0 and
/// `z`, acting on `F_q[F_p^3]` (coordinates `u_0, 1, 2`).
fn sanity_instance(stage: &Stage) -> Result<(u128, usize)> {
    let (p, q) = (stage.p, stage.q);
    let dim = (p as usize).pow(3);
    let map = |f: &dyn Fn(&mut [u32; 3]) -> u32| {
        let mut perm = Vec::with_capacity(dim);
        let mut coef = Vec::with_capacity(dim);
        for i in 0..dim as u32 {
            let mut r = [i % p, i / p % p, i / (p * p)];
            let c = f(&mut r);
            perm.push(r[0] + p * r[1] + p * p * r[2]);
            coef.push(c);
        }
        Monomial { perm, coef, q }
    };
    let zp = |k: u32| super::monomial::pow_mod(stage.zeta as u64, (k % p) as u64, q as u64) as u32;
    let mut gens = Vec::new();
    for u in 1..3 {
        gens.push(map(&|r: &mut [u32; 3]| {
            r[0] = (r[0] + p - 1) % p;
            r[u] = (r[u] + 1) % p;
            1
        }));
        gens.push(map(&|r: &mut [u32; 3]| zp(r[u] + p - r[0])));
    }
    gens.push(Monomial::scalar(dim, q, stage.zeta));
    let en = FinGroup::enumerate(&SliceBackend { gens }, 100_000)?;
    let brute = en.group.centre().order();
    let table: Vec<Vec<u8>> = (0..2)
        .map(|g| (0..2).map(|d| (((g == d) as u32 + 1) % p) as u8).collect())
        .collect();
    let rad = form_radical_dim(&table, p);
    Ok(((p as u128).pow(1 + rad as u32), brute))
}

/// `Z(D)` as `<z>` times the radical of the commutator form.
pub fn centre_of_d(stage: &Stage) -> Result<CentreReport> {
    let radical_dim = form_radical_dim(&stage.tilde_table, stage.p);
    let hypothesis_holds = (stage.q0 - 1).is_multiple_of(stage.p);
    let (sanity_radical_order, sanity_brute_order) = sanity_instance(stage)?;
    Ok(CentreReport {
        radical_dim,
        centre_order: (stage.p as u128).pow(1 + radical_dim as u32),
        hypothesis_holds,
        centre_is_z: radical_dim == 0,
        diagonal_form_value: stage.tilde_table[0][0],
        sanity_radical_order,
        sanity_brute_order,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CentreG1Report {
    pub zeta: u32,
    /// `z` scales every basis vector of `W` by `zeta`, and `zeta != 1`.
    pub z_scales_w: bool,
    /// Only `a = 0` fixes the basis vector `e_0`.
    pub translation_forced: bool,
    /// Every non-zero `g` in `G_0` moves some tilde basis vector.
    pub g_forced: bool,
    /// The `b`-part acts on the tilde basis vectors through an invertible
    /// matrix, and `z^c` scales `e_0`.
    pub diagonal_forced: bool,
    pub x_moves_one: bool,
    pub y_scales_some: bool,
}

impl CentreG1Report {
    pub fn holds(&self) -> bool {
        self.z_scales_w && self.translation_forced && self.g_forced && self.diagonal_forced
    }
}

/// The two steps showing `Z(G_1) = 1`: `Z(G_1) n W = 0` since `z` acts
/// as `zeta`, and no non-trivial `d g` acts trivially on `W`.
pub fn verify_centre_g1(stage: &Stage) -> CentreG1Report {
    let z = stage.d_gen_z();
    let z_scales_w =
        stage.zeta != 1 && (0..stage.w_dim() as u32).all(|rho| stage.w_basis_act_d(rho, &z) == (rho, stage.zeta));
    // e_0 -> coefficient * e_a (up to the g-permutation, which fixes 0)
    let translation_forced = (0..stage.q0).all(|g| stage.w_basis_act_perm(0, &stage.translation(g)) == 0);
    let m = stage.gamma_tilde();
    let unit = |i: usize| -> u32 { stage.p.pow(i as u32) };
    let g_forced = (1..stage.q0).all(|g| {
        let pi = stage.translation(g);
        (0..m).any(|i| stage.w_basis_act_perm(unit(i), &pi) != unit(i))
    });
    let rows: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let (_, c) = stage.w_basis_act_d(unit(i), &stage.d_gen_y(j));
                    stage.zeta_log(c).expect("y~ scales by a power of zeta")
                })
                .collect()
        })
        .collect();
    let diagonal_forced = rank_mod_p(rows, stage.p) == m && stage.w_basis_act_d(0, &z).1 != 1;
    let x_moves_one = stage.w_basis_act_d(0, &stage.d_gen_x(0)).0 != 0;
    let y_scales_some = (0..stage.w_dim() as u32).any(|rho| stage.w_basis_act_d(rho, &stage.d_gen_y(0)).1 != 1);
    CentreG1Report {
        zeta: stage.zeta,
        z_scales_w,
        translation_forced,
        g_forced,
        diagonal_forced,
        x_moves_one,
        y_scales_some,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiReport {
    pub lambda0: u32,
    pub lambda1: u32,
    pub seed: u64,
    pub conjugation_failures: usize,
    pub generator_pairs: usize,
    pub sampled_pairs: usize,
    pub hom_failures: usize,
    pub compose_failures: usize,
    pub commute_failures: usize,
    pub restriction_failures: usize,
    /// First index with a non-trivial scalar and whether it avoids `<zeta>`
    /// there (index 0 needs only `lambda_0 != 1`).
    pub outer_hypotheses: Option<(usize, bool)>,
    pub lambda1_in_zeta_subgroup: bool,
}

impl PsiReport {
    pub fn holds(&self) -> bool {
        self.conjugation_failures
            + self.hom_failures
            + self.compose_failures
            + self.commute_failures
            + self.restriction_failures
            == 0
    }
}

/// The conjugation identities for the induced map of `V` on every
/// `x_delta`, `y_delta`, then homomorphism, composition and commuting
/// laws of the resulting automorphism of `G_1`.
pub fn verify_scalar_psi(stage: &Stage, lambda0: u32, lambda1: u32, samples: usize, seed: u64) -> Result<PsiReport> {
    let psi = stage.psi(lambda0, lambda1)?;
    let pi = stage.scaling(psi.lambda0);
    let pv = stage.u_permutation(&pi);
    let q0 = stage.q0 as usize;
    let conjugation_failures = (0..stage.gamma())
        .into_par_iter()
        .map(|d| {
            let (k, u) = (d / q0, d % q0);
            let dpsi = k * q0 + pi[u] as usize;
            (stage.x(d).conjugate_by(&pv) != stage.x(dpsi)) as usize
                + (stage.y(d).conjugate_by(&pv) != stage.y(dpsi)) as usize
        })
        .sum();

    let gens = stage.generators();
    let mut pairs = Vec::new();
    for a in &gens {
        for b in &gens {
            pairs.push((a.clone(), b.clone()));
        }
    }
    let generator_pairs = pairs.len();
    let mut rng = Stage::rng(seed);
    for _ in 0..samples {
        pairs.push((stage.random(&mut rng), stage.random(&mut rng)));
    }
    let hom_failures = pairs
        .par_iter()
        .filter(|(a, b)| {
            stage.psi_apply(&psi, &stage.mul(a, b)) != stage.mul(&stage.psi_apply(&psi, a), &stage.psi_apply(&psi, b))
        })
        .count();
    let other = stage.psi(1 + (lambda0 % (stage.q0 - 1)), stage.q - 1)?;
    let both = psi.then(&other, stage);
    let mut compose_failures = 0;
    let mut commute_failures = 0;
    let mut restriction_failures = 0;
    for (a, _) in pairs.iter().take(generator_pairs + samples.min(200)) {
        let ab = stage.psi_apply(&other, &stage.psi_apply(&psi, a));
        if ab != stage.psi_apply(&both, a) {
            compose_failures += 1;
        }
        if ab != stage.psi_apply(&psi, &stage.psi_apply(&other, a)) {
            commute_failures += 1;
        }
        let mut g0 = stage.identity();
        g0.g = a.g;
        let img = stage.psi_apply(&psi, &g0);
        if img.g as u64 != a.g as u64 * psi.lambda0 as u64 % stage.q0 as u64 || !img.w.is_empty() {
            restriction_failures += 1;
        }
    }
    let outer_hypotheses = if psi.lambda0 != 1 {
        Some((0, true))
    } else if psi.lambda1 != 1 {
        Some((1, !stage.in_zeta_subgroup(psi.lambda1)))
    } else {
        None
    };
    Ok(PsiReport {
        lambda0: psi.lambda0,
        lambda1: psi.lambda1,
        seed,
        conjugation_failures,
        generator_pairs,
        sampled_pairs: samples,
        hom_failures,
        compose_failures,
        commute_failures,
        restriction_failures,
        outer_hypotheses,
        lambda1_in_zeta_subgroup: stage.in_zeta_subgroup(psi.lambda1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::CbParams;

    fn stage() -> Stage {
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
    fn commutator_battery() {
        let r = verify_commutators(&stage());
        assert_eq!((r.plain_pairs, r.tilde_pairs), (49, 36));
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn normal_form_is_faithful() {
        let r = verify_normal_form(&stage(), 10, 1);
        assert_eq!(r.generator_pairs, 169);
        assert_eq!((r.failures, r.w_action_failures), (0, 0));
    }

    #[test]
    fn centre() {
        let r = centre_of_d(&stage()).unwrap();
        assert!(r.hypothesis_holds && r.centre_is_z);
        assert_eq!(r.centre_order, 3);
        assert_eq!(r.diagonal_form_value, 2);
        assert_eq!(r.sanity_radical_order, 27);
        assert_eq!(r.sanity_brute_order, 27);
    }

    #[test]
    fn centre_g1() {
        let r = verify_centre_g1(&stage());
        assert!(r.holds() && r.x_moves_one && r.y_scales_some);
        assert_eq!(r.zeta, 2);
    }

    #[test]
    fn scalar_psi() {
        let s = stage();
        let r = verify_scalar_psi(&s, 3, 6, 50, 4).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(!r.lambda1_in_zeta_subgroup);
        let id = s.psi(1, 1).unwrap();
        let mut rng = Stage::rng(5);
        let g = s.random(&mut rng);
        assert_eq!(s.psi_apply(&id, &g), g);
        assert!(verify_scalar_psi(&s, 0, 1, 1, 1).is_err());
        assert_eq!(
            verify_scalar_psi(&s, 1, 2, 1, 1).unwrap().outer_hypotheses,
            Some((1, false))
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_mod_p(vec![vec![2, 1], vec![1, 2]], 3), 1);
        assert_eq!(rank_mod_p(vec![vec![2, 1], vec![1, 2]], 5), 2);
    }
}
