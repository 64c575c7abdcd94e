use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::auto::Automorphism;
use crate::error::{bound_check, Error, Result};
use crate::group::{is_subprimitive, Enumerated, FinGroup, ENUMERATION_BOUND, LATTICE_BOUND};
use crate::perm::{PermGroup, Permutation};

/// Default cap on the degree of an explicit product action.
pub const PRODUCT_DEGREE_BOUND: usize = 10_000;

/// Enumerates `x` and checks that it is non-abelian simple.
pub fn check_simple(x: &PermGroup) -> Result<Enumerated<Permutation>> {
    let en = FinGroup::enumerate(x, ENUMERATION_BOUND)?;
    bound_check("simple factor order", en.group.order() as u128, LATTICE_BOUND as u128)?;
    if en.group.is_abelian() {
        return Err(Error::Precondition("factor group is abelian".into()));
    }
    if en.group.normal_subgroups()?.len() != 2 {
        return Err(Error::Precondition("factor group is not simple".into()));
    }
    Ok(en)
}

/// `X wr_Omega H` in its imprimitive action on `Omega x {0..d}`, point
/// `(w, i)` numbered `w * d + i`. Elements are written `f h` with `f` in
/// the base and `h` permuting blocks.
#[derive(Clone, Debug)]
pub struct HarnessWreath {
    pub x: PermGroup,
    pub h: PermGroup,
    pub x_elems: Enumerated<Permutation>,
    pub group: PermGroup,
    pub base: PermGroup,
}

impl HarnessWreath {
    pub fn new(x: &PermGroup, h: &PermGroup) -> Result<Self> {
        let x_elems = check_simple(x)?;
        if !h.is_transitive() {
            return Err(Error::Precondition("top group is not transitive".into()));
        }
        let (d, m) = (x.degree(), h.degree());
        let base_gens: Vec<Permutation> = (0..m)
            .flat_map(|w| x.generators().iter().map(move |g| g.shifted(w * d, d * m)))
            .collect();
        let top: Vec<Permutation> = h.generators().iter().map(|t| Self::lift_top(t, d)).collect();
        let x_order = x.order();
        let base_order = x_order
            .checked_pow(m as u32)
            .ok_or_else(|| Error::InvalidParams("wreath base order overflows".into()))?;
        let base = PermGroup::with_known_order(d * m, base_gens.clone(), base_order)?;
        let mut all = base_gens;
        all.extend(top);
        let group = PermGroup::with_known_order(d * m, all, base_order * h.order())?;
        Ok(HarnessWreath {
            x: x.clone(),
            h: h.clone(),
            x_elems,
            group,
            base,
        })
    }

    pub fn block_size(&self) -> usize {
        self.x.degree()
    }

    pub fn blocks(&self) -> usize {
        self.h.degree()
    }

    fn lift_top(t: &Permutation, d: usize) -> Permutation {
        let images = (0..t.degree() * d)
            .map(|p| t.apply((p / d) as u32) * d as u32 + (p % d) as u32)
            .collect();
        Permutation::from_images(images).expect("block permutation")
    }

    /// Splits `w = f h` into base coordinates and block permutation.
    pub fn decompose(&self, w: &Permutation) -> (Vec<Permutation>, Permutation) {
        let (d, m) = (self.block_size(), self.blocks());
        let h = Permutation::from_images((0..m).map(|b| w.apply((b * d) as u32) / d as u32).collect())
            .expect("element preserves the block system");
        let f = (0..m)
            .map(|b| {
                let images = (0..d).map(|i| w.apply((b * d + i) as u32) % d as u32).collect();
                Permutation::from_images(images).expect("block image is a bijection")
            })
            .collect();
        (f, h)
    }

    pub fn compose(&self, f: &[Permutation], h: &Permutation) -> Permutation {
        let d = self.block_size();
        let images = (0..d * self.blocks())
            .map(|p| {
                let (b, i) = (p / d, p % d);
                h.apply(b as u32) * d as u32 + f[b].apply(i as u32)
            })
            .collect();
        Permutation::from_images(images).expect("wreath element")
    }

    pub fn in_base(&self, w: &Permutation) -> bool {
        let d = self.block_size();
        (0..self.blocks()).all(|b| w.apply((b * d) as u32) as usize / d == b)
    }

    /// `B x| L` for `L` given by generators on `Omega`.
    pub fn base_extension(&self, l_gens: &[Permutation], l_order: u128) -> Result<PermGroup> {
        let mut gens = self.base.generators().to_vec();
        gens.extend(l_gens.iter().map(|t| Self::lift_top(t, self.block_size())));
        PermGroup::with_known_order(self.group.degree(), gens, self.base.order() * l_order)
    }

    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> Permutation {
        let chain = self.group.chain();
        chain.unrank(rng.gen_range(0..self.group.order() as u64))
    }
}

/// Conjugacy classes of a permutation group through chain ranks. Returns
/// one representative (smallest rank) per class with the class size.
pub fn class_representatives(k: &PermGroup) -> Result<Vec<(Permutation, usize)>> {
    bound_check("class enumeration order", k.order(), ENUMERATION_BOUND as u128)?;
    let chain = k.chain();
    let n = k.order() as usize;
    let mut seen = FixedBitSet::with_capacity(n);
    let gens: Vec<Permutation> = k.generators().to_vec();
    let mut reps = Vec::new();
    for r in 0..n {
        if seen.contains(r) {
            continue;
        }
        seen.insert(r);
        let rep = chain.unrank(r as u64);
        let mut size = 1;
        let mut queue = VecDeque::from([rep.clone()]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.conjugate_by(g);
                let ry = chain.rank(&y).expect("conjugate stays in the group") as usize;
                if !seen.contains(ry) {
                    seen.insert(ry);
                    size += 1;
                    queue.push_back(y);
                }
            }
        }
        reps.push((rep, size));
    }
    Ok(reps)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalClosureCheck {
    pub l_order: u128,
    pub k_order: u128,
    pub classes: usize,
    pub reps_outside_base: usize,
    /// Representatives whose normal closure misses part of the base.
    pub failures: Vec<Permutation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalClosureReport {
    pub degree: usize,
    pub w_order: u128,
    pub checks: Vec<NormalClosureCheck>,
    pub holds: bool,
}

/// For every `L` normal in `H` and every class representative `g` of
/// `K = B x| L` outside `B`, checks `B <= ncl_K(g)`. Any normal subgroup
/// of `K` not inside `B` contains such a `g`, so this decides the
/// statement for all of them.
pub fn normal_closure_battery(x: &PermGroup, h: &PermGroup) -> Result<NormalClosureReport> {
    let h_elems = FinGroup::enumerate(h, LATTICE_BOUND)?;
    if let Some(f) = is_subprimitive(&h_elems)? {
        return Err(Error::Precondition(format!(
            "top group is not subprimitive: {} fixes the orbit {:?} of a normal subgroup of order {}",
            f.kernel_element,
            f.orbit,
            f.normal.len()
        )));
    }
    let w = HarnessWreath::new(x, h)?;
    let mut checks = Vec::new();
    for l in h_elems.group.normal_subgroups()? {
        let l_gens: Vec<Permutation> = l.generators().iter().map(|&i| h_elems.elem(i).clone()).collect();
        let k = w.base_extension(&l_gens, l.order() as u128)?;
        let classes = class_representatives(&k)?;
        let outside: Vec<&Permutation> = classes.iter().map(|(g, _)| g).filter(|g| !w.in_base(g)).collect();
        let failures: Vec<Permutation> = outside
            .par_iter()
            .filter(|g| {
                let ncl = k.normal_closure(&[(**g).clone()]);
                !w.base.generators().iter().all(|b| ncl.contains(b))
            })
            .map(|g| (*g).clone())
            .collect();
        checks.push(NormalClosureCheck {
            l_order: l.order() as u128,
            k_order: k.order(),
            classes: classes.len(),
            reps_outside_base: outside.len(),
            failures,
        });
    }
    Ok(NormalClosureReport {
        degree: w.group.degree(),
        w_order: w.group.order(),
        holds: checks.iter().all(|c| c.failures.is_empty()),
        checks,
    })
}

/// Product action of `X wr_Omega H` on `X^Omega`, `X` acting on itself
/// by right multiplication. The tuple `(x_w)` is numbered
/// `sum_w idx(x_w) * |X|^w`.
pub struct ProductAction<'a> {
    pub wreath: &'a HarnessWreath,
    pub degree: usize,
}

impl<'a> ProductAction<'a> {
    pub fn new(wreath: &'a HarnessWreath, bound: usize) -> Result<Self> {
        let n = wreath.x_elems.group.order() as u128;
        let degree = n.checked_pow(wreath.blocks() as u32).unwrap_or(u128::MAX);
        bound_check("product action degree", degree, bound as u128)?;
        Ok(ProductAction {
            wreath,
            degree: degree as usize,
        })
    }

    /// Image of an element of the imprimitive representation.
    pub fn image(&self, w: &Permutation) -> Permutation {
        let (f, h) = self.wreath.decompose(w);
        let xg = &self.wreath.x_elems;
        let n = xg.group.order();
        let m = self.wreath.blocks();
        let fi: Vec<u32> = f
            .iter()
            .map(|p| xg.index_of(p).expect("coordinate lies in X"))
            .collect();
        let mut digits = vec![0u32; m];
        let images = (0..self.degree)
            .map(|mut t| {
                for d in digits.iter_mut() {
                    *d = (t % n) as u32;
                    t /= n;
                }
                let mut out = 0usize;
                for (w, &xw) in digits.iter().enumerate() {
                    let y = xg.group.mul(xw, fi[w]);
                    out += y as usize * n.pow(h.apply(w as u32));
                }
                out as u32
            })
            .collect();
        Permutation::from_images(images).expect("product action is a bijection")
    }

    pub fn image_group(&self, gens: &[Permutation]) -> Result<PermGroup> {
        PermGroup::new(self.degree, gens.iter().map(|g| self.image(g)).collect())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductActionReport {
    pub degree: usize,
    pub faithful: bool,
    pub transitive: bool,
    pub base_regular: bool,
    pub base_unique_minimal_normal: bool,
    pub normal_subgroups: usize,
    pub subprimitive: bool,
}

impl ProductActionReport {
    pub fn holds(&self) -> bool {
        self.faithful && self.transitive && self.base_regular && self.base_unique_minimal_normal && self.subprimitive
    }
}

/// Builds the product action explicitly and checks faithfulness,
/// transitivity, regularity and uniqueness of the base as minimal normal
/// subgroup, and faithfulness of every normal subgroup on its orbits.
pub fn product_action_verify(x: &PermGroup, h: &PermGroup, bound: usize) -> Result<ProductActionReport> {
    let w = HarnessWreath::new(x, h)?;
    let pa = ProductAction::new(&w, bound)?;
    let p = pa.image_group(w.group.generators())?;
    let pb = pa.image_group(w.base.generators())?;
    let faithful = p.order() == w.group.order();
    let transitive = p.is_transitive();
    let base_regular = pb.order() == pa.degree as u128 && pb.is_transitive();

    let en = FinGroup::enumerate(&w.group, LATTICE_BOUND)?;
    let g = &en.group;
    let normals = g.normal_subgroups()?;
    let minimal: Vec<_> = normals
        .iter()
        .filter(|n| !n.is_trivial() && !normals.iter().any(|m| !m.is_trivial() && m.is_proper_subset(n)))
        .collect();
    let base_unique_minimal_normal = minimal.len() == 1
        && minimal[0].order() as u128 == w.base.order()
        && minimal[0].elements().iter().all(|&i| w.in_base(en.elem(i)));
    let mut subprimitive = true;
    for n in normals.iter().filter(|n| !n.is_trivial()) {
        let gens: Vec<Permutation> = n.generators().iter().map(|&i| en.elem(i).clone()).collect();
        let img = pa.image_group(&gens)?;
        for orbit in img.orbits() {
            let restricted: Vec<Permutation> = img.generators().iter().map(|s| s.restrict(&orbit)).collect();
            let r = PermGroup::new(orbit.len(), restricted)?;
            if r.order() != n.order() as u128 {
                subprimitive = false;
            }
        }
    }
    Ok(ProductActionReport {
        degree: pa.degree,
        faithful,
        transitive,
        base_regular,
        base_unique_minimal_normal,
        normal_subgroups: normals.len(),
        subprimitive,
    })
}

/// `f h -> (f_w phi) h`: an automorphism applied in every coordinate.
#[derive(Clone, Debug)]
pub struct CoordinatePsi {
    pub phi: Automorphism,
}

impl CoordinatePsi {
    pub fn apply(&self, w: &HarnessWreath, g: &Permutation) -> Permutation {
        let (f, h) = w.decompose(g);
        let xg = &w.x_elems;
        let f2: Vec<Permutation> = f
            .iter()
            .map(|p| {
                xg.elem(self.phi.apply(xg.index_of(p).expect("coordinate lies in X")))
                    .clone()
            })
            .collect();
        w.compose(&f2, &h)
    }

    pub fn then(&self, other: &CoordinatePsi) -> CoordinatePsi {
        CoordinatePsi {
            phi: self.phi.then(&other.phi),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PsiSampleReport {
    pub seed: u64,
    pub samples: usize,
    pub hom_mismatches: usize,
    pub compose_mismatches: usize,
}

/// Homomorphism law for `psi` and the composition law for `psi` then
/// `psi2` on random pairs plus all generators.
pub fn coordinate_psi_samples(
    w: &HarnessWreath,
    psi: &CoordinatePsi,
    psi2: &CoordinatePsi,
    samples: usize,
    seed: u64,
) -> PsiSampleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let both = psi.then(psi2);
    let mut hom = 0;
    let mut comp = 0;
    let mut elems: Vec<(Permutation, Permutation)> = (0..samples)
        .map(|_| (w.random_element(&mut rng), w.random_element(&mut rng)))
        .collect();
    for a in w.group.generators() {
        for b in w.group.generators() {
            elems.push((a.clone(), b.clone()));
        }
    }
    for (a, b) in &elems {
        if psi.apply(w, &a.mul(b)) != psi.apply(w, a).mul(&psi.apply(w, b)) {
            hom += 1;
        }
        if psi2.apply(w, &psi.apply(w, a)) != both.apply(w, a) {
            comp += 1;
        }
    }
    PsiSampleReport {
        seed,
        samples: elems.len(),
        hom_mismatches: hom,
        compose_mismatches: comp,
    }
}

/// A single-coordinate base element whose class is moved by `psi`.
#[derive(Clone, Debug, Serialize)]
pub struct OuterCertificate {
    pub coordinate: usize,
    pub entry: Permutation,
    pub image: Permutation,
    pub class_size: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum OuterVerdict {
    Certificate(OuterCertificate),
    Inconclusive,
}

/// `b` with entry `s` in one coordinate is conjugate in `W` to a
/// single-coordinate element exactly when that element's entry is
/// `X`-conjugate to `s`. If `s phi` is not, `psi` moves a conjugacy class
/// and is not inner.
pub fn outer_certificate(w: &HarnessWreath, psi: &CoordinatePsi) -> OuterVerdict {
    let xg = &w.x_elems.group;
    for class in xg.conjugacy_classes() {
        let s = class[0];
        let t = psi.phi.apply(s);
        if class.binary_search(&t).is_err() {
            return OuterVerdict::Certificate(OuterCertificate {
                coordinate: 0,
                entry: w.x_elems.elem(s).clone(),
                image: w.x_elems.elem(t).clone(),
                class_size: class.len(),
            });
        }
    }
    OuterVerdict::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    fn a5() -> PermGroup {
        corpus::perm_group("A5").unwrap()
    }

    fn transposition_psi(w: &HarnessWreath) -> CoordinatePsi {
        let t = Permutation::from_cycles(5, &[vec![0, 1]]).unwrap();
        CoordinatePsi {
            phi: Automorphism::conjugation(&w.x_elems, &t).unwrap(),
        }
    }

    #[test]
    fn decompose_roundtrip() {
        let h = PermGroup::from_cycles(3, &[vec![vec![0, 1, 2]], vec![vec![0, 1]]]).unwrap();
        let w = HarnessWreath::new(&a5(), &h).unwrap();
        assert_eq!(w.group.order(), 1_296_000);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let g = w.random_element(&mut rng);
            let (f, t) = w.decompose(&g);
            assert_eq!(w.compose(&f, &t), g);
        }
    }

    #[test]
    fn rejects_abelian_and_non_simple() {
        let c2 = PermGroup::from_cycles(2, &[vec![vec![0, 1]]]).unwrap();
        assert!(HarnessWreath::new(&corpus::perm_group("C6").unwrap(), &c2).is_err());
        assert!(HarnessWreath::new(&corpus::perm_group("S4").unwrap(), &c2).is_err());
    }

    #[test]
    fn battery_c2_regular() {
        let c2 = PermGroup::from_cycles(2, &[vec![vec![0, 1]]]).unwrap();
        let r = normal_closure_battery(&a5(), &c2).unwrap();
        assert!(r.holds);
        assert_eq!(r.checks.len(), 2);
        assert!(r.checks.iter().all(|c| c.reps_outside_base > 0 || c.l_order == 1));
    }

    #[test]
    fn battery_rejects_d4() {
        let d4 = corpus::perm_group("D4").unwrap();
        let err = normal_closure_battery(&a5(), &d4).unwrap_err();
        assert!(err.to_string().contains("not subprimitive"), "{err}");
    }

    #[test]
    fn product_action_trivial_top() {
        let one = PermGroup::trivial(1);
        let r = product_action_verify(&a5(), &one, PRODUCT_DEGREE_BOUND).unwrap();
        assert_eq!(r.degree, 60);
        assert!(r.holds());
    }

    #[test]
    fn product_action_bound() {
        let s3 = corpus::perm_group("S3").unwrap();
        assert!(matches!(
            product_action_verify(&a5(), &s3, PRODUCT_DEGREE_BOUND),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn product_action_is_homomorphic() {
        let c2 = PermGroup::from_cycles(2, &[vec![vec![0, 1]]]).unwrap();
        let w = HarnessWreath::new(&a5(), &c2).unwrap();
        let pa = ProductAction::new(&w, PRODUCT_DEGREE_BOUND).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let (a, b) = (w.random_element(&mut rng), w.random_element(&mut rng));
            assert_eq!(pa.image(&a.mul(&b)), pa.image(&a).mul(&pa.image(&b)));
        }
    }

    #[test]
    fn certificate_matches_brute_conjugacy() {
        let c2 = PermGroup::from_cycles(2, &[vec![vec![0, 1]]]).unwrap();
        let w = HarnessWreath::new(&a5(), &c2).unwrap();
        let psi = transposition_psi(&w);
        let OuterVerdict::Certificate(cert) = outer_certificate(&w, &psi) else {
            panic!("expected a certificate");
        };
        let id = Permutation::identity(5);
        let b = w.compose(&[cert.entry.clone(), id.clone()], &Permutation::identity(2));
        let bpsi = psi.apply(&w, &b);
        let all = w.group.elements(10_000).unwrap();
        assert!(all.iter().all(|g| b.conjugate_by(g) != bpsi));
        let inner = CoordinatePsi {
            phi: Automorphism::inner(&w.x_elems.group, 7),
        };
        assert!(matches!(outer_certificate(&w, &inner), OuterVerdict::Inconclusive));
        let ident = CoordinatePsi {
            phi: Automorphism::identity(&w.x_elems.group),
        };
        assert!(matches!(outer_certificate(&w, &ident), OuterVerdict::Inconclusive));
    }

    #[test]
    fn psi_samples_clean() {
        let c2 = PermGroup::from_cycles(2, &[vec![vec![0, 1]]]).unwrap();
        let w = HarnessWreath::new(&a5(), &c2).unwrap();
        let psi = transposition_psi(&w);
        let r = coordinate_psi_samples(&w, &psi, &psi, 50, 9);
        assert_eq!((r.hom_mismatches, r.compose_mismatches), (0, 0));
    }
}
