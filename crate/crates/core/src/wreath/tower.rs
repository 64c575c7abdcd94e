use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::auto::Automorphism;
use super::harness::{check_simple, OuterCertificate, OuterVerdict};
use crate::error::{Error, Result};
use crate::group::{corpus, Enumerated};
use crate::perm::{PermGroup, Permutation};

/// How `W_n` acts on `Omega_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Action {
    /// Regular action on `W_n` itself.
    #[default]
    R,
    /// Product action on the base group `B_n`.
    P,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelSpec {
    pub simple: String,
    pub action: Action,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WreathSpec {
    pub levels: Vec<LevelSpec>,
}

/// Sparse base map `Omega_{n-1} -> X_n`, identity entries omitted.
pub type BaseMap = BTreeMap<OmegaPoint, u32>;

/// Element of `W_n`: an element of `X_0`, or a base map with a top
/// element of `W_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TowerElement {
    Simple(u32),
    Wreath { base: BaseMap, top: Box<TowerElement> },
}

/// A point of `Omega_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OmegaPoint {
    Element(TowerElement),
    Base(BaseMap),
}

/// `|Omega_n|` exactly when it fits, and its decimal logarithm.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OmegaSize {
    pub exact: Option<u128>,
    pub log10: f64,
}

struct Level {
    name: String,
    x: Enumerated<Permutation>,
    action: Action,
}

/// Iterated wreath products `W_0 = X_0`, `W_n = X_n wr W_{n-1}` with
/// structural (sparse) elements.
pub struct Tower {
    levels: Vec<Level>,
    omega: Vec<OmegaSize>,
}

/// Omega sets up to this size are enumerated for exhaustive checks.
pub const OMEGA_ENUMERATION_BOUND: u128 = 100_000;
const DENSE_BASE_BOUND: u128 = 128;
const SPARSE_SUPPORT: usize = 3;

impl Tower {
    /// Builds `W_0 .. W_depth` from the first `depth + 1` levels of `spec`.
    pub fn build(spec: &WreathSpec, depth: usize) -> Result<Tower> {
        if spec.levels.len() <= depth {
            return Err(Error::InvalidParams(format!(
                "depth {depth} needs {} levels, spec has {}",
                depth + 1,
                spec.levels.len()
            )));
        }
        let mut levels = Vec::new();
        for l in &spec.levels[..=depth] {
            let g = corpus::perm_group(&l.simple)
                .ok_or_else(|| Error::InvalidParams(format!("unknown group {}", l.simple)))?;
            levels.push(Level {
                name: l.simple.clone(),
                x: check_simple(&g)?,
                action: l.action,
            });
        }
        Ok(Self::from_levels(levels))
    }

    /// Builds from explicit groups.
    pub fn from_groups(groups: &[(PermGroup, Action)]) -> Result<Tower> {
        let mut levels = Vec::new();
        for (i, (g, a)) in groups.iter().enumerate() {
            levels.push(Level {
                name: format!("X{i}"),
                x: check_simple(g)?,
                action: *a,
            });
        }
        if levels.is_empty() {
            return Err(Error::InvalidParams("tower needs at least one level".into()));
        }
        Ok(Self::from_levels(levels))
    }

    fn from_levels(levels: Vec<Level>) -> Tower {
        let mut omega: Vec<OmegaSize> = Vec::new();
        let mut w_log = 0.0f64;
        let mut w_exact: Option<u128> = Some(1);
        for (n, l) in levels.iter().enumerate() {
            let xo = l.x.group.order() as u128;
            let xl = (xo as f64).log10();
            let (base_exact, base_log) = match omega.last() {
                None => (Some(xo), xl),
                Some(prev) => {
                    let e = prev
                        .exact
                        .and_then(|k| u32::try_from(k).ok())
                        .and_then(|k| xo.checked_pow(k));
                    (e, 10f64.powf(prev.log10) * xl)
                }
            };
            w_exact = if n == 0 {
                Some(xo)
            } else {
                w_exact.zip(base_exact).and_then(|(a, b)| a.checked_mul(b))
            };
            w_log = if n == 0 { xl } else { w_log + base_log };
            omega.push(match (n, l.action) {
                (0, _) | (_, Action::R) => OmegaSize {
                    exact: w_exact,
                    log10: w_log,
                },
                (_, Action::P) => OmegaSize {
                    exact: base_exact,
                    log10: base_log,
                },
            });
        }
        Tower { levels, omega }
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn omega_sizes(&self) -> &[OmegaSize] {
        &self.omega
    }

    pub fn level_names(&self) -> Vec<&str> {
        self.levels.iter().map(|l| l.name.as_str()).collect()
    }

    pub fn simple(&self, n: usize) -> &Enumerated<Permutation> {
        &self.levels[n].x
    }

    pub fn identity(&self, n: usize) -> TowerElement {
        if n == 0 {
            TowerElement::Simple(0)
        } else {
            TowerElement::Wreath {
                base: BaseMap::new(),
                top: Box::new(self.identity(n - 1)),
            }
        }
    }

    /// `W_{n-1} -> W_n`.
    pub fn include(&self, y: &TowerElement) -> TowerElement {
        TowerElement::Wreath {
            base: BaseMap::new(),
            top: Box::new(y.clone()),
        }
    }

    /// `rho_n : W_n -> W_{n-1}`.
    pub fn project(&self, g: &TowerElement) -> Result<TowerElement> {
        match g {
            TowerElement::Wreath { top, .. } => Ok((**top).clone()),
            TowerElement::Simple(_) => Err(Error::Precondition("W_0 has no projection".into())),
        }
    }

    /// Base element `{w: x}` of `B_n`.
    pub fn base_element(&self, n: usize, w: OmegaPoint, x: u32) -> TowerElement {
        let mut base = BaseMap::new();
        if x != 0 {
            base.insert(w, x);
        }
        TowerElement::Wreath {
            base,
            top: Box::new(self.identity(n - 1)),
        }
    }

    pub fn mul(&self, n: usize, a: &TowerElement, b: &TowerElement) -> TowerElement {
        match (a, b) {
            (TowerElement::Simple(x), TowerElement::Simple(y)) => {
                TowerElement::Simple(self.levels[0].x.group.mul(*x, *y))
            }
            (TowerElement::Wreath { base: f, top: h }, TowerElement::Wreath { base: f2, top: h2 }) => {
                let xg = &self.levels[n].x.group;
                let h_inv = self.inv(n - 1, h);
                let mut base = f.clone();
                for (alpha, &x2) in f2 {
                    let w = self.act(n - 1, alpha, &h_inv);
                    let e = base.entry(w).or_insert(0);
                    *e = xg.mul(*e, x2);
                }
                base.retain(|_, x| *x != 0);
                TowerElement::Wreath {
                    base,
                    top: Box::new(self.mul(n - 1, h, h2)),
                }
            }
            _ => panic!("tower elements from different levels"),
        }
    }

    pub fn inv(&self, n: usize, a: &TowerElement) -> TowerElement {
        match a {
            TowerElement::Simple(x) => TowerElement::Simple(self.levels[0].x.group.inv(*x)),
            TowerElement::Wreath { base: f, top: h } => {
                let xg = &self.levels[n].x.group;
                let base = f.iter().map(|(w, &x)| (self.act(n - 1, w, h), xg.inv(x))).collect();
                TowerElement::Wreath {
                    base,
                    top: Box::new(self.inv(n - 1, h)),
                }
            }
        }
    }

    /// The point of `Omega_n` used to place base generators of `W_{n+1}`.
    pub fn omega_basepoint(&self, n: usize) -> OmegaPoint {
        if n > 0 && self.levels[n].action == Action::P {
            OmegaPoint::Base(BaseMap::new())
        } else {
            OmegaPoint::Element(self.identity(n))
        }
    }

    /// `w^y` for `w` in `Omega_n`, `y` in `W_n`.
    pub fn act(&self, n: usize, w: &OmegaPoint, y: &TowerElement) -> OmegaPoint {
        match w {
            OmegaPoint::Element(e) => OmegaPoint::Element(self.mul(n, e, y)),
            OmegaPoint::Base(f) => {
                let TowerElement::Wreath { base: g, top: t } = y else {
                    panic!("product action needs a wreath element");
                };
                let xg = &self.levels[n].x.group;
                let mut fg = f.clone();
                for (alpha, &x) in g {
                    let e = fg.entry(alpha.clone()).or_insert(0);
                    *e = xg.mul(*e, x);
                }
                OmegaPoint::Base(
                    fg.into_iter()
                        .filter(|(_, x)| *x != 0)
                        .map(|(alpha, x)| (self.act(n - 1, &alpha, t), x))
                        .collect(),
                )
            }
        }
    }

    pub fn generators(&self, n: usize) -> Vec<TowerElement> {
        let xg = &self.levels[n].x.group;
        if n == 0 {
            return xg.generators().iter().map(|&g| TowerElement::Simple(g)).collect();
        }
        let mut out: Vec<TowerElement> = self.generators(n - 1).iter().map(|y| self.include(y)).collect();
        let w0 = self.omega_basepoint(n - 1);
        out.extend(xg.generators().iter().map(|&g| self.base_element(n, w0.clone(), g)));
        out
    }

    /// Every point of `Omega_n` when there are at most `bound`.
    pub fn omega_points(&self, n: usize, bound: u128) -> Option<Vec<OmegaPoint>> {
        if self.omega[n].exact? > bound {
            return None;
        }
        if n == 0 {
            let k = self.levels[0].x.group.order() as u32;
            return Some((0..k).map(|i| OmegaPoint::Element(TowerElement::Simple(i))).collect());
        }
        match self.levels[n].action {
            Action::R => Some(
                self.all_elements(n, bound)?
                    .into_iter()
                    .map(OmegaPoint::Element)
                    .collect(),
            ),
            Action::P => Some(
                self.all_base_maps(n, bound)?
                    .into_iter()
                    .map(OmegaPoint::Base)
                    .collect(),
            ),
        }
    }

    /// Every element of `W_n` when there are at most `bound`.
    pub fn all_elements(&self, n: usize, bound: u128) -> Option<Vec<TowerElement>> {
        let k = self.levels[n].x.group.order() as u32;
        if n == 0 {
            return (k as u128 <= bound).then(|| (0..k).map(TowerElement::Simple).collect());
        }
        let tops = self.all_elements(n - 1, bound)?;
        let bases = self.all_base_maps(n, bound)?;
        if (tops.len() as u128) * (bases.len() as u128) > bound {
            return None;
        }
        let mut out = Vec::new();
        for f in &bases {
            for t in &tops {
                out.push(TowerElement::Wreath {
                    base: f.clone(),
                    top: Box::new(t.clone()),
                });
            }
        }
        Some(out)
    }

    fn all_base_maps(&self, n: usize, bound: u128) -> Option<Vec<BaseMap>> {
        let points = self.omega_points(n - 1, bound)?;
        let k = self.levels[n].x.group.order() as u32;
        let total = (k as u128).checked_pow(points.len() as u32)?;
        if total > bound {
            return None;
        }
        let mut out = vec![BaseMap::new()];
        for p in &points {
            let mut next = Vec::with_capacity(out.len() * k as usize);
            for m in &out {
                for x in 0..k {
                    let mut m2 = m.clone();
                    if x != 0 {
                        m2.insert(p.clone(), x);
                    }
                    next.push(m2);
                }
            }
            out = next;
        }
        Some(out)
    }

    pub fn random_omega(&self, n: usize, rng: &mut ChaCha8Rng) -> OmegaPoint {
        if n > 0 && self.levels[n].action == Action::P {
            OmegaPoint::Base(self.random_base(n, rng))
        } else {
            OmegaPoint::Element(self.random(n, rng))
        }
    }

    fn random_base(&self, n: usize, rng: &mut ChaCha8Rng) -> BaseMap {
        let k = self.levels[n].x.group.order() as u32;
        let mut base = BaseMap::new();
        let dense = self.omega[n - 1].exact.is_some_and(|s| s <= DENSE_BASE_BOUND);
        let points = if dense {
            self.omega_points(n - 1, DENSE_BASE_BOUND)
        } else {
            None
        };
        match points {
            Some(points) => {
                for p in points {
                    let x = rng.gen_range(0..k);
                    if x != 0 {
                        base.insert(p, x);
                    }
                }
            }
            None => {
                for _ in 0..SPARSE_SUPPORT {
                    let p = self.random_omega(n - 1, rng);
                    let x = rng.gen_range(0..k);
                    if x != 0 {
                        base.insert(p, x);
                    }
                }
            }
        }
        base
    }

    /// Random element; base maps are dense over small `Omega`, otherwise
    /// supported on a few random points.
    pub fn random(&self, n: usize, rng: &mut ChaCha8Rng) -> TowerElement {
        if n == 0 {
            let k = self.levels[0].x.group.order() as u32;
            return TowerElement::Simple(rng.gen_range(0..k));
        }
        TowerElement::Wreath {
            base: self.random_base(n, rng),
            top: Box::new(self.random(n - 1, rng)),
        }
    }

    /// Automorphism of every level from one automorphism per factor.
    pub fn psi(&self, phis: Vec<Automorphism>) -> Result<Psi> {
        if phis.len() != self.levels.len() {
            return Err(Error::InvalidParams(format!(
                "{} automorphisms for {} levels",
                phis.len(),
                self.levels.len()
            )));
        }
        for (phi, l) in phis.iter().zip(&self.levels) {
            Automorphism::from_table(&l.x.group, phi.table().to_vec())?;
        }
        Ok(Psi { phis })
    }

    pub fn psi_apply(&self, psi: &Psi, n: usize, g: &TowerElement) -> TowerElement {
        match g {
            TowerElement::Simple(x) => TowerElement::Simple(psi.phis[0].apply(*x)),
            TowerElement::Wreath { base, top } => TowerElement::Wreath {
                base: self.psi_base(psi, n, base),
                top: Box::new(self.psi_apply(psi, n - 1, top)),
            },
        }
    }

    fn psi_base(&self, psi: &Psi, n: usize, f: &BaseMap) -> BaseMap {
        f.iter()
            .map(|(w, &x)| (self.psi_omega(psi, n - 1, w), psi.phis[n].apply(x)))
            .collect()
    }

    /// The permutation of `Omega_n` induced by `psi_n`.
    pub fn psi_omega(&self, psi: &Psi, n: usize, w: &OmegaPoint) -> OmegaPoint {
        match w {
            OmegaPoint::Element(e) => OmegaPoint::Element(self.psi_apply(psi, n, e)),
            OmegaPoint::Base(f) => OmegaPoint::Base(self.psi_base(psi, n, f)),
        }
    }

    /// Per-level structural checks on sampled and generator elements.
    pub fn verify(&self, psi: Option<&Psi>, samples: usize, seed: u64) -> TowerReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut levels = Vec::new();
        for n in 0..=self.depth() {
            let gens = self.generators(n);
            let mut elems: Vec<TowerElement> = (0..samples).map(|_| self.random(n, &mut rng)).collect();
            elems.extend(gens.iter().cloned());
            let triples = elems.len();
            let mut r = LevelReport {
                level: n,
                simple: self.levels[n].name.clone(),
                action: self.levels[n].action,
                omega: self.omega[n],
                samples: triples,
                ..Default::default()
            };
            for i in 0..triples {
                let a = &elems[i];
                let b = &elems[(i + 1) % triples];
                let c = &elems[(i + 2) % triples];
                let ab = self.mul(n, a, b);
                if self.mul(n, &ab, c) != self.mul(n, a, &self.mul(n, b, c)) {
                    r.associativity_failures += 1;
                }
                if self.mul(n, a, &self.inv(n, a)) != self.identity(n) {
                    r.inverse_failures += 1;
                }
                if n > 0 {
                    let lhs = self.project(&ab).expect("level above 0");
                    let rhs = self.mul(n - 1, &self.project(a).unwrap(), &self.project(b).unwrap());
                    if lhs != rhs {
                        r.projection_failures += 1;
                    }
                }
                if let Some(psi) = psi {
                    let lhs = self.psi_apply(psi, n, &ab);
                    let rhs = self.mul(n, &self.psi_apply(psi, n, a), &self.psi_apply(psi, n, b));
                    if lhs != rhs {
                        r.psi_hom_failures += 1;
                    }
                    if n > 0 {
                        let y = self.project(a).unwrap();
                        if self.psi_apply(psi, n, &self.include(&y)) != self.include(&self.psi_apply(psi, n - 1, &y)) {
                            r.psi_restriction_failures += 1;
                        }
                    }
                }
            }
            if let Some(psi) = psi {
                let (points, exhaustive) = match self.omega_points(n, OMEGA_ENUMERATION_BOUND) {
                    Some(p) => (p, true),
                    None => ((0..samples).map(|_| self.random_omega(n, &mut rng)).collect(), false),
                };
                r.equivariance_exhaustive = exhaustive;
                r.equivariance_points = points.len();
                for w in &points {
                    for y in &gens {
                        let lhs = self.psi_omega(psi, n, &self.act(n, w, y));
                        let rhs = self.act(n, &self.psi_omega(psi, n, w), &self.psi_apply(psi, n, y));
                        if lhs != rhs {
                            r.equivariance_failures += 1;
                        }
                    }
                }
            }
            if n > 0 && self.levels[n].action == Action::P {
                for (i, a) in elems.iter().enumerate() {
                    let TowerElement::Wreath { base, .. } = a else {
                        unreachable!()
                    };
                    let y = self.include(&self.project(&elems[(i + 1) % triples]).unwrap());
                    let b = TowerElement::Wreath {
                        base: base.clone(),
                        top: Box::new(self.identity(n - 1)),
                    };
                    let conj = self.mul(n, &self.inv(n, &y), &self.mul(n, &b, &y));
                    let TowerElement::Wreath { base: cb, .. } = conj else {
                        unreachable!()
                    };
                    if self.act(n, &OmegaPoint::Base(base.clone()), &y) != OmegaPoint::Base(cb) {
                        r.conjugation_action_failures += 1;
                    }
                }
            }
            levels.push(r);
        }
        TowerReport { seed, levels }
    }

    /// Compares `psi` then `psi2` with the automorphism of the composed
    /// sequence on samples and generators at every level.
    pub fn psi_compose_check(&self, psi: &Psi, psi2: &Psi, samples: usize, seed: u64) -> Result<ComposeReport> {
        if psi.phis.len() != self.levels.len() || psi2.phis.len() != self.levels.len() {
            return Err(Error::Precondition(
                "automorphism sequences do not match the tower".into(),
            ));
        }
        let both = Psi {
            phis: psi.phis.iter().zip(&psi2.phis).map(|(a, b)| a.then(b)).collect(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checked = 0;
        let mut mismatches = 0;
        for n in 0..=self.depth() {
            let mut elems: Vec<TowerElement> = (0..samples).map(|_| self.random(n, &mut rng)).collect();
            elems.extend(self.generators(n));
            for g in &elems {
                checked += 1;
                let lhs = self.psi_apply(psi2, n, &self.psi_apply(psi, n, g));
                if lhs != self.psi_apply(&both, n, g) {
                    mismatches += 1;
                }
            }
        }
        Ok(ComposeReport {
            seed,
            checked,
            mismatches,
        })
    }

    /// With `phi_0 .. phi_{n-1}` trivial and `phi_n` not, `psi_n` moves
    /// single-coordinate base elements of `B_n` within their coordinate
    /// only; a class of `X_n` not preserved by `phi_n` then certifies that
    /// `psi_n` is not inner in `W_n`.
    pub fn outer_certificate(&self, psi: &Psi) -> (Option<usize>, OuterVerdict) {
        let Some(n) = psi.phis.iter().position(|p| !p.is_identity()) else {
            return (None, OuterVerdict::Inconclusive);
        };
        let x = &self.levels[n].x;
        for class in x.group.conjugacy_classes() {
            let s = class[0];
            let t = psi.phis[n].apply(s);
            if class.binary_search(&t).is_err() {
                return (
                    Some(n),
                    OuterVerdict::Certificate(OuterCertificate {
                        coordinate: 0,
                        entry: x.elem(s).clone(),
                        image: x.elem(t).clone(),
                        class_size: class.len(),
                    }),
                );
            }
        }
        (Some(n), OuterVerdict::Inconclusive)
    }
}

/// `psi` determined by one automorphism per level.
#[derive(Clone, Debug)]
pub struct Psi {
    pub phis: Vec<Automorphism>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub simple: String,
    pub action: Action,
    pub omega: OmegaSize,
    pub samples: usize,
    pub associativity_failures: usize,
    pub inverse_failures: usize,
    pub projection_failures: usize,
    pub psi_hom_failures: usize,
    pub psi_restriction_failures: usize,
    pub equivariance_exhaustive: bool,
    pub equivariance_points: usize,
    pub equivariance_failures: usize,
    pub conjugation_action_failures: usize,
}

impl Default for OmegaSize {
    fn default() -> Self {
        OmegaSize {
            exact: None,
            log10: 0.0,
        }
    }
}

impl LevelReport {
    pub fn clean(&self) -> bool {
        self.associativity_failures
            + self.inverse_failures
            + self.projection_failures
            + self.psi_hom_failures
            + self.psi_restriction_failures
            + self.equivariance_failures
            + self.conjugation_action_failures
            == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub seed: u64,
    pub levels: Vec<LevelReport>,
}

impl TowerReport {
    pub fn clean(&self) -> bool {
        self.levels.iter().all(LevelReport::clean)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComposeReport {
    pub seed: u64,
    pub checked: usize,
    pub mismatches: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(actions: &[Action]) -> WreathSpec {
        WreathSpec {
            levels: actions
                .iter()
                .map(|&action| LevelSpec {
                    simple: "A5".into(),
                    action,
                })
                .collect(),
        }
    }

    fn transposition(t: &Tower, n: usize) -> Automorphism {
        let s = Permutation::from_cycles(5, &[vec![0, 1]]).unwrap();
        Automorphism::conjugation(t.simple(n), &s).unwrap()
    }

    #[test]
    fn depth_zero_is_the_simple_group() {
        let t = Tower::build(&spec(&[Action::R]), 0).unwrap();
        assert_eq!(t.omega_sizes()[0].exact, Some(60));
        assert_eq!(t.generators(0).len(), 2);
        assert!(t.verify(None, 20, 1).clean());
    }

    #[test]
    fn one_level_regular() {
        let t = Tower::build(&spec(&[Action::R, Action::R]), 1).unwrap();
        assert_eq!(t.omega_sizes()[0].exact, Some(60));
        assert!(t.omega_sizes()[1].exact.is_none());
        assert!((t.omega_sizes()[1].log10 - 61.0 * 60f64.log10()).abs() < 1e-9);
        let phis = vec![transposition(&t, 0), transposition(&t, 1)];
        let psi = t.psi(phis).unwrap();
        let r = t.verify(Some(&psi), 30, 7);
        assert!(r.clean(), "{r:?}");
        assert!(r.levels[0].equivariance_exhaustive);
    }

    #[test]
    fn product_levels() {
        let t = Tower::build(&spec(&[Action::P, Action::P, Action::R]), 2).unwrap();
        assert!((t.omega_sizes()[1].log10 - 60.0 * 60f64.log10()).abs() < 1e-6);
        let phis = vec![
            transposition(&t, 0),
            Automorphism::identity(&t.simple(1).group),
            transposition(&t, 2),
        ];
        let psi = t.psi(phis).unwrap();
        let r = t.verify(Some(&psi), 10, 3);
        assert!(r.clean(), "{r:?}");
    }

    #[test]
    fn identity_psi_fixes_everything() {
        let t = Tower::build(&spec(&[Action::R, Action::R]), 1).unwrap();
        let id = t.psi(vec![Automorphism::identity(&t.simple(0).group); 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = t.random(1, &mut rng);
            assert_eq!(t.psi_apply(&id, 1, &g), g);
        }
        assert!(matches!(t.outer_certificate(&id), (None, OuterVerdict::Inconclusive)));
    }

    #[test]
    fn mixed_psi_fixes_bottom() {
        let t = Tower::build(&spec(&[Action::R, Action::R]), 1).unwrap();
        let psi = t
            .psi(vec![Automorphism::identity(&t.simple(0).group), transposition(&t, 1)])
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let y = t.random(0, &mut rng);
            assert_eq!(t.psi_apply(&psi, 1, &t.include(&y)), t.include(&y));
        }
        assert!(matches!(
            t.outer_certificate(&psi),
            (Some(1), OuterVerdict::Certificate(_))
        ));
    }

    #[test]
    fn compose_with_inverse() {
        let t = Tower::build(&spec(&[Action::R, Action::R]), 1).unwrap();
        let phis = vec![transposition(&t, 0), Automorphism::inner(&t.simple(1).group, 3)];
        let inv: Vec<Automorphism> = phis.iter().map(|p| p.inverse()).collect();
        let psi = t.psi(phis).unwrap();
        let psi_inv = t.psi(inv).unwrap();
        let r = t.psi_compose_check(&psi, &psi_inv, 20, 2).unwrap();
        assert_eq!(r.mismatches, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = t.random(1, &mut rng);
        assert_eq!(t.psi_apply(&psi_inv, 1, &t.psi_apply(&psi, 1, &g)), g);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Tower::build(&spec(&[Action::R]), 1).is_err());
        let bad = WreathSpec {
            levels: vec![LevelSpec {
                simple: "S4".into(),
                action: Action::R,
            }],
        };
        assert!(Tower::build(&bad, 0).is_err());
        let t = Tower::build(&spec(&[Action::R]), 0).unwrap();
        assert!(t.psi(vec![]).is_err());
    }

    #[test]
    fn spec_from_toml() {
        let s: WreathSpec =
            toml::from_str("levels = [{simple=\"A5\", action=\"R\"}, {simple=\"A5\", action=\"P\"}]").unwrap();
        assert_eq!(s.levels[1].action, Action::P);
    }
}
