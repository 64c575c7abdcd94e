use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FinGroup, Subgroup};

/// Where the `K` of a gamma set range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaSource {
    AllNormal,
    RestrictedToH,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaMember {
    pub subgroup: Subgroup,
    /// The first `K` (canonical order) with `gamma_{c+1}(K)` equal to the member.
    pub witness: Subgroup,
}

/// `{gamma_{c+1}(K)}` for `K` in some family, deduplicated and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaSet {
    pub c: usize,
    pub members: Vec<GammaMember>,
    pub source: GammaSource,
}

impl GammaSet {
    fn collect(c: usize, source: GammaSource, pairs: impl IntoIterator<Item = (Subgroup, Subgroup)>) -> Self {
        let mut map: BTreeMap<Subgroup, Subgroup> = BTreeMap::new();
        for (k, gk) in pairs {
            map.entry(gk).or_insert(k);
        }
        GammaSet {
            c,
            members: map
                .into_iter()
                .map(|(subgroup, witness)| GammaMember { subgroup, witness })
                .collect(),
            source,
        }
    }

    pub fn subgroups(&self) -> Vec<&Subgroup> {
        self.members.iter().map(|m| &m.subgroup).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Which obliquity set to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    A,
    C,
    Astar,
    Cstar,
}

/// `{gamma_{c+1}(K) : K normal in G}` from the normal lattice.
pub fn gamma_set(g: &FinGroup, c: usize) -> Result<GammaSet> {
    let normals = g.normal_subgroups()?;
    Ok(GammaSet::collect(
        c,
        GammaSource::AllNormal,
        normals.iter().map(|k| (k.clone(), g.gamma_of(k, c))),
    ))
}

/// The same set from a full subgroup scan, with every commutator
/// subgroup formed from all element pairs.
pub fn gamma_set_by_scan(g: &FinGroup, c: usize) -> Result<GammaSet> {
    let normals = g.normal_subgroups_by_scan()?;
    Ok(GammaSet::collect(
        c,
        GammaSource::AllNormal,
        normals.iter().map(|k| {
            let mut cur = k.clone();
            for _ in 0..c {
                cur = g.commutator_brute(&cur, k);
            }
            (k.clone(), cur)
        }),
    ))
}

fn set_a(g: &FinGroup, h: &Subgroup, c: usize) -> Result<GammaSet> {
    let all = gamma_set(g, c)?;
    Ok(filter_not_below(all, h, GammaSource::AllNormal))
}

fn set_c(g: &FinGroup, h: &Subgroup, c: usize) -> Result<GammaSet> {
    let all = if g.order() <= crate::group::SUBGROUP_SCAN_BOUND {
        gamma_set_by_scan(g, c)?
    } else {
        gamma_set(g, c)?
    };
    Ok(filter_not_below(all, h, GammaSource::AllNormal))
}

fn filter_not_below(set: GammaSet, h: &Subgroup, source: GammaSource) -> GammaSet {
    GammaSet {
        c: set.c,
        members: set.members.into_iter().filter(|m| !m.subgroup.is_subset(h)).collect(),
        source,
    }
}

/// `{gamma_{c+1}(K) : K <= G, H <= N_G(K), gamma_{c+1}(K) not in H}`.
fn set_star(g: &FinGroup, h: &Subgroup, c: usize) -> Result<GammaSet> {
    let subs = g.all_subgroups()?;
    let pairs = subs
        .iter()
        .filter(|k| g.normalizes(h, k))
        .map(|k| (k.clone(), g.gamma_of(k, c)))
        .filter(|(_, gk)| !gk.is_subset(h))
        .collect::<Vec<_>>();
    Ok(GammaSet::collect(c, GammaSource::RestrictedToH, pairs))
}

/// Obliquity sets. For finite groups the open and closed variants
/// coincide; `A` and `C` are computed along independent paths and
/// compared.
pub fn obliquity_set(g: &FinGroup, h: &Subgroup, c: usize, variant: Variant) -> Result<GammaSet> {
    match variant {
        Variant::A | Variant::C => {
            let a = set_a(g, h, c)?;
            let cc = set_c(g, h, c)?;
            if a.subgroups() != cc.subgroups() {
                return Err(Error::Precondition("open and closed obliquity sets disagree".into()));
            }
            Ok(if variant == Variant::A { a } else { cc })
        }
        Variant::Astar | Variant::Cstar => set_star(g, h, c),
    }
}

/// `A*_G(H)` against the union of `A_H(L)` over subgroups `L >= H`.
pub fn astar_union_check(g: &FinGroup, h: &Subgroup, c: usize) -> Result<bool> {
    let lhs = set_star(g, h, c)?;
    let subs = g.all_subgroups()?;
    let mut union: Vec<Subgroup> = Vec::new();
    for l in subs.iter().filter(|l| h.is_subset(l)) {
        for k in subs.iter().filter(|k| k.is_subset(l) && g.normalizes(l, k)) {
            let gk = g.gamma_of(k, c);
            if !gk.is_subset(h) && !union.contains(&gk) {
                union.push(gk);
            }
        }
    }
    union.sort();
    let lhs: Vec<Subgroup> = lhs.members.into_iter().map(|m| m.subgroup).collect();
    Ok(lhs == union)
}

/// One edge of the obliquity graph with its inclusion check.
#[derive(Clone, Debug, Serialize)]
pub struct EdgeCheck {
    pub from: usize,
    pub to: usize,
    /// Order of the Melnikov subgroup of the source vertex.
    pub mel_order: usize,
    /// `gamma_{c+1}(Mel(A)) <= B`.
    pub holds: bool,
    /// `Mel(A)` trivial: the inclusion is automatic.
    pub degenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObliquityGraph {
    pub vertices: Vec<Subgroup>,
    pub edges: Vec<(usize, usize)>,
    pub checks: Vec<EdgeCheck>,
}

impl ObliquityGraph {
    pub fn is_acyclic(&self) -> bool {
        // edges go from larger to strictly smaller subgroups
        self.edges
            .iter()
            .all(|&(a, b)| self.vertices[b].order() < self.vertices[a].order())
    }
}

/// Covering relation on the vertex poset: `A -> B` when `B < A` with
/// nothing strictly between.
pub fn covering_edges(vertices: &[Subgroup]) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (a, va) in vertices.iter().enumerate() {
        for (b, vb) in vertices.iter().enumerate() {
            if vb.is_proper_subset(va)
                && !vertices
                    .iter()
                    .any(|vc| vb.is_proper_subset(vc) && vc.is_proper_subset(va))
            {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// The graph on the closed obliquity set, with the Melnikov inclusion
/// verified along every edge.
pub fn obliquity_graph(g: &FinGroup, h: &Subgroup, c: usize) -> Result<ObliquityGraph> {
    let set = obliquity_set(g, h, c, Variant::C)?;
    let vertices: Vec<Subgroup> = set.members.into_iter().map(|m| m.subgroup).collect();
    let edges = covering_edges(&vertices);
    let mut checks = Vec::new();
    for &(a, b) in &edges {
        let (ag, embed) = g.subgroup_as_group(&vertices[a])?;
        let mel = ag.melnikov()?;
        let gm = ag.gamma_of(&mel, c);
        let holds = gm.elements().iter().all(|&x| vertices[b].contains(embed[x as usize]));
        checks.push(EdgeCheck {
            from: a,
            to: b,
            mel_order: mel.order(),
            holds,
            degenerate: mel.is_trivial(),
        });
    }
    Ok(ObliquityGraph {
        vertices,
        edges,
        checks,
    })
}
