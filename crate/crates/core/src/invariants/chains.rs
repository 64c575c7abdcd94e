use serde::Serialize;

use crate::error::{pre, Error, Result};
use crate::group::{FinGroup, Subgroup};

/// Per-index results for a descending chain of normal subgroups.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub c: usize,
    pub orders: Vec<usize>,
    /// `H_{n-1} > H_n` for each `n >= 1`.
    pub descent: Vec<bool>,
    /// `gamma(H_n) <= M_G(gamma(H_{n-1}))`, or `None` when `gamma(H_{n-1})`
    /// is trivial.
    pub melnikov_step: Vec<Option<bool>>,
    pub intersection_order: usize,
    /// For each `n >= 1`: every normal `N` has `gamma(N) <= H_{n-1}` or
    /// `gamma(H_n) <= gamma(N)`.
    pub dichotomy: Vec<bool>,
    /// First normal subgroup breaking the dichotomy at each index.
    pub dichotomy_witness: Vec<Option<Subgroup>>,
}

pub fn verify_chain(g: &FinGroup, chain: &[Subgroup], c: usize) -> Result<ChainReport> {
    for (i, h) in chain.iter().enumerate() {
        pre(g.is_normal(h), || format!("chain member {i} is not normal"))?;
    }
    for w in chain.windows(2) {
        pre(w[1].is_proper_subset(&w[0]), || {
            "chain is not strictly descending".into()
        })?;
    }
    let gammas: Vec<Subgroup> = chain.iter().map(|h| g.gamma_of(h, c)).collect();
    let normals = g.normal_subgroups()?;
    let normal_gammas: Vec<Subgroup> = normals.iter().map(|n| g.gamma_of(n, c)).collect();
    let mut report = ChainReport {
        c,
        orders: chain.iter().map(|h| h.order()).collect(),
        descent: Vec::new(),
        melnikov_step: Vec::new(),
        intersection_order: chain.last().map_or(g.order(), |h| h.order()),
        dichotomy: Vec::new(),
        dichotomy_witness: Vec::new(),
    };
    for n in 1..chain.len() {
        report.descent.push(chain[n].is_proper_subset(&chain[n - 1]));
        let prev = &gammas[n - 1];
        report.melnikov_step.push(if prev.is_trivial() {
            None
        } else {
            let m = g.melnikov_rel(prev)?;
            Some(gammas[n].is_subset(&m) && m.is_proper_subset(prev))
        });
        let witness = normals
            .iter()
            .zip(&normal_gammas)
            .find(|(_, gn)| !(gn.is_subset(&chain[n - 1]) || gammas[n].is_subset(gn)))
            .map(|(n, _)| n.clone());
        report.dichotomy.push(witness.is_none());
        report.dichotomy_witness.push(witness);
    }
    Ok(report)
}

/// `(K_i, L_i)` pairs of a narrow chain.
#[derive(Clone, Debug, Serialize)]
pub struct NarrowLink {
    pub k: Subgroup,
    pub l: Subgroup,
}

/// `G >= K_1 > L_1 >= gamma(L_1) >= K_2 > ...` with each `K_i` narrow and
/// `L_i = M_G(K_i)`. Each `K_i` is chosen above the chief factor
/// `X / Y` where `X` is the current bound and `Y` the smallest maximal
/// normal subgroup of `G` inside it.
pub fn narrow_chain(g: &FinGroup, c: usize, max_len: usize) -> Result<Vec<NarrowLink>> {
    let mut out = Vec::new();
    if g.order() == 1 {
        return Ok(out);
    }
    let mut bound = g.whole();
    while out.len() < max_len && !bound.is_trivial() {
        let below = g.maximal_invariant_below(&bound)?;
        let y = below.into_iter().min().expect("the trivial subgroup lies below");
        let w = g.narrow_above_chief(&bound, &y)?;
        let next = g.gamma_of(&w.melnikov, c);
        out.push(NarrowLink {
            k: w.narrow,
            l: w.melnikov,
        });
        bound = next;
    }
    Ok(out)
}

/// One stage of a finite inverse system.
#[derive(Clone, Debug)]
pub struct StageData {
    pub group: FinGroup,
    pub p_subgroup: Subgroup,
    /// Images of this stage's elements in the previous stage.
    pub map_to_previous: Option<(FinGroup, Vec<u32>)>,
    pub c: usize,
}

impl StageData {
    /// Kernel of the map to the previous stage; the whole group when
    /// there is no previous stage.
    pub fn kernel(&self) -> Subgroup {
        match &self.map_to_previous {
            None => self.group.whole(),
            Some((_, map)) => {
                let elems: Vec<u32> = (0..self.group.order() as u32)
                    .filter(|&x| map[x as usize] == 0)
                    .collect();
                self.group.subgroup_from_elements(&elems)
            }
        }
    }
}

/// Homomorphism and surjectivity of an index map, checked on all pairs
/// of generators with all elements.
pub fn check_surjective_hom(src: &FinGroup, dst: &FinGroup, map: &[u32]) -> bool {
    if map.len() != src.order() || map[0] != 0 {
        return false;
    }
    let hom = (0..src.order() as u32).all(|x| {
        src.generators()
            .iter()
            .all(|&s| map[src.mul(x, s) as usize] == dst.mul(map[x as usize], map[s as usize]))
    });
    let mut hit = vec![false; dst.order()];
    for &y in map {
        hit[y as usize] = true;
    }
    hom && hit.iter().all(|&b| b)
}

#[derive(Clone, Debug, Serialize)]
pub struct InvLimReport {
    pub conditions: std::collections::BTreeMap<String, bool>,
    pub witnesses: Vec<String>,
    pub q_order: usize,
}

/// Conditions (i)-(iv) for a stage and its successor.
pub fn verify_invlim_stage(stage: &StageData, next: &StageData) -> Result<InvLimReport> {
    let (prev, map) = next
        .map_to_previous
        .as_ref()
        .ok_or_else(|| Error::Precondition("next stage has no map".into()))?;
    pre(prev.digest() == stage.group.digest(), || {
        "map target is not this stage".into()
    })?;
    pre(check_surjective_hom(&next.group, &stage.group, map), || {
        "map is not a surjective homomorphism".into()
    })?;
    let g = &stage.group;
    let c = stage.c;
    let p = &stage.p_subgroup;
    let q = next.group.image(&next.p_subgroup, map, g);
    let gp = g.gamma_of(p, c);
    let gq = g.gamma_of(&q, c);
    let ker = stage.kernel();
    let mut witnesses = Vec::new();
    let mut conditions = std::collections::BTreeMap::new();
    // every finite group is virtually nilpotent of any class
    conditions.insert("i".to_string(), true);
    let ii = q.is_proper_subset(p);
    if !ii {
        witnesses.push(format!("ii: |P| = {}, |Q| = {}", p.order(), q.order()));
    }
    conditions.insert("ii".to_string(), ii);
    let iii = if gp.is_trivial() {
        witnesses.push("iii: gamma(P) is trivial".into());
        false
    } else {
        let m = g.melnikov_rel(&gp)?;
        let parts = [
            ("gamma(P) > M", m.is_proper_subset(&gp)),
            ("M >= ker", ker.is_subset(&m)),
            ("ker >= gamma(Q)", gq.is_subset(&ker)),
            ("gamma(Q) > 1", !gq.is_trivial()),
        ];
        for (name, ok) in parts {
            if !ok {
                witnesses.push(format!("iii: {name} fails"));
            }
        }
        parts.iter().all(|(_, ok)| *ok)
    };
    conditions.insert("iii".to_string(), iii);
    let mut iv = true;
    for n in g.normal_subgroups()? {
        let gn = g.gamma_of(n, c);
        if !(gn.is_subset(p) || gq.is_subset(&gn)) {
            iv = false;
            witnesses.push(format!(
                "iv: normal subgroup of order {} with elements {:?}",
                n.order(),
                n.elements()
            ));
            break;
        }
    }
    conditions.insert("iv".to_string(), iv);
    Ok(InvLimReport {
        conditions,
        witnesses,
        q_order: q.order(),
    })
}

/// Why a candidate `V` does or does not violate condition (v).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateVerdict {
    Normal,
    TooManyConjugates,
    ConjugatesDoNotCommute,
    InclusionFails,
    Violates,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionVReport {
    pub holds: bool,
    pub examined: Vec<(Subgroup, CandidateVerdict)>,
}

pub const CONDITION_V_SCAN_BOUND: usize = 10_000;

fn classify_v(stage: &StageData, v: &Subgroup, n: usize) -> CandidateVerdict {
    let g = &stage.group;
    if g.is_normal(v) {
        return CandidateVerdict::Normal;
    }
    let conj = g.conjugates(v);
    if conj.len() > n {
        return CandidateVerdict::TooManyConjugates;
    }
    for i in 0..conj.len() {
        for j in i + 1..conj.len() {
            let commute = conj[i]
                .generators()
                .iter()
                .all(|&x| conj[j].generators().iter().all(|&y| g.mul(x, y) == g.mul(y, x)));
            if !commute {
                return CandidateVerdict::ConjugatesDoNotCommute;
            }
        }
    }
    let w = g.normal_closure(v.generators());
    let c = stage.c;
    let target = g.gamma_of(&g.gamma_of(&w, c), c);
    if g.gamma_of(&stage.p_subgroup, c).is_subset(&target) {
        CandidateVerdict::Violates
    } else {
        CandidateVerdict::InclusionFails
    }
}

/// Condition (v) by scanning subgroups up to conjugacy, or over a
/// supplied candidate list.
pub fn verify_hereditary_condition_v(
    stage: &StageData,
    n: usize,
    candidates: Option<&[Subgroup]>,
) -> Result<ConditionVReport> {
    let g = &stage.group;
    let list: Vec<Subgroup> = match candidates {
        Some(c) => c.to_vec(),
        None => {
            crate::error::bound_check(
                "condition (v) scan order",
                g.order() as u128,
                CONDITION_V_SCAN_BOUND as u128,
            )?;
            let mut reps: Vec<Subgroup> = Vec::new();
            for h in g.all_subgroups_within(CONDITION_V_SCAN_BOUND)? {
                if !reps
                    .iter()
                    .any(|r| r.order() == h.order() && g.conjugates(r).contains(&h))
                {
                    reps.push(h);
                }
            }
            reps
        }
    };
    let examined: Vec<(Subgroup, CandidateVerdict)> = list
        .into_iter()
        .map(|v| {
            let verdict = classify_v(stage, &v, n);
            (v, verdict)
        })
        .collect();
    Ok(ConditionVReport {
        holds: !examined.iter().any(|(_, v)| *v == CandidateVerdict::Violates),
        examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    #[test]
    fn s4_chain_dichotomy() {
        let g = corpus::enumerate("S4").group;
        let n = g.normal_subgroups().unwrap().to_vec();
        let r = verify_chain(&g, &[n[2].clone(), n[1].clone(), n[0].clone()], 0).unwrap();
        assert_eq!(r.descent, vec![true, true]);
        assert!(r.dichotomy[0]);
        assert_eq!(r.intersection_order, 1);
        let r = verify_chain(&g, &[g.whole()], 0).unwrap();
        assert!(r.descent.is_empty() && r.dichotomy.is_empty());
        assert!(verify_chain(&g, &[n[1].clone(), n[2].clone()], 0).is_err());
    }

    #[test]
    fn s4_narrow_chain() {
        let g = corpus::enumerate("S4").group;
        let ch = narrow_chain(&g, 0, 10).unwrap();
        let orders: Vec<(usize, usize)> = ch.iter().map(|l| (l.k.order(), l.l.order())).collect();
        assert_eq!(orders, vec![(24, 12), (12, 4), (4, 1)]);
        let ks: Vec<Subgroup> = ch.iter().map(|l| l.k.clone()).collect();
        let r = verify_chain(&g, &ks, 0).unwrap();
        assert!(r.melnikov_step.iter().all(|s| *s != Some(false)));
    }

    #[test]
    fn trivial_group_has_empty_chain() {
        let g = corpus::enumerate("S3").group;
        let (t, _) = g.quotient(&g.whole()).unwrap();
        assert!(narrow_chain(&t, 0, 5).unwrap().is_empty());
    }

    #[test]
    fn perfect_group_chain() {
        let g = corpus::enumerate("A5").group;
        let ch = narrow_chain(&g, 0, 5).unwrap();
        assert_eq!(ch.len(), 1);
        assert_eq!(ch[0].k.order(), 60);
        assert!(ch[0].l.is_trivial());
    }

    #[test]
    fn condition_v_on_s3() {
        let g = corpus::enumerate("S3").group;
        let p = g.normal_subgroups().unwrap()[1].clone();
        let stage = StageData {
            group: g.clone(),
            p_subgroup: p,
            map_to_previous: None,
            c: 0,
        };
        let r = verify_hereditary_condition_v(&stage, 3, None).unwrap();
        assert!(r.holds);
        let order2 = r.examined.iter().find(|(v, _)| v.order() == 2).unwrap();
        assert_eq!(order2.1, CandidateVerdict::ConjugatesDoNotCommute);
        let r = verify_hereditary_condition_v(&stage, 3, Some(&[g.whole()])).unwrap();
        assert_eq!(r.examined[0].1, CandidateVerdict::Normal);
    }

    #[test]
    fn invlim_trivial_failures() {
        let g = corpus::enumerate("S4").group;
        let (q, proj) = g.quotient(&g.normal_subgroups().unwrap()[1]).unwrap();
        let stage = StageData {
            group: q.clone(),
            p_subgroup: q.whole(),
            map_to_previous: None,
            c: 0,
        };
        let next = StageData {
            group: g.clone(),
            p_subgroup: g.whole(),
            map_to_previous: Some((q.clone(), proj)),
            c: 0,
        };
        let r = verify_invlim_stage(&stage, &next).unwrap();
        // Q equals P, so (ii) fails
        assert!(!r.conditions["ii"]);
        assert_eq!(r.q_order, 6);
    }
}
