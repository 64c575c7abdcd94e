use serde_json::{json, Value};

use super::cache::sha256_hex;
use super::config::{Bounds, GroupRef, Job, SlCheck};
use super::report::Status;
use crate::congruence::{build_sl1, MatrixMap, NottinghamElement, TruncSeries};
use crate::construction::{
    centre_of_d, verify_centre_g1, verify_commutators, verify_normal_form, verify_scalar_psi, Stage,
};
use crate::error::{Error, Result};
use crate::group::{FinGroup, LATTICE_BOUND, SUBGROUP_SCAN_BOUND};
use crate::invariants::{
    chief_factor_battery, gamma_set, gamma_set_by_scan, mel_inclusion_battery, narrow_chain, semidirect_census,
};
use crate::perm::{PermGroup, Permutation};
use crate::wreath::{
    coordinate_psi_samples, normal_closure_battery, outer_certificate, product_action_verify, Automorphism,
    CoordinatePsi, HarnessWreath, OuterVerdict, Psi, Tower, WreathSpec,
};

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn enumerate(g: &PermGroup, bounds: &Bounds) -> Result<FinGroup> {
    Ok(FinGroup::enumerate(g, bounds.enumeration.min(LATTICE_BOUND))?.group)
}

/// Hash of the element set when it is small enough to list, so that
/// generator lists with the same closure agree; otherwise of the
/// descriptor as given.
pub fn canonical_group_hash(g: &PermGroup, bounds: &Bounds) -> String {
    let limit = bounds.enumeration.min(LATTICE_BOUND) as u128;
    let mut text = format!("perm:{}:", g.degree());
    match g.elements(limit) {
        Ok(mut elems) => {
            elems.sort();
            for e in &elems {
                for x in e.images() {
                    text.push_str(&x.to_string());
                    text.push(',');
                }
                text.push(';');
            }
        }
        Err(_) => text.push_str(&serde_json::to_string(&g.to_descriptor()).expect("descriptor serializes")),
    }
    sha256_hex(text.as_bytes())
}

/// The job as JSON with every group replaced by its canonical hash.
pub fn canonical_input(job: &Job, seed: u64, bounds: &Bounds) -> Result<Value> {
    let mut v = serde_json::to_value(job)?;
    if let Value::Object(map) = &mut v {
        for key in ["group", "x", "h"] {
            if let Some(g) = map.get_mut(key) {
                let r: GroupRef = serde_json::from_value(g.clone())?;
                *g = Value::String(canonical_group_hash(&r.resolve()?, bounds));
            }
        }
    }
    Ok(json!({ "job": v, "seed": seed }))
}

fn perm(degree: usize, cycles: &[Vec<u32>]) -> Result<Permutation> {
    Permutation::from_cycles(degree, cycles)
}

/// Runs one job; errors become `error` reports upstream.
pub fn execute(job: &Job, seed: u64, bounds: &Bounds) -> Result<(Status, Value)> {
    match job {
        Job::StabilizerChain(p) => {
            let g = p.group.resolve()?;
            let c = g.chain();
            Ok((
                Status::Pass,
                json!({
                    "degree": g.degree(),
                    "order": g.order().to_string(),
                    "base": c.base(),
                    "orbit_sizes": c.orbit_sizes(),
                    "strong_generators": c.strong_generators().len(),
                }),
            ))
        }
        Job::Orbits(p) => {
            let g = p.group.resolve()?;
            Ok((
                Status::Pass,
                json!({ "orbits": g.orbits(), "transitive": g.is_transitive() }),
            ))
        }
        Job::NormalSubgroups(p) => {
            let g = enumerate(&p.group.resolve()?, bounds)?;
            let normals = g.normal_subgroups()?.to_vec();
            let orders: Vec<usize> = normals.iter().map(|n| n.order()).collect();
            let (st, cross) = if g.order() <= SUBGROUP_SCAN_BOUND {
                let scan = g.normal_subgroups_by_scan()?;
                (status(scan == normals), true)
            } else {
                (Status::Inconclusive, false)
            };
            Ok((
                st,
                json!({ "order": g.order(), "normal_orders": orders, "cross_checked": cross }),
            ))
        }
        Job::MelInclusion(p) => {
            let g = enumerate(&p.group.resolve()?, bounds)?;
            let r = mel_inclusion_battery(&g)?;
            Ok((status(r.exceptions.is_empty()), serde_json::to_value(&r)?))
        }
        Job::NarrowAboveChief(p) => {
            let g = enumerate(&p.group.resolve()?, bounds)?;
            let r = chief_factor_battery(&g)?;
            Ok((status(r.failures.is_empty()), serde_json::to_value(&r)?))
        }
        Job::Census(p) => {
            let r = semidirect_census(p.p, p.n)?;
            let expected = 1usize << (p.n + 1);
            let ok = r.distinct_derived == expected && r.formula_holds();
            let mut v = serde_json::to_value(&r)?;
            v["expected_distinct"] = json!(expected);
            Ok((status(ok), v))
        }
        Job::GammaSet(p) => {
            let g = enumerate(&p.group.resolve()?, bounds)?;
            let walk = gamma_set(&g, p.c)?;
            let orders: Vec<usize> = walk.subgroups().iter().map(|s| s.order()).collect();
            if g.order() > SUBGROUP_SCAN_BOUND {
                return Ok((
                    Status::Inconclusive,
                    json!({ "orders": orders, "cross_checked": false }),
                ));
            }
            let scan = gamma_set_by_scan(&g, p.c)?;
            let same = walk.subgroups() == scan.subgroups();
            Ok((
                status(same),
                json!({ "c": p.c, "orders": orders, "members": walk.len(), "cross_checked": true }),
            ))
        }
        Job::NarrowChain(p) => {
            let g = enumerate(&p.group.resolve()?, bounds)?;
            let chain = narrow_chain(&g, p.c, p.max_len)?;
            let mut ok = true;
            for link in &chain {
                let (narrow, _) = g.is_narrow(&link.k)?;
                ok &= narrow && g.melnikov_rel(&link.k)? == link.l;
            }
            let orders: Vec<(usize, usize)> = chain.iter().map(|l| (l.k.order(), l.l.order())).collect();
            Ok((status(ok), json!({ "links": orders })))
        }
        Job::NormalClosureBattery(p) => {
            let r = normal_closure_battery(&p.x.resolve()?, &p.h.resolve()?)?;
            Ok((status(r.holds), serde_json::to_value(&r)?))
        }
        Job::ProductAction(p) => {
            let r = product_action_verify(&p.x.resolve()?, &p.h.resolve()?, bounds.product_degree)?;
            Ok((status(r.holds()), serde_json::to_value(&r)?))
        }
        Job::OuterCertificate(p) => {
            let x = p.x.resolve()?;
            let w = HarnessWreath::new(&x, &p.h.resolve()?)?;
            let psi = CoordinatePsi {
                phi: Automorphism::conjugation(&w.x_elems, &perm(x.degree(), &p.phi)?)?,
            };
            let samples = coordinate_psi_samples(&w, &psi, &psi, p.samples, seed);
            let verdict = outer_certificate(&w, &psi);
            let laws = samples.hom_mismatches == 0 && samples.compose_mismatches == 0;
            let st = match (&verdict, laws) {
                (_, false) => Status::Fail,
                (OuterVerdict::Certificate(_), true) => Status::Pass,
                (OuterVerdict::Inconclusive, true) => Status::Inconclusive,
            };
            Ok((st, json!({ "samples": samples, "verdict": verdict })))
        }
        Job::Tower(p) => {
            let tower = Tower::build(
                &WreathSpec {
                    levels: p.levels.clone(),
                },
                p.depth,
            )?;
            let psi = match &p.psi {
                None => None,
                Some(perms) => {
                    if perms.len() != p.depth + 1 {
                        return Err(Error::InvalidParams(format!(
                            "psi needs {} entries, got {}",
                            p.depth + 1,
                            perms.len()
                        )));
                    }
                    let mut phis = Vec::new();
                    for (n, cycles) in perms.iter().enumerate() {
                        let x = tower.simple(n);
                        let degree = x.elem(0).degree();
                        phis.push(Automorphism::conjugation(x, &perm(degree, cycles)?)?);
                    }
                    Some(tower.psi(phis)?)
                }
            };
            let report = tower.verify(psi.as_ref(), p.samples, seed);
            let mut ok = report.clean();
            let mut v = json!({ "report": report });
            if let Some(psi) = &psi {
                let squared = Psi {
                    phis: psi.phis.iter().map(|f| f.then(f)).collect(),
                };
                let compose = tower.psi_compose_check(psi, &squared, p.samples, seed)?;
                ok &= compose.mismatches == 0;
                let (level, verdict) = tower.outer_certificate(psi);
                v["compose"] = serde_json::to_value(&compose)?;
                v["outer_level"] = json!(level);
                v["verdict"] = serde_json::to_value(&verdict)?;
            }
            Ok((status(ok), v))
        }
        Job::Commutators(p) => {
            let r = verify_commutators(&Stage::build(&p.params, 1)?);
            Ok((status(r.holds()), serde_json::to_value(&r)?))
        }
        Job::NormalForm(p) => {
            let r = verify_normal_form(&Stage::build(&p.params, 1)?, p.samples, seed);
            Ok((
                status(r.failures == 0 && r.w_action_failures == 0),
                serde_json::to_value(&r)?,
            ))
        }
        Job::CentreD(p) => {
            let r = centre_of_d(&Stage::build(&p.params, 1)?)?;
            let sanity = r.sanity_radical_order == r.sanity_brute_order as u128;
            let st = match (sanity, r.hypothesis_holds) {
                (false, _) => Status::Fail,
                (true, true) => status(r.centre_is_z),
                (true, false) => Status::Inconclusive,
            };
            Ok((st, serde_json::to_value(&r)?))
        }
        Job::CentreG1(p) => {
            let r = verify_centre_g1(&Stage::build(&p.params, 1)?);
            Ok((status(r.holds()), serde_json::to_value(&r)?))
        }
        Job::ScalarPsi(p) => {
            let stage = Stage::build(&p.params, 1)?;
            let r = verify_scalar_psi(&stage, p.lambda0, p.lambda1, p.samples, seed)?;
            Ok((status(r.holds()), serde_json::to_value(&r)?))
        }
        Job::Sl1(p) => sl1_job(p.n, p.p, p.k, &p.verify),
    }
}

/// The congruence checks shared by the pipeline and the `sl1` verb.
pub fn sl1_job(n: usize, p: u32, k: usize, checks: &[SlCheck]) -> Result<(Status, Value)> {
    let g = build_sl1(n, p, k)?;
    let mut v = json!({ "n": n, "p": p, "k": k, "order_formula": g.order_formula.to_string() });
    let Some(en) = &g.enumerated else {
        v["mode"] = json!("structural");
        return Ok((Status::Inconclusive, v));
    };
    v["order"] = json!(en.group.order());
    let mut ok = en.group.order() as u128 == g.order_formula;
    for check in checks {
        match check {
            SlCheck::Lcs => {
                let r = g.verify_lcs_equals_congruence()?;
                ok &= r.holds;
                v["lcs"] = serde_json::to_value(&r)?;
            }
            SlCheck::Graded => {
                let r = g.graded_check()?;
                ok &= r.holds;
                v["graded"] = serde_json::to_value(&r)?;
            }
            SlCheck::Nottingham => {
                if k < 2 {
                    v["nottingham"] = json!("level below 2");
                    continue;
                }
                let t = TruncSeries::t(p, k);
                let f = NottinghamElement::new(t.add(&t.mul(&t)))?;
                let r = g.nottingham_check(&f)?;
                let conj = g.inner_conjugator_search(&MatrixMap::Substitution(f))?;
                ok &= r.holds() && (conj.is_none() || k == 2);
                v["nottingham"] = json!({ "automorphism": r, "conjugator": conj });
            }
        }
    }
    Ok((status(ok), v))
}
