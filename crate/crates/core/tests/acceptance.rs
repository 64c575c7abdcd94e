//! One PASS/FAIL line per acceptance criterion. Every check is exact
//! (tolerance 0) and each criterion also has a wall-clock budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use jnnf::congruence::{build_sl1, MatrixMap, NottinghamElement, TruncSeries};
use jnnf::construction::{centre_of_d, verify_commutators, verify_scalar_psi, CbParams, Stage};
use jnnf::group::{corpus, FinGroup, SUBGROUP_SCAN_BOUND};
use jnnf::invariants::{chief_factor_battery, gamma_set, gamma_set_by_scan, mel_inclusion_battery, semidirect_census};
use jnnf::lab::{all_ok, run_pipeline, PipelineConfig};
use jnnf::perm::{PermGroup, Permutation};
use jnnf::wreath::{
    coordinate_psi_samples, normal_closure_battery, outer_certificate, product_action_verify, Automorphism,
    CoordinatePsi, HarnessWreath, OuterVerdict,
};

/// Allowed deviation for every numeric comparison below.
const TOLERANCE: u64 = 0;
const SEED: u64 = 20240601;

type Outcome = jnnf::Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn stage() -> Stage {
    let params: CbParams = toml::from_str("p = [3]\nq = [7, 7]\nt = [1]\ntheorem612_mode = true\n").unwrap();
    Stage::build(&params, 1).unwrap()
}

fn a5() -> PermGroup {
    corpus::perm_group("A5").unwrap()
}

fn c2_regular() -> PermGroup {
    PermGroup::from_cycles(2, &[vec![vec![0, 1]]]).unwrap()
}

fn s3_natural() -> PermGroup {
    corpus::perm_group("S3").unwrap()
}

fn commutators() -> Outcome {
    let st = stage();
    let r = verify_commutators(&st);
    let g = st.gamma();
    let gt = st.gamma_tilde();
    let ok = r.holds() && r.plain_pairs == g * g && r.tilde_pairs == gt * gt && g == 7 && gt == 6;
    Ok((
        ok,
        format!(
            "{} plain pairs, {} tilde pairs, {} + {} failures, diagonal z: {}",
            r.plain_pairs,
            r.tilde_pairs,
            r.plain_failures.len(),
            r.tilde_failures.len(),
            r.diagonal_is_z
        ),
    ))
}

fn centre() -> Outcome {
    let r = centre_of_d(&stage())?;
    let ok = r.centre_order == 3 && r.centre_is_z && r.sanity_radical_order == r.sanity_brute_order as u128;
    Ok((
        ok,
        format!(
            "|Z(D)| = {}, centre is <z>: {}, sanity radical {} vs brute {}",
            r.centre_order, r.centre_is_z, r.sanity_radical_order, r.sanity_brute_order
        ),
    ))
}

fn scalar_psi() -> Outcome {
    let r = verify_scalar_psi(&stage(), 3, 6, 1000, SEED)?;
    let ok = r.conjugation_failures as u64 <= TOLERANCE && r.holds();
    Ok((
        ok,
        format!(
            "lambda = (3, 6): {} conjugation failures, {} hom failures over {} pairs",
            r.conjugation_failures,
            r.hom_failures,
            r.generator_pairs + r.sampled_pairs
        ),
    ))
}

fn normal_closure() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, h) in [("C2 regular", c2_regular()), ("S3 natural", s3_natural())] {
        let r = normal_closure_battery(&a5(), &h)?;
        let reps: usize = r.checks.iter().map(|c| c.reps_outside_base).sum();
        let failures: usize = r.checks.iter().map(|c| c.failures.len()).sum();
        ok &= r.holds && failures == 0;
        parts.push(format!(
            "{name}: |W| = {}, degree {}, {} L, {reps} reps, {failures} failures",
            r.w_order,
            r.degree,
            r.checks.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn product_action() -> Outcome {
    let r = product_action_verify(&a5(), &c2_regular(), 3600)?;
    let ok = r.holds() && r.degree == 3600;
    Ok((
        ok,
        format!(
            "degree {}, faithful {}, transitive {}, B regular {}, B unique minimal normal {}, subprimitive {}",
            r.degree, r.faithful, r.transitive, r.base_regular, r.base_unique_minimal_normal, r.subprimitive
        ),
    ))
}

fn outer() -> Outcome {
    let x = a5();
    let w = HarnessWreath::new(&x, &s3_natural())?;
    let swap = Permutation::from_cycles(5, &[vec![0, 1]])?;
    let psi = CoordinatePsi {
        phi: Automorphism::conjugation(&w.x_elems, &swap)?,
    };
    let outer_phi = !psi.phi.is_inner(&w.x_elems.group);
    let samples = coordinate_psi_samples(&w, &psi, &psi, 1000, SEED);
    let verdict = outer_certificate(&w, &psi);
    let cert = matches!(verdict, OuterVerdict::Certificate(_));
    let ok = outer_phi
        && cert
        && (samples.compose_mismatches + samples.hom_mismatches) as u64 <= TOLERANCE
        && samples.samples >= 1000;
    Ok((
        ok,
        format!(
            "phi outer {outer_phi}, certificate {cert}, {} pairs, {} composition and {} hom mismatches",
            samples.samples, samples.compose_mismatches, samples.hom_mismatches
        ),
    ))
}

fn census() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, n) in [(2u8, 2usize), (3, 1)] {
        let r = semidirect_census(p, n)?;
        let expected = 1usize << (n + 1);
        ok &= r.distinct_derived == expected && r.formula_holds();
        parts.push(format!(
            "p={p} n={n}: {} distinct of {expected} expected, {} formula mismatches",
            r.distinct_derived,
            r.formula_mismatches.len()
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn corpus_groups() -> Vec<(&'static str, FinGroup)> {
    corpus::NAMES
        .iter()
        .map(|n| (*n, corpus::enumerate(n).group))
        .filter(|(_, g)| g.order() <= 2000)
        .collect()
}

fn gamma_sets() -> Outcome {
    let mut compared = 0;
    let mut bad = Vec::new();
    for (name, g) in corpus_groups() {
        if g.order() > SUBGROUP_SCAN_BOUND {
            continue;
        }
        for c in 0..3 {
            let walk = gamma_set(&g, c)?;
            let scan = gamma_set_by_scan(&g, c)?;
            compared += 1;
            if walk.subgroups() != scan.subgroups() {
                bad.push(format!("{name} c={c}"));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{compared} (group, c) cases, disagreements {bad:?}"),
    ))
}

fn mel_inclusion() -> Outcome {
    let mut pairs = 0;
    let mut exceptions = 0;
    let mut groups = 0;
    for (_, g) in corpus_groups() {
        let r = mel_inclusion_battery(&g)?;
        pairs += r.pairs;
        exceptions += r.exceptions.len();
        groups += 1;
    }
    Ok((
        exceptions as u64 <= TOLERANCE,
        format!("{groups} groups, {pairs} pairs, {exceptions} exceptions"),
    ))
}

fn chief_factors() -> Outcome {
    let mut factors = 0;
    let mut failures = Vec::new();
    for (name, g) in corpus_groups() {
        let r = chief_factor_battery(&g)?;
        factors += r.factors;
        failures.extend(r.failures.into_iter().map(|(_, _, why)| format!("{name}: {why}")));
    }
    Ok((
        failures.is_empty(),
        format!("{factors} chief factors, failures {failures:?}"),
    ))
}

fn congruence() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, p, k) in [(2usize, 3u32, 4usize), (2, 5, 3)] {
        let g = build_sl1(n, p, k)?;
        let order = g.group()?.order();
        let expected = (p as usize).pow(((n * n - 1) * (k - 1)) as u32);
        let lcs = g.verify_lcs_equals_congruence()?;
        let graded = g.graded_check()?;
        let ranks_ok = graded.layers.iter().all(|&(_, q, rank, abelian, exp_p)| {
            abelian && exp_p && rank as usize == n * n - 1 && q == (p as usize).pow(rank)
        });
        let t = TruncSeries::t(p, k);
        let f = NottinghamElement::new(t.add(&t.mul(&t)))?;
        let conj = g.inner_conjugator_search(&MatrixMap::Substitution(f))?;
        let this = order == expected && lcs.holds && graded.holds && ranks_ok && conj.is_none();
        ok &= this;
        parts.push(format!(
            "({n},{p},{k}): order {order} of {expected}, lcs {}, graded rank-{} layers {}, conjugator {}",
            lcs.holds,
            n * n - 1,
            ranks_ok,
            if conj.is_none() { "none" } else { "found" }
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn determinism() -> Outcome {
    let cfg = PipelineConfig::default_pipeline();
    let a = run_pipeline(&cfg, None)?;
    let b = run_pipeline(&cfg, None)?;
    let same = a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.body() == y.body());
    Ok((
        same && all_ok(&a),
        format!(
            "{} jobs, bodies identical {same}, all pass or inconclusive {}",
            a.len(),
            all_ok(&a)
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("commutator relations at (7,3,7,1)", commutators, 30),
        ("centre of D is <z>", centre, 10),
        ("scalar psi conjugation identities", scalar_psi, 60),
        ("base normal closure in A5 wr H", normal_closure, 300),
        ("product action of A5 wr C2", product_action, 60),
        ("outer psi certificate and composition", outer, 60),
        ("semidirect derived-subgroup census", census, 60),
        ("gamma sets: lattice walk vs scan", gamma_sets, 300),
        ("Melnikov inclusion over normal pairs", mel_inclusion, 120),
        ("narrow subgroups above chief factors", chief_factors, 120),
        ("congruence subgroups of SL2", congruence, 180),
        ("pipeline determinism", determinism, 600),
    ];
    let mut failed = 0;
    println!("tolerance {TOLERANCE}, seed {SEED}");
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let (ok, detail) = match outcome {
            Ok((ok, d)) => (ok && in_time, d),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {detail} [{:.2}s of {budget}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
