//! The stage-one group `G_1` for `(q_0, p_1, q_1, t_1) = (7, 3, 7, 1)`:
//! commutator relations, the normal form of `D`, centres and scalar
//! automorphisms.

use std::time::Instant;

use jnnf::construction::{
    centre_of_d, validate_params, verify_centre_g1, verify_commutators, verify_normal_form, verify_scalar_psi,
    CbParams, Stage,
};

fn main() -> jnnf::Result<()> {
    let params: CbParams =
        toml::from_str("p = [3]\nq = [7, 7]\nt = [1]\ntheorem612_mode = true\n").expect("parameter file parses");
    let v = validate_params(&params);
    println!("violations {:?}, decomposition {:?}", v.violations, v.decomposition);

    let stage = Stage::build(&params, 1)?;
    println!(
        "|Gamma| = {}, |Gamma~| = {}, dim V = {}, dim W = {}, |D| = 3^{}, zeta = {}",
        stage.gamma(),
        stage.gamma_tilde(),
        stage.v_dim(),
        stage.w_dim(),
        stage.d_exponent(),
        stage.zeta
    );

    let t = Instant::now();
    let c = verify_commutators(&stage);
    println!(
        "commutators: {} + {} pairs, holds {} ({:.2?})",
        c.plain_pairs,
        c.tilde_pairs,
        c.holds(),
        t.elapsed()
    );

    let n = verify_normal_form(&stage, 200, 1);
    println!(
        "normal form: {} failures, {} W-action failures",
        n.failures, n.w_action_failures
    );

    let z = centre_of_d(&stage)?;
    println!(
        "Z(D): order {}, sanity radical {} vs brute {}",
        z.centre_order, z.sanity_radical_order, z.sanity_brute_order
    );
    println!("Z(G_1) trivial: {}", verify_centre_g1(&stage).holds());

    let t = Instant::now();
    let psi = verify_scalar_psi(&stage, 3, 6, 1000, 11)?;
    println!(
        "scalar psi (3, 6): holds {}, outer hypotheses {:?} ({:.2?})",
        psi.holds(),
        psi.outer_hypotheses,
        t.elapsed()
    );
    Ok(())
}
