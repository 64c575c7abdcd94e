//! The stage-one group `G_1 = W (D x| G_0)` built from prime parameters,
//! with monomial models on `V = F_q[F_p^Gamma]` used as an oracle for the
//! closed-form arithmetic.

mod checks;
mod monomial;
mod params;
mod stage;

pub use checks::{
    centre_of_d, form_radical_dim, rank_mod_p, verify_centre_g1, verify_commutators, verify_normal_form,
    verify_scalar_psi, CentreG1Report, CentreReport, CommutatorReport, NormalFormReport, PsiReport,
};
pub use monomial::{pow_mod, Monomial};
pub use params::{is_prime, validate_params, CbParams, Decomposition, Validation};
pub use stage::{CbElement, DElem, ScalarPsi, Stage, WVec, W_DIM_BOUND};
