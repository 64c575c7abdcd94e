//! First congruence subgroups of `SL_n` over truncated power series
//! `F_p[[T]] / (T^k)`, their filtrations, and substitution automorphisms.

mod series;
mod sl1;

pub use series::{NottinghamElement, TruncMatrix, TruncSeries};
pub use sl1::{
    build_sl1, find_substitution_of_order, sl1_generators, substitution_closure, GradedReport, LcsReport, MatrixMap,
    NottinghamReport, Sl1, SL_ENUMERATION_BOUND, SUBSTITUTION_CLOSURE_BOUND,
};
