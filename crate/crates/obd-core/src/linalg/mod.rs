//! Exact linear algebra: dense GF(2) elimination and integer Smith normal
//! form. Both are small and self-contained; everything downstream
//! (vanishing decisions, layered solvers, H1 presentations) routes through
//! here.

pub mod f2;
pub mod snf;

pub use f2::{F2Matrix, F2Solution, F2Vec};
pub use snf::{smith_normal_form, SmithForm};
