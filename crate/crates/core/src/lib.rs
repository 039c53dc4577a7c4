//! Index calculus in Jacobians of C_ab curves over small finite fields.
//!
//! The crate computes the group structure of `J_C(F_q)` from relations
//! `div(a + bY)` over a factor base of small places, and discrete
//! logarithms by Hafner–McCurley smoothing followed by a special-Q
//! descent. Every result can be checked against exact point counts
//! (zeta function) and an independent ideal-arithmetic group law.

pub mod algebra;
pub mod cli;
pub mod curve;
pub mod descent;
pub mod jacobian;
pub mod linalg;
pub mod relations;
pub mod error;

pub use error::{Error, Rejection, Result};
