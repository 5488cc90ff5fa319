//! Exact-arithmetic classification of twisted Gelfand–Ponomarev modules.
//!
//! A twisted Gelfand–Ponomarev module is a finite-dimensional vector space
//! over a field `K` with automorphism `σ`, equipped with a σ-linear operator
//! `F` and a σ⁻¹-linear operator `V` satisfying `FV = VF = 0`. This crate
//! decomposes such modules into direct sums attached to Kraft quivers —
//! linear components named by finite words over `{F, V#}`, circular
//! components named by primitive periodic words carrying a semilinear
//! monodromy — and conversely builds modules from quiver representations.
//!
//! Layering, bottom to top:
//! * [`field`] — ℚ, 𝔽_p, 𝔽_{p^k} with explicit σ,
//! * [`linalg`] — dense exact matrices and RREF-canonical subspaces,
//! * [`semilinear`] — the σ-linear relation calculus and weak decomposition,
//! * [`quiver`] — Kraft quivers, words, periodic words,
//! * [`repn`] — representations, attached modules, monodromy,
//! * [`classify`] — the classification pipeline and isomorphism test,
//! * [`json`] — the stable file formats used by the CLI.

// indexed loops over matrix entries read better than iterator chains here
#![allow(clippy::needless_range_loop)]

pub mod canonical;
pub mod classify;
pub mod field;
pub mod json;
pub mod linalg;
pub mod quiver;
pub mod repn;
pub mod sample;
pub mod semilinear;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("field context mismatch")]
    CtxMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("FV = VF = 0 violated: {0}")]
    GpViolation(String),
    #[error("not a Kraft quiver:\n{0}")]
    Kraft(String),
    #[error("{0}")]
    Invalid(String),
}
