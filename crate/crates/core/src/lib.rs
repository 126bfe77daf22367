//! Evaluation and numerical verification of the modified-Bessel sum
//!
//! ```text
//! Φ_ν(x) = e^{-x} x^{-ν} [I_ν(x) + I_{ν+1}(x)]
//! Ψ_ν(x) = √π 2^ν Γ(ν+1/2) Φ_ν(x)
//! ```
//!
//! The crate evaluates Φ_ν by two independent routes (power series and
//! quadrature of an integral representation), implements closed-form
//! envelopes and the Turán and Kanter-type comparison quantities, and runs a
//! grid-based verification harness over the monotonicity, convexity and
//! inequality properties of Φ_ν and Ψ_ν.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`scalar`] | log-gamma, digamma, reciprocal gamma, central-binomial term |
//! | [`bessel`] | scaled `e^{-x} I_ν(x)` and the ratio `I_{ν+1}/I_ν` |
//! | [`phi`] | Φ_ν, Ψ_ν, their x- and ν-derivatives, log-derivative |
//! | [`quadrature`] | Gauss–Legendre rules, Neumann product integrals, Kanter integrals |
//! | [`bounds`] | two-sided envelope, weighted Φ_ν, Turán gap |
//! | [`harness`] | registered property checks producing [`harness::CheckReport`] |
//! | [`cli`] | the `phi-bessel` command-line front end |

// NaN-rejecting checks are written as negated comparisons throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod harness;
pub mod phi;
pub mod quadrature;
pub mod scalar;

pub use bessel::Order;
pub use error::{Error, Result};
pub use phi::{Method, PhiEval};
