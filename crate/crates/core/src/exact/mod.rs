//! Exact arithmetic substrate.
//!
//! Everything structural in this crate is computed over arbitrary-precision
//! rationals. Structure constants that depend on the contraction parameter
//! live in [`PuiseuxScalar`], a finite sum of monomials `c * eps^q` with
//! rational exponents `q`.

mod matrix;
mod puiseux;
pub mod rational;

pub use matrix::{signature, Matrix, Signature};
pub use puiseux::PuiseuxScalar;
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    /// The limit `eps -> 0+` does not exist.
    #[error("negative exponent {exponent} has no limit at eps = 0")]
    NegativeExponent { exponent: Box<Rational> },
    #[error("cannot evaluate at non-positive eps = {0}")]
    NonPositiveEval(f64),
    #[error("eps^{exponent} is not rational at eps = {eps}")]
    InexactPower {
        eps: Box<Rational>,
        exponent: Box<Rational>,
    },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
}
