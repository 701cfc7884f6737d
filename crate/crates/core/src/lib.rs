//! Loop algebras, energy ideals, factor algebras and generalized
//! Inönü-Wigner contractions over exact rational arithmetic, with a
//! finite-difference Poisson-bracket oracle for the perturbed 2-D Kepler
//! problem.

pub mod bundled;
pub mod demos;
pub mod exact;
pub mod format;
pub mod kepler;
pub mod lie;
pub mod loop_alg;
