use std::fmt;

use num_traits::{Signed, Zero};

use super::{LieAlgebra, LieError};
use crate::exact::rational::{self, Rational};
use crate::exact::{ExactError, Matrix, PuiseuxScalar};

/// Weights `n_a` of the diagonal map `X_a -> eps^(-n_a) X_a`, one per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContractionWeights(Vec<Rational>);

impl ContractionWeights {
    pub fn new(weights: Vec<Rational>) -> Self {
        Self(weights)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    pub fn from_i64(w: &[i64]) -> Self {
        Self(w.iter().map(|&x| rational::int(x)).collect())
    }

    /// Parses a comma-separated list such as `0,0,1/2`.
    pub fn parse(s: &str) -> Result<Self, ExactError> {
        s.split(',')
            .map(rational::parse)
            .collect::<Result<_, _>>()
            .map(Self)
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|w| -w).collect())
    }

    fn check_len(&self, alg: &LieAlgebra) -> Result<(), LieError> {
        if self.len() != alg.dim() {
            return Err(LieError::WeightLength {
                expected: alg.dim(),
                found: self.len(),
            });
        }
        Ok(())
    }

    /// `n_a + n_b - n_c`
    fn excess(&self, a: usize, b: usize, c: usize) -> Rational {
        &self.0[a] + &self.0[b] - &self.0[c]
    }
}

impl fmt::Display for ContractionWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Limit algebra: keeps `C_ab^c` where `n_a + n_b = n_c`, drops it where the excess is positive.
///
/// Only triples with a nonzero constant are checked for `n_a + n_b >= n_c`.
pub fn contract(alg: &LieAlgebra, w: &ContractionWeights) -> Result<LieAlgebra, LieError> {
    w.check_len(alg)?;
    if !alg.is_eps_free() {
        return Err(LieError::SymbolicAlgebra);
    }
    let violations: Vec<(usize, usize, usize)> = alg
        .nonzero_constants()
        .filter(|&(a, b, c, _)| w.excess(a, b, c).is_negative())
        .map(|(a, b, c, _)| (a, b, c))
        .collect();
    if !violations.is_empty() {
        return Err(LieError::ContractionUndefined { violations });
    }
    LieAlgebra::new(
        alg.names().to_vec(),
        alg.nonzero_constants()
            .filter(|&(a, b, c, _)| w.excess(a, b, c).is_zero())
            .map(|(a, b, c, k)| (a, b, c, k.clone())),
    )
}

/// Zero on some generators and one common positive value on the rest.
pub fn is_classic_iw(w: &ContractionWeights) -> bool {
    let mut common: Option<&Rational> = None;
    for n in w.as_slice() {
        if n.is_zero() {
            continue;
        }
        if n.is_negative() {
            return false;
        }
        match common {
            None => common = Some(n),
            Some(c) if c == n => {}
            Some(_) => return false,
        }
    }
    true
}

/// Structure constants in the basis `Y_a = eps^(-n_a) X_a`:
/// `C_ab^c -> eps^(n_c - n_a - n_b) C_ab^c`.
pub fn rescale_basis(alg: &LieAlgebra, w: &ContractionWeights) -> Result<LieAlgebra, LieError> {
    w.check_len(alg)?;
    alg.map_constants(|a, b, c, k| Ok(k.shift(&-w.excess(a, b, c))))
}

/// Constants in the basis `Y_a = sum_b P[b][a] X_b`; `p` must be invertible.
pub fn change_basis(alg: &LieAlgebra, p: &Matrix) -> Result<LieAlgebra, LieError> {
    let n = alg.dim();
    if p.rows() != n || p.cols() != n {
        return Err(LieError::WrongDimension {
            expected: n,
            found: p.rows(),
        });
    }
    let p_inv = p.inverse()?;
    let column = |a: usize| -> Vec<PuiseuxScalar> {
        (0..n)
            .map(|b| PuiseuxScalar::constant(p[(b, a)].clone()))
            .collect()
    };
    let mut constants = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let in_x = alg.bracket(&column(a), &column(b));
            for f in 0..n {
                let mut coeff = PuiseuxScalar::zero();
                for (e, x) in in_x.iter().enumerate() {
                    coeff += &x.scale(&p_inv[(f, e)]);
                }
                constants.push((a, b, f, coeff));
            }
        }
    }
    LieAlgebra::new(alg.names().to_vec(), constants)
}
