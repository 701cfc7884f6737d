//! Finite-dimensional Lie algebras over [`PuiseuxScalar`].
//!
//! An algebra is stored as sparse structure constants `[X_i, X_j] = sum_k C_ij^k X_k`
//! for `i < j` only; antisymmetry is implied by the storage convention.

mod analysis;
mod contraction;
mod matrices;

pub use analysis::{center_dim, classify3, derived_subalgebra_dim, killing_form, ClassLabel};
pub use contraction::{change_basis, contract, is_classic_iw, rescale_basis, ContractionWeights};
pub use matrices::{algebra_from_matrices, elementary};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::exact::{ExactError, PuiseuxScalar, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("Jacobi identity fails for ({a}, {b}, {c}): residual {residual}")]
    JacobiViolation {
        a: usize,
        b: usize,
        c: usize,
        residual: String,
    },
    #[error("generator index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket ({i}, {j}) must be listed with i < j")]
    BracketOrder { i: usize, j: usize },
    #[error("{names} generator names given for dimension {dim}")]
    NameCount { names: usize, dim: usize },
    #[error("structure constants depend on eps")]
    SymbolicAlgebra,
    #[error("expected a {expected}-dimensional algebra, got {found}")]
    WrongDimension { expected: usize, found: usize },
    #[error("{found} weights given for dimension {expected}")]
    WeightLength { expected: usize, found: usize },
    #[error("contraction undefined: n_a + n_b < n_c for (a, b, c) in {violations:?}")]
    ContractionUndefined {
        violations: Vec<(usize, usize, usize)>,
    },
    #[error("commutator of matrices {i} and {j} leaves their span")]
    NotClosed { i: usize, j: usize },
    #[error("input matrices are linearly dependent")]
    LinearlyDependent,
    #[error("input matrices must be square and of one size")]
    MatrixShape,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Sparse structure constants of one bracket: `k -> C_ij^k`, nonzero entries only.
pub type BracketTerms = BTreeMap<usize, PuiseuxScalar>;

#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    names: Vec<String>,
    brackets: BTreeMap<(usize, usize), BracketTerms>,
}

impl LieAlgebra {
    /// Builds and checks the Jacobi identity.
    ///
    /// Entries with `i > j` are stored as `-C` under `(j, i)`; repeated entries add up.
    pub fn new<I>(names: Vec<String>, constants: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = (usize, usize, usize, PuiseuxScalar)>,
    {
        let alg = Self::unchecked(names, constants)?;
        validate(&alg)?;
        Ok(alg)
    }

    /// Like [`LieAlgebra::new`] but skips the Jacobi check.
    pub fn unchecked<I>(names: Vec<String>, constants: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = (usize, usize, usize, PuiseuxScalar)>,
    {
        let dim = names.len();
        let mut brackets: BTreeMap<(usize, usize), BracketTerms> = BTreeMap::new();
        for (i, j, k, c) in constants {
            for index in [i, j, k] {
                if index >= dim {
                    return Err(LieError::IndexOutOfRange { index, dim });
                }
            }
            if c.is_zero() {
                continue;
            }
            if i == j {
                return Err(LieError::BracketOrder { i, j });
            }
            let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
            let entry = brackets.entry(key).or_default();
            let sum = entry.get(&k).map_or(c.clone(), |old| old + &c);
            if sum.is_zero() {
                entry.remove(&k);
            } else {
                entry.insert(k, sum);
            }
        }
        brackets.retain(|_, t| !t.is_empty());
        Ok(Self { names, brackets })
    }

    /// Algebra with constant (eps-free) rational structure constants.
    pub fn from_rational<I>(names: &[&str], constants: I) -> Result<Self, LieError>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rational)>,
    {
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            constants
                .into_iter()
                .map(|(i, j, k, c)| (i, j, k, PuiseuxScalar::constant(c))),
        )
    }

    pub fn abelian(dim: usize) -> Self {
        Self {
            names: default_names(dim),
            brackets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, LieError> {
        if names.len() != self.dim() {
            return Err(LieError::NameCount {
                names: names.len(),
                dim: self.dim(),
            });
        }
        self.names = names;
        Ok(self)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Stored brackets `(i, j) -> terms`, `i < j`.
    pub fn brackets(&self) -> impl Iterator<Item = (&(usize, usize), &BracketTerms)> {
        self.brackets.iter()
    }

    /// Every nonzero `C_ij^k` with `i < j`.
    pub fn nonzero_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &PuiseuxScalar)> {
        self.brackets
            .iter()
            .flat_map(|(&(i, j), t)| t.iter().map(move |(&k, c)| (i, j, k, c)))
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> PuiseuxScalar {
        let get = |a, b| {
            self.brackets
                .get(&(a, b))
                .and_then(|t| t.get(&k))
                .cloned()
                .unwrap_or_default()
        };
        match i.cmp(&j) {
            std::cmp::Ordering::Less => get(i, j),
            std::cmp::Ordering::Greater => -get(j, i),
            std::cmp::Ordering::Equal => PuiseuxScalar::zero(),
        }
    }

    /// `[X_i, X_j]` as a dense coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<PuiseuxScalar> {
        (0..self.dim())
            .map(|k| self.structure_constant(i, j, k))
            .collect()
    }

    /// Bracket of two dense coordinate vectors.
    pub fn bracket(&self, x: &[PuiseuxScalar], y: &[PuiseuxScalar]) -> Vec<PuiseuxScalar> {
        let mut out = vec![PuiseuxScalar::zero(); self.dim()];
        for (&(i, j), terms) in &self.brackets {
            // x_i y_j - x_j y_i
            let w = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            if w.is_zero() {
                continue;
            }
            for (&k, c) in terms {
                out[k] += &(&w * c);
            }
        }
        out
    }

    pub fn is_eps_free(&self) -> bool {
        self.nonzero_constants().all(|(_, _, _, c)| c.is_constant())
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// Dense table `C[i][j][k]` for eps-free algebras.
    pub fn rational_constants(&self) -> Result<Vec<Vec<Vec<Rational>>>, LieError> {
        use num_traits::Zero;
        let n = self.dim();
        let mut c = vec![vec![vec![Rational::zero(); n]; n]; n];
        for (i, j, k, s) in self.nonzero_constants() {
            let v = s.as_constant().ok_or(LieError::SymbolicAlgebra)?;
            c[j][i][k] = -v.clone();
            c[i][j][k] = v;
        }
        Ok(c)
    }

    /// Applies `f` to every structure constant, dropping results that vanish.
    pub fn map_constants<F>(&self, mut f: F) -> Result<Self, LieError>
    where
        F: FnMut(usize, usize, usize, &PuiseuxScalar) -> Result<PuiseuxScalar, LieError>,
    {
        let mut out = Vec::new();
        for (i, j, k, c) in self.nonzero_constants() {
            out.push((i, j, k, f(i, j, k, c)?));
        }
        Self::new(self.names.clone(), out)
    }

    /// Substitutes `eps = value` exactly.
    pub fn evaluate_at(&self, eps: &Rational) -> Result<Self, LieError> {
        self.map_constants(|_, _, _, c| Ok(PuiseuxScalar::constant(c.eval_exact(eps)?)))
    }

    /// Same constants after renaming, i.e. ignoring labels.
    pub fn same_constants(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.brackets == other.brackets
    }

    /// Reorders the basis: generator `perm[a]` of `self` becomes generator `a` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self, LieError> {
        let n = self.dim();
        let mut inverse = vec![usize::MAX; n];
        for (a, &p) in perm.iter().enumerate() {
            if p >= n {
                return Err(LieError::IndexOutOfRange { index: p, dim: n });
            }
            inverse[p] = a;
        }
        if perm.len() != n || inverse.contains(&usize::MAX) {
            return Err(LieError::WrongDimension {
                expected: n,
                found: perm.len(),
            });
        }
        Self::new(
            perm.iter().map(|&p| self.names[p].clone()).collect(),
            self.nonzero_constants()
                .map(|(i, j, k, c)| (inverse[i], inverse[j], inverse[k], c.clone())),
        )
    }
}

pub fn default_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("X{i}")).collect()
}

/// Checks `[X_a,[X_b,X_c]] + [X_b,[X_c,X_a]] + [X_c,[X_a,X_b]] = 0` exactly.
pub fn validate(alg: &LieAlgebra) -> Result<(), LieError> {
    let n = alg.dim();
    let basis = |i: usize| {
        let mut v = vec![PuiseuxScalar::zero(); n];
        v[i] = PuiseuxScalar::constant(Rational::from_integer(1.into()));
        v
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let t1 = alg.bracket(&basis(a), &alg.bracket_basis(b, c));
                let t2 = alg.bracket(&basis(b), &alg.bracket_basis(c, a));
                let t3 = alg.bracket(&basis(c), &alg.bracket_basis(a, b));
                let residual: Vec<PuiseuxScalar> = t1
                    .iter()
                    .zip(&t2)
                    .zip(&t3)
                    .map(|((x, y), z)| &(x + y) + z)
                    .collect();
                if residual.iter().any(|r| !r.is_zero()) {
                    return Err(LieError::JacobiViolation {
                        a,
                        b,
                        c,
                        residual: format_vector(alg, &residual),
                    });
                }
            }
        }
    }
    Ok(())
}

fn format_vector(alg: &LieAlgebra, v: &[PuiseuxScalar]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| format!("({c}) {}", alg.names[k]))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}: {}", self.dim(), self.names.join(", "))?;
        if self.brackets.is_empty() {
            return writeln!(f, "  (abelian)");
        }
        for (&(i, j), terms) in &self.brackets {
            let rhs: Vec<String> = terms
                .iter()
                .map(|(&k, c)| format!("({c}) {}", self.names[k]))
                .collect();
            writeln!(
                f,
                "  [{}, {}] = {}",
                self.names[i],
                self.names[j],
                rhs.join(" + ")
            )?;
        }
        Ok(())
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
