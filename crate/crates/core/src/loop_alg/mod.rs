//! Graded loop algebras over a central element `h`.
//!
//! A [`LoopSpec`] describes the positive loop algebra spanned by `h^n X_i`
//! (`n >= 0`) intensionally: a finite set of basic generators with integer
//! grades, and base brackets `{X_i, X_j} = sum c h^p X_k`. Infinite towers
//! are only ever enumerated up to a truncation window.

mod element;
mod embedding;
mod selection;

pub use element::{loop_bracket, LoopElement};
pub use embedding::{embedding_check, embedding_complement, GeneratorMap};
pub use selection::{check_selection, factor_algebra, factor_family, TowerSelection};

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::rational::Rational;

pub const DEFAULT_MAX_LEVEL: u32 = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LoopError {
    #[error("grade of h must be positive")]
    ZeroGradeStep,
    #[error("generator index {index} out of range ({count} generators)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("bracket ({i}, {j}) must be listed with i < j")]
    BracketOrder { i: usize, j: usize },
    #[error("bracket ({i}, {j}) listed twice")]
    DuplicateBracket { i: usize, j: usize },
    #[error(
        "grade not conserved in {{{i}, {j}}} -> h^{hpow} {k}: {gi} + {gj} != {gk} + {s}*{hpow}"
    )]
    GradeMismatchInSpec {
        i: usize,
        j: usize,
        k: usize,
        hpow: u32,
        gi: u32,
        gj: u32,
        gk: u32,
        s: u32,
    },
    #[error("Jacobi identity fails for generators ({a}, {b}, {c}) at levels {levels:?}")]
    JacobiViolation {
        a: usize,
        b: usize,
        c: usize,
        levels: (u32, u32, u32),
    },
    #[error("{found} levels given for {expected} generators")]
    SelectionLength { expected: usize, found: usize },
    #[error(
        "selection not closed: {{{gi}, {gj}}} -> {gk} needs m_i + m_j + hpow >= m_k, \
         but {mi}+{mj}+{hpow} < {mk}"
    )]
    NotClosed {
        i: usize,
        j: usize,
        k: usize,
        gi: String,
        gj: String,
        gk: String,
        mi: u32,
        mj: u32,
        hpow: u32,
        mk: u32,
    },
    #[error("generator map has {found} entries for {expected} generators")]
    MapLength { expected: usize, found: usize },
    #[error("generator map is not injective")]
    NotInjective,
    #[error("grade of generator {sub} is not preserved by the map")]
    GradeMismatch { sub: usize },
    #[error("bracket of generators {i} (level {li}) and {j} (level {lj}) is not preserved")]
    BracketMismatch {
        i: usize,
        j: usize,
        li: u32,
        lj: u32,
    },
    #[error("{0}")]
    Lie(#[from] crate::lie::LieError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopGenerator {
    pub name: String,
    pub grade: u32,
}

/// One term `coeff * h^hpow * X_k` of a base bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopTerm {
    pub k: usize,
    pub coeff: Rational,
    pub hpow: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopSpec {
    s: u32,
    generators: Vec<LoopGenerator>,
    brackets: BTreeMap<(usize, usize), Vec<LoopTerm>>,
    selection: Option<TowerSelection>,
}

impl LoopSpec {
    /// Validates indices, grade conservation, and the Jacobi identity up to `window`.
    pub fn new(
        s: u32,
        generators: Vec<LoopGenerator>,
        brackets: Vec<(usize, usize, Vec<LoopTerm>)>,
        window: u32,
    ) -> Result<Self, LoopError> {
        if s == 0 {
            return Err(LoopError::ZeroGradeStep);
        }
        let count = generators.len();
        let mut table: BTreeMap<(usize, usize), Vec<LoopTerm>> = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, terms) in brackets {
            for index in std::iter::once(i)
                .chain([j])
                .chain(terms.iter().map(|t| t.k))
            {
                if index >= count {
                    return Err(LoopError::IndexOutOfRange { index, count });
                }
            }
            if i >= j {
                return Err(LoopError::BracketOrder { i, j });
            }
            if !seen.insert((i, j)) {
                return Err(LoopError::DuplicateBracket { i, j });
            }
            let mut merged: Vec<LoopTerm> = Vec::new();
            for t in terms {
                let (gi, gj, gk) = (
                    generators[i].grade,
                    generators[j].grade,
                    generators[t.k].grade,
                );
                if gi + gj != gk + s * t.hpow {
                    return Err(LoopError::GradeMismatchInSpec {
                        i,
                        j,
                        k: t.k,
                        hpow: t.hpow,
                        gi,
                        gj,
                        gk,
                        s,
                    });
                }
                match merged.iter_mut().find(|m| m.k == t.k) {
                    Some(m) => m.coeff += t.coeff,
                    None => merged.push(t),
                }
            }
            merged.retain(|t| !t.coeff.is_zero());
            merged.sort_by_key(|t| t.k);
            if !merged.is_empty() {
                table.insert((i, j), merged);
            }
        }
        let spec = Self {
            s,
            generators,
            brackets: table,
            selection: None,
        };
        spec.check_jacobi(window)?;
        Ok(spec)
    }

    pub fn with_selection(mut self, sel: TowerSelection) -> Result<Self, LoopError> {
        sel.check_len(&self)?;
        self.selection = Some(sel);
        Ok(self)
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn generators(&self) -> &[LoopGenerator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn grade(&self, i: usize) -> u32 {
        self.generators[i].grade
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Selection stored alongside the spec, if any.
    pub fn selection(&self) -> Option<&TowerSelection> {
        self.selection.as_ref()
    }

    /// Stored base brackets, `i < j`.
    pub fn brackets(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<LoopTerm>)> {
        self.brackets.iter()
    }

    /// Every nonzero base term as `(i, j, term)` with `i < j`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &LoopTerm)> {
        self.brackets
            .iter()
            .flat_map(|(&(i, j), ts)| ts.iter().map(move |t| (i, j, t)))
    }

    /// `{X_i, X_j}` with the sign fixed for any order.
    pub fn base_bracket(&self, i: usize, j: usize) -> Vec<LoopTerm> {
        if i < j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_default()
        } else if i > j {
            self.brackets
                .get(&(j, i))
                .map(|ts| {
                    ts.iter()
                        .map(|t| LoopTerm {
                            k: t.k,
                            coeff: -t.coeff.clone(),
                            hpow: t.hpow,
                        })
                        .collect()
                })
                .unwrap_or_default()
        } else {
            Vec::new()
        }
    }

    fn check_jacobi(&self, window: u32) -> Result<(), LoopError> {
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for la in 0..=window {
                        for lb in 0..=window {
                            for lc in 0..=window {
                                let x = LoopElement::basis(a, la);
                                let y = LoopElement::basis(b, lb);
                                let z = LoopElement::basis(c, lc);
                                let sum = loop_bracket(self, &x, &loop_bracket(self, &y, &z))
                                    .add(&loop_bracket(self, &y, &loop_bracket(self, &z, &x)))
                                    .add(&loop_bracket(self, &z, &loop_bracket(self, &x, &y)));
                                if !sum.is_zero() {
                                    return Err(LoopError::JacobiViolation {
                                        a,
                                        b,
                                        c,
                                        levels: (la, lb, lc),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
