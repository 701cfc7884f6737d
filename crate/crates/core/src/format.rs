//! JSON file formats for algebras and loop specs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::rational::{self, Rational};
use crate::exact::PuiseuxScalar;
use crate::lie::{LieAlgebra, LieError};
use crate::loop_alg::{LoopError, LoopGenerator, LoopSpec, LoopTerm, TowerSelection};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid algebra: {0}")]
    Lie(#[from] LieError),
    #[error("invalid loop spec: {0}")]
    Loop(#[from] LoopError),
}

impl From<serde_json::Error> for LoadError {
    fn from(e: serde_json::Error) -> Self {
        LoadError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default)]
    pub names: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<AlgebraBracket>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBracket {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<AlgebraTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraTerm {
    pub k: usize,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
    #[serde(with = "rational::serde_str", default = "zero")]
    pub q: Rational,
}

fn zero() -> Rational {
    rational::int(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopSpecFile {
    pub s: u32,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub brackets: Vec<LoopBracket>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selection: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    pub grade: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopBracket {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<LoopTermEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopTermEntry {
    pub k: usize,
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
    pub hpow: u32,
}

/// Parses an algebra file; brackets must be listed with `i < j` and satisfy Jacobi.
pub fn load_algebra(src: &str) -> Result<LieAlgebra, LoadError> {
    let file: AlgebraFile = serde_json::from_str(src)?;
    let names = match file.names {
        Some(n) if n.len() != file.dim => {
            return Err(LieError::NameCount {
                names: n.len(),
                dim: file.dim,
            }
            .into())
        }
        Some(n) => n,
        None => crate::lie::default_names(file.dim),
    };
    let mut constants = Vec::new();
    for b in &file.brackets {
        if b.i >= b.j {
            return Err(LieError::BracketOrder { i: b.i, j: b.j }.into());
        }
        for t in &b.terms {
            constants.push((
                b.i,
                b.j,
                t.k,
                PuiseuxScalar::monomial(t.c.clone(), t.q.clone()),
            ));
        }
    }
    Ok(LieAlgebra::new(names, constants)?)
}

pub fn algebra_to_file(alg: &LieAlgebra) -> AlgebraFile {
    AlgebraFile {
        dim: alg.dim(),
        names: Some(alg.names().to_vec()),
        brackets: alg
            .brackets()
            .map(|(&(i, j), terms)| AlgebraBracket {
                i,
                j,
                terms: terms
                    .iter()
                    .flat_map(|(&k, c)| {
                        c.terms().map(move |(q, coeff)| AlgebraTerm {
                            k,
                            c: coeff.clone(),
                            q: q.clone(),
                        })
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn algebra_to_json(alg: &LieAlgebra) -> String {
    serde_json::to_string_pretty(&algebra_to_file(alg)).expect("algebra serializes")
}

/// Parses a loop spec; `window` bounds the Jacobi check on the towers.
pub fn load_loop_spec(src: &str, window: u32) -> Result<LoopSpec, LoadError> {
    let file: LoopSpecFile = serde_json::from_str(src)?;
    let generators = file
        .generators
        .into_iter()
        .map(|g| LoopGenerator {
            name: g.name,
            grade: g.grade,
        })
        .collect();
    let brackets = file
        .brackets
        .into_iter()
        .map(|b| {
            let terms = b
                .terms
                .into_iter()
                .map(|t| LoopTerm {
                    k: t.k,
                    coeff: t.c,
                    hpow: t.hpow,
                })
                .collect();
            (b.i, b.j, terms)
        })
        .collect();
    let spec = LoopSpec::new(file.s, generators, brackets, window)?;
    Ok(match file.selection {
        Some(levels) => spec.with_selection(TowerSelection::new(levels))?,
        None => spec,
    })
}

/// Either kind of input file, told apart by the presence of `"s"`.
pub enum InputFile {
    Algebra(LieAlgebra),
    Loop(LoopSpec),
}

pub fn load_any(src: &str, window: u32) -> Result<InputFile, LoadError> {
    let value: serde_json::Value = serde_json::from_str(src)?;
    if value.get("s").is_some() {
        load_loop_spec(src, window).map(InputFile::Loop)
    } else {
        load_algebra(src).map(InputFile::Algebra)
    }
}
