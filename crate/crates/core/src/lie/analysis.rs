use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::{LieAlgebra, LieError};
use crate::exact::{signature, Matrix, Rational, Signature};

/// Real three-dimensional algebras that show up as factor algebras and contractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    So3,
    So21,
    E2,
    E11,
    Heisenberg,
    Abelian3,
    Other,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::So3 => "so3",
            ClassLabel::So21 => "so21",
            ClassLabel::E2 => "e2",
            ClassLabel::E11 => "e11",
            ClassLabel::Heisenberg => "heisenberg",
            ClassLabel::Abelian3 => "abelian3",
            ClassLabel::Other => "other",
        }
    }

    pub const ALL: [ClassLabel; 7] = [
        ClassLabel::So3,
        ClassLabel::So21,
        ClassLabel::E2,
        ClassLabel::E11,
        ClassLabel::Heisenberg,
        ClassLabel::Abelian3,
        ClassLabel::Other,
    ];
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `ad_a` as a matrix: column `b`, row `c` holds `C_ab^c`.
fn ad_matrices(c: &[Vec<Vec<Rational>>]) -> Vec<Matrix> {
    let n = c.len();
    (0..n)
        .map(|a| {
            let mut m = Matrix::zeros(n, n);
            for b in 0..n {
                for k in 0..n {
                    m[(k, b)] = c[a][b][k].clone();
                }
            }
            m
        })
        .collect()
}

pub fn derived_subalgebra_dim(alg: &LieAlgebra) -> Result<usize, LieError> {
    let c = alg.rational_constants()?;
    let n = alg.dim();
    let rows: Vec<Vec<Rational>> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| c[i][j].clone())
        .collect();
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(rows).rank())
}

/// Dimension of `{x : [x, y] = 0 for all y}`.
pub fn center_dim(alg: &LieAlgebra) -> Result<usize, LieError> {
    let c = alg.rational_constants()?;
    let n = alg.dim();
    if n == 0 {
        return Ok(0);
    }
    // Row (b, k), column a: C_ab^k.
    let mut m = Matrix::zeros(n * n, n);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                m[(b * n + k, a)] = c[a][b][k].clone();
            }
        }
    }
    Ok(n - m.rank())
}

/// `B(X_a, X_b) = tr(ad_a ad_b)`.
pub fn killing_form(alg: &LieAlgebra) -> Result<Matrix, LieError> {
    let ads = ad_matrices(&alg.rational_constants()?);
    let n = ads.len();
    let mut b = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = (&ads[i] * &ads[j]).trace();
            b[(j, i)] = t.clone();
            b[(i, j)] = t;
        }
    }
    Ok(b)
}

fn is_unimodular(alg: &LieAlgebra) -> Result<bool, LieError> {
    Ok(ad_matrices(&alg.rational_constants()?)
        .iter()
        .all(|m| m.trace().is_zero()))
}

pub fn classify3(alg: &LieAlgebra) -> Result<ClassLabel, LieError> {
    if alg.dim() != 3 {
        return Err(LieError::WrongDimension {
            expected: 3,
            found: alg.dim(),
        });
    }
    let derived = derived_subalgebra_dim(alg)?;
    let killing = killing_form(alg)?;
    let sig = signature(&killing)?;
    let rank1 = |positives, negatives| {
        sig == Signature {
            positives,
            negatives,
            zeros: 2,
        }
    };
    let label = match derived {
        0 => ClassLabel::Abelian3,
        1 if center_dim(alg)? == 1 && killing.is_zero() => ClassLabel::Heisenberg,
        // The unimodular check separates e(2) and e(1,1) from the solvable
        // algebras whose Killing forms also have rank one.
        2 if is_unimodular(alg)? && rank1(0, 1) => ClassLabel::E2,
        2 if is_unimodular(alg)? && rank1(1, 0) => ClassLabel::E11,
        3 if sig.negatives == 3 => ClassLabel::So3,
        3 if sig.positives == 2 && sig.negatives == 1 => ClassLabel::So21,
        _ => ClassLabel::Other,
    };
    Ok(label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;
    use crate::exact::PuiseuxScalar;
    use crate::lie::tests::so3;

    fn alg(constants: &[(usize, usize, usize, i64)]) -> LieAlgebra {
        LieAlgebra::from_rational(
            &["X", "Y", "Z"],
            constants.iter().map(|&(i, j, k, c)| (i, j, k, int(c))),
        )
        .unwrap()
    }

    // Independent oracle: B(a,b) = sum_{c,d} C_ad^c C_bc^d, straight from the definition.
    fn killing_brute_force(a: &LieAlgebra) -> Matrix {
        let n = a.dim();
        let c = |i, j, k| a.structure_constant(i, j, k).as_constant().unwrap();
        let mut m = Matrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                let mut s = Rational::zero();
                for p in 0..n {
                    for q in 0..n {
                        s += c(x, q, p) * c(y, p, q);
                    }
                }
                m[(x, y)] = s;
            }
        }
        m
    }

    fn e2() -> LieAlgebra {
        // L, A1, A2 with {L,A1}=A2, {A2,L}=A1, {A1,A2}=0
        LieAlgebra::from_rational(&["L", "A1", "A2"], [(0, 1, 2, int(1)), (2, 0, 1, int(1))])
            .unwrap()
    }

    #[test]
    fn killing_examples() {
        let so3 = so3();
        assert_eq!(
            killing_form(&so3).unwrap(),
            Matrix::diagonal(&[int(-2), int(-2), int(-2)])
        );
        assert_eq!(killing_form(&so3).unwrap(), killing_brute_force(&so3));
        assert!(killing_form(&LieAlgebra::abelian(3)).unwrap().is_zero());
        let k = killing_form(&e2()).unwrap();
        assert_eq!(k, killing_brute_force(&e2()));
        assert_eq!(k[(0, 0)], int(-2));
        assert_eq!(k.rank(), 1);
    }

    #[test]
    fn derived_dims() {
        assert_eq!(derived_subalgebra_dim(&LieAlgebra::abelian(3)).unwrap(), 0);
        // h3 in the order M2, S, N1: [M2, S] = N1
        assert_eq!(derived_subalgebra_dim(&alg(&[(0, 1, 2, 1)])).unwrap(), 1);
        assert_eq!(derived_subalgebra_dim(&so3()).unwrap(), 3);
    }

    #[test]
    fn symbolic_algebra_is_rejected() {
        let a = LieAlgebra::new(
            vec!["A".into(), "B".into()],
            [(0, 1, 0, PuiseuxScalar::monomial(int(1), int(1)))],
        )
        .unwrap();
        assert_eq!(derived_subalgebra_dim(&a), Err(LieError::SymbolicAlgebra));
        assert_eq!(killing_form(&a), Err(LieError::SymbolicAlgebra));
    }

    #[test]
    fn classification_table() {
        assert_eq!(classify3(&so3()).unwrap(), ClassLabel::So3);
        // so(2,1): [X,Y] = -Z, [Y,Z] = X, [Z,X] = Y
        let so21 = alg(&[(0, 1, 2, -1), (1, 2, 0, 1), (2, 0, 1, 1)]);
        assert_eq!(classify3(&so21).unwrap(), ClassLabel::So21);
        let k = killing_form(&so21).unwrap();
        assert_eq!(signature(&k).unwrap().to_string(), "(2,1,0)");
        assert_eq!(classify3(&e2()).unwrap(), ClassLabel::E2);
        // e(1,1): [L,P1] = P2, [L,P2] = P1
        assert_eq!(
            classify3(&alg(&[(0, 1, 2, 1), (0, 2, 1, 1)])).unwrap(),
            ClassLabel::E11
        );
        assert_eq!(
            classify3(&alg(&[(0, 1, 2, 1)])).unwrap(),
            ClassLabel::Heisenberg
        );
        assert_eq!(
            classify3(&LieAlgebra::abelian(3)).unwrap(),
            ClassLabel::Abelian3
        );
        // r2 + R: [X,Y] = Y has derived dim 1 and center dim 1 but nonzero Killing form.
        assert_eq!(classify3(&alg(&[(0, 1, 1, 1)])).unwrap(), ClassLabel::Other);
        // [X,Y] = Y, [X,Z] = Z: derived dim 2, rank-1 positive Killing form, not unimodular.
        assert_eq!(
            classify3(&alg(&[(0, 1, 1, 1), (0, 2, 2, 1)])).unwrap(),
            ClassLabel::Other
        );
        assert_eq!(
            classify3(&LieAlgebra::abelian(2)),
            Err(LieError::WrongDimension {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn center_dims() {
        assert_eq!(center_dim(&so3()).unwrap(), 0);
        assert_eq!(center_dim(&alg(&[(0, 1, 2, 1)])).unwrap(), 1);
        assert_eq!(center_dim(&LieAlgebra::abelian(3)).unwrap(), 3);
    }
}
