use super::{default_names, LieAlgebra, LieError};
use crate::exact::{Matrix, PuiseuxScalar};

/// Structure constants of the span of `mats` under the matrix commutator.
pub fn algebra_from_matrices(mats: &[Matrix]) -> Result<LieAlgebra, LieError> {
    let Some(first) = mats.first() else {
        return Ok(LieAlgebra::abelian(0));
    };
    let size = first.rows();
    if mats.iter().any(|m| !m.is_square() || m.rows() != size) {
        return Err(LieError::MatrixShape);
    }
    // Columns are the flattened inputs.
    let mut basis = Matrix::zeros(size * size, mats.len());
    for (c, m) in mats.iter().enumerate() {
        for (r, x) in m.entries().iter().enumerate() {
            basis[(r, c)] = x.clone();
        }
    }
    if basis.rank() < mats.len() {
        return Err(LieError::LinearlyDependent);
    }
    let mut constants = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            let comm = mats[i].commutator(&mats[j]);
            let coeffs = basis
                .solve(comm.entries())
                .ok_or(LieError::NotClosed { i, j })?;
            for (k, c) in coeffs.into_iter().enumerate() {
                constants.push((i, j, k, PuiseuxScalar::constant(c)));
            }
        }
    }
    LieAlgebra::new(default_names(mats.len()), constants)
}

/// Elementary matrix `e_ij` (zero-based) of the given size.
pub fn elementary(size: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(size, size);
    m[(i, j)] = crate::exact::rational::int(1);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::int;

    #[test]
    fn single_rotation_is_abelian() {
        let r = elementary(3, 0, 1).sub(&elementary(3, 1, 0));
        let a = algebra_from_matrices(&[r]).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.is_abelian());
    }

    #[test]
    fn sl2_constants() {
        // E = e12, F = e21, H = e11 - e22
        let e = elementary(2, 0, 1);
        let f = elementary(2, 1, 0);
        let h = elementary(2, 0, 0).sub(&elementary(2, 1, 1));
        let a = algebra_from_matrices(&[e, f, h]).unwrap();
        let c = |i, j, k| a.structure_constant(i, j, k).as_constant().unwrap();
        // [E,F] = H, [H,E] = 2E, [H,F] = -2F
        assert_eq!(c(0, 1, 2), int(1));
        assert_eq!(c(2, 0, 0), int(2));
        assert_eq!(c(2, 1, 1), int(-2));
        assert_eq!(a.nonzero_constants().count(), 3);
    }

    #[test]
    fn failures() {
        let e = elementary(2, 0, 1);
        let f = elementary(2, 1, 0);
        assert_eq!(
            algebra_from_matrices(&[e.clone(), f]),
            Err(LieError::NotClosed { i: 0, j: 1 })
        );
        assert_eq!(
            algebra_from_matrices(&[e.clone(), e.scaled(&int(2))]),
            Err(LieError::LinearlyDependent)
        );
        assert_eq!(
            algebra_from_matrices(&[e, elementary(3, 0, 1)]),
            Err(LieError::MatrixShape)
        );
    }
}
