use std::fmt;

use super::{LoopError, LoopSpec};
use crate::exact::rational::int;
use crate::exact::PuiseuxScalar;
use crate::lie::LieAlgebra;

/// Minimal retained level `m_i` of each tower: the subalgebra spanned by `h^(m_i + n) X_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerSelection(Vec<u32>);

impl TowerSelection {
    pub fn new(levels: Vec<u32>) -> Self {
        Self(levels)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Parses `1,0,1`.
    pub fn parse(s: &str) -> Result<Self, std::num::ParseIntError> {
        s.split(',')
            .map(|t| t.trim().parse())
            .collect::<Result<_, _>>()
            .map(Self)
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    pub(crate) fn check_len(&self, spec: &LoopSpec) -> Result<(), LoopError> {
        if self.0.len() != spec.len() {
            return Err(LoopError::SelectionLength {
                expected: spec.len(),
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for TowerSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The selected towers close under the bracket iff `m_i + m_j + hpow >= m_k`
/// for every nonzero base term.
pub fn check_selection(spec: &LoopSpec, sel: &TowerSelection) -> Result<(), LoopError> {
    sel.check_len(spec)?;
    let m = sel.levels();
    for (i, j, t) in spec.terms() {
        // Both orders of the pair produce the same target k.
        if m[i] + m[j] + t.hpow < m[t.k] {
            return Err(LoopError::NotClosed {
                i,
                j,
                k: t.k,
                gi: spec.name(i).into(),
                gj: spec.name(j).into(),
                gk: spec.name(t.k).into(),
                mi: m[i],
                mj: m[j],
                hpow: t.hpow,
                mk: m[t.k],
            });
        }
    }
    Ok(())
}

/// Structure constants of the factor family without the closure precondition:
/// `C_ij^k = coeff * eps^(m_i + m_j + hpow - m_k)`, where exponents may be negative.
pub fn factor_family(spec: &LoopSpec, sel: &TowerSelection) -> Result<LieAlgebra, LoopError> {
    sel.check_len(spec)?;
    let m = sel.levels();
    let names = (0..spec.len())
        .map(|i| class_name(spec.name(i), m[i]))
        .collect();
    let constants = spec.terms().map(|(i, j, t)| {
        let exponent = i64::from(m[i]) + i64::from(m[j]) + i64::from(t.hpow) - i64::from(m[t.k]);
        (
            i,
            j,
            t.k,
            PuiseuxScalar::monomial(t.coeff.clone(), int(exponent)),
        )
    });
    Ok(LieAlgebra::new(names, constants)?)
}

/// Factor algebra of the selected subalgebra by `(h - eps)`, with classes
/// represented by the minimal-level element of each tower.
pub fn factor_algebra(spec: &LoopSpec, sel: &TowerSelection) -> Result<LieAlgebra, LoopError> {
    check_selection(spec, sel)?;
    factor_family(spec, sel)
}

fn class_name(base: &str, level: u32) -> String {
    match level {
        0 => base.to_string(),
        1 => format!("h*{base}"),
        n => format!("h^{n}*{base}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::exact::rational::Rational;
    use crate::lie::{validate, LieAlgebra};
    use crate::loop_alg::{loop_bracket, LoopElement};

    fn eps(k: i64) -> PuiseuxScalar {
        PuiseuxScalar::monomial(int(1), int(k))
    }

    fn c(alg: &LieAlgebra, a: &str, b: &str, k: &str) -> PuiseuxScalar {
        let idx = |n: &str| alg.index_of(n).unwrap();
        alg.structure_constant(idx(a), idx(b), idx(k))
    }

    #[test]
    fn selection_examples() {
        let h2 = bundled::h2();
        // (A1, A2, L) = (1, 0, 1)
        assert!(check_selection(&h2, &TowerSelection::new(vec![1, 0, 1])).is_ok());
        let err = check_selection(&h2, &TowerSelection::new(vec![0, 0, 2])).unwrap_err();
        assert!(err.to_string().contains("0+0+1 < 2"), "{err}");
        for spec in [bundled::h2(), bundled::l1(), bundled::l2()] {
            assert!(check_selection(&spec, &TowerSelection::zeros(3)).is_ok());
        }
        assert_eq!(
            check_selection(&h2, &TowerSelection::zeros(2)),
            Err(LoopError::SelectionLength {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn h2_factor_algebra() {
        let f = factor_algebra(&bundled::h2(), &TowerSelection::zeros(3)).unwrap();
        assert_eq!(c(&f, "A1", "A2", "L"), eps(1));
        assert_eq!(c(&f, "L", "A1", "A2"), eps(0));
        assert_eq!(c(&f, "A2", "L", "A1"), eps(0));
        assert_eq!(f.nonzero_constants().count(), 3);
    }

    #[test]
    fn l1_factor_algebra() {
        let f = factor_algebra(&bundled::l1(), &TowerSelection::zeros(3)).unwrap();
        assert_eq!(c(&f, "S", "N1", "M2"), eps(2));
        assert_eq!(c(&f, "M2", "S", "N1"), eps(0));
        assert_eq!(c(&f, "N1", "M2", "S"), eps(1));
        assert_eq!(f.nonzero_constants().count(), 3);
    }

    #[test]
    fn l2_factor_algebra() {
        let f = factor_algebra(&bundled::l2(), &TowerSelection::zeros(3)).unwrap();
        assert_eq!(c(&f, "N1", "N2", "S"), eps(2));
        assert_eq!(c(&f, "N2", "S", "N1"), eps(1));
        assert_eq!(c(&f, "S", "N1", "N2"), eps(1));
        assert_eq!(f.nonzero_constants().count(), 3);
    }

    #[test]
    fn class_names_follow_minimal_representative() {
        let f = factor_algebra(&bundled::h2(), &TowerSelection::new(vec![1, 0, 1])).unwrap();
        assert_eq!(f.names(), &["h*A1", "A2", "h*L"]);
    }

    #[test]
    fn l2_is_l1_with_m2_raised() {
        let l1 = bundled::l1();
        let raised = factor_algebra(&l1, &TowerSelection::new(vec![1, 0, 0])).unwrap();
        let l2 = factor_algebra(&bundled::l2(), &TowerSelection::zeros(3)).unwrap();
        // L1 order (M2, S, N1) -> L2 order (N1, N2 = h M2, S)
        let reordered = raised.permuted(&[2, 0, 1]).unwrap();
        assert!(reordered.same_constants(&l2), "{reordered}\n{l2}");
    }

    #[test]
    fn factor_algebras_satisfy_jacobi() {
        for spec in [bundled::h2(), bundled::l1(), bundled::l2()] {
            for a in 0..3 {
                for b in 0..3 {
                    for d in 0..3 {
                        let sel = TowerSelection::new(vec![a, b, d]);
                        let fam = factor_family(&spec, &sel).unwrap();
                        assert!(validate(&fam).is_ok());
                    }
                }
            }
        }
    }

    /// Closure by enumeration: bracket every pair of retained elements inside the
    /// window and check that no term falls below its tower's minimal level.
    fn closed_by_enumeration(spec: &LoopSpec, sel: &TowerSelection, window: u32) -> bool {
        let m = sel.levels();
        for i in 0..spec.len() {
            for j in 0..spec.len() {
                for li in m[i]..=m[i] + window {
                    for lj in m[j]..=m[j] + window {
                        let r = loop_bracket(
                            spec,
                            &LoopElement::basis(i, li),
                            &LoopElement::basis(j, lj),
                        );
                        if r.terms().any(|(k, l, _)| l < m[k]) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn closure_matches_contractibility_exhaustively() {
        let h2 = bundled::h2();
        let zero = Rational::from_integer(0.into());
        let mut agree = 0;
        for n1 in 0..=5 {
            for n2 in 0..=5 {
                for n3 in 0..=5 {
                    let sel = TowerSelection::new(vec![n1, n2, n3]);
                    let fam = factor_family(&h2, &sel).unwrap();
                    let contractible = fam
                        .nonzero_constants()
                        .all(|(_, _, _, c)| c.min_exponent().is_none_or(|q| *q >= zero));
                    let closed = check_selection(&h2, &sel).is_ok();
                    assert_eq!(closed, contractible, "{sel}");
                    assert_eq!(closed, closed_by_enumeration(&h2, &sel, 2), "{sel}");
                    // Closure conditions n3 <= n1+n2+1, n2 <= n3+n1, n1 <= n3+n2.
                    let (a, b, d) = (n1 as i64, n2 as i64, n3 as i64);
                    let expected = d <= a + b + 1 && b <= d + a && a <= d + b;
                    assert_eq!(closed, expected, "{sel}");
                    agree += 1;
                }
            }
        }
        assert_eq!(agree, 216);
    }
}
