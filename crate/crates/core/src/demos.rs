//! Table of energy-branch classifications, the Lorentz-to-Euclidean
//! contraction, and the two limit paths ending at zero energy and zero breaking.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bundled;
use crate::exact::rational::{format as fmt_rational, frac, int};
use crate::exact::{PuiseuxScalar, Rational};
use crate::format::{algebra_to_file, AlgebraFile};
use crate::lie::{
    algebra_from_matrices, classify3, contract, elementary, is_classic_iw, ClassLabel,
    ContractionWeights, LieAlgebra, LieError,
};
use crate::loop_alg::{factor_algebra, LoopError, LoopSpec, TowerSelection};

#[derive(Debug, Error)]
pub enum DemoError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

/// Energy branches as values of `eps = -2mE`.
pub const TABLE_EPS: [i64; 3] = [1, 0, -1];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1Row {
    pub spec: &'static str,
    pub labels: [ClassLabel; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table1 {
    pub eps: [i64; 3],
    pub rows: Vec<Table1Row>,
}

impl Table1 {
    pub const EXPECTED: [(&'static str, [ClassLabel; 3]); 3] = [
        ("h2", [ClassLabel::So3, ClassLabel::E2, ClassLabel::So21]),
        (
            "l1",
            [ClassLabel::So3, ClassLabel::Heisenberg, ClassLabel::So21],
        ),
        (
            "l2",
            [ClassLabel::So3, ClassLabel::Abelian3, ClassLabel::So21],
        ),
    ];

    pub fn matches_expected(&self) -> bool {
        self.rows.len() == 3
            && self
                .rows
                .iter()
                .zip(Self::EXPECTED)
                .all(|(r, (s, l))| r.spec == s && r.labels == l)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<6}{:<12}{:<12}{:<12}\n",
            "spec", "eps=+1", "eps=0", "eps=-1"
        );
        for r in &self.rows {
            out += &format!(
                "{:<6}{:<12}{:<12}{:<12}\n",
                r.spec,
                r.labels[0].as_str(),
                r.labels[1].as_str(),
                r.labels[2].as_str()
            );
        }
        out
    }
}

pub fn classify_at(alg: &LieAlgebra, eps: &Rational) -> Result<ClassLabel, LieError> {
    classify3(&alg.evaluate_at(eps)?)
}

fn bottom_factor(spec: &LoopSpec) -> Result<LieAlgebra, LoopError> {
    factor_algebra(spec, &TowerSelection::zeros(spec.len()))
}

pub fn demo_table1() -> Result<Table1, DemoError> {
    let specs = [
        ("h2", bundled::h2_static()),
        ("l1", bundled::l1_static()),
        ("l2", bundled::l2_static()),
    ];
    let mut rows = Vec::new();
    for (name, spec) in specs {
        let alg = bottom_factor(spec)?;
        let mut labels = [ClassLabel::Other; 3];
        for (slot, e) in labels.iter_mut().zip(TABLE_EPS) {
            *slot = classify_at(&alg, &int(e))?;
        }
        rows.push(Table1Row { spec: name, labels });
    }
    Ok(Table1 {
        eps: TABLE_EPS,
        rows,
    })
}

pub const LORENTZ_NAMES: [&str; 6] = ["L12", "L13", "L23", "B1", "B2", "B3"];
const ROTATION_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// `so(3,1)` from 4x4 matrices: `L_ij = e_ij - e_ji`, `B_i = e_i4 + e_4i`.
pub fn lorentz_algebra() -> Result<LieAlgebra, LieError> {
    let mut mats = Vec::new();
    for (i, j) in ROTATION_PAIRS {
        mats.push(elementary(4, i, j).sub(&elementary(4, j, i)));
    }
    for i in 0..3 {
        mats.push(elementary(4, i, 3).add(&elementary(4, 3, i)));
    }
    algebra_from_matrices(&mats)?.with_names(LORENTZ_NAMES.iter().map(|s| s.to_string()).collect())
}

/// Rotations `L_ij` act on translations `B_k` as a vector, translations commute.
pub fn euclidean3() -> Result<LieAlgebra, LieError> {
    let delta = |a: usize, b: usize| if a == b { 1 } else { 0 };
    // (sign, index) of L_ab, with L_ba = -L_ab and L_aa = 0
    let rot = |a: usize, b: usize| -> Option<(i64, usize)> {
        ROTATION_PAIRS
            .iter()
            .position(|&p| p == (a, b))
            .map(|k| (1, k))
            .or_else(|| {
                ROTATION_PAIRS
                    .iter()
                    .position(|&p| p == (b, a))
                    .map(|k| (-1, k))
            })
    };
    let mut constants: Vec<(usize, usize, usize, PuiseuxScalar)> = Vec::new();
    let mut push = |x: usize, y: usize, k: usize, c: i64| {
        if c != 0 {
            constants.push((x, y, k, PuiseuxScalar::constant(int(c))));
        }
    };
    for (x, &(i, j)) in ROTATION_PAIRS.iter().enumerate() {
        for (y, &(s, t)) in ROTATION_PAIRS.iter().enumerate().skip(x + 1) {
            // [L_ij, L_st] = d_js L_it + d_it L_js - d_is L_jt - d_jt L_is
            for (d, (a, b)) in [
                (delta(j, s), (i, t)),
                (delta(i, t), (j, s)),
                (-delta(i, s), (j, t)),
                (-delta(j, t), (i, s)),
            ] {
                if let Some((sign, k)) = rot(a, b) {
                    push(x, y, k, d * sign);
                }
            }
        }
        for k in 0..3 {
            // [L_ij, B_k] = d_jk B_i - d_ik B_j
            push(x, 3 + k, 3 + i, delta(j, k));
            push(x, 3 + k, 3 + j, -delta(i, k));
        }
    }
    let mut merged: std::collections::BTreeMap<(usize, usize, usize), PuiseuxScalar> =
        std::collections::BTreeMap::new();
    for (x, y, k, c) in constants {
        *merged.entry((x, y, k)).or_insert_with(PuiseuxScalar::zero) += &c;
    }
    LieAlgebra::new(
        LORENTZ_NAMES.iter().map(|s| s.to_string()).collect(),
        merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((x, y, k), c)| (x, y, k, c)),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct LorentzReport {
    pub weights: String,
    pub contracted: AlgebraFile,
    pub matches_e3: bool,
    pub boosts_commute: bool,
    pub is_classic_iw: bool,
    pub unweighted_is_identity: bool,
    pub rotation_weight_undefined: bool,
    pub weight_zero_span_closed: bool,
    pub positive_span_abelian_ideal: bool,
    pub pass: bool,
}

fn weight_zero_closed(alg: &LieAlgebra, w: &ContractionWeights) -> bool {
    let zero = |a: usize| w.as_slice()[a].is_zero();
    alg.nonzero_constants()
        .all(|(a, b, c, _)| !(zero(a) && zero(b)) || zero(c))
}

fn positive_abelian_ideal(alg: &LieAlgebra, w: &ContractionWeights) -> bool {
    let pos = |a: usize| !w.as_slice()[a].is_zero();
    alg.nonzero_constants()
        .all(|(a, b, c, _)| !(pos(a) && pos(b)) && (!(pos(a) || pos(b)) || pos(c)))
}

pub fn demo_lorentz() -> Result<LorentzReport, DemoError> {
    let so31 = lorentz_algebra()?;
    let w = ContractionWeights::from_i64(&[0, 0, 0, 1, 1, 1]);
    let contracted = contract(&so31, &w)?;
    let e3 = euclidean3()?;
    let boosts_commute = (3..6)
        .all(|i| (3..6).all(|j| (0..6).all(|k| contracted.structure_constant(i, j, k).is_zero())));
    let unweighted_is_identity =
        contract(&so31, &ContractionWeights::zeros(6))?.same_constants(&so31);
    let rotation_weight_undefined = matches!(
        contract(&so31, &ContractionWeights::from_i64(&[1, 0, 0, 0, 0, 0])),
        Err(LieError::ContractionUndefined { .. })
    );
    let matches_e3 = contracted == e3;
    let classic = is_classic_iw(&w);
    let closed = weight_zero_closed(&so31, &w);
    let ideal = positive_abelian_ideal(&contracted, &w);
    Ok(LorentzReport {
        weights: w.to_string(),
        contracted: algebra_to_file(&contracted),
        pass: matches_e3
            && boosts_commute
            && classic
            && unweighted_is_identity
            && rotation_weight_undefined
            && closed
            && ideal,
        matches_e3,
        boosts_commute,
        is_classic_iw: classic,
        unweighted_is_identity,
        rotation_weight_undefined,
        weight_zero_span_closed: closed,
        positive_span_abelian_ideal: ideal,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathPoint {
    pub eps: String,
    pub beta: String,
    pub family: &'static str,
    pub label: ClassLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HysteresisReport {
    /// `beta -> 0` at `eps = 1`, then `eps -> 0` at `beta = 0`.
    pub path_a: Vec<PathPoint>,
    /// `eps -> 0` at `beta = 1/2`, then `beta -> 0` at `eps = 0`.
    pub path_b: Vec<PathPoint>,
    pub origin_a: ClassLabel,
    pub origin_b: ClassLabel,
    pub start_a: ClassLabel,
    pub start_b: ClassLabel,
    pub labels_differ: bool,
}

/// `1, 1/2, 1/4, ..., 1/2^(steps-1), 0` scaled by `top`.
fn halving(top: &Rational, steps: u32) -> Vec<Rational> {
    let mut out: Vec<Rational> = (0..steps).map(|k| top * frac(1, 1 << k)).collect();
    out.push(Rational::zero());
    out
}

pub fn demo_hysteresis() -> Result<HysteresisReport, DemoError> {
    // The unbroken problem is realized by h2, the broken one by l1;
    // the factor constants of either do not depend on beta.
    let h2 = bottom_factor(bundled::h2_static())?;
    let l1 = bottom_factor(bundled::l1_static())?;
    let family = |beta: &Rational| {
        if beta.is_zero() {
            ("h2", &h2)
        } else {
            ("l1", &l1)
        }
    };
    let point = |eps: &Rational, beta: &Rational| -> Result<PathPoint, DemoError> {
        let (name, alg) = family(beta);
        Ok(PathPoint {
            eps: fmt_rational(eps),
            beta: fmt_rational(beta),
            family: name,
            label: classify_at(alg, eps)?,
        })
    };
    let beta0 = frac(1, 2);
    let one = Rational::one();
    let zero = Rational::zero();

    let mut path_a = Vec::new();
    for b in halving(&beta0, 6) {
        path_a.push(point(&one, &b)?);
    }
    for e in halving(&one, 6).into_iter().skip(1) {
        path_a.push(point(&e, &zero)?);
    }
    let mut path_b = Vec::new();
    for e in halving(&one, 6) {
        path_b.push(point(&e, &beta0)?);
    }
    for b in halving(&beta0, 6).into_iter().skip(1) {
        path_b.push(point(&zero, &b)?);
    }
    // At the origin itself the path decides the family: B never leaves the broken one.
    let origin_b_point = path_b.last_mut().expect("nonempty");
    origin_b_point.family = "l1";
    origin_b_point.label = classify_at(&l1, &zero)?;

    let origin_a = path_a.last().expect("nonempty").label;
    let origin_b = path_b.last().expect("nonempty").label;
    Ok(HysteresisReport {
        start_a: path_a[0].label,
        start_b: path_b[0].label,
        origin_a,
        origin_b,
        labels_differ: origin_a != origin_b,
        path_a,
        path_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::validate;

    #[test]
    fn table_matches() {
        let t = demo_table1().unwrap();
        assert!(t.matches_expected(), "{t:?}");
        assert_eq!(t.to_table(), demo_table1().unwrap().to_table());
        assert!(t.to_table().contains("l1    so3         heisenberg  so21"));
    }

    #[test]
    fn any_eps_in_a_sign_branch_agrees() {
        for spec in [
            bundled::h2_static(),
            bundled::l1_static(),
            bundled::l2_static(),
        ] {
            let alg = bottom_factor(spec).unwrap();
            for (a, b) in [(1, 37), (-1, -5)] {
                assert_eq!(
                    classify_at(&alg, &int(a)).unwrap(),
                    classify_at(&alg, &frac(b, 3)).unwrap()
                );
            }
        }
    }

    #[test]
    fn lorentz_from_matrices_is_so31() {
        let so31 = lorentz_algebra().unwrap();
        validate(&so31).unwrap();
        let c = |a: &str, b: &str, k: &str| {
            so31.structure_constant(
                so31.index_of(a).unwrap(),
                so31.index_of(b).unwrap(),
                so31.index_of(k).unwrap(),
            )
        };
        // [B1, B2] = L12: boosts close on a rotation.
        assert_eq!(c("B1", "B2", "L12"), PuiseuxScalar::constant(int(1)));
        assert_eq!(c("L12", "B2", "B1"), PuiseuxScalar::constant(int(1)));
        assert_eq!(c("L12", "B1", "B2"), PuiseuxScalar::constant(int(-1)));
    }

    #[test]
    fn euclidean_table_is_a_lie_algebra_with_commuting_translations() {
        let e3 = euclidean3().unwrap();
        validate(&e3).unwrap();
        assert_eq!(e3.nonzero_constants().count(), 3 + 6);
        for i in 3..6 {
            for j in 3..6 {
                assert!(e3.bracket_basis(i, j).iter().all(|c| c.is_zero()));
            }
        }
    }

    #[test]
    fn lorentz_demo_passes() {
        let r = demo_lorentz().unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.matches_e3 && r.is_classic_iw && r.boosts_commute);
    }

    #[test]
    fn wrong_weights_break_structure_checks() {
        let so31 = lorentz_algebra().unwrap();
        let rot = ContractionWeights::from_i64(&[1, 1, 1, 0, 0, 0]);
        // boosts alone do not close
        assert!(!weight_zero_closed(&so31, &rot));
    }

    #[test]
    fn hysteresis_origins_differ() {
        let r = demo_hysteresis().unwrap();
        assert_eq!(r.origin_a, ClassLabel::E2);
        assert_eq!(r.origin_b, ClassLabel::Heisenberg);
        assert_eq!((r.start_a, r.start_b), (ClassLabel::So3, ClassLabel::So3));
        assert!(r.labels_differ);
        let tail: Vec<_> = r
            .path_b
            .iter()
            .filter(|p| p.eps == "0")
            .map(|p| p.label)
            .collect();
        assert!(tail.iter().all(|&l| l == ClassLabel::Heisenberg));
        assert!(r
            .path_a
            .iter()
            .filter(|p| p.eps != "0")
            .all(|p| p.label == ClassLabel::So3));
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            serde_json::to_string(&demo_hysteresis().unwrap()).unwrap()
        );
    }
}
