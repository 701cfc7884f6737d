use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{self, Rational};
use super::ExactError;

/// A finite sum `sum_q c_q * eps^q` with rational exponents.
///
/// Terms are keyed by exponent; zero coefficients are never stored, so two
/// scalars are equal iff their term maps are equal.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PuiseuxScalar {
    terms: BTreeMap<Rational, Rational>,
}

impl PuiseuxScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Rational::zero())
    }

    /// `c * eps^q`
    pub fn monomial(c: Rational, q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(q, c);
        }
        Self { terms }
    }

    /// Builds from arbitrary `(coefficient, exponent)` pairs, merging repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (Rational, Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (c, q) in terms {
            out.add_term(c, q);
        }
        out
    }

    fn add_term(&mut self, c: Rational, q: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(q.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&q);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    pub fn min_exponent(&self) -> Option<&Rational> {
        self.terms.keys().next()
    }

    /// True when the scalar does not depend on eps.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Zero::is_zero)
    }

    /// The eps-free value, if the scalar is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coefficient(&Rational::zero()))
        } else {
            None
        }
    }

    pub fn coefficient(&self, q: &Rational) -> Rational {
        self.terms.get(q).cloned().unwrap_or_else(Rational::zero)
    }

    /// `lim_{eps -> 0+}`: the constant term, provided no exponent is negative.
    pub fn limit_at_zero(&self) -> Result<Rational, ExactError> {
        if let Some(q) = self.min_exponent() {
            if q.is_negative() {
                return Err(ExactError::NegativeExponent {
                    exponent: Box::new(q.clone()),
                });
            }
        }
        Ok(self.coefficient(&Rational::zero()))
    }

    /// Floating-point evaluation; eps must be positive.
    pub fn eval(&self, eps: f64) -> Result<f64, ExactError> {
        if eps.is_nan() || eps <= 0.0 {
            return Err(ExactError::NonPositiveEval(eps));
        }
        Ok(self
            .terms
            .iter()
            .map(|(q, c)| rational::to_f64(c) * eps.powf(rational::to_f64(q)))
            .sum())
    }

    /// Exact substitution `eps = value`.
    pub fn eval_exact(&self, eps: &Rational) -> Result<Rational, ExactError> {
        let mut acc = Rational::zero();
        for (q, c) in &self.terms {
            acc += c * rational::pow_exact(eps, q)?;
        }
        Ok(acc)
    }

    /// Multiplies by `eps^shift`.
    pub fn shift(&self, shift: &Rational) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(q, c)| (q + shift, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(q, c)| (q.clone(), c * k)).collect(),
        }
    }
}

impl From<Rational> for PuiseuxScalar {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl Add for &PuiseuxScalar {
    type Output = PuiseuxScalar;
    fn add(self, rhs: &PuiseuxScalar) -> PuiseuxScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PuiseuxScalar {
    type Output = PuiseuxScalar;
    fn add(mut self, rhs: PuiseuxScalar) -> PuiseuxScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&PuiseuxScalar> for PuiseuxScalar {
    fn add_assign(&mut self, rhs: &PuiseuxScalar) {
        for (q, c) in &rhs.terms {
            self.add_term(c.clone(), q.clone());
        }
    }
}

impl Neg for &PuiseuxScalar {
    type Output = PuiseuxScalar;
    fn neg(self) -> PuiseuxScalar {
        PuiseuxScalar {
            terms: self.terms.iter().map(|(q, c)| (q.clone(), -c)).collect(),
        }
    }
}

impl Neg for PuiseuxScalar {
    type Output = PuiseuxScalar;
    fn neg(self) -> PuiseuxScalar {
        -&self
    }
}

impl Sub for &PuiseuxScalar {
    type Output = PuiseuxScalar;
    fn sub(self, rhs: &PuiseuxScalar) -> PuiseuxScalar {
        self + &(-rhs)
    }
}

impl Mul for &PuiseuxScalar {
    type Output = PuiseuxScalar;
    fn mul(self, rhs: &PuiseuxScalar) -> PuiseuxScalar {
        let mut out = PuiseuxScalar::zero();
        for (qa, ca) in &self.terms {
            for (qb, cb) in &rhs.terms {
                out.add_term(ca * cb, qa + qb);
            }
        }
        out
    }
}

impl Mul for PuiseuxScalar {
    type Output = PuiseuxScalar;
    fn mul(self, rhs: PuiseuxScalar) -> PuiseuxScalar {
        &self * &rhs
    }
}

impl fmt::Display for PuiseuxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (q, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if n == 0 {
                if sign == "-" {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let coef = rational::format(&mag);
            if q.is_zero() {
                f.write_str(&coef)?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{coef}*")?;
            }
            if q.is_one() {
                f.write_str("eps")?;
            } else if q.denom().is_one() && !q.is_negative() {
                write!(f, "eps^{}", q)?;
            } else {
                write!(f, "eps^({})", rational::format(q))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PuiseuxScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PuiseuxScalar({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(with = "rational::serde_str")]
    c: Rational,
    #[serde(with = "rational::serde_str")]
    q: Rational,
}

impl Serialize for PuiseuxScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(q, c)| TermRepr {
                c: c.clone(),
                q: q.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PuiseuxScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        Ok(Self::from_terms(terms.into_iter().map(|t| (t.c, t.q))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{frac, int};
    use proptest::prelude::*;

    fn eps_pow(q: Rational) -> PuiseuxScalar {
        PuiseuxScalar::monomial(int(1), q)
    }

    #[test]
    fn limit_at_zero() {
        assert_eq!(eps_pow(int(2)).limit_at_zero().unwrap(), int(0));
        assert_eq!(
            PuiseuxScalar::constant(int(5)).limit_at_zero().unwrap(),
            int(5)
        );
        assert_eq!(
            eps_pow(frac(-1, 2)).limit_at_zero(),
            Err(ExactError::NegativeExponent {
                exponent: Box::new(frac(-1, 2))
            })
        );
        assert_eq!(PuiseuxScalar::zero().limit_at_zero().unwrap(), int(0));
    }

    #[test]
    fn eval() {
        assert_eq!(eps_pow(int(1)).eval(4.0).unwrap(), 4.0);
        assert_eq!(eps_pow(frac(1, 2)).eval(4.0).unwrap(), 2.0);
        let s = &eps_pow(int(2)) + &PuiseuxScalar::constant(int(3));
        assert_eq!(s.eval(2.0).unwrap(), 7.0);
        assert_eq!(s.eval(0.0), Err(ExactError::NonPositiveEval(0.0)));
        assert!(s.eval(-1.0).is_err());
    }

    #[test]
    fn addition_drops_cancelled_terms() {
        let a = PuiseuxScalar::from_terms([(int(2), int(1)), (int(1), int(0))]);
        let b = PuiseuxScalar::monomial(int(-2), int(1));
        let s = &a + &b;
        assert_eq!(s, PuiseuxScalar::constant(int(1)));
        assert_eq!(s.terms().count(), 1);
        assert!((&a - &a).is_zero());
        assert_eq!(
            PuiseuxScalar::monomial(int(0), int(3)),
            PuiseuxScalar::zero()
        );
    }

    #[test]
    fn product_adds_exponents() {
        let a = PuiseuxScalar::monomial(int(2), frac(1, 2));
        let b = PuiseuxScalar::monomial(int(3), frac(3, 2));
        assert_eq!(&a * &b, PuiseuxScalar::monomial(int(6), int(2)));
    }

    #[test]
    fn exact_substitution() {
        let s = PuiseuxScalar::from_terms([(int(1), int(2)), (int(3), int(0))]);
        assert_eq!(s.eval_exact(&int(2)).unwrap(), int(7));
        assert_eq!(s.eval_exact(&int(0)).unwrap(), int(3));
        assert_eq!(
            eps_pow(frac(1, 2)).eval_exact(&frac(9, 4)).unwrap(),
            frac(3, 2)
        );
        assert!(eps_pow(frac(1, 2)).eval_exact(&int(-1)).is_err());
        assert!(eps_pow(int(-1)).eval_exact(&int(0)).is_err());
    }

    #[test]
    fn display_and_json() {
        let s = PuiseuxScalar::from_terms([(int(1), int(0)), (frac(-1, 2), frac(3, 2))]);
        assert_eq!(s.to_string(), "1 - 1/2*eps^(3/2)");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"[{"c":"1","q":"0"},{"c":"-1/2","q":"3/2"}]"#);
        let back: PuiseuxScalar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    fn arb_scalar() -> impl Strategy<Value = PuiseuxScalar> {
        prop::collection::vec((-5i64..=5, 0i64..=6, 1i64..=3), 0..4).prop_map(|ts| {
            PuiseuxScalar::from_terms(ts.into_iter().map(|(c, p, q)| (int(c), frac(p, q))))
        })
    }

    proptest! {
        #[test]
        fn numeric_limit_converges(s in arb_scalar()) {
            let lim = rational::to_f64(&s.limit_at_zero().unwrap());
            // The slowest nonzero exponent is >= 1/3, so eps^(1/3) bounds the gap.
            let bound: f64 = s.terms().map(|(_, c)| rational::to_f64(c).abs()).sum();
            for k in 1..=6 {
                let eps = 10f64.powi(-k);
                let gap = (s.eval(eps).unwrap() - lim).abs();
                prop_assert!(gap <= bound * eps.powf(1.0 / 3.0) + 1e-12);
            }
        }

        #[test]
        fn rational_inverse_is_exact(p in -1000i64..1000, q in 1i64..1000) {
            prop_assume!(p != 0);
            let a = frac(p, q);
            let b = frac(q, p);
            prop_assert_eq!(&a * &b, int(1));
        }

        #[test]
        fn eval_is_additive(a in arb_scalar(), b in arb_scalar()) {
            let lhs = (&a + &b).eval(0.37).unwrap();
            let rhs = a.eval(0.37).unwrap() + b.eval(0.37).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }
    }
}
