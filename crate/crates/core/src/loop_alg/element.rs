use std::collections::BTreeMap;

use num_traits::Zero;

use super::LoopSpec;
use crate::exact::rational::{self, Rational};

/// Finite linear combination of `h^level X_i`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoopElement {
    terms: BTreeMap<(usize, u32), Rational>,
}

impl LoopElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `h^level X_i`
    pub fn basis(i: usize, level: u32) -> Self {
        Self::term(i, level, rational::int(1))
    }

    pub fn term(i: usize, level: u32, coeff: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(i, level, coeff);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, u32, Rational)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (i, l, c) in terms {
            e.add_term(i, l, c);
        }
        e
    }

    fn add_term(&mut self, i: usize, level: u32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, level)).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&(i, level));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(generator, level, coefficient)` triples.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u32, &Rational)> {
        self.terms.iter().map(|(&(i, l), c)| (i, l, c))
    }

    pub fn coefficient(&self, i: usize, level: u32) -> Rational {
        self.terms
            .get(&(i, level))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, l), c) in &other.terms {
            out.add_term(i, l, c.clone());
        }
        out
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        Self::from_terms(self.terms().map(|(i, l, c)| (i, l, c * k)))
    }

    /// Common grade `g_i + s * level` of all terms; `None` for zero or mixed-grade elements.
    pub fn grade(&self, spec: &LoopSpec) -> Option<u64> {
        let mut grades = self
            .terms
            .keys()
            .map(|&(i, l)| u64::from(spec.grade(i)) + u64::from(spec.s()) * u64::from(l));
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    pub fn is_homogeneous(&self, spec: &LoopSpec) -> bool {
        self.grade(spec).is_some()
    }

    /// Renames generators and shifts levels term by term.
    pub(crate) fn map_terms(&self, f: impl Fn(usize, u32) -> (usize, u32)) -> Self {
        Self::from_terms(self.terms().map(|(i, l, c)| {
            let (j, m) = f(i, l);
            (j, m, c.clone())
        }))
    }
}

/// Bilinear extension of the base brackets: `{h^n X_i, h^m X_j} = sum c h^(n+m+p) X_k`.
pub fn loop_bracket(spec: &LoopSpec, x: &LoopElement, y: &LoopElement) -> LoopElement {
    let mut out = LoopElement::zero();
    for (i, n, a) in x.terms() {
        for (j, m, b) in y.terms() {
            if i == j {
                continue;
            }
            let ab = a * b;
            for t in spec.base_bracket(i, j) {
                out.add_term(t.k, n + m + t.hpow, &ab * &t.coeff);
            }
        }
    }
    out
}
