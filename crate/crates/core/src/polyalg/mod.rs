//! Multivariate polynomials and trigonometric (Laurent) polynomials.
//!
//! [`TrigPoly`] stores a finite map from exponents in ℤⁿ to complex
//! coefficients; [`NPoly`] is the same storage restricted to exponents in ℕ₀ⁿ.
//! Zero coefficients are never stored, so two polynomials are equal exactly
//! when their term maps are equal.
//!
//! A `TrigPoly` with `nvars == 0` is a complex scalar. The one-variable
//! polydisc problems use such scalars as their operator symbols.
//!
//! Evaluation on the torus grid, the supremum-norm sweep and coefficient
//! recovery live in [`grid`].

mod grid;
mod json;

pub use grid::{grid_max, recover_coeffs, sup_norm, GridMax, GridSamples, TorusGrid};
pub use json::PolyJson;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent vector. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<i32>);

impl MultiIndex {
    pub fn new(entries: Vec<i32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector e_j (0-based `j`).
    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    /// Sum of the entries (the D-slice level).
    pub fn total(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    pub fn max_abs(&self) -> usize {
        self.0.iter().map(|e| e.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn negated(&self) -> Self {
        MultiIndex(self.0.iter().map(|e| -e).collect())
    }

    pub fn plus(&self, other: &MultiIndex) -> Self {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn minus(&self, other: &MultiIndex) -> Self {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Componentwise `self <= other`.
    pub fn le_componentwise(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl From<Vec<i32>> for MultiIndex {
    fn from(v: Vec<i32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[i32; N]> for MultiIndex {
    fn from(v: [i32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// A trigonometric polynomial Σ c_α z^α with α ∈ ℤⁿ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct TrigPoly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl TrigPoly {
    pub fn zero(nvars: usize) -> Self {
        TrigPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = TrigPoly::zero(nvars);
        p.add_term(MultiIndex::zeros(nvars), c);
        p
    }

    pub fn monomial(alpha: impl Into<MultiIndex>, c: Complex64) -> Self {
        let alpha = alpha.into();
        let mut p = TrigPoly::zero(alpha.len());
        p.add_term(alpha, c);
        p
    }

    /// Builds a polynomial from (exponent, coefficient) pairs. Repeated
    /// exponents are summed.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = TrigPoly::zero(nvars);
        for (alpha, c) in terms {
            if alpha.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: alpha.len(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, alpha: MultiIndex, c: Complex64) {
        debug_assert_eq!(alpha.len(), self.nvars);
        let zero = Complex64::new(0.0, 0.0);
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                if c != zero {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == zero {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms
            .get(alpha)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Largest |entry| over all stored exponents.
    pub fn bandwidth(&self) -> usize {
        self.terms.keys().map(MultiIndex::max_abs).max().unwrap_or(0)
    }

    /// Largest total degree Σα over stored exponents (0 for the zero polynomial).
    pub fn max_total_degree(&self) -> i64 {
        self.terms.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    pub fn min_total_degree(&self) -> i64 {
        self.terms.keys().map(MultiIndex::total).min().unwrap_or(0)
    }

    pub fn is_analytic(&self) -> bool {
        self.terms.keys().all(MultiIndex::is_nonnegative)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Evaluates by direct summation.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: z.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (alpha, c) in &self.terms {
            let mut term = *c;
            for (i, (&e, &zi)) in alpha.entries().iter().zip(z).enumerate() {
                if e == 0 {
                    continue;
                }
                if e < 0 && zi == Complex64::new(0.0, 0.0) {
                    return Err(Error::ZeroCoordinate { index: i });
                }
                term *= zi.powi(e);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// The symbol whose value at every torus point is the conjugate of this
    /// one: c_α ↦ conj(c_α) at exponent −α.
    pub fn conj_reflect(&self) -> Self {
        TrigPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.negated(), c.conj()))
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == Complex64::new(0.0, 0.0) {
            return TrigPoly::zero(self.nvars);
        }
        let mut out = TrigPoly::zero(self.nvars);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * s);
        }
        out
    }

    /// Multiplies by the monomial z^shift.
    pub fn shift(&self, shift: &MultiIndex) -> Result<Self> {
        self.check_same(shift.len())?;
        Ok(TrigPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.plus(shift), *c))
                .collect(),
        })
    }

    /// Drops coefficients with modulus ≤ `rel` × the largest modulus.
    pub fn pruned(&self, rel: f64) -> Self {
        let cut = rel * self.max_abs_coeff();
        TrigPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() > cut)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    fn check_same(&self, other: usize) -> Result<()> {
        if self.nvars != other {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &TrigPoly) -> Result<Self> {
        self.check_same(other.nvars)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), *c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TrigPoly) -> Result<Self> {
        self.check_same(other.nvars)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &TrigPoly) -> Result<Self> {
        self.check_same(other.nvars)?;
        let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                *acc.entry(a.plus(b)).or_insert(Complex64::new(0.0, 0.0)) += c * d;
            }
        }
        acc.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(TrigPoly {
            nvars: self.nvars,
            terms: acc,
        })
    }
}

// Operator forms panic on mismatched variable counts; use the `try_*`
// methods when the inputs are not known to agree.
impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        self.try_add(rhs).expect("TrigPoly + TrigPoly with different nvars")
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self.try_sub(rhs).expect("TrigPoly - TrigPoly with different nvars")
    }
}

impl Mul for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        self.try_mul(rhs).expect("TrigPoly * TrigPoly with different nvars")
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// A polynomial Σ a_α z^α with α ∈ ℕ₀ⁿ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct NPoly(TrigPoly);

impl NPoly {
    pub fn zero(nvars: usize) -> Self {
        NPoly(TrigPoly::zero(nvars))
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        NPoly::from_trig(TrigPoly::from_terms(nvars, terms)?)
    }

    /// Fails with [`Error::NegativeExponent`] if any exponent is negative.
    pub fn from_trig(p: TrigPoly) -> Result<Self> {
        if let Some(bad) = p.terms.keys().find(|a| !a.is_nonnegative()) {
            return Err(Error::NegativeExponent(bad.clone()));
        }
        Ok(NPoly(p))
    }

    pub fn as_trig(&self) -> &TrigPoly {
        &self.0
    }

    pub fn into_trig(self) -> TrigPoly {
        self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.0.terms()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.0.coeff(alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// max |α| over stored exponents, 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.0.max_total_degree() as usize
    }

    pub fn constant_term(&self) -> Complex64 {
        self.0.coeff(&MultiIndex::zeros(self.nvars()))
    }

    /// Terms of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: usize) -> NPoly {
        NPoly(TrigPoly {
            nvars: self.nvars(),
            terms: self
                .0
                .terms
                .iter()
                .filter(|(a, _)| a.total() == k as i64)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        })
    }

    /// Terms of total degree at most `k`.
    pub fn truncated(&self, k: usize) -> NPoly {
        NPoly(TrigPoly {
            nvars: self.nvars(),
            terms: self
                .0
                .terms
                .iter()
                .filter(|(a, _)| a.total() <= k as i64)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        })
    }

    /// Evaluates anywhere in ℂⁿ.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        self.0.eval(z)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        NPoly(self.0.scale(s))
    }

    pub fn try_add(&self, other: &NPoly) -> Result<Self> {
        Ok(NPoly(self.0.try_add(&other.0)?))
    }

    pub fn try_sub(&self, other: &NPoly) -> Result<Self> {
        Ok(NPoly(self.0.try_sub(&other.0)?))
    }

    pub fn try_mul(&self, other: &NPoly) -> Result<Self> {
        Ok(NPoly(self.0.try_mul(&other.0)?))
    }
}

impl Add for &NPoly {
    type Output = NPoly;
    fn add(self, rhs: &NPoly) -> NPoly {
        NPoly(&self.0 + &rhs.0)
    }
}

impl Sub for &NPoly {
    type Output = NPoly;
    fn sub(self, rhs: &NPoly) -> NPoly {
        NPoly(&self.0 - &rhs.0)
    }
}

impl Mul for &NPoly {
    type Output = NPoly;
    fn mul(self, rhs: &NPoly) -> NPoly {
        NPoly(&self.0 * &rhs.0)
    }
}
