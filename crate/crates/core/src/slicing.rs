//! Reformulation of an n-variable polynomial as a one-variable polynomial
//! with multiplication-operator coefficients, and the D-slice ordering.
//!
//! Substituting `z_j ↦ I^{⊗(n-j)} ⊗ B*^{⊗j}` in a power series on 𝔻ⁿ turns the
//! degree-k homogeneous part into `A_k ⊗ B*^{⊗k}`, where `A_k` is unitarily
//! equivalent to multiplication by a polynomial `p_k` in n−1 variables. The
//! index `i` contributes the monomial `z_{n-i+1} ⋯ z_{n-1}`, so a sorted
//! tuple `i_1 ≤ … ≤ i_k` gives an exponent vector `α` with
//!
//! ```text
//! α_t = #{ p : i_p ≥ n + 1 − t },   t = 1, …, n−1,
//! ```
//!
//! which is non-decreasing in `t` and bounded by `k`. Reading the tuple as the
//! multi-index `β` with `β_j = #{p : i_p = j}`, the coefficient of `z^α` in
//! `p_k` is the ordinary monomial coefficient of `z^β` in `p` (the sum over
//! ordered tuples contributes the multinomial count times the symmetric
//! coefficient). The map `β ↦ α` is injective on each degree, which is what
//! makes [`inverse_reformulate`] possible.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{MultiIndex, NPoly, TrigPoly};

/// Exponent of `∏_p z_{n-i_p+1} ⋯ z_{n-1}` for an index tuple with entries
/// in `1..=n`. The result has length `n − 1`.
pub fn monomial_image(tuple: &[usize], n: usize) -> Result<MultiIndex> {
    if let Some(&bad) = tuple.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::IndexOutOfRange { index: bad, n });
    }
    let m = n.saturating_sub(1);
    let alpha = (1..=m)
        .map(|t| tuple.iter().filter(|&&i| i > n - t).count() as i32)
        .collect();
    Ok(MultiIndex::new(alpha))
}

/// Exponent in `p_k` of the monomial `z^β` of `p` (`β` of length `n`).
fn image_of_exponent(beta: &MultiIndex) -> MultiIndex {
    let b = beta.entries();
    let n = b.len();
    let m = n.saturating_sub(1);
    // α[t] = β[n-1-t] + … + β[n-1]
    let mut alpha = Vec::with_capacity(m);
    let mut acc = 0;
    for t in 0..m {
        acc += b[n - 1 - t];
        alpha.push(acc);
    }
    MultiIndex::new(alpha)
}

/// Inverse of [`image_of_exponent`] on degree `k`, if `alpha` is an image.
fn preimage_of_exponent(alpha: &MultiIndex, k: usize) -> Option<MultiIndex> {
    if !in_tuple_image(alpha, k) {
        return None;
    }
    let a = alpha.entries();
    let m = a.len();
    let n = m + 1;
    let mut beta = vec![0i32; n];
    for j in 1..n {
        let hi = a[n - 1 - j];
        let lo = if j + 1 < n { a[n - 2 - j] } else { 0 };
        beta[j] = hi - lo;
    }
    beta[0] = k as i32 - a.last().copied().unwrap_or(0);
    Some(MultiIndex::new(beta))
}

fn non_decreasing(alpha: &MultiIndex) -> bool {
    alpha.entries().windows(2).all(|w| w[0] <= w[1])
}

/// Membership in the admissible monomial space for the k-th symbol:
/// `0 ≤ α_1 ≤ ⋯ ≤ α_{n-1}` and `Σα ≤ (n−1)k`.
pub fn in_admissible_space(alpha: &MultiIndex, k: usize) -> bool {
    alpha.is_nonnegative()
        && non_decreasing(alpha)
        && alpha.total() <= (alpha.len() * k) as i64
}

/// Whether `alpha` is `monomial_image` of some tuple of length `k`:
/// non-negative, non-decreasing and `α_{n-1} ≤ k`.
///
/// This set is contained in [`in_admissible_space`]; the two agree for
/// n ≤ 2 and differ from n = 3 on (e.g. `(0, 2)` for k = 1).
pub fn in_tuple_image(alpha: &MultiIndex, k: usize) -> bool {
    alpha.is_nonnegative()
        && non_decreasing(alpha)
        && alpha.entries().last().map_or(true, |&l| l as usize <= k)
}

/// The symbols `p_1, …, p_d` of an n-variable polynomial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolFamily {
    n: usize,
    symbols: Vec<TrigPoly>,
}

/// A stored exponent on which the two membership predicates disagree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipFlag {
    pub k: usize,
    pub exponent: MultiIndex,
}

impl SymbolFamily {
    /// `symbols[k-1]` is `p_k`; each must be a polynomial in `n − 1`
    /// variables lying in the admissible space for its `k`.
    pub fn new(n: usize, symbols: Vec<TrigPoly>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("ambient variable count must be at least 1".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            let k = i + 1;
            if s.nvars() != n - 1 {
                return Err(Error::DimensionMismatch {
                    expected: n - 1,
                    found: s.nvars(),
                });
            }
            for (alpha, _) in s.terms() {
                if !alpha.is_nonnegative() {
                    return Err(Error::NegativeExponent(alpha.clone()));
                }
                if !in_admissible_space(alpha, k) {
                    return Err(Error::Precondition(format!(
                        "exponent {alpha} of p_{k} is outside the admissible monomial space"
                    )));
                }
            }
        }
        Ok(SymbolFamily { n, symbols })
    }

    pub fn zero(n: usize, d: usize) -> Self {
        SymbolFamily {
            n,
            symbols: vec![TrigPoly::zero(n.saturating_sub(1)); d],
        }
    }

    /// Ambient variable count of the polynomial this family came from.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[TrigPoly] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<TrigPoly> {
        self.symbols
    }

    /// `p_k`, 1-based.
    pub fn symbol(&self, k: usize) -> &TrigPoly {
        &self.symbols[k - 1]
    }

    /// Exponents admitted by the inequality chain but not produced by any
    /// index tuple.
    pub fn membership_flags(&self) -> Vec<MembershipFlag> {
        let mut out = Vec::new();
        for (i, s) in self.symbols.iter().enumerate() {
            let k = i + 1;
            for (alpha, _) in s.terms() {
                if in_admissible_space(alpha, k) != in_tuple_image(alpha, k) {
                    out.push(MembershipFlag {
                        k,
                        exponent: alpha.clone(),
                    });
                }
            }
        }
        out
    }
}

/// Maps `p` (with `p(0) = 0`, degree `d`) to its symbols `p_1, …, p_d`.
pub fn reformulate(p: &NPoly) -> Result<SymbolFamily> {
    let c0 = p.constant_term();
    if c0 != Complex64::new(0.0, 0.0) {
        return Err(Error::NonzeroConstant(c0));
    }
    let n = p.nvars();
    if n == 0 {
        return Err(Error::Precondition("polynomial has no variables".into()));
    }
    let d = p.degree();
    let mut buckets: Vec<Vec<(MultiIndex, Complex64)>> = vec![Vec::new(); d];
    for (beta, c) in p.terms() {
        let k = beta.total() as usize;
        buckets[k - 1].push((image_of_exponent(beta), *c));
    }
    let symbols = buckets
        .into_iter()
        .map(|terms| TrigPoly::from_terms(n - 1, terms))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolFamily { n, symbols })
}

/// The polynomial whose symbol family is `fam`.
pub fn inverse_reformulate(fam: &SymbolFamily) -> Result<NPoly> {
    let n = fam.n;
    let mut terms = Vec::new();
    for (i, s) in fam.symbols.iter().enumerate() {
        let k = i + 1;
        for (alpha, c) in s.terms() {
            let beta = preimage_of_exponent(alpha, k).ok_or_else(|| Error::NotInImage {
                k,
                exponent: alpha.clone(),
            })?;
            terms.push((beta, *c));
        }
    }
    NPoly::from_terms(n, terms)
}

/// A lattice point tagged with its level; `Ord` is the D-slice order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DSliceKey {
    // field order matters for the derived Ord: level first, then lexicographic
    pub level: i64,
    pub point: MultiIndex,
}

impl DSliceKey {
    pub fn new(point: MultiIndex) -> Self {
        DSliceKey {
            level: point.total(),
            point,
        }
    }
}

/// Compares two points of ℤⁿ in the D-slice order: by level Σx first, then
/// lexicographically within a level.
pub fn dslice_compare(x: &MultiIndex, y: &MultiIndex) -> Result<Ordering> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(x.total().cmp(&y.total()).then_with(|| x.cmp(y)))
}

/// The slice `φ_j(λ) = Σ_{m_1+⋯+m_n = j} a_m λ_1^{m_2} ⋯ λ_{n-1}^{m_n}`, so
/// that `φ(z, λ_1 z, …, λ_{n-1} z) = Σ_j φ_j(λ) z^j`.
pub fn slice_decompose(phi: &TrigPoly, j: i64) -> TrigPoly {
    let m = phi.nvars().saturating_sub(1);
    let terms = phi
        .terms()
        .filter(|(a, _)| a.total() == j)
        .map(|(a, c)| (MultiIndex::new(a.entries()[1..].to_vec()), *c));
    TrigPoly::from_terms(m, terms).expect("slice exponents have n-1 entries")
}

/// All nonzero slices of `phi`, keyed by level.
pub fn slices(phi: &TrigPoly) -> BTreeMap<i64, TrigPoly> {
    let m = phi.nvars().saturating_sub(1);
    let mut grouped: BTreeMap<i64, Vec<(MultiIndex, Complex64)>> = BTreeMap::new();
    for (a, c) in phi.terms() {
        grouped
            .entry(a.total())
            .or_default()
            .push((MultiIndex::new(a.entries()[1..].to_vec()), *c));
    }
    grouped
        .into_iter()
        .map(|(j, t)| (j, TrigPoly::from_terms(m, t).expect("slice exponents have n-1 entries")))
        .filter(|(_, s)| !s.is_zero())
        .collect()
}
