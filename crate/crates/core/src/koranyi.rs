//! Positivity certificates for maps into the right half-plane.
//!
//! A holomorphic `f = 2(1/2 + Σ_{α≠0} c_α z^α)` on 𝔻ⁿ has non-negative real
//! part exactly when the kernel `K(α) = c_α` (α ≥ 0, α ≠ 0), `K(0) = 1`,
//! `K(−α) = conj(c_α)`, zero on mixed-sign indices, is positive definite on
//! ℤⁿ. Arranged in the D-slice ordering, its sections are block Toeplitz
//! matrices whose blocks are multiplication by the slices `C_k(λ)` of the
//! coefficient series, so positivity reduces to the smallest eigenvalue of
//! a small Hermitian matrix at each torus point.
//!
//! The coefficients `c` are tied to the coefficients `a` of the disc-valued
//! map `g` by `(1 + Σ c_α z^α)(1 − Σ a_α z^α) = 1`, i.e. `f = (1+g)/(1−g)`.
//! Through that relation the depth-`m` section is positive semi-definite
//! exactly when the `m × m` Toeplitz matrix of the slices of `a` is a
//! contraction.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::completion::DEFAULT_TOL;
use crate::error::{Error, Result};
use crate::opnorm::{min_eigenvalue, toeplitz_norm, upper_toeplitz, DenseMatrix, ToeplitzFamily};
use crate::polyalg::{grid_max, sup_norm, MultiIndex, NPoly, TorusGrid, TrigPoly};
use crate::slicing::slice_decompose;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coefficients `a` of `g` and `c` of `(1+g)/(1−g) = 1 + 2Σ c_α z^α`,
/// both without constant term, through total degree `degree`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CayleyPair {
    pub a: NPoly,
    pub c: NPoly,
    pub degree: usize,
}

impl CayleyPair {
    /// The constant coefficient of `f/2`.
    pub const C0: f64 = 0.5;

    pub fn from_a(a: NPoly, degree: usize) -> Result<Self> {
        let c = cayley_forward(&a, degree)?;
        Ok(CayleyPair {
            a: a.truncated(degree),
            c,
            degree,
        })
    }

    pub fn from_c(c: NPoly) -> Result<Self> {
        let a = cayley_inverse(&c)?;
        let degree = c.degree();
        Ok(CayleyPair { a, c, degree })
    }

    pub fn nvars(&self) -> usize {
        self.c.nvars()
    }
}

/// All multi-indices in `n` variables with total degree `1..=degree`,
/// graded by degree.
fn graded_indices(n: usize, degree: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, left: usize, cur: &mut Vec<i32>, out: &mut Vec<MultiIndex>) {
        if cur.len() == n - 1 {
            cur.push(left as i32);
            out.push(MultiIndex::new(cur.clone()));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as i32);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for k in 1..=degree {
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// `Σ a_β c_{α−β}` over `a`'s terms `β` strictly below `α` componentwise.
fn convolution_tail(alpha: &MultiIndex, a: &BTreeMap<MultiIndex, Complex64>, c: &BTreeMap<MultiIndex, Complex64>) -> Complex64 {
    a.iter()
        .filter(|(b, _)| b.le_componentwise(alpha) && *b != alpha)
        .map(|(b, &ab)| ab * c.get(&alpha.minus(b)).copied().unwrap_or(ZERO))
        .sum()
}

fn check_no_constant(p: &NPoly) -> Result<()> {
    let c0 = p.constant_term();
    if c0 != ZERO {
        return Err(Error::NonzeroConstant(c0));
    }
    Ok(())
}

/// Solves `(1 + Σ c_α z^α)(1 − Σ a_α z^α) = 1` for `c` through total
/// degree `degree`: `c_α = a_α + Σ_{0<β<α} a_β c_{α−β}`.
pub fn cayley_forward(a: &NPoly, degree: usize) -> Result<NPoly> {
    check_no_constant(a)?;
    let n = a.nvars();
    let a_map: BTreeMap<MultiIndex, Complex64> = a
        .terms()
        .filter(|(b, _)| b.total() as usize <= degree)
        .map(|(b, x)| (b.clone(), *x))
        .collect();
    let mut c: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    for alpha in graded_indices(n, degree) {
        let v = a_map.get(&alpha).copied().unwrap_or(ZERO) + convolution_tail(&alpha, &a_map, &c);
        if v != ZERO {
            c.insert(alpha, v);
        }
    }
    NPoly::from_terms(n, c)
}

/// Inverse of [`cayley_forward`]: `a_α = c_α − Σ_{0<β<α} a_β c_{α−β}`
/// through the degree of `c`.
pub fn cayley_inverse(c: &NPoly) -> Result<NPoly> {
    check_no_constant(c)?;
    let n = c.nvars();
    let c_map: BTreeMap<MultiIndex, Complex64> = c.terms().map(|(b, x)| (b.clone(), *x)).collect();
    let mut a: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    for alpha in graded_indices(n, c.degree()) {
        let v = c_map.get(&alpha).copied().unwrap_or(ZERO) - convolution_tail(&alpha, &a, &c_map);
        if v != ZERO {
            a.insert(alpha, v);
        }
    }
    NPoly::from_terms(n, a)
}

/// The kernel on ℤⁿ built from `c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KpFunction {
    c: NPoly,
}

impl KpFunction {
    pub fn new(c: NPoly) -> Result<Self> {
        check_no_constant(&c)?;
        Ok(KpFunction { c })
    }

    /// `1` at the origin, `c_α` on ℕ₀ⁿ, `conj(c_{−α})` on −ℕ₀ⁿ, `0` on
    /// mixed-sign indices.
    pub fn value(&self, alpha: &MultiIndex) -> Complex64 {
        if alpha.entries().iter().all(|&e| e == 0) {
            ONE
        } else if alpha.is_nonnegative() {
            self.c.coeff(alpha)
        } else if alpha.negated().is_nonnegative() {
            self.c.coeff(&alpha.negated()).conj()
        } else {
            ZERO
        }
    }
}

/// Hermitian `(d+1)×(d+1)` matrix with `1` on the diagonal, `v[k−1]` on
/// the k-th subdiagonal and its conjugate on the k-th superdiagonal.
pub fn hermitian_toeplitz(v: &[Complex64], depth: usize) -> DenseMatrix {
    DenseMatrix::from_fn(depth + 1, depth + 1, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => ONE,
        std::cmp::Ordering::Greater => v.get(i - j - 1).copied().unwrap_or(ZERO),
        std::cmp::Ordering::Less => v.get(j - i - 1).copied().unwrap_or(ZERO).conj(),
    })
}

fn level_slices(p: &NPoly, depth: usize) -> Vec<TrigPoly> {
    (1..=depth as i64).map(|k| slice_decompose(p.as_trig(), k)).collect()
}

/// The depth-`depth` section of the kernel in the D-slice ordering at
/// `λ ∈ 𝕋^{n−1}`: entry `(l, m)` is `C_{l−m}(λ)` below the diagonal.
pub fn kp_block_matrix(pair: &CayleyPair, depth: usize, lambda: &[Complex64]) -> Result<DenseMatrix> {
    let vals = level_slices(&pair.c, depth)
        .iter()
        .map(|s| s.eval(lambda))
        .collect::<Result<Vec<_>>>()?;
    Ok(hermitian_toeplitz(&vals, depth))
}

/// Smallest eigenvalue of the depth-`depth` sections over the grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KpReport {
    pub depth: usize,
    pub positive: bool,
    pub min_eigenvalue: f64,
    /// Angles where the minimum was attained.
    pub argmin: Vec<f64>,
}

/// Positivity of the kernel section up to `depth`: the minimum over `λ` of
/// the smallest eigenvalue of [`kp_block_matrix`], compared with `−tol`.
pub fn kp_positive(pair: &CayleyPair, depth: usize, grid: &TorusGrid, tol: f64) -> KpReport {
    let slices = level_slices(&pair.c, depth);
    let refs: Vec<&TrigPoly> = slices.iter().collect();
    let m = pair.nvars().saturating_sub(1);
    let worst = grid_max(grid, m, &refs, |v| {
        -min_eigenvalue(&hermitian_toeplitz(v, depth), 1e-9).expect("matrix is Hermitian by construction")
    });
    let min_eigenvalue = -worst.value;
    KpReport {
        depth,
        positive: min_eigenvalue >= -tol,
        min_eigenvalue,
        argmin: worst.argmax,
    }
}

/// One-variable identity check: with `P` the upper-triangular Toeplitz
/// matrix of `1 − Σ a_k z^k` (size `n+1`), `C` the Hermitian Toeplitz matrix
/// of `c = cayley_forward(a)` and `A` the `n × n` upper-triangular Toeplitz
/// matrix of `a`, returns `max |P Cᵗ P* − ((I − AA*) ⊕ 1)|`.
pub fn schur_identity_check(a: &[Complex64], n: usize) -> Result<f64> {
    let mut coeffs: Vec<Complex64> = a.iter().copied().take(n).collect();
    coeffs.resize(n, ZERO);
    let poly = NPoly::from_terms(
        1,
        coeffs.iter().enumerate().map(|(k, &x)| (MultiIndex::from([k as i32 + 1]), x)),
    )?;
    let c = cayley_forward(&poly, n)?;
    let cvals: Vec<Complex64> = (1..=n as i32).map(|k| c.coeff(&MultiIndex::from([k]))).collect();

    let mut p_row = vec![ONE];
    p_row.extend(coeffs.iter().map(|&x| -x));
    let p = upper_toeplitz(&p_row, n + 1);
    let cm = hermitian_toeplitz(&cvals, n);
    let am = upper_toeplitz(&coeffs, n);

    let lhs = &(&p * &cm.transpose()) * &p.adjoint();
    let rhs = (&am * &am.adjoint()).identity_minus().direct_sum(&DenseMatrix::identity(1));
    lhs.max_abs_diff(&rhs)
}

/// Both sides of the positivity/contractivity equivalence at one depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub depth: usize,
    pub positive: bool,
    pub min_eigenvalue: f64,
    pub contractive: bool,
    /// Norm of the Toeplitz matrix of the slices of `a`.
    pub norm: f64,
    pub agree: bool,
}

/// Runs [`kp_positive`] on `c = cayley_forward(a)` and the contraction test
/// on the `depth × depth` Toeplitz matrix of the slices of `a`.
pub fn kp_equivalence_check(a: &NPoly, depth: usize, grid: &TorusGrid, tol: f64) -> Result<EquivalenceReport> {
    let pair = CayleyPair::from_a(a.clone(), depth)?;
    let kp = kp_positive(&pair, depth, grid, tol);
    let norm = if depth == 0 {
        0.0
    } else {
        let fam = ToeplitzFamily::new(level_slices(&pair.a, depth))?;
        toeplitz_norm(&fam, grid).value
    };
    let contractive = norm <= 1.0 + tol;
    Ok(EquivalenceReport {
        depth,
        positive: kp.positive,
        min_eigenvalue: kp.min_eigenvalue,
        contractive,
        norm,
        agree: kp.positive == contractive,
    })
}

/// End-to-end check for `g` with `g(0) = 0` and `sup |g| < 1`: the map
/// `(1+g)/(1−g)` has positive real part, so its kernel section must be
/// positive.
pub fn kp_test_map(g: &NPoly, depth: usize, grid: &TorusGrid) -> Result<KpReport> {
    check_no_constant(g)?;
    let s = sup_norm(g.as_trig(), grid).value;
    if s >= 1.0 {
        return Err(Error::Precondition(format!("sup |g| = {s} is not below 1")));
    }
    let pair = CayleyPair::from_a(g.clone(), depth)?;
    Ok(kp_positive(&pair, depth, grid, DEFAULT_TOL))
}
