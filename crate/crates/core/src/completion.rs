//! Contractive completion of a 2×2 block matrix with one unknown corner,
//! and the factorization criterion for upper-triangular contractions.
//!
//! For `[[A, X], [C, D]]` with both `[A; C]` and `[C D]` contractions, every
//! contractive completion is
//!
//! ```text
//! X = (I − ZZ*)^{1/2} V (I − Y*Y)^{1/2} − Z C* Y,   ‖V‖ ≤ 1,
//! ```
//!
//! where `D = (I − CC*)^{1/2} Y` and `A = Z (I − C*C)^{1/2}`. `V = 0` gives
//! the central completion. Square roots are PSD roots with clamping, and the
//! factor equations are solved with pseudo-inverses, so boundary cases
//! where `I − CC*` is singular are handled without special casing.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::opnorm::{op_norm, pinv, psd_sqrt, DenseMatrix};
use crate::polyalg::{grid_max, TorusGrid, TrigPoly};

/// Absolute slack on contraction tests.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative cutoff below which singular values are treated as zero.
pub const PINV_RCOND: f64 = 1e-10;
/// Clamping tolerance for PSD square roots.
pub const SQRT_TOL: f64 = 1e-10;

/// The known blocks `A: H₁→K₁`, `C: H₁→K₂`, `D: H₂→K₂` of
/// `[[A, X], [C, D]]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParrottProblem {
    a: DenseMatrix,
    c: DenseMatrix,
    d: DenseMatrix,
    tol: f64,
}

impl ParrottProblem {
    /// Checks conformability and that `[A; C]` and `[C D]` have norm at most
    /// `1 + tol`.
    pub fn new(a: DenseMatrix, c: DenseMatrix, d: DenseMatrix, tol: f64) -> Result<Self> {
        let column = DenseMatrix::vstack(&a, &c)?;
        let row = DenseMatrix::hstack(&c, &d)?;
        let nc = op_norm(&column);
        if nc > 1.0 + tol {
            return Err(Error::NotContraction {
                what: "left column [A; C]",
                norm: nc,
            });
        }
        let nr = op_norm(&row);
        if nr > 1.0 + tol {
            return Err(Error::NotContraction {
                what: "bottom row [C D]",
                norm: nr,
            });
        }
        Ok(ParrottProblem { a, c, d, tol })
    }

    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    pub fn c(&self) -> &DenseMatrix {
        &self.c
    }

    pub fn d(&self) -> &DenseMatrix {
        &self.d
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The block matrix with `x` in the corner.
    pub fn assemble(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        DenseMatrix::block2x2(&self.a, x, &self.c, &self.d)
    }
}

/// Factors of a Parrott problem and its central completion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParrottSolution {
    pub y: DenseMatrix,
    pub z: DenseMatrix,
    /// `(I − ZZ*)^{1/2}`; the completion is unique when this vanishes.
    pub left_factor: DenseMatrix,
    /// `(I − Y*Y)^{1/2}`; the completion is unique when this vanishes.
    pub right_factor: DenseMatrix,
    pub central_x: DenseMatrix,
}

impl ParrottSolution {
    /// Whether the set of completions is a single point: one of the two
    /// square-root factors vanishes to within `tol`.
    pub fn is_unique(&self, tol: f64) -> bool {
        op_norm(&self.left_factor) <= tol || op_norm(&self.right_factor) <= tol
    }
}

fn check_residual(lhs: &DenseMatrix, rhs: &DenseMatrix, tol: f64) -> Result<()> {
    let r = lhs.max_abs_diff(rhs)?;
    // a contraction defect of ε permits components of size √ε outside the range
    if r > 10.0 * tol.sqrt() * (1.0 + rhs.max_abs()) {
        return Err(Error::InconsistentFactor(r));
    }
    Ok(())
}

/// Solves `D = (I − CC*)^{1/2} Y` and `A = Z (I − C*C)^{1/2}` with
/// minimal-norm pseudo-inverse solutions and forms the central completion
/// `−Z C* Y`.
pub fn parrott_factors(prob: &ParrottProblem) -> Result<ParrottSolution> {
    let ParrottProblem { a, c, d, tol } = prob;
    let cs = c.adjoint();
    let left_root = psd_sqrt(&(c * &cs).identity_minus(), SQRT_TOL.max(*tol))?;
    let right_root = psd_sqrt(&(&cs * c).identity_minus(), SQRT_TOL.max(*tol))?;
    let y = &pinv(&left_root, PINV_RCOND) * d;
    let z = a * &pinv(&right_root, PINV_RCOND);
    check_residual(&(&left_root * &y), d, *tol)?;
    check_residual(&(&z * &right_root), a, *tol)?;

    let left_factor = psd_sqrt(&(&z * &z.adjoint()).identity_minus(), SQRT_TOL.max(*tol))?;
    let right_factor = psd_sqrt(&(&y.adjoint() * &y).identity_minus(), SQRT_TOL.max(*tol))?;
    let central_x = -&(&(&z * &cs) * &y);
    Ok(ParrottSolution {
        y,
        z,
        left_factor,
        right_factor,
        central_x,
    })
}

/// The completion `(I − ZZ*)^{1/2} V (I − Y*Y)^{1/2} − Z C* Y`.
pub fn parrott_complete(prob: &ParrottProblem, v: &DenseMatrix) -> Result<DenseMatrix> {
    parrott_complete_with_corner(prob, v, prob.c())
}

/// As [`parrott_complete`] with an explicit corner operator `S` in place of
/// `C` in the term `Z S* Y`.
pub fn parrott_complete_with_corner(prob: &ParrottProblem, v: &DenseMatrix, s: &DenseMatrix) -> Result<DenseMatrix> {
    let nv = op_norm(v);
    if nv > 1.0 + prob.tol {
        return Err(Error::NotContraction {
            what: "free parameter V",
            norm: nv,
        });
    }
    let sol = parrott_factors(prob)?;
    let free = &(&sol.left_factor * v) * &sol.right_factor;
    let fixed = &(&sol.z * &s.adjoint()) * &sol.y;
    free.try_sub(&fixed)
}

/// Block data of the one-step Toeplitz extension problem: completing the
/// `(k+1)×(k+1)` upper-triangular Toeplitz matrix of `vals = (q_1, …, q_k)`
/// with an unknown `q_{k+1}` in the top-right corner.
pub fn toeplitz_extension_blocks(vals: &[Complex64]) -> (DenseMatrix, DenseMatrix, DenseMatrix) {
    let k = vals.len();
    let zero = Complex64::new(0.0, 0.0);
    let a = DenseMatrix::from_fn(1, k, |_, j| vals[j]);
    let c = DenseMatrix::from_fn(k, k, |i, j| if j > i { vals[j - i - 1] } else { zero });
    let d = DenseMatrix::from_fn(k, 1, |i, _| vals[k - 1 - i]);
    (a, c, d)
}

/// Factors `X = (I − T₁T₁*)^{1/2} C (I − T₂*T₂)^{1/2}` with `‖C‖ ≤ 1 + tol`,
/// which exists exactly when `[[T₁, X], [0, T₂]]` is a contraction.
/// Returns `None` when no such contraction `C` exists.
pub fn dmp_factor(t1: &DenseMatrix, t2: &DenseMatrix, x: &DenseMatrix, tol: f64) -> Option<DenseMatrix> {
    let l = psd_sqrt(&(t1 * &t1.adjoint()).identity_minus(), SQRT_TOL.max(tol)).ok()?;
    let r = psd_sqrt(&(&t2.adjoint() * t2).identity_minus(), SQRT_TOL.max(tol)).ok()?;
    let c = &(&pinv(&l, PINV_RCOND) * x) * &pinv(&r, PINV_RCOND);
    let back = &(&l * &c) * &r;
    if back.max_abs_diff(x).ok()? > 1e-9 * (1.0 + x.max_abs()) {
        return None;
    }
    (op_norm(&c) <= 1.0 + tol).then_some(c)
}

/// Outcome of the pointwise test `1 − |p₁(λ)|² − |p₂(λ)| ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DmpReport {
    pub pass: bool,
    /// Minimum of `1 − |p₁|² − |p₂|` over the grid.
    pub worst_margin: f64,
    /// Angles of the minimizing point.
    pub worst_point: Vec<f64>,
}

/// Evaluates the margin `1 − |p₁|² − |p₂|` over the grid; passes when its
/// minimum is at least `−DEFAULT_TOL`.
pub fn dmp_pointwise(p1: &TrigPoly, p2: &TrigPoly, grid: &TorusGrid) -> Result<DmpReport> {
    if p1.nvars() != p2.nvars() {
        return Err(Error::DimensionMismatch {
            expected: p1.nvars(),
            found: p2.nvars(),
        });
    }
    let worst = grid_max(grid, p1.nvars(), &[p1, p2], |v| v[0].norm_sqr() + v[1].norm() - 1.0);
    let worst_margin = -worst.value;
    Ok(DmpReport {
        pass: worst_margin >= -DEFAULT_TOL,
        worst_margin,
        worst_point: worst.argmax,
    })
}
