//! Norms of block Toeplitz operators whose blocks are multiplication
//! operators.
//!
//! When every block of an operator matrix is multiplication by a symbol on
//! 𝕋ᵐ, the whole matrix is multiplication by the matrix-valued function
//! `λ ↦ [q_{ij}(λ)]`, and its norm is `sup_λ ‖[q_{ij}(λ)]‖`. All the norms
//! here are computed that way, as a refined supremum over a torus grid.

mod dense;

pub use dense::{
    hermitian_defect, hermitian_eigenvalues, min_eigenvalue, op_norm, pinv, psd_sqrt,
    singular_values, upper_toeplitz, DenseMatrix, MatrixJson,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::{grid_max, sup_norm, GridMax, NPoly, TorusGrid, TrigPoly};
use crate::slicing::SymbolFamily;

/// Default size of the zero-padded section used to approximate the norm of
/// the infinite Toeplitz operator.
pub const DEFAULT_SECTION: usize = 64;

/// Symbols `q_1, …, q_m` of the upper-triangular block Toeplitz matrix
/// with `q_{j-i+1}` in block `(i, j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzFamily {
    symbols: Vec<TrigPoly>,
}

impl ToeplitzFamily {
    pub fn new(symbols: Vec<TrigPoly>) -> Result<Self> {
        let first = symbols
            .first()
            .ok_or_else(|| Error::Precondition("a Toeplitz family needs at least one symbol".into()))?;
        let nvars = first.nvars();
        if let Some(bad) = symbols.iter().find(|s| s.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: bad.nvars(),
            });
        }
        Ok(ToeplitzFamily { symbols })
    }

    /// Scalar family (symbols in zero variables).
    pub fn scalars(a: &[Complex64]) -> Result<Self> {
        Self::new(a.iter().map(|&x| TrigPoly::constant(0, x)).collect())
    }

    pub fn nvars(&self) -> usize {
        self.symbols[0].nvars()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[TrigPoly] {
        &self.symbols
    }

    /// The family extended by `extra` zero symbols.
    pub fn padded(&self, extra: usize) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.extend(std::iter::repeat(TrigPoly::zero(self.nvars())).take(extra));
        ToeplitzFamily { symbols }
    }

    /// The first `k` symbols.
    pub fn prefix(&self, k: usize) -> Result<Self> {
        Self::new(self.symbols[..k.min(self.len())].to_vec())
    }
}

impl TryFrom<&SymbolFamily> for ToeplitzFamily {
    type Error = Error;

    /// An empty family (from the zero polynomial) becomes the single zero
    /// symbol.
    fn try_from(fam: &SymbolFamily) -> Result<Self> {
        if fam.is_empty() {
            return Self::new(vec![TrigPoly::zero(fam.n().saturating_sub(1))]);
        }
        Self::new(fam.symbols().to_vec())
    }
}

fn symbol_refs(fam: &ToeplitzFamily) -> Vec<&TrigPoly> {
    fam.symbols.iter().collect()
}

/// The m×m matrix `[q_{j-i+1}(λ)]_{j ≥ i}` at a torus point.
pub fn toeplitz_eval(fam: &ToeplitzFamily, lambda: &[Complex64]) -> Result<DenseMatrix> {
    let vals = fam
        .symbols
        .iter()
        .map(|s| s.eval(lambda))
        .collect::<Result<Vec<_>>>()?;
    Ok(upper_toeplitz(&vals, fam.len()))
}

/// `sup_λ ‖toeplitz_eval(fam, λ)‖` over the grid.
pub fn toeplitz_norm(fam: &ToeplitzFamily, grid: &TorusGrid) -> GridMax {
    let m = fam.len();
    grid_max(grid, fam.nvars(), &symbol_refs(fam), |v| op_norm(&upper_toeplitz(v, m)))
}

/// Norm of the `size × size` section of the Toeplitz matrix with the
/// family's symbols followed by zeros.
///
/// Non-decreasing in `size`, and converges from below to the norm of the
/// infinite operator, `sup_{λ, w} |Σ_k q_k(λ) w^{k-1}|`.
pub fn toeplitz_section_norm(fam: &ToeplitzFamily, size: usize, grid: &TorusGrid) -> GridMax {
    let size = size.max(fam.len());
    grid_max(grid, fam.nvars(), &symbol_refs(fam), |v| op_norm(&upper_toeplitz(v, size)))
}

/// Supremum of `|f|` over the distinguished boundary of the polydisc,
/// which equals its supremum over the polydisc.
pub fn full_function_norm(f: &NPoly, grid: &TorusGrid) -> GridMax {
    sup_norm(f.as_trig(), grid)
}
