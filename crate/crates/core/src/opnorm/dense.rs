use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Small dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

/// Wire form: `{"rows": r, "cols": c, "re": [...], "im": [...]}`, row-major,
/// `im` optional.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    #[serde(default)]
    pub im: Vec<f64>,
}

impl TryFrom<MatrixJson> for DenseMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let n = j.rows * j.cols;
        if j.re.len() != n {
            return Err(Error::Shape(format!(
                "field `re` has {} entries, expected {}",
                j.re.len(),
                n
            )));
        }
        if !j.im.is_empty() && j.im.len() != n {
            return Err(Error::Shape(format!(
                "field `im` has {} entries, expected {}",
                j.im.len(),
                n
            )));
        }
        let entries = (0..n)
            .map(|i| Complex64::new(j.re[i], j.im.get(i).copied().unwrap_or(0.0)))
            .collect();
        DenseMatrix::new(j.rows, j.cols, entries)
    }
}

impl From<DenseMatrix> for MatrixJson {
    fn from(m: DenseMatrix) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            re: m.entries.iter().map(|c| c.re).collect(),
            im: m.entries.iter().map(|c| c.im).collect(),
        }
    }
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::Shape(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        DenseMatrix { rows, cols, entries }
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("rows have unequal lengths".into()));
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        })
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn try_mul(&self, other: &DenseMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "shape {}x{} does not match {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &DenseMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &DenseMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `I − self`; panics if not square.
    pub fn identity_minus(&self) -> Self {
        assert!(self.is_square(), "identity_minus needs a square matrix");
        &DenseMatrix::identity(self.rows) - self
    }

    /// Assembles `[[a, b], [c, d]]`; block shapes must be conformable.
    pub fn block2x2(a: &DenseMatrix, b: &DenseMatrix, c: &DenseMatrix, d: &DenseMatrix) -> Result<Self> {
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::Shape(format!(
                "blocks {}x{}, {}x{}, {}x{}, {}x{} are not conformable",
                a.rows, a.cols, b.rows, b.cols, c.rows, c.cols, d.rows, d.cols
            )));
        }
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        Ok(Self::from_fn(rows, cols, |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a[(i, j)],
            (true, false) => b[(i, j - a.cols)],
            (false, true) => c[(i - a.rows, j)],
            (false, false) => d[(i - a.rows, j - a.cols)],
        }))
    }

    /// Stacks `top` over `bottom`.
    pub fn vstack(top: &DenseMatrix, bottom: &DenseMatrix) -> Result<Self> {
        if top.cols != bottom.cols {
            return Err(Error::Shape("vstack needs equal column counts".into()));
        }
        let mut entries = top.entries.clone();
        entries.extend_from_slice(&bottom.entries);
        Ok(DenseMatrix {
            rows: top.rows + bottom.rows,
            cols: top.cols,
            entries,
        })
    }

    /// Places `left` beside `right`.
    pub fn hstack(left: &DenseMatrix, right: &DenseMatrix) -> Result<Self> {
        if left.rows != right.rows {
            return Err(Error::Shape("hstack needs equal row counts".into()));
        }
        Ok(Self::from_fn(left.rows, left.cols + right.cols, |i, j| {
            if j < left.cols {
                left[(i, j)]
            } else {
                right[(i, j - left.cols)]
            }
        }))
    }

    /// Direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &DenseMatrix) -> Self {
        let z1 = Self::zeros(self.rows, other.cols);
        let z2 = Self::zeros(other.rows, self.cols);
        Self::block2x2(self, &z1, &z2, other).expect("direct sum blocks are conformable")
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Entrywise `max |self − other|`.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        Ok(self.try_sub(other)?.max_abs())
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_add(rhs).expect("matrix shapes differ")
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_sub(rhs).expect("matrix shapes differ")
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_mul(rhs).expect("matrix shapes are not conformable")
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;

    fn neg(self) -> DenseMatrix {
        self.scale(-ONE)
    }
}

/// Singular values in decreasing order.
pub fn singular_values(m: &DenseMatrix) -> Vec<f64> {
    if m.rows == 0 || m.cols == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.to_nalgebra().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Largest singular value; 0 for an empty matrix.
pub fn op_norm(m: &DenseMatrix) -> f64 {
    match (m.rows, m.cols) {
        (0, _) | (_, 0) => 0.0,
        (1, _) | (_, 1) => m.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        _ => singular_values(m)[0],
    }
}

/// `max |M − M*|`.
pub fn hermitian_defect(m: &DenseMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.rows {
        for j in i..m.cols {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn hermitian_eigen(m: &DenseMatrix, tol: f64) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    if !m.is_square() {
        return Err(Error::Shape(format!("{}x{} matrix is not square", m.rows, m.cols)));
    }
    let scale = m.max_abs().max(1.0);
    let defect = hermitian_defect(m);
    if defect > tol * scale {
        return Err(Error::NotHermitian(defect));
    }
    let h = m.to_nalgebra();
    let sym = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    Ok((eig.eigenvalues.iter().copied().collect(), eig.eigenvectors))
}

/// Eigenvalues of a Hermitian matrix in increasing order.
pub fn hermitian_eigenvalues(m: &DenseMatrix, tol: f64) -> Result<Vec<f64>> {
    let (mut ev, _) = hermitian_eigen(m, tol)?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Smallest eigenvalue of a Hermitian matrix; `+∞` for the empty matrix.
pub fn min_eigenvalue(m: &DenseMatrix, tol: f64) -> Result<f64> {
    Ok(hermitian_eigenvalues(m, tol)?.first().copied().unwrap_or(f64::INFINITY))
}

/// PSD square root of a Hermitian matrix.
///
/// Eigenvalues within `tol·max(‖M‖, 1)` of zero are set to zero, so the
/// root has no singular values between 0 and about `√tol`; an eigenvalue
/// below that band is an error, as is a Hermitian defect above
/// `tol·max(max|M|, 1)`.
pub fn psd_sqrt(m: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    if m.rows == 0 {
        return Ok(m.clone());
    }
    let (ev, vecs) = hermitian_eigen(m, tol)?;
    let norm = ev.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let floor = tol * norm.max(1.0);
    let mut roots = Vec::with_capacity(ev.len());
    for &e in &ev {
        if e < -floor {
            return Err(Error::NegativeEigenvalue(e));
        }
        let e = if e <= floor { 0.0 } else { e };
        roots.push(Complex64::new(e.sqrt(), 0.0));
    }
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(roots));
    Ok(DenseMatrix::from_nalgebra(&(&vecs * d * vecs.adjoint())))
}

/// Moore–Penrose pseudo-inverse; singular values at or below `rcond·σ_max`
/// are treated as zero.
pub fn pinv(m: &DenseMatrix, rcond: f64) -> DenseMatrix {
    if m.rows == 0 || m.cols == 0 {
        return DenseMatrix::zeros(m.cols, m.rows);
    }
    let svd = m.to_nalgebra().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return DenseMatrix::zeros(m.cols, m.rows);
    }
    let cut = rcond * smax;
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let vt = svd.v_t.as_ref().expect("right singular vectors requested");
    let mut out = DMatrix::<Complex64>::zeros(m.cols, m.rows);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > cut {
            let vk = vt.row(k).adjoint();
            let uk = u.column(k).adjoint();
            out += (vk * uk) * Complex64::new(1.0 / s, 0.0);
        }
    }
    DenseMatrix::from_nalgebra(&out)
}

/// Upper-triangular Toeplitz matrix with first row `first_row`, padded
/// with zeros (or truncated) to `size × size`.
pub fn upper_toeplitz(first_row: &[Complex64], size: usize) -> DenseMatrix {
    DenseMatrix::from_fn(size, size, |i, j| {
        if j >= i {
            first_row.get(j - i).copied().unwrap_or(ZERO)
        } else {
            ZERO
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, r: usize, k: usize) -> DenseMatrix {
        let entries = (0..r * k)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        DenseMatrix::new(r, k, entries).unwrap()
    }

    #[test]
    fn op_norm_examples() {
        assert_relative_eq!(op_norm(&DenseMatrix::identity(4)), 1.0, epsilon = 1e-14);
        assert_eq!(op_norm(&DenseMatrix::zeros(3, 2)), 0.0);
        let nil = DenseMatrix::from_rows(&[vec![c(0.0, 0.0), c(2.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert_relative_eq!(op_norm(&nil), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn psd_sqrt_examples() {
        let id = DenseMatrix::identity(3);
        assert!(psd_sqrt(&id, 1e-10).unwrap().max_abs_diff(&id).unwrap() < 1e-14);
        let d = DenseMatrix::diagonal(&[c(4.0, 0.0), c(9.0, 0.0)]);
        let want = DenseMatrix::diagonal(&[c(2.0, 0.0), c(3.0, 0.0)]);
        assert!(psd_sqrt(&d, 1e-10).unwrap().max_abs_diff(&want).unwrap() < 1e-13);

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(&mut rng, 5, 3);
        let aa = &a * &a.adjoint();
        let r = psd_sqrt(&aa, 1e-10).unwrap();
        assert!((&r * &r).max_abs_diff(&aa).unwrap() < 1e-10 * op_norm(&aa));
    }

    #[test]
    fn psd_sqrt_rejects_bad_input() {
        let neg = DenseMatrix::diagonal(&[c(1.0, 0.0), c(-0.5, 0.0)]);
        assert!(matches!(psd_sqrt(&neg, 1e-10), Err(Error::NegativeEigenvalue(_))));
        let nh = DenseMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        assert!(matches!(psd_sqrt(&nh, 1e-10), Err(Error::NotHermitian(_))));
        // tiny negative eigenvalues are clamped
        let almost = DenseMatrix::diagonal(&[c(1.0, 0.0), c(-1e-13, 0.0)]);
        let r = psd_sqrt(&almost, 1e-10).unwrap();
        assert_eq!(r[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn pinv_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // rank-2 4x3 matrix
        let a = &random_matrix(&mut rng, 4, 2) * &random_matrix(&mut rng, 2, 3);
        let p = pinv(&a, 1e-10);
        assert_eq!((p.rows(), p.cols()), (3, 4));
        assert!((&(&a * &p) * &a).max_abs_diff(&a).unwrap() < 1e-10);
        assert!((&(&p * &a) * &p).max_abs_diff(&p).unwrap() < 1e-9);
        let ap = &a * &p;
        assert!(hermitian_defect(&ap) < 1e-10);
        assert_eq!(pinv(&DenseMatrix::zeros(2, 3), 1e-10), DenseMatrix::zeros(3, 2));
    }

    #[test]
    fn unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let m = random_matrix(&mut rng, 4, 4);
            let q1 = random_matrix(&mut rng, 4, 4).to_nalgebra().qr().q();
            let q2 = random_matrix(&mut rng, 4, 4).to_nalgebra().qr().q();
            let u = DenseMatrix::from_nalgebra(&q1);
            let v = DenseMatrix::from_nalgebra(&q2);
            assert_relative_eq!(op_norm(&(&(&u * &m) * &v)), op_norm(&m), epsilon = 1e-9);
        }
    }

    #[test]
    fn blocks_and_json() {
        let a = DenseMatrix::identity(1);
        let z = DenseMatrix::zeros(1, 1);
        let b = DenseMatrix::block2x2(&a, &z, &z, &a).unwrap();
        assert_eq!(b, DenseMatrix::identity(2));
        assert!(DenseMatrix::block2x2(&a, &DenseMatrix::zeros(2, 1), &z, &a).is_err());
        assert_eq!(a.direct_sum(&a), DenseMatrix::identity(2));

        let json = MatrixJson::from(b.clone());
        assert_eq!(json.rows, 2);
        let back = DenseMatrix::try_from(json).unwrap();
        assert_eq!(back, b);
        let bad = MatrixJson { rows: 2, cols: 2, re: vec![1.0], im: vec![] };
        assert!(DenseMatrix::try_from(bad).is_err());
    }

    #[test]
    fn upper_toeplitz_layout() {
        let t = upper_toeplitz(&[c(1.0, 0.0), c(2.0, 0.0)], 3);
        assert_eq!(t[(0, 1)], c(2.0, 0.0));
        assert_eq!(t[(1, 2)], c(2.0, 0.0));
        assert_eq!(t[(0, 2)], c(0.0, 0.0));
        assert_eq!(t[(2, 1)], c(0.0, 0.0));
        assert_eq!(t[(2, 2)], c(1.0, 0.0));
    }
}
