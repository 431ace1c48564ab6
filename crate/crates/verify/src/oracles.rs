//! Reference computations that share no code path with the library routines
//! they check.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Bracket on a discrete minimax value: `lower ≤ min_g max_j |f_j − g(z_j)| ≤ upper`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimaxBracket {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

/// Distance in sup norm, over `points` equispaced samples of the circle, from
/// the Laurent polynomial `Σ coeffs[k]·z^(k + lowest)` to analytic polynomials
/// of degree at most `degree`.
///
/// Uses Lawson's reweighted least squares. For any probability weights the
/// weighted least-squares residual bounds the minimax value from below, and
/// the sup error of each iterate bounds it from above.
pub fn analytic_minimax(lowest: i32, coeffs: &[Complex64], degree: usize, points: usize, max_iter: usize, rel_gap: f64) -> MinimaxBracket {
    let z: Vec<Complex64> = (0..points)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / points as f64))
        .collect();
    let f: Vec<Complex64> = z
        .iter()
        .map(|&zj| {
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * zj.powi(k as i32 + lowest))
                .sum()
        })
        .collect();
    let basis = DMatrix::from_fn(points, degree + 1, |j, k| z[j].powi(k as i32));

    let mut w = vec![1.0 / points as f64; points];
    let mut best = MinimaxBracket {
        lower: 0.0,
        upper: f.iter().map(|x| x.norm()).fold(0.0, f64::max),
        iterations: 0,
    };
    for it in 1..=max_iter {
        // normal equations of the weighted fit; the Gram matrix is Hermitian positive definite
        // while at least degree + 1 weights are nonzero
        let wb = DMatrix::from_fn(points, degree + 1, |j, k| basis[(j, k)] * w[j]);
        let gram = wb.adjoint() * &basis;
        let rhs = wb.adjoint() * DVector::from_column_slice(&f);
        let g = match gram.clone().cholesky() {
            Some(ch) => ch.solve(&rhs),
            None => match gram.svd(true, true).solve(&rhs, 1e-14) {
                Ok(g) => g,
                Err(_) => break,
            },
        };
        let fit = &basis * g;
        let err: Vec<f64> = f.iter().zip(fit.iter()).map(|(x, y)| (x - y).norm()).collect();
        let lower = err.iter().zip(&w).map(|(e, wi)| wi * e * e).sum::<f64>().sqrt();
        let upper = err.iter().copied().fold(0.0, f64::max);
        best.lower = best.lower.max(lower);
        best.upper = best.upper.min(upper);
        best.iterations = it;
        if best.upper - best.lower <= rel_gap * best.upper {
            break;
        }
        let total: f64 = err.iter().zip(&w).map(|(e, wi)| e * wi).sum();
        if total == 0.0 {
            break;
        }
        for (wi, e) in w.iter_mut().zip(&err) {
            *wi *= e / total;
        }
    }
    best
}

/// Largest singular value of the `k × k` upper-triangular Toeplitz matrix
/// with first row `a[..k]`, by power iteration on `T*T`.
///
/// Slower and less precise than a full decomposition but independent of it.
pub fn upper_toeplitz_norm_power(a: &[Complex64], k: usize, iters: usize) -> f64 {
    let apply = |x: &[Complex64]| -> Vec<Complex64> {
        (0..k)
            .map(|i| (i..k).map(|j| a[j - i] * x[j]).sum())
            .collect()
    };
    let apply_adj = |y: &[Complex64]| -> Vec<Complex64> {
        (0..k)
            .map(|j| (0..=j).map(|i| a[j - i].conj() * y[i]).sum())
            .collect()
    };
    // deterministic start with no special alignment to any singular vector
    let mut x: Vec<Complex64> = (0..k)
        .map(|j| Complex64::from_polar(1.0, 0.7 * j as f64 + 0.3 * (j * j) as f64))
        .collect();
    let mut sigma = 0.0;
    for _ in 0..iters {
        let nx = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if nx == 0.0 {
            return 0.0;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let y = apply(&x);
        sigma = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        x = apply_adj(&y);
    }
    sigma
}
