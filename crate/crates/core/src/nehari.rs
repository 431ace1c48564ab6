//! Hankel operators of trigonometric polynomials in the D-slice ordering.
//!
//! Writing `φ(z, λ₁z, …, λ_{n-1}z) = Σ_j φ_j(λ) z^j`, the Hankel operator
//! `H_φ` (compression of `M_φ` from the levels `≥ 0` to the levels `< 0`) is
//! a block Hankel matrix whose `(i, j)` block is multiplication by
//! `φ_{-(i+j-1)}`. Its norm is the supremum over `λ` of the norm of the
//! scalar Hankel matrix of slice values, and equals the sup-norm distance
//! from `φ` to the analytic polynomials.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::completion::DEFAULT_TOL;
use crate::error::{Error, Result};
use crate::opnorm::{op_norm, DenseMatrix};
use crate::polyalg::{grid_max, GridMax, MultiIndex, NPoly, TorusGrid, TrigPoly};
use crate::slicing::slices;

/// The negative slices `φ_{-1}, φ_{-2}, …` of a symbol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HankelFamily {
    n: usize,
    /// Keyed by the (negative) level.
    slices: BTreeMap<i64, TrigPoly>,
}

impl HankelFamily {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slices(&self) -> &BTreeMap<i64, TrigPoly> {
        &self.slices
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Number of block rows carrying a nonzero entry.
    pub fn depth(&self) -> usize {
        self.slices.keys().next().map_or(0, |&k| (-k) as usize)
    }

    /// `φ_{-k}` for `k ≥ 1` (zero when absent).
    pub fn slice(&self, k: usize) -> TrigPoly {
        self.slices
            .get(&-(k as i64))
            .cloned()
            .unwrap_or_else(|| TrigPoly::zero(self.n.saturating_sub(1)))
    }
}

/// Collects the nonzero slices of `φ` at negative levels.
pub fn hankel_build(phi: &TrigPoly) -> HankelFamily {
    HankelFamily {
        n: phi.nvars(),
        slices: slices(phi).into_iter().filter(|(k, _)| *k < 0).collect(),
    }
}

/// Scalar Hankel matrix `[v_{i+j+1}]` (0-based `i, j`) of depth `v.len()`,
/// where `v[k]` is the value of `φ_{-(k+1)}`.
pub fn hankel_matrix(v: &[Complex64]) -> DenseMatrix {
    let d = v.len();
    let zero = Complex64::new(0.0, 0.0);
    DenseMatrix::from_fn(d, d, |i, j| v.get(i + j).copied().unwrap_or(zero))
}

/// `sup_λ ‖[φ_{-(i+j-1)}(λ)]‖`. The matrix is cut at the deepest nonzero
/// slice, beyond which all rows and columns vanish.
pub fn hankel_norm(fam: &HankelFamily, grid: &TorusGrid) -> GridMax {
    let depth = fam.depth();
    let m = fam.n.saturating_sub(1);
    if depth == 0 {
        return GridMax {
            value: 0.0,
            argmax: vec![0.0; m],
            points_per_axis: 0,
            converged: true,
        };
    }
    let symbols: Vec<TrigPoly> = (1..=depth).map(|k| fam.slice(k)).collect();
    let refs: Vec<&TrigPoly> = symbols.iter().collect();
    grid_max(grid, m, &refs, |v| op_norm(&hankel_matrix(v)))
}

/// Sup-norm distance from `φ` to the analytic trigonometric polynomials,
/// computed as `‖H_φ‖`.
pub fn nehari_distance(phi: &TrigPoly, grid: &TorusGrid) -> GridMax {
    hankel_norm(&hankel_build(phi), grid)
}

/// Norm of the `size × size` section `[φ_{i-j}(λ)]` of the bi-infinite
/// Toeplitz matrix of `M_φ` in the D-slice ordering, maximized over `λ`.
/// Increases towards `sup |φ|` as `size` grows.
pub fn laurent_section_norm(phi: &TrigPoly, size: usize, grid: &TorusGrid) -> GridMax {
    let by_level = slices(phi);
    let m = phi.nvars().saturating_sub(1);
    let (lo, hi) = match (by_level.keys().next(), by_level.keys().next_back()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => {
            return GridMax {
                value: 0.0,
                argmax: vec![0.0; m],
                points_per_axis: 0,
                converged: true,
            }
        }
    };
    let symbols: Vec<TrigPoly> = (lo..=hi)
        .map(|j| by_level.get(&j).cloned().unwrap_or_else(|| TrigPoly::zero(m)))
        .collect();
    let refs: Vec<&TrigPoly> = symbols.iter().collect();
    let zero = Complex64::new(0.0, 0.0);
    grid_max(grid, m, &refs, |v| {
        let mat = DenseMatrix::from_fn(size, size, |i, j| {
            let level = i as i64 - j as i64;
            if level < lo || level > hi {
                zero
            } else {
                v[(level - lo) as usize]
            }
        });
        op_norm(&mat)
    })
}

/// Necessary condition for extending a two-variable quadratic: the Hankel
/// operator of `z̄₁³·p` must be a contraction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgeReport {
    pub pass: bool,
    pub norm: f64,
}

/// Builds `φ = z̄₁³·p` for a two-variable polynomial of degree at most two
/// and tests `‖H_φ‖ ≤ 1 + tol`.
pub fn cf_bridge_necessary(p: &NPoly, grid: &TorusGrid) -> Result<BridgeReport> {
    if p.nvars() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.nvars(),
        });
    }
    if p.degree() > 2 {
        return Err(Error::Precondition(format!(
            "degree {} exceeds 2",
            p.degree()
        )));
    }
    let shift = TrigPoly::monomial(MultiIndex::from([-3, 0]), Complex64::new(1.0, 0.0));
    let phi = &shift * p.as_trig();
    let norm = nehari_distance(&phi, grid).value;
    Ok(BridgeReport {
        pass: norm <= 1.0 + DEFAULT_TOL,
        norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::sup_norm;
    use crate::slicing::{dslice_compare, slice_decompose, DSliceKey};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn quadratic(a: [Complex64; 5]) -> NPoly {
        NPoly::from_terms(
            2,
            [[1, 0], [0, 1], [2, 0], [1, 1], [0, 2]]
                .into_iter()
                .zip(a)
                .map(|(e, x)| (MultiIndex::from(e), x)),
        )
        .unwrap()
    }

    fn random_trig(rng: &mut ChaCha8Rng, nvars: usize, band: i32, terms: usize) -> TrigPoly {
        TrigPoly::from_terms(
            nvars,
            (0..terms).map(|_| {
                let e: Vec<i32> = (0..nvars).map(|_| rng.gen_range(-band..=band)).collect();
                (MultiIndex::new(e), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            }),
        )
        .unwrap()
    }

    #[test]
    fn build_examples() {
        let analytic = TrigPoly::from_terms(2, [(MultiIndex::from([1, 2]), c(1.0, 0.0)), (MultiIndex::from([0, 0]), c(0.5, 0.0))]).unwrap();
        assert!(hankel_build(&analytic).is_empty());

        let zbar = TrigPoly::monomial([-1], c(1.0, 0.0));
        let fam = hankel_build(&zbar);
        assert_eq!(fam.depth(), 1);
        assert_eq!(fam.slice(1), TrigPoly::constant(0, c(1.0, 0.0)));

        let a = [c(0.1, 0.0), c(0.2, 0.1), c(-0.3, 0.0), c(0.0, 0.4), c(0.5, -0.5)];
        let p = quadratic(a);
        let phi = &TrigPoly::monomial([-3, 0], c(1.0, 0.0)) * p.as_trig();
        let fam = hankel_build(&phi);
        assert_eq!(fam.depth(), 2);
        let p1 = TrigPoly::from_terms(1, [(MultiIndex::from([0]), a[0]), (MultiIndex::from([1]), a[1])]).unwrap();
        assert_eq!(fam.slice(2), p1);
    }

    #[test]
    fn norm_examples() {
        let grid = TorusGrid::default();
        assert_eq!(nehari_distance(&TrigPoly::zero(2), &grid).value, 0.0);
        assert_relative_eq!(nehari_distance(&TrigPoly::monomial([-1], c(1.0, 0.0)), &grid).value, 1.0);

        let k = c(0.3, -0.1);
        let p = quadratic([k, c(0.0, 0.0), k, c(0.0, 0.0), c(0.0, 0.0)]);
        let phi = &TrigPoly::monomial([-3, 0], c(1.0, 0.0)) * p.as_trig();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert_relative_eq!(nehari_distance(&phi, &grid).value, k.norm() * golden, epsilon = 1e-12);
    }

    #[test]
    fn analytic_perturbation_is_invisible() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let phi = random_trig(&mut rng, 2, 3, 8);
            let g = random_trig(&mut rng, 2, 3, 8);
            let g_analytic = TrigPoly::from_terms(
                2,
                g.terms().map(|(a, x)| (MultiIndex::new(a.entries().iter().map(|e| e.abs()).collect()), *x)),
            )
            .unwrap();
            assert_eq!(hankel_build(&(&phi + &g_analytic)), hankel_build(&phi));
        }
    }

    #[test]
    fn hankel_norm_below_sup_norm() {
        let grid = TorusGrid::default();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..10 {
            let phi = random_trig(&mut rng, 2, 2, 6);
            assert!(nehari_distance(&phi, &grid).value <= sup_norm(&phi, &grid).value * (1.0 + 1e-9));
        }
    }

    #[test]
    fn laurent_section_approaches_sup_norm() {
        let grid = TorusGrid::default();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..5 {
            let phi = random_trig(&mut rng, 2, 2, 6);
            let span = slices(&phi).len();
            let sup = sup_norm(&phi, &grid).value;
            let small = laurent_section_norm(&phi, 4 * span, &grid).value;
            let big = laurent_section_norm(&phi, 16 * span, &grid).value;
            assert!(small <= big + 1e-12);
            assert!(big <= sup * (1.0 + 1e-9));
            assert!((sup - big) / sup < 0.01, "sup {sup} section {big}");
        }
    }

    #[test]
    fn bridge_examples() {
        let grid = TorusGrid::default();
        let r = cf_bridge_necessary(&NPoly::zero(2), &grid).unwrap();
        assert!(r.pass);
        assert_eq!(r.norm, 0.0);

        let z = c(0.0, 0.0);
        let counter = quadratic([c(0.5f64.sqrt(), 0.0), z, z, z, c(0.5, 0.0)]);
        let r = cf_bridge_necessary(&counter, &grid).unwrap();
        assert!(r.pass, "norm {}", r.norm);

        let big = quadratic([c(5.0, 0.0), z, z, z, c(2.5, 0.0)]);
        assert!(!cf_bridge_necessary(&big, &grid).unwrap().pass);

        assert!(cf_bridge_necessary(&NPoly::zero(3), &grid).is_err());
        let cubic = NPoly::from_terms(2, [(MultiIndex::from([3, 0]), c(0.1, 0.0))]).unwrap();
        assert!(cf_bridge_necessary(&cubic, &grid).is_err());
    }

    #[test]
    fn dslice_order_gives_block_laurent_structure() {
        // ⟨M_φ e_y, e_x⟩ = coefficient of φ at x − y; grouped by level this is
        // the slice φ_{l−m} acting between slices P_m and P_l
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let phi = random_trig(&mut rng, 2, 2, 10);
        let mut pts: Vec<MultiIndex> = (-3..=3)
            .flat_map(|a| (-3..=3).map(move |b| MultiIndex::from([a, b])))
            .collect();
        pts.sort_by(|x, y| dslice_compare(x, y).unwrap());
        assert!(pts.windows(2).all(|w| DSliceKey::new(w[0].clone()) < DSliceKey::new(w[1].clone())));
        for x in &pts {
            for y in &pts {
                let entry = phi.coeff(&x.minus(y));
                let (l, m) = (x.total(), y.total());
                let slice = slice_decompose(&phi, l - m);
                let shift = (l - x.entries()[0] as i64) - (m - y.entries()[0] as i64);
                assert_eq!(entry, slice.coeff(&MultiIndex::from([shift as i32])));
            }
        }
    }
}
