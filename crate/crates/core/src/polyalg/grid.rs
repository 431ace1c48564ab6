//! Uniform torus grids: FFT evaluation, supremum sweeps and coefficient
//! recovery.
//!
//! Grid point `k = (k_1, …, k_m)` is `λ_j = exp(2πi k_j / N)`. Points are
//! stored row-major with the first axis slowest.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{MultiIndex, TrigPoly};
use crate::error::{Error, Result};

/// Discretization of 𝕋ᵐ used for every supremum over the torus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusGrid {
    pub points_per_axis: usize,
    pub refinement_factor: usize,
    pub rel_tol: f64,
}

impl Default for TorusGrid {
    fn default() -> Self {
        TorusGrid {
            points_per_axis: 128,
            refinement_factor: 2,
            rel_tol: 1e-4,
        }
    }
}

impl TorusGrid {
    pub fn new(points_per_axis: usize, refinement_factor: usize, rel_tol: f64) -> Result<Self> {
        if points_per_axis == 0 {
            return Err(Error::InvalidGrid("points_per_axis must be positive".into()));
        }
        if refinement_factor < 2 {
            return Err(Error::InvalidGrid("refinement_factor must be at least 2".into()));
        }
        if !(rel_tol > 0.0) {
            return Err(Error::InvalidGrid("rel_tol must be positive".into()));
        }
        Ok(TorusGrid {
            points_per_axis,
            refinement_factor,
            rel_tol,
        })
    }

    pub fn with_points(points_per_axis: usize) -> Self {
        TorusGrid {
            points_per_axis,
            ..TorusGrid::default()
        }
    }

    /// Points per axis actually used for symbols of the given bandwidth:
    /// at least 64 and at least eight samples per unit of bandwidth.
    pub fn points_for(&self, bandwidth: usize) -> usize {
        self.points_per_axis.max(64).max(8 * bandwidth)
    }
}

/// Samples of a function on the uniform grid of 𝕋ᵐ.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSamples {
    pub nvars: usize,
    pub points_per_axis: usize,
    pub values: Vec<Complex64>,
}

impl GridSamples {
    /// Samples `f` at every grid point; `f` receives the point coordinates.
    pub fn from_fn<F>(nvars: usize, points_per_axis: usize, f: F) -> Self
    where
        F: Fn(&[Complex64]) -> Complex64 + Sync,
    {
        let total = num_points(nvars, points_per_axis);
        let values = (0..total)
            .into_par_iter()
            .map_init(
                || vec![Complex64::new(0.0, 0.0); nvars],
                |buf, idx| {
                    point_coords(idx, nvars, points_per_axis, buf);
                    f(buf)
                },
            )
            .collect();
        GridSamples {
            nvars,
            points_per_axis,
            values,
        }
    }
}

fn num_points(nvars: usize, n: usize) -> usize {
    n.checked_pow(nvars as u32).expect("torus grid too large")
}

fn point_angles(mut idx: usize, nvars: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; nvars];
    for j in (0..nvars).rev() {
        out[j] = 2.0 * PI * (idx % n) as f64 / n as f64;
        idx /= n;
    }
    out
}

fn point_coords(mut idx: usize, nvars: usize, n: usize, out: &mut [Complex64]) {
    for j in (0..nvars).rev() {
        out[j] = Complex64::from_polar(1.0, 2.0 * PI * (idx % n) as f64 / n as f64);
        idx /= n;
    }
}

fn fft_nd(data: &mut [Complex64], nvars: usize, n: usize, inverse: bool) {
    if nvars == 0 {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..nvars {
        let stride = n.pow((nvars - 1 - axis) as u32);
        let block = stride * n;
        for outer in (0..data.len()).step_by(block) {
            for inner in 0..stride {
                for (k, b) in buf.iter_mut().enumerate() {
                    *b = data[outer + inner + k * stride];
                }
                fft.process(&mut buf);
                for (k, b) in buf.iter().enumerate() {
                    data[outer + inner + k * stride] = *b;
                }
            }
        }
    }
}

impl TrigPoly {
    /// Values at all points of the `points_per_axis`ᵐ grid. Exponents are
    /// reduced modulo the grid size before the inverse FFT, which is exact
    /// at the grid points for any bandwidth.
    pub fn grid_values(&self, points_per_axis: usize) -> GridSamples {
        let m = self.nvars();
        let n = points_per_axis;
        let mut data = vec![Complex64::new(0.0, 0.0); num_points(m, n)];
        for (alpha, c) in self.terms() {
            let mut idx = 0usize;
            for &e in alpha.entries() {
                idx = idx * n + e.rem_euclid(n as i32) as usize;
            }
            data[idx] += c;
        }
        fft_nd(&mut data, m, n, true);
        GridSamples {
            nvars: m,
            points_per_axis: n,
            values: data,
        }
    }
}

/// Recovers Fourier coefficients from grid samples.
///
/// All frequencies of the centred range `[-N/2, N/2)` are returned, so content
/// outside `max_band` stays visible to the caller. Coefficients of modulus at
/// most `threshold` × (largest modulus) are dropped.
pub fn recover_coeffs(samples: &GridSamples, max_band: usize, threshold: f64) -> Result<TrigPoly> {
    let m = samples.nvars;
    let n = samples.points_per_axis;
    if m > 0 && n < 2 * max_band + 1 {
        return Err(Error::GridTooSmall {
            points: n,
            band: max_band,
        });
    }
    if samples.values.len() != num_points(m, n) {
        return Err(Error::Shape(format!(
            "expected {} samples, found {}",
            num_points(m, n),
            samples.values.len()
        )));
    }
    let mut data = samples.values.clone();
    fft_nd(&mut data, m, n, false);
    let scale = 1.0 / num_points(m, n) as f64;
    let max_mod = data.iter().map(|c| c.norm() * scale).fold(0.0, f64::max);
    let cut = threshold * max_mod;
    let mut terms = Vec::new();
    for (idx, c) in data.iter().enumerate() {
        let c = c * scale;
        if c.norm() <= cut {
            continue;
        }
        let mut alpha = vec![0i32; m];
        let mut rest = idx;
        for j in (0..m).rev() {
            let k = (rest % n) as i32;
            alpha[j] = if k >= (n as i32 + 1) / 2 { k - n as i32 } else { k };
            rest /= n;
        }
        terms.push((MultiIndex::new(alpha), c));
    }
    TrigPoly::from_terms(m, terms)
}

/// Outcome of a refined supremum sweep over the torus.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridMax {
    /// Largest value seen on the finest grid swept.
    pub value: f64,
    /// Angles θ_j of the maximizing point.
    pub argmax: Vec<f64>,
    /// Points per axis of the last pass.
    pub points_per_axis: usize,
    /// Whether the last two passes agreed within `rel_tol`.
    pub converged: bool,
}

impl GridMax {
    /// The maximizing torus point.
    pub fn argmax_point(&self) -> Vec<Complex64> {
        self.argmax
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect()
    }
}

/// Coarse points whose neighbourhoods the refined passes revisit: those
/// within `CANDIDATE_BAND` (relative) of the maximum, at most `MAX_CANDIDATES`.
const CANDIDATE_BAND: f64 = 0.05;
const MAX_CANDIDATES: usize = 64;

/// Best (value, index) pair; ties resolve to the smaller index so results are
/// deterministic.
fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) || a.0.is_nan() {
        b
    } else {
        a
    }
}

/// Values of `f` at every point of the `n`-point grid, via FFT tables.
fn sweep_full<F>(nvars: usize, n: usize, symbols: &[&TrigPoly], f: &F) -> Vec<f64>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    let tables: Vec<GridSamples> = symbols.iter().map(|s| s.grid_values(n)).collect();
    (0..num_points(nvars, n))
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(tables.len()),
            |buf: &mut Vec<Complex64>, idx| {
                buf.clear();
                buf.extend(tables.iter().map(|t| t.values[idx]));
                f(buf)
            },
        )
        .collect()
}

/// Indices of the best points, best first.
fn candidates(points: &[(f64, usize)]) -> Vec<usize> {
    let top = points.iter().copied().fold((f64::NEG_INFINITY, usize::MAX), better).0;
    let mut near: Vec<(f64, usize)> = points
        .iter()
        .copied()
        .filter(|p| p.0 >= top - CANDIDATE_BAND * top.abs())
        .collect();
    near.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    near.truncate(MAX_CANDIDATES);
    near.into_iter().map(|p| p.1).collect()
}

/// Sweeps the `fine`-point grid within `radius` fine steps (per axis) of each
/// centre, where centres are indices on the `fine`-point grid.
fn sweep_local<F>(nvars: usize, fine: usize, centres: &[usize], radius: usize, symbols: &[&TrigPoly], f: &F) -> Vec<(f64, usize)>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    let width = 2 * radius + 1;
    let mut idxs: Vec<usize> = Vec::new();
    for &c in centres {
        let mut axes = vec![0usize; nvars];
        let mut rest = c;
        for j in (0..nvars).rev() {
            axes[j] = rest % fine;
            rest /= fine;
        }
        for offset in 0..num_points(nvars, width) {
            let mut o = offset;
            let mut idx = 0usize;
            for &a in &axes {
                let step = (o % width) as isize - radius as isize;
                o /= width;
                idx = idx * fine + (a as isize + step).rem_euclid(fine as isize) as usize;
            }
            idxs.push(idx);
        }
    }
    idxs.sort_unstable();
    idxs.dedup();
    idxs.into_par_iter()
        .map_init(
            || (vec![Complex64::new(0.0, 0.0); nvars], Vec::with_capacity(symbols.len())),
            |(pt, vals), idx| {
                point_coords(idx, nvars, fine, pt);
                vals.clear();
                vals.extend(symbols.iter().map(|s| s.eval(pt).expect("point matches symbol variables")));
                (f(vals), idx)
            },
        )
        .collect()
}

/// Maximizes `f(symbol values)` over the torus grid.
///
/// `f` receives the values of `symbols` (in order) at one grid point. The
/// sweep covers the whole coarse grid, then the grid refined by
/// `refinement_factor` in one coarse cell around each near-maximal coarse
/// point; if the two maxima differ by more than `rel_tol` relatively, one more
/// local refinement is made. Every pass contains the best point of the one
/// before, so the reported value never decreases between passes and is a
/// lower bound for the supremum over the whole torus.
pub fn grid_max<F>(grid: &TorusGrid, nvars: usize, symbols: &[&TrigPoly], f: F) -> GridMax
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    if nvars == 0 {
        let vals: Vec<Complex64> = symbols
            .iter()
            .map(|s| s.coeff(&MultiIndex::zeros(0)))
            .collect();
        return GridMax {
            value: f(&vals),
            argmax: Vec::new(),
            points_per_axis: 1,
            converged: true,
        };
    }
    let bw = symbols.iter().map(|s| s.bandwidth()).max().unwrap_or(0);
    let agree = |a: f64, b: f64| (a - b).abs() <= grid.rel_tol * a.abs().max(b.abs());
    let r = grid.refinement_factor;
    let fold = |pts: &[(f64, usize)]| pts.iter().copied().fold((f64::NEG_INFINITY, usize::MAX), better);

    let mut n = grid.points_for(bw);
    let mut points: Vec<(f64, usize)> = sweep_full(nvars, n, symbols, &f)
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let (mut prev, _) = fold(&points);
    let mut converged = false;
    let mut best = (prev, 0);
    for pass in 0..2 {
        let centres: Vec<usize> = candidates(&points)
            .into_iter()
            .map(|c| scale_index(c, nvars, n, r))
            .collect();
        n *= r;
        points = sweep_local(nvars, n, &centres, r, symbols, &f);
        best = fold(&points);
        converged = agree(prev, best.0);
        if converged || pass == 1 {
            break;
        }
        prev = best.0;
    }
    GridMax {
        value: best.0,
        argmax: point_angles(best.1, nvars, n),
        points_per_axis: n,
        converged,
    }
}

/// Index of the same torus point on the grid refined by `factor`.
fn scale_index(mut idx: usize, nvars: usize, n: usize, factor: usize) -> usize {
    let mut axes = vec![0usize; nvars];
    for j in (0..nvars).rev() {
        axes[j] = idx % n;
        idx /= n;
    }
    axes.iter().fold(0, |acc, &a| acc * n * factor + a * factor)
}

/// Supremum of |q| over the torus grid; a lower bound of ‖q‖_∞.
pub fn sup_norm(q: &TrigPoly, grid: &TorusGrid) -> GridMax {
    grid_max(grid, q.nvars(), &[q], |v| v[0].norm())
}
