//! Carathéodory–Fejér extension on the polydisc.
//!
//! A polynomial `p` on 𝔻ⁿ with `p(0) = 0` extends to a holomorphic self-map
//! of the closed disc only if the block Toeplitz matrix of its symbols is a
//! contraction ([`necessary_condition`]). The extension algorithm then adds
//! one symbol at a time: the next symbol must complete the Toeplitz matrix
//! contractively (a Parrott problem at each torus point) and must itself be
//! a polynomial in the admissible monomial space. The solver follows the
//! central completion only; when that completion leaves the admissible
//! space the run stops with [`RunStatus::FailedDegree`], which is a proof of
//! non-extendibility only if the completion was forced at every point.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::completion::{
    dmp_pointwise, parrott_factors, toeplitz_extension_blocks, DmpReport, ParrottProblem, DEFAULT_TOL,
};
use crate::error::{Error, Result};
use crate::opnorm::{op_norm, toeplitz_norm, upper_toeplitz, ToeplitzFamily};
use crate::polyalg::{recover_coeffs, sup_norm, GridSamples, MultiIndex, NPoly, TorusGrid, TrigPoly};
use crate::slicing::{in_admissible_space, reformulate, SymbolFamily};

/// Recovered coefficients below this fraction of the largest one are noise.
pub const DEGREE_REL_THRESHOLD: f64 = 1e-8;
/// Recovered coefficients below this modulus are noise regardless of scale.
pub const DEGREE_ABS_FLOOR: f64 = 1e-12;
/// A square-root factor of norm at most this counts as vanishing.
pub const UNIQUE_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ORDER: usize = 12;

/// A polynomial together with its symbol family and the grid used for all
/// suprema.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CfInstance {
    p: NPoly,
    family: SymbolFamily,
    grid: TorusGrid,
    tol: f64,
}

impl CfInstance {
    pub fn new(p: NPoly, grid: TorusGrid) -> Result<Self> {
        let family = reformulate(&p)?;
        Ok(CfInstance {
            p,
            family,
            grid,
            tol: DEFAULT_TOL,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn p(&self) -> &NPoly {
        &self.p
    }

    pub fn family(&self) -> &SymbolFamily {
        &self.family
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

/// Result of the necessary condition `‖𝒯(p₁, …, p_d)‖ ≤ 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NecessaryReport {
    pub pass: bool,
    pub norm: f64,
    /// `1 − norm`.
    pub margin: f64,
    /// Pointwise `|p₁|² + |p₂| ≤ 1` check, for two variables and degree two.
    pub dmp: Option<DmpReport>,
    /// Whether the two tests agree, when both were run.
    pub agree: Option<bool>,
}

/// Checks that the block Toeplitz matrix of the instance's symbols is a
/// contraction. For two variables and degree two the equivalent pointwise
/// test is run as well.
pub fn necessary_condition(inst: &CfInstance) -> Result<NecessaryReport> {
    let fam = ToeplitzFamily::try_from(&inst.family)?;
    let norm = toeplitz_norm(&fam, &inst.grid).value;
    let pass = norm <= 1.0 + inst.tol;
    let dmp = if inst.family.n() == 2 && inst.family.len() == 2 {
        Some(dmp_pointwise(inst.family.symbol(1), inst.family.symbol(2), &inst.grid)?)
    } else {
        None
    };
    let agree = dmp.as_ref().map(|d| d.pass == pass);
    Ok(NecessaryReport {
        pass,
        norm,
        margin: 1.0 - norm,
        dmp,
        agree,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RunStatus {
    Running,
    /// Symbols through `order` were constructed.
    Extended { order: usize },
    /// The Toeplitz matrix through `step` has norm above `1 + tol`.
    FailedNorm { step: usize, norm: f64 },
    /// The central completion for symbol `step` has monomials outside the
    /// admissible space. `definitive` is set when the completion was unique
    /// at every grid point, so no other choice could have succeeded.
    FailedDegree {
        step: usize,
        offending: Vec<MultiIndex>,
        definitive: bool,
    },
}

/// Norm of the Toeplitz matrix after a symbol was accepted.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub order: usize,
    pub norm: f64,
    pub margin: f64,
    /// Whether the completion was forced at every grid point.
    pub unique: bool,
}

/// Transcript of an extension run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtensionRun {
    pub n: usize,
    pub symbols: Vec<TrigPoly>,
    pub status: RunStatus,
    pub steps: Vec<StepRecord>,
    /// The central completion that was rejected, if any.
    pub rejected: Option<TrigPoly>,
    grid: TorusGrid,
    tol: f64,
}

impl ExtensionRun {
    /// A run positioned after the instance's own symbols.
    pub fn start(inst: &CfInstance) -> Self {
        ExtensionRun {
            n: inst.family.n(),
            symbols: inst.family.symbols().to_vec(),
            status: RunStatus::Running,
            steps: Vec::new(),
            rejected: None,
            grid: inst.grid,
            tol: inst.tol,
        }
    }

    pub fn order(&self) -> usize {
        self.symbols.len()
    }

    /// The accepted symbols as a family (valid by construction).
    pub fn family(&self) -> Result<SymbolFamily> {
        SymbolFamily::new(self.n, self.symbols.clone())
    }

    fn toeplitz(&self) -> Result<ToeplitzFamily> {
        if self.symbols.is_empty() {
            return ToeplitzFamily::new(vec![TrigPoly::zero(self.n - 1)]);
        }
        ToeplitzFamily::new(self.symbols.clone())
    }
}

fn central_completion_at(vals: &[Complex64], tol: f64) -> Result<(Complex64, bool)> {
    let (a, c, d) = toeplitz_extension_blocks(vals);
    let prob = ParrottProblem::new(a, c, d, tol)?;
    let sol = parrott_factors(&prob)?;
    Ok((sol.central_x[(0, 0)], sol.is_unique(UNIQUE_TOL)))
}

/// Adds one symbol by the central completion; a no-op unless the run is
/// [`RunStatus::Running`].
pub fn extend_step(run: &mut ExtensionRun) -> Result<()> {
    if run.status != RunStatus::Running {
        return Ok(());
    }
    let k = run.symbols.len();
    let m = run.n - 1;
    let max_degree = m * (k + 1);
    let band = run
        .symbols
        .iter()
        .map(TrigPoly::bandwidth)
        .max()
        .unwrap_or(0)
        .max(max_degree);
    let npts = run.grid.points_for(band);
    let tables: Vec<GridSamples> = run.symbols.iter().map(|s| s.grid_values(npts)).collect();
    let total = npts.pow(m as u32);
    let tol = run.tol;

    let pointwise: Result<Vec<(Complex64, bool)>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let vals: Vec<Complex64> = tables.iter().map(|t| t.values[idx]).collect();
            central_completion_at(&vals, tol)
        })
        .collect();
    let pointwise = match pointwise {
        Ok(v) => v,
        Err(_) => {
            let norm = toeplitz_norm(&run.toeplitz()?, &run.grid).value;
            run.status = RunStatus::FailedNorm { step: k, norm };
            return Ok(());
        }
    };
    let unique = pointwise.iter().all(|&(_, u)| u);
    let samples = GridSamples {
        nvars: m,
        points_per_axis: npts,
        values: pointwise.into_iter().map(|(x, _)| x).collect(),
    };
    let raw = recover_coeffs(&samples, (npts - 1) / 2, 1e-14)?;

    let cut = (DEGREE_REL_THRESHOLD * raw.max_abs_coeff()).max(DEGREE_ABS_FLOOR);
    let significant: Vec<(MultiIndex, Complex64)> = raw
        .terms()
        .filter(|(_, c)| c.norm() > cut)
        .map(|(a, c)| (a.clone(), *c))
        .collect();
    let offending: Vec<MultiIndex> = significant
        .iter()
        .filter(|(a, _)| !in_admissible_space(a, k + 1))
        .map(|(a, _)| a.clone())
        .collect();
    if !offending.is_empty() {
        run.rejected = Some(raw);
        run.status = RunStatus::FailedDegree {
            step: k + 1,
            offending,
            definitive: unique,
        };
        return Ok(());
    }

    run.symbols.push(TrigPoly::from_terms(m, significant)?);
    let norm = toeplitz_norm(&run.toeplitz()?, &run.grid).value;
    run.steps.push(StepRecord {
        order: k + 1,
        norm,
        margin: 1.0 - norm,
        unique,
    });
    if norm > 1.0 + tol {
        run.status = RunStatus::FailedNorm { step: k + 1, norm };
    }
    Ok(())
}

/// Checks the necessary condition, then extends by central completions up
/// to `max_order` symbols.
pub fn cf_extend(inst: &CfInstance, max_order: usize) -> ExtensionRun {
    let mut run = ExtensionRun::start(inst);
    let nec = match necessary_condition(inst) {
        Ok(r) => r,
        Err(_) => {
            run.status = RunStatus::FailedNorm {
                step: run.order(),
                norm: f64::NAN,
            };
            return run;
        }
    };
    if !nec.pass {
        run.status = RunStatus::FailedNorm {
            step: run.order(),
            norm: nec.norm,
        };
        return run;
    }
    while run.order() < max_order && run.status == RunStatus::Running {
        if extend_step(&mut run).is_err() {
            let norm = run
                .toeplitz()
                .map(|t| toeplitz_norm(&t, &run.grid).value)
                .unwrap_or(f64::NAN);
            run.status = RunStatus::FailedNorm {
                step: run.order() + 1,
                norm,
            };
        }
    }
    if run.status == RunStatus::Running {
        run.status = RunStatus::Extended { order: run.order() };
    }
    run
}

/// Extends scalar coefficients `a_1, …, a_d` with `‖A_d‖ ≤ 1` to length `len`
/// keeping every upper-triangular Toeplitz section a contraction.
pub fn cf_one_var(a: &[Complex64], len: usize) -> Result<Vec<Complex64>> {
    let norm = op_norm(&upper_toeplitz(a, a.len()));
    if norm > 1.0 + DEFAULT_TOL {
        return Err(Error::NotContraction {
            what: "Toeplitz matrix of the given coefficients",
            norm,
        });
    }
    let mut out = a.to_vec();
    while out.len() < len {
        let (x, _) = central_completion_at(&out, DEFAULT_TOL)?;
        out.push(x);
    }
    Ok(out)
}

/// Extends `a` (not all zero) with the Toeplitz norm `ν` of `a` kept:
/// returns `ν · cf_one_var(a/ν, len)` and `ν`.
pub fn nehari_extend_scaled(a: &[Complex64], len: usize) -> Result<(Vec<Complex64>, f64)> {
    let nu = op_norm(&upper_toeplitz(a, a.len()));
    if nu == 0.0 {
        return Err(Error::Precondition("coefficients are all zero".into()));
    }
    let inv = Complex64::new(1.0 / nu, 0.0);
    let scaled: Vec<Complex64> = a.iter().map(|&x| x * inv).collect();
    let ext = cf_one_var(&scaled, len)?;
    Ok((ext.into_iter().map(|x| x * nu).collect(), nu))
}

/// Which construction [`special_case_extend`] used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    /// `p₁ = 0`; the extension is zero.
    ZeroLinearPart,
    /// `β = 0`: extend `1 + αz` in one variable.
    SecondFactorConstant,
    /// `α = 0`: extend `1 + βz` in the second variable.
    FirstFactorZero,
    /// `α, β ≠ 0`: split `1 + αz₁ + βz₂` into two one-variable pieces.
    Split,
}

/// An explicit extension of `p₁ = γ + δz`, `p₂ = (α + βz)(γ + δz)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecialExtension {
    pub case: SpecialCase,
    /// `p_1, …, p_len`.
    pub symbols: Vec<TrigPoly>,
    /// `sup |p₁| · Σν`, an upper bound for the sup norm of the extension.
    pub bound: f64,
    /// Sup-norm targets of the one-variable extensions.
    pub nus: Vec<f64>,
}

fn same_argument_difference(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> bool {
    // arg α − arg β = arg γ − arg δ  ⇔  α·δ·conj(β·γ) is a positive real
    let w = alpha * delta * (beta * gamma).conj();
    w.re > 0.0 && w.im.abs() <= 1e-12 * w.norm()
}

/// Builds the extension for symbol pairs of the factored form
/// `p₂ = (α + βz)·p₁`, `p₁ = γ + δz`, under the hypothesis that
/// `αβγδ = 0` or `arg α − arg β = arg γ − arg δ`, and `|p₁|² + |p₂| ≤ 1`.
///
/// Every later symbol is `p₁` times a one-variable coefficient sequence
/// obtained from norm-preserving extensions of `1 + αz`, `1 + βz`, or of the
/// two halves of `1 + αz₁ + βz₂`.
pub fn special_case_extend(
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    delta: Complex64,
    len: usize,
    grid: &TorusGrid,
) -> Result<SpecialExtension> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let product_zero = alpha == zero || beta == zero || gamma == zero || delta == zero;
    if !product_zero && !same_argument_difference(alpha, beta, gamma, delta) {
        return Err(Error::Precondition(
            "need αβγδ = 0 or arg α − arg β = arg γ − arg δ".into(),
        ));
    }
    let p1 = TrigPoly::from_terms(1, [(MultiIndex::from([0]), gamma), (MultiIndex::from([1]), delta)])?;
    let factor = TrigPoly::from_terms(1, [(MultiIndex::from([0]), alpha), (MultiIndex::from([1]), beta)])?;
    let p2 = &factor * &p1;
    let dmp = dmp_pointwise(&p1, &p2, grid)?;
    if !dmp.pass {
        return Err(Error::Precondition(format!(
            "|p₁|² + |p₂| ≤ 1 fails (margin {:e})",
            dmp.worst_margin
        )));
    }
    if p1.is_zero() {
        return Ok(SpecialExtension {
            case: SpecialCase::ZeroLinearPart,
            symbols: vec![TrigPoly::zero(1); len],
            bound: 0.0,
            nus: Vec::new(),
        });
    }

    // coefficient of the degree-(k+1) symbol as a polynomial multiplying p₁
    let (case, multipliers, nus): (SpecialCase, Vec<TrigPoly>, Vec<f64>) = if beta == zero {
        let (u, nu) = nehari_extend_scaled(&[one, alpha], len)?;
        let mult = u.into_iter().map(|x| TrigPoly::constant(1, x)).collect();
        (SpecialCase::SecondFactorConstant, mult, vec![nu])
    } else if alpha == zero {
        let (v, nu) = nehari_extend_scaled(&[one, beta], len)?;
        let mult = v
            .into_iter()
            .enumerate()
            .map(|(k, x)| TrigPoly::monomial([k as i32], x))
            .collect();
        (SpecialCase::FirstFactorZero, mult, vec![nu])
    } else {
        let ratio = alpha.norm() / beta.norm();
        let a = ratio / (1.0 + ratio);
        let (u, nu1) = nehari_extend_scaled(&[Complex64::new(a, 0.0), alpha], len)?;
        let (v, nu2) = nehari_extend_scaled(&[Complex64::new(1.0 - a, 0.0), beta], len)?;
        let mult = u
            .into_iter()
            .zip(v)
            .enumerate()
            .map(|(k, (x, y))| {
                TrigPoly::from_terms(1, [(MultiIndex::from([0]), x), (MultiIndex::from([k as i32]), y)])
                    .expect("one-variable exponents")
            })
            .collect();
        (SpecialCase::Split, mult, vec![nu1, nu2])
    };
    let symbols = multipliers.iter().map(|q| q * &p1).collect();
    let bound = sup_norm(&p1, grid).value * nus.iter().sum::<f64>();
    if bound > 1.0 + 1e-6 {
        return Err(Error::NotContraction {
            what: "constructed extension",
            norm: bound,
        });
    }
    Ok(SpecialExtension {
        case,
        symbols,
        bound,
        nus,
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

    fn counterexample() -> NPoly {
        NPoly::from_terms(
            2,
            [
                (MultiIndex::from([1, 0]), c(0.5f64.sqrt(), 0.0)),
                (MultiIndex::from([0, 2]), c(0.5, 0.0)),
            ],
        )
        .unwrap()
    }

    fn one_var(a: &[Complex64]) -> NPoly {
        NPoly::from_terms(
            1,
            a.iter().enumerate().map(|(k, &x)| (MultiIndex::from([k as i32 + 1]), x)),
        )
        .unwrap()
    }

    fn partial_norms_ok(fam: &[TrigPoly], grid: &TorusGrid, slack: f64) -> bool {
        (1..=fam.len()).all(|k| {
            let t = ToeplitzFamily::new(fam[..k].to_vec()).unwrap();
            toeplitz_norm(&t, grid).value <= 1.0 + slack
        })
    }

    #[test]
    fn necessary_examples() {
        let grid = TorusGrid::default();
        let zero = CfInstance::new(NPoly::zero(2), grid).unwrap();
        let r = necessary_condition(&zero).unwrap();
        assert!(r.pass);
        assert_eq!(r.margin, 1.0);

        let inst = CfInstance::new(counterexample(), grid).unwrap();
        let r = necessary_condition(&inst).unwrap();
        assert!(r.pass);
        assert!(r.margin.abs() <= 1e-8);
        assert_eq!(r.agree, Some(true));

        let two = NPoly::from_terms(2, [(MultiIndex::from([1, 0]), c(2.0, 0.0))]).unwrap();
        let r = necessary_condition(&CfInstance::new(two, grid).unwrap()).unwrap();
        assert!(!r.pass);
        assert_relative_eq!(r.margin, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn instance_rejects_constant_term() {
        let p = NPoly::from_terms(1, [(MultiIndex::from([0]), c(0.1, 0.0))]).unwrap();
        assert!(CfInstance::new(p, TorusGrid::default()).is_err());
    }

    #[test]
    fn counterexample_fails_at_third_step() {
        let inst = CfInstance::new(counterexample(), TorusGrid::default()).unwrap();
        let run = cf_extend(&inst, 6);
        match &run.status {
            RunStatus::FailedDegree {
                step,
                offending,
                definitive,
            } => {
                assert_eq!(*step, 3);
                assert_eq!(offending, &vec![MultiIndex::from([4])]);
                assert!(*definitive);
            }
            other => panic!("unexpected status {other:?}"),
        }
        let cand = run.rejected.as_ref().unwrap();
        let want = -1.0 / (2.0 * 2f64.sqrt());
        assert!((cand.coeff(&MultiIndex::from([4])) - c(want, 0.0)).norm() < 1e-8);
        for e in 0..=3 {
            assert!(cand.coeff(&MultiIndex::from([e])).norm() < 1e-8);
        }
        assert_eq!(run.symbols.len(), 2);
    }

    #[test]
    fn zero_family_extends_by_zeros() {
        let inst = CfInstance::new(NPoly::zero(2), TorusGrid::default()).unwrap();
        let run = cf_extend(&inst, 4);
        assert_eq!(run.status, RunStatus::Extended { order: 4 });
        assert!(run.symbols.iter().all(TrigPoly::is_zero));
    }

    #[test]
    fn linear_polynomial_extends_by_zeros() {
        let p = NPoly::from_terms(2, [(MultiIndex::from([1, 0]), c(0.6, 0.3))]).unwrap();
        let inst = CfInstance::new(p, TorusGrid::default()).unwrap();
        let run = cf_extend(&inst, 5);
        assert_eq!(run.status, RunStatus::Extended { order: 5 });
        assert!(run.symbols[1..].iter().all(TrigPoly::is_zero));
    }

    #[test]
    fn one_variable_forced_step() {
        // a = (1, 0): the only contractive third coefficient is 0
        let inst = CfInstance::new(one_var(&[c(1.0, 0.0)]), TorusGrid::default()).unwrap();
        let mut run = ExtensionRun::start(&inst);
        run.symbols.push(TrigPoly::zero(0));
        extend_step(&mut run).unwrap();
        assert_eq!(run.status, RunStatus::Running);
        let a3 = run.symbols[2].coeff(&MultiIndex::zeros(0));
        assert!(a3.norm() < 1e-12);
        assert!(run.steps[0].norm <= 1.0 + 1e-12);
        // brute force: every other a₃ on a fine grid makes ‖A₃‖ > 1
        for i in -10..=10 {
            for j in -10..=10 {
                if i == 0 && j == 0 {
                    continue;
                }
                let x = c(i as f64 * 0.01, j as f64 * 0.01);
                let m = upper_toeplitz(&[c(1.0, 0.0), c(0.0, 0.0), x], 3);
                assert!(op_norm(&m) > 1.0);
            }
        }
    }

    #[test]
    fn one_variable_random_runs() {
        let grid = TorusGrid::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let a1 = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let a2 = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let nu = op_norm(&upper_toeplitz(&[a1, a2], 2));
            let s = rng.gen_range(0.3..1.0) / nu;
            let inst = CfInstance::new(one_var(&[a1 * s, a2 * s]), grid).unwrap();
            let run = cf_extend(&inst, 20);
            assert_eq!(run.status, RunStatus::Extended { order: 20 });
            let coeffs: Vec<Complex64> = run.symbols.iter().map(|s| s.coeff(&MultiIndex::zeros(0))).collect();
            for k in 1..=20 {
                assert!(op_norm(&upper_toeplitz(&coeffs[..k], k)) <= 1.0 + 1e-8);
            }
        }
    }

    #[test]
    fn cf_one_var_examples() {
        assert_eq!(cf_one_var(&[c(0.0, 0.0); 3], 6).unwrap(), vec![c(0.0, 0.0); 6]);
        let ext = cf_one_var(&[c(1.0, 0.0)], 5).unwrap();
        assert_eq!(ext[0], c(1.0, 0.0));
        assert!(ext[1..].iter().all(|x| x.norm() < 1e-12));
        // any nonzero a₂ after a₁ = 1 breaks contractivity
        let m = upper_toeplitz(&[c(1.0, 0.0), c(1e-3, 0.0)], 2);
        assert!(op_norm(&m) > 1.0);

        let ext = cf_one_var(&[c(0.5, 0.0), c(0.25, 0.0)], 20).unwrap();
        for k in 1..=20 {
            assert!(op_norm(&upper_toeplitz(&ext[..k], k)) <= 1.0 + 1e-8);
        }
        assert!(cf_one_var(&[c(1.1, 0.0)], 3).is_err());
    }

    #[test]
    fn nehari_extend_examples() {
        let (e, nu) = nehari_extend_scaled(&[c(1.0, 0.0), c(0.0, 0.0)], 6).unwrap();
        assert_relative_eq!(nu, 1.0, epsilon = 1e-14);
        assert!(e[1..].iter().all(|x| x.norm() < 1e-12));
        assert!(nehari_extend_scaled(&[c(0.0, 0.0)], 3).is_err());

        let (e, nu) = nehari_extend_scaled(&[c(1.0, 0.0), c(0.5, 0.0)], 80).unwrap();
        assert_relative_eq!(nu, (17f64.sqrt() + 1.0) / 4.0, epsilon = 1e-12);
        let trunc = TrigPoly::from_terms(
            1,
            e.iter().enumerate().map(|(k, &x)| (MultiIndex::from([k as i32]), x)),
        )
        .unwrap();
        let achieved = sup_norm(&trunc, &TorusGrid::with_points(1024)).value;
        assert!(achieved <= nu + 1e-6 && achieved >= nu - 1e-4, "achieved {achieved} nu {nu}");
    }

    #[test]
    fn special_case_trivial() {
        let grid = TorusGrid::default();
        let z = c(0.0, 0.0);
        let ext = special_case_extend(z, z, c(0.4, 0.0), c(0.3, 0.0), 5, &grid).unwrap();
        assert_eq!(ext.case, SpecialCase::SecondFactorConstant);
        assert_eq!(ext.symbols[0], TrigPoly::from_terms(1, [(MultiIndex::from([0]), c(0.4, 0.0)), (MultiIndex::from([1]), c(0.3, 0.0))]).unwrap());
        assert!(ext.symbols[1..].iter().all(|s| s.max_abs_coeff() < 1e-12));
        assert_relative_eq!(ext.bound, 0.7, epsilon = 1e-6);

        let ext = special_case_extend(c(0.2, 0.0), c(0.1, 0.0), z, z, 5, &grid).unwrap();
        assert_eq!(ext.case, SpecialCase::ZeroLinearPart);
        assert!(ext.symbols.iter().all(TrigPoly::is_zero));
    }

    #[test]
    fn special_case_scalar_case_one() {
        let grid = TorusGrid::default();
        let z = c(0.0, 0.0);
        let ext = special_case_extend(c(0.25, 0.0), z, c(0.5, 0.0), z, 12, &grid).unwrap();
        assert!(partial_norms_ok(&ext.symbols, &grid, 1e-9));
        assert!(ext.bound <= 1.0);
    }

    #[test]
    fn special_case_split_and_second_variable() {
        let grid = TorusGrid::default();
        // arg α − arg β = arg γ − arg δ = 0, scaled inside the pointwise condition
        let ext = special_case_extend(c(0.3, 0.0), c(0.2, 0.0), c(0.3, 0.0), c(0.3, 0.0), 12, &grid).unwrap();
        assert_eq!(ext.case, SpecialCase::Split);
        assert!(partial_norms_ok(&ext.symbols, &grid, 1e-6));
        let ext = special_case_extend(c(0.0, 0.0), c(0.0, 0.5), c(0.2, 0.1), c(0.3, 0.0), 12, &grid).unwrap();
        assert_eq!(ext.case, SpecialCase::FirstFactorZero);
        assert!(partial_norms_ok(&ext.symbols, &grid, 1e-6));
        // the second symbol reproduces the input factorization
        let p1 = &ext.symbols[0];
        let want = &TrigPoly::monomial([1], c(0.0, 0.5)) * p1;
        assert!((&ext.symbols[1] - &want).max_abs_coeff() < 1e-12);
    }

    #[test]
    fn special_case_rejections() {
        let grid = TorusGrid::default();
        // arguments differ
        let r = special_case_extend(c(0.1, 0.0), c(0.0, 0.1), c(0.2, 0.0), c(0.2, 0.0), 4, &grid);
        assert!(matches!(r, Err(Error::Precondition(_))));
        // pointwise condition fails
        let z = c(0.0, 0.0);
        let r = special_case_extend(c(0.9, 0.0), z, c(0.9, 0.0), z, 4, &grid);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
