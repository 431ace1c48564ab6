//! The acceptance criteria. Each one draws its own random cases from a
//! seeded generator, checks them against an independent computation, and
//! reports pass or fail together with its wall-clock time against a budget.

use crate::oracles::{analytic_minimax, upper_toeplitz_norm_power};
use num_complex::Complex64;
use polydisc::cfsolver::{cf_extend, necessary_condition, special_case_extend, CfInstance, RunStatus};
use polydisc::koranyi::{cayley_forward, cayley_inverse, kp_positive, kp_test_map, schur_identity_check, CayleyPair};
use polydisc::nehari::{hankel_build, laurent_section_norm, nehari_distance};
use polydisc::opnorm::{
    full_function_norm, op_norm, toeplitz_norm, toeplitz_section_norm, upper_toeplitz, ToeplitzFamily,
};
use polydisc::polyalg::{sup_norm, MultiIndex, NPoly, TorusGrid, TrigPoly};
use polydisc::slicing::{inverse_reformulate, reformulate, slice_decompose, slices};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use std::time::Instant;

pub const DEFAULT_SEED: u64 = 20_240_917;

/// Counterexample: `|margin|` and the rejected coefficients.
pub const COUNTEREXAMPLE_TOL: f64 = 1e-8;
/// One-variable runs: slack on every partial Toeplitz norm.
pub const ONE_VAR_SLACK: f64 = 1e-8;
/// One-variable rejections: excess of `‖A₂‖` over one.
pub const ONE_VAR_EXCESS: f64 = 1e-3;
/// Function norm against block Toeplitz norm, relative.
pub const TOEPLITZ_EQUALITY_REL: f64 = 1e-2;
pub const TOEPLITZ_EQUALITY_GRID: usize = 256;
/// Section size standing in for the infinite Toeplitz operator; the
/// shortfall decays like the inverse square of the size.
pub const TOEPLITZ_EQUALITY_SECTION: usize = 40;
/// Flip points of positivity and contractivity, relative to the flip scale.
pub const FLIP_TOL: f64 = 1e-3;
pub const FLIP_DEPTH: usize = 6;
pub const FLIP_GRID: usize = 128;
/// Hankel norm against the minimax oracle, relative.
pub const NEHARI_REL: f64 = 2e-2;
/// Laurent truncation against the sup norm, relative.
pub const LAURENT_REL: f64 = 1e-2;
/// Truncation size per slice level spanned by the symbol. The shortfall
/// decays like the inverse square of the size; eight sizes per level leaves
/// about 1% for peaked symbols, twelve leaves about 0.5%.
pub const LAURENT_TRUNCATION_FACTOR: usize = 12;
/// Special-case extensions: slack on every partial Toeplitz norm.
pub const SPECIAL_SLACK: f64 = 1e-6;
pub const SPECIAL_ORDER: usize = 12;
/// Cayley round trips, absolute.
pub const CAYLEY_TOL: f64 = 1e-12;
pub const KP_DEPTH: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2} s of {} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds,
            self.budget_seconds
        )
    }
}

pub const CRITERIA: [(u8, &str, f64); 10] = [
    (1, "counterexample reproduction", 1.0),
    (2, "one-variable solvability", 10.0),
    (3, "function norm equals block Toeplitz norm", 30.0),
    (4, "Schur complement identity", 5.0),
    (5, "positivity and contractivity flip together", 60.0),
    (6, "one-variable Nehari distance", 60.0),
    (7, "Laurent truncations reach the sup norm", 20.0),
    (8, "special-case extensions", 30.0),
    (9, "round trips", 10.0),
    (10, "positive kernels from contractive maps", 30.0),
];

/// Runs criterion `id` (1 to 10).
pub fn run(id: u8, seed: u64) -> Outcome {
    let (_, name, budget) = CRITERIA[(id - 1) as usize];
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31).wrapping_add(id as u64));
    let start = Instant::now();
    let (ok, detail) = match id {
        1 => counterexample(),
        2 => one_variable(&mut rng),
        3 => toeplitz_equality(&mut rng),
        4 => schur_identity(&mut rng),
        5 => equivalence_flip(&mut rng),
        6 => nehari_one_variable(&mut rng),
        7 => laurent_truncation(&mut rng),
        8 => special_cases(&mut rng),
        9 => round_trips(&mut rng),
        10 => kp_end_to_end(&mut rng),
        _ => (false, format!("no criterion {id}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    Outcome {
        id,
        name,
        pass: ok && seconds < budget,
        detail: if seconds < budget { detail } else { format!("{detail}; over time budget") },
        seconds,
        budget_seconds: budget,
    }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    CRITERIA.iter().map(|&(id, _, _)| run(id, seed)).collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rand_c(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn npoly(n: usize, terms: impl IntoIterator<Item = (Vec<i32>, Complex64)>) -> NPoly {
    NPoly::from_terms(n, terms.into_iter().map(|(e, v)| (MultiIndex::new(e), v))).expect("valid exponents")
}

fn one_var(a: &[Complex64]) -> NPoly {
    npoly(1, a.iter().enumerate().map(|(k, &x)| (vec![k as i32 + 1], x)))
}

/// All exponents in `n` variables with total degree in `1..=d`.
fn exponents(n: usize, d: usize) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e: Vec<i32>| {
                (0..=d as i32).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out.retain(|e| (1..=d as i32).contains(&e.iter().sum()));
    out
}

/// Random polynomial with each admissible monomial present with probability `density`.
fn random_poly(rng: &mut ChaCha8Rng, n: usize, d: usize, density: f64) -> NPoly {
    let terms: Vec<_> = exponents(n, d)
        .into_iter()
        .filter_map(|e| rng.gen_bool(density).then(|| (e, rand_c(rng))))
        .collect();
    let p = npoly(n, terms);
    if p.is_zero() {
        let mut e = vec![0; n];
        e[0] = 1;
        npoly(n, [(e, c(0.5, 0.0))])
    } else {
        p
    }
}

fn counterexample() -> (bool, String) {
    let p = npoly(2, [(vec![1, 0], c(0.5f64.sqrt(), 0.0)), (vec![0, 2], c(0.5, 0.0))]);
    let inst = match CfInstance::new(p, TorusGrid::default()) {
        Ok(i) => i,
        Err(e) => return (false, e.to_string()),
    };
    let nec = match necessary_condition(&inst) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let run = cf_extend(&inst, 6);
    let at_step_three = matches!(
        &run.status,
        RunStatus::FailedDegree { step: 3, offending, .. } if offending == &vec![MultiIndex::from([4])]
    );
    let (coeff_err, low_max) = match &run.rejected {
        Some(q) => (
            (q.coeff(&MultiIndex::from([4])) - c(-1.0 / (2.0 * 2f64.sqrt()), 0.0)).norm(),
            (0..=3).map(|e| q.coeff(&MultiIndex::from([e])).norm()).fold(0.0, f64::max),
        ),
        None => (f64::INFINITY, f64::INFINITY),
    };
    let ok = nec.pass && nec.margin.abs() <= COUNTEREXAMPLE_TOL && at_step_three && coeff_err <= COUNTEREXAMPLE_TOL && low_max <= COUNTEREXAMPLE_TOL;
    (
        ok,
        format!(
            "margin {:.1e}, status {:?}, coefficient error {:.1e}, low coefficients {:.1e}",
            nec.margin, run.status, coeff_err, low_max
        ),
    )
}

fn one_variable(rng: &mut ChaCha8Rng) -> (bool, String) {
    const ORDER: usize = 20;
    let mut worst = 0.0f64;
    let mut failures = 0;
    for i in 0..200 {
        let raw = [rand_c(rng), rand_c(rng)];
        let nu = op_norm(&upper_toeplitz(&raw, 2));
        // every tenth case sits on the boundary
        let target = if i % 10 == 0 { 1.0 } else { rng.gen_range(0.05..1.0) };
        let a: Vec<Complex64> = raw.iter().map(|x| x * (target / nu)).collect();
        let inst = CfInstance::new(one_var(&a), TorusGrid::default()).expect("one-variable instance");
        let run = cf_extend(&inst, ORDER);
        let coeffs: Vec<Complex64> = run.symbols.iter().map(|s| s.coeff(&MultiIndex::new(vec![]))).collect();
        if run.status != (RunStatus::Extended { order: ORDER }) || coeffs.len() != ORDER {
            failures += 1;
            continue;
        }
        for k in 1..=ORDER {
            let norm = upper_toeplitz_norm_power(&coeffs, k, 400).max(op_norm(&upper_toeplitz(&coeffs[..k], k)));
            worst = worst.max(norm);
        }
    }
    let mut accepted = 0;
    for _ in 0..50 {
        let raw = [rand_c(rng), rand_c(rng)];
        let nu = op_norm(&upper_toeplitz(&raw, 2));
        let a: Vec<Complex64> = raw.iter().map(|x| x * ((1.0 + ONE_VAR_EXCESS) / nu)).collect();
        let inst = CfInstance::new(one_var(&a), TorusGrid::default()).expect("one-variable instance");
        if necessary_condition(&inst).map(|r| r.pass).unwrap_or(true) {
            accepted += 1;
        }
    }
    (
        failures == 0 && worst <= 1.0 + ONE_VAR_SLACK && accepted == 0,
        format!("200 runs, {failures} stopped early, worst partial norm 1{:+.1e}; {accepted} of 50 over-norm cases accepted", worst - 1.0),
    )
}

fn toeplitz_equality(rng: &mut ChaCha8Rng) -> (bool, String) {
    let grid = TorusGrid::with_points(TOEPLITZ_EQUALITY_GRID);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let d = rng.gen_range(1..=3);
        let p = random_poly(rng, 2, d, 0.7);
        let full = full_function_norm(&p, &grid).value;
        let fam = reformulate(&p).and_then(|f| ToeplitzFamily::try_from(&f));
        let fam = match fam {
            Ok(f) => f,
            Err(e) => return (false, e.to_string()),
        };
        let section = toeplitz_section_norm(&fam, TOEPLITZ_EQUALITY_SECTION, &grid).value;
        worst = worst.max((full - section).abs() / full);
    }
    (
        worst <= TOEPLITZ_EQUALITY_REL,
        format!("50 polynomials, worst relative gap {worst:.2e} (section {TOEPLITZ_EQUALITY_SECTION})"),
    )
}

fn schur_identity(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut worst_ratio = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let a: Vec<Complex64> = (0..n).map(|_| rand_c(rng)).collect();
        let amax = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let bound = 1e-10 * (1.0 + amax).powi(n as i32);
        match schur_identity_check(&a, n) {
            Ok(r) => worst_ratio = worst_ratio.max(r / bound),
            Err(e) => return (false, e.to_string()),
        }
    }
    (worst_ratio <= 1.0, format!("100 sets, worst residual {worst_ratio:.2e} of bound"))
}

/// Largest scale in `[lo, hi]` at which `holds` is true, assuming it is
/// true at `lo`, false at `hi`, and monotone in between.
fn flip_point(mut lo: f64, mut hi: f64, holds: impl Fn(f64) -> bool) -> f64 {
    while hi - lo > 1e-5 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn equivalence_flip(rng: &mut ChaCha8Rng) -> (bool, String) {
    let grid = TorusGrid::with_points(FLIP_GRID);
    let mut worst = 0.0f64;
    for i in 0..30 {
        let n = if i % 2 == 0 { 1 } else { 2 };
        let d = if n == 1 { rng.gen_range(1..=4) } else { rng.gen_range(1..=2) };
        let raw = random_poly(rng, n, d, 0.8);
        // normalize so that contractivity is lost at scale one
        let fam = |a: &NPoly| -> ToeplitzFamily {
            ToeplitzFamily::new((1..=FLIP_DEPTH as i64).map(|k| slice_decompose(a.as_trig(), k)).collect())
                .expect("equal variable counts")
        };
        let nu = toeplitz_norm(&fam(&raw), &grid).value;
        let a = raw.scale(c(1.0 / nu, 0.0));
        let contractive = flip_point(0.5, 1.5, |s| toeplitz_norm(&fam(&a.scale(c(s, 0.0))), &grid).value <= 1.0);
        let positive = flip_point(0.5, 1.5, |s| {
            let pair = CayleyPair::from_a(a.scale(c(s, 0.0)), FLIP_DEPTH).expect("no constant term");
            kp_positive(&pair, FLIP_DEPTH, &grid, 0.0).positive
        });
        worst = worst.max((positive - contractive).abs() / contractive);
    }
    (worst <= FLIP_TOL, format!("30 families, worst flip gap {worst:.2e}"))
}

fn nehari_one_variable(rng: &mut ChaCha8Rng) -> (bool, String) {
    let grid = TorusGrid::default();
    let mut worst = 0.0f64;
    let mut invariance_ok = true;
    for _ in 0..50 {
        let m = rng.gen_range(1..=4);
        let analytic = rng.gen_range(0..=3);
        // coefficients of z^(-m), …, z^analytic
        let coeffs: Vec<Complex64> = (0..=(m + analytic)).map(|_| rand_c(rng)).collect();
        let phi = TrigPoly::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &v)| (MultiIndex::from([k as i32 - m as i32]), v)),
        )
        .expect("one-variable exponents");
        let hankel = nehari_distance(&phi, &grid).value;
        let oracle = analytic_minimax(-(m as i32), &coeffs, 2 * m + analytic, 512, 500, 1e-4);
        worst = worst.max((oracle.upper - hankel).abs() / hankel);

        let g = TrigPoly::from_terms(1, (0..=3).map(|k| (MultiIndex::from([k]), rand_c(rng)))).expect("exponents");
        invariance_ok &= hankel_build(&(&phi + &g)) == hankel_build(&phi);
    }
    (
        worst <= NEHARI_REL && invariance_ok,
        format!("50 symbols, worst relative gap to minimax {worst:.2e}, analytic invariance {invariance_ok}"),
    )
}

fn laurent_truncation(rng: &mut ChaCha8Rng) -> (bool, String) {
    let grid = TorusGrid::with_points(64);
    let mut worst = 0.0f64;
    let mut worst_short = 0.0f64;
    for _ in 0..30 {
        let band = rng.gen_range(1..=3);
        let phi = TrigPoly::from_terms(
            2,
            (0..rng.gen_range(1..=8)).map(|_| {
                (
                    MultiIndex::from([rng.gen_range(-band..=band), rng.gen_range(-band..=band)]),
                    rand_c(rng),
                )
            }),
        )
        .expect("two-variable exponents");
        if phi.is_zero() {
            continue;
        }
        let levels = slices(&phi);
        let span = (levels.keys().next_back().unwrap_or(&0) - levels.keys().next().unwrap_or(&0) + 1) as usize;
        let section = laurent_section_norm(&phi, LAURENT_TRUNCATION_FACTOR * span, &grid).value;
        let short = laurent_section_norm(&phi, 8 * band as usize, &grid).value;
        let sup = sup_norm(&phi, &grid).value;
        if section > sup * (1.0 + 1e-9) {
            return (false, format!("truncation {section} exceeds sup norm {sup}"));
        }
        worst = worst.max((sup - section) / sup);
        worst_short = worst_short.max((sup - short) / sup);
    }
    (
        worst <= LAURENT_REL,
        format!(
            "30 symbols, truncation {LAURENT_TRUNCATION_FACTOR}× level span, worst relative shortfall {worst:.2e} \
             (8× bandwidth would leave {worst_short:.2e})"
        ),
    )
}

/// Random parameters for `p₁ = γ + δz`, `p₂ = (α + βz)·p₁` that satisfy the
/// argument hypothesis; `kind` selects which parameters vanish.
fn special_parameters(rng: &mut ChaCha8Rng, kind: usize) -> [Complex64; 4] {
    let polar = |rng: &mut ChaCha8Rng, theta: f64| Complex64::from_polar(rng.gen_range(0.05..1.0), theta);
    let ta = rng.gen_range(0.0..std::f64::consts::TAU);
    let tb = rng.gen_range(0.0..std::f64::consts::TAU);
    let tg = rng.gen_range(0.0..std::f64::consts::TAU);
    let td = tg - ta + tb;
    let mut p = [polar(rng, ta), polar(rng, tb), polar(rng, tg), polar(rng, td)];
    match kind {
        0 => p[1] = c(0.0, 0.0),
        1 => p[0] = c(0.0, 0.0),
        2 => {}
        _ => {
            // a vanishing γ or δ satisfies the hypothesis for any α, β
            p[1] = Complex64::from_polar(p[1].norm(), rng.gen_range(0.0..std::f64::consts::TAU));
            let k = rng.gen_range(2..4);
            p[k] = c(0.0, 0.0);
        }
    }
    p
}

fn special_cases(rng: &mut ChaCha8Rng) -> (bool, String) {
    let grid = TorusGrid::default();
    let mut worst = 0.0f64;
    for i in 0..20 {
        let [alpha, beta, gamma, delta] = special_parameters(rng, i % 4);
        let pass_at = |t: f64| {
            special_case_extend(alpha, beta, gamma * t, delta * t, 1, &grid)
                .map(|_| true)
                .unwrap_or(false)
        };
        // largest scale of p₁ for which the pointwise condition holds
        let mut hi = 1.0;
        while pass_at(hi) {
            hi *= 2.0;
        }
        let edge = flip_point(0.0, hi, pass_at);
        let t = if i % 5 == 0 { edge * (1.0 - 1e-4) } else { edge * rng.gen_range(0.5..1.0) };
        let ext = match special_case_extend(alpha, beta, gamma * t, delta * t, SPECIAL_ORDER, &grid) {
            Ok(e) => e,
            Err(e) => return (false, format!("case {i}: {e}")),
        };
        for k in 1..=SPECIAL_ORDER {
            let fam = ToeplitzFamily::new(ext.symbols[..k].to_vec()).expect("one-variable symbols");
            worst = worst.max(toeplitz_norm(&fam, &grid).value);
        }
    }
    (
        worst <= 1.0 + SPECIAL_SLACK,
        format!("20 parameter sets, worst partial norm {worst:.9}"),
    )
}

fn round_trips(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut reform_fail = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=4);
        let p = random_poly(rng, n, d, 0.5);
        let back = reformulate(&p).and_then(|f| inverse_reformulate(&f));
        if back.as_ref() != Ok(&p) {
            reform_fail += 1;
        }
    }
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=6);
        let a = random_poly(rng, n, d, 0.5).scale(c(0.5, 0.0));
        let (Ok(cc), Ok(aa)) = (cayley_forward(&a, 6), cayley_forward(&a, 6).and_then(|cc| cayley_inverse(&cc))) else {
            return (false, "Cayley transform rejected its input".into());
        };
        let recovered = cayley_forward(&aa, 6).expect("no constant term");
        let e1 = (&aa.truncated(6) - &a.truncated(6)).as_trig().max_abs_coeff();
        let e2 = (&recovered - &cc).as_trig().max_abs_coeff();
        worst = worst.max(e1).max(e2);
    }
    (
        reform_fail == 0 && worst <= CAYLEY_TOL,
        format!("{reform_fail} of 100 reformulations changed; worst Cayley round-trip error {worst:.1e}"),
    )
}

fn kp_end_to_end(rng: &mut ChaCha8Rng) -> (bool, String) {
    let mut negatives = 0;
    let mut min_eig = f64::INFINITY;
    for i in 0..20 {
        let n = 1 + i % 3;
        let grid = TorusGrid::default();
        let d = rng.gen_range(1..=3);
        let raw = random_poly(rng, n, d, 0.6);
        let s = sup_norm(raw.as_trig(), &TorusGrid::with_points(256)).value;
        let g = raw.scale(c(rng.gen_range(0.1..0.9) / s, 0.0));
        match kp_test_map(&g, KP_DEPTH, &grid) {
            Ok(r) => {
                min_eig = min_eig.min(r.min_eigenvalue);
                negatives += usize::from(!r.positive);
            }
            Err(e) => return (false, e.to_string()),
        }
    }
    (
        negatives == 0,
        format!("20 maps, {negatives} negative verdicts, smallest eigenvalue {min_eig:.3e}"),
    )
}
