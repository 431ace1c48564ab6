//! `polydisc` command-line front end.
//!
//! Every subcommand prints one JSON document on standard output holding the
//! command name, the effective run configuration and the result. Exit codes:
//! 0 for a positive verdict or plain computation, 1 for a negative verdict,
//! 2 for malformed input.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use polydisc::cfsolver::{cf_extend, necessary_condition, special_case_extend, CfInstance, RunStatus};
use polydisc::completion::{parrott_complete, parrott_factors, ParrottProblem};
use polydisc::koranyi::{kp_positive, schur_identity_check, CayleyPair};
use polydisc::nehari::{hankel_build, nehari_distance};
use polydisc::opnorm::{op_norm, toeplitz_norm, toeplitz_section_norm, DenseMatrix, ToeplitzFamily};
use polydisc::polyalg::{NPoly, TorusGrid, TrigPoly};
use polydisc::slicing::{inverse_reformulate, reformulate, SymbolFamily};
use polydisc::Error;
use polydisc_verify::acceptance::{self, DEFAULT_SEED};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use io::{emit, parse_input, CliError};

#[derive(Parser)]
#[command(name = "polydisc", version, about = "Polydisc interpolation, Toeplitz, Hankel and positivity computations")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand; echoed in every output.
#[derive(clap::Args, Clone, Copy, Debug, Serialize)]
struct RunConfig {
    /// Grid points per torus axis (a power of two).
    #[arg(long = "grid", default_value_t = 128, global = true)]
    #[serde(rename = "points_per_axis")]
    grid: usize,
    /// Numerical tolerance for contraction and positivity verdicts.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol: f64,
    /// Highest symbol order `cf-extend` constructs.
    #[arg(long = "max-order", default_value_t = 12, global = true)]
    max_order: usize,
    /// Section depth for kernel positivity checks.
    #[arg(long, default_value_t = 8, global = true)]
    depth: usize,
    /// Seed for the randomized self-test.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
}

impl RunConfig {
    fn validate(&self) -> Result<(), CliError> {
        if !self.grid.is_power_of_two() {
            return Err(CliError::Input(format!("--grid must be a power of two, got {}", self.grid)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Input(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.max_order == 0 || self.depth == 0 {
            return Err(CliError::Input("--max-order and --depth must be positive".into()));
        }
        Ok(())
    }

    fn torus_grid(&self) -> TorusGrid {
        TorusGrid::with_points(self.grid)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CoeffKind {
    /// Coefficients of the contractive map (constant term zero).
    A,
    /// Coefficients of the positive-real-part map, without the constant 1/2.
    C,
}

#[derive(Subcommand)]
enum Command {
    /// Polynomial to symbol family, or back with --invert.
    Reformulate {
        #[arg(long)]
        invert: bool,
        /// Input file; standard input when absent or "-".
        input: Option<PathBuf>,
    },
    /// Supremum over the torus of the block Toeplitz matrix norm.
    ToeplitzNorm {
        /// Use the N×N section of the zero-padded family instead.
        #[arg(long)]
        section: Option<usize>,
        input: Option<PathBuf>,
    },
    /// Contractivity of the block Toeplitz matrix of a polynomial's symbols.
    CheckNecessary { input: Option<PathBuf> },
    /// Step-wise extension with central completions.
    CfExtend { input: Option<PathBuf> },
    /// Explicit extension for p₁ = γ + δz, p₂ = (α + βz)·p₁.
    SpecialCase {
        /// Complex values as "re" or "re,im".
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
    },
    /// Central completion of a partially specified contraction.
    Parrott { input: Option<PathBuf> },
    /// Norm of the Hankel operator of a trigonometric polynomial.
    NehariDist { input: Option<PathBuf> },
    /// Positivity of kernel sections at each depth up to --depth.
    KpCheck {
        #[arg(long, value_enum, default_value_t = CoeffKind::A)]
        coeffs: CoeffKind,
        input: Option<PathBuf>,
    },
    /// Residual of the Schur complement identity for one-variable coefficients.
    KpIdentity { input: Option<PathBuf> },
    /// Runs the acceptance suite.
    Selftest {
        /// Run a single criterion (1 to 10).
        #[arg(long)]
        only: Option<u8>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Reformulate { .. } => "reformulate",
            Command::ToeplitzNorm { .. } => "toeplitz-norm",
            Command::CheckNecessary { .. } => "check-necessary",
            Command::CfExtend { .. } => "cf-extend",
            Command::SpecialCase { .. } => "special-case",
            Command::Parrott { .. } => "parrott",
            Command::NehariDist { .. } => "nehari-dist",
            Command::KpCheck { .. } => "kp-check",
            Command::KpIdentity { .. } => "kp-identity",
            Command::Selftest { .. } => "selftest",
        }
    }
}

/// Result document and whether the verdict was positive.
type Outcome = (Value, bool);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let result = cli.config.validate().and_then(|()| dispatch(&cli.command, &cli.config));
    match result {
        Ok((value, positive)) => {
            emit(name, &cli.config, value);
            ExitCode::from(if positive { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("polydisc {name}: {e}");
            ExitCode::from(2)
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize to JSON")
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.torus_grid();
    match cmd {
        Command::Reformulate { invert: false, input } => {
            let p: NPoly = parse_input(input.as_deref())?;
            let fam = reformulate(&p)?;
            let flags = fam.membership_flags();
            Ok((json!({ "family": to_value(&fam), "membership_flags": to_value(&flags) }), true))
        }
        Command::Reformulate { invert: true, input } => {
            let raw: FamilyInput = parse_input(input.as_deref())?;
            let n = raw.n.ok_or_else(|| CliError::Input("field `n`: required with --invert".into()))?;
            let fam = SymbolFamily::new(n, raw.symbols)?;
            Ok((json!({ "polynomial": to_value(&inverse_reformulate(&fam)?) }), true))
        }
        Command::ToeplitzNorm { section, input } => {
            let raw: FamilyInput = parse_input(input.as_deref())?;
            let fam = ToeplitzFamily::new(raw.symbols)?;
            let norm = match section {
                Some(size) => toeplitz_section_norm(&fam, *size, &grid),
                None => toeplitz_norm(&fam, &grid),
            };
            let contractive = norm.value <= 1.0 + cfg.tol;
            Ok((json!({ "norm": to_value(&norm), "section": section, "contractive": contractive }), true))
        }
        Command::CheckNecessary { input } => {
            let p: NPoly = parse_input(input.as_deref())?;
            let inst = CfInstance::new(p, grid)?.with_tol(cfg.tol);
            let report = necessary_condition(&inst)?;
            Ok((to_value(&report), report.pass))
        }
        Command::CfExtend { input } => {
            let p: NPoly = parse_input(input.as_deref())?;
            let inst = CfInstance::new(p, grid)?.with_tol(cfg.tol);
            let run = cf_extend(&inst, cfg.max_order);
            let extended = matches!(run.status, RunStatus::Extended { .. });
            Ok((to_value(&run), extended))
        }
        Command::SpecialCase { alpha, beta, gamma, delta } => {
            let [a, b, g, d] = [("alpha", alpha), ("beta", beta), ("gamma", gamma), ("delta", delta)]
                .map(|(field, s)| io::parse_complex(field, s));
            let (a, b, g, d) = (a?, b?, g?, d?);
            match special_case_extend(a, b, g, d, cfg.max_order, &grid) {
                Ok(ext) => Ok((json!({ "extended": true, "extension": to_value(&ext) }), true)),
                Err(e @ (Error::Precondition(_) | Error::NotContraction { .. })) => {
                    Ok((json!({ "extended": false, "reason": e.to_string() }), false))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Parrott { input } => {
            let raw: ParrottInput = parse_input(input.as_deref())?;
            let prob = match ParrottProblem::new(raw.a, raw.c, raw.d, cfg.tol) {
                Ok(p) => p,
                Err(e @ Error::NotContraction { .. }) => {
                    return Ok((json!({ "completable": false, "reason": e.to_string() }), false))
                }
                Err(e) => return Err(e.into()),
            };
            let sol = parrott_factors(&prob)?;
            let v = raw
                .v
                .unwrap_or_else(|| DenseMatrix::zeros(prob.a().rows(), prob.d().cols()));
            let x = parrott_complete(&prob, &v)?;
            let completed = prob.assemble(&x)?;
            Ok((
                json!({
                    "completable": true,
                    "completion": to_value(&x),
                    "completed_norm": op_norm(&completed),
                    "central": to_value(&sol.central_x),
                    "left_factor_norm": op_norm(&sol.left_factor),
                    "right_factor_norm": op_norm(&sol.right_factor),
                    "unique": sol.is_unique(polydisc::cfsolver::UNIQUE_TOL),
                }),
                true,
            ))
        }
        Command::NehariDist { input } => {
            let phi: TrigPoly = parse_input(input.as_deref())?;
            let dist = nehari_distance(&phi, &grid);
            Ok((json!({ "norm": to_value(&dist), "slices": to_value(&hankel_build(&phi)) }), true))
        }
        Command::KpCheck { coeffs, input } => {
            let p: NPoly = parse_input(input.as_deref())?;
            let pair = match coeffs {
                CoeffKind::A => CayleyPair::from_a(p, cfg.depth)?,
                CoeffKind::C => CayleyPair::from_c(p)?,
            };
            let per_depth: Vec<_> = (1..=cfg.depth)
                .map(|m| kp_positive(&pair, m, &grid, cfg.tol))
                .collect();
            let positive = per_depth.iter().all(|r| r.positive);
            Ok((json!({ "positive": positive, "depths": to_value(&per_depth) }), positive))
        }
        Command::KpIdentity { input } => {
            let raw: IdentityInput = parse_input(input.as_deref())?;
            let n = raw.n.unwrap_or(raw.a.len());
            let residual = schur_identity_check(&raw.a, n)?;
            let amax = raw.a.iter().map(|x| x.norm()).fold(0.0, f64::max);
            let bound = 1e-10 * (1.0 + amax).powi(n as i32);
            Ok((json!({ "n": n, "residual": residual, "bound": bound, "pass": residual <= bound }), residual <= bound))
        }
        Command::Selftest { only } => {
            let ids: Vec<u8> = match only {
                Some(id @ 1..=10) => vec![*id],
                Some(id) => return Err(CliError::Input(format!("--only must be between 1 and 10, got {id}"))),
                None => acceptance::CRITERIA.iter().map(|c| c.0).collect(),
            };
            let outcomes: Vec<_> = ids.iter().map(|&id| acceptance::run(id, cfg.seed)).collect();
            for o in &outcomes {
                eprintln!("{o}");
            }
            let pass = outcomes.iter().all(|o| o.pass);
            // timings go to standard error only, so the JSON is reproducible
            let criteria: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({ "id": o.id, "name": o.name, "pass": o.pass, "detail": o.detail, "budget_seconds": o.budget_seconds }))
                .collect();
            Ok((json!({ "pass": pass, "criteria": criteria }), pass))
        }
    }
}

/// A list of symbols, with the ambient variable count where needed.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyInput {
    n: Option<usize>,
    symbols: Vec<TrigPoly>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParrottInput {
    a: DenseMatrix,
    c: DenseMatrix,
    d: DenseMatrix,
    v: Option<DenseMatrix>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdentityInput {
    a: Vec<Complex64>,
    n: Option<usize>,
}
