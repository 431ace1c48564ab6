//! Carathéodory–Fejér interpolation on the polydisc, reduced to finite
//! matrix computations.
//!
//! A polynomial `p` on 𝔻ⁿ with `p(0) = 0` is rewritten as a one-variable
//! polynomial whose coefficients are multiplication operators `M_{p_k}` on
//! `L²(𝕋ⁿ⁻¹)` ([`slicing`]). Every operator that appears afterwards is a
//! block matrix of such multiplication operators, so its norm is the supremum
//! over the torus of the norm of a small matrix of symbol values
//! ([`opnorm`]). On top of that reduction the crate provides
//!
//! * Parrott completions and the Douglas–Muhly–Pearcy factorization
//!   ([`completion`]),
//! * the necessary condition and the step-wise extension algorithm
//!   ([`cfsolver`]),
//! * Hankel operators in the D-slice ordering and Nehari distances
//!   ([`nehari`]),
//! * the Cayley coefficient recursion and the Korányi–Pukánszky positivity
//!   test ([`koranyi`]).
//!
//! ```
//! use num_complex::Complex64;
//! use polydisc::cfsolver::{cf_extend, CfInstance, RunStatus};
//! use polydisc::polyalg::{MultiIndex, NPoly, TorusGrid};
//!
//! // p(z1, z2) = z1/√2 + z2²/2 satisfies the necessary condition with no
//! // slack, yet its central completion leaves the admissible degree.
//! let p = NPoly::from_terms(2, [
//!     (MultiIndex::from([1, 0]), Complex64::new(0.5f64.sqrt(), 0.0)),
//!     (MultiIndex::from([0, 2]), Complex64::new(0.5, 0.0)),
//! ]).unwrap();
//! let inst = CfInstance::new(p, TorusGrid::default()).unwrap();
//! let run = cf_extend(&inst, 6);
//! assert!(matches!(run.status, RunStatus::FailedDegree { step: 3, .. }));
//! ```

pub mod cfsolver;
pub mod completion;
pub mod error;
pub mod koranyi;
pub mod nehari;
pub mod opnorm;
pub mod polyalg;
pub mod slicing;

pub use error::{Error, Result};
pub use num_complex::Complex64;
