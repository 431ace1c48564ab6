//! Independent oracles and the acceptance suite for `polydisc`.
//!
//! Every criterion in [`acceptance`] draws seeded random cases, checks them
//! against a computation that does not reuse the routine under test, and
//! reports its wall-clock time against a fixed budget.

pub mod acceptance;
pub mod oracles;
