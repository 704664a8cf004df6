//! Exact kernels, ball arithmetic and a verification engine for Ramanujan-type
//! series for 1/π, π², 1/π², ζ(3) and L(2,(·/3)).
//!
//! The crate is organised bottom-up:
//!
//! * [`exact_arith`] big-integer helpers, ball arithmetic, constants and quadratic surds
//! * [`kernels`] the sequence families that appear inside summands
//! * [`identity_db`] the bundled identity catalog and its text format
//! * [`series_engine`] evaluation with tail bounds, convergence ratios and transforms
//! * [`congruences`] truncated sums modulo prime powers
//! * [`properties`] q-logconvexity, trinomial asymptotics and combinatorial identity checks

pub mod congruences;
pub mod error;
pub mod exact_arith;
pub mod identity_db;
pub mod kernels;
pub mod properties;
pub mod series_engine;

pub use error::{Error, Result};
pub use exact_arith::{Ball, QuadSurd};
pub use identity_db::{Catalog, Identity, RhsExpr, Status};
pub use series_engine::{EvalReport, Verdict};
pub use kernels::Kernel;
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;

