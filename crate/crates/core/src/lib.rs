//! Exact lower-bound machinery for clock synchronization on k-ary
//! m-toroids with odd k.
//!
//! * [`topology`]: node ids, neighbors, canonical edge order.
//! * [`execution`]: delay assignments, shift matrices, admissibility.
//! * [`certificate`]: shift-family certificates, their checker and the
//!   closed-form bounds.
//! * [`lp`]: exact simplex oracle searching for the best certificate.
//! * [`sim`]: deterministic execution simulator and skew witnesses.
//!
//! Everything is computed over [`rational::Rational`]; no result depends on
//! floating point.

pub mod certificate;
pub mod error;
pub mod execution;
pub mod lp;
pub mod parallel;
pub mod rational;
pub mod sim;
pub mod topology;

pub use error::{Error, Result};
pub use parallel::Strategy;
pub use rational::Rational;
