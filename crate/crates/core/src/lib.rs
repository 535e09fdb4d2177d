//! Practical numbers and practical pretenders.
//!
//! An integer `n` is practical when every integer in `[1, n]` is a sum of
//! distinct divisors of `n`. More generally f(n) is the largest `m` such
//! that all of `1, …, m` are such sums. This crate computes f exactly,
//! classifies and counts practical numbers at scale, enumerates the range of
//! f together with the densities of its level sets, and checks the
//! Hausman–Shapiro threshold.

pub mod arith;
pub mod cli;
pub mod density;
pub mod error;
pub mod hs;
pub mod practical;
pub mod scan;
pub mod sieve;

pub use arith::{factorize, Factorization, SpfTable};
pub use error::{Error, Result};
pub use practical::{decompose, f_brute, f_fast, is_practical, PracticalDecomposition};
pub use scan::ScanConfig;
pub use sieve::Sieve;
