//! Exact-arithmetic machinery for level-raising congruences of algebraic
//! modular forms on definite quaternion algebras over Q, together with
//! finite brute-force verification of the local parahoric computations
//! (double-coset counts, fixed-space dimension tables, rank-one
//! Iwahori-Hecke relations, Satake congruence case analyses).
//!
//! Everything is computed over Z, Q, or F_{l^k}; there is no floating
//! point anywhere in the crate.

pub mod arith;
pub mod congruence;
pub mod quat;
pub mod brandt;
pub mod level;
pub mod local;

pub use arith::matrix::{IntMatrix, RatMatrix};
pub use arith::ff::Fq;
pub use arith::valuation::Valuation;
