//! Exact linear algebra over Z, Q and finite fields F_{l^k}: dense
//! big-integer matrices, Smith and Hermite normal forms, characteristic
//! polynomials, lattice saturation, and l-adic valuations.

pub mod matrix;
pub mod ff;
pub mod valuation;
