//! Exact integer linear algebra: determinants, powers, characteristic
//! polynomials, Smith normal form and cyclotomic eigenvalue detection.

mod cyclotomic;
mod matrix;
mod poly;

pub use cyclotomic::{cyclotomic, divisors, euler_phi, CyclotomicTable};
pub use matrix::MatZ;
pub use poly::PolyZ;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid exponent {0}")]
    InvalidExponent(u64),
}
