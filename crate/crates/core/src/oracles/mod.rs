//! Brute-force validators. Each oracle recomputes a quantity from its
//! definition with no shared code path beyond basic data types, so that an
//! agreement with the fast implementation is meaningful.

mod random;
mod verify;
mod windowed;

pub use random::{
    random_affine_aut, random_hyperbolic, random_invertible_f2, random_mat_f2, random_unimodular, random_vec_f2,
    random_zeta_instance, seeded_rng, Instance,
};
pub use verify::{verify_instance, verify_random, Expectations, VerifyReport};
pub use windowed::{oracle_windowed_classes, windowed_class_count, WindowedCount, MAX_WINDOW, MAX_WINDOW_DIM};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::f2linalg::{MatF2, VecF2};
use crate::group::GroupError;
use crate::intlinalg::{IntError, MatZ};
use crate::zeta::{PowerSeriesQ, RationalFn};

/// Column cap for exhaustive solution counting.
pub const MAX_COUNT_COLS: usize = 22;
/// Dimension cap for exhaustive sequence enumeration.
pub const MAX_SEQUENCE_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} = {value} exceeds the oracle cap {cap}")]
    TooLarge { what: &'static str, value: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("I - D^m is singular")]
    Singular,
    #[error("R(φ^{0}) is infinite")]
    InfinitePower(u64),
    #[error("matrix entries too large for the windowed search")]
    Overflow,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Int(#[from] IntError),
}

fn cap(what: &'static str, value: usize, cap: usize) -> Result<(), OracleError> {
    if value > cap {
        return Err(OracleError::TooLarge { what, value, cap });
    }
    Ok(())
}

/// `#{x ∈ F₂^cols : a·x = b}` by trying every `x`.
pub fn oracle_count_solutions(a: &MatF2, b: &VecF2) -> Result<u64, OracleError> {
    cap("columns", a.cols(), MAX_COUNT_COLS)?;
    if b.len() != a.rows() {
        return Err(OracleError::DimensionMismatch(format!(
            "{} rows against a right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let rows: Vec<u32> = (0..a.rows())
        .map(|i| (0..a.cols()).fold(0u32, |acc, j| acc | (u32::from(a.get(i, j)) << j)))
        .collect();
    let target: Vec<bool> = (0..b.len()).map(|i| b.get(i)).collect();
    let hits = (0u32..1 << a.cols())
        .filter(|x| rows.iter().zip(&target).all(|(r, &t)| ((r & x).count_ones() & 1 == 1) == t))
        .count();
    Ok(hits as u64)
}

/// Order of the cokernel of `I - D₂ᵐ`: the product of its Smith invariants.
pub fn oracle_torus_rnumber(d2: &MatZ, m: u64) -> Result<BigInt, OracleError> {
    let n = d2.rows();
    let mut p = MatZ::identity(n);
    for _ in 0..m {
        p = p.mul(d2)?;
    }
    let smith = MatZ::identity(n).sub(&p)?.smith_normal_form()?;
    if smith.iter().any(Zero::is_zero) {
        return Err(OracleError::Singular);
    }
    Ok(smith.iter().fold(BigInt::one(), |acc, s| acc * s.abs()))
}

/// `v_k = #{x : (I - D̄ᵏ)x = (Σ_{i<k} D̄ⁱ)d̄}` for `k = 1..=horizon`, each
/// by direct enumeration over `F₂ⁿ`.
pub fn oracle_sequence(dbar: &MatF2, dvec: &VecF2, horizon: u64) -> Result<Vec<u64>, OracleError> {
    let n = dbar.rows();
    cap("dimension", n, MAX_SEQUENCE_DIM)?;
    if dbar.cols() != n || dvec.len() != n {
        return Err(OracleError::DimensionMismatch("D̄ must be square and match d̄".into()));
    }
    let d: Vec<u32> = (0..n)
        .map(|i| (0..n).fold(0u32, |acc, j| acc | (u32::from(dbar.get(i, j)) << j)))
        .collect();
    let shift = (0..n).fold(0u32, |acc, i| acc | (u32::from(dvec.get(i)) << i));
    let apply = |rows: &[u32], x: u32| {
        rows.iter()
            .enumerate()
            .fold(0u32, |acc, (i, r)| acc | (((r & x).count_ones() & 1) << i))
    };
    // row i of A·B is the XOR of the rows j of B with A[i][j] = 1
    let compose = |a: &[u32], b: &[u32]| -> Vec<u32> {
        a.iter()
            .map(|&r| (0..n).filter(|&j| r >> j & 1 == 1).fold(0u32, |acc, j| acc ^ b[j]))
            .collect()
    };
    let mut power = d.clone();
    let mut rhs = shift;
    let mut out = Vec::with_capacity(horizon as usize);
    for _ in 0..horizon {
        let count = (0u32..1 << n)
            .filter(|&x| x ^ apply(&power, x) == rhs)
            .count();
        out.push(count as u64);
        rhs = apply(&d, rhs) ^ shift;
        power = compose(&d, &power);
    }
    Ok(out)
}

/// Whether `z·f'/f` of `f` reproduces `rnumbers` exactly, term by term.
pub fn oracle_series_match(f: &RationalFn, rnumbers: &[BigInt]) -> bool {
    if f.denominator.coeff(0) != BigInt::one() || f.numerator.coeff(0) != BigInt::one() {
        return false;
    }
    let expanded = f.expand(rnumbers.len() + 1);
    let logd = PowerSeriesQ::from_integers(&expanded).log_derivative();
    logd.len() == rnumbers.len()
        && logd
            .iter()
            .zip(rnumbers)
            .all(|(a, b)| *a == BigRational::from_integer(b.clone()))
}
