//! The group `Γ = ⟨ℤᵏ, (0, -I_k)⟩ × ℤ^(n-k)` with holonomy `{I, J}`,
//! `J = -I_k ⊕ I_(n-k)`, and its automorphisms `φ` given by affine data
//! `(d/2, D)`.
//!
//! For a power `φᵐ` the Reidemeister number is infinite exactly when
//! `det(I - Dᵐ) = 0` or `det(I - J·Dᵐ) = 0`. Otherwise it factors as
//! `T_m · |det(I - D₂ᵐ)|` where
//!
//! ```text
//! T_m = (|det(I - D₁ᵐ)| + |det(I + D₁ᵐ)|) / 2 + #{x ∈ F₂ᵏ : (I - D̄₁ᵐ)x = (Σ_{i<m} D̄₁ⁱ) d̄₁}
//! ```
//!
//! Only `d` modulo 2, restricted to the first `k` coordinates, enters the
//! count; the translation part of the torus factor plays no role.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::f2linalg::{count_solutions, MatF2, VecF2};
use crate::intlinalg::{IntError, MatZ};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("holonomy rank {holonomy_rank} exceeds dimension {n}")]
    InvalidRank { n: usize, holonomy_rank: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("NON_UNIMODULAR: det D = {0}, expected ±1")]
    NonUnimodular(BigInt),
    #[error("BLOCK_MIXING: D does not preserve the split ℤ^{k} × ℤ^{rest}")]
    BlockMixing { k: usize, rest: usize },
    #[error("powers start at 1")]
    ZeroPower,
    #[error(transparent)]
    Int(#[from] IntError),
}

/// `Γ` is determined by the ambient dimension and the number of `-1`
/// entries of `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagZ2Group {
    n: usize,
    holonomy_rank: usize,
}

impl DiagZ2Group {
    pub fn new(n: usize, holonomy_rank: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::DimensionMismatch("dimension must be positive".into()));
        }
        if holonomy_rank > n {
            return Err(GroupError::InvalidRank { n, holonomy_rank });
        }
        Ok(Self { n, holonomy_rank })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn holonomy_rank(&self) -> usize {
        self.holonomy_rank
    }

    /// Every automorphism has infinite Reidemeister number when `k = 1`.
    pub fn has_r_infinity(&self) -> bool {
        self.holonomy_rank == 1
    }
}

/// Affine data `(d/2, D)` of an automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineAut {
    pub d: Vec<BigInt>,
    pub matrix: MatZ,
}

impl AffineAut {
    pub fn new(matrix: MatZ, d: Vec<BigInt>) -> Self {
        Self { d, matrix }
    }

    pub fn from_i64(matrix: &[&[i64]], d: &[i64]) -> Result<Self, GroupError> {
        Ok(Self {
            matrix: MatZ::from_i64(matrix)?,
            d: d.iter().map(|&x| x.into()).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RNumber {
    Finite(BigInt),
    Infinite,
}

impl RNumber {
    pub fn is_finite(&self) -> bool {
        matches!(self, RNumber::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            RNumber::Finite(v) => Some(v),
            RNumber::Infinite => None,
        }
    }
}

impl fmt::Display for RNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RNumber::Finite(v) => write!(f, "{v}"),
            RNumber::Infinite => write!(f, "inf"),
        }
    }
}

/// Why no Reidemeister zeta function exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Obstruction {
    /// `k = 1`: the quotient `⟨ℤ, (0, -1)⟩` forces the R∞-property.
    RInfinity,
    /// `Φ_m` divides the characteristic polynomial of `D`, so some power of
    /// `φ` has infinite Reidemeister number.
    Cyclotomic(u64),
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::RInfinity => write!(f, "R∞: holonomy rank 1 gives the R-infinity property"),
            Obstruction::Cyclotomic(m) => {
                write!(f, "Φ_{m} divides the characteristic polynomial of D")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaExistence {
    pub exists: bool,
    pub reason: Option<Obstruction>,
}

/// An automorphism that passed [`validate`], with its two factors split out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedAut {
    group: DiagZ2Group,
    aut: AffineAut,
    d1: MatZ,
    d2: MatZ,
    dbar1: MatF2,
    dvec1: VecF2,
}

pub fn reduce_mod2(m: &MatZ) -> MatF2 {
    let mut out = MatF2::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, m[(i, j)].is_odd());
        }
    }
    out
}

pub fn reduce_vec_mod2(v: &[BigInt]) -> VecF2 {
    VecF2::from_bits(v.iter().map(|x| x.is_odd() as u8))
}

pub fn validate(group: &DiagZ2Group, aut: &AffineAut) -> Result<ValidatedAut, GroupError> {
    let n = group.n;
    let k = group.holonomy_rank;
    let dm = &aut.matrix;
    if dm.rows() != n || dm.cols() != n {
        return Err(GroupError::DimensionMismatch(format!(
            "D is {}x{}, expected {n}x{n}",
            dm.rows(),
            dm.cols()
        )));
    }
    if aut.d.len() != n {
        return Err(GroupError::DimensionMismatch(format!(
            "d has length {}, expected {n}",
            aut.d.len()
        )));
    }
    let det = dm.det()?;
    if det.abs() != BigInt::one() {
        return Err(GroupError::NonUnimodular(det));
    }
    if 0 < k && k < n {
        let mixing = (0..k).any(|i| (k..n).any(|j| !dm[(i, j)].is_zero() || !dm[(j, i)].is_zero()));
        if mixing {
            return Err(GroupError::BlockMixing { k, rest: n - k });
        }
    }
    let d1 = dm.submatrix(0, 0, k, k);
    let d2 = dm.submatrix(k, k, n - k, n - k);
    Ok(ValidatedAut {
        group: *group,
        dbar1: reduce_mod2(&d1),
        dvec1: reduce_vec_mod2(&aut.d[..k]),
        d1,
        d2,
        aut: aut.clone(),
    })
}

fn abs_det_one_minus(m: &MatZ) -> Result<BigInt, IntError> {
    Ok(MatZ::identity(m.rows()).sub(m)?.det()?.abs())
}

fn abs_det_one_plus(m: &MatZ) -> Result<BigInt, IntError> {
    Ok(MatZ::identity(m.rows()).add(m)?.det()?.abs())
}

impl ValidatedAut {
    pub fn group(&self) -> &DiagZ2Group {
        &self.group
    }

    pub fn aut(&self) -> &AffineAut {
        &self.aut
    }

    pub fn d1(&self) -> &MatZ {
        &self.d1
    }

    pub fn d2(&self) -> &MatZ {
        &self.d2
    }

    /// Mod-2 reduction of `D₁` and of the first `k` entries of `d`.
    pub fn mod2_data(&self) -> (&MatF2, &VecF2) {
        (&self.dbar1, &self.dvec1)
    }

    /// Finite iff neither `I - Dᵐ` nor `I - J·Dᵐ` is singular.
    pub fn is_finite(&self, m: u64) -> bool {
        let k = self.group.holonomy_rank;
        let n = self.group.n;
        let dm = self.aut.matrix.pow(m).expect("validated D is square");
        let mut jdm = dm.clone();
        for i in 0..k {
            for j in 0..n {
                jdm[(i, j)] = -&jdm[(i, j)];
            }
        }
        let id = MatZ::identity(n);
        !id.sub(&dm).unwrap().det().unwrap().is_zero() && !id.sub(&jdm).unwrap().det().unwrap().is_zero()
    }

    /// `T_m(D₁, d₁)` for the `⟨ℤᵏ, (0, -I_k)⟩` factor; `None` when infinite.
    pub fn first_factor(&self, m: u64) -> Option<BigInt> {
        let k = self.group.holonomy_rank;
        if k == 0 {
            return Some(BigInt::one());
        }
        let p = self.d1.pow(m).expect("square");
        let minus = abs_det_one_minus(&p).expect("square");
        let plus = abs_det_one_plus(&p).expect("square");
        if minus.is_zero() || plus.is_zero() {
            return None;
        }
        let sum = minus + plus;
        let (half, rem) = sum.div_rem(&BigInt::from(2));
        assert!(rem.is_zero(), "|det(I - D₁ᵐ)| + |det(I + D₁ᵐ)| must be even");
        Some(half + self.mod2_count(m))
    }

    /// `#{x : (I - D̄₁ᵐ)x = (Σ_{i<m} D̄₁ⁱ) d̄₁}`.
    pub fn mod2_count(&self, m: u64) -> BigInt {
        let k = self.dbar1.rows();
        let lhs = MatF2::identity(k).add(&self.dbar1.pow(m).unwrap()).unwrap();
        let rhs = self.dbar1.geometric_sum(m).unwrap().mul_vec(&self.dvec1).unwrap();
        BigInt::from(count_solutions(&lhs, &rhs).expect("dimension below 64"))
    }

    /// `|det(I - D₂ᵐ)|` for the central `ℤ^(n-k)` factor (1 when `k = n`).
    pub fn torus_factor(&self, m: u64) -> Option<BigInt> {
        let v = abs_det_one_minus(&self.d2.pow(m).expect("square")).expect("square");
        (!v.is_zero()).then_some(v)
    }

    pub fn reidemeister_number(&self, m: u64) -> Result<RNumber, GroupError> {
        if m == 0 {
            return Err(GroupError::ZeroPower);
        }
        if !self.is_finite(m) {
            return Ok(RNumber::Infinite);
        }
        let first = self.first_factor(m).expect("finite power has a finite first factor");
        let torus = self.torus_factor(m).expect("finite power has a finite torus factor");
        Ok(RNumber::Finite(first * torus))
    }

    /// `R(φᵐ)` for `m = 1..=count`, evaluated in parallel.
    pub fn reidemeister_numbers(&self, count: u64) -> Vec<RNumber> {
        (1..=count)
            .into_par_iter()
            .map(|m| self.reidemeister_number(m).expect("m ≥ 1"))
            .collect()
    }

    pub fn zeta_exists(&self) -> ZetaExistence {
        if self.group.has_r_infinity() {
            return ZetaExistence {
                exists: false,
                reason: Some(Obstruction::RInfinity),
            };
        }
        match self.aut.matrix.root_of_unity_order().expect("validated D is invertible") {
            Some(m) => ZetaExistence {
                exists: false,
                reason: Some(Obstruction::Cyclotomic(m)),
            },
            None => ZetaExistence {
                exists: true,
                reason: None,
            },
        }
    }
}

pub fn is_finite(aut: &ValidatedAut, m: u64) -> bool {
    aut.is_finite(m)
}

pub fn reidemeister_number(aut: &ValidatedAut, m: u64) -> Result<RNumber, GroupError> {
    aut.reidemeister_number(m)
}

pub fn zeta_exists(aut: &ValidatedAut) -> ZetaExistence {
    aut.zeta_exists()
}
