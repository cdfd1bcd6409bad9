//! The Reidemeister zeta function `exp Σ R(φᵐ) zᵐ / m` as a certified
//! rational function.
//!
//! The series is built from exact Reidemeister numbers, a rational function
//! of total degree at most `B = 2^(n+1)` is fitted to its first `2B + 1`
//! coefficients, and ten further coefficients are checked against the fit.

mod radius;
mod rational;
mod series;

pub use radius::{
    radius_of_convergence, roots_in_disk, squarefree_part, strip_cyclotomic, Radius, BISECTION_BITS,
    RADIUS_ERROR,
};
pub use rational::{degree_bound, reconstruct, second_factor, RationalFn};
pub use series::PowerSeriesQ;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::group::{validate, AffineAut, DiagZ2Group, GroupError, Obstruction, RNumber, ValidatedAut};
use crate::seqdecomp::{decompose, BasisCombo, SeqError};

/// Coefficients checked beyond the `2B + 1` that determine the fit.
pub const CERTIFICATION_TERMS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("ZETA_UNDEFINED: {0}")]
    ZetaUndefined(Obstruction),
    #[error("ZETA_UNDEFINED: R(φ^{0}) is infinite")]
    InfiniteTerm(u64),
    #[error("series has {have} terms, reconstruction needs {need}")]
    SeriesTooShort { need: usize, have: usize },
    #[error("NO_SOLUTION: no rational function within the degree bound fits the series")]
    NoSolution,
    #[error("reduced rational function has non-integer coefficients")]
    NotIntegral,
    #[error("CERTIFICATION_FAILURE: coefficient {index} is {expected}, the fit gives {found}")]
    CertificationFailure {
        index: usize,
        expected: BigInt,
        found: BigInt,
    },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// `exp Σ_{k≥1} R_k zᵏ / k` to `rnumbers.len() + 1` terms.
pub fn zeta_series(rnumbers: &[RNumber]) -> Result<PowerSeriesQ, ZetaError> {
    let finite: Vec<BigInt> = rnumbers
        .iter()
        .enumerate()
        .map(|(i, r)| r.finite().cloned().ok_or(ZetaError::InfiniteTerm(i as u64 + 1)))
        .collect::<Result<_, _>>()?;
    Ok(PowerSeriesQ::exp_of_log_series(&finite))
}

/// Smallest pole modulus of `f`, or infinity for a polynomial.
pub fn radius(f: &RationalFn) -> Radius {
    radius_of_convergence(&f.denominator)
}

/// Root-test estimate of the radius of convergence from the Taylor
/// coefficients of `f`, using `terms` coefficients. Only a sanity check.
pub fn tail_radius_estimate(f: &RationalFn, terms: usize) -> Option<f64> {
    let e = f.expand(terms);
    let m = terms / 3;
    let window = (terms / 10).max(1);
    let peak = |from: usize| {
        (from..from + window)
            .map(|j| (e[j].abs(), j))
            .max_by(|a, b| a.0.cmp(&b.0))
            .filter(|(v, _)| !v.is_zero())
    };
    let (a, i) = peak(m)?;
    let (b, j) = peak(2 * m)?;
    if j <= i {
        return None;
    }
    // ln|e_j| - ln|e_i| ≈ (j - i)·ln(1/r)
    let ln = |x: &BigInt| {
        let bits = x.bits();
        let shift = bits.saturating_sub(60);
        (x >> shift as usize).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    };
    Some((-(ln(&b) - ln(&a)) / (j - i) as f64).exp())
}

/// Everything the pipeline computes for one automorphism.
#[derive(Debug, Clone)]
pub struct ZetaResult {
    pub rational: RationalFn,
    pub radius: Radius,
    pub degree_bound: usize,
    /// `R(φᵏ)` for `k = 1..=2B+11`.
    pub rnumbers: Vec<BigInt>,
    pub series: PowerSeriesQ,
    /// Cycle counts `cᵢ` of the mod-2 affine map on the `ℤᵏ` factor; empty
    /// when `k = 0`.
    pub second_factor_c: BasisCombo,
    /// Whether `∏(1 - zⁱ)^(cᵢ)` divides the reconstructed denominator.
    pub second_factor_divides: bool,
}

pub fn full_pipeline(group: &DiagZ2Group, aut: &AffineAut) -> Result<ZetaResult, ZetaError> {
    pipeline(&validate(group, aut)?)
}

/// [`full_pipeline`] for an already validated automorphism.
pub fn pipeline(v: &ValidatedAut) -> Result<ZetaResult, ZetaError> {
    let existence = v.zeta_exists();
    if let Some(reason) = existence.reason {
        return Err(ZetaError::ZetaUndefined(reason));
    }
    let bound = degree_bound(v.group());
    let determining = 2 * bound + 1;
    let count = determining + CERTIFICATION_TERMS;
    let rn = v.reidemeister_numbers(count as u64);
    let full = zeta_series(&rn)?;
    let coeffs = full.integer_coeffs().ok_or(ZetaError::NotIntegral)?;
    let rational = reconstruct(&full.truncate(determining), bound)?;

    let expanded = rational.expand(full.len());
    if let Some(index) = (0..full.len()).find(|&i| expanded[i] != coeffs[i]) {
        return Err(ZetaError::CertificationFailure {
            index,
            expected: coeffs[index].clone(),
            found: expanded[index].clone(),
        });
    }

    let (dbar, dvec) = v.mod2_data();
    // without a ℤᵏ factor there is no mod-2 count at all
    let combo = if dbar.rows() == 0 {
        BasisCombo::default()
    } else {
        decompose(dbar, dvec)?
    };
    let second = second_factor(&combo);
    let second_factor_divides = rational.denominator.exact_div(&second.denominator).is_some();
    let radius = radius(&rational);
    Ok(ZetaResult {
        rational,
        radius,
        degree_bound: bound,
        rnumbers: rn.into_iter().map(|r| r.finite().cloned().expect("checked finite")).collect(),
        series: full,
        second_factor_c: combo,
        second_factor_divides,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlinalg::PolyZ;

    fn fib(d: &[i64]) -> ZetaResult {
        let g = DiagZ2Group::new(2, 2).unwrap();
        full_pipeline(&g, &AffineAut::from_i64(&[&[1, 1], &[1, 0]], d).unwrap()).unwrap()
    }

    #[test]
    fn series_of_constant_one() {
        let s = zeta_series(&vec![RNumber::Finite(1.into()); 6]).unwrap();
        assert_eq!(s.integer_coeffs().unwrap(), vec![BigInt::from(1); 7]);
    }

    #[test]
    fn series_of_lucas_numbers() {
        let lucas = [1, 3, 4, 7, 11, 18, 29];
        let s = zeta_series(&lucas.map(|x| RNumber::Finite(x.into()))).unwrap();
        let fib: Vec<BigInt> = [1, 1, 2, 3, 5, 8, 13, 21].map(BigInt::from).to_vec();
        assert_eq!(s.integer_coeffs().unwrap(), fib);
    }

    #[test]
    fn infinite_term_is_rejected() {
        let r = [RNumber::Finite(2.into()), RNumber::Infinite];
        assert_eq!(zeta_series(&r), Err(ZetaError::InfiniteTerm(2)));
    }

    #[test]
    fn fibonacci_automorphism() {
        let z = fib(&[0, 0]);
        assert_eq!(z.rational.numerator, PolyZ::one());
        assert_eq!(z.rational.denominator, PolyZ::from_i64(&[1, -2, 0, 0, 2, 0, -1]));
        assert!(z.rational.certified);
        assert_eq!(z.degree_bound, 8);
        assert_eq!(z.rnumbers.len(), 27);
        assert_eq!(z.rnumbers[..6], [2, 4, 8, 8, 12, 22].map(BigInt::from));
        assert_eq!(z.second_factor_c, BasisCombo::new(2, [(1, 1), (3, 1)]));
        assert!(z.second_factor_divides);
        assert!((z.radius.value - 0.618_033_988_7).abs() < 1e-9);
    }

    #[test]
    fn fibonacci_with_shift() {
        // x ↦ D̄x + (1,0) fixes (1,1) and cycles 00 → 10 → 01
        let z = fib(&[1, 0]);
        assert_eq!(z.second_factor_c, BasisCombo::new(2, [(1, 1), (3, 1)]));
        assert!(z.second_factor_divides);
        let lucas_part = PolyZ::from_i64(&[1, -1, -1]);
        assert!(z.rational.denominator.divisible_by(&lucas_part));
    }

    #[test]
    fn hyperbolic_torus() {
        let g = DiagZ2Group::new(2, 0).unwrap();
        let z = full_pipeline(&g, &AffineAut::from_i64(&[&[2, 1], &[1, 1]], &[0, 0]).unwrap()).unwrap();
        assert_eq!(z.rational.numerator, PolyZ::from_i64(&[1, -2, 1]));
        assert_eq!(z.rational.denominator, PolyZ::from_i64(&[1, -3, 1]));
        let golden_sq = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((z.radius.value - golden_sq).abs() < 1e-9);
    }

    #[test]
    fn undefined_cases() {
        let g = DiagZ2Group::new(2, 2).unwrap();
        let id = AffineAut::from_i64(&[&[1, 0], &[0, 1]], &[0, 0]).unwrap();
        assert_eq!(
            full_pipeline(&g, &id).unwrap_err(),
            ZetaError::ZetaUndefined(Obstruction::Cyclotomic(1))
        );
        let g = DiagZ2Group::new(1, 1).unwrap();
        let a = AffineAut::from_i64(&[&[-1]], &[0]).unwrap();
        assert_eq!(
            full_pipeline(&g, &a).unwrap_err(),
            ZetaError::ZetaUndefined(Obstruction::RInfinity)
        );
    }

    #[test]
    fn tail_estimate_is_close() {
        let z = fib(&[0, 0]);
        let est = tail_radius_estimate(&z.rational, 3000).unwrap();
        assert!((est - z.radius.value).abs() < 1e-3, "{est}");
    }
}
