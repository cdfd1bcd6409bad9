use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::intlinalg::PolyZ;

/// Truncated power series with exact rational coefficients, lowest order first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeriesQ {
    coeffs: Vec<BigRational>,
}

impl PowerSeriesQ {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Number of known coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, len: usize) -> PowerSeriesQ {
        PowerSeriesQ::new(self.coeffs[..len.min(self.coeffs.len())].to_vec())
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    /// `exp(Σ_{k≥1} r_k zᵏ / k)` to `r.len() + 1` terms via
    /// `m·e_m = Σ_{j=1}^{m} r_j e_{m-j}`.
    pub fn exp_of_log_series(r: &[BigInt]) -> PowerSeriesQ {
        let mut e: Vec<BigRational> = Vec::with_capacity(r.len() + 1);
        e.push(BigRational::one());
        for m in 1..=r.len() {
            let mut acc = BigRational::zero();
            for j in 1..=m {
                acc += &e[m - j] * BigRational::from_integer(r[j - 1].clone());
            }
            e.push(acc / BigRational::from_integer(BigInt::from(m)));
        }
        PowerSeriesQ::new(e)
    }

    /// Inverse of [`Self::exp_of_log_series`]: the coefficients `r_k` of
    /// `z·f'(z)/f(z)` for `k = 1..len`. Requires `f(0) = 1`.
    pub fn log_derivative(&self) -> Vec<BigRational> {
        assert!(
            self.coeffs.first().is_some_and(One::is_one),
            "log-derivative needs constant term 1"
        );
        let e = &self.coeffs;
        let mut r: Vec<BigRational> = Vec::with_capacity(e.len().saturating_sub(1));
        for m in 1..e.len() {
            let mut acc = BigRational::from_integer(BigInt::from(m)) * &e[m];
            for j in 1..m {
                acc -= &r[j - 1] * &e[m - j];
            }
            r.push(acc);
        }
        r
    }

    /// Taylor expansion of `p / q` to `len` terms by long division.
    /// Requires `q(0) = ±1` so the expansion stays integral.
    pub fn expand_rational(p: &PolyZ, q: &PolyZ, len: usize) -> Vec<BigInt> {
        let q0 = q.coeff(0);
        assert!(q0 == BigInt::one() || q0 == -BigInt::one(), "denominator must have constant term ±1");
        let qc = q.coeffs();
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        for m in 0..len {
            let mut acc = p.coeff(m);
            for (j, qj) in qc.iter().enumerate().skip(1).take(m) {
                acc -= qj * &out[m - j];
            }
            out.push(acc * &q0);
        }
        out
    }
}
