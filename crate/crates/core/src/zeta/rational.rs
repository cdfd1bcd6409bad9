use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::series::PowerSeriesQ;
use super::ZetaError;
use crate::group::DiagZ2Group;
use crate::intlinalg::PolyZ;
use crate::seqdecomp::BasisCombo;

/// `numerator / denominator` in lowest terms with integer coefficients and
/// `denominator(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFn {
    pub numerator: PolyZ,
    pub denominator: PolyZ,
    pub certified: bool,
    pub degree_bound_used: usize,
}

impl RationalFn {
    /// Reduces `p / q` over ℚ and normalizes `q(0)` to 1. Fails when the
    /// reduced form has non-integer coefficients.
    pub fn normalized(p: &PolyZ, q: &PolyZ) -> Result<(PolyZ, PolyZ), ZetaError> {
        if q.is_zero() {
            return Err(ZetaError::NoSolution);
        }
        let g = p.gcd(q);
        let p = exact_div_q(p, &g);
        let q = exact_div_q(q, &g);
        let q0 = q.coeff(0);
        if q0.is_zero() {
            return Err(ZetaError::NoSolution);
        }
        let content = p.content().gcd(&q.content());
        let mut scale = content;
        if q0.is_negative() {
            scale = -scale;
        }
        let p = PolyZ::new(p.coeffs().iter().map(|c| c / &scale).collect());
        let q = PolyZ::new(q.coeffs().iter().map(|c| c / &scale).collect());
        if !q.coeff(0).is_one() {
            return Err(ZetaError::NotIntegral);
        }
        Ok((p, q))
    }

    pub fn expand(&self, len: usize) -> Vec<BigInt> {
        PowerSeriesQ::expand_rational(&self.numerator, &self.denominator, len)
    }

    pub fn numerator_degree(&self) -> usize {
        self.numerator.degree().unwrap_or(0)
    }

    pub fn denominator_degree(&self) -> usize {
        self.denominator.degree().unwrap_or(0)
    }
}

/// `a / g` for a primitive `g` dividing `a` in ℚ[x]; the quotient is
/// integral by Gauss's lemma.
fn exact_div_q(a: &PolyZ, g: &PolyZ) -> PolyZ {
    a.exact_div(g).expect("gcd divides both operands")
}

/// Proven bound on `deg numerator + deg denominator`: `2^(n+1)`.
pub fn degree_bound(group: &DiagZ2Group) -> usize {
    1usize << (group.n() + 1)
}

/// Padé reconstruction: the unique `P/Q` with `deg P, deg Q ≤ bound`,
/// `Q(0) = 1` and `Q·S ≡ P (mod z^(2·bound+1))`.
///
/// The denominator is found as the lowest-degree solution of the Toeplitz
/// system `Σ_{j=0}^{dq} q_j s_{i-j} = 0` for `i = bound+1..=2·bound`. Columns
/// are eliminated left to right; after each column the system restricted to
/// the columns seen so far is consistent exactly when the reduced right-hand
/// side vanishes below the pivot rows. Uniqueness of degree-`bound` Padé
/// forms makes the first consistent `dq` the reduced denominator.
pub fn reconstruct(series: &PowerSeriesQ, bound: usize) -> Result<RationalFn, ZetaError> {
    let need = 2 * bound + 1;
    if series.len() < need {
        return Err(ZetaError::SeriesTooShort {
            need,
            have: series.len(),
        });
    }
    let s = series.coeffs();
    if !s[0].is_one() {
        return Err(ZetaError::NoSolution);
    }
    let rows = bound;
    // columns 1..=bound of the Toeplitz block, plus the right-hand side
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let i = bound + 1 + r;
            let mut row: Vec<BigRational> = (1..=bound).map(|j| s[i - j].clone()).collect();
            row.push(-s[i].clone());
            row
        })
        .collect();
    let rhs = bound;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let consistent = |a: &Vec<Vec<BigRational>>, used: usize| a[used..].iter().all(|row| row[rhs].is_zero());

    let mut degree = None;
    if consistent(&a, 0) {
        degree = Some(0);
    } else {
        for col in 0..bound {
            let used = pivots.len();
            if let Some(p) = (used..rows).find(|&r| !a[r][col].is_zero()) {
                a.swap(used, p);
                let inv = a[used][col].recip();
                for x in a[used].iter_mut() {
                    *x *= &inv;
                }
                let pivot_row = a[used].clone();
                for (r, row) in a.iter_mut().enumerate() {
                    if r == used || row[col].is_zero() {
                        continue;
                    }
                    let f = row[col].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row).skip(col) {
                        *x -= &f * y;
                    }
                }
                pivots.push((used, col));
            }
            if consistent(&a, pivots.len()) {
                degree = Some(col + 1);
                break;
            }
        }
    }
    let dq = degree.ok_or(ZetaError::NoSolution)?;

    let mut q = vec![BigRational::zero(); dq + 1];
    q[0] = BigRational::one();
    for &(row, col) in &pivots {
        if col < dq {
            q[col + 1] = a[row][rhs].clone();
        }
    }
    // P = Q·S mod z^(bound+1)
    let p: Vec<BigRational> = (0..=bound)
        .map(|i| {
            (0..=dq.min(i))
                .map(|j| &q[j] * &s[i - j])
                .fold(BigRational::zero(), |acc, x| acc + x)
        })
        .collect();

    let (pz, qz) = (clear_denominators(&p), clear_denominators(&q));
    let (numerator, denominator) = RationalFn::normalized(&pz, &qz)?;

    // the defining congruence, checked exactly
    let expanded = PowerSeriesQ::expand_rational(&numerator, &denominator, need);
    let matches = expanded
        .iter()
        .zip(s)
        .all(|(x, y)| BigRational::from_integer(x.clone()) == *y);
    if !matches {
        return Err(ZetaError::NoSolution);
    }
    Ok(RationalFn {
        numerator,
        denominator,
        certified: true,
        degree_bound_used: bound,
    })
}

fn clear_denominators(c: &[BigRational]) -> PolyZ {
    let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    PolyZ::new(c.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect())
}

/// `∏ (1 - zⁱ)^(-cᵢ)`, expanded.
pub fn second_factor(combo: &BasisCombo) -> RationalFn {
    let mut denominator = PolyZ::one();
    for (i, c) in combo.iter() {
        let factor = PolyZ::one_minus_monomial(BigInt::one(), i as usize);
        denominator = denominator.mul(&factor.pow(c as u32));
    }
    RationalFn {
        numerator: PolyZ::one(),
        denominator,
        certified: true,
        degree_bound_used: combo.total() as usize,
    }
}
