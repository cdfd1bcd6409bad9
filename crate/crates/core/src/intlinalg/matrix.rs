use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cyclotomic::{euler_phi, CyclotomicTable};
use super::poly::PolyZ;
use super::IntError;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatZ {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl MatZ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self, IntError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(IntError::DimensionMismatch(format!(
                "row {i} has {} entries, expected {cols}",
                r.len()
            )));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, IntError> {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub(crate) fn require_square(&self) -> Result<usize, IntError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(IntError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn add(&self, other: &MatZ) -> Result<MatZ, IntError> {
        self.same_shape(other)?;
        Ok(MatZ {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &MatZ) -> Result<MatZ, IntError> {
        self.same_shape(other)?;
        Ok(MatZ {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> MatZ {
        MatZ {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> MatZ {
        MatZ {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    fn same_shape(&self, other: &MatZ) -> Result<(), IntError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(IntError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &MatZ) -> Result<MatZ, IntError> {
        if self.cols != other.rows {
            return Err(IntError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MatZ::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, IntError> {
        if self.cols != v.len() {
            return Err(IntError::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn transpose(&self) -> MatZ {
        let mut t = MatZ::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatZ {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = MatZ::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    pub fn block_diag(a: &MatZ, b: &MatZ) -> MatZ {
        let mut out = MatZ::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                out[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                out[(a.rows + i, a.cols + j)] = b[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().map(Signed::abs).max().unwrap_or_default()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, IntError> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `self^k` by repeated squaring; `self^0 = I`.
    pub fn pow(&self, mut k: u64) -> Result<MatZ, IntError> {
        let n = self.require_square()?;
        let mut result = MatZ::identity(n);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `I + A + … + A^(k-1)`, for `k ≥ 1`.
    pub fn geometric_sum(&self, k: u64) -> Result<MatZ, IntError> {
        let n = self.require_square()?;
        if k == 0 {
            return Err(IntError::InvalidExponent(k));
        }
        // S(2m) = S(m)(I + A^m), S(m+1) = I + A·S(m)
        let mut sum = MatZ::identity(n);
        let mut power = self.clone();
        let mut len = 1u64;
        for bit in (0..63 - k.leading_zeros()).rev() {
            sum = sum.mul(&MatZ::identity(n).add(&power)?)?;
            power = power.mul(&power)?;
            len *= 2;
            if (k >> bit) & 1 == 1 {
                sum = MatZ::identity(n).add(&self.mul(&sum)?)?;
                power = power.mul(self)?;
                len += 1;
            }
        }
        debug_assert_eq!(len, k);
        Ok(sum)
    }

    /// Characteristic polynomial `det(xI - A)` by the Faddeev–LeVerrier
    /// recurrence; every division is exact over ℤ.
    pub fn charpoly(&self) -> Result<PolyZ, IntError> {
        let n = self.require_square()?;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = MatZ::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m)?;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let t = self.mul(&m)?.trace();
            let (q, r) = t.div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            coeffs[n - k] = -q;
        }
        Ok(PolyZ::new(coeffs))
    }

    /// Evaluates a polynomial at this matrix (Horner).
    pub fn eval_poly(&self, p: &PolyZ) -> Result<MatZ, IntError> {
        let n = self.require_square()?;
        let mut acc = MatZ::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        Ok(acc)
    }

    /// Diagonal of the Smith normal form, `d₁ | d₂ | …`, all nonnegative.
    /// Zeros (for singular input) come last.
    pub fn smith_normal_form(&self) -> Result<Vec<BigInt>, IntError> {
        let n = self.require_square()?;
        let mut a = self.clone();
        for t in 0..n {
            loop {
                // smallest nonzero entry of the trailing block becomes the pivot
                let mut best: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..n {
                        if a[(i, j)].is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return Ok(a.diagonal_abs());
                };
                a.swap_rows(t, pi);
                a.swap_cols(t, pj);
                let pivot = a[(t, t)].clone();
                let mut clean = true;
                for i in t + 1..n {
                    let q = a[(i, t)].div_floor(&pivot);
                    if !q.is_zero() {
                        for j in t..n {
                            let v = &q * &a[(t, j)];
                            a[(i, j)] -= v;
                        }
                    }
                    clean &= a[(i, t)].is_zero();
                }
                for j in t + 1..n {
                    let q = a[(t, j)].div_floor(&pivot);
                    if !q.is_zero() {
                        for i in t..n {
                            let v = &q * &a[(i, t)];
                            a[(i, j)] -= v;
                        }
                    }
                    clean &= a[(t, j)].is_zero();
                }
                if !clean {
                    continue;
                }
                // pivot must divide the rest; otherwise fold the offending row in
                let bad_row = (t + 1..n).find(|&i| (t + 1..n).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
                match bad_row {
                    Some(i) => {
                        for j in t..n {
                            let v = a[(i, j)].clone();
                            a[(t, j)] += v;
                        }
                    }
                    None => break,
                }
            }
        }
        Ok(a.diagonal_abs())
    }

    fn diagonal_abs(&self) -> Vec<BigInt> {
        let mut d: Vec<BigInt> = (0..self.rows).map(|i| self[(i, i)].abs()).collect();
        // nonzero entries already form a divisor chain; push zeros to the end
        d.sort_by_key(|x| x.is_zero());
        d
    }

    /// Smallest `m` such that `Φ_m` divides the characteristic polynomial,
    /// i.e. some eigenvalue is a primitive `m`-th root of unity.
    ///
    /// Every `m` with `φ(m) ≤ n` satisfies `m ≤ 2n² + 2`, so the scan is complete.
    pub fn root_of_unity_order(&self) -> Result<Option<u64>, IntError> {
        let n = self.require_square()?;
        if self.det()?.is_zero() {
            return Err(IntError::Singular);
        }
        let p = self.charpoly()?;
        let mut table = CyclotomicTable::new();
        let limit = 2 * (n as u64).pow(2) + 2;
        for m in 1..=limit {
            if euler_phi(m) > n as u64 {
                continue;
            }
            let phi = table.get(m);
            if p.exact_div(&phi).is_some() {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    pub fn has_root_of_unity_eigenvalue(&self) -> Result<bool, IntError> {
        Ok(self.root_of_unity_order()?.is_some())
    }
}

impl std::ops::Index<(usize, usize)> for MatZ {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatZ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for MatZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "MatZ{rows:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mz(rows: &[&[i64]]) -> MatZ {
        MatZ::from_i64(rows).unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    /// Cofactor expansion, an elimination-free second route.
    fn det_cofactor(a: &MatZ) -> BigInt {
        let n = a.rows();
        if n == 0 {
            return BigInt::one();
        }
        (0..n)
            .map(|j| {
                let minor_rows: Vec<Vec<BigInt>> = (1..n)
                    .map(|i| (0..n).filter(|&c| c != j).map(|c| a[(i, c)].clone()).collect())
                    .collect();
                let minor = MatZ::from_rows(&minor_rows).unwrap();
                let term = &a[(0, j)] * det_cofactor(&minor);
                if j % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn det_examples() {
        assert_eq!(MatZ::identity(3).det().unwrap(), 1.into());
        assert_eq!(mz(&[&[1, 1], &[1, 0]]).det().unwrap(), (-1).into());
        assert_eq!(mz(&[&[0, -1], &[-1, 1]]).det().unwrap(), (-1).into());
        assert_eq!(MatZ::zeros(0, 0).det().unwrap(), 1.into());
    }

    #[test]
    fn det_needs_pivoting() {
        let a = mz(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 0]]);
        assert_eq!(a.det().unwrap(), det_cofactor(&a));
        let s = mz(&[&[1, 2], &[2, 4]]);
        assert_eq!(s.det().unwrap(), 0.into());
    }

    #[test]
    fn non_square_errors() {
        let a = mz(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(matches!(a.det(), Err(IntError::NotSquare { .. })));
        assert!(a.pow(2).is_err());
        assert!(a.charpoly().is_err());
        assert!(a.smith_normal_form().is_err());
        assert!(a.geometric_sum(2).is_err());
    }

    #[test]
    fn pow_examples() {
        let f = mz(&[&[1, 1], &[1, 0]]);
        assert_eq!(f.pow(0).unwrap(), MatZ::identity(2));
        assert_eq!(f.pow(2).unwrap(), mz(&[&[2, 1], &[1, 1]]));
        assert_eq!(f.pow(3).unwrap(), mz(&[&[3, 2], &[2, 1]]));
    }

    #[test]
    fn geometric_sum_examples() {
        let f = mz(&[&[1, 1], &[1, 0]]);
        assert_eq!(f.geometric_sum(1).unwrap(), MatZ::identity(2));
        assert_eq!(f.geometric_sum(2).unwrap(), mz(&[&[2, 1], &[1, 1]]));
        assert_eq!(MatZ::identity(2).geometric_sum(5).unwrap(), mz(&[&[5, 0], &[0, 5]]));
        assert!(matches!(f.geometric_sum(0), Err(IntError::InvalidExponent(0))));
        let direct = (0..7).fold(MatZ::zeros(2, 2), |acc, i| acc.add(&f.pow(i).unwrap()).unwrap());
        assert_eq!(f.geometric_sum(7).unwrap(), direct);
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(MatZ::identity(2).charpoly().unwrap(), PolyZ::from_i64(&[1, -2, 1]));
        assert_eq!(mz(&[&[1, 1], &[1, 0]]).charpoly().unwrap(), PolyZ::from_i64(&[-1, -1, 1]));
        assert_eq!(mz(&[&[2, 1], &[1, 1]]).charpoly().unwrap(), PolyZ::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn smith_examples() {
        assert_eq!(MatZ::identity(2).smith_normal_form().unwrap(), big(&[1, 1]));
        assert_eq!(mz(&[&[2, 0], &[0, 3]]).smith_normal_form().unwrap(), big(&[1, 6]));
        assert_eq!(mz(&[&[0, -1], &[-1, 1]]).smith_normal_form().unwrap(), big(&[1, 1]));
        assert_eq!(mz(&[&[2, 4], &[4, 8]]).smith_normal_form().unwrap(), big(&[2, 0]));
        assert_eq!(mz(&[&[6, 0], &[0, 4]]).smith_normal_form().unwrap(), big(&[2, 12]));
    }

    #[test]
    fn root_of_unity_examples() {
        assert_eq!(MatZ::identity(2).root_of_unity_order().unwrap(), Some(1));
        assert_eq!(mz(&[&[1, 1], &[1, 0]]).root_of_unity_order().unwrap(), None);
        assert_eq!(mz(&[&[0, -1], &[1, 0]]).root_of_unity_order().unwrap(), Some(4));
        assert_eq!(mz(&[&[-1, 0], &[0, -1]]).root_of_unity_order().unwrap(), Some(2));
        // companion of Φ_7 hides inside a 6x6 block
        let mut c = MatZ::zeros(6, 6);
        for i in 1..6 {
            c[(i, i - 1)] = BigInt::one();
        }
        for i in 0..6 {
            c[(i, 5)] = BigInt::from(-1);
        }
        assert_eq!(c.root_of_unity_order().unwrap(), Some(7));
        assert!(matches!(mz(&[&[1, 2], &[2, 4]]).root_of_unity_order(), Err(IntError::Singular)));
    }

    #[test]
    fn cofactor_agrees_on_fixed_matrix() {
        let a = mz(&[&[2, -1, 0, 3], &[1, 1, 4, -2], &[0, 5, -3, 1], &[7, 0, 2, 2]]);
        assert_eq!(a.det().unwrap(), det_cofactor(&a));
    }

    pub(crate) fn cofactor(a: &MatZ) -> BigInt {
        det_cofactor(a)
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn square(max_n: usize) -> impl Strategy<Value = MatZ> {
            (1..=max_n).prop_flat_map(|n| {
                prop::collection::vec(-4i64..=4, n * n).prop_map(move |v| {
                    let rows: Vec<Vec<BigInt>> =
                        v.chunks(n).map(|r| r.iter().map(|&x| x.into()).collect()).collect();
                    MatZ::from_rows(&rows).unwrap()
                })
            })
        }

        fn pair(max_n: usize) -> impl Strategy<Value = (MatZ, MatZ)> {
            (1..=max_n).prop_flat_map(|n| {
                let one = prop::collection::vec(-4i64..=4, n * n);
                (one.clone(), one).prop_map(move |(a, b)| {
                    let mk = |v: Vec<i64>| {
                        let rows: Vec<Vec<BigInt>> =
                            v.chunks(n).map(|r| r.iter().map(|&x| x.into()).collect()).collect();
                        MatZ::from_rows(&rows).unwrap()
                    };
                    (mk(a), mk(b))
                })
            })
        }

        proptest! {
            #[test]
            fn det_is_multiplicative((a, b) in pair(6)) {
                prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), a.det().unwrap() * b.det().unwrap());
            }

            #[test]
            fn det_matches_cofactor(a in square(5)) {
                prop_assert_eq!(a.det().unwrap(), cofactor(&a));
            }

            #[test]
            fn cayley_hamilton(a in square(6)) {
                let p = a.charpoly().unwrap();
                prop_assert!(a.eval_poly(&p).unwrap().is_zero());
            }

            #[test]
            fn smith_product_is_abs_det(a in square(6)) {
                let d = a.det().unwrap();
                let snf = a.smith_normal_form().unwrap();
                let prod: BigInt = snf.iter().product();
                prop_assert_eq!(prod, d.abs());
                for w in snf.windows(2) {
                    if !w[1].is_zero() {
                        prop_assert!(w[1].is_multiple_of(&w[0]));
                    }
                }
            }

            #[test]
            fn det_of_one_minus_power_two_routes(a in square(4), k in 1u64..6) {
                let n = a.rows();
                let ak = a.pow(k).unwrap();
                let direct = MatZ::identity(n).sub(&ak).unwrap().det().unwrap();
                // det(I - A^k) = charpoly_{A^k}(1)
                let via_charpoly = ak.charpoly().unwrap().eval(&BigInt::one());
                prop_assert_eq!(direct, via_charpoly);
            }

            #[test]
            fn geometric_sum_telescopes(a in square(4), k in 1u64..=20) {
                let n = a.rows();
                let i = MatZ::identity(n);
                let lhs = a.geometric_sum(k).unwrap().mul(&i.sub(&a).unwrap()).unwrap();
                prop_assert_eq!(lhs, i.sub(&a.pow(k).unwrap()).unwrap());
            }
        }
    }
}
