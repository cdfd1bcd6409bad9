//! Linear algebra over the two-element field.
//!
//! Vectors and matrix rows are packed into `u64` words; elimination works a
//! word at a time with XOR. Pivot selection is always the first nonzero entry
//! in column order, so every derived matrix (kernels, change-of-basis
//! matrices) is reproducible from run to run.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F2Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular over GF(2)")]
    Singular,
    #[error("matrix is not strictly upper triangular")]
    NotNilpotentUpperTriangular,
    #[error("solution count 2^{0} does not fit in 64 bits")]
    CountOverflow(usize),
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VecF2 {
    len: usize,
    words: Vec<u64>,
}

impl VecF2 {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = u8>>(bits: I) -> Self {
        let bits: Vec<u8> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            v.set(i, b & 1 == 1);
        }
        v
    }

    /// Low `len` bits of `bits`, coordinate `i` at bit `i`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= WORD, "from_u64 needs len <= 64");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = bits & mask;
        }
        v
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 needs len <= 64");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &VecF2) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &VecF2) -> bool {
        assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Coordinates `start..start+len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> VecF2 {
        assert!(start + len <= self.len);
        let mut out = VecF2::zeros(len);
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }

    pub fn concat(&self, other: &VecF2) -> VecF2 {
        let mut out = VecF2::zeros(self.len + other.len);
        for (i, b) in self.bits().chain(other.bits()).enumerate() {
            out.set(i, b);
        }
        out
    }
}

impl fmt::Debug for VecF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VecF2(")?;
        for b in self.bits() {
            write!(f, "{}", b as u8)?;
        }
        write!(f, ")")
    }
}

/// A dense matrix over GF(2) with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatF2 {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl MatF2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries (only the low bit of each entry is used).
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, F2Error> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(F2Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x & 1 == 1);
            }
        }
        Ok(m)
    }

    pub fn from_row_vecs(cols: usize, rows: &[VecF2]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            m.set_row(i, r);
        }
        m
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

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / WORD] >> (j % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, i: usize) -> VecF2 {
        VecF2 {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn set_row(&mut self, i: usize, v: &VecF2) {
        assert_eq!(v.len, self.cols);
        self.row_words_mut(i).copy_from_slice(&v.words);
    }

    pub fn column(&self, j: usize) -> VecF2 {
        let mut v = VecF2::zeros(self.rows);
        for i in 0..self.rows {
            v.set(i, self.get(i, j));
        }
        v
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        if dst == src {
            return;
        }
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> MatF2 {
        let mut t = MatF2::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn add(&self, other: &MatF2) -> Result<MatF2, F2Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(F2Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MatF2) -> Result<MatF2, F2Error> {
        if self.cols != other.rows {
            return Err(F2Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = MatF2::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let src = other.row_words(k).to_vec();
                    for (x, y) in out.row_words_mut(i).iter_mut().zip(&src) {
                        *x ^= y;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &VecF2) -> Result<VecF2, F2Error> {
        if self.cols != v.len {
            return Err(F2Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows, self.cols, v.len
            )));
        }
        let mut out = VecF2::zeros(self.rows);
        for i in 0..self.rows {
            let ones: u32 = self
                .row_words(i)
                .iter()
                .zip(&v.words)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones % 2 == 1 {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &VecF2) -> Result<VecF2, F2Error> {
        if self.rows != v.len {
            return Err(F2Error::DimensionMismatch(format!(
                "cannot apply row vector of length {} to {}x{} matrix",
                v.len, self.rows, self.cols
            )));
        }
        let mut out = VecF2::zeros(self.cols);
        for i in 0..self.rows {
            if v.get(i) {
                for (x, y) in out.words.iter_mut().zip(self.row_words(i)) {
                    *x ^= y;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut k: u64) -> Result<MatF2, F2Error> {
        self.require_square()?;
        let mut result = MatF2::identity(self.rows);
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

    /// `I + A + … + A^(k-1)`; the empty sum (`k = 0`) is zero.
    pub fn geometric_sum(&self, k: u64) -> Result<MatF2, F2Error> {
        self.require_square()?;
        let n = self.rows;
        let mut sum = MatF2::zeros(n, n);
        let mut power = MatF2::identity(n);
        // invariant: sum = S(len), power = A^len
        for bit in (0..64 - k.leading_zeros()).rev() {
            sum = sum.add(&sum.mul(&power)?)?;
            power = power.mul(&power)?;
            if (k >> bit) & 1 == 1 {
                sum = MatF2::identity(n).add(&self.mul(&sum)?)?;
                power = power.mul(self)?;
            }
        }
        Ok(sum)
    }

    /// Smallest `t ≥ 1` with `A^t = I`. Requires an invertible matrix.
    pub fn multiplicative_order(&self) -> Result<u64, F2Error> {
        if !self.is_invertible() {
            return Err(F2Error::Singular);
        }
        let id = MatF2::identity(self.rows);
        let mut power = self.clone();
        let mut t = 1;
        while power != id {
            power = power.mul(self)?;
            t += 1;
        }
        Ok(t)
    }

    fn require_square(&self) -> Result<(), F2Error> {
        if self.is_square() {
            Ok(())
        } else {
            Err(F2Error::DimensionMismatch(format!(
                "expected a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_rows(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<MatF2, F2Error> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(MatF2::zeros(0, 0));
        }
        let mut aug = MatF2::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, true);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(F2Error::Singular);
        }
        Ok(aug.submatrix(0, n, n, n))
    }

    /// Basis of the right kernel `{x : self·x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<VecF2> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().peekable();
        for free in 0..self.cols {
            if pivot_iter.peek() == Some(&&free) {
                pivot_iter.next();
                continue;
            }
            let mut x = VecF2::zeros(self.cols);
            x.set(free, true);
            for (row, &pc) in pivots.iter().enumerate() {
                if m.get(row, free) {
                    x.set(pc, true);
                }
            }
            basis.push(x);
        }
        basis
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatF2 {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = MatF2::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if self.get(r0 + i, c0 + j) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn block_diag(a: &MatF2, b: &MatF2) -> MatF2 {
        let mut out = MatF2::zeros(a.rows + b.rows, a.cols + b.cols);
        out.paste(0, 0, a);
        out.paste(a.rows, a.cols, b);
        out
    }

    pub fn paste(&mut self, r0: usize, c0: usize, block: &MatF2) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..=i).all(|j| !self.get(i, j)))
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| !self.get(i, j)))
    }
}

impl fmt::Debug for MatF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatF2[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j) as u8)?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub consistent: bool,
    /// One particular solution; `None` when the system is inconsistent.
    pub solution: Option<VecF2>,
    pub rank: usize,
    pub nullity: usize,
}

pub fn rank_and_solve(a: &MatF2, b: &VecF2) -> Result<SolveOutcome, F2Error> {
    if a.rows != b.len {
        return Err(F2Error::DimensionMismatch(format!(
            "{} equations but right-hand side has length {}",
            a.rows, b.len
        )));
    }
    let n = a.cols;
    let mut aug = MatF2::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        for j in 0..n {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, n, b.get(i));
    }
    let pivots = aug.rref_in_place();
    let consistent = pivots.last() != Some(&n);
    let rank = if consistent { pivots.len() } else { pivots.len() - 1 };
    let solution = consistent.then(|| {
        let mut x = VecF2::zeros(n);
        for (row, &pc) in pivots.iter().enumerate() {
            if aug.get(row, n) {
                x.set(pc, true);
            }
        }
        x
    });
    Ok(SolveOutcome {
        consistent,
        solution,
        rank,
        nullity: n - rank,
    })
}

/// Number of `x` with `a·x = b`: zero, or `2^nullity`.
pub fn count_solutions(a: &MatF2, b: &VecF2) -> Result<u64, F2Error> {
    let outcome = rank_and_solve(a, b)?;
    if !outcome.consistent {
        return Ok(0);
    }
    if outcome.nullity >= 64 {
        return Err(F2Error::CountOverflow(outcome.nullity));
    }
    Ok(1u64 << outcome.nullity)
}

/// Solves `n·x + x·d = b` for `x`, where `n` is strictly upper triangular and
/// `d` invertible. Rows are resolved bottom-up: the last row satisfies
/// `x_last·d = b_last`, and each earlier row picks up the contribution of the
/// rows below it through `n`.
pub fn sylvester_solve(n: &MatF2, d: &MatF2, b: &MatF2) -> Result<MatF2, F2Error> {
    if !n.is_square() || !d.is_square() || b.rows != n.rows || b.cols != d.rows {
        return Err(F2Error::DimensionMismatch(format!(
            "n is {}x{}, d is {}x{}, b is {}x{}",
            n.rows, n.cols, d.rows, d.cols, b.rows, b.cols
        )));
    }
    if !n.is_strictly_upper_triangular() {
        return Err(F2Error::NotNilpotentUpperTriangular);
    }
    let d_inv = d.inverse()?;
    let k = n.rows;
    let mut x = MatF2::zeros(k, d.rows);
    for i in (0..k).rev() {
        let mut rhs = b.row(i);
        for j in i + 1..k {
            if n.get(i, j) {
                rhs.xor_assign(&x.row(j));
            }
        }
        x.set_row(i, &d_inv.vec_mul(&rhs)?);
    }
    let residual = n.mul(&x)?.add(&x.mul(d)?)?.add(b)?;
    assert!(residual.is_zero(), "Sylvester residual must vanish");
    Ok(x)
}

/// Block split `p·d·p⁻¹ = diag(d1, d2)` with `d1` unipotent upper triangular
/// and `d2` free of the eigenvalue 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub p: MatF2,
    pub p_inv: MatF2,
    pub size_unipotent: usize,
    pub d1: MatF2,
    pub d2: MatF2,
}

impl SplitResult {
    pub fn block_diagonal(&self) -> MatF2 {
        MatF2::block_diag(&self.d1, &self.d2)
    }
}

/// Peels eigenvalue-1 eigenvectors off the trailing block one at a time,
/// reaching `[[d1, b], [0, d2]]`, then clears `b` with [`sylvester_solve`].
pub fn split_unipotent(d: &MatF2) -> Result<SplitResult, F2Error> {
    d.require_square()?;
    if !d.is_invertible() {
        return Err(F2Error::Singular);
    }
    let n = d.rows;
    let mut cur = d.clone();
    let mut p = MatF2::identity(n);
    let mut peeled = 0;
    while peeled < n {
        let m = n - peeled;
        let trailing = cur.submatrix(peeled, peeled, m, m);
        let shifted = trailing.add(&MatF2::identity(m))?;
        let Some(v) = shifted.kernel().into_iter().next() else {
            break;
        };
        // columns of s: v first, then the standard basis minus the pivot of v
        let pivot = v.first_one().expect("kernel vectors are nonzero");
        let mut s = MatF2::zeros(m, m);
        for i in 0..m {
            s.set(i, 0, v.get(i));
        }
        for (col, e) in (1..).zip((0..m).filter(|&e| e != pivot)) {
            s.set(e, col, true);
        }
        let s_inv = s.inverse()?;
        let mut change = MatF2::identity(n);
        change.paste(peeled, peeled, &s_inv);
        let mut change_inv = MatF2::identity(n);
        change_inv.paste(peeled, peeled, &s);
        cur = change.mul(&cur)?.mul(&change_inv)?;
        p = change.mul(&p)?;
        peeled += 1;
    }

    let k = peeled;
    let l = n - k;
    let d1 = cur.submatrix(0, 0, k, k);
    let d2 = cur.submatrix(k, k, l, l);
    let off = cur.submatrix(0, k, k, l);
    if k > 0 && l > 0 && !off.is_zero() {
        let nil = d1.add(&MatF2::identity(k))?;
        let shift = d2.add(&MatF2::identity(l))?;
        let x = sylvester_solve(&nil, &shift, &off)?;
        let mut t = MatF2::identity(n);
        t.paste(0, k, &x);
        // t is an involution over GF(2)
        p = t.mul(&p)?;
    }
    let p_inv = p.inverse()?;
    let result = SplitResult {
        size_unipotent: k,
        d1,
        d2,
        p_inv,
        p,
    };
    debug_assert_eq!(
        result.p.mul(d).unwrap().mul(&result.p_inv).unwrap(),
        result.block_diagonal()
    );
    Ok(result)
}
