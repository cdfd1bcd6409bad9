//! Decomposition of the mod-2 solution-count sequence
//! `v_k = #{x ∈ F₂ⁿ : (I - Dᵏ)x = (I + D + … + D^(k-1))d}`
//! into the basis sequences `aⁱ` (`aⁱ_k = i` when `i | k`, else 0).
//!
//! `V_k` is exactly the set of points fixed by the `k`-th iterate of the
//! affine permutation `x ↦ Dx + d`, so `W_k` (points first reached at `k`)
//! is the set of points on cycles of length `k` and `cᵢ = wᵢ / i` counts
//! those cycles. Two independent routes compute the coefficients:
//!
//! * enumeration: walk the cycles of the affine permutation on all `2ⁿ`
//!   points (`n ≤ ENUMERATION_CAP`);
//! * blocks: split `D` into a unipotent block and a block without
//!   eigenvalue 1, count solutions per block with rank computations, and
//!   multiply the two sequences with `aᵏ·aˡ = gcd(k,l)·a^lcm(k,l)`.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::f2linalg::{count_solutions, split_unipotent, F2Error, MatF2, VecF2};
use crate::intlinalg::divisors;

/// Largest dimension handled by exhaustive enumeration.
pub const ENUMERATION_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error(transparent)]
    F2(#[from] F2Error),
    #[error("dimension {0} exceeds the supported maximum")]
    TooLarge(usize),
    #[error("horizon must be at least 1")]
    EmptyHorizon,
    #[error("{count} points of exact period {period} is not a multiple of the period")]
    Indivisible { period: u64, count: i128 },
    #[error("enumeration and block-split decompositions disagree: {enumerated:?} vs {blocks:?}")]
    PathDisagreement {
        enumerated: BasisCombo,
        blocks: BasisCombo,
    },
}

/// Finite nonnegative combination `Σ cᵢ aⁱ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BasisCombo {
    coeffs: BTreeMap<u64, u64>,
    ambient_dim: usize,
}

impl BasisCombo {
    /// Builds a combination, dropping zero coefficients.
    pub fn new(ambient_dim: usize, coeffs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in coeffs {
            assert!(i >= 1, "basis index must be positive");
            if c > 0 {
                *map.entry(i).or_insert(0) += c;
            }
        }
        Self {
            coeffs: map,
            ambient_dim,
        }
    }

    /// `a¹`, the multiplicative identity (one point in dimension 0).
    pub fn unit() -> Self {
        Self::new(0, [(1, 1)])
    }

    pub fn coeff(&self, i: u64) -> u64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// `Σ i·cᵢ`; equals `2^ambient_dim` for every decomposition.
    pub fn total(&self) -> u128 {
        self.iter().map(|(i, c)| i as u128 * c as u128).sum()
    }

    /// `Σ_{i | k} i·cᵢ`.
    pub fn eval(&self, k: u64) -> u64 {
        assert!(k >= 1, "sequence index starts at 1");
        self.iter().filter(|&(i, _)| k.is_multiple_of(i)).map(|(i, c)| i * c).sum()
    }

    /// Componentwise product of the two sequences.
    pub fn combine(&self, other: &BasisCombo) -> BasisCombo {
        let mut out: BTreeMap<u64, u64> = BTreeMap::new();
        for (k, ck) in self.iter() {
            for (l, cl) in other.iter() {
                *out.entry(k.lcm(&l)).or_insert(0) += ck * cl * k.gcd(&l);
            }
        }
        BasisCombo {
            coeffs: out,
            ambient_dim: self.ambient_dim + other.ambient_dim,
        }
    }
}

pub fn eval(combo: &BasisCombo, k: u64) -> u64 {
    combo.eval(k)
}

pub fn combine(a: &BasisCombo, b: &BasisCombo) -> BasisCombo {
    a.combine(b)
}

/// Solution counts `v_k` and first-appearance counts `w_k` for `k = 1..=K`
/// (index 0 holds `k = 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqTables {
    pub v: Vec<u64>,
    pub w: Vec<u64>,
}

fn check_input(dbar: &MatF2, dvec: &VecF2) -> Result<usize, SeqError> {
    if !dbar.is_square() || dbar.rows() != dvec.len() {
        return Err(F2Error::DimensionMismatch(format!(
            "D is {}x{}, d has length {}",
            dbar.rows(),
            dbar.cols(),
            dvec.len()
        ))
        .into());
    }
    if !dbar.is_invertible() {
        return Err(F2Error::Singular.into());
    }
    if dbar.rows() >= 63 {
        return Err(SeqError::TooLarge(dbar.rows()));
    }
    Ok(dbar.rows())
}

/// The linear system whose solution set is `V_k`.
pub fn system_at(dbar: &MatF2, dvec: &VecF2, k: u64) -> Result<(MatF2, VecF2), F2Error> {
    let n = dbar.rows();
    let lhs = MatF2::identity(n).add(&dbar.pow(k)?)?;
    let rhs = dbar.geometric_sum(k)?.mul_vec(dvec)?;
    Ok((lhs, rhs))
}

fn mobius(mut m: u64) -> i128 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if m > 1 {
        result = -result;
    }
    result
}

/// Counts `v_k` by rank computations, then recovers `w_k` from
/// `v_k = Σ_{e | k} w_e` by Möbius inversion.
pub fn solution_sequence(dbar: &MatF2, dvec: &VecF2, horizon: u64) -> Result<SeqTables, SeqError> {
    check_input(dbar, dvec)?;
    if horizon == 0 {
        return Err(SeqError::EmptyHorizon);
    }
    let n = dbar.rows();
    let id = MatF2::identity(n);
    let mut power = dbar.clone();
    let mut partial = dvec.clone();
    let mut v = Vec::with_capacity(horizon as usize);
    for _ in 1..=horizon {
        // power = Dᵏ, partial = (I + … + D^(k-1))d
        v.push(count_solutions(&id.add(&power)?, &partial)?);
        power = power.mul(dbar)?;
        let mut next = dbar.mul_vec(&partial)?;
        next.xor_assign(dvec);
        partial = next;
    }
    let mut w = Vec::with_capacity(v.len());
    for k in 1..=horizon {
        let wk: i128 = divisors(k)
            .into_iter()
            .map(|e| mobius(k / e) * v[e as usize - 1] as i128)
            .sum();
        if wk < 0 || wk % k as i128 != 0 {
            return Err(SeqError::Indivisible {
                period: k,
                count: wk,
            });
        }
        w.push(wk as u64);
    }
    Ok(SeqTables { v, w })
}

/// Cycle structure of `x ↦ Dx + d` on all of F₂ⁿ.
pub fn decompose_by_enumeration(dbar: &MatF2, dvec: &VecF2) -> Result<BasisCombo, SeqError> {
    let n = check_input(dbar, dvec)?;
    if n > ENUMERATION_CAP {
        return Err(SeqError::TooLarge(n));
    }
    let columns: Vec<u64> = (0..n).map(|j| dbar.column(j).to_u64()).collect();
    let shift = dvec.to_u64();
    let step = |x: u64| -> u64 {
        let mut y = shift;
        let mut bits = x;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            y ^= columns[j];
            bits &= bits - 1;
        }
        y
    };
    let size = 1usize << n;
    let mut seen = vec![false; size];
    let mut cycles: BTreeMap<u64, u64> = BTreeMap::new();
    for start in 0..size {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut x = start as u64;
        loop {
            seen[x as usize] = true;
            len += 1;
            x = step(x);
            if x == start as u64 {
                break;
            }
        }
        *cycles.entry(len).or_insert(0) += 1;
    }
    Ok(BasisCombo::new(n, cycles))
}

/// Intermediate results of the block-split route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub size_unipotent: usize,
    /// Multiplicative order of the block without eigenvalue 1.
    pub order_nonunipotent: u64,
    pub unipotent: BasisCombo,
    pub nonunipotent: BasisCombo,
    pub combined: BasisCombo,
}

/// On a unipotent block `V_k = V_{2^r}` for `k = 2^r·odd`, and the `V_{2^r}`
/// form an increasing chain, so only powers of two carry weight.
fn unipotent_combo(d1: &MatF2, d1vec: &VecF2) -> Result<BasisCombo, SeqError> {
    let s = d1.rows();
    let full = 1u64 << s;
    let mut coeffs = Vec::new();
    let mut prev = 0u64;
    let mut m = 1u64;
    loop {
        let (lhs, rhs) = system_at(d1, d1vec, m)?;
        let vm = count_solutions(&lhs, &rhs)?;
        let wm = vm - prev;
        if !wm.is_multiple_of(m) {
            return Err(SeqError::Indivisible {
                period: m,
                count: wm as i128,
            });
        }
        coeffs.push((m, wm / m));
        prev = vm;
        if vm == full {
            break;
        }
        m *= 2;
    }
    Ok(BasisCombo::new(s, coeffs))
}

/// Without eigenvalue 1 the translation part shifts away, so `V_k` is the
/// kernel of `I - Dᵏ`; every point has period dividing the order of `D`.
fn nonunipotent_combo(d2: &MatF2) -> Result<(u64, BasisCombo), SeqError> {
    let l = d2.rows();
    let order = d2.multiplicative_order()?;
    let id = MatF2::identity(l);
    let zero = VecF2::zeros(l);
    let divs = divisors(order);
    let mut v = BTreeMap::new();
    for &e in &divs {
        v.insert(e, count_solutions(&id.add(&d2.pow(e)?)?, &zero)? as i128);
    }
    let mut coeffs = Vec::new();
    for &e in &divs {
        let we: i128 = divisors(e).into_iter().map(|f| mobius(e / f) * v[&f]).sum();
        if we < 0 || we % e as i128 != 0 {
            return Err(SeqError::Indivisible { period: e, count: we });
        }
        coeffs.push((e, (we / e as i128) as u64));
    }
    Ok((order, BasisCombo::new(l, coeffs)))
}

pub fn decompose_by_blocks(dbar: &MatF2, dvec: &VecF2) -> Result<BlockDecomposition, SeqError> {
    let n = check_input(dbar, dvec)?;
    let split = split_unipotent(dbar)?;
    let s = split.size_unipotent;
    let moved = split.p.mul_vec(dvec)?;
    let unipotent = unipotent_combo(&split.d1, &moved.slice(0, s))?;
    let (order, nonunipotent) = nonunipotent_combo(&split.d2)?;
    let combined = unipotent.combine(&nonunipotent);
    debug_assert_eq!(combined.ambient_dim(), n);
    Ok(BlockDecomposition {
        size_unipotent: s,
        order_nonunipotent: order,
        unipotent,
        nonunipotent,
        combined,
    })
}

/// Coefficients `cᵢ` with `v_k = Σ cᵢ aⁱ_k` for every `k ≥ 1`.
///
/// Up to [`ENUMERATION_CAP`] both routes run and must agree; above it only
/// the block route is available.
pub fn decompose(dbar: &MatF2, dvec: &VecF2) -> Result<BasisCombo, SeqError> {
    let n = check_input(dbar, dvec)?;
    let blocks = decompose_by_blocks(dbar, dvec)?.combined;
    if n > ENUMERATION_CAP {
        return Ok(blocks);
    }
    let enumerated = decompose_by_enumeration(dbar, dvec)?;
    if enumerated != blocks {
        return Err(SeqError::PathDisagreement { enumerated, blocks });
    }
    Ok(enumerated)
}
