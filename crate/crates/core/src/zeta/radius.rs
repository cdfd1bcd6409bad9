use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::intlinalg::{euler_phi, CyclotomicTable, PolyZ};

/// Bisection depth; brackets have width `2^-BISECTION_BITS`.
pub const BISECTION_BITS: u32 = 40;

/// Reported error bound on [`Radius::value`].
pub const RADIUS_ERROR: f64 = 1e-9;

/// Radius of convergence: the smallest modulus of a root of the reduced
/// denominator, bracketed by exact dyadic rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct Radius {
    pub value: f64,
    pub error: f64,
    pub lower: BigRational,
    pub upper: BigRational,
    /// A root of unity is among the poles.
    pub cyclotomic: bool,
}

impl Radius {
    fn infinite() -> Self {
        Radius {
            value: f64::INFINITY,
            error: 0.0,
            lower: BigRational::zero(),
            upper: BigRational::zero(),
            cyclotomic: false,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// `q / gcd(q, q')`.
pub fn squarefree_part(q: &PolyZ) -> PolyZ {
    if q.degree().unwrap_or(0) == 0 {
        return q.clone();
    }
    let g = q.gcd(&q.derivative());
    q.exact_div(&g).expect("gcd divides")
}

/// Removes every cyclotomic factor from a squarefree `q`. Returns the
/// remaining factor and whether anything was removed.
pub fn strip_cyclotomic(q: &PolyZ) -> (PolyZ, bool) {
    let mut rest = q.clone();
    let mut found = false;
    let mut table = CyclotomicTable::new();
    let mut m = 1u64;
    loop {
        let d = rest.degree().unwrap_or(0) as u64;
        // φ(m) ≥ √(m/2), so no cyclotomic factor of degree ≤ d has m > 2d²
        if d == 0 || m > 2 * d * d {
            break;
        }
        if euler_phi(m) <= d {
            let phi = table.get(m);
            if let Some(quot) = rest.exact_div(&phi) {
                rest = quot;
                found = true;
            }
        }
        m += 1;
    }
    (rest, found)
}

/// Number of roots of `p` in the open disk `|z| < a / 2^e`, or `None` when
/// a root lies on (or the recursion degenerates at) that circle.
pub fn roots_in_disk(p: &PolyZ, a: &BigInt, e: u32) -> Option<usize> {
    let d = p.degree()?;
    // 2^(e·d) p(a z / 2^e) has integer coefficients
    let mut pow_a = BigInt::one();
    let coeffs: Vec<BigInt> = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let v = (c * &pow_a) << (e as usize * (d - i));
            pow_a *= a;
            v
        })
        .collect();
    unit_disk_count(PolyZ::new(coeffs))
}

/// Schur–Cohn count of roots strictly inside the unit circle.
fn unit_disk_count(mut p: PolyZ) -> Option<usize> {
    // N(p) = N(Tp) when |a₀| > |aₙ|, and deg p - N(Tp) when |a₀| < |aₙ|,
    // where Tp = a₀·p - aₙ·p* has lower degree
    let mut flips: Vec<(usize, bool)> = Vec::new();
    loop {
        let n = match p.degree() {
            None => return None,
            Some(0) => break,
            Some(n) => n,
        };
        let a0 = p.coeff(0);
        let an = p.coeff(n);
        let delta = &a0 * &a0 - &an * &an;
        if delta.is_zero() {
            return None;
        }
        let t: Vec<BigInt> = (0..n).map(|i| &a0 * p.coeff(i) - &an * p.coeff(n - i)).collect();
        let t = PolyZ::new(t);
        if t.is_zero() {
            return None;
        }
        flips.push((n, delta.is_negative()));
        let g = t.content();
        p = PolyZ::new(t.coeffs().iter().map(|c| c / &g).collect());
    }
    let mut count = 0usize;
    for &(n, flip) in flips.iter().rev() {
        if flip {
            count = n - count;
        }
    }
    Some(count)
}

/// Smallest modulus of a root of `q`, for `q(0) = ±1`.
pub fn radius_of_convergence(q: &PolyZ) -> Radius {
    assert!(
        q.coeff(0).abs().is_one(),
        "denominator must have constant term ±1"
    );
    if q.degree().unwrap_or(0) == 0 {
        return Radius::infinite();
    }
    let (rest, cyclotomic) = strip_cyclotomic(&squarefree_part(q));
    if rest.degree().unwrap_or(0) == 0 {
        return Radius {
            value: 1.0,
            error: 0.0,
            lower: BigRational::one(),
            upper: BigRational::one(),
            cyclotomic,
        };
    }
    // rest(0) = ±1 and integer coefficients put the product of the root
    // moduli at 1/|lc| ≤ 1; Kronecker rules out all of them lying on the
    // unit circle, so the smallest modulus is below 1
    let (lo, hi) = bisect(&rest);
    let scale = BigRational::from_integer(BigInt::one() << BISECTION_BITS as usize);
    let lower = BigRational::from_integer(lo) / &scale;
    let upper = BigRational::from_integer(hi) / &scale;
    let mid = (&lower + &upper) / BigRational::from_integer(2.into());
    Radius {
        value: mid.to_f64().expect("bounded"),
        error: RADIUS_ERROR,
        lower,
        upper,
        cyclotomic,
    }
}

/// Integers `lo < hi` with no root in `|z| < lo/2^B` and at least one root
/// in `|z| ≤ hi/2^B`. Normally `hi = lo + 1`; a root on a probed circle can
/// leave the bracket a few units wider.
fn bisect(p: &PolyZ) -> (BigInt, BigInt) {
    let mut lo = BigInt::zero();
    let mut hi = BigInt::one() << BISECTION_BITS as usize;
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        // a degenerate circle usually carries a root; nudge outwards, then
        // inwards, until the count is defined
        let candidates = (0..)
            .map(|j: i64| if j % 2 == 0 { &mid + j / 2 } else { &mid - (j + 1) / 2 })
            .take(64)
            .filter(|c| c > &lo && c < &hi);
        let mut moved = false;
        for c in candidates {
            match roots_in_disk(p, &c, BISECTION_BITS) {
                Some(0) => lo = c,
                Some(_) => hi = c,
                None => continue,
            }
            moved = true;
            break;
        }
        if !moved {
            // a root sits on a circle strictly inside a bracket already far
            // narrower than the reported error
            assert!(&hi - &lo <= BigInt::from(256), "every circle in the bracket is degenerate");
            break;
        }
    }
    (lo, hi)
}
