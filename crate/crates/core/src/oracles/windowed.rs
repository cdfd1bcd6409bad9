use num_traits::ToPrimitive;

use super::{cap, OracleError};
use crate::group::ValidatedAut;

/// Largest ambient dimension for the windowed search.
pub const MAX_WINDOW_DIM: usize = 4;
/// Largest window half-width.
pub const MAX_WINDOW: usize = 8;
/// Conjugator translations range over `{-REACH, ..., REACH}ⁿ`. With reach 1
/// every step can point into the same quadrant, which strands the window
/// corners (the cat map squared does this).
pub const CONJUGATOR_REACH: i64 = 2;

/// Class counts for windows `M - 1` and `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowedCount {
    pub window: usize,
    pub previous: usize,
    pub count: usize,
}

impl WindowedCount {
    /// Two consecutive windows agree. This makes the count plausible, not
    /// proven.
    pub fn stable(&self) -> bool {
        self.previous == self.count
    }
}

struct Twisted {
    n: usize,
    k: usize,
    /// `Dᵐ`, row-major.
    power: Vec<i64>,
    /// `Σ_{i<m} Dⁱ d̃` with `d̃` the first `k` entries of `d`, zero-padded.
    shift: Vec<i64>,
}

impl Twisted {
    fn new(v: &ValidatedAut, m: u64) -> Result<Self, OracleError> {
        let n = v.group().n();
        let k = v.group().holonomy_rank();
        let d = &v.aut().matrix;
        let p = d.pow(m)?;
        let to_i64 = |x: &num_bigint::BigInt| x.to_i64().filter(|y| y.abs() < 1 << 40).ok_or(OracleError::Overflow);
        let power = (0..n * n).map(|i| to_i64(&p[(i / n, i % n)])).collect::<Result<Vec<_>, _>>()?;
        let mut tilde = v.aut().d.clone();
        for t in tilde.iter_mut().skip(k) {
            *t = 0.into();
        }
        let mut acc = vec![num_bigint::BigInt::from(0); n];
        for _ in 0..m {
            acc = d.mul_vec(&acc)?;
            for (a, t) in acc.iter_mut().zip(&tilde) {
                *a += t;
            }
        }
        let shift = acc.iter().map(to_i64).collect::<Result<Vec<_>, _>>()?;
        Ok(Twisted { n, k, power, shift })
    }

    /// Translation part of `φᵐ(u, H)`.
    fn image(&self, u: &[i64], flip: bool) -> Vec<i64> {
        (0..self.n)
            .map(|i| {
                let lin: i64 = (0..self.n).map(|j| self.power[i * self.n + j] * u[j]).sum();
                if flip {
                    lin + self.shift[i]
                } else {
                    lin
                }
            })
            .collect()
    }

    /// `A·x` for `A = J` when `flip`.
    fn act(&self, x: &[i64], flip: bool) -> Vec<i64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| if flip && i < self.k { -v } else { v })
            .collect()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    classes: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            classes: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.classes -= 1;
        }
    }
}

/// Classes of twisted conjugation `g ~ h·g·φᵐ(h)⁻¹` among elements `(x, A)`
/// with `x ∈ [-M, M]ⁿ`, merging along conjugators `h = (u, H)` with
/// `u ∈ {-REACH, ..., REACH}ⁿ`, `H ∈ {I, J}`, whose result stays in the window.
pub fn windowed_class_count(v: &ValidatedAut, window: usize, m: u64) -> Result<usize, OracleError> {
    let n = v.group().n();
    cap("dimension", n, MAX_WINDOW_DIM)?;
    cap("window", window, MAX_WINDOW)?;
    if !v.is_finite(m) {
        return Err(OracleError::InfinitePower(m));
    }
    let tw = Twisted::new(v, m)?;
    // for k = 0 the holonomy is trivial and J = I
    let halves: &[bool] = if tw.k == 0 { &[false] } else { &[false, true] };
    let slots = halves.len();
    let side = 2 * window as i64 + 1;
    let points = (side as usize).pow(n as u32);
    let index = |x: &[i64], flip: bool| -> Option<usize> {
        let mut idx = 0usize;
        for &c in x.iter().rev() {
            if c.abs() > window as i64 {
                return None;
            }
            idx = idx * side as usize + (c + window as i64) as usize;
        }
        Some(slots * idx + usize::from(flip))
    };
    let coords = |mut idx: usize| -> Vec<i64> {
        (0..n)
            .map(|_| {
                let c = (idx % side as usize) as i64 - window as i64;
                idx /= side as usize;
                c
            })
            .collect()
    };

    // (u, H)·(x, A)·φᵐ(u, H)⁻¹ = (u + Hx - A·w, A) with w the translation
    // part of φᵐ(u, H)
    let mut conjugators: Vec<(Vec<i64>, bool, Vec<i64>)> = Vec::new();
    let span = 2 * CONJUGATOR_REACH as usize + 1;
    for code in 0..span.pow(n as u32) {
        let mut c = code;
        let u: Vec<i64> = (0..n)
            .map(|_| {
                let x = (c % span) as i64 - CONJUGATOR_REACH;
                c /= span;
                x
            })
            .collect();
        for &flip in halves {
            let w = tw.image(&u, flip);
            conjugators.push((u.clone(), flip, w));
        }
    }

    let mut uf = UnionFind::new(slots * points);
    for p in 0..points {
        let x = coords(p);
        for &a in halves {
            let from = slots * p + usize::from(a);
            for (u, h, w) in &conjugators {
                let hx = tw.act(&x, *h);
                let aw = tw.act(w, a);
                let y: Vec<i64> = (0..n).map(|i| u[i] + hx[i] - aw[i]).collect();
                if let Some(to) = index(&y, a) {
                    uf.union(from, to);
                }
            }
        }
    }
    Ok(uf.classes)
}

/// Counts for windows `M - 1` and `M` (`M ≥ 1`).
pub fn oracle_windowed_classes(v: &ValidatedAut, window: usize, m: u64) -> Result<WindowedCount, OracleError> {
    let window = window.max(1);
    Ok(WindowedCount {
        window,
        previous: windowed_class_count(v, window - 1, m)?,
        count: windowed_class_count(v, window, m)?,
    })
}
