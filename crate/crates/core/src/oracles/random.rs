use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::f2linalg::{MatF2, VecF2};
use crate::group::{AffineAut, DiagZ2Group};
use crate::intlinalg::MatZ;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mat_f2<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> MatF2 {
    let mut m = MatF2::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rng.gen());
        }
    }
    m
}

pub fn random_vec_f2<R: Rng>(rng: &mut R, len: usize) -> VecF2 {
    VecF2::from_bits((0..len).map(|_| rng.gen_range(0..=1u8)))
}

/// Rejection sampling; roughly 30% of square matrices over F₂ are invertible.
pub fn random_invertible_f2<R: Rng>(rng: &mut R, n: usize) -> MatF2 {
    loop {
        let m = random_mat_f2(rng, n, n);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Product of random elementary matrices `I + c·E_ij`, `c = ±1`, with a
/// random sign on one row, so `det = ±1` by construction. Restarts whenever
/// an entry exceeds `max_entry`.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize, max_entry: i64) -> MatZ {
    let bound = BigInt::from(max_entry);
    'restart: loop {
        let mut m = MatZ::identity(n);
        if n >= 2 {
            for _ in 0..steps {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let c: i64 = if rng.gen() { 1 } else { -1 };
                for col in 0..n {
                    let v = &m[(j, col)] * c;
                    m[(i, col)] += v;
                }
                if m.max_abs_entry() > bound {
                    continue 'restart;
                }
            }
        }
        if rng.gen() {
            let r = rng.gen_range(0..n);
            for col in 0..n {
                m[(r, col)] = -&m[(r, col)];
            }
        }
        return m;
    }
}

/// Unimodular `n×n` matrix with no root-of-unity eigenvalue (`n ≥ 2`).
pub fn random_hyperbolic<R: Rng>(rng: &mut R, n: usize) -> Option<MatZ> {
    if n < 2 {
        return None;
    }
    loop {
        let m = random_unimodular(rng, n, 2 * n + 2, 6);
        if !m.has_root_of_unity_eigenvalue().expect("unimodular") {
            return Some(m);
        }
    }
}

pub fn random_affine_aut<R: Rng>(rng: &mut R, matrix: MatZ) -> AffineAut {
    let d = (0..matrix.rows()).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
    AffineAut::new(matrix, d)
}

/// A group with an automorphism.
#[derive(Debug, Clone)]
pub struct Instance {
    pub group: DiagZ2Group,
    pub aut: AffineAut,
}

/// A random automorphism whose zeta function exists. `D` is block diagonal
/// with hyperbolic blocks of sizes `k` and `n - k`; blocks of size 1 cannot
/// be hyperbolic, so `k` and `n - k` are never 1.
pub fn random_zeta_instance<R: Rng>(rng: &mut R, max_n: usize) -> Instance {
    let mut shapes: Vec<(usize, usize)> = Vec::new();
    for n in 2..=max_n.max(2) {
        for k in 0..=n {
            if k != 1 && n - k != 1 {
                shapes.push((n, k));
            }
        }
    }
    let &(n, k) = shapes.choose(rng).expect("n ≥ 2 always has a shape");
    let matrix = match (k, n - k) {
        (0, _) | (_, 0) => random_hyperbolic(rng, n).unwrap(),
        (a, b) => MatZ::block_diag(&random_hyperbolic(rng, a).unwrap(), &random_hyperbolic(rng, b).unwrap()),
    };
    Instance {
        group: DiagZ2Group::new(n, k).expect("k ≤ n"),
        aut: random_affine_aut(rng, matrix),
    }
}
