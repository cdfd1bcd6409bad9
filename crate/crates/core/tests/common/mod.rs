#![allow(dead_code)]

use proptest::prelude::*;
use rzeta::f2linalg::{MatF2, VecF2};
use rzeta::intlinalg::MatZ;

pub fn mat_f2(rows: usize, cols: usize) -> impl Strategy<Value = MatF2> {
    prop::collection::vec(any::<bool>(), rows * cols).prop_map(move |bits| {
        let mut m = MatF2::zeros(rows, cols);
        for (idx, b) in bits.into_iter().enumerate() {
            m.set(idx / cols.max(1), idx % cols.max(1), b);
        }
        m
    })
}

pub fn vec_f2(len: usize) -> impl Strategy<Value = VecF2> {
    prop::collection::vec(0u8..=1, len).prop_map(VecF2::from_bits)
}

pub fn invertible_f2(n: usize) -> impl Strategy<Value = MatF2> {
    mat_f2(n, n).prop_filter("invertible", MatF2::is_invertible)
}

/// Square matrix of size `1..=max` with a vector of matching length.
pub fn invertible_system(max: usize) -> impl Strategy<Value = (MatF2, VecF2)> {
    (1..=max).prop_flat_map(|n| (invertible_f2(n), vec_f2(n)))
}

/// Unimodular integer matrix as a product of elementary row operations.
pub fn unimodular(n: usize, steps: usize) -> impl Strategy<Value = MatZ> {
    let op = (0..n, 0..n, prop::bool::ANY);
    (prop::collection::vec(op, steps), prop::bool::ANY).prop_map(move |(ops, flip)| {
        let mut m = MatZ::identity(n);
        for (i, j, plus) in ops {
            if i == j {
                continue;
            }
            let c: i64 = if plus { 1 } else { -1 };
            for col in 0..n {
                let v = &m[(j, col)] * c;
                m[(i, col)] += v;
            }
        }
        if flip {
            for col in 0..n {
                m[(0, col)] = -&m[(0, col)];
            }
        }
        m
    })
}

/// Brute-force `#{x : a·x = b}` by direct evaluation of every product.
pub fn enumerate_count(a: &MatF2, b: &VecF2) -> u64 {
    let cols = a.cols();
    (0u64..1 << cols)
        .filter(|&x| {
            (0..a.rows()).all(|i| {
                let dot = (0..cols).filter(|&j| a.get(i, j) && (x >> j) & 1 == 1).count() % 2 == 1;
                dot == b.get(i)
            })
        })
        .count() as u64
}
