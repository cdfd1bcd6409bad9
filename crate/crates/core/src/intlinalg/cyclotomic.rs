//! Cyclotomic polynomials by the recursive quotient
//! `Φ_m = (x^m - 1) / ∏_{d | m, d < m} Φ_d`.

use std::collections::HashMap;

use super::poly::PolyZ;

pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= m {
        if m.is_multiple_of(i) {
            small.push(i);
            if i != m / i {
                large.push(m / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Memoizing generator for `Φ_m`.
#[derive(Debug, Default)]
pub struct CyclotomicTable {
    cache: HashMap<u64, PolyZ>,
}

impl CyclotomicTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, m: u64) -> PolyZ {
        assert!(m >= 1, "cyclotomic index must be positive");
        if let Some(p) = self.cache.get(&m) {
            return p.clone();
        }
        let mut poly = PolyZ::x_pow_minus_one(m as usize);
        for d in divisors(m) {
            if d == m {
                continue;
            }
            let phi_d = self.get(d);
            poly = poly
                .exact_div(&phi_d)
                .expect("x^m - 1 is divisible by each proper cyclotomic factor");
        }
        self.cache.insert(m, poly.clone());
        poly
    }
}

pub fn cyclotomic(m: u64) -> PolyZ {
    CyclotomicTable::new().get(m)
}
