use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rzeta::group::{validate, AffineAut, DiagZ2Group};
use rzeta::intlinalg::PolyZ;
use rzeta::oracles::{oracle_series_match, random_hyperbolic, random_zeta_instance, seeded_rng};
use rzeta::zeta::{
    pipeline, radius_of_convergence, reconstruct, tail_radius_estimate, PowerSeriesQ, ZetaResult,
};

fn zeta_of(seed: u64, max_n: usize) -> ZetaResult {
    let inst = random_zeta_instance(&mut seeded_rng(seed), max_n);
    pipeline(&validate(&inst.group, &inst.aut).unwrap()).unwrap()
}

fn poly(max_deg: usize) -> impl Strategy<Value = PolyZ> {
    prop::collection::vec(-4i64..=4, 0..=max_deg).prop_map(|tail| {
        let mut c = vec![1i64];
        c.extend(tail);
        PolyZ::from_i64(&c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn certified_and_within_bound(seed in any::<u64>()) {
        let z = zeta_of(seed, 3);
        prop_assert!(z.rational.certified);
        prop_assert!(z.rational.numerator_degree() + z.rational.denominator_degree() <= z.degree_bound);
        prop_assert_eq!(z.rational.denominator.coeff(0), BigInt::one());
        prop_assert_eq!(z.rational.numerator.gcd(&z.rational.denominator).degree(), Some(0));
        let expanded = z.rational.expand(z.series.len());
        prop_assert_eq!(Some(expanded), z.series.integer_coeffs());
    }

    #[test]
    fn log_derivative_recovers_rnumbers(seed in any::<u64>()) {
        let z = zeta_of(seed, 3);
        prop_assert_eq!(z.rnumbers.len(), 2 * z.degree_bound + 11);
        prop_assert!(oracle_series_match(&z.rational, &z.rnumbers));
    }

    #[test]
    fn reconstruction_recovers_reduced_fraction(p in poly(4), q in poly(4)) {
        let bound = 4;
        let e = PowerSeriesQ::expand_rational(&p, &q, 2 * bound + 1);
        let f = reconstruct(&PowerSeriesQ::from_integers(&e), bound).unwrap();
        // cross-multiplication: p·Q = P·q
        prop_assert_eq!(p.mul(&f.denominator), f.numerator.mul(&q));
        prop_assert_eq!(f.numerator.gcd(&f.denominator).degree(), Some(0));
        prop_assert_eq!(f.denominator.coeff(0), BigInt::one());
    }

    #[test]
    fn radius_brackets_a_root(q in poly(6)) {
        prop_assume!(q.degree().unwrap_or(0) > 0);
        let r = radius_of_convergence(&q);
        prop_assert!(r.value > 0.0);
        prop_assert!(r.lower <= r.upper);
        prop_assert!(r.value <= 1.0 + 1e-12);
        let width = &r.upper - &r.lower;
        prop_assert!(width <= num_rational::BigRational::new(BigInt::one(), BigInt::from(1u64 << 30)));
    }
}

#[test]
fn full_denominator_carries_the_second_factor() {
    // k = n and d = 0
    let mut failures = Vec::new();
    let mut rng = seeded_rng(5);
    for trial in 0..60 {
        let n = 2 + trial % 3;
        let d = random_hyperbolic(&mut rng, n).unwrap();
        let g = DiagZ2Group::new(n, n).unwrap();
        let a = AffineAut::new(d.clone(), vec![BigInt::zero(); n]);
        let z = pipeline(&validate(&g, &a).unwrap()).unwrap();
        if !z.second_factor_divides {
            failures.push(format!("{d:?}: {} vs {:?}", z.rational.denominator, z.second_factor_c));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn radius_agrees_with_coefficient_growth() {
    let mut misses = Vec::new();
    for seed in 0..30u64 {
        let z = zeta_of(seed, 3);
        if z.radius.is_infinite() {
            continue;
        }
        let est = tail_radius_estimate(&z.rational, 4000).unwrap();
        if (est - z.radius.value).abs() > 1e-3 {
            misses.push((seed, z.radius.value, est, z.rational.denominator.to_string()));
        }
    }
    assert!(misses.is_empty(), "{misses:#?}");
}
