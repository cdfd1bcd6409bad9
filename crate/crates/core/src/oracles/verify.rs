use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;

use super::random::{random_hyperbolic, random_invertible_f2, random_mat_f2, random_vec_f2, random_zeta_instance, seeded_rng};
use super::windowed::oracle_windowed_classes;
use super::{oracle_count_solutions, oracle_sequence, oracle_series_match, oracle_torus_rnumber, MAX_COUNT_COLS};
use crate::f2linalg::{count_solutions, split_unipotent, MatF2, VecF2};
use crate::group::{validate, AffineAut, DiagZ2Group, RNumber, ValidatedAut};
use crate::intlinalg::PolyZ;
use crate::seqdecomp::{decompose, solution_sequence, system_at};
use crate::zeta::pipeline;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
    /// Observations that are not failures, such as an unstable window.
    pub notes: Vec<String>,
    pub wall_time: Duration,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check={} instances={} failures={} time={:.3}s",
            self.name,
            self.instances,
            self.failures.len(),
            self.wall_time.as_secs_f64()
        )?;
        for line in &self.failures {
            write!(f, "\n  FAIL {line}")?;
        }
        for line in &self.notes {
            write!(f, "\n  note {line}")?;
        }
        Ok(())
    }
}

/// Known answers attached to an instance; every present field is compared.
#[derive(Debug, Clone, Default)]
pub struct Expectations {
    pub rnumbers: Option<Vec<RNumber>>,
    pub numerator: Option<Vec<BigInt>>,
    pub denominator: Option<Vec<BigInt>>,
}

struct Check {
    name: &'static str,
    instances: usize,
    failures: Vec<String>,
    notes: Vec<String>,
    started: Instant,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            instances: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            started: Instant::now(),
        }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) -> VerifyReport {
        VerifyReport {
            name: self.name.to_string(),
            instances: self.instances,
            failures: self.failures,
            notes: self.notes,
            wall_time: self.started.elapsed(),
        }
    }
}

const WINDOW_DIM: usize = 3;
const WINDOW: usize = 6;
const WINDOW_MAX_CLASSES: u64 = 64;
const SERIES_DIM: usize = 5;
const SEQUENCE_DIM: usize = 12;

/// Runs every oracle that applies to one instance.
pub fn verify_instance(group: &DiagZ2Group, aut: &AffineAut, expect: &Expectations) -> Vec<VerifyReport> {
    let v = match validate(group, aut) {
        Ok(v) => v,
        Err(e) => {
            let mut c = Check::new("validate");
            c.expect(false, || e.to_string());
            return vec![c.finish()];
        }
    };
    let mut reports = vec![
        check_mod2_counts(&v),
        check_torus(&v),
        check_sequence(&v),
        check_windowed(&v),
        check_series(&v),
    ];
    if expect.rnumbers.is_some() || expect.numerator.is_some() || expect.denominator.is_some() {
        reports.push(check_expectations(&v, expect));
    }
    reports
}

fn check_mod2_counts(v: &ValidatedAut) -> VerifyReport {
    let mut c = Check::new("count_solutions");
    let (dbar, dvec) = v.mod2_data();
    if dbar.rows() == 0 || dbar.rows() > MAX_COUNT_COLS {
        c.notes.push("no ℤᵏ factor within the enumeration cap".into());
        return c.finish();
    }
    for m in 1..=8u64 {
        let (a, b) = system_at(dbar, dvec, m).expect("square system");
        let fast = count_solutions(&a, &b).expect("small system");
        let slow = oracle_count_solutions(&a, &b).expect("within cap");
        c.expect(fast == slow, || format!("power {m}: {fast} vs enumeration {slow}"));
    }
    c.finish()
}

fn check_torus(v: &ValidatedAut) -> VerifyReport {
    let mut c = Check::new("torus_snf");
    if v.d2().rows() == 0 {
        c.notes.push("no central torus factor".into());
        return c.finish();
    }
    for m in 1..=10u64 {
        let fast = v.torus_factor(m);
        match (fast, oracle_torus_rnumber(v.d2(), m)) {
            (Some(a), Ok(b)) => c.expect(a == b, || format!("power {m}: |det| {a} vs Smith {b}")),
            (None, Err(_)) => c.expect(true, String::new),
            (a, b) => c.expect(false, || format!("power {m}: finiteness disagrees ({a:?} vs {b:?})")),
        }
    }
    c.finish()
}

fn check_sequence(v: &ValidatedAut) -> VerifyReport {
    let mut c = Check::new("sequence");
    let (dbar, dvec) = v.mod2_data();
    let k = dbar.rows();
    if k == 0 || k > SEQUENCE_DIM {
        c.notes.push("no ℤᵏ factor within the enumeration cap".into());
        return c.finish();
    }
    compare_sequences(&mut c, dbar, dvec);
    c.finish()
}

fn compare_sequences(c: &mut Check, dbar: &MatF2, dvec: &VecF2) {
    let horizon = (1u64 << dbar.rows()) + 8;
    let slow = oracle_sequence(dbar, dvec, horizon).expect("within cap");
    let fast = solution_sequence(dbar, dvec, horizon).map(|t| t.v);
    c.expect(fast.as_ref() == Ok(&slow), || format!("solution_sequence differs: {fast:?} vs {slow:?}"));
    match decompose(dbar, dvec) {
        Ok(combo) => {
            let evaluated: Vec<u64> = (1..=horizon).map(|k| combo.eval(k)).collect();
            c.expect(evaluated == slow, || format!("decomposition {combo:?} evaluates to {evaluated:?}"));
            let weight: u128 = combo.iter().map(|(i, ci)| u128::from(i) * u128::from(ci)).sum();
            c.expect(weight == 1u128 << dbar.rows(), || format!("Σ i·cᵢ = {weight}"));
        }
        Err(e) => c.expect(false, || format!("decompose failed: {e}")),
    }
}

fn check_windowed(v: &ValidatedAut) -> VerifyReport {
    let mut c = Check::new("windowed_classes");
    if v.group().n() > WINDOW_DIM {
        c.notes.push(format!("dimension above {WINDOW_DIM}"));
        return c.finish();
    }
    for m in 1..=3u64 {
        let RNumber::Finite(r) = v.reidemeister_number(m).expect("m ≥ 1") else {
            c.notes.push(format!("power {m}: infinite"));
            continue;
        };
        if r > BigInt::from(WINDOW_MAX_CLASSES) {
            c.notes.push(format!("power {m}: {r} classes, too many for the window"));
            continue;
        }
        match oracle_windowed_classes(v, WINDOW, m) {
            Ok(w) if w.stable() => {
                let count = BigInt::from(w.count);
                c.expect(count == r, || format!("power {m}: window stabilized at {} but R = {r}", w.count));
            }
            Ok(w) => c.notes.push(format!(
                "power {m}: window counts {} → {} not yet stable",
                w.previous, w.count
            )),
            Err(e) => c.notes.push(format!("power {m}: {e}")),
        }
    }
    c.finish()
}

fn check_series(v: &ValidatedAut) -> VerifyReport {
    let mut c = Check::new("series");
    if !v.zeta_exists().exists {
        c.notes.push("zeta function undefined".into());
        return c.finish();
    }
    if v.group().n() > SERIES_DIM {
        c.notes.push(format!("dimension above {SERIES_DIM}"));
        return c.finish();
    }
    match pipeline(v) {
        Ok(z) => {
            c.expect(oracle_series_match(&z.rational, &z.rnumbers), || {
                format!("log-derivative of {} / {} misses R(φᵏ)", z.rational.numerator, z.rational.denominator)
            });
            let degree = z.rational.numerator_degree() + z.rational.denominator_degree();
            c.expect(degree <= z.degree_bound, || format!("total degree {degree} above {}", z.degree_bound));
        }
        Err(e) => c.expect(false, || format!("pipeline failed: {e}")),
    }
    c.finish()
}

fn check_expectations(v: &ValidatedAut, expect: &Expectations) -> VerifyReport {
    let mut c = Check::new("expected_values");
    if let Some(r) = &expect.rnumbers {
        for (i, want) in r.iter().enumerate() {
            let m = i as u64 + 1;
            let got = v.reidemeister_number(m).expect("m ≥ 1");
            c.expect(&got == want, || format!("R(φ^{m}) = {got}, fixture says {want}"));
        }
    }
    if expect.numerator.is_some() || expect.denominator.is_some() {
        match pipeline(v) {
            Ok(z) => {
                if let Some(p) = &expect.numerator {
                    let want = PolyZ::new(p.clone());
                    c.expect(z.rational.numerator == want, || {
                        format!("numerator {} , fixture says {want}", z.rational.numerator)
                    });
                }
                if let Some(q) = &expect.denominator {
                    let want = PolyZ::new(q.clone());
                    c.expect(z.rational.denominator == want, || {
                        format!("denominator {}, fixture says {want}", z.rational.denominator)
                    });
                }
            }
            Err(e) => c.expect(false, || format!("pipeline failed: {e}")),
        }
    }
    c.finish()
}

type RandomCheck = fn(usize, u64, usize) -> VerifyReport;

/// Randomized agreement checks, `count` instances each, dimensions capped
/// at `dim_cap`. Every check draws from its own stream derived from `seed`.
pub fn verify_random(count: usize, seed: u64, dim_cap: usize) -> Vec<VerifyReport> {
    let dim_cap = dim_cap.max(1);
    let checks: Vec<(&'static str, RandomCheck)> = vec![
        ("count_solutions", random_counts),
        ("sequence", random_sequences),
        ("block_split", random_splits),
        ("torus_snf", random_torus),
        ("series", random_series),
    ];
    checks
        .into_par_iter()
        .enumerate()
        .map(|(i, (_, run))| run(count, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64), dim_cap))
        .collect()
}

fn random_counts(count: usize, seed: u64, cap: usize) -> VerifyReport {
    let mut c = Check::new("count_solutions");
    let mut rng = seeded_rng(seed);
    let max = cap.min(MAX_COUNT_COLS);
    for _ in 0..count {
        let rows = rng.gen_range(1..=max);
        let cols = rng.gen_range(1..=max);
        let a = random_mat_f2(&mut rng, rows, cols);
        let b = random_vec_f2(&mut rng, rows);
        let fast = count_solutions(&a, &b).expect("small");
        let slow = oracle_count_solutions(&a, &b).expect("within cap");
        c.expect(fast == slow, || format!("{rows}x{cols}: {fast} vs enumeration {slow}"));
    }
    c.finish()
}

fn random_sequences(count: usize, seed: u64, cap: usize) -> VerifyReport {
    let mut c = Check::new("sequence");
    let mut rng = seeded_rng(seed);
    let max = cap.min(8);
    for _ in 0..count {
        let n = rng.gen_range(1..=max);
        let dbar = random_invertible_f2(&mut rng, n);
        let dvec = random_vec_f2(&mut rng, n);
        compare_sequences(&mut c, &dbar, &dvec);
    }
    c.finish()
}

fn random_splits(count: usize, seed: u64, cap: usize) -> VerifyReport {
    let mut c = Check::new("block_split");
    let mut rng = seeded_rng(seed);
    let max = cap.min(10);
    for _ in 0..count {
        let n = rng.gen_range(1..=max);
        let d = random_invertible_f2(&mut rng, n);
        let s = match split_unipotent(&d) {
            Ok(s) => s,
            Err(e) => {
                c.expect(false, || format!("split failed: {e}"));
                continue;
            }
        };
        let conj = s.p.mul(&d).and_then(|x| x.mul(&s.p_inv)).expect("square");
        c.expect(conj == s.block_diagonal(), || format!("P·D·P⁻¹ is not block diagonal for {d:?}"));
        let u = s.d1.add(&MatF2::identity(s.size_unipotent)).expect("square");
        let nilpotent = u.pow(s.size_unipotent.max(1) as u64).expect("square").is_zero();
        c.expect(nilpotent, || format!("D₁ not unipotent for {d:?}"));
        let l = s.d2.rows();
        let inv = MatF2::identity(l).add(&s.d2).expect("square").is_invertible();
        c.expect(inv, || format!("I - D₂ singular for {d:?}"));
    }
    c.finish()
}

fn random_torus(count: usize, seed: u64, cap: usize) -> VerifyReport {
    let mut c = Check::new("torus_snf");
    let mut rng = seeded_rng(seed);
    let max = cap.clamp(2, 5);
    for _ in 0..count {
        let n = rng.gen_range(2..=max);
        let d2 = random_hyperbolic(&mut rng, n).expect("n ≥ 2");
        let g = DiagZ2Group::new(n, 0).expect("k = 0");
        let v = validate(&g, &AffineAut::new(d2.clone(), vec![BigInt::from(0); n])).expect("unimodular");
        for m in 1..=10u64 {
            let a = v.torus_factor(m);
            let b = oracle_torus_rnumber(&d2, m).ok();
            c.expect(a == b, || format!("power {m}: {a:?} vs Smith {b:?}"));
        }
    }
    c.finish()
}

fn random_series(count: usize, seed: u64, cap: usize) -> VerifyReport {
    let mut c = Check::new("series");
    let mut rng = seeded_rng(seed);
    let max = cap.clamp(2, 4);
    for _ in 0..count {
        let inst = random_zeta_instance(&mut rng, max);
        let v = validate(&inst.group, &inst.aut).expect("generated instances are valid");
        match pipeline(&v) {
            Ok(z) => c.expect(oracle_series_match(&z.rational, &z.rnumbers), || {
                format!("series mismatch for {:?}", inst.aut)
            }),
            Err(e) => c.expect(false, || format!("pipeline failed for {:?}: {e}", inst.aut)),
        }
    }
    c.finish()
}
