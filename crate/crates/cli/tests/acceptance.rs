//! One line per acceptance criterion. Run with `cargo test --test acceptance`.
//!
//! Criteria listed in `KNOWN_FAILURES` still run in full and print FAIL; they
//! only stop the process from exiting nonzero. Anything else failing does.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use adesieve::exec::Pool;
use adesieve_core::anfamily::{discriminant, discriminant_sylvester, q_invariant, shift_normalize, sigma_m, Classifier, MonicPoly, W0Matrix};
use adesieve_core::cuspintegral::{builtin_records, e6_record, verify_case};
use adesieve_core::rootsystem::{build_root_system, DynkinType, Family};
use adesieve_core::sieve::{compare, tail_profile, CompareOptions, FamilySpec, GlobalOptions, Verdict};
use adesieve_core::vinberg::{closed_form_dim_v, grade, height_one_images, lambda_exponents, lambda_target, zeta_product};
use adesieve_core::{BigInt, BigRational, Q};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: &[u32] = &[5];

type Criterion<'a> = (u32, &'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let el = t.elapsed();
    if el >= limit {
        o.pass = false;
        o.detail.push_str(&format!("; over the {:?} limit", limit));
    }
    o.detail.push_str(&format!(" [{:.2?}]", el));
    o
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Number of roots of each irreducible simply-laced type.
fn root_count(fam: Family, r: usize) -> usize {
    match fam {
        Family::A => r * (r + 1),
        Family::D => 2 * r * (r - 1),
        Family::E => [72, 126, 240][r - 6],
    }
}

fn criterion_1() -> Outcome {
    let mut types: Vec<(Family, usize)> = (2..=9).map(|r| (Family::A, r)).collect();
    types.extend((4..=9).map(|r| (Family::D, r)));
    types.extend((6..=8).map(|r| (Family::E, r)));
    let mut bad = Vec::new();
    for (fam, r) in &types {
        let gd = grade(&build_root_system(DynkinType::new(*fam, *r).unwrap()));
        let sum: usize = gd.degrees.iter().map(|d| *d as usize).sum();
        let half_plus_rank = root_count(*fam, *r) / 2 + r;
        let closed = closed_form_dim_v(*fam, *r);
        if !(gd.dim_v == sum && sum == closed && closed == half_plus_rank) {
            bad.push(format!("{fam:?}{r}: grading {} degrees {sum} table {closed}", gd.dim_v));
        }
    }
    if bad.is_empty() {
        outcome(true, format!("{} types agree", types.len()))
    } else {
        outcome(false, bad.join(", "))
    }
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for rec in builtin_records() {
        match verify_case(&rec) {
            Ok(rep) => {
                let b = &rep.final_bound;
                let exact = b.x_exponent == Q::from_integer(rep.dim_v as i64) && b.m_power == 1;
                if !rep.pass || !exact {
                    pass = false;
                    let fields: Vec<_> = rep.mismatches().iter().map(|c| c.field.clone()).collect();
                    notes.push(format!("{} mismatches {}", rec.case, fields.join(",")));
                } else {
                    notes.push(format!("{} X^{} log^{}", rec.case, rep.dim_v, b.log_power));
                }
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{}: {e}", rec.case));
            }
        }
    }
    outcome(pass, notes.join(", "))
}

/// `det(xI - A)` by Faddeev–LeVerrier, from the leading coefficient down.
fn faddeev_leverrier(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.len();
    let mut coeffs = vec![BigRational::one()];
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let c_prev = coeffs.last().unwrap().clone();
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigRational::zero();
                for t in 0..n {
                    s += &a[i][t] * &m[t][j];
                }
                if i == j {
                    s += &c_prev;
                }
                next[i][j] = s;
            }
        }
        m = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for t in 0..n {
                tr += &a[i][t] * &m[t][i];
            }
        }
        coeffs.push(-tr / q(k as i64));
    }
    coeffs
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20261014);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let d = rng.random_range(2..=4usize);
        let m = rng.random_range(2..=13i64);
        let l = rng.random_range(-40..=40i64);
        let mut g: Vec<i64> = (0..d).map(|_| rng.random_range(-30..=30)).collect();
        g[d - 2] = m * rng.random_range(-6..=6);
        g[d - 1] = m * m * rng.random_range(-6..=6);
        let f = MonicPoly::from_i64(&g).unwrap().shift(&BigInt::from(-l));
        let mb = BigInt::from(m);
        if shift_normalize(&f, &mb).is_none() {
            failures.push(format!("{f:?} m={m}: no shift"));
            continue;
        }
        let cert = match sigma_m(&f, &mb) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("m={m}: {e}"));
                continue;
            }
        };
        let a = cert.matrix.entries();
        let want: Vec<BigRational> = f.dense().into_iter().map(BigRational::from_integer).collect();
        let charpoly = faddeev_leverrier(a) == want;
        let lattice = a.iter().flatten().all(|x| (x * q(4)).is_integer());
        let n = a.len();
        let sd: Vec<BigRational> = (0..n - 1).map(|i| a[i][i + 1].clone()).collect();
        let expect: Vec<BigRational> = if n == 2 {
            vec![q(m * m)]
        } else {
            (0..n - 1).map(|i| if i == 0 || i == n - 2 { q(m) } else { q(1) }).collect()
        };
        let upper_zero = (0..n).all(|i| (i + 2..n).all(|j| a[i][j].is_zero()));
        if !(charpoly && lattice && sd == expect && upper_zero) {
            failures.push(format!("d={d} m={m} l={l} g={g:?}"));
        }
    }
    if failures.is_empty() {
        outcome(true, "100/100 certified")
    } else {
        outcome(false, format!("{} of 100 failed: {}", failures.len(), failures.join("; ")))
    }
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for p in [3u64, 5, 7] {
        let cls = Classifier::new(3, p).unwrap();
        let p2 = (p * p) as i64;
        let mut n = 0u64;
        let mut disagree = 0u64;
        let mut b = [0u64; 3];
        for b1 in -p2..=p2 {
            b[0] = b1.rem_euclid(p2) as u64;
            for b2 in -p2..=p2 {
                b[1] = b2.rem_euclid(p2) as u64;
                for b3 in -p2..=p2 {
                    b[2] = b3.rem_euclid(p2) as u64;
                    n += 1;
                    if cls.fast_path(&b) != Some(cls.brute_force(&b)) {
                        disagree += 1;
                    }
                }
            }
        }
        pass &= disagree == 0;
        notes.push(format!("p={p}: {disagree} of {n} disagree"));
    }
    outcome(pass, notes.join(", "))
}

fn criterion_5(pool: &Pool) -> Outcome {
    let fam = FamilySpec::parse("A2").unwrap();
    let opts = CompareOptions { samples: 10_000_000, ..CompareOptions::default() };
    match compare(&fam, 50, Q::from_integer(30), &opts, pool) {
        Ok(r) => outcome(
            r.verdict == Verdict::Agree,
            format!(
                "ratio {:.7} ({} of {}), product {:.7}, binomial se {:.2e}, z {:.2}, verdict {:?}; tail-corrected product {:.7}, z {:.2}",
                r.empirical.ratio,
                r.empirical.count_squarefree,
                r.empirical.count_total,
                r.truncated_product,
                r.standard_error,
                r.z_score,
                r.verdict,
                r.tail.corrected_product,
                r.tail.corrected_z
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn criterion_6(pool: &Pool) -> Outcome {
    let fam = FamilySpec::parse("A2").unwrap();
    let ms: Vec<Q> = [2, 5, 10, 20, 50].into_iter().map(Q::from_integer).collect();
    let prof = match tail_profile(&fam, Q::from_integer(20), &ms, &GlobalOptions::default(), pool) {
        Ok(p) => p,
        Err(e) => return outcome(false, e.to_string()),
    };
    let bad: Vec<u64> = prof.iter().map(|t| t.strong + t.weak).collect();
    let monotone = bad.windows(2).all(|w| w[1] <= w[0])
        && prof.windows(2).all(|w| w[1].strong <= w[0].strong && w[1].weak <= w[0].weak);
    let last = prof.last().unwrap();
    let frac = last.weak as f64 / last.total as f64;
    let uncertain: u64 = prof.iter().map(|t| t.uncertain).sum();
    outcome(
        monotone && frac < 0.02 && uncertain == 0,
        format!("strong+weak over M {bad:?}, weak/total at M=50 {frac:.2e}, uncertain {uncertain}"),
    )
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for rec in builtin_records() {
        let gd = grade(&build_root_system(rec.case.parse::<DynkinType>().unwrap()));
        let r = match lambda_exponents(&gd) {
            Ok(r) => r,
            Err(e) => {
                pass = false;
                notes.push(format!("{}: {e}", rec.case));
                continue;
            }
        };
        let images = height_one_images(&gd);
        let mut back = vec![Q::zero(); gd.rank()];
        for (ri, img) in r.iter().zip(&images) {
            for (acc, x) in back.iter_mut().zip(img) {
                *acc += *ri * *x;
            }
        }
        if back != lambda_target(&gd) {
            pass = false;
            notes.push(format!("{} does not resubstitute", rec.case));
        }
    }
    let pi = std::f64::consts::PI;
    let z2 = zeta_product(&[Q::from_integer(1)]).unwrap();
    let z4 = zeta_product(&[Q::from_integer(3)]).unwrap();
    let e2 = ((z2 - pi * pi / 6.0) / (pi * pi / 6.0)).abs();
    let e4 = ((z4 - pi.powi(4) / 90.0) / (pi.powi(4) / 90.0)).abs();
    pass &= e2 < 1e-12 && e4 < 1e-12;
    notes.push(format!("7 cases resubstitute, zeta(2) rel err {e2:.1e}, zeta(4) rel err {e4:.1e}"));
    outcome(pass, notes.join(", "))
}

fn criterion_8() -> Outcome {
    let mut rec = e6_record();
    rec.volume.exponents[1] += Q::from_integer(1);
    let named = match verify_case(&rec) {
        Ok(rep) => !rep.pass && rep.mismatches().iter().map(|c| c.field.as_str()).collect::<Vec<_>>() == ["volume.β2"],
        Err(_) => false,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut zero = 0;
    let trials = 300;
    for _ in 0..trials {
        let n = rng.random_range(2..=7usize);
        let mut a = vec![vec![q(0); n]; n];
        for i in 0..n {
            for j in 0..=(i + 1).min(n - 1) {
                let v = q(rng.random_range(-9..=9));
                a[i][j] = v.clone();
                a[n - 1 - j][n - 1 - i] = v;
            }
        }
        let k = rng.random_range(0..n - 1);
        a[k][k + 1] = q(0);
        a[n - 2 - k][n - 1 - k] = q(0);
        let w = W0Matrix::new(a.clone()).unwrap();
        let cp = w.charpoly();
        let ok_form = w.is_persymmetric() && q_invariant(&w).is_zero() && cp == faddeev_leverrier(&a);
        let f = MonicPoly::new(cp[1..].iter().map(|c| c.to_integer()).collect()).unwrap();
        if ok_form && discriminant(&f).is_zero() && discriminant_sylvester(&f).is_zero() {
            zero += 1;
        }
    }
    outcome(
        named && zero == trials,
        format!("corrupted E6 record names volume.β2: {named}; {zero} of {trials} Q = 0 matrices have zero discriminant"),
    )
}

fn main() -> ExitCode {
    let pool = Pool::new(0).expect("thread pool");
    let secs = Duration::from_secs;
    let criteria: [Criterion<'_>; 8] = [
        (1, "dimension agreement", Box::new(|| timed(secs(1), criterion_1))),
        (2, "case transcriptions", Box::new(|| timed(secs(5), criterion_2))),
        (3, "sigma_m certification", Box::new(|| timed(secs(10), criterion_3))),
        (4, "classifier equivalence", Box::new(|| timed(secs(60), criterion_4))),
        (5, "sieve agreement", Box::new(|| timed(secs(600), || criterion_5(&pool)))),
        (6, "tail decay", Box::new(|| timed(secs(300), || criterion_6(&pool)))),
        (7, "lambda and zeta", Box::new(|| timed(secs(1), criterion_7))),
        (8, "negative controls", Box::new(|| timed(secs(60), criterion_8))),
    ];
    let mut unexpected = 0;
    for (n, name, run) in criteria.iter() {
        let o = run();
        let known = KNOWN_FAILURES.contains(n);
        let tag = match (o.pass, known) {
            (true, false) => "PASS",
            (true, true) => "PASS (listed as a known failure)",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        if !o.pass && !known {
            unexpected += 1;
        }
        println!("criterion {n} {name}: {tag}: {}", o.detail);
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
