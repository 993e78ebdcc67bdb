use adesieve_core::anfamily::{
    build_companion, build_companion_even, companion, discriminant, discriminant_sylvester, q_invariant, Classifier,
    DivisibilityType, MonicPoly, W0Matrix,
};
use adesieve_core::{BigInt, BigRational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `det(xI - A)` by Faddeev–LeVerrier, leading coefficient first.
fn fl_charpoly(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.len();
    let mul = |x: &[Vec<BigRational>], y: &[Vec<BigRational>]| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|t| &x[i][t] * &y[t][j]).sum()).collect())
            .collect()
    };
    let mut coeffs = vec![BigRational::one()];
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += coeffs.last().unwrap();
        }
        m = next;
        let am = mul(a, &m);
        let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs.push(-tr / q(k as i64));
    }
    coeffs
}

fn dense_q(b: &[i64]) -> Vec<BigRational> {
    core::iter::once(q(1)).chain(b.iter().map(|x| q(*x))).collect()
}

fn big(b: &[i64]) -> Vec<BigInt> {
    b.iter().map(|x| BigInt::from(*x)).collect()
}

fn odometer(len: usize, lo: i64, hi: i64, mut f: impl FnMut(&[i64])) {
    let mut v = vec![lo; len];
    loop {
        f(&v);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            v[i] += 1;
            if v[i] <= hi {
                break;
            }
            v[i] = lo;
            i += 1;
        }
    }
}

#[test]
fn companion_charpoly_exhaustive_small() {
    for n in [1usize, 3] {
        odometer(n + 1, -3, 3, |b| {
            let m = build_companion(&big(b), n).unwrap();
            assert_eq!(fl_charpoly(m.entries()), dense_q(b), "{b:?}");
        });
    }
    for n in [2usize, 4] {
        odometer(n + 1, -2, 2, |b| {
            let m = build_companion_even(&big(b), n).unwrap();
            assert_eq!(fl_charpoly(m.entries()), dense_q(b), "{b:?}");
        });
    }
}

#[test]
fn companion_shape() {
    let m = build_companion_even(&big(&[1, 2, 3, 4, 5]), 4).unwrap();
    assert!(m.is_persymmetric());
    assert_eq!(q_invariant(&m), q(1));
    assert_eq!(q_invariant(&build_companion(&big(&[1, 2, 3, 4]), 3).unwrap()), q(1));
    assert!(build_companion(&big(&[1, 2, 3]), 2).is_err());
    assert!(build_companion_even(&big(&[1, 2, 3, 4]), 3).is_err());
}

#[test]
fn cubic_discriminant_closed_form() {
    odometer(3, -6, 6, |b| {
        let (b1, b2, b3) = (b[0], b[1], b[2]);
        let closed = b1 * b1 * b2 * b2 - 4 * b2.pow(3) - 4 * b1.pow(3) * b3 - 27 * b3 * b3 + 18 * b1 * b2 * b3;
        assert_eq!(discriminant(&MonicPoly::from_i64(b).unwrap()), BigInt::from(closed), "{b:?}");
    });
}

fn check_residues(cls: &Classifier, d: usize) {
    let p2 = cls.p() * cls.p();
    let mut b = vec![0u64; d];
    loop {
        let brute = cls.brute_force(&b);
        assert_eq!(cls.fast_path(&b), Some(brute), "p={} b={b:?}", cls.p());
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            b[i] += 1;
            if b[i] < p2 {
                break;
            }
            b[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn fast_path_matches_brute_force_exhaustively() {
    for p in [3u64, 5, 7, 11, 13] {
        check_residues(&Classifier::new(2, p).unwrap(), 2);
        check_residues(&Classifier::new(3, p).unwrap(), 3);
    }
    check_residues(&Classifier::new(4, 3).unwrap(), 4);
    check_residues(&Classifier::new(4, 5).unwrap(), 4);
}

#[test]
fn fast_path_declines_at_two() {
    let cls = Classifier::new(3, 2).unwrap();
    assert_eq!(cls.fast_path(&[0, 0, 0]), None);
    assert_eq!(cls.brute_force(&[0, 0, 0]), DivisibilityType::Strong);
}

fn persymmetric_q_zero(n: usize, vals: &[i64], slot: usize, trace_zero: bool) -> W0Matrix {
    let mut a = vec![vec![q(0); n]; n];
    let mut it = vals.iter().cycle();
    for i in 0..n {
        for j in 0..=(i + 1).min(n - 1) {
            let v = q(*it.next().unwrap());
            a[i][j] = v.clone();
            a[n - 1 - j][n - 1 - i] = v;
        }
    }
    let k = slot % (n - 1);
    a[k][k + 1] = q(0);
    a[n - 2 - k][n - 1 - k] = q(0);
    if trace_zero {
        let tr: BigRational = (0..n).map(|i| a[i][i].clone()).sum();
        if n % 2 == 1 {
            a[n / 2][n / 2] -= tr;
        } else {
            let c = &a[0][0] - &tr / q(2);
            a[0][0] = c.clone();
            a[n - 1][n - 1] = c;
        }
    }
    W0Matrix::new(a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn companion_charpoly_random(n in prop::sample::select(vec![5usize, 7]), b in prop::collection::vec(-50i64..=50, 8)) {
        let b = &b[..n + 1];
        let m = build_companion(&big(b), n).unwrap();
        prop_assert_eq!(fl_charpoly(m.entries()), dense_q(b));
        prop_assert!(m.has_charpoly(&MonicPoly::from_i64(b).unwrap()));
    }

    #[test]
    fn even_companion_charpoly_random(n in prop::sample::select(vec![2usize, 4, 6]), b in prop::collection::vec(-50i64..=50, 7)) {
        let b = &b[..n + 1];
        let m = build_companion_even(&big(b), n).unwrap();
        prop_assert_eq!(fl_charpoly(m.entries()), dense_q(b));
    }

    #[test]
    fn charpoly_survives_diagonal_conjugation(
        b in prop::collection::vec(-20i64..=20, 2..7),
        d in prop::collection::vec((1i64..=13, 1i64..=13), 7),
    ) {
        let m = companion(&MonicPoly::from_i64(&b).unwrap());
        let diag: Vec<BigRational> = d[..m.size()].iter().map(|(n, k)| BigRational::new(BigInt::from(*n), BigInt::from(*k))).collect();
        let c = m.conjugate_diagonal(&diag);
        prop_assert_eq!(c.charpoly(), m.charpoly());
        prop_assert_eq!(fl_charpoly(c.entries()), dense_q(&b));
    }

    #[test]
    fn resultant_matches_sylvester(b in prop::collection::vec(-1000i64..=1000, 2..8)) {
        let f = MonicPoly::from_i64(&b).unwrap();
        prop_assert_eq!(discriminant(&f), discriminant_sylvester(&f));
    }

    #[test]
    fn discriminant_is_shift_invariant(b in prop::collection::vec(-100i64..=100, 2..7), l in -50i64..=50) {
        let f = MonicPoly::from_i64(&b).unwrap();
        prop_assert_eq!(discriminant(&f.shift(&BigInt::from(l))), discriminant(&f));
    }

    #[test]
    fn quartic_fast_path_matches_brute_force(
        p in prop::sample::select(vec![7u64, 11, 13]),
        b in prop::collection::vec(any::<u64>(), 4),
        lift in prop::collection::vec(0u64..13, 4),
    ) {
        // Bias towards p² | Δ by starting from (x - r)² times a quadratic mod p.
        let cls = Classifier::new(4, p).unwrap();
        let p2 = p * p;
        let r = b[0] % p;
        let (s, t) = (b[1] % p2, b[2] % p2);
        // (x^2 - 2 r x + r^2)(x^2 + s x + t)
        let c = [
            (s + p2 * 2 - 2 * r % p2) % p2,
            (t + r * r % p2 + p2 * 4 - 2 * r * s % p2) % p2,
            (r * r % p2 * s % p2 + p2 * 4 - 2 * r * t % p2) % p2,
            r * r % p2 * t % p2,
        ];
        let pert: Vec<u64> = if b[3] % 2 == 0 {
            c.iter().zip(&lift).map(|(x, l)| (x + p * (l % p)) % p2).collect()
        } else {
            b.iter().map(|x| x % p2).collect()
        };
        prop_assert_eq!(cls.fast_path(&pert), Some(cls.brute_force(&pert)));
    }

    #[test]
    fn q_zero_forces_zero_discriminant(
        n in 2usize..=8,
        vals in prop::collection::vec(-9i64..=9, 1..40),
        slot in 0usize..8,
        trace_zero in any::<bool>(),
    ) {
        let w = persymmetric_q_zero(n, &vals, slot, trace_zero);
        prop_assert!(w.is_persymmetric());
        prop_assert!(q_invariant(&w).is_zero());
        prop_assert!(!trace_zero || w.is_trace_zero());
        let cp = w.charpoly();
        prop_assert_eq!(&cp, &fl_charpoly(w.entries()));
        let f = MonicPoly::new(cp[1..].iter().map(|c| c.to_integer()).collect()).unwrap();
        prop_assert!(discriminant(&f).is_zero());
    }
}
