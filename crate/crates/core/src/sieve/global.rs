use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{partition, Executor, FamilySpec, HeightBox, SieveError};
use crate::anfamily::{weak_or_strong, Classifier, DivisibilityType};
use crate::arith::{isqrt_u128, mod_inv, primes_up_to, sqrt_mod_prime_square, Squarefree, SquarefreeTester};
use crate::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlobalEngine {
    /// Residue sieve over `b` for each row `a` of the cubic family.
    QuadraticSieve,
    /// Evaluate and test every point.
    Pointwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalOptions {
    /// Trial-division bound of the squarefree test.
    pub squarefree_bound: u64,
    /// Pollard rho iteration budget per cofactor.
    pub rho_budget: u64,
    /// `None` picks the sieve when the family allows it.
    pub engine: Option<GlobalEngine>,
}

impl Default for GlobalOptions {
    fn default() -> Self {
        GlobalOptions { squarefree_bound: 1_000_000, rho_budget: 200_000, engine: None }
    }
}

impl GlobalOptions {
    fn engine_for(&self, fam: &FamilySpec) -> GlobalEngine {
        match self.engine {
            Some(GlobalEngine::QuadraticSieve) if fam.is_a2_trace_zero() => GlobalEngine::QuadraticSieve,
            None if fam.is_a2_trace_zero() => GlobalEngine::QuadraticSieve,
            _ => GlobalEngine::Pointwise,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalCounts {
    pub x: Q,
    pub squarefree: u64,
    pub total: u64,
    /// Points whose squarefreeness the bounded test could not settle.
    pub uncertain: u64,
    pub engine: GlobalEngine,
}

impl EmpiricalCounts {
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.squarefree as f64 / self.total as f64
        }
    }

    /// More than 0.1% of the box is uncertain.
    pub fn inconclusive(&self) -> bool {
        self.uncertain as u128 * 1000 > self.total as u128
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailCounts {
    pub x: Q,
    pub m: Q,
    /// Points with `p² | Δ` strongly for some prime `p > M`.
    pub strong: u64,
    /// Points with `p² | Δ` weakly for some prime `p > M`.
    pub weak: u64,
    /// Points with `Δ = 0`, left out of both counts.
    pub zero: u64,
    pub uncertain: u64,
    pub total: u64,
    pub engine: GlobalEngine,
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> u64 {
        self.0.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Row data for `Δ(a, b) = -4a³ - 27b²` with `|b| ≤ bmax`.
struct CubicRow {
    a: i64,
    bmax: i64,
}

impl CubicRow {
    fn len(&self) -> usize {
        (2 * self.bmax + 1) as usize
    }

    fn max_abs_disc(&self) -> u128 {
        let a = self.a.unsigned_abs() as u128;
        let b = self.bmax as u128;
        4 * a * a * a + 27 * b * b
    }

    /// Calls `hit(b)` for each `b` in the row with `p² | Δ(a, b)`.
    fn for_each_hit(&self, p: u64, mut hit: impl FnMut(i64)) {
        let q = p * p;
        let q128 = q as u128;
        let a3 = (self.a.rem_euclid(q as i64) as u128).pow(3) % q128;
        let c = ((q128 - 4 * a3 % q128) % q128) as u64;
        let lo = -self.bmax;
        let mut progression = |r: u64, step: u64| {
            let start = lo + ((r as i64 - lo).rem_euclid(step as i64));
            let mut b = start;
            while b <= self.bmax {
                hit(b);
                b += step as i64;
            }
        };
        if p <= 3 {
            for r in 0..q {
                let d = (c + q - (27 * (r * r % q)) % q) % q;
                if d == 0 {
                    progression(r, q);
                }
            }
            return;
        }
        let t = (c as u128 * mod_inv(27 % q, q).expect("p > 3") as u128 % q as u128) as u64;
        if t == 0 {
            progression(0, p);
            return;
        }
        for r in sqrt_mod_prime_square(t, p) {
            progression(r, q);
        }
    }

    /// The at most two `b` with `Δ(a, b) = 0`.
    fn zeros(&self) -> Vec<i64> {
        if self.a > 0 {
            return Vec::new();
        }
        if self.a == 0 {
            return vec![0];
        }
        let n = 4 * (self.a.unsigned_abs() as u128).pow(3);
        if !n.is_multiple_of(27) {
            return Vec::new();
        }
        let s = isqrt_u128(n / 27);
        if s * s != n / 27 || s > self.bmax as u128 {
            return Vec::new();
        }
        vec![-(s as i64), s as i64]
    }
}

fn rows<E: Executor, T: Send>(hbox: &HeightBox, exec: &E, row: impl Fn(CubicRow) -> T + Sync + Send) -> Vec<T> {
    let amax = hbox.bounds[0] as i64;
    let bmax = hbox.bounds[1] as i64;
    let ranges = partition((2 * amax + 1) as u64, exec.threads() * 8);
    let per = exec.map(ranges.len(), |t| {
        ranges[t].clone().map(|i| row(CubicRow { a: i as i64 - amax, bmax })).collect::<Vec<T>>()
    });
    per.into_iter().flatten().collect()
}

fn sieve_primes(hbox: &HeightBox) -> Vec<u64> {
    let amax = hbox.bounds[0] as u128;
    let bmax = hbox.bounds[1] as u128;
    let top = 4 * amax * amax * amax + 27 * bmax * bmax;
    primes_up_to(isqrt_u128(top) as u64)
}

fn empirical_cubic<E: Executor>(hbox: &HeightBox, exec: &E) -> (u64, u64) {
    let primes = sieve_primes(hbox);
    let counts = rows(hbox, exec, |row| {
        let mut bad = Bits::new(row.len());
        let top = row.max_abs_disc();
        for &p in &primes {
            if (p as u128) * (p as u128) > top {
                break;
            }
            row.for_each_hit(p, |b| bad.set((b + row.bmax) as usize));
        }
        for b in row.zeros() {
            bad.set((b + row.bmax) as usize);
        }
        (row.len() as u64 - bad.count(), row.len() as u64)
    });
    counts.iter().fold((0, 0), |(s, t), (a, b)| (s + a, t + b))
}

/// Calls `f` on every point of the box, split into contiguous index ranges.
fn pointwise<E: Executor, T: Send>(
    hbox: &HeightBox,
    exec: &E,
    init: impl Fn() -> T + Sync + Send,
    f: impl Fn(&[i64], &mut T) + Sync + Send,
) -> Vec<T> {
    let n = hbox.count() as u64;
    let r = hbox.bounds.len();
    let ranges = partition(n, exec.threads() * 8);
    exec.map(ranges.len(), |t| {
        let range = ranges[t].clone();
        let mut acc = init();
        let mut pt = vec![0i64; r];
        let mut idx = range.start;
        for i in (0..r).rev() {
            let w = 2 * hbox.bounds[i] + 1;
            pt[i] = (idx % w) as i64 - hbox.bounds[i] as i64;
            idx /= w;
        }
        for _ in range {
            f(&pt, &mut acc);
            for i in (0..r).rev() {
                if pt[i] < hbox.bounds[i] as i64 {
                    pt[i] += 1;
                    break;
                }
                pt[i] = -(hbox.bounds[i] as i64);
            }
        }
        acc
    })
}

/// Squarefree-discriminant count over the height box at `X`.
pub fn empirical_density<E: Executor>(
    fam: &FamilySpec,
    x: Q,
    opts: &GlobalOptions,
    exec: &E,
) -> Result<EmpiricalCounts, SieveError> {
    let hbox = HeightBox::new(fam, x)?;
    hbox.check_budget()?;
    let engine = opts.engine_for(fam);
    if engine == GlobalEngine::QuadraticSieve {
        let (squarefree, total) = empirical_cubic(&hbox, exec);
        return Ok(EmpiricalCounts { x, squarefree, total, uncertain: 0, engine });
    }
    let tester = SquarefreeTester::new(opts.squarefree_bound, opts.rho_budget);
    let form = fam.normalized_form();
    let parts = pointwise(&hbox, exec, || (0u64, 0u64, 0u64), |pt, acc: &mut (u64, u64, u64)| {
        let pt128: Vec<i128> = pt.iter().map(|c| *c as i128).collect();
        acc.1 += 1;
        match form.eval_i128(&pt128).map(|v| tester.test(v.unsigned_abs())) {
            Some(Squarefree::Yes) => acc.0 += 1,
            Some(Squarefree::No) => {}
            Some(Squarefree::Uncertain) | None => acc.2 += 1,
        }
    });
    let (squarefree, total, uncertain) = parts.iter().fold((0, 0, 0), |t, a| (t.0 + a.0, t.1 + a.1, t.2 + a.2));
    Ok(EmpiricalCounts { x, squarefree, total, uncertain, engine })
}

/// Smallest integer strictly above `m`, at least 2.
fn least_above(m: Q) -> u64 {
    let f = m.floor().to_integer();
    if f < 1 {
        2
    } else {
        f as u64 + 1
    }
}

fn classify_mod(b: &[u64], p: u64, two: &Classifier) -> DivisibilityType {
    if p == 2 {
        two.brute_force(b)
    } else {
        weak_or_strong(b, p)
    }
}

/// Per-threshold counters of the tail sets.
#[derive(Debug, Clone)]
struct Tally {
    strong: Vec<u64>,
    weak: Vec<u64>,
    zero: u64,
    uncertain: u64,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally { strong: vec![0; n], weak: vec![0; n], zero: 0, uncertain: 0 }
    }

    /// `strong`, `weak`: largest prime of each kind dividing `Δ` twice, or 0.
    fn record(&mut self, los: &[u64], strong: u64, weak: u64) {
        for (j, lo) in los.iter().enumerate() {
            self.strong[j] += (strong >= *lo) as u64;
            self.weak[j] += (weak >= *lo) as u64;
        }
    }

    fn merge(mut self, other: &Tally) -> Tally {
        for (a, b) in self.strong.iter_mut().zip(&other.strong) {
            *a += b;
        }
        for (a, b) in self.weak.iter_mut().zip(&other.weak) {
            *a += b;
        }
        self.zero += other.zero;
        self.uncertain += other.uncertain;
        self
    }
}

fn tail_cubic<E: Executor>(hbox: &HeightBox, los: &[u64], exec: &E) -> Result<Tally, SieveError> {
    let lo = los.iter().copied().min().unwrap_or(2);
    let primes: Vec<u64> = sieve_primes(hbox).into_iter().filter(|p| *p >= lo).collect();
    let two = Classifier::new(3, 2)?;
    let tallies = rows(hbox, exec, |row| {
        let mut strong = vec![0u64; row.len()];
        let mut weak = vec![0u64; row.len()];
        let top = row.max_abs_disc();
        for &p in &primes {
            if (p as u128) * (p as u128) > top {
                break;
            }
            let q = p * p;
            let a = row.a.rem_euclid(q as i64) as u64;
            row.for_each_hit(p, |b| {
                let coeffs = [0, a, b.rem_euclid(q as i64) as u64];
                let i = (b + row.bmax) as usize;
                match classify_mod(&coeffs, p, &two) {
                    DivisibilityType::Strong => strong[i] = p,
                    DivisibilityType::Weak => weak[i] = p,
                    DivisibilityType::None => unreachable!("hit has p² | Δ"),
                }
            });
        }
        let mut t = Tally::new(los.len());
        for b in row.zeros() {
            let i = (b + row.bmax) as usize;
            strong[i] = 0;
            weak[i] = 0;
            t.zero += 1;
        }
        for (s, w) in strong.iter().zip(&weak) {
            t.record(los, *s, *w);
        }
        t
    });
    Ok(tallies.iter().fold(Tally::new(los.len()), Tally::merge))
}

/// Points of the height box at `X` whose discriminant is strongly, resp.
/// weakly, divisible by `p²` for some prime `p > M`.
pub fn tail_counts<E: Executor>(
    fam: &FamilySpec,
    x: Q,
    m: Q,
    opts: &GlobalOptions,
    exec: &E,
) -> Result<TailCounts, SieveError> {
    Ok(tail_profile(fam, x, &[m], opts, exec)?.remove(0))
}

/// [`tail_counts`] for several thresholds from one pass over the box.
pub fn tail_profile<E: Executor>(
    fam: &FamilySpec,
    x: Q,
    ms: &[Q],
    opts: &GlobalOptions,
    exec: &E,
) -> Result<Vec<TailCounts>, SieveError> {
    let hbox = HeightBox::new(fam, x)?;
    hbox.check_budget()?;
    let degree = fam.poly_degree().ok_or_else(|| SieveError::NoLayout(fam.name.clone()))?;
    let los: Vec<u64> = ms.iter().map(|m| least_above(*m)).collect();
    let lo = los.iter().copied().min().unwrap_or(2);
    let total = hbox.count() as u64;
    let engine = opts.engine_for(fam);
    let tally = if engine == GlobalEngine::QuadraticSieve {
        tail_cubic(&hbox, &los, exec)?
    } else {
        let tester = SquarefreeTester::new(opts.squarefree_bound, opts.rho_budget);
        let two = Classifier::new(degree, 2)?;
        let form = fam.normalized_form();
        let parts = pointwise(&hbox, exec, || Tally::new(los.len()), |pt, acc| {
            let pt128: Vec<i128> = pt.iter().map(|c| *c as i128).collect();
            let Some(v) = form.eval_i128(&pt128) else {
                acc.uncertain += 1;
                return;
            };
            if v == 0 {
                acc.zero += 1;
                return;
            }
            let Some(factors) = tester.factor(v.unsigned_abs()) else {
                acc.uncertain += 1;
                return;
            };
            let coeffs = fam.coefficients(pt).expect("layout checked");
            let (mut s, mut w) = (0, 0);
            for (p, e) in factors {
                if e < 2 || p < lo as u128 {
                    continue;
                }
                let Some((p, q)) = u64::try_from(p).ok().and_then(|p| Some((p, p.checked_mul(p)?))) else {
                    acc.uncertain += 1;
                    return;
                };
                let b: Vec<u64> = coeffs.iter().map(|c| c.rem_euclid(q as i64) as u64).collect();
                match classify_mod(&b, p, &two) {
                    DivisibilityType::Strong => s = p,
                    DivisibilityType::Weak => w = p,
                    DivisibilityType::None => {}
                }
            }
            acc.record(&los, s, w);
        });
        parts.iter().fold(Tally::new(los.len()), Tally::merge)
    };
    Ok(ms
        .iter()
        .enumerate()
        .map(|(j, m)| TailCounts {
            x,
            m: *m,
            strong: tally.strong[j],
            weak: tally.weak[j],
            zero: tally.zero,
            uncertain: tally.uncertain,
            total,
            engine,
        })
        .collect())
}
