use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{check_prime, partition, Executor, FamilySpec, SieveError, LOCAL_BUDGET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Enum,
    MonteCarlo,
}

/// `ρ_p = count / total`, the proportion of `(ℤ/p²)^r` with `Δ ≢ 0 mod p²`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDensity {
    pub p: u64,
    pub method: Method,
    pub count: u64,
    pub total: u64,
    /// Seed of the sampler, for Monte-Carlo estimates.
    pub seed: Option<u64>,
}

impl LocalDensity {
    /// Reduced `(numerator, denominator)`.
    pub fn rho(&self) -> (u64, u64) {
        let g = self.count.gcd(&self.total).max(1);
        (self.count / g, self.total / g)
    }

    pub fn value(&self) -> f64 {
        self.count as f64 / self.total as f64
    }

    /// Binomial standard error; zero for exact values.
    pub fn std_error(&self) -> f64 {
        match self.method {
            Method::Enum => 0.0,
            Method::MonteCarlo => {
                let r = self.value();
                libm::sqrt(r * (1.0 - r) / self.total as f64)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalOptions {
    pub budget: u64,
    /// `(samples, seed)` used when exact enumeration is over budget.
    pub fallback: Option<(u64, u64)>,
}

impl Default for LocalOptions {
    fn default() -> Self {
        LocalOptions { budget: LOCAL_BUDGET, fallback: None }
    }
}

fn fibre_count(fam: &FamilySpec, p: u64, budget: u64) -> Result<(u64, u64), SieveError> {
    check_prime(p)?;
    let q = p.checked_mul(p).ok_or(SieveError::NotPrime(p))?;
    let total = (q as u128).checked_pow(fam.rank() as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(SieveError::BudgetExceeded { what: "local density", needed: total, budget: budget as u128 });
    }
    Ok((q, total as u64))
}

/// Exact density by enumeration, last coordinate varying fastest.
pub fn local_density_exact<E: Executor>(
    fam: &FamilySpec,
    p: u64,
    budget: u64,
    exec: &E,
) -> Result<LocalDensity, SieveError> {
    let (q, total) = fibre_count(fam, p, budget)?;
    let r = fam.rank();
    let form = fam.normalized_form().reduce(q, r);
    let ranges = partition(q, exec.threads() * 4);
    let counts = exec.map(ranges.len(), |t| {
        let mut pt = vec![0u64; r];
        let mut scratch = Vec::new();
        let mut count = 0u64;
        for first in ranges[t].clone() {
            pt.iter_mut().for_each(|c| *c = 0);
            pt[0] = first;
            loop {
                if form.eval_with(&pt, &mut scratch) != 0 {
                    count += 1;
                }
                let mut i = r;
                loop {
                    i -= 1;
                    if i == 0 {
                        break;
                    }
                    pt[i] += 1;
                    if pt[i] < q {
                        break;
                    }
                    pt[i] = 0;
                }
                if i == 0 {
                    break;
                }
            }
        }
        count
    });
    Ok(LocalDensity { p, method: Method::Enum, count: counts.iter().sum(), total, seed: None })
}

/// Exact density by a second engine: the first coordinate varies fastest and
/// the integer form is evaluated before reduction.
pub fn local_density_exact_transposed<E: Executor>(
    fam: &FamilySpec,
    p: u64,
    budget: u64,
    exec: &E,
) -> Result<LocalDensity, SieveError> {
    let (q, total) = fibre_count(fam, p, budget)?;
    let r = fam.rank();
    let form = fam.normalized_form();
    let ranges = partition(q, exec.threads() * 4);
    let counts = exec.map(ranges.len(), |t| {
        let mut count = 0u64;
        let mut pt = vec![0i128; r];
        for last in ranges[t].clone() {
            pt.iter_mut().for_each(|c| *c = 0);
            pt[r - 1] = last as i128;
            loop {
                let v = form.eval_i128(&pt).expect("residues are small");
                if v.rem_euclid(q as i128) != 0 {
                    count += 1;
                }
                let mut i = 0;
                while i + 1 < r {
                    pt[i] += 1;
                    if pt[i] < q as i128 {
                        break;
                    }
                    pt[i] = 0;
                    i += 1;
                }
                if i + 1 >= r {
                    break;
                }
            }
        }
        count
    });
    Ok(LocalDensity { p, method: Method::Enum, count: counts.iter().sum(), total, seed: None })
}

const CHUNK: u64 = 1 << 16;

fn uniform(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    // Rejection keeps the draw exactly uniform.
    let zone = u64::MAX - u64::MAX % n;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % n;
        }
    }
}

/// Monte-Carlo estimate from `samples` uniform points. Chunk `j` draws from
/// ChaCha8 stream `j` keyed by `seed` and `p`, so the result does not depend on
/// the number of threads.
pub fn local_density_monte_carlo<E: Executor>(
    fam: &FamilySpec,
    p: u64,
    samples: u64,
    seed: u64,
    exec: &E,
) -> Result<LocalDensity, SieveError> {
    check_prime(p)?;
    let q = p.checked_mul(p).ok_or(SieveError::NotPrime(p))?;
    let r = fam.rank();
    let form = fam.normalized_form().reduce(q, r);
    let chunks = samples.div_ceil(CHUNK);
    let key = seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let counts = exec.map(chunks as usize, |j| {
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        rng.set_stream(j as u64);
        let n = CHUNK.min(samples - j as u64 * CHUNK);
        let mut pt = vec![0u64; r];
        let mut scratch = Vec::new();
        let mut count = 0u64;
        for _ in 0..n {
            for c in pt.iter_mut() {
                *c = uniform(&mut rng, q);
            }
            if form.eval_with(&pt, &mut scratch) != 0 {
                count += 1;
            }
        }
        count
    });
    Ok(LocalDensity { p, method: Method::MonteCarlo, count: counts.iter().sum(), total: samples, seed: Some(seed) })
}

/// Exact when within budget, otherwise the declared Monte-Carlo fallback.
pub fn local_density<E: Executor>(
    fam: &FamilySpec,
    p: u64,
    opts: &LocalOptions,
    exec: &E,
) -> Result<LocalDensity, SieveError> {
    match local_density_exact(fam, p, opts.budget, exec) {
        Err(SieveError::BudgetExceeded { .. }) if opts.fallback.is_some() => {
            let (samples, seed) = opts.fallback.expect("checked");
            local_density_monte_carlo(fam, p, samples, seed, exec)
        }
        other => other,
    }
}
