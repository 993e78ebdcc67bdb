//! Machine-integer number theory: modular arithmetic, primality, square roots
//! modulo prime squares, and squarefree testing with Pollard rho.

use alloc::vec;
use alloc::vec::Vec;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

/// `a·b mod m` without overflow for any `m`.
pub fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut r = 0;
    while b > 0 {
        if b & 1 == 1 {
            r = add_mod_u128(r, a, m);
        }
        a = add_mod_u128(a, a, m);
        b >>= 1;
    }
    r
}

pub fn pow_mod_u128(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u128(r, b, m);
        }
        b = mul_mod_u128(b, b, m);
        e >>= 1;
    }
    r
}

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin with the first thirteen prime bases: a proof below
/// 3.3·10²⁴, a strong probable-prime test above.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p as u128 {
            return true;
        }
        if n.is_multiple_of(p as u128) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod_u128(a as u128, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Whether [`is_prime_u128`] is a proof for `n`.
pub fn primality_is_proven(n: u128) -> bool {
    n < 3_317_044_064_679_887_385_961_981
}

pub fn is_prime(n: u64) -> bool {
    is_prime_u128(n as u128)
}

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = libm::sqrt(n as f64) as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|v| v <= n) {
        x += 1;
    }
    x
}

pub fn is_square_u128(n: u128) -> bool {
    let r = isqrt_u128(n);
    r * r == n
}

/// A square root of `a` modulo the odd prime `p` (Tonelli–Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    if s == 1 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// All `x ∈ [0, p²)` with `x² ≡ a (mod p²)`, for an odd prime `p`.
pub fn sqrt_mod_prime_square(a: u64, p: u64) -> Vec<u64> {
    let q = p * p;
    let a = a % q;
    if a == 0 {
        return (0..p).map(|k| k * p).collect();
    }
    if a.is_multiple_of(p) {
        // a = p·u with p ∤ u has no root; p² | a was handled above.
        return Vec::new();
    }
    let Some(r) = sqrt_mod_prime(a, p) else { return Vec::new() };
    // Hensel: r' = r - (r² - a)/(2r)
    let inv = mod_inv(mul_mod(2, r, q), q).expect("p odd and r a unit");
    let f = (mul_mod(r, r, q) + q - a) % q;
    let r1 = (r + q - mul_mod(f, inv, q)) % q;
    let r2 = (q - r1) % q;
    if r1 == r2 {
        vec![r1]
    } else if r1 < r2 {
        vec![r1, r2]
    } else {
        vec![r2, r1]
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of the odd composite `n` by Brent's variant of Pollard
/// rho, or `None` when `budget` iterations do not suffice.
pub fn pollard_rho(n: u128, budget: u64) -> Option<u128> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut spent = 0u64;
    for c in 1u128.. {
        let f = |x: u128| add_mod_u128(mul_mod_u128(x, x, n), c % n, n);
        let (mut x, mut y, mut g, mut r, mut q) = (2u128, 2u128, 1u128, 1u64, 1u128);
        let mut ys = y;
        const BLOCK: u64 = 64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BLOCK.min(r - k) {
                    y = f(y);
                    q = mul_mod_u128(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += BLOCK;
                spent += BLOCK;
                if spent > budget {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
        if c > 20 {
            return None;
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Squarefree {
    Yes,
    No,
    Uncertain,
}

/// Squarefree test by trial division up to `trial_bound`, falling back to
/// Pollard rho on a cofactor that may still hide a square.
#[derive(Debug, Clone)]
pub struct SquarefreeTester {
    primes: Vec<u64>,
    rho_budget: u64,
}

impl SquarefreeTester {
    pub fn new(trial_bound: u64, rho_budget: u64) -> Self {
        SquarefreeTester { primes: primes_up_to(trial_bound), rho_budget }
    }

    pub fn trial_bound(&self) -> u64 {
        self.primes.last().copied().unwrap_or(1)
    }

    pub fn test(&self, n: u128) -> Squarefree {
        if n == 0 {
            return Squarefree::No;
        }
        let mut n = n;
        for &p in &self.primes {
            let p = p as u128;
            if p * p * p > n {
                // Every prime factor of n is at least p, so there are at most two.
                return if is_square_u128(n) && n > 1 { Squarefree::No } else { Squarefree::Yes };
            }
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return Squarefree::No;
                }
            }
        }
        if n == 1 {
            return Squarefree::Yes;
        }
        self.cofactor(n)
    }

    fn cofactor(&self, n: u128) -> Squarefree {
        if n == 1 {
            return Squarefree::Yes;
        }
        if is_square_u128(n) {
            return Squarefree::No;
        }
        if is_prime_u128(n) {
            return if primality_is_proven(n) { Squarefree::Yes } else { Squarefree::Uncertain };
        }
        let Some(a) = pollard_rho(n, self.rho_budget) else { return Squarefree::Uncertain };
        let b = n / a;
        if gcd_u128(a, b) > 1 {
            return Squarefree::No;
        }
        match (self.cofactor(a), self.cofactor(b)) {
            (Squarefree::No, _) | (_, Squarefree::No) => Squarefree::No,
            (Squarefree::Yes, Squarefree::Yes) => Squarefree::Yes,
            _ => Squarefree::Uncertain,
        }
    }

    /// Prime factorization as `(p, e)` pairs in increasing order, or `None`
    /// if some cofactor resists Pollard rho within the budget.
    pub fn factor(&self, n: u128) -> Option<Vec<(u128, u32)>> {
        assert!(n > 0);
        let mut n = n;
        let mut out = Vec::new();
        for &p in &self.primes {
            let p = p as u128;
            if p * p > n {
                break;
            }
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
        }
        let mut stack = vec![n];
        let mut big = Vec::new();
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime_u128(m) {
                big.push(m);
                continue;
            }
            let r = isqrt_u128(m);
            if r * r == m {
                stack.push(r);
                stack.push(r);
                continue;
            }
            let a = pollard_rho(m, self.rho_budget)?;
            stack.push(a);
            stack.push(m / a);
        }
        big.sort_unstable();
        for q in big {
            match out.last_mut() {
                Some((p, e)) if *p == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
        Some(out)
    }
}
