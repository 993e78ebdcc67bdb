use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::poly::{discriminant, discriminant_form, MonicPoly};
use super::AnError;
use crate::arith::{is_prime, mod_inv, mul_mod};
use crate::multipoly::ModForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DivisibilityType {
    None,
    Weak,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Definition,
    BruteForce,
    FastPath,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityOptions {
    /// Largest `p^d` the perturbation scan may visit.
    pub budget: u64,
    /// Run the fast path next to brute force and record disagreements.
    pub cross_check: bool,
}

impl Default for DivisibilityOptions {
    fn default() -> Self {
        DivisibilityOptions { budget: 10_000_000, cross_check: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityOutcome {
    pub kind: DivisibilityType,
    pub engine: Engine,
    /// Brute force was over budget, so only the fast path decided.
    pub fast_path_only: bool,
    /// `(brute force, fast path)` when both ran and disagreed.
    pub disagreement: Option<(DivisibilityType, DivisibilityType)>,
}

fn residues(f: &MonicPoly, m: u64) -> Vec<u64> {
    let mb = BigInt::from(m);
    f.coeffs().iter().map(|c| c.mod_floor(&mb).to_u64().expect("residue")).collect()
}

/// Divisibility classifier for monic polynomials of one degree at one prime.
#[derive(Debug, Clone)]
pub struct Classifier {
    d: usize,
    p: u64,
    q: u64,
    form: ModForm,
}

impl Classifier {
    pub fn new(d: usize, p: u64) -> Result<Self, AnError> {
        if !is_prime(p) {
            return Err(AnError::NotPrime(p));
        }
        if d < 2 {
            return Err(AnError::DegreeTooSmall(d));
        }
        let q = p.checked_mul(p).ok_or(AnError::NotPrime(p))?;
        Ok(Classifier { d, p, q, form: discriminant_form(d).reduce(q, d) })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// `Δ mod p²` for coefficients given as residues mod `p²`.
    pub fn disc_mod(&self, b: &[u64]) -> u64 {
        self.form.eval(b)
    }

    /// Scans all `p^d` perturbations `b + p c`.
    pub fn brute_force(&self, b: &[u64]) -> DivisibilityType {
        if self.disc_mod(b) != 0 {
            return DivisibilityType::None;
        }
        let mut c = vec![0u64; self.d];
        let mut pt = b.to_vec();
        loop {
            let mut i = 0;
            loop {
                if i == self.d {
                    return DivisibilityType::Strong;
                }
                c[i] += 1;
                if c[i] < self.p {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
            for (k, (x, ck)) in pt.iter_mut().zip(&c).enumerate() {
                *x = (b[k] + self.p * ck) % self.q;
            }
            if self.disc_mod(&pt) != 0 {
                return DivisibilityType::Weak;
            }
        }
    }

    /// Shift criterion; `None` at `p = 2`.
    pub fn fast_path(&self, b: &[u64]) -> Option<DivisibilityType> {
        if self.p == 2 {
            return None;
        }
        if self.disc_mod(b) != 0 {
            return Some(DivisibilityType::None);
        }
        Some(weak_or_strong(b, self.p))
    }

    pub fn classify(&self, f: &MonicPoly, opts: &DivisibilityOptions) -> Result<DivisibilityOutcome, AnError> {
        assert_eq!(f.degree(), self.d);
        let b = residues(f, self.q);
        let within = self.p.checked_pow(self.d as u32).is_some_and(|v| v <= opts.budget);
        let fast = if opts.cross_check || !within { self.fast_path(&b) } else { None };
        match (within, fast) {
            (true, fast) => {
                let brute = self.brute_force(&b);
                let disagreement = fast.filter(|k| *k != brute).map(|k| (brute, k));
                let engine = if fast.is_some() { Engine::Both } else { Engine::BruteForce };
                Ok(DivisibilityOutcome { kind: brute, engine, fast_path_only: false, disagreement })
            }
            (false, Some(kind)) => {
                Ok(DivisibilityOutcome { kind, engine: Engine::FastPath, fast_path_only: true, disagreement: None })
            }
            (false, None) => Err(AnError::BudgetExceeded { p: self.p, d: self.d, budget: opts.budget }),
        }
    }
}

/// Classification of `f` at `p`, defaulting to both engines.
pub fn divisibility_type(f: &MonicPoly, p: u64) -> Result<DivisibilityOutcome, AnError> {
    divisibility_type_with(f, p, &DivisibilityOptions::default())
}

pub fn divisibility_type_with(
    f: &MonicPoly,
    p: u64,
    opts: &DivisibilityOptions,
) -> Result<DivisibilityOutcome, AnError> {
    if !is_prime(p) {
        return Err(AnError::NotPrime(p));
    }
    let pb = BigInt::from(p);
    if !discriminant(f).is_multiple_of(&(&pb * &pb)) {
        return Ok(DivisibilityOutcome {
            kind: DivisibilityType::None,
            engine: Engine::Definition,
            fast_path_only: false,
            disagreement: None,
        });
    }
    Classifier::new(f.degree(), p)?.classify(f, opts)
}

/// Fast path so the caller may skip building a [`Classifier`]: `b` holds the
/// coefficients mod `p²` and `p² | Δ` is already known. Needs `p` odd.
pub fn weak_or_strong(b: &[u64], p: u64) -> DivisibilityType {
    debug_assert!(p > 2);
    let q = p * p;
    let d = b.len();
    let mut dense = Vec::with_capacity(d + 1);
    dense.push(1u64);
    dense.extend_from_slice(b);
    let modp: Vec<u64> = dense.iter().map(|c| c % p).collect();
    let g = gcd_mod_p(modp.clone(), derivative_mod_p(&modp, p), p);
    // A linear gcd pins down the only multiple root; otherwise scan.
    let candidates = if g.len() == 2 {
        let l = mul_mod(p - g[1], mod_inv(g[0], p).expect("nonzero leading coefficient"), p);
        l..l + 1
    } else {
        0..p
    };
    for l in candidates {
        let (v, dv) = eval_with_derivative(&modp, l, p);
        if v != 0 || dv != 0 {
            continue;
        }
        // l is a multiple root mod p.
        let h = deflate(&deflate(&modp, l, p), l, p);
        if eval(&h, l, p) == 0 || !squarefree_mod_p(&h, p) {
            return DivisibilityType::Strong;
        }
        return if eval(&dense, l, q) == 0 { DivisibilityType::Weak } else { DivisibilityType::Strong };
    }
    DivisibilityType::Strong
}

fn eval(f: &[u64], x: u64, m: u64) -> u64 {
    f.iter().fold(0, |acc, c| (mul_mod(acc, x, m) + c) % m)
}

fn eval_with_derivative(f: &[u64], x: u64, m: u64) -> (u64, u64) {
    let mut v = 0;
    let mut dv = 0;
    for c in f {
        dv = (mul_mod(dv, x, m) + v) % m;
        v = (mul_mod(v, x, m) + c) % m;
    }
    (v, dv)
}

/// Quotient of `f` by `x - l` (the remainder is dropped).
fn deflate(f: &[u64], l: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(f.len().saturating_sub(1));
    let mut acc = 0;
    for c in &f[..f.len() - 1] {
        acc = (mul_mod(acc, l, p) + c) % p;
        out.push(acc);
    }
    out
}

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    let lead = f.iter().position(|&c| c != 0).unwrap_or(f.len());
    f.drain(..lead);
    f
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let inv = mod_inv(b[0], p).expect("nonzero leading coefficient");
    while r.len() >= b.len() {
        let f = mul_mod(r[0], inv, p);
        for (x, y) in r.iter_mut().zip(b) {
            *x = (*x + p - mul_mod(f, *y, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn derivative_mod_p(h: &[u64], p: u64) -> Vec<u64> {
    let n = h.len() - 1;
    trim(h.iter().take(n).enumerate().map(|(i, c)| mul_mod(*c, ((n - i) as u64) % p, p)).collect())
}

fn gcd_mod_p(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a, b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn squarefree_mod_p(h: &[u64], p: u64) -> bool {
    let h = trim(h.to_vec());
    if h.len() <= 2 {
        return true;
    }
    let dh = derivative_mod_p(&h, p);
    if dh.is_empty() {
        return false;
    }
    gcd_mod_p(h, dh, p).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strong_example() {
        let f = MonicPoly::from_i64(&[0, 5, 5]).unwrap();
        let out = divisibility_type(&f, 5).unwrap();
        assert_eq!(out.kind, DivisibilityType::Strong);
        assert_eq!(out.disagreement, None);
    }

    #[test]
    fn weak_witness() {
        // (x-1)^2 (x-4) + 49
        let f = MonicPoly::from_i64(&[-6, 9, -4 + 49]).unwrap();
        let out = divisibility_type(&f, 7).unwrap();
        assert_eq!(out.kind, DivisibilityType::Weak);
        assert_eq!(out.engine, Engine::Both);
        assert_eq!(out.disagreement, None);
    }

    #[test]
    fn none_when_p2_does_not_divide() {
        let f = MonicPoly::from_i64(&[0, 1, 1]).unwrap();
        assert_eq!(divisibility_type(&f, 5).unwrap().kind, DivisibilityType::None);
        assert!(divisibility_type(&f, 9).is_err());
    }

    #[test]
    fn squarefree_mod_p_detects_repeated_quadratic() {
        // (x^2 + 1)^2 mod 3
        assert!(!squarefree_mod_p(&[1, 0, 2, 0, 1], 3));
        assert!(squarefree_mod_p(&[1, 0, 1], 3));
    }

    #[test]
    fn budget_refusal_at_two() {
        let f = MonicPoly::from_i64(&[0, 0, 0, 0]).unwrap();
        let opts = DivisibilityOptions { budget: 4, cross_check: true };
        assert!(matches!(
            divisibility_type_with(&f, 2, &opts),
            Err(AnError::BudgetExceeded { .. })
        ));
        let f3 = MonicPoly::from_i64(&[0, 0, 0, 0]).unwrap();
        let out = divisibility_type_with(&f3, 3, &opts).unwrap();
        assert!(out.fast_path_only);
        assert_eq!(out.kind, DivisibilityType::Strong);
    }
}
