//! Sparse multivariate integer polynomials, used for symbolic discriminant forms.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exponent vectors are stored without trailing zeros, so polynomials in
/// different numbers of variables compare and combine directly.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl MultiPoly {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Self::monomial(e, 1)
    }

    pub fn monomial(exps: Vec<u32>, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exps), c);
        }
        MultiPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// One more than the largest variable index that occurs.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(&trim(exps.to_vec())).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact division by an integer that divides every coefficient.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            terms.insert(e.clone(), q);
        }
        Some(MultiPoly { terms })
    }

    /// Substitutes 0 for variable `i` and renumbers the later variables down.
    pub fn eliminate_zero(&self, i: usize) -> Self {
        let mut out = MultiPoly::default();
        for (e, c) in &self.terms {
            if e.get(i).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut e2 = e.clone();
            if i < e2.len() {
                e2.remove(i);
            }
            out.add_term(trim(e2), c.clone());
        }
        out
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        let mut s = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            s += t;
        }
        s
    }

    /// Exact evaluation in `i128`, or `None` on overflow.
    pub fn eval_i128(&self, point: &[i128]) -> Option<i128> {
        let mut s: i128 = 0;
        for (e, c) in &self.terms {
            let mut t = c.to_i128()?;
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t.checked_mul(*x)?;
                }
            }
            s = s.checked_add(t)?;
        }
        Some(s)
    }

    /// Reduction modulo `m` for fast repeated evaluation.
    pub fn reduce(&self, m: u64, nvars: usize) -> ModForm {
        assert!(nvars >= self.nvars());
        let big = BigInt::from(m);
        let mut max_exp = vec![0u32; nvars];
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let r = c.mod_floor(&big).to_u64().expect("residue fits");
                if r == 0 {
                    return None;
                }
                let mut ex = e.clone();
                ex.resize(nvars, 0);
                for (mx, k) in max_exp.iter_mut().zip(&ex) {
                    *mx = (*mx).max(*k);
                }
                Some((ex, r))
            })
            .collect();
        ModForm { modulus: m, nvars, terms, max_exp }
    }
}

impl Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        MultiPoly::constant(1)
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;

    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;

    fn neg(mut self) -> MultiPoly {
        for c in self.terms.values_mut() {
            *c = -core::mem::take(c);
        }
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;

    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self + (-rhs)
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;

    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let n = e1.len().max(e2.len());
                let e: Vec<u32> = (0..n)
                    .map(|i| e1.get(i).copied().unwrap_or(0) + e2.get(i).copied().unwrap_or(0))
                    .collect();
                *acc.entry(e).or_default() += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { terms: acc }
    }
}

/// A polynomial with coefficients reduced modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModForm {
    pub modulus: u64,
    pub nvars: usize,
    terms: Vec<(Vec<u32>, u64)>,
    max_exp: Vec<u32>,
}

impl ModForm {
    /// Value at a point of residues in `[0, modulus)`.
    pub fn eval(&self, point: &[u64]) -> u64 {
        let mut scratch = Vec::new();
        self.eval_with(point, &mut scratch)
    }

    /// Same as [`ModForm::eval`], reusing `scratch` for the power tables.
    pub fn eval_with(&self, point: &[u64], scratch: &mut Vec<u64>) -> u64 {
        let m = self.modulus as u128;
        scratch.clear();
        for (x, &mx) in point.iter().zip(&self.max_exp) {
            let mut acc = 1u64 % self.modulus;
            scratch.push(acc);
            for _ in 0..mx {
                acc = ((acc as u128 * *x as u128) % m) as u64;
                scratch.push(acc);
            }
        }
        let mut s: u128 = 0;
        for (e, c) in &self.terms {
            let mut t = *c as u128;
            let mut base = 0usize;
            for (&k, &mx) in e.iter().zip(&self.max_exp) {
                if k > 0 {
                    t = t * scratch[base + k as usize] as u128 % m;
                }
                base += mx as usize + 1;
            }
            s += t;
        }
        (s % m) as u64
    }

    pub fn is_zero_form(&self) -> bool {
        self.terms.is_empty()
    }
}

impl core::fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = e.iter().all(|&k| k == 0);
            if !a.is_one() || is_const {
                write!(f, "{a}")?;
            }
            let mut first = a.is_one();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                write!(f, "x{i}")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}
