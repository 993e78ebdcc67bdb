use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::AnError;
use crate::linalg;
use crate::multipoly::MultiPoly;

/// `x^d + b_1 x^{d-1} + ... + b_d` with `d ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonicPoly {
    coeffs: Vec<BigInt>,
}

impl MonicPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self, AnError> {
        if coeffs.len() < 2 {
            return Err(AnError::DegreeTooSmall(coeffs.len()));
        }
        Ok(MonicPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, AnError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parses comma-separated `b_1,...,b_d`. With an explicit degree `d` and
    /// only `d - 1` coefficients, the list is read as `b_2,...,b_d` of a
    /// trace-zero polynomial.
    pub fn parse(s: &str, degree: Option<usize>) -> Result<Self, AnError> {
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            let t = part.trim();
            let c: BigInt = t.parse().map_err(|_| AnError::Parse(t.to_string()))?;
            coeffs.push(c);
        }
        match degree {
            None => Self::new(coeffs),
            Some(d) if coeffs.len() == d => Self::new(coeffs),
            Some(d) if coeffs.len() + 1 == d => {
                coeffs.insert(0, BigInt::zero());
                Self::new(coeffs)
            }
            Some(d) => Err(AnError::CoefficientCount { expected: d, got: coeffs.len() }),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `b_1, ..., b_d`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_trace_zero(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// Coefficients from the leading one down: `[1, b_1, ..., b_d]`.
    pub fn dense(&self) -> Vec<BigInt> {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(BigInt::one());
        v.extend(self.coeffs.iter().cloned());
        v
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc * x + c)
    }

    /// `f(x + l)`.
    pub fn shift(&self, l: &BigInt) -> MonicPoly {
        // Repeated synthetic division by (x - l) yields the Taylor coefficients at l.
        let mut a = self.dense();
        let d = a.len() - 1;
        for i in 0..d {
            for j in 1..=d - i {
                let t = &a[j - 1] * l;
                a[j] += t;
            }
        }
        MonicPoly { coeffs: a[1..].to_vec() }
    }

    /// `f'` as dense coefficients from the top.
    pub fn derivative_dense(&self) -> Vec<BigInt> {
        let d = self.degree();
        self.dense().iter().take(d).enumerate().map(|(i, c)| c * BigInt::from(d - i)).collect()
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        write!(f, "x^{d}")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = d - i - 1;
            let sign = if c.is_negative() { " - " } else { " + " };
            let a = c.abs();
            f.write_str(sign)?;
            match e {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}")?;
                    }
                    f.write_str("x")?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn strip(mut v: Vec<BigRational>) -> Vec<BigRational> {
    let lead = v.iter().position(|c| !c.is_zero()).unwrap_or(v.len().saturating_sub(1));
    v.drain(..lead);
    v
}

fn is_zero_poly(v: &[BigRational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Remainder of `a` by `b`, both dense from the top with `b[0] != 0`.
fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    while r.len() >= b.len() && !is_zero_poly(&r) {
        let f = &r[0] / &b[0];
        for (x, y) in r.iter_mut().zip(b) {
            *x -= &f * y;
        }
        r.remove(0);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
        r = strip(r);
    }
    r
}

/// `Res(f, g)` over ℚ by the Euclidean recursion; inputs dense from the top.
pub fn resultant(f: &[BigRational], g: &[BigRational]) -> BigRational {
    let mut f = strip(f.to_vec());
    let mut g = strip(g.to_vec());
    let mut acc = BigRational::one();
    loop {
        let m = f.len() - 1;
        let n = g.len() - 1;
        if g.len() == 1 {
            return if g[0].is_zero() { BigRational::zero() } else { acc * pow(&g[0], m) };
        }
        if f.len() == 1 {
            return if f[0].is_zero() { BigRational::zero() } else { acc * pow(&f[0], n) };
        }
        if m < n {
            if (m * n) % 2 == 1 {
                acc = -acc;
            }
            core::mem::swap(&mut f, &mut g);
            continue;
        }
        let r = rem(&f, &g);
        if is_zero_poly(&r) {
            return BigRational::zero();
        }
        let k = r.len() - 1;
        // Res(f, g) = (-1)^{mn} lc(g)^{m-k} Res(g, r)
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= pow(&g[0], m - k);
        f = g;
        g = r;
    }
}

fn pow(x: &BigRational, k: usize) -> BigRational {
    num_traits::pow(x.clone(), k)
}

fn disc_sign(d: usize) -> bool {
    (d * (d - 1) / 2) % 2 == 1
}

fn to_q(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// `Δ(f) = (-1)^{d(d-1)/2} Res(f, f')`, via the Euclidean resultant.
pub fn discriminant(f: &MonicPoly) -> BigInt {
    let r = resultant(&to_q(&f.dense()), &to_q(&f.derivative_dense()));
    debug_assert!(r.is_integer());
    let r = r.to_integer();
    if disc_sign(f.degree()) {
        -r
    } else {
        r
    }
}

/// Sylvester matrix of two polynomials given dense from the top.
pub fn sylvester_matrix<T: Clone + Zero>(f: &[T], g: &[T]) -> Vec<Vec<T>> {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    let mut s = vec![vec![T::zero(); size]; size];
    for i in 0..n {
        for (j, c) in f.iter().enumerate() {
            s[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.iter().enumerate() {
            s[n + i][i + j] = c.clone();
        }
    }
    s
}

/// The discriminant as a Sylvester determinant; independent of [`discriminant`].
pub fn discriminant_sylvester(f: &MonicPoly) -> BigInt {
    let s = sylvester_matrix(&f.dense(), &f.derivative_dense());
    let r = linalg::determinant(&s);
    if disc_sign(f.degree()) {
        -r
    } else {
        r
    }
}

/// Discriminant of the generic monic polynomial of degree `d` as a polynomial
/// in `b_1, ..., b_d` (variable `i` is `b_{i+1}`).
pub fn discriminant_form(d: usize) -> MultiPoly {
    assert!(d >= 2);
    let mut f = vec![MultiPoly::one()];
    f.extend((0..d).map(MultiPoly::var));
    let df: Vec<MultiPoly> = f
        .iter()
        .take(d)
        .enumerate()
        .map(|(i, c)| c.clone() * MultiPoly::constant((d - i) as i64))
        .collect();
    let r = linalg::determinant(&sylvester_matrix(&f, &df));
    if disc_sign(d) {
        -r
    } else {
        r
    }
}

/// Discriminant of `x^d + p_2 x^{d-2} + ... + p_d` in `p_2, ..., p_d`
/// (variable `i` is `p_{i+2}`).
pub fn trace_zero_discriminant_form(d: usize) -> MultiPoly {
    discriminant_form(d).eliminate_zero(0)
}

/// A discriminant together with its value after dividing out a family content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantValue {
    pub raw: BigInt,
    pub normalizer: BigInt,
    pub normalized: BigInt,
}

pub fn normalized_discriminant(f: &MonicPoly, normalizer: &BigInt) -> Result<DiscriminantValue, AnError> {
    let raw = discriminant(f);
    let (q, r) = raw.div_rem(normalizer);
    if !r.is_zero() {
        return Err(AnError::Normalizer { normalizer: normalizer.to_string(), value: raw.to_string() });
    }
    Ok(DiscriminantValue { raw, normalizer: normalizer.clone(), normalized: q })
}

/// Comma-separated `b_1,...,b_d`, the CLI input format.
pub fn coeff_list(f: &MonicPoly) -> String {
    let parts: Vec<String> = f.coeffs().iter().map(ToString::to_string).collect();
    parts.join(",")
}
