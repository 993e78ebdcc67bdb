use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::MonicPoly;
use super::{shift_normalize, AnError};
use crate::linalg;

/// Square rational matrix vanishing strictly above the superdiagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct W0Matrix {
    entries: Vec<Vec<BigRational>>,
}

impl W0Matrix {
    pub fn new(entries: Vec<Vec<BigRational>>) -> Result<Self, AnError> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(AnError::Shape(String::from("matrix must be square and nonempty")));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.iter().skip(i + 2).any(|x| !x.is_zero()) {
                return Err(AnError::Shape(alloc::format!("row {} has an entry above the superdiagonal", i + 1)));
            }
        }
        Ok(W0Matrix { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<BigRational>] {
        &self.entries
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i - 1][j - 1]
    }

    pub fn superdiagonal(&self) -> Vec<BigRational> {
        (0..self.size() - 1).map(|i| self.entries[i][i + 1].clone()).collect()
    }

    pub fn trace(&self) -> BigRational {
        (0..self.size()).map(|i| self.entries[i][i].clone()).sum()
    }

    pub fn is_trace_zero(&self) -> bool {
        self.trace().is_zero()
    }

    /// Symmetric about the antidiagonal.
    pub fn is_persymmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[n - 1 - j][n - 1 - i]))
    }

    pub fn is_integral(&self) -> bool {
        self.in_lattice(1)
    }

    /// All entries lie in `(1/n)ℤ`.
    pub fn in_lattice(&self, n: u32) -> bool {
        let n = BigRational::from_integer(BigInt::from(n));
        self.entries.iter().flatten().all(|x| (x * &n).is_integer())
    }

    /// `det(xI - A)` from the leading coefficient down.
    pub fn charpoly(&self) -> Vec<BigRational> {
        linalg::charpoly(&self.entries)
    }

    /// Whether the characteristic polynomial is exactly `f`.
    pub fn has_charpoly(&self, f: &MonicPoly) -> bool {
        let want: Vec<BigRational> = f.dense().into_iter().map(BigRational::from_integer).collect();
        self.charpoly() == want
    }

    /// Conjugation `D A D⁻¹` by a diagonal matrix.
    pub fn conjugate_diagonal(&self, d: &[BigRational]) -> W0Matrix {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().enumerate().map(|(j, x)| x * &d[i] / &d[j]).collect())
            .collect();
        W0Matrix { entries }
    }

    pub fn add_scalar(&self, l: &BigRational) -> W0Matrix {
        let mut m = self.clone();
        for i in 0..m.size() {
            m.entries[i][i] += l;
        }
        m
    }
}

/// `|∏ superdiagonal|`, the product of the height-one coordinates.
pub fn q_invariant(v: &W0Matrix) -> BigRational {
    v.superdiagonal().into_iter().fold(BigRational::one(), |a, b| a * b).abs()
}

/// The persymmetric band matrix with unit superdiagonal and characteristic
/// polynomial `x^N + b_1 x^{N-1} + ... + b_N`. Coefficient `b_k` sits on the
/// `(k-1)`-th subdiagonal at the antidiagonal, split in two halves when that
/// subdiagonal has no antidiagonal slot. For even `N` the `b_1` entry is
/// placed whole in the lower of the two central diagonal slots.
fn band_matrix(b: &[BigInt]) -> W0Matrix {
    let n = b.len();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n - 1 {
        m[i][i + 1] = BigRational::one();
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for (k0, bk) in b.iter().enumerate() {
        let k = k0 + 1;
        let v = -BigRational::from_integer(bk.clone());
        if k == 1 && n.is_multiple_of(2) {
            m[n / 2][n / 2] = v;
        } else if (n + k).is_multiple_of(2) {
            let (i, j) = ((n + k) / 2, (n + 2 - k) / 2);
            m[i - 1][j - 1] = v;
        } else {
            let h = &v * &half;
            let (i, j) = ((n + k - 1) / 2, (n + 1 - k) / 2);
            m[i - 1][j - 1] = h.clone();
            m[i][j] = h;
        }
    }
    W0Matrix { entries: m }
}

fn check_count(b: &[BigInt], n: usize) -> Result<(), AnError> {
    if b.len() != n + 1 {
        return Err(AnError::CoefficientCount { expected: n + 1, got: b.len() });
    }
    Ok(())
}

/// `B(b_1, ..., b_{n+1})` for odd `n`.
pub fn build_companion(b: &[BigInt], n: usize) -> Result<W0Matrix, AnError> {
    if n.is_multiple_of(2) {
        return Err(AnError::Parity { n, want_odd: true });
    }
    check_count(b, n)?;
    Ok(band_matrix(b))
}

/// The even-`n` analogue of [`build_companion`].
pub fn build_companion_even(b: &[BigInt], n: usize) -> Result<W0Matrix, AnError> {
    if n % 2 == 1 || n == 0 {
        return Err(AnError::Parity { n, want_odd: false });
    }
    check_count(b, n)?;
    Ok(band_matrix(b))
}

/// Either parity.
pub fn companion(f: &MonicPoly) -> W0Matrix {
    band_matrix(f.coeffs())
}

/// Output of [`sigma_m`] with its certified properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaCertificate {
    pub matrix: W0Matrix,
    pub m: BigInt,
    pub shift: BigInt,
    pub charpoly_ok: bool,
    /// Entries in `(1/4)ℤ`.
    pub lattice_ok: bool,
    pub integral: bool,
    pub superdiagonal_ok: bool,
    /// Literal `|∏ superdiagonal|`.
    pub q_literal: BigRational,
    /// The invariant the construction is meant to realize, `m`.
    pub q_intended: BigInt,
}

impl SigmaCertificate {
    pub fn certified(&self) -> bool {
        self.charpoly_ok && self.lattice_ok && self.superdiagonal_ok
    }
}

/// Expected superdiagonal `(m, 1, ..., 1, m)`; for size 2 the two end factors
/// fall on the single slot, giving `m²`.
pub fn expected_superdiagonal(size: usize, m: &BigInt) -> Vec<BigRational> {
    let mq = BigRational::from_integer(m.clone());
    if size == 2 {
        return vec![&mq * &mq];
    }
    let mut v = vec![BigRational::one(); size - 1];
    v[0] = mq.clone();
    v[size - 2] = mq;
    v
}

/// `D (B(g) + lI) D⁻¹` with `g(x) = f(x + l)` and `D = diag(m, 1, ..., 1, 1/m)`.
pub fn sigma_m(f: &MonicPoly, m: &BigInt) -> Result<SigmaCertificate, AnError> {
    if !m.is_positive() {
        return Err(AnError::NotWeaklyDivisible { m: m.clone() });
    }
    let (l, g) = if m.is_one() {
        (BigInt::zero(), f.clone())
    } else {
        let s = shift_normalize(f, m).ok_or_else(|| AnError::NotWeaklyDivisible { m: m.clone() })?;
        (s.shift.clone(), s.poly)
    };
    let n = f.degree();
    let b = companion(&g).add_scalar(&BigRational::from_integer(l.clone()));
    let mq = BigRational::from_integer(m.clone());
    let mut d = vec![BigRational::one(); n];
    d[0] = mq.clone();
    d[n - 1] = mq.recip();
    let matrix = b.conjugate_diagonal(&d);
    let charpoly_ok = matrix.has_charpoly(f);
    let lattice_ok = matrix.in_lattice(4);
    let integral = matrix.is_integral();
    let superdiagonal_ok = matrix.superdiagonal() == expected_superdiagonal(n, m);
    let q_literal = q_invariant(&matrix);
    Ok(SigmaCertificate {
        matrix,
        m: m.clone(),
        shift: l,
        charpoly_ok,
        lattice_ok,
        integral,
        superdiagonal_ok,
        q_literal,
        q_intended: m.clone(),
    })
}
