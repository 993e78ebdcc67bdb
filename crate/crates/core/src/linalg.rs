//! Exact linear algebra: coordinate solves over small rationals and the
//! division-free Berkowitz characteristic polynomial over any commutative ring.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::Q;

/// Commutative ring with identity, as needed by [`charpoly`].
pub trait Ring:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Characteristic polynomial `det(xI - A)` of a square matrix, returned with the
/// leading coefficient first: `[1, c_1, ..., c_n]`.
///
/// Berkowitz's algorithm uses only ring operations, so it is exact over the
/// integers and over polynomial rings.
pub fn charpoly<T: Ring>(a: &[Vec<T>]) -> Vec<T> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut poly = vec![T::one()];
    for k in 0..n {
        // Leading k×k block M, column C = A[0..k][k], row R = A[k][0..k].
        let mut col: Vec<T> = (0..k).map(|i| a[i][k].clone()).collect();
        let mut t = Vec::with_capacity(k + 2);
        t.push(T::one());
        t.push(-a[k][k].clone());
        for _ in 0..k {
            let mut rc = T::zero();
            for (j, c) in col.iter().enumerate() {
                rc = rc + a[k][j].clone() * c.clone();
            }
            t.push(-rc);
            let next: Vec<T> = (0..k)
                .map(|i| {
                    let mut s = T::zero();
                    for (j, c) in col.iter().enumerate() {
                        s = s + a[i][j].clone() * c.clone();
                    }
                    s
                })
                .collect();
            col = next;
        }
        // Lower-triangular Toeplitz product, (k+2)×(k+1) times poly.
        let mut next = Vec::with_capacity(k + 2);
        for i in 0..k + 2 {
            let mut s = T::zero();
            for (j, pj) in poly.iter().enumerate() {
                if i >= j {
                    s = s + t[i - j].clone() * pj.clone();
                }
            }
            next.push(s);
        }
        poly = next;
    }
    poly
}

/// Determinant via the constant term of [`charpoly`].
pub fn determinant<T: Ring>(a: &[Vec<T>]) -> T {
    let n = a.len();
    let c = charpoly(a).pop().unwrap_or_else(T::one);
    if n.is_multiple_of(2) {
        c
    } else {
        -c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum SpanError {
    #[error("basis vectors are linearly dependent")]
    Dependent,
    #[error("vector lies outside the span of the basis")]
    OutsideSpan,
}

/// Coordinates of `v` in terms of `basis` (each basis vector has the ambient
/// length of `v`).
pub fn express(basis: &[Vec<Q>], v: &[Q]) -> Result<Vec<Q>, SpanError> {
    let k = basis.len();
    let n = v.len();
    // Augmented system: rows are ambient coordinates, columns the basis.
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = basis.iter().map(|b| b[i]).collect();
            row.push(v[i]);
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(k);
    for c in 0..k {
        let Some(r) = (pivot_row..n).find(|&r| !m[r][c].is_zero()) else {
            return Err(SpanError::Dependent);
        };
        m.swap(pivot_row, r);
        let inv = m[pivot_row][c].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != pivot_row && !m[r][c].is_zero() {
                let f = m[r][c];
                for j in 0..=k {
                    let d = m[pivot_row][j] * f;
                    m[r][j] -= d;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return Err(SpanError::OutsideSpan);
    }
    Ok(pivots.iter().map(|&r| m[r][k]).collect())
}

/// Linear combination `Σ c_i b_i`.
pub fn combine(basis: &[Vec<Q>], coeffs: &[Q]) -> Vec<Q> {
    let n = basis.first().map_or(0, Vec::len);
    let mut out = vec![Q::zero(); n];
    for (b, c) in basis.iter().zip(coeffs) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += *x * *c;
        }
    }
    out
}
