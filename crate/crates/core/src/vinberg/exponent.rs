use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::Q;

/// Exponents of a torus monomial `X^x · ∏ β_i^{e_i}` over a named basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentVector {
    pub basis_names: Vec<String>,
    pub exponents: Vec<Q>,
    pub x_prefactor: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("exponent vectors over different bases")]
pub struct BasisMismatch;

impl ExponentVector {
    pub fn new(basis_names: Vec<String>, exponents: Vec<Q>, x_prefactor: Q) -> Self {
        assert_eq!(basis_names.len(), exponents.len(), "one exponent per basis name");
        ExponentVector { basis_names, exponents, x_prefactor }
    }

    pub fn zero(basis_names: Vec<String>) -> Self {
        let n = basis_names.len();
        Self::new(basis_names, alloc::vec![Q::zero(); n], Q::zero())
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent(&self, name: &str) -> Option<Q> {
        self.basis_names.iter().position(|n| n == name).map(|i| self.exponents[i])
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, BasisMismatch> {
        if self.basis_names != other.basis_names {
            return Err(BasisMismatch);
        }
        let exponents = self.exponents.iter().zip(&other.exponents).map(|(a, b)| *a + *b).collect();
        Ok(ExponentVector {
            basis_names: self.basis_names.clone(),
            exponents,
            x_prefactor: self.x_prefactor + other.x_prefactor,
        })
    }

    pub fn scale(&self, c: Q) -> Self {
        ExponentVector {
            basis_names: self.basis_names.clone(),
            exponents: self.exponents.iter().map(|e| *e * c).collect(),
            x_prefactor: self.x_prefactor * c,
        }
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;

    /// Panics if the bases differ; use [`ExponentVector::try_add`] otherwise.
    fn add(self, other: &ExponentVector) -> ExponentVector {
        self.try_add(other).expect("exponent vectors over different bases")
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;

    fn neg(self) -> ExponentVector {
        self.scale(-Q::one())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X^{}", self.x_prefactor)?;
        for (n, e) in self.basis_names.iter().zip(&self.exponents) {
            if !e.is_zero() {
                write!(f, "·{n}^{e}")?;
            }
        }
        Ok(())
    }
}
