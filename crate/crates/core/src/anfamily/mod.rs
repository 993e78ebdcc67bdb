//! The type-A kernel: monic integer polynomials, discriminants, strong and weak
//! `p²`-divisibility, and integral representatives with prescribed Q-invariant.

mod divisibility;
mod matrix;
mod poly;

use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

pub use divisibility::{
    divisibility_type, divisibility_type_with, weak_or_strong, Classifier, DivisibilityOptions, DivisibilityOutcome,
    DivisibilityType, Engine,
};
pub use matrix::{
    build_companion, build_companion_even, companion, expected_superdiagonal, q_invariant, sigma_m, SigmaCertificate,
    W0Matrix,
};
pub use poly::{
    coeff_list, discriminant, discriminant_form, discriminant_sylvester, normalized_discriminant, resultant,
    sylvester_matrix, trace_zero_discriminant_form, DiscriminantValue, MonicPoly,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnError {
    #[error("polynomial degree {0} is below 2")]
    DegreeTooSmall(usize),
    #[error("cannot parse coefficient {0:?}")]
    Parse(String),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("{0}")]
    Shape(String),
    #[error("n = {n} has the wrong parity (want {})", if *want_odd { "odd" } else { "even" })]
    Parity { n: usize, want_odd: bool },
    #[error("not weakly divisible at m = {m}: no shift l normalizes f")]
    NotWeaklyDivisible { m: BigInt },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("budget exceeded: p^d = {p}^{d} > {budget} and no fast path at p = {p}")]
    BudgetExceeded { p: u64, d: usize, budget: u64 },
    #[error("normalizer {normalizer} does not divide discriminant {value}")]
    Normalizer { normalizer: String, value: String },
}

/// A shift `l` with `f(x + l) = x^d + ... + m p_{d-1} x + m² p_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shift {
    pub shift: BigInt,
    pub poly: MonicPoly,
}

/// Least `l ∈ [0, m)` such that `m` divides the linear and `m²` the constant
/// coefficient of `f(x + l)`.
pub fn shift_normalize(f: &MonicPoly, m: &BigInt) -> Option<Shift> {
    let m2 = m * m;
    let d = f.degree();
    let mut l = BigInt::default();
    while &l < m {
        let g = f.shift(&l);
        let c = g.coeffs();
        if c[d - 2].is_multiple_of(m) && c[d - 1].is_multiple_of(&m2) {
            return Some(Shift { shift: l, poly: g });
        }
        l += BigInt::one();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn discriminant_examples() {
        let f = MonicPoly::from_i64(&[0, -1]).unwrap();
        assert_eq!(discriminant(&f), big(4));
        assert_eq!(discriminant_sylvester(&f), big(4));
        let g = MonicPoly::from_i64(&[0, 0, 1]).unwrap();
        assert_eq!(discriminant(&g), big(-27));
        let h = MonicPoly::from_i64(&[0, -3, 2]).unwrap();
        assert_eq!(discriminant(&h), big(0));
        assert_eq!(discriminant_sylvester(&h), big(0));
    }

    #[test]
    fn cubic_form() {
        // Δ(x^3 + a x + b) = -4a^3 - 27b^2
        let form = trace_zero_discriminant_form(3);
        assert_eq!(form.coefficient(&[3]), big(-4));
        assert_eq!(form.coefficient(&[0, 2]), big(-27));
        assert_eq!(form.num_terms(), 2);
    }

    #[test]
    fn shift_examples() {
        let m = big(6);
        let f = MonicPoly::from_i64(&[0, -36]).unwrap();
        assert_eq!(shift_normalize(&f, &m).unwrap().shift, big(0));
        // (x-1)^2 (x+2)
        let g = MonicPoly::from_i64(&[0, -3, 2]).unwrap();
        let s = shift_normalize(&g, &big(3)).unwrap();
        assert_eq!(s.shift, big(1));
        assert_eq!(s.poly, MonicPoly::from_i64(&[3, 0, 0]).unwrap());
        assert!(shift_normalize(&MonicPoly::from_i64(&[0, 1, 1]).unwrap(), &big(5)).is_none());
    }

    #[test]
    fn parse_trace_zero_shorthand() {
        let f = MonicPoly::parse("5,5", Some(3)).unwrap();
        assert_eq!(f, MonicPoly::from_i64(&[0, 5, 5]).unwrap());
        assert!(MonicPoly::parse("1", Some(3)).is_err());
        assert!(MonicPoly::parse("1,x", None).is_err());
        assert_eq!(MonicPoly::parse("0,-3,2", None).unwrap().to_string(), "x^3 - 3x + 2");
    }
}
