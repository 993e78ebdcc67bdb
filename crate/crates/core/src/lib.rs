//! Exact kernels for ADE Vinberg gradings and squarefree discriminant sieves.
//!
//! The crate is `no_std` and needs only `alloc`. Everything that touches the
//! filesystem, threads or the command line lives in the `adesieve` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod anfamily;
pub mod arith;
pub mod cuspintegral;
pub mod linalg;
pub mod multipoly;
pub mod rootsystem;
pub mod sieve;
pub mod vinberg;

pub use num_bigint::BigInt;
pub use num_rational::{BigRational, Rational64};

/// Small exact rationals used for exponent bookkeeping.
pub type Q = Rational64;
