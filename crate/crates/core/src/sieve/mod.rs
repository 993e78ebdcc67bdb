//! Local densities, empirical squarefree counts and tail sets for A-type
//! families of monic polynomials.
//!
//! Kernels take an [`Executor`] so the caller decides how the disjoint index
//! ranges are scheduled. [`Serial`] runs them in order.

mod global;
mod local;
mod report;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::anfamily::{discriminant_form, trace_zero_discriminant_form, AnError};
use crate::multipoly::MultiPoly;
use crate::rootsystem::{DynkinType, Family};
use crate::Q;

pub use global::{empirical_density, tail_counts, tail_profile, EmpiricalCounts, GlobalEngine, GlobalOptions, TailCounts};
pub use local::{
    local_density, local_density_exact, local_density_exact_transposed, local_density_monte_carlo, LocalDensity,
    LocalOptions, Method,
};
pub use report::{assemble, compare, prime_density, prime_tail_sum, PrimeDensity, TailEstimate, CompareOptions, DensityReport, EmpiricalSummary, Verdict, SCHEMA_VERSION};

/// Largest number of fibres an exact local density may visit.
pub const LOCAL_BUDGET: u64 = 100_000_000;
/// Largest number of integer points a height box may contain.
pub const BOX_BUDGET: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SieveError {
    #[error("family {0} is not of type A")]
    NotTypeA(String),
    #[error("degrees must be positive and strictly increasing, got {0:?}")]
    Degrees(Vec<u32>),
    #[error("form uses {form} variables but the family has {degrees} degrees")]
    Arity { form: usize, degrees: usize },
    #[error("normalizer {normalizer} does not divide the content {content} of the discriminant form")]
    Normalizer { normalizer: BigInt, content: BigInt },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("height must be positive, got {0}")]
    Height(Q),
    #[error("{what} needs {needed} evaluations, over the budget of {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },
    #[error("family {0} has no polynomial coefficient layout")]
    NoLayout(String),
    #[error(transparent)]
    An(#[from] AnError),
}

/// How a point of the family maps to the coefficients `b₁..b_d` of a monic
/// polynomial, when it does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    /// Coordinates are `b₁..b_d`, or `b₂..b_d` with `b₁ = 0`.
    Monic { trace_zero: bool },
    /// User-supplied form with no polynomial behind it.
    Opaque,
}

/// A family of points `(p_{d_1}, …, p_{d_r})` together with its discriminant.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub name: String,
    pub dynkin: DynkinType,
    pub degrees: Vec<u32>,
    pub disc_normalizer: BigInt,
    pub trace_zero: bool,
    pub layout: Layout,
    form: MultiPoly,
    normalized: MultiPoly,
}

impl FamilySpec {
    /// Monic polynomials of degree `rank + 1`.
    pub fn a_type(rank: usize, trace_zero: bool) -> Result<Self, SieveError> {
        let dynkin = DynkinType::a(rank).map_err(|_| SieveError::NotTypeA(alloc::format!("A{rank}")))?;
        let n = rank + 1;
        let (degrees, form) = if trace_zero {
            ((2..=n as u32).collect(), trace_zero_discriminant_form(n))
        } else {
            ((1..=n as u32).collect(), discriminant_form(n))
        };
        let content = form.content();
        let mut name = dynkin.to_string();
        if !trace_zero {
            name.push_str("-full");
        }
        Self::build(name, dynkin, degrees, form, content, trace_zero, Layout::Monic { trace_zero })
    }

    /// Builds the family named like `A2` (trace zero) or `A2-full`.
    pub fn parse(name: &str) -> Result<Self, SieveError> {
        let (base, trace_zero) = match name.strip_suffix("-full") {
            Some(b) => (b, false),
            None => (name, true),
        };
        let dynkin: DynkinType = base.parse().map_err(|_| SieveError::NotTypeA(name.to_string()))?;
        if dynkin.family() != Family::A {
            return Err(SieveError::NotTypeA(name.to_string()));
        }
        Self::a_type(dynkin.rank(), trace_zero)
    }

    /// Hook for experiments with user-supplied discriminant forms.
    pub fn custom(
        name: impl Into<String>,
        dynkin: DynkinType,
        degrees: Vec<u32>,
        form: MultiPoly,
        normalizer: BigInt,
        layout: Layout,
    ) -> Result<Self, SieveError> {
        let trace_zero = matches!(layout, Layout::Monic { trace_zero: true });
        Self::build(name.into(), dynkin, degrees, form, normalizer, trace_zero, layout)
    }

    /// One-variable family whose discriminant is identically 1.
    pub fn constant_one() -> Self {
        Self::build(
            "const-1".to_string(),
            DynkinType::a(1).expect("A1"),
            alloc::vec![1],
            MultiPoly::constant(1),
            BigInt::one(),
            false,
            Layout::Opaque,
        )
        .expect("valid family")
    }

    fn build(
        name: String,
        dynkin: DynkinType,
        degrees: Vec<u32>,
        form: MultiPoly,
        normalizer: BigInt,
        trace_zero: bool,
        layout: Layout,
    ) -> Result<Self, SieveError> {
        if degrees.is_empty() || degrees[0] == 0 || degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SieveError::Degrees(degrees));
        }
        if form.nvars() > degrees.len() {
            return Err(SieveError::Arity { form: form.nvars(), degrees: degrees.len() });
        }
        let content = form.content();
        let bad = || SieveError::Normalizer { normalizer: normalizer.clone(), content: content.clone() };
        if !normalizer.is_positive() || !(content.is_zero() || content.is_multiple_of(&normalizer)) {
            return Err(bad());
        }
        let normalized = form.div_exact(&normalizer).ok_or_else(bad)?;
        Ok(FamilySpec { name, dynkin, degrees, disc_normalizer: normalizer, trace_zero, layout, form, normalized })
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn form(&self) -> &MultiPoly {
        &self.form
    }

    /// Discriminant divided by the normalizer.
    pub fn normalized_form(&self) -> &MultiPoly {
        &self.normalized
    }

    /// Degree of the underlying monic polynomial.
    pub fn poly_degree(&self) -> Option<usize> {
        match self.layout {
            Layout::Monic { trace_zero: true } => Some(self.rank() + 1),
            Layout::Monic { trace_zero: false } => Some(self.rank()),
            Layout::Opaque => None,
        }
    }

    /// `b₁..b_d` for a point of the family.
    pub fn coefficients(&self, point: &[i64]) -> Option<Vec<i64>> {
        match self.layout {
            Layout::Monic { trace_zero: true } => {
                let mut b = alloc::vec![0];
                b.extend_from_slice(point);
                Some(b)
            }
            Layout::Monic { trace_zero: false } => Some(point.to_vec()),
            Layout::Opaque => None,
        }
    }

    /// True for `x³ + ax + b` with `Δ = -4a³ - 27b²`.
    pub fn is_a2_trace_zero(&self) -> bool {
        let mut expect = MultiPoly::monomial(alloc::vec![3, 0], -4);
        expect = expect + MultiPoly::monomial(alloc::vec![0, 2], -27);
        self.degrees == [2, 3] && self.normalized == expect
    }
}

/// Integer points with `|p_{d_i}| < X^{d_i}` for every coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightBox {
    pub x: Q,
    /// Largest allowed `|p_{d_i}|`.
    pub bounds: Vec<u64>,
}

impl HeightBox {
    pub fn new(fam: &FamilySpec, x: Q) -> Result<Self, SieveError> {
        if *x.numer() <= 0 {
            return Err(SieveError::Height(x));
        }
        let u = BigInt::from(*x.numer());
        let v = BigInt::from(*x.denom());
        let mut bounds = Vec::with_capacity(fam.rank());
        for &d in &fam.degrees {
            let num: BigInt = num_traits::pow(u.clone(), d as usize) - 1;
            let den: BigInt = num_traits::pow(v.clone(), d as usize);
            let b = (num / den).to_u64().filter(|b| *b < (1 << 62)).ok_or(SieveError::BudgetExceeded {
                what: "height box",
                needed: u128::MAX,
                budget: BOX_BUDGET,
            })?;
            bounds.push(b);
        }
        Ok(HeightBox { x, bounds })
    }

    pub fn from_integer(fam: &FamilySpec, x: i64) -> Result<Self, SieveError> {
        Self::new(fam, Q::from_integer(x))
    }

    /// Number of integer points, saturating.
    pub fn count(&self) -> u128 {
        self.bounds.iter().fold(1u128, |acc, b| acc.saturating_mul(2 * *b as u128 + 1))
    }

    /// Whether `point` lies in the box.
    pub fn contains(&self, point: &[i64]) -> bool {
        point.len() == self.bounds.len() && point.iter().zip(&self.bounds).all(|(c, b)| c.unsigned_abs() <= *b)
    }

    fn check_budget(&self) -> Result<(), SieveError> {
        let n = self.count();
        if n > BOX_BUDGET {
            return Err(SieveError::BudgetExceeded { what: "height box", needed: n, budget: BOX_BUDGET });
        }
        Ok(())
    }
}

/// Schedules independent tasks and returns their results in task order.
pub trait Executor: Sync {
    fn threads(&self) -> usize;

    fn map<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every task on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn threads(&self) -> usize {
        1
    }

    fn map<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..tasks).map(f).collect()
    }
}

/// Splits `0..n` into at most `parts` contiguous ranges.
pub(crate) fn partition(n: u64, parts: usize) -> Vec<core::ops::Range<u64>> {
    let parts = (parts as u64).clamp(1, n.max(1));
    let step = n.div_ceil(parts);
    (0..parts).map(|i| (i * step).min(n)..((i + 1) * step).min(n)).filter(|r| !r.is_empty()).collect()
}

fn check_prime(p: u64) -> Result<(), SieveError> {
    if crate::arith::is_prime(p) {
        Ok(())
    } else {
        Err(SieveError::NotPrime(p))
    }
}
