use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{
    empirical_density, local_density_exact, local_density_monte_carlo, EmpiricalCounts, Executor, FamilySpec,
    GlobalEngine, GlobalOptions, LocalDensity, Method, SieveError, LOCAL_BUDGET,
};
use crate::arith::primes_up_to;
use crate::Q;

pub const SCHEMA_VERSION: u32 = 1;

const MODEL: &str = "height-box points treated as i.i.d. Bernoulli trials with the truncated product as success rate";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    /// Primes up to this bound are enumerated exactly.
    pub exact_limit: u64,
    /// Monte-Carlo samples per prime above `exact_limit`.
    pub samples: u64,
    pub seed: u64,
    pub budget: u64,
    pub tolerance_sigma: f64,
    pub global: GlobalOptions,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            exact_limit: 13,
            samples: 1_000_000,
            seed: 42,
            budget: LOCAL_BUDGET,
            tolerance_sigma: 3.0,
            global: GlobalOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Agree,
    Disagree,
    /// Too few points or primes for the comparison to mean anything.
    Underpowered,
    /// The uncertain bucket exceeds 0.1% of the box.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeDensity {
    pub p: u64,
    pub method: Method,
    /// Reduced fraction `count/total`.
    pub rho: String,
    pub value: f64,
    pub count: u64,
    pub total: u64,
    pub seed: Option<u64>,
    pub std_error: f64,
    /// Running product over primes up to `p`.
    pub partial_product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSummary {
    pub x: String,
    pub count_squarefree: u64,
    pub count_total: u64,
    pub uncertain: u64,
    pub ratio: f64,
    pub engine: GlobalEngine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    /// `(1 - ρ_p)·p²` at the largest exactly enumerated prime `p ≥ 5`.
    pub constant: f64,
    /// `Σ_{p > pMax} 1/p²`.
    pub prime_tail_sum: f64,
    /// Estimated `1 - ∏_{p > pMax} ρ_p`.
    pub relative_defect: f64,
    pub corrected_product: f64,
    pub corrected_z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub schema_version: u32,
    pub family: String,
    pub p_max: u64,
    pub seed: u64,
    pub samples: u64,
    pub exact_limit: u64,
    pub per_prime: Vec<PrimeDensity>,
    pub truncated_product: f64,
    /// Spread of the product due to Monte-Carlo densities only.
    pub product_std_error: f64,
    pub empirical: EmpiricalSummary,
    pub standard_error: f64,
    pub z_score: f64,
    pub tolerance_sigma: f64,
    pub verdict: Verdict,
    pub tail: TailEstimate,
    pub model: String,
}

impl DensityReport {
    /// `p,rho,value,method` lines with a header.
    pub fn csv(&self) -> String {
        let mut out = String::from("p,rho,value,method\n");
        for e in &self.per_prime {
            let m = match e.method {
                Method::Enum => "ENUM",
                Method::MonteCarlo => "MONTECARLO",
            };
            out.push_str(&format!("{},{},{:.12},{}\n", e.p, e.rho, e.value, m));
        }
        out
    }
}

/// Density at one prime following the exact/Monte-Carlo split of `opts`.
pub fn prime_density<E: Executor>(
    fam: &FamilySpec,
    p: u64,
    opts: &CompareOptions,
    exec: &E,
) -> Result<LocalDensity, SieveError> {
    if p <= opts.exact_limit {
        match local_density_exact(fam, p, opts.budget, exec) {
            Err(SieveError::BudgetExceeded { .. }) => {}
            other => return other,
        }
    }
    local_density_monte_carlo(fam, p, opts.samples, opts.seed, exec)
}

/// `Σ_{p > p_max} 1/p²`, summed to 10⁶ with an integral bound for the rest.
pub fn prime_tail_sum(p_max: u64) -> f64 {
    const TOP: u64 = 1_000_000;
    let head: f64 = primes_up_to(TOP).into_iter().filter(|p| *p > p_max).map(|p| 1.0 / (p as f64 * p as f64)).sum();
    head + 1.0 / (TOP as f64 * libm::log(TOP as f64))
}

fn z_score(ratio: f64, product: f64, total: u64) -> (f64, f64) {
    let se = libm::sqrt(product * (1.0 - product) / total.max(1) as f64);
    let diff = ratio - product;
    let z = if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        f64::MAX.copysign(diff)
    };
    (se, z)
}

/// Builds the report from densities already computed for every prime up to
/// `p_max`, in increasing order.
pub fn assemble(
    fam: &FamilySpec,
    p_max: u64,
    locals: &[LocalDensity],
    empirical: &EmpiricalCounts,
    opts: &CompareOptions,
) -> DensityReport {
    let mut product = 1.0;
    let mut rel_var = 0.0;
    let mut per_prime = Vec::with_capacity(locals.len());
    for l in locals {
        let (n, d) = l.rho();
        let v = l.value();
        product *= v;
        if v > 0.0 {
            rel_var += (l.std_error() / v) * (l.std_error() / v);
        }
        per_prime.push(PrimeDensity {
            p: l.p,
            method: l.method,
            rho: format!("{n}/{d}"),
            value: v,
            count: l.count,
            total: l.total,
            seed: l.seed,
            std_error: l.std_error(),
            partial_product: product,
        });
    }
    let ratio = empirical.ratio();
    let (se, z) = z_score(ratio, product, empirical.total);
    let defect = |l: &LocalDensity| (1.0 - l.value()) * (l.p as f64) * (l.p as f64);
    let anchor = locals
        .iter()
        .rev()
        .find(|l| l.p >= 5 && l.method == Method::Enum)
        .or_else(|| locals.last());
    let constant = anchor.map_or(0.0, defect);
    let tail_sum = prime_tail_sum(p_max);
    let relative_defect = 1.0 - libm::exp(-constant * tail_sum);
    let corrected = product * (1.0 - relative_defect);
    let (_, corrected_z) = z_score(ratio, corrected, empirical.total);
    let verdict = if empirical.inconclusive() {
        Verdict::Inconclusive
    } else if empirical.total < 10_000 || p_max < 5 {
        Verdict::Underpowered
    } else if z.abs() <= opts.tolerance_sigma {
        Verdict::Agree
    } else {
        Verdict::Disagree
    };
    DensityReport {
        schema_version: SCHEMA_VERSION,
        family: fam.name.clone(),
        p_max,
        seed: opts.seed,
        samples: opts.samples,
        exact_limit: opts.exact_limit,
        per_prime,
        truncated_product: product,
        product_std_error: product * libm::sqrt(rel_var),
        empirical: EmpiricalSummary {
            x: empirical.x.to_string(),
            count_squarefree: empirical.squarefree,
            count_total: empirical.total,
            uncertain: empirical.uncertain,
            ratio,
            engine: empirical.engine,
        },
        standard_error: se,
        z_score: z,
        tolerance_sigma: opts.tolerance_sigma,
        verdict,
        tail: TailEstimate {
            constant,
            prime_tail_sum: tail_sum,
            relative_defect,
            corrected_product: corrected,
            corrected_z,
        },
        model: MODEL.to_string(),
    }
}

/// Local densities for `p ≤ p_max`, the empirical ratio at height `x`, and
/// their comparison.
pub fn compare<E: Executor>(
    fam: &FamilySpec,
    p_max: u64,
    x: Q,
    opts: &CompareOptions,
    exec: &E,
) -> Result<DensityReport, SieveError> {
    let locals = primes_up_to(p_max)
        .into_iter()
        .map(|p| prime_density(fam, p, opts, exec))
        .collect::<Result<Vec<_>, _>>()?;
    let empirical = empirical_density(fam, x, &opts.global, exec)?;
    Ok(assemble(fam, p_max, &locals, &empirical, opts))
}
