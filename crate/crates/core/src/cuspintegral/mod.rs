//! Exponent-level evaluation of multiplicative box integrals and the per-case
//! cusp estimates built from them.

mod cases;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rootsystem::{build_root_system, DynkinType};
use crate::vinberg::{self, CharacterBasis, ExponentVector, GradedData, VinbergError};
use crate::Q;

pub use cases::{builtin_records, d_even_record, d_odd_record, e6_record, e7_record, e8_record, record_by_name};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CuspError {
    #[error("variable {0} has no domain bound")]
    MissingBound(String),
    #[error("negative lower-bound exponent for {0}")]
    NegativeBound(String),
    #[error(transparent)]
    Vinberg(#[from] VinbergError),
    #[error("unknown case {0}")]
    UnknownCase(String),
}

/// The box `X^{-a_i} ≪ β_i ≪ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub names: Vec<String>,
    pub lower: Vec<Q>,
}

impl BoxDomain {
    pub fn new(names: Vec<String>, lower: Vec<Q>) -> Result<Self, CuspError> {
        assert_eq!(names.len(), lower.len());
        if let Some(i) = lower.iter().position(|a| a.is_negative()) {
            return Err(CuspError::NegativeBound(names[i].clone()));
        }
        Ok(BoxDomain { names, lower })
    }

    pub fn bound(&self, name: &str) -> Option<Q> {
        self.names.iter().position(|n| n == name).map(|i| self.lower[i])
    }
}

/// `(1/M)^{m_power} · X^{x_exponent} · (log X)^{log_power}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticBound {
    pub x_exponent: Q,
    pub log_power: u32,
    pub m_power: i32,
    pub epsilon: bool,
}

impl AsymptoticBound {
    /// Equal up to `X^ε`.
    pub fn matches(&self, other: &AsymptoticBound) -> bool {
        self.x_exponent == other.x_exponent && self.m_power == other.m_power
    }

    /// The report form with logs absorbed into `X^ε`.
    pub fn collapsed(&self) -> String {
        let mut s = String::new();
        match self.m_power {
            0 => {}
            1 => s.push_str("(1/M)·"),
            m => s.push_str(&format!("(1/M)^{m}·")),
        }
        s.push_str(&format!("X^{}", self.x_exponent));
        if self.epsilon {
            s.push_str("·X^ε");
        }
        s
    }
}

impl fmt::Display for AsymptoticBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.m_power {
            0 => {}
            1 => f.write_str("(1/M)·")?,
            m => write!(f, "(1/M)^{m}·")?,
        }
        write!(f, "X^{}", self.x_exponent)?;
        match self.log_power {
            0 => Ok(()),
            1 => f.write_str("·log X"),
            l => write!(f, "·log^{l} X"),
        }
    }
}

/// A monomial integrand together with its power of `1/M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Integrand {
    pub monomial: ExponentVector,
    pub m_power: i32,
}

/// Order of `∫_dom X^x ∏ β_i^{e_i} d^×β` as `X → ∞`.
pub fn integrate_monomial(e: &ExponentVector, dom: &BoxDomain) -> Result<AsymptoticBound, CuspError> {
    let mut x = e.x_prefactor;
    let mut logs = 0;
    for (name, ei) in e.basis_names.iter().zip(&e.exponents) {
        let a = dom.bound(name).ok_or_else(|| CuspError::MissingBound(name.clone()))?;
        if ei.is_negative() {
            x -= a * *ei;
        } else if ei.is_zero() && a.is_positive() {
            logs += 1;
        }
    }
    Ok(AsymptoticBound { x_exponent: x, log_power: logs, m_power: 0, epsilon: logs > 0 })
}

pub fn integrate(i: &Integrand, dom: &BoxDomain) -> Result<AsymptoticBound, CuspError> {
    let mut b = integrate_monomial(&i.monomial, dom)?;
    b.m_power = i.m_power;
    Ok(b)
}

/// On `Ω_M` the factor `X^k ∏ α_i(t) / M` is `≫ 1`; multiply it in.
pub fn apply_m_step(integrand: &ExponentVector, q: &ExponentVector) -> Integrand {
    Integrand { monomial: integrand + q, m_power: 1 }
}

/// A transcription disagreement between recomputed and shipped data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    /// Field path such as `volume.β5` or `basis.β2`.
    pub field: String,
    pub published: String,
    pub corrected: String,
    pub note: String,
}

/// Per-case data: the basis change, the expected vectors and the final bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case: String,
    pub dynkin: DynkinType,
    pub basis: CharacterBasis,
    pub volume: ExponentVector,
    /// `δ_G⁻¹`.
    pub modular: ExponentVector,
    pub q_condition: ExponentVector,
    pub domain: BoxDomain,
    /// Integrand before the M-step, `volume · δ⁻¹`.
    pub pre_m: ExponentVector,
    /// Integrand after the M-step.
    pub post_m: ExponentVector,
    pub dim_v: usize,
    pub expected_bound: AsymptoticBound,
    pub errata: Vec<Erratum>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldCheck {
    pub field: String,
    pub computed: Q,
    pub transcribed: Q,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: String,
    pub checks: Vec<FieldCheck>,
    pub pre_m_bound: AsymptoticBound,
    pub final_bound: AsymptoticBound,
    pub dim_v: usize,
    pub errata: Vec<Erratum>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn mismatches(&self) -> Vec<&FieldCheck> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    /// One line per field, then the verdict.
    pub fn table(&self) -> String {
        let mut s = format!("case {}\n", self.case);
        for c in &self.checks {
            let mark = if c.ok { "ok" } else { "MISMATCH" };
            s.push_str(&format!(
                "  {:<16} computed {:>6}  transcribed {:>6}  {}\n",
                c.field, c.computed, c.transcribed, mark
            ));
        }
        for e in &self.errata {
            s.push_str(&format!(
                "  erratum {}: published {} corrected {} ({})\n",
                e.field, e.published, e.corrected, e.note
            ));
        }
        s.push_str(&format!("pre-M bound {}\n", self.pre_m_bound));
        s.push_str(&format!("final bound {} (exactly {})\n", self.final_bound.collapsed(), self.final_bound));
        s.push_str(if self.pass { "PASS\n" } else { "FAIL\n" });
        s
    }
}

fn compare_vectors(out: &mut Vec<FieldCheck>, label: &str, computed: &ExponentVector, transcribed: &ExponentVector) {
    if computed.basis_names != transcribed.basis_names {
        out.push(FieldCheck { field: format!("{label}.basis"), computed: Q::zero(), transcribed: Q::one(), ok: false });
        return;
    }
    out.push(FieldCheck {
        field: format!("{label}.X"),
        computed: computed.x_prefactor,
        transcribed: transcribed.x_prefactor,
        ok: computed.x_prefactor == transcribed.x_prefactor,
    });
    for ((n, c), t) in computed.basis_names.iter().zip(&computed.exponents).zip(&transcribed.exponents) {
        out.push(FieldCheck { field: format!("{label}.{n}"), computed: *c, transcribed: *t, ok: c == t });
    }
}

/// Integration domain read off from the height-one roots: `β_j ≫ X^{-a_j}`
/// where `a_j` is the coefficient sum of `β_j` in the `S_V` basis.
pub fn derive_domain(gd: &GradedData, basis: &CharacterBasis) -> Result<BoxDomain, CuspError> {
    let coords = vinberg::basis_in_height_one(gd, basis)?;
    let lower = coords.iter().map(|c| c.iter().copied().sum()).collect();
    BoxDomain::new(basis.names.clone(), lower)
}

/// Recomputes every vector of the record from the grading and runs the
/// integral pipeline.
pub fn verify_case(rec: &CaseRecord) -> Result<VerificationReport, CuspError> {
    let gd = vinberg::grade(&build_root_system(rec.dynkin));
    let volume = vinberg::volume_exponents(&gd, &rec.basis)?;
    let modular = vinberg::modular_function(&gd, &rec.basis)?;
    let q = vinberg::q_condition(&gd, &rec.basis)?;
    let domain = derive_domain(&gd, &rec.basis)?;

    let mut checks = Vec::new();
    compare_vectors(&mut checks, "volume", &volume, &rec.volume);
    compare_vectors(&mut checks, "modular", &modular, &rec.modular);
    compare_vectors(&mut checks, "q", &q, &rec.q_condition);
    for (i, n) in domain.names.iter().enumerate() {
        let t = rec.domain.bound(n).unwrap_or(-Q::one());
        checks.push(FieldCheck { field: format!("domain.{n}"), computed: domain.lower[i], transcribed: t, ok: t == domain.lower[i] });
    }

    let pre = &volume + &modular;
    compare_vectors(&mut checks, "pre_m", &pre, &rec.pre_m);
    let pre_m_bound = integrate_monomial(&pre, &domain)?;
    let post = apply_m_step(&pre, &q);
    compare_vectors(&mut checks, "post_m", &post.monomial, &rec.post_m);
    let final_bound = integrate(&post, &domain)?;

    let dim_v = Q::from_integer(gd.dim_v as i64);
    checks.push(FieldCheck {
        field: "dim_v".to_string(),
        computed: dim_v,
        transcribed: Q::from_integer(rec.dim_v as i64),
        ok: gd.dim_v == rec.dim_v,
    });
    checks.push(FieldCheck {
        field: "final.X".to_string(),
        computed: final_bound.x_exponent,
        transcribed: rec.expected_bound.x_exponent,
        ok: final_bound.matches(&rec.expected_bound) && final_bound.x_exponent == dim_v,
    });
    checks.push(FieldCheck {
        field: "final.M".to_string(),
        computed: Q::from_integer(final_bound.m_power as i64),
        transcribed: Q::from_integer(rec.expected_bound.m_power as i64),
        ok: final_bound.m_power == 1 && rec.expected_bound.m_power == 1,
    });
    let pass = checks.iter().all(|c| c.ok);
    Ok(VerificationReport {
        case: rec.case.clone(),
        checks,
        pre_m_bound,
        final_bound,
        dim_v: gd.dim_v,
        errata: rec.errata.clone(),
        pass,
    })
}
