//! Shipped case records. The exceptional records transcribe the published
//! vectors; the D-series records are generated from closed forms in `n`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{AsymptoticBound, BoxDomain, CaseRecord, Erratum};
use crate::rootsystem::DynkinType;
use crate::vinberg::{CharacterBasis, ExponentVector};
use crate::Q;

fn z(n: i64) -> Q {
    Q::from_integer(n)
}

fn half(n: i64) -> Q {
    Q::new(n, 2)
}

/// Root with the given 1-based simple-root support.
fn root(rank: usize, support: &[usize]) -> Vec<i32> {
    let mut v = vec![0; rank];
    for &i in support {
        v[i - 1] += 1;
    }
    v
}

fn betas(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("β{i}")).collect()
}

fn ev(names: &[String], x: i64, e: &[Q]) -> ExponentVector {
    ExponentVector::new(names.to_vec(), e.to_vec(), z(x))
}

fn ints(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| z(x)).collect()
}

fn bound(dim_v: usize) -> AsymptoticBound {
    AsymptoticBound { x_exponent: z(dim_v as i64), log_power: 0, m_power: 1, epsilon: true }
}

struct Table<'a> {
    case: &'a str,
    dynkin: DynkinType,
    basis: &'a [&'a [usize]],
    volume: (i64, Vec<Q>),
    modular: Vec<Q>,
    q: (i64, Vec<Q>),
    domain: Vec<Q>,
    pre_m: (i64, Vec<Q>),
    post_m: (i64, Vec<Q>),
    dim_v: usize,
    errata: Vec<Erratum>,
}

fn from_table(t: Table<'_>) -> CaseRecord {
    let r = t.dynkin.rank();
    let names = betas(t.basis.len());
    let roots = t.basis.iter().map(|s| root(r, s)).collect();
    CaseRecord {
        case: t.case.to_string(),
        dynkin: t.dynkin,
        basis: CharacterBasis::new(names.clone(), roots),
        volume: ev(&names, t.volume.0, &t.volume.1),
        modular: ev(&names, 0, &t.modular),
        q_condition: ev(&names, t.q.0, &t.q.1),
        domain: BoxDomain { names: names.clone(), lower: t.domain },
        pre_m: ev(&names, t.pre_m.0, &t.pre_m.1),
        post_m: ev(&names, t.post_m.0, &t.post_m.1),
        dim_v: t.dim_v,
        expected_bound: bound(t.dim_v),
        errata: t.errata,
    }
}

pub fn e6_record() -> CaseRecord {
    from_table(Table {
        case: "E6",
        dynkin: DynkinType::e(6).unwrap(),
        basis: &[&[3, 4], &[1], &[3], &[2, 4]],
        volume: (26, ints(&[-12, -17, -21, -11])),
        modular: ints(&[8, 14, 18, 10]),
        q: (4, ints(&[0, 1, 1, 1])),
        domain: ints(&[2, 1, 1, 2]),
        pre_m: (26, ints(&[-4, -3, -3, -1])),
        post_m: (30, ints(&[-4, -2, -2, 0])),
        dim_v: 42,
        errata: Vec::new(),
    })
}

pub fn e7_record() -> CaseRecord {
    from_table(Table {
        case: "E7",
        dynkin: DynkinType::e(7).unwrap(),
        basis: &[&[3, 4], &[5, 6], &[2, 4], &[1, 3], &[4, 5], &[6, 7], &[2, 3, 4, 5]],
        volume: (42, ints(&[-8, -13, -16, -17, -17, -14, -10])),
        modular: ints(&[7, 12, 15, 16, 15, 12, 7]),
        q: (7, vec![half(-1), z(0), half(1), z(1), half(1), z(1), half(1)]),
        domain: ints(&[2, 2, 2, 2, 2, 2, 4]),
        pre_m: (42, ints(&[-1, -1, -1, -1, -2, -2, -3])),
        post_m: (49, vec![half(-3), z(-1), half(-1), z(0), half(-3), z(-1), half(-5)]),
        dim_v: 70,
        errata: vec![Erratum {
            field: "volume.β5".to_string(),
            published: "-15".to_string(),
            corrected: "-17".to_string(),
            note: "the published pre-M exponent -2 of β5 and the final X^70 both require -17".to_string(),
        }],
    })
}

pub fn e8_record() -> CaseRecord {
    from_table(Table {
        case: "E8",
        dynkin: DynkinType::e(8).unwrap(),
        basis: &[&[2, 3, 4, 5], &[6, 7], &[4, 5], &[1, 3], &[2, 4], &[5, 6], &[7, 8], &[3, 4]],
        volume: (72, ints(&[-18, -30, -40, -47, -53, -57, -29, -30])),
        modular: ints(&[14, 26, 36, 44, 50, 54, 28, 28]),
        q: (8, ints(&[0, 0, 0, 1, 1, 1, 1, 0])),
        domain: ints(&[4, 2, 2, 2, 2, 2, 2, 2]),
        pre_m: (72, ints(&[-4, -4, -4, -3, -3, -3, -1, -2])),
        post_m: (80, ints(&[-4, -4, -4, -2, -2, -2, 0, -2])),
        dim_v: 128,
        errata: vec![Erratum {
            field: "basis.β2".to_string(),
            published: "α6+α5".to_string(),
            corrected: "α6+α7".to_string(),
            note: "the published value repeats β6 and leaves the basis singular".to_string(),
        }],
    })
}

fn alpha_beta_names(n: usize) -> Vec<String> {
    let mut v: Vec<String> = (1..=n).map(|i| format!("α{i}")).collect();
    v.extend((1..=n).map(|i| format!("β{i}")));
    v
}

/// `D_{2n+1}`, basis `α_1..α_n, β_1..β_n`.
pub fn d_odd_record(n: usize) -> CaseRecord {
    assert!(n >= 2);
    let rank = 2 * n + 1;
    let names = alpha_beta_names(n);
    let mut roots = Vec::new();
    for i in 1..=n {
        roots.push(root(rank, &[2 * i - 1, 2 * i]));
    }
    for i in 1..n {
        roots.push(root(rank, &[2 * i, 2 * i + 1]));
    }
    roots.push(root(rank, &[2 * n]));

    let ni = n as i64;
    let idx = 1..=ni;
    let mut vol: Vec<Q> = idx.clone().map(|i| z(-2 * i * ni + (i - 1) * (i - 1))).collect();
    vol.extend(idx.clone().map(|i| z(-2 * i * ni + i * i)));
    let half_mod: Vec<Q> = idx.clone().map(|i| z(2 * i * ni - i * i)).collect();
    let modular = [half_mod.clone(), half_mod].concat();
    let mut q = vec![z(1); n];
    q.extend(vec![z(0); n]);
    let mut domain = vec![z(2); 2 * n];
    domain[2 * n - 1] = z(1);
    let mut pre: Vec<Q> = idx.clone().map(|i| z(-2 * i + 1)).collect();
    pre.extend(vec![z(0); n]);
    let mut post: Vec<Q> = idx.map(|i| z(-2 * i + 2)).collect();
    post.extend(vec![z(0); n]);
    let dim_v = 4 * n * n + 4 * n + 1;
    CaseRecord {
        case: format!("D{rank}"),
        dynkin: DynkinType::d(rank).unwrap(),
        basis: CharacterBasis::new(names.clone(), roots),
        volume: ev(&names, 2 * ni * ni + 4 * ni + 1, &vol),
        modular: ev(&names, 0, &modular),
        q_condition: ev(&names, 2 * ni, &q),
        domain: BoxDomain { names: names.clone(), lower: domain },
        pre_m: ev(&names, 2 * ni * ni + 4 * ni + 1, &pre),
        post_m: ev(&names, 2 * ni * ni + 6 * ni + 1, &post),
        dim_v,
        expected_bound: bound(dim_v),
        errata: Vec::new(),
    }
}

/// `D_{2n}`, basis `α_1..α_n, β_1..β_n` with `α_n = t_{n-1}t_n`, `β_n = s_{n-1}s_n`.
pub fn d_even_record(n: usize) -> CaseRecord {
    assert!(n >= 2);
    let rank = 2 * n;
    let names = alpha_beta_names(n);
    let mut roots = Vec::new();
    for i in 1..n {
        roots.push(root(rank, &[2 * i - 1, 2 * i]));
    }
    roots.push(root(rank, &[2 * n - 3, 2 * n - 2, 2 * n - 1, 2 * n]));
    for i in 1..n {
        roots.push(root(rank, &[2 * i, 2 * i + 1]));
    }
    roots.push(root(rank, &[2 * n - 2, 2 * n]));

    let ni = n as i64;
    let low = 1..=ni - 2;
    let fork = ni * (ni - 1) / 2;

    let mut vol: Vec<Q> = low.clone().map(|i| z(-2 * i * ni + i * i - i + 1)).collect();
    vol.push(half(-ni * ni - ni + 4));
    vol.push(half(-ni * ni - ni + 2));
    vol.extend(low.clone().map(|i| z(-2 * i * ni + i * i + i)));
    vol.push(half(-ni * ni + ni));
    vol.push(half(-ni * ni + ni));

    let mut modular: Vec<Q> = low.clone().map(|i| z(2 * i * ni - i * i - i)).collect();
    modular.extend([z(fork), z(fork)]);
    modular.extend(low.clone().map(|i| z(2 * i * ni - i * i - i)));
    modular.extend([z(fork), z(fork)]);

    let mut errata = Vec::new();
    for (name, m) in names.iter().zip(&modular) {
        if !m.is_zero() {
            errata.push(Erratum {
                field: format!("modular.{name}"),
                published: format!("{}", -*m),
                corrected: format!("{m}"),
                note: "the published δ⁻¹ carries the exponents of δ; the integrand uses δ⁻¹".to_string(),
            });
        }
    }

    let mut q = vec![z(1); n - 2];
    q.extend([z(0), z(1)]);
    q.extend(vec![z(0); n]);
    let mut domain = vec![z(2); 2 * n];
    domain[n - 1] = z(4);

    let mut pre: Vec<Q> = low.clone().map(|i| z(-2 * i + 1)).collect();
    pre.extend([z(2 - ni), z(1 - ni)]);
    pre.extend(vec![z(0); n]);
    let mut post: Vec<Q> = low.map(|i| z(-2 * i + 2)).collect();
    post.extend([z(2 - ni), z(2 - ni)]);
    post.extend(vec![z(0); n]);

    let dim_v = 4 * n * n;
    let x_vol = 2 * ni * (ni + 1);
    CaseRecord {
        case: format!("D{rank}"),
        dynkin: DynkinType::d(rank).unwrap(),
        basis: CharacterBasis::new(names.clone(), roots),
        volume: ev(&names, x_vol, &vol),
        modular: ev(&names, 0, &modular),
        q_condition: ev(&names, 2 * ni, &q),
        domain: BoxDomain { names: names.clone(), lower: domain },
        pre_m: ev(&names, x_vol, &pre),
        post_m: ev(&names, x_vol + 2 * ni, &post),
        dim_v,
        expected_bound: bound(dim_v),
        errata,
    }
}

/// The seven shipped cases: D5, D7, D4, D6, E6, E7, E8.
pub fn builtin_records() -> Vec<CaseRecord> {
    vec![d_odd_record(2), d_odd_record(3), d_even_record(2), d_even_record(3), e6_record(), e7_record(), e8_record()]
}

/// Record by name, generating any `D_m` with `m ≥ 4`.
pub fn record_by_name(name: &str) -> Option<CaseRecord> {
    match name.trim().to_ascii_uppercase().as_str() {
        "E6" => Some(e6_record()),
        "E7" => Some(e7_record()),
        "E8" => Some(e8_record()),
        s => {
            let m: usize = s.strip_prefix('D')?.parse().ok()?;
            match m {
                0..=3 => None,
                m if m % 2 == 0 => Some(d_even_record(m / 2)),
                m => Some(d_odd_record((m - 1) / 2)),
            }
        }
    }
}
