use adesieve_core::cuspintegral::{
    builtin_records, d_even_record, d_odd_record, e6_record, record_by_name, verify_case,
};
use adesieve_core::Q;

#[test]
fn shipped_cases_pass() {
    for rec in builtin_records() {
        let rep = verify_case(&rec).unwrap();
        assert!(rep.pass, "{}", rep.table());
        assert_eq!(rep.final_bound.x_exponent, Q::from_integer(rep.dim_v as i64));
        assert_eq!(rep.final_bound.m_power, 1);
    }
}

#[test]
fn d_series_formulas_hold_for_larger_n() {
    for n in 2..=6 {
        for rec in [d_odd_record(n), d_even_record(n)] {
            let rep = verify_case(&rec).unwrap();
            assert!(rep.pass, "{}", rep.table());
        }
    }
}

#[test]
fn pre_m_integrand_already_reaches_dim_v() {
    for rec in builtin_records() {
        let rep = verify_case(&rec).unwrap();
        assert_eq!(rep.pre_m_bound.x_exponent, Q::from_integer(rep.dim_v as i64), "{}", rec.case);
    }
}

#[test]
fn corrupted_volume_names_the_field() {
    let mut rec = e6_record();
    rec.volume.exponents[0] = Q::from_integer(-11);
    let rep = verify_case(&rec).unwrap();
    assert!(!rep.pass);
    let bad: Vec<_> = rep.mismatches().iter().map(|c| c.field.clone()).collect();
    assert_eq!(bad, vec!["volume.β1".to_string()]);
}

#[test]
fn published_errata_are_real() {
    // Restoring a published value must break verification at that field.
    let mut e7 = record_by_name("E7").unwrap();
    e7.volume.exponents[4] = Q::from_integer(-15);
    let rep = verify_case(&e7).unwrap();
    let bad: Vec<_> = rep.mismatches().iter().map(|c| c.field.clone()).collect();
    assert_eq!(bad, vec!["volume.β5".to_string()]);

    let mut e8 = record_by_name("E8").unwrap();
    e8.basis.roots[1] = vec![0, 0, 0, 0, 1, 1, 0, 0];
    assert!(verify_case(&e8).is_err());

    let mut d6 = record_by_name("D6").unwrap();
    assert!(!d6.errata.is_empty());
    d6.modular.exponents = d6.modular.exponents.iter().map(|e| -*e).collect();
    let rep = verify_case(&d6).unwrap();
    assert!(rep.mismatches().iter().all(|c| c.field.starts_with("modular.")));
    assert_eq!(rep.mismatches().len(), d6.errata.len());
}
