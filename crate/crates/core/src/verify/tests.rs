use super::*;
use crate::field::make_field;

#[test]
fn quick_suites_pass() {
    let f = Field::prime(101).unwrap();
    for s in Suite::ALL {
        let field = if s == Suite::CharP { make_field("Fq:3^2").unwrap() } else { f.clone() };
        let out = run_suite(s, &field, 4, 9);
        assert!(out.all_passed(), "{out}");
    }
}

#[test]
fn outcome_is_deterministic() {
    let f = Field::rationals();
    let a = run_suite(Suite::Roots, &f, 6, 3);
    let b = run_suite(Suite::Roots, &f, 6, 3);
    assert_eq!(a.to_string(), b.to_string());
    assert!(a.all_passed(), "{a}");
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::ALL {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
    }
    assert_eq!(Suite::for_module("poly").unwrap(), vec![Suite::Resultant, Suite::Discriminant]);
    assert!(Suite::for_module("nope").is_err());
}

#[test]
fn fit_recovers_power() {
    let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0].iter().map(|&x: &f64| (x, 3.0 * x.powi(2))).collect();
    assert!((fit_exponent(&pts) - 2.0).abs() < 1e-9);
}
