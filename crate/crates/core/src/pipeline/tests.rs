use std::collections::BTreeMap;

use super::*;
use crate::circuit::{expand, Circuit, ExpandMode};
use crate::error::Error;
use crate::field::Field;
use crate::poly::{Poly, Var};

fn p(f: &Field, s: &str) -> Poly {
    Poly::parse(f, s).unwrap()
}

fn f101() -> Field {
    Field::prime(101).unwrap()
}

fn sorted(mut v: Vec<Poly>) -> Vec<Poly> {
    v.sort_by_key(|q| q.to_string());
    v
}

#[test]
fn divisibility_examples() {
    let q = Field::rationals();
    assert!(divisibility_test(&p(&q, "y - 1"), &p(&q, "y^2 - 1"), Var::Y));
    assert!(!divisibility_test(&p(&q, "y - 1"), &p(&q, "y^2 + 1"), Var::Y));
    assert!(divisibility_test(&p(&q, "y - t"), &p(&q, "y^2 - t^2"), Var::Y));
}

#[test]
fn generator_examples() {
    let f = f101();
    let consts: BTreeMap<Var, Poly> = [(Var::x(1), Poly::from_i64(&f, 7))].into_iter().collect();
    let g = GeneratorSpec::user(consts).unwrap();
    assert_eq!(variable_reduce(&p(&f, "x1*y + t"), &g).unwrap(), p(&f, "7*y + t"));
    let m: BTreeMap<Var, Poly> = [(Var::x(1), p(&f, "w1")), (Var::x(2), p(&f, "w1^2"))].into_iter().collect();
    let g = GeneratorSpec::user(m).unwrap();
    assert_eq!(variable_reduce(&p(&f, "x1 + x2"), &g).unwrap(), p(&f, "w1 + w1^2"));
    let bad: BTreeMap<Var, Poly> = [(Var::x(1), p(&f, "t"))].into_iter().collect();
    assert_eq!(GeneratorSpec::user(bad).unwrap_err(), Error::GeneratorTouchesTY);
    let a = GeneratorSpec::from_descriptor("affine:seed=7:w=2", &f, &[Var::x(1), Var::x(2)]).unwrap();
    assert_eq!(a.to_string(), "affine:seed=7:w=2");
    assert_eq!(a, GeneratorSpec::affine(&f, &[Var::x(1), Var::x(2)], 2, 7));
    assert_eq!(a.degree(), 1);
}

#[test]
fn bivariate_linear_factors() {
    let f = f101();
    // both roots vanish at t = 0, so the boundary is y^2
    let g = p(&f, "(y - t)*(y - t^2)");
    assert_eq!(bivariate_base_factorize(&g, 1).unwrap_err(), Error::NotSquarefreeAtZero);
    let g = p(&f, "(y - 1 - t)*(y - t^2)");
    let got = sorted(bivariate_base_factorize(&g, 1).unwrap());
    assert_eq!(got, sorted(vec![p(&f, "y - 1 - t"), p(&f, "y - t^2")]));
}

#[test]
fn bivariate_guard() {
    let f = f101();
    assert_eq!(bivariate_base_factorize(&p(&f, "y^2 - t"), 1).unwrap_err(), Error::NotSquarefreeAtZero);
}

#[test]
fn bivariate_recombines_quadratic() {
    let f = f101();
    let g = p(&f, "(y^2 - t*y - 1)*(y - 2)");
    let got = sorted(bivariate_base_factorize(&g, 3).unwrap());
    assert_eq!(got, sorted(vec![p(&f, "y^2 - t*y - 1"), p(&f, "y - 2")]));
    // roots of the boundary outside the base field
    let g = p(&f, "(y^2 - t*y - 2)*(y - 1 - t)");
    let got = sorted(bivariate_base_factorize(&g, 3).unwrap());
    assert_eq!(got, sorted(vec![p(&f, "y^2 - t*y - 2"), p(&f, "y - 1 - t")]));
}

#[test]
fn bivariate_carries_coefficient_vars() {
    let f = f101();
    let g = p(&f, "(y^2 - t*x1*y - t - 2)*(y - 1 - t*x2)");
    let got = sorted(bivariate_base_factorize(&g, 5).unwrap());
    assert_eq!(got, sorted(vec![p(&f, "y^2 - t*x1*y - t - 2"), p(&f, "y - 1 - t*x2")]));
}

#[test]
fn preservation_examples() {
    let f = f101();
    let fx = p(&f, "(y^2 - t*x1*y - t - 2)*(y - 1 - t)");
    let gen = GeneratorSpec::affine(&f, &[Var::x(1)], 1, 11);
    let r = irreducibility_preservation_check(&fx, &gen, 2).unwrap();
    assert_eq!((r.factors_before, r.factors_after), (2, 2));
    assert!(r.preserved);

    let collapse = p(&f, "y^2 - (1 + t)^2 - t^2*x1");
    let zero = GeneratorSpec::from_descriptor("zero", &f, &[Var::x(1)]).unwrap();
    let r = irreducibility_preservation_check(&collapse, &zero, 2).unwrap();
    assert_eq!((r.factors_before, r.factors_after), (1, 2));
    assert!(!r.preserved);

    let biv = p(&f, "(y - 1 - t)*(y - 2 + t^2)");
    let r = irreducibility_preservation_check(&biv, &zero, 2).unwrap();
    assert!(r.preserved);
}

#[test]
fn preservation_hypotheses() {
    let f = f101();
    let gen = GeneratorSpec::passthrough(&f, &[Var::x(1)]);
    let cases = ["2*y^2 + t", "y - x1", "y^2 - t"];
    for c in cases {
        let e = irreducibility_preservation_check(&p(&f, c), &gen, 1).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolated(_)), "{c}: {e:?}");
    }
}

fn factor_set(r: &FactorizationResult) -> Vec<(String, u32)> {
    let mut v: Vec<(String, u32)> = r.factors.iter().map(|g| (g.poly.normalize().to_string(), g.multiplicity)).collect();
    v.sort();
    v
}

fn expect(f: &Field, items: &[(&str, u32)]) -> Vec<(String, u32)> {
    let mut v: Vec<(String, u32)> = items.iter().map(|(s, m)| (p(f, s).normalize().to_string(), *m)).collect();
    v.sort();
    v
}

#[test]
fn squarefree_pipeline_examples() {
    let q = Field::rationals();
    let (parts, _) = squarefree_part_pipeline(&Circuit::from_poly(&p(&q, "(x1 + x2)^2*x1")), 16).unwrap();
    let got: Vec<(u32, Poly)> = parts.iter().map(|s| (s.multiplicity, s.poly.normalize())).collect();
    assert_eq!(got, vec![(1, p(&q, "x1")), (2, p(&q, "x1 + x2"))]);

    let sq = p(&q, "x1*x2 + 3");
    let (parts, _) = squarefree_part_pipeline(&Circuit::from_poly(&sq), 16).unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!((parts[0].multiplicity, parts[0].poly.normalize()), (1, sq.normalize()));

    let f7 = Field::prime(7).unwrap();
    let c = Circuit::from_poly(&p(&f7, "(x1^2 + 1)^3"));
    let (parts, unit) = squarefree_part_pipeline(&c, 16).unwrap();
    assert_eq!(parts.len(), 1);
    assert_eq!((parts[0].multiplicity, parts[0].poly.normalize()), (3, p(&f7, "x1^2 + 1")));
    let back = Poly::constant(&f7, unit).mul(&parts[0].poly.pow(3));
    assert_eq!(back, p(&f7, "(x1^2 + 1)^3"));

    let big = Circuit::from_poly(&p(&q, "x1^20"));
    assert!(matches!(squarefree_part_pipeline(&big, 16), Err(Error::DegreeCapExceeded { .. })));
}

#[test]
fn factorize_examples() {
    let f = f101();
    let cfg = PipelineConfig::default();
    let c = Circuit::from_poly(&p(&f, "(x1 + x2 + 1)^2*(x1*x2 + 2)"));
    let r = factorize_full(&c, &cfg).unwrap();
    assert!(r.certificate.passed());
    assert_eq!(factor_set(&r), expect(&f, &[("x1 + x2 + 1", 2), ("x1*x2 + 2", 1)]));
    assert_eq!(r.reassemble(&f), expand(&c, 16, ExpandMode::Exact).unwrap());

    let cubic = p(&f, "x1^3 + x2^3 + x1*x2 + 1");
    assert_eq!(oracle_irreducible(&cubic, 4).unwrap(), Some(true));
    let r = factorize_full(&Circuit::from_poly(&cubic), &cfg).unwrap();
    assert_eq!(factor_set(&r), expect(&f, &[("x1^3 + x2^3 + x1*x2 + 1", 1)]));

    let r = factorize_full(&Circuit::from_poly(&p(&f, "x1^3")), &cfg).unwrap();
    assert_eq!(factor_set(&r), expect(&f, &[("x1", 3)]));
}

#[test]
fn factorize_errors_and_q_mode() {
    let q = Field::rationals();
    let a = p(&q, "x1 + 2*x2");
    let b = p(&q, "x1*x2 - 1");
    let c = Circuit::from_poly(&a.pow(2).mul(&b));
    assert_eq!(factorize_full(&c, &PipelineConfig::default()).unwrap_err(), Error::InfiniteField);
    let cfg = PipelineConfig {
        planted: Some(vec![a.clone(), b.clone()]),
        ..PipelineConfig::default()
    };
    let r = factorize_full(&c, &cfg).unwrap();
    assert_eq!(r.certificate.irreducible, None);
    assert_eq!(factor_set(&r), expect(&q, &[("x1 + 2*x2", 2), ("x1*x2 - 1", 1)]));

    let f5 = Field::prime(5).unwrap();
    let c = Circuit::from_poly(&p(&f5, "x1^5 + x2"));
    assert!(matches!(factorize_full(&c, &PipelineConfig::default()), Err(Error::CharacteristicTooSmall { .. })));
}

#[test]
fn factorize_idempotent_on_emitted_factors() {
    let f = f101();
    let cfg = PipelineConfig::default();
    let c = Circuit::from_poly(&p(&f, "(x1^2 + x2 + 3)*(x2 - x1 + 5)*(x1 + 1)"));
    let r = factorize_full(&c, &cfg).unwrap();
    assert_eq!(r.factors.len(), 3);
    for g in &r.factors {
        let again = factorize_full(&Circuit::from_poly(&g.poly), &cfg).unwrap();
        assert_eq!(factor_set(&again), vec![(g.poly.normalize().to_string(), 1)]);
    }
}

#[test]
fn factorize_permutation_invariant() {
    let f = f101();
    let cfg = PipelineConfig::default();
    let src = p(&f, "(x1^2 + 2*x2)*(x1 + x2*x3 + 1)*(x3 + 4)^2");
    let swap = |v: Var| match v.index() {
        Some(1) if v.is_x() => Var::x(3),
        Some(3) if v.is_x() => Var::x(1),
        _ => v,
    };
    let r1 = factorize_full(&Circuit::from_poly(&src), &cfg).unwrap();
    let r2 = factorize_full(&Circuit::from_poly(&src.rename(swap)), &cfg).unwrap();
    let mut back: Vec<(String, u32)> =
        r2.factors.iter().map(|g| (g.poly.rename(swap).normalize().to_string(), g.multiplicity)).collect();
    back.sort();
    assert_eq!(factor_set(&r1), back);
}
