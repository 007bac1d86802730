use std::collections::HashMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::field::{make_field, Field};
use crate::poly::Poly;

fn fp(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn poly(f: &Field, s: &str) -> Poly {
    Poly::parse(f, s).unwrap()
}

fn x(i: u32) -> Var {
    Var::x(i)
}

fn full(c: &Circuit) -> Poly {
    expand(c, 64, ExpandMode::Exact).unwrap()
}

fn point(f: &Field, pairs: &[(Var, i64)]) -> HashMap<Var, Elem> {
    pairs.iter().map(|(v, k)| (*v, f.from_i64(*k))).collect()
}

/// Random circuit with `n` internal gates over vars x1..x3, y.
fn random_circuit(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut b = Builder::new(f);
    let mut ids = vec![b.var(x(1)), b.var(x(2)), b.var(x(3)), b.var(Var::Y)];
    ids.push(b.constant(f.from_i64(rng.gen_range(1..7))));
    for _ in 0..n {
        let k = rng.gen_range(2..=3);
        let ch: Vec<GateId> = (0..k).map(|_| ids[rng.gen_range(0..ids.len())]).collect();
        let g = if rng.gen_bool(0.5) {
            let terms = ch.into_iter().map(|g| (g, f.from_i64(rng.gen_range(-3..4)))).collect();
            b.add(terms)
        } else {
            b.mul(ch)
        };
        ids.push(g);
    }
    let out = *ids.last().unwrap();
    b.finish(out)
}

#[test]
fn eval_examples() {
    let q = Field::rationals();
    let c = Circuit::parse(&q, "(mul x1 x2)").unwrap();
    assert_eq!(c.eval(&point(&q, &[(x(1), 2), (x(2), 3)])).unwrap(), q.from_i64(6));
    let c = Circuit::parse(&q, "(mul (add x1 1) (add x1 -1))").unwrap();
    assert_eq!(c.eval(&point(&q, &[(x(1), 5)])).unwrap(), q.from_i64(24));
    assert!(matches!(c.eval(&HashMap::new()), Err(Error::MissingAssignment(_))));
}

#[test]
fn eval_matches_expand_on_random_points() {
    let f = fp(101);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = random_circuit(&f, 12, &mut rng);
    let p = expand(&c, 1 << 12, ExpandMode::Exact).unwrap();
    for _ in 0..50 {
        let pt: HashMap<Var, Elem> = [x(1), x(2), x(3), Var::Y]
            .into_iter()
            .map(|v| (v, f.random(&mut rng)))
            .collect();
        assert_eq!(c.eval(&pt).unwrap(), p.eval(&pt).unwrap());
    }
}

#[test]
fn expand_examples() {
    let q = Field::rationals();
    let c = Circuit::parse(&q, "(mul (add x1 y) (add x1 y))").unwrap();
    assert_eq!(full(&c), poly(&q, "x1^2 + 2*x1*y + y^2"));
    let c = Circuit::parse(&q, "g0=var x1\ng1=mul g0 g0\ng2=mul g1 g1\ng3=mul g2 g2\nout g3").unwrap();
    assert_eq!(expand(&c, 8, ExpandMode::Exact).unwrap(), poly(&q, "x1^8"));
    assert!(matches!(
        expand(&c, 7, ExpandMode::Exact),
        Err(Error::DegreeCapExceeded { .. })
    ));
    let mut b = Builder::new(&q);
    let xv = b.var(x(1));
    let one = b.one();
    let s = b.sum(&[xv, one]);
    let out = b.pow(s, 10);
    let c = b.finish(out);
    let want = poly(&q, "1 + 10*x1 + 45*x1^2");
    assert_eq!(expand(&c, 2, ExpandMode::Truncated).unwrap(), want);
    let f = fp(101);
    let c = Circuit::parse(&f, &c.serialize().replace("const 1", "const 1")).unwrap();
    assert_eq!(
        expand(&c, 2, ExpandMode::Truncated).unwrap(),
        poly(&f, "1 + 10*x1 + 45*x1^2")
    );
}

#[test]
fn truncated_modes_agree() {
    let f = fp(101);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let c = random_circuit(&f, 15, &mut rng);
        let dense = expand(&c, 4, ExpandMode::Truncated).unwrap();
        let sparse = expand::expand_with_limit(&c, 4, ExpandMode::Truncated, DEFAULT_TERM_LIMIT).unwrap();
        assert_eq!(dense, sparse);
        if let Ok(p) = expand(&c, 1 << 10, ExpandMode::Exact) {
            assert_eq!(p.truncate(4), dense);
        }
    }
}

#[test]
fn term_limit_guard() {
    let q = Field::rationals();
    let c = Circuit::parse(&q, "(mul (add x1 x2 x3 1) (add x1 x2 x3 1) (add x1 x2 x3 1) (add x1 x2 x3 1))").unwrap();
    assert!(matches!(
        expand::expand_with_limit(&c, 10, ExpandMode::Exact, 10),
        Err(Error::TermLimitExceeded(10))
    ));
}

#[test]
fn metrics_examples() {
    let q = Field::rationals();
    let c = Circuit::parse(&q, "(mul x1 x2)").unwrap();
    assert_eq!(c.metrics(), Metrics { size: 2, depth: 1, degree: 2 });
    let c = Circuit::parse(
        &q,
        "(mul (mul (mul x1 x2) (mul x3 x4)) (mul (mul w1 w2) (mul w3 w4)))",
    )
    .unwrap();
    assert_eq!(c.metrics(), Metrics { size: 14, depth: 3, degree: 8 });
    let p = poly(&q, "x1^3 + x1*x2*x3 + 2*x2^2 + x3 + 7");
    let c = Circuit::from_poly(&p);
    assert_eq!(c.depth(), 2);
    assert_eq!(full(&c), p);
}

#[test]
fn text_errors() {
    let q = Field::rationals();
    assert!(matches!(
        Circuit::parse(&q, "g0=add g1\ng1=add g0\nout g0"),
        Err(Error::CycleDetected(_))
    ));
    assert!(matches!(Circuit::parse(&q, "g0=var x1"), Err(Error::Parse { .. })));
    assert!(matches!(Circuit::parse(&q, "g0=frob x1\nout g0"), Err(Error::Parse { .. })));
    // forward references are sorted
    let c = Circuit::parse(&q, "g2=mul g0 g1; g0=var x1; g1=const 3; out g2").unwrap();
    assert_eq!(full(&c), poly(&q, "3*x1"));
}

#[test]
fn coeff_extract_examples() {
    let q = Field::rationals();
    let c = Circuit::from_poly(&poly(&q, "y^2 + x1*y + 1"));
    let (out, rep) = coeff_extract_circuit(&c, Var::Y, 1, 2).unwrap();
    assert_eq!(full(&out), poly(&q, "x1"));
    assert!(rep.depth_increment <= 2);

    let c = Circuit::parse(&q, "(mul y y y)").unwrap();
    let (out, rep) = partial_derivative_circuit(&c, Var::Y, 1, 3).unwrap();
    assert_eq!(full(&out), poly(&q, "3*y^2"));
    assert!(rep.depth_increment <= 2);

    let c = Circuit::parse(&q, "(mul (add x1 x2 y) (add x1 x2 y))").unwrap();
    let (out, rep) = hom_component_circuit(&c, &[x(1), x(2)], 2, 2).unwrap();
    assert_eq!(full(&out), poly(&q, "x1^2 + 2*x1*x2 + x2^2"));
    assert!(rep.depth_increment <= 2);
}

#[test]
fn field_too_small() {
    let f = fp(3);
    let c = Circuit::parse(&f, "(mul y y y)").unwrap();
    assert!(matches!(
        coeff_extract_circuit(&c, Var::Y, 1, 3),
        Err(Error::FieldTooSmall { .. })
    ));
    // moving to an extension makes room
    let f9 = make_field("Fq:3^2").unwrap();
    let c = Circuit::parse(&f9, "(mul y y y)").unwrap();
    let (out, _) = coeff_extract_circuit(&c, Var::Y, 3, 3).unwrap();
    assert_eq!(full(&out), Poly::one(&f9));
}

#[test]
fn depth_increment_sweep() {
    let f = fp(1_000_003);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for d in 2..=12u32 {
        for n in [10usize, 100, 1000] {
            let c = random_circuit(&f, n, &mut rng);
            for (_, rep) in [
                coeff_extract_circuit(&c, Var::Y, 1, d).unwrap(),
                partial_derivative_circuit(&c, Var::Y, 1, d).unwrap(),
                hom_component_circuit(&c, &[x(1), x(2)], 1, d).unwrap(),
            ] {
                assert!(rep.depth_increment <= 2, "{rep}");
                let bound = (d as usize + 1) * c.size() + 4 * (d as usize + 1).pow(2);
                assert!(rep.output_size <= bound, "{rep}");
            }
        }
    }
}

#[test]
fn transforms_match_poly_operations() {
    let f = fp(101);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut checked = 0;
    while checked < 20 {
        let c = random_circuit(&f, 8, &mut rng);
        let Ok(p) = expand(&c, 12, ExpandMode::Exact) else { continue };
        let dy = match p.degree_in(Var::Y) {
            crate::poly::Degree::Finite(d) => d,
            _ => 0,
        };
        for i in 0..=dy {
            let (out, _) = coeff_extract_circuit(&c, Var::Y, i, dy).unwrap();
            assert_eq!(full(&out), p.coeff_in(Var::Y, i));
            let (out, _) = partial_derivative_circuit(&c, Var::Y, i, dy).unwrap();
            let mut want = p.clone();
            for _ in 0..i {
                want = want.derivative(Var::Y);
            }
            assert_eq!(full(&out), want);
        }
        let xs = [x(1), x(2), x(3)];
        let dx = match p.degree_where(|v| xs.contains(&v)) {
            crate::poly::Degree::Finite(d) => d,
            _ => 0,
        };
        for i in 0..=dx {
            let (out, _) = hom_component_circuit(&c, &xs, i, dx).unwrap();
            assert_eq!(full(&out), p.hom_component(&xs, i));
        }
        let dc = derivative_circuit(&c, x(1));
        assert_eq!(full(&dc), p.derivative(x(1)));
        checked += 1;
    }
}

#[test]
fn border_examples() {
    let q = Field::rationals();
    let jet = Field::jet(&q, 3).unwrap();
    let empty = HashMap::new();
    let cases = [("t^2", 1), ("1 + t + t^2 + t^9", 1), ("t", 0)];
    for (src, want) in cases {
        let c = Circuit::from_poly(&poly(&q, src));
        let (out, _) = border_coeff_extract(&c, Var::T, 2, &jet).unwrap();
        assert_eq!(eval_border(&out, &empty).unwrap(), q.from_i64(want), "{src}");
    }
    // the raw jet value of the degree-9 instance: 1 + O(eps)
    let c = Circuit::from_poly(&poly(&q, "1 + t + t^2 + t^9"));
    let (out, _) = border_coeff_extract(&c, Var::T, 2, &jet).unwrap();
    let v = out.eval(&empty).unwrap();
    assert_eq!(v, jet.one());
    assert!(matches!(
        border_coeff_extract(&c, Var::T, 3, &jet),
        Err(Error::PrecisionTooLow)
    ));
}

#[test]
fn border_high_syntactic_degree() {
    // C = x1 + t*x2 + t^2 + t^3 * (1 + x1 t)^(2^10), built by squaring
    let f = fp(1_000_003);
    let jet = Field::jet(&f, 4).unwrap();
    let mut b = Builder::new(&f);
    let (t, x1, x2) = (b.var(Var::T), b.var(x(1)), b.var(x(2)));
    let one = b.one();
    let tx = b.mul(vec![x1, t]);
    let mut g = b.sum(&[one, tx]);
    for _ in 0..10 {
        g = b.mul(vec![g, g]);
    }
    let t3 = b.pow(t, 3);
    let tail = b.mul(vec![t3, g]);
    let t2 = b.pow(t, 2);
    let tx2 = b.mul(vec![t, x2]);
    let out = b.sum(&[x1, tx2, t2, tail]);
    let c = b.finish(out);
    assert_eq!(c.syntactic_degree(), 3 + 2 * 1024);
    let want = [poly(&f, "x1"), poly(&f, "x2"), poly(&f, "1")];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (d, w) in want.iter().enumerate() {
        let (out, _) = border_coeff_extract(&c, Var::T, d as u32, &jet).unwrap();
        for _ in 0..5 {
            let pt: HashMap<Var, Elem> = [(x(1), f.random(&mut rng)), (x(2), f.random(&mut rng))].into();
            assert_eq!(eval_border(&out, &pt).unwrap(), w.eval(&pt).unwrap());
        }
    }
}

#[test]
fn pit_soundness_harness() {
    let f = fp(1_000_003);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = 6u32;
    let p = poly(&f, "(x1 - 1)*(x1 - 2)*(x2 - 3)*(x1 + x2 - 4)*(x2 - 5)*(x1*x2 - 6)");
    assert_eq!(p.total_degree(), crate::poly::Degree::Finite(d + 1));
    let s = 10 * (d + 1) as i64;
    let mut nonzero = 0;
    for _ in 0..1000 {
        let pt = point(&f, &[(x(1), rng.gen_range(0..s)), (x(2), rng.gen_range(0..s))]);
        if !f.is_zero(&p.eval(&pt).unwrap()) {
            nonzero += 1;
        }
    }
    assert!(nonzero >= 850, "{nonzero}");
}

#[test]
fn report_round_trip() {
    let q = Field::rationals();
    let c = Circuit::from_poly(&poly(&q, "y^2 + x1*y + 1"));
    let (_, rep) = coeff_extract_circuit(&c, Var::Y, 1, 2).unwrap();
    let text = format!("{rep}\n{rep}");
    let back = TransformReport::parse_all(&text).unwrap();
    assert_eq!(back, vec![rep.clone(), rep]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialize_round_trip(seed in any::<u64>()) {
        let f = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&f, 50, &mut rng);
        let back = Circuit::parse(&f, &c.serialize()).unwrap();
        prop_assert_eq!(&back, &c);
    }

    #[test]
    fn eval_agrees_with_expand(seed in any::<u64>()) {
        let f = fp(101);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_circuit(&f, 10, &mut rng);
        if let Ok(p) = expand(&c, 40, ExpandMode::Exact) {
            let pt: HashMap<Var, Elem> = [x(1), x(2), x(3), Var::Y]
                .into_iter()
                .map(|v| (v, f.random(&mut rng)))
                .collect();
            prop_assert_eq!(c.eval(&pt).unwrap(), p.eval(&pt).unwrap());
        }
    }
}
