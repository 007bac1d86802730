use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::circuit::{expand, Circuit, ExpandMode};
use crate::error::Error;
use crate::field::factor::{roots, splitting_field};
use crate::field::{rat, Elem, Field, UniPoly};
use crate::poly::{Poly, Var};

fn x(i: u32) -> Var {
    Var::x(i)
}

fn p(f: &Field, s: &str) -> Poly {
    Poly::parse(f, s).unwrap()
}

fn uni(f: &Field, c: &[i64]) -> UniPoly {
    UniPoly::new(f, c.iter().map(|&v| f.from_i64(v)).collect())
}

/// Ground truth through explicit roots in a splitting field.
fn esym_by_roots(f: &UniPoly, g: &UniPoly, h: &UniPoly, r: usize) -> Elem {
    let emb = splitting_field(f, 3).unwrap();
    let k = emb.dst().clone();
    let up = |u: &UniPoly| u.map_coeffs(&k, |c| emb.embed(c));
    let rs = roots(&up(f)).unwrap();
    assert_eq!(rs.len(), f.degree().unwrap());
    let vals: Vec<Elem> = rs.iter().map(|a| k.div(&up(g).eval(a), &up(h).eval(a)).unwrap()).collect();
    // e_r as a coefficient of prod (1 + v_i s)
    let mut e = vec![k.one()];
    for v in &vals {
        let mut next = e.clone();
        next.push(k.zero());
        for i in 0..e.len() {
            next[i + 1] = k.add(&next[i + 1], &k.mul(&e[i], v));
        }
        e = next;
    }
    emb.pullback(&e.get(r).cloned().unwrap_or_else(|| k.zero())).expect("symmetric value in the base field")
}

#[test]
fn esym_examples() {
    let q = Field::rationals();
    let f = uni(&q, &[2, -3, 1]);
    let z = uni(&q, &[0, 1]);
    let one = UniPoly::one(&q);
    assert_eq!(esym_at_roots(&f, &z, &one, 1).unwrap(), q.from_i64(3));
    assert_eq!(esym_at_roots(&f, &z, &one, 2).unwrap(), q.from_i64(2));
    let z2 = uni(&q, &[0, 0, 1]);
    assert_eq!(esym_at_roots(&f, &z2, &one, 1).unwrap(), q.from_i64(5));
    assert_eq!(esym_at_roots(&f, &z2, &one, 2).unwrap(), q.from_i64(4));
    assert_eq!(esym_at_roots(&f, &one, &z, 1).unwrap(), rat(3, 2));
    assert_eq!(esym_at_roots(&f, &one, &z, 2).unwrap(), rat(1, 2));
    assert_eq!(esym_at_roots(&f, &one, &z, 3).unwrap(), q.zero());
}

#[test]
fn esym_errors() {
    let q = Field::rationals();
    let f = uni(&q, &[0, -1, 1]);
    let z = uni(&q, &[0, 1]);
    assert_eq!(esym_at_roots(&f, &z, &z, 1), Err(Error::HVanishesAtRoot));
    let f3 = Field::prime(3).unwrap();
    let g = uni(&f3, &[1, 0, 0, 1, 1]);
    let one = UniPoly::one(&f3);
    assert!(matches!(
        esym_at_roots(&g, &one, &one, 3),
        Err(Error::CharTooSmallForNewton { p: 3, r: 3 })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn esym_matches_splitting_field(seed in any::<u64>(), deg in 1usize..=6) {
        let f = Field::prime(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut fc: Vec<Elem> = (0..deg).map(|_| f.random(&mut rng)).collect();
        fc.push(f.one());
        let fp = UniPoly::new(&f, fc);
        // squarefree keeps the root multiset a set, which the oracle needs
        prop_assume!(fp.gcd(&fp.derivative()).unwrap().is_one());
        let g = UniPoly::new(&f, (0..3).map(|_| f.random(&mut rng)).collect());
        let h = UniPoly::new(&f, (0..2).map(|_| f.random(&mut rng)).collect());
        prop_assume!(!h.is_zero() && fp.gcd(&h).unwrap().is_one());
        for r in 0..=deg {
            prop_assert_eq!(esym_at_roots(&fp, &g, &h, r).unwrap(), esym_by_roots(&fp, &g, &h, r));
        }
    }
}

#[test]
fn preprocessing_examples() {
    let f = Field::prime(101).unwrap();
    let pp = p(&f, "x1^2 - x2");
    let map = find_preprocessing(&pp, 20, 1).unwrap();
    map.validate(&pp).unwrap();
    assert!(!f.is_zero(&map.a[0]));
    let py = p(&f, "y");
    let map = find_preprocessing(&py, 5, 1).unwrap();
    assert_eq!(map.trials, 1);
    assert_eq!(map.apply(&py).unwrap(), py);
    let sq = p(&f, "(x1 + 1)^2");
    let map = find_preprocessing(&sq, 3, 7).unwrap();
    assert!(map.trials <= 3);
    map.validate(&sq).unwrap();
}

#[test]
fn preprocessing_rejects_each_condition() {
    let f = Field::prime(101).unwrap();
    let pp = p(&f, "x1*x2 + x1");
    // a2 = 0 kills the top part x1*x2
    let bad1 = PreprocessMap::new(vec![x(1), x(2)], vec![f.one(), f.zero()], vec![f.zero(), f.zero()], 2);
    assert!(matches!(bad1.validate(&pp), Err(Error::InvalidMap(_))));
    // x1*x2 + x1 at (y, y + b2): y^2 + (b2 + 1) y, repeated root for b2 = -1, b1 = 0
    let bad2 = PreprocessMap::new(vec![x(1), x(2)], vec![f.one(), f.one()], vec![f.zero(), f.from_i64(-1)], 2);
    assert!(matches!(bad2.validate(&pp), Err(Error::InvalidMap(_))));
    let good = PreprocessMap::new(vec![x(1), x(2)], vec![f.one(), f.one()], vec![f.zero(), f.from_i64(3)], 2);
    good.validate(&pp).unwrap();
    assert_eq!(find_preprocessing(&pp, 0, 1), Err(Error::TrialsExhausted(0)));
}

#[test]
fn apply_and_undo() {
    let f = Field::prime(101).unwrap();
    let pp = p(&f, "x1*x2");
    let map = find_preprocessing(&pp, 20, 2).unwrap();
    let g = map.apply(&pp).unwrap();
    assert_eq!(g.degree_in(Var::Y).or_zero(), 2);
    assert!(g.lc_in(Var::Y).is_one());
    assert_eq!(map.undo(&g).unwrap(), pp.normalize());
    let g1 = map.apply(&p(&f, "x1")).unwrap();
    let g2 = map.apply(&p(&f, "x2")).unwrap();
    assert_eq!(g1.mul(&g2), g);
    assert_eq!(map.undo(&g1).unwrap(), p(&f, "x1"));
    assert_eq!(map.undo(&g2).unwrap(), p(&f, "x2"));
    let c = Circuit::from_poly(&pp);
    let gc = expand(&map.apply_circuit(&c), 8, ExpandMode::Exact).unwrap();
    assert_eq!(gc.normalize(), g.normalize());
}

#[test]
fn undo_apply_round_trip() {
    let q = Field::rationals();
    for s in ["x1^2 + x2^2 + 1", "x1*x2*x3 - 2*x1 + 5", "(x1 - x2)^3 + x2"] {
        let pp = p(&q, s);
        let map = find_preprocessing(&pp, 20, 9).unwrap();
        assert_eq!(map.undo(&map.apply(&pp).unwrap()).unwrap(), pp.normalize());
    }
}

#[test]
fn rational_family_catalan() {
    let q = Field::rationals();
    let g = p(&q, "y^2 - y + t");
    let r = rational_root_truncation(&g, 4).unwrap();
    assert_eq!(r.eval_at(&q.zero()).unwrap(), p(&q, "t + t^2 + 2*t^3 + 5*t^4"));
    assert_eq!(r.eval_at(&q.one()).unwrap(), p(&q, "1 - t - t^2 - 2*t^3 - 5*t^4"));
    let d0 = Poly::from_uni(&uni(&q, &[-1, 2]), Var::Z);
    assert_eq!(r.denominator, d0.pow(11));
    for a in [q.zero(), q.one()] {
        let oracle = crate::roots::newton_root_oracle(&g, &a, 4).unwrap();
        assert_eq!(&r.eval_at(&a).unwrap(), oracle.poly());
    }
}

#[test]
fn rational_family_planted_and_guard() {
    let q = Field::rationals();
    let g = p(&q, "(y - t)*(y - 1)");
    let r = rational_root_truncation(&g, 3).unwrap();
    assert_eq!(r.eval_at(&q.zero()).unwrap(), p(&q, "t"));
    assert_eq!(r.eval_at(&q.one()).unwrap(), p(&q, "1"));
    let bad = p(&q, "y^2 - t");
    assert!(matches!(rational_root_truncation(&bad, 3), Err(Error::NotSquarefreeAtZero)));
}

/// `G(t, R(z))` vanishes in `F[z]/(G(0, z))` modulo `t^2`.
#[test]
fn rational_family_in_quotient_ring() {
    let f = Field::prime(101).unwrap();
    let g = p(&f, "y^3 + y + 1 + t*(y^2 + 7) + t^2*y");
    let r = rational_root_truncation(&g, 1).unwrap();
    let g0 = boundary(&g).unwrap();
    // numerator as [t^0, t^1] coefficient polynomials in z
    let nz: Vec<UniPoly> = (0..2)
        .map(|i| r.numerator.coeff_in(Var::T, i).to_uni(Var::Z).unwrap().rem(&g0).unwrap())
        .collect();
    let dinv = r.denominator.to_uni(Var::Z).unwrap().rem(&g0).unwrap().inv_mod(&g0).unwrap();
    let r0 = nz[0].mul(&dinv).rem(&g0).unwrap();
    let r1 = nz[1].mul(&dinv).rem(&g0).unwrap();
    // G(t, r0 + t r1) = G(0, r0) + t (G_y(0, r0) r1 + G_t(0, r0)) mod t^2
    let g_at0 = g0.compose(&r0).rem(&g0).unwrap();
    assert!(g_at0.is_zero());
    let gy0 = g0.derivative().compose(&r0);
    let gt0 = g.coeff_in(Var::T, 1).to_uni(Var::Y).unwrap().compose(&r0);
    assert!(gy0.mul(&r1).add(&gt0).rem(&g0).unwrap().is_zero());
}

#[test]
fn lifted_roots_match_rational_family() {
    let f = Field::prime(101).unwrap();
    let pp = p(&f, "(x1^2 + x2 + 1)*(x1*x2 + 3)");
    let map = find_preprocessing(&pp, 30, 5).unwrap();
    let g = map.apply(&pp).unwrap();
    let fam = root_family(&g, 2, 1).unwrap();
    assert_eq!(fam.alphas.len(), 4);
    if fam.field() == &f {
        let r = rational_root_truncation(&g, 2).unwrap();
        for (a, s) in fam.alphas.iter().zip(&fam.series) {
            assert_eq!(&r.eval_at(a).unwrap(), s);
        }
    }
    for s in &fam.series {
        assert!(compose_y_t(&fam.lifted, s, 2).is_zero());
    }
}

/// Boundary of `factor` under `map`, monic.
fn boundary_of(map: &PreprocessMap, factor: &Poly) -> UniPoly {
    boundary(&map.apply(factor).unwrap()).unwrap()
}

fn check_factor(pp: &Poly, factor: &Poly, seed: u64) -> crate::circuit::TransformReport {
    let map = find_preprocessing(pp, 50, seed).unwrap();
    let c = Circuit::from_poly(pp);
    let bd = boundary_of(&map, factor);
    let (out, rep) = factor_circuit(&c, &map, &bd, None).unwrap();
    let k = factor.total_degree().or_zero();
    let got = expand(&out, k, ExpandMode::Truncated).unwrap();
    assert_eq!(got.normalize(), factor.normalize(), "factor {factor} of {pp}");
    rep
}

#[test]
fn factor_circuit_examples() {
    let q = Field::rationals();
    let f = Field::prime(101).unwrap();
    let a = p(&q, "x1 + x2");
    let b = p(&q, "x1 - x2 + 1");
    check_factor(&a.mul(&b), &a, 1);
    let a = p(&f, "x1^2 + x2 + 1");
    let b = p(&f, "x1*x2 + 3");
    check_factor(&a.mul(&b), &a, 2);
    check_factor(&a.mul(&b), &b, 2);
    let irr = p(&q, "x1^2 + x2^2 + 1");
    check_factor(&irr, &irr, 3);
}

#[test]
fn factor_circuit_errors() {
    let f = Field::prime(101).unwrap();
    let pp = p(&f, "(x1 + x2)*(x1 - x2 + 1)");
    let map = find_preprocessing(&pp, 50, 4).unwrap();
    let c = Circuit::from_poly(&pp);
    let q = Field::rationals();
    assert_eq!(
        factor_circuit(&c, &map, &uni(&q, &[1, 1]), None).unwrap_err(),
        Error::BoundaryNotInBaseField
    );
    let g0 = boundary(&map.apply(&pp).unwrap()).unwrap();
    let stranger = uni(&f, &[1, 1]);
    if !g0.rem(&stranger).unwrap().is_zero() {
        assert_eq!(factor_circuit(&c, &map, &stranger, None).unwrap_err(), Error::NotAFactor);
    }
    let bd = boundary_of(&map, &p(&f, "x1 + x2"));
    assert_eq!(factor_circuit(&c, &map, &bd, Some(0)).unwrap_err(), Error::PrecisionTooLow);
}

/// `(a + sum_i (i*x1 - i*x1)) * b` as a depth-3 circuit of growing size.
fn depth3_product(f: &Field, a: &Poly, b: &Poly, width: usize) -> Circuit {
    use crate::circuit::Builder;
    let mut bl = Builder::new(f);
    let ca = Circuit::from_poly(a);
    let cb = Circuit::from_poly(b);
    let ga = bl.copy_circuit(&ca, false, &mut |bl, v| bl.var(v));
    let gb = bl.copy_circuit(&cb, false, &mut |bl, v| bl.var(v));
    let x1 = bl.var(x(1));
    let mut terms = vec![(ga, f.one())];
    for i in 1..=width as i64 {
        let c = bl.constant(f.from_i64(i));
        let m = bl.mul(vec![x1, c]);
        terms.push((m, f.one()));
        terms.push((m, f.from_i64(-1)));
    }
    let s = bl.add(terms);
    let out = bl.mul(vec![s, gb]);
    bl.finish(out)
}

#[test]
fn factor_depth_increment_constant() {
    let f = Field::prime(101).unwrap();
    let a = p(&f, "x1 + 2*x2 + 3");
    let b = p(&f, "x1*x2 - 1");
    let pp = a.mul(&b);
    let map = find_preprocessing(&pp, 50, 11).unwrap();
    let bd = boundary_of(&map, &a);
    let mut incs = Vec::new();
    for width in [1, 10, 40] {
        let c = depth3_product(&f, &a, &b, width);
        let (out, rep) = factor_circuit(&c, &map, &bd, None).unwrap();
        assert_eq!(expand(&out, 1, ExpandMode::Truncated).unwrap().normalize(), a.normalize());
        incs.push(rep.depth_increment);
    }
    assert!(incs.windows(2).all(|w| w[0] == w[1]), "{incs:?}");
}

#[test]
fn planted_products_recover_factors() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for field in [Field::prime(101).unwrap(), Field::rationals()] {
        for _ in 0..6 {
            // rational expansions grow quickly, so products stay at degree 3 there
            let da = if field.characteristic() == 0 { 1 } else { rng.gen_range(1..=2) };
            let db = rng.gen_range(1..=2);
            let a = random_poly(&field, &mut rng, da);
            let b = random_poly(&field, &mut rng, db);
            let pp = a.mul(&b);
            let sqf = crate::poly::squarefree_part(&pp, x(1)).unwrap();
            if sqf.total_degree() != pp.total_degree() {
                continue;
            }
            let seed = rng.gen();
            check_factor(&pp, &a, seed);
            check_factor(&pp, &b, seed);
        }
    }
}

fn random_poly(f: &Field, rng: &mut ChaCha8Rng, deg: u32) -> Poly {
    loop {
        let mut acc = Poly::zero(f);
        for i in 0..=deg {
            for j in 0..=(deg - i) {
                if rng.gen_bool(0.6) {
                    let m = crate::poly::Monomial::from_pairs([(x(1), i), (x(2), j)]);
                    acc.add_term(m, f.from_i64(rng.gen_range(-5..=5)));
                }
            }
        }
        if acc.total_degree().or_zero() == deg {
            return acc;
        }
    }
}
