//! Seeded generators for instances with known answers.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Builder, Circuit};
use crate::field::Field;
use crate::pipeline::oracle_irreducible;
use crate::poly::{Monomial, Poly, RootSpec, Var};

const Y: Var = Var::Y;
const T: Var = Var::T;

/// Coefficient: a small integer over `Q`, uniform otherwise.
fn coeff(f: &Field, rng: &mut ChaCha8Rng) -> crate::field::Elem {
    if f.characteristic() == 0 {
        f.from_i64(rng.gen_range(-5..=5))
    } else {
        f.random(rng)
    }
}

/// Random polynomial in `vars` of exact total degree `deg`, each monomial
/// kept with probability `density`.
pub fn random_poly(f: &Field, vars: &[Var], deg: u32, density: f64, rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let mut acc = Poly::zero(f);
        for m in monomials(vars, deg) {
            if rng.gen_bool(density) {
                acc.add_term(m, coeff(f, rng));
            }
        }
        if acc.total_degree().or_zero() == deg && !acc.is_zero() {
            return acc;
        }
    }
}

/// All monomials in `vars` of total degree at most `deg`.
pub fn monomials(vars: &[Var], deg: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for &v in vars {
        let mut next = Vec::new();
        for m in &out {
            for e in 0..=deg - m.degree() {
                next.push(m.mul(&Monomial::var(v, e)));
            }
        }
        out = next;
    }
    out
}

pub fn xs(n: usize) -> Vec<Var> {
    (1..=n as u32).map(Var::x).collect()
}

#[derive(Clone, Debug)]
pub struct PlantedRoot {
    pub p: Poly,
    /// The planted root; `P = (y - phi)^(e p^ell) * cofactor`.
    pub phi: Poly,
    pub root: RootSpec,
}

/// `(y - phi)^(e p^ell) * cof` with `phi` in `n` variables (`t` when
/// `n = 1`) and a cofactor that is a unit at the boundary point.
pub fn planted_root(f: &Field, n: usize, d: u32, e: u32, ell: u32, rng: &mut ChaCha8Rng) -> PlantedRoot {
    let vars = if n == 1 { vec![T] } else { xs(n) };
    let alpha = f.random(rng);
    let mut phi = Poly::constant(f, alpha.clone());
    // a handful of terms keeps the planted root sparse at high precision
    let terms = monomials(&vars, d.min(4));
    for _ in 0..(2 + n) {
        let m = terms[rng.gen_range(1..terms.len())].clone();
        phi.add_term(m, coeff(f, rng));
    }
    let mut cof = Poly::constant(f, f.random_nonzero(rng));
    cof = cof.add(&Poly::var(f, Y).scale(&coeff(f, rng)));
    for &v in &vars {
        cof = cof.add(&Poly::var(f, v).scale(&coeff(f, rng)));
    }
    let at = f.add(&cof.constant_term(), &f.mul(&cof.coeff(&Monomial::var(Y, 1)), &alpha));
    if f.is_zero(&at) {
        cof = cof.add(&Poly::one(f));
    }
    let q = match f.characteristic() {
        0 => 1,
        p => (p as u32).pow(ell),
    };
    let p = Poly::var(f, Y).sub(&phi).pow(e * q).mul(&cof);
    PlantedRoot {
        p,
        phi,
        root: RootSpec { alpha, e, ell },
    }
}

/// `sum_i c_i prod_j l_ij + l_0` with homogeneous linear `l_ij` in `x, y`
/// and `l_0 = y - x1`: a depth-3 circuit with a simple root at the origin.
pub fn depth3_root_input(f: &Field, n: usize, width: usize, rng: &mut ChaCha8Rng) -> Circuit {
    let mut b = Builder::new(f);
    let mut leaves: Vec<_> = xs(n).into_iter().map(|v| b.var(v)).collect();
    leaves.push(b.var(Y));
    let y = *leaves.last().unwrap();
    let lin = |b: &mut Builder, rng: &mut ChaCha8Rng| {
        let terms = leaves.iter().map(|&g| (g, f.random(rng))).collect();
        b.add(terms)
    };
    let mut top = vec![(y, f.one()), (leaves[0], f.neg(&f.one()))];
    for _ in 0..width {
        let fs: Vec<_> = (0..3).map(|_| lin(&mut b, rng)).collect();
        let prod = b.mul(fs);
        top.push((prod, f.random_nonzero(rng)));
    }
    let out = b.add(top);
    b.finish(out)
}

/// `A(x, t) + t^(d+1) * B(x, t)^(2^k)` built by repeated squaring, with
/// `A` of `t`-degree at most `d`. Returns the circuit and `A`.
pub fn border_instance(f: &Field, d: u32, k: u32, rng: &mut ChaCha8Rng) -> (Circuit, Poly) {
    let vars = [Var::x(1), Var::x(2), T];
    let a = random_poly(f, &vars, d, 0.5, rng).filter_terms(|m| m.exp(T) <= d);
    let bpoly = Poly::one(f).add(&random_poly(f, &vars, 1, 0.8, rng));
    let mut b = Builder::new(f);
    let ca = Circuit::from_poly(&a);
    let ga = b.copy_circuit(&ca, false, &mut |b, v| b.var(v));
    let cb = Circuit::from_poly(&bpoly);
    let mut g = b.copy_circuit(&cb, false, &mut |b, v| b.var(v));
    for _ in 0..k {
        g = b.mul(vec![g, g]);
    }
    let t = b.var(T);
    let tp = b.pow(t, d as usize + 1);
    let tail = b.mul(vec![tp, g]);
    let out = b.sum(&[ga, tail]);
    (b.finish(out), a)
}

/// Irreducibility of `g`; over `Q` through its image mod 101, which
/// certifies integer polynomials whose total degree survives reduction.
pub fn certified_irreducible(g: &Poly, seed: u64) -> bool {
    let f = g.field();
    if f.characteristic() != 0 {
        return oracle_irreducible(g, seed).ok().flatten() == Some(true);
    }
    let fp = Field::prime(101).expect("prime");
    let mut terms = Vec::new();
    for (m, c) in g.terms() {
        match c.as_rational().filter(|q| q.is_integer()) {
            Some(q) => terms.push((m.clone(), fp.from_bigint(q.numer()))),
            None => return false,
        }
    }
    let h = Poly::from_terms(&fp, terms);
    h.total_degree() == g.total_degree() && oracle_irreducible(&h, seed).ok().flatten() == Some(true)
}

/// A random factor certified irreducible, normalized.
pub fn irreducible_factor(f: &Field, n: usize, deg: u32, rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let g = random_poly(f, &xs(n), deg, 0.6, rng);
        if g.vars().is_empty() {
            continue;
        }
        if deg == 1 || certified_irreducible(&g, rng.gen()) {
            return g.normalize();
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlantedProduct {
    /// Pairwise non-associated irreducible factors with multiplicities.
    pub factors: Vec<(Poly, u32)>,
    pub product: Poly,
}

/// Product of `count` distinct irreducible factors of total degree at most
/// `max_deg` each, with multiplicities up to `max_mult`, staying within
/// `total` overall.
pub fn planted_product(
    f: &Field,
    n: usize,
    count: usize,
    max_deg: u32,
    max_mult: u32,
    total: u32,
    rng: &mut ChaCha8Rng,
) -> PlantedProduct {
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    let mut used = 0;
    while factors.len() < count {
        let room = total - used;
        if room == 0 {
            break;
        }
        let deg = rng.gen_range(1..=max_deg.min(room));
        let g = irreducible_factor(f, n, deg, rng);
        if factors.iter().any(|(h, _)| *h == g) {
            continue;
        }
        let m = rng.gen_range(1..=max_mult.min(room / deg).max(1));
        used += deg * m;
        factors.push((g, m));
    }
    let product = factors.iter().fold(Poly::one(f), |acc, (g, m)| acc.mul(&g.pow(*m)));
    PlantedProduct { factors, product }
}

/// Product circuit `prod_i g_i^{m_i}` with each factor in depth-2 form.
pub fn product_circuit(pp: &PlantedProduct, f: &Field) -> Circuit {
    let mut b = Builder::new(f);
    let mut gs = Vec::new();
    for (g, m) in &pp.factors {
        let c = Circuit::from_poly(g);
        let h = b.copy_circuit(&c, false, &mut |b, v| b.var(v));
        for _ in 0..*m {
            gs.push(h);
        }
    }
    let out = b.mul(gs);
    b.finish(out)
}

/// `prod_i (y^k_i + sum_j (a_ij + t r_ij(x, t)) y^j)` over `n` x-variables:
/// monic in `y`, x-monomials divisible by `t`, boundary squarefree.
pub fn preservation_instance(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Poly {
    let vars = xs(n);
    loop {
        let count = rng.gen_range(1..=3);
        let mut acc = Poly::one(f);
        for _ in 0..count {
            let k = rng.gen_range(1..=2u32);
            let mut g = Poly::var_pow(f, Y, k);
            for j in 0..k {
                let mut c = Poly::constant(f, f.random(rng));
                let r = random_poly(f, &vars, rng.gen_range(1..=2), 0.5, rng);
                c = c.add(&Poly::var(f, T).mul(&r));
                g = g.add(&c.mul(&Poly::var_pow(f, Y, j)));
            }
            acc = acc.mul(&g);
        }
        let b0 = acc.subs_value(T, &f.zero()).to_uni(Y).expect("x terms carry t");
        if b0.gcd(&b0.derivative()).map(|g| g.is_one()).unwrap_or(false) {
            return acc;
        }
    }
}

/// `y^2 - (1 + t)^2 - t^2 x1`: irreducible, but splits once `x1 -> 0`.
pub fn collapse_instance(f: &Field) -> Poly {
    let one_t = Poly::one(f).add(&Poly::var(f, T));
    Poly::var_pow(f, Y, 2)
        .sub(&one_t.pow(2))
        .sub(&Poly::var_pow(f, T, 2).mul(&Poly::var(f, Var::x(1))))
}
