//! The truncated rational root family `R_G(z)` and `t`-adic root lifting.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::factor::{roots, splitting_field, Embedding};
use crate::field::{Elem, Field, UniPoly};
use crate::poly::{Monomial, Poly, Var};

const Y: Var = Var::Y;
const T: Var = Var::T;
const Z: Var = Var::Z;

fn trunc_t(p: &Poly, d: u32) -> Poly {
    p.filter_terms(|m| m.exp(T) <= d)
}

/// `G(x, 0, y)` as a univariate; it must not involve `x`.
pub fn boundary(g: &Poly) -> Result<UniPoly> {
    let g0 = g.subs_value(T, &g.field().zero());
    g0.to_uni(Y)
        .map_err(|_| Error::HypothesisViolated("G(x, 0, y) depends on x".into()))
}

fn check_monic(g: &Poly) -> Result<()> {
    let lc = g.lc_in(Y);
    if !lc.is_one() {
        return Err(Error::HypothesisViolated("G is not monic in y".into()));
    }
    Ok(())
}

/// `G(x, t, phi)` modulo `t^(d+1)`; `phi` must not involve `y`.
pub fn compose_y_t(g: &Poly, phi: &Poly, d: u32) -> Poly {
    let f = g.field();
    let mut acc = Poly::zero(f);
    for c in g.coeffs_in(Y).iter().rev() {
        acc = trunc_t(&acc.mul(phi), d).add(&trunc_t(c, d));
    }
    acc
}

/// The root `phi(x, t)` of `G` with `phi(x, 0) = alpha`, modulo `t^(d+1)`.
/// Requires `G_y(x, 0, alpha)` to be a nonzero constant.
pub fn lift_root_in_t(g: &Poly, alpha: &Elem, d: u32) -> Result<Poly> {
    let f = g.field();
    let at0 = g.subs_value(T, &f.zero());
    let pt = |p: &Poly| p.subs_value(Y, alpha);
    if !pt(&at0).is_zero() {
        return Err(Error::NoRoot);
    }
    let c = pt(&at0.derivative(Y));
    if !c.is_constant() {
        return Err(Error::HypothesisViolated("G_y(x, 0, alpha) depends on x".into()));
    }
    let c = c.constant_term();
    if f.is_zero(&c) {
        return Err(Error::SingularRoot);
    }
    let ci = f.inv(&c)?;
    let mut phi = Poly::constant(f, alpha.clone());
    for _ in 0..=d {
        let r = compose_y_t(g, &phi, d);
        if r.is_zero() {
            return Ok(phi);
        }
        phi = phi.sub(&r.scale(&ci));
    }
    if !compose_y_t(g, &phi, d).is_zero() {
        return Err(Error::NoRoot);
    }
    Ok(phi)
}

/// `R_G(z) = N(x, t, z) / D(z)` with `D = (G_y(0, z))^(2d+3)`; `N` is kept
/// modulo `t^(d+1)`, which leaves `R_G(alpha) mod t^(d+1)` unchanged.
#[derive(Clone, Debug)]
pub struct RationalRoot {
    pub numerator: Poly,
    pub denominator: Poly,
    pub precision: u32,
}

impl RationalRoot {
    /// `R_G(alpha) mod t^(d+1)`; `alpha` must lie in the coefficient field.
    pub fn eval_at(&self, alpha: &Elem) -> Result<Poly> {
        let f = self.numerator.field();
        let den = self.denominator.subs_value(Z, alpha).constant_term();
        if f.is_zero(&den) {
            return Err(Error::HVanishesAtRoot);
        }
        let num = self.numerator.subs_value(Z, alpha);
        Ok(trunc_t(&num, self.precision).scale(&f.inv(&den)?))
    }
}

/// Builds `R_G` for `G` monic in `y` with `G(0, y)` squarefree.
pub fn rational_root_truncation(g: &Poly, d: u32) -> Result<RationalRoot> {
    check_monic(g)?;
    let f = g.field();
    let g0 = boundary(g)?;
    if g0.degree().unwrap_or(0) == 0 {
        return Err(Error::DegreeZeroInput);
    }
    if !g0.gcd(&g0.derivative())?.is_one() {
        return Err(Error::NotSquarefreeAtZero);
    }
    let d0 = Poly::from_uni(&g0.derivative(), Z);
    let yz = Poly::var(f, Y).add(&Poly::var(f, Z));
    let gs = trunc_t(&g.substitute(&BTreeMap::from([(Y, yz)]))?, d);
    let gys = gs.derivative(Y);
    let lambda = Poly::var(f, Y).mul(&d0).sub(&gs);
    let mmax = 2 * d + 2;
    let mut d0_pows = vec![Poly::one(f)];
    for i in 1..=(mmax + 1) as usize {
        d0_pows.push(d0_pows[i - 1].mul(&d0));
    }
    let mut num = Poly::var(f, Z).mul(&d0_pows[mmax as usize + 1]);
    let mut acc = gys;
    for m in 1..=mmax {
        // acc = G_y * lambda^m, only y-degrees still needed later are kept
        acc = trunc_t(&acc.mul(&lambda), d).filter_terms(|mo| mo.exp(Y) < mmax);
        let cm = acc.coeff_in(Y, m - 1);
        num = num.add(&cm.mul(&d0_pows[(mmax - m) as usize]));
    }
    Ok(RationalRoot {
        numerator: num,
        denominator: d0_pows[mmax as usize + 1].clone(),
        precision: d,
    })
}

/// Roots `alpha_i` of `G(0, y)` and their lifts modulo `t^(d+1)`.
#[derive(Clone, Debug)]
pub struct RootFamily {
    /// Base field into the field holding the roots.
    pub embedding: Embedding,
    pub alphas: Vec<Elem>,
    /// `G` over the root field.
    pub lifted: Poly,
    pub series: Vec<Poly>,
    pub precision: u32,
}

impl RootFamily {
    pub fn field(&self) -> &Field {
        self.embedding.dst()
    }
}

/// Maps a polynomial along a field embedding.
pub fn embed_poly(p: &Poly, emb: &Embedding) -> Poly {
    p.map_coeffs(emb.dst(), |c| emb.embed(c))
}

/// Splits `G(0, y)` over a finite field and lifts every root.
pub fn root_family(g: &Poly, d: u32, seed: u64) -> Result<RootFamily> {
    check_monic(g)?;
    let g0 = boundary(g)?;
    if !g0.gcd(&g0.derivative())?.is_one() {
        return Err(Error::NotSquarefreeAtZero);
    }
    let emb = splitting_field(&g0, seed)?;
    let lifted = embed_poly(g, &emb);
    let g0e = g0.map_coeffs(emb.dst(), |c| emb.embed(c));
    let alphas = roots(&g0e)?;
    if alphas.len() != g0.degree().unwrap_or(0) {
        return Err(Error::HypothesisViolated("boundary does not split".into()));
    }
    let series = alphas
        .iter()
        .map(|a| lift_root_in_t(&lifted, a, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(RootFamily {
        embedding: emb,
        alphas,
        lifted,
        series,
        precision: d,
    })
}

/// `prod_{i in S} (y - phi_i)` modulo `t^(d+1)`.
pub fn subset_product(fam: &RootFamily, subset: &[usize]) -> Poly {
    let f = fam.field();
    let mut acc = Poly::one(f);
    for &i in subset {
        let lin = Poly::var(f, Y).sub(&fam.series[i]);
        acc = trunc_t(&acc.mul(&lin), fam.precision);
    }
    acc
}

/// Pulls a polynomial back along the embedding, or `None` if some
/// coefficient lies outside the base field.
pub fn pullback_poly(p: &Poly, emb: &Embedding) -> Option<Poly> {
    let mut terms: Vec<(Monomial, Elem)> = Vec::with_capacity(p.num_terms());
    for (m, c) in p.terms() {
        terms.push((m.clone(), emb.pullback(c)?));
    }
    Some(Poly::from_terms(emb.src(), terms))
}
