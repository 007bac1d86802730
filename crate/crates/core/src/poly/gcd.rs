//! Multivariate gcd and squarefree decomposition.
//!
//! Fields use dense evaluation and interpolation one variable at a time.
//! Jets, and finite fields that run out of points, fall back to a
//! primitive remainder sequence.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{Monomial, Poly, Var};
use crate::error::{Error, Result};
use crate::field::factor::squarefree_uni;
use crate::field::UniPoly;

/// Normalized gcd (greatest term has coefficient 1).
pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Err(Error::BothZero),
        (true, false) => Ok(b.normalize()),
        (false, true) => Ok(a.normalize()),
        (false, false) => Ok(gcd_nonzero(a, b).normalize()),
    }
}

fn main_var(a: &Poly, b: &Poly) -> Option<Var> {
    a.vars().into_iter().chain(b.vars()).max()
}

fn gcd_nonzero(a: &Poly, b: &Poly) -> Poly {
    let f = a.field();
    if a.is_constant() || b.is_constant() {
        return Poly::one(f);
    }
    if !f.is_jet() {
        if let Some(g) = gcd_interp(a, b) {
            return g;
        }
    }
    gcd_prs(a, b)
}

/// Coefficients of `a` in `F[x][rest]`, keyed by the monomial in the rest.
fn split_x(a: &Poly, x: Var) -> BTreeMap<Monomial, UniPoly> {
    let f = a.field();
    let mut raw: BTreeMap<Monomial, Vec<crate::field::Elem>> = BTreeMap::new();
    for (m, c) in a.terms() {
        let (e, rest) = m.split_var(x);
        let v = raw.entry(rest).or_default();
        if v.len() <= e as usize {
            v.resize(e as usize + 1, f.zero());
        }
        v[e as usize] = c.clone();
    }
    raw.into_iter().map(|(m, v)| (m, UniPoly::new(f, v))).collect()
}

fn content_x(parts: &BTreeMap<Monomial, UniPoly>) -> UniPoly {
    let mut it = parts.values();
    let first = it.next().unwrap().monic();
    it.fold(first, |g, c| if g.degree() == Some(0) { g } else { g.gcd(c).unwrap() })
}

/// `None` if a finite field has too few points left.
fn gcd_interp(a: &Poly, b: &Poly) -> Option<Poly> {
    let f = a.field();
    let vars: Vec<Var> = a.vars().union(&b.vars()).copied().collect();
    if vars.len() == 1 {
        let g = a.to_uni(vars[0]).ok()?.gcd(&b.to_uni(vars[0]).ok()?).ok()?;
        return Some(Poly::from_uni(&g, vars[0]));
    }
    let x = vars[0];
    let (sa, sb) = (split_x(a, x), split_x(b, x));
    let (ca, cb) = (content_x(&sa), content_x(&sb));
    let c = Poly::from_uni(&ca.gcd(&cb).ok()?, x);
    let a = a.exact_div(&Poly::from_uni(&ca, x)).ok()?;
    let b = b.exact_div(&Poly::from_uni(&cb, x)).ok()?;
    let (sa, sb) = (split_x(&a, x), split_x(&b, x));
    let (lca, lcb) = (sa.values().next_back()?.clone(), sb.values().next_back()?.clone());
    let glc = lca.gcd(&lcb).ok()?;
    let deg = |p: &Poly| p.degree_in(x).or_zero() as usize;
    let bound = deg(&a).min(deg(&b)) + glc.degree().unwrap_or(0);
    let xp = Poly::var(f, x);

    let mut h: Option<(Poly, Monomial)> = None;
    let mut modulus = Poly::one(f);
    let mut count = 0;
    for i in 0u64.. {
        if !f.has_at_least(i as usize + 1) {
            return None;
        }
        let pt = f.element(i);
        if f.is_zero(&lca.eval(&pt)) || f.is_zero(&lcb.eval(&pt)) {
            continue;
        }
        let g = gcd_interp_or_prs(&a.subs_value(x, &pt), &b.subs_value(x, &pt))?.normalize();
        let lm = g.leading_term().unwrap().0.clone();
        if lm.is_one() {
            // the primitive parts are coprime
            return Some(c);
        }
        let g = g.scale(&glc.eval(&pt));
        let xa = xp.sub(&Poly::constant(f, pt.clone()));
        match h.as_ref().map(|(_, m)| lm.cmp(m)) {
            Some(Ordering::Greater) => continue,
            Some(Ordering::Equal) => {
                let (hp, _) = h.as_mut().unwrap();
                let diff = g.sub(&hp.subs_value(x, &pt));
                let w = f.inv(&modulus.subs_value(x, &pt).constant_term()).ok()?;
                *hp = hp.add(&diff.mul(&modulus).scale(&w));
                modulus = modulus.mul(&xa);
                count += 1;
            }
            _ => {
                h = Some((g, lm));
                modulus = xa;
                count = 1;
            }
        }
        if count > bound {
            let hp = &h.as_ref().unwrap().0;
            let cand = hp.exact_div(&Poly::from_uni(&content_x(&split_x(hp, x)), x)).ok()?;
            if cand.divides(&a) && cand.divides(&b) {
                return Some(c.mul(&cand));
            }
        }
    }
    None
}

fn gcd_interp_or_prs(a: &Poly, b: &Poly) -> Option<Poly> {
    if a.is_zero() || b.is_zero() {
        // both leading coefficients survive, so this is unreachable
        return None;
    }
    if a.is_constant() || b.is_constant() {
        return Some(Poly::one(a.field()));
    }
    gcd_interp(a, b)
}

fn gcd_prs(a: &Poly, b: &Poly) -> Poly {
    let f = a.field();
    let v = main_var(a, b).unwrap();
    let da = a.degree_in(v).or_zero();
    let db = b.degree_in(v).or_zero();
    if da == 0 {
        return gcd_nonzero(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd_nonzero(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd_nonzero(&ca, &cb);
    let pa = a.exact_div(&ca).unwrap();
    let pb = b.exact_div(&cb).unwrap();
    let (mut r0, mut r1) = if da >= db { (pa, pb) } else { (pb, pa) };
    while !r1.is_zero() && r1.degree_in(v).or_zero() > 0 {
        let r = r0.pseudo_divrem(&r1, v).unwrap().r;
        r0 = r1;
        r1 = if r.is_zero() {
            r
        } else {
            r.exact_div(&content_in(&r, v)).unwrap()
        };
    }
    let g = if r1.is_zero() { r0 } else { Poly::one(f) };
    c.mul(&g)
}

/// Gcd of the coefficients with respect to `v` (normalized).
pub fn content_in(a: &Poly, v: Var) -> Poly {
    let mut acc: Option<Poly> = None;
    for c in a.coeffs_in(v).into_iter().filter(|c| !c.is_zero()) {
        acc = Some(match acc {
            None => c.normalize(),
            Some(g) => {
                if g.is_one() {
                    return g;
                }
                gcd_nonzero(&g, &c).normalize()
            }
        });
    }
    acc.unwrap_or_else(|| Poly::zero(a.field()))
}

/// Monic gcd of two univariate polynomials in `v`.
pub fn gcd_univariate(a: &Poly, b: &Poly, v: Var) -> Result<Poly> {
    let g = gcd(a, b)?;
    g.monic_in(v)
}

/// Squarefree decomposition `(P_1, ..., P_m)` with `f = unit * prod P_i^i`.
///
/// Each `P_i` is normalized. Finite-field univariates use the full
/// characteristic-p algorithm; otherwise every variable's degree must stay
/// below the characteristic.
pub fn squarefree_decomposition(f: &Poly, main: Var) -> Result<Vec<Poly>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut parts = sqf_rec(f, Some(main))?;
    while parts.last().is_some_and(|p| p.is_one()) {
        parts.pop();
    }
    Ok(parts)
}

/// Product of the squarefree components.
pub fn squarefree_part(f: &Poly, main: Var) -> Result<Poly> {
    Ok(squarefree_decomposition(f, main)?
        .iter()
        .fold(Poly::one(f.field()), |acc, p| acc.mul(p)))
}

fn merge(a: Vec<Poly>, b: Vec<Poly>) -> Vec<Poly> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.mul(y).normalize(),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn sqf_rec(f: &Poly, main: Option<Var>) -> Result<Vec<Poly>> {
    let field = f.field().clone();
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let vars = f.vars();
    let p = field.characteristic();
    if vars.len() == 1 && field.is_finite() {
        let v = *vars.iter().next().unwrap();
        let mut parts: Vec<Poly> = Vec::new();
        for (g, m) in squarefree_uni(&f.to_uni(v)?.monic())? {
            while parts.len() < m {
                parts.push(Poly::one(&field));
            }
            parts[m - 1] = parts[m - 1].mul(&Poly::from_uni(&g, v)).normalize();
        }
        return Ok(parts);
    }
    if p > 0 {
        for &v in &vars {
            let d = f.degree_in(v).or_zero();
            if d as u64 >= p {
                return Err(Error::CharacteristicTooSmall { p, degree: d });
            }
        }
    }
    let v = main.filter(|v| vars.contains(v)).unwrap_or(*vars.iter().next_back().unwrap());
    let c = content_in(f, v);
    let pp = f.exact_div(&c)?;
    let parts_c = sqf_rec(&c, None)?;
    let parts_pp = yun(&pp, v)?;
    Ok(merge(parts_c, parts_pp))
}

fn yun(f: &Poly, v: Var) -> Result<Vec<Poly>> {
    if f.degree_in(v).or_zero() == 0 {
        return Ok(Vec::new());
    }
    let df = f.derivative(v);
    let a0 = gcd(f, &df)?;
    let mut b = f.exact_div(&a0)?;
    let c = df.exact_div(&a0)?;
    let mut d = c.sub(&b.derivative(v));
    let mut out = Vec::new();
    while !b.is_constant() {
        let a = gcd(&b, &d)?;
        b = b.exact_div(&a)?;
        let c = d.exact_div(&a)?;
        d = c.sub(&b.derivative(v));
        out.push(a);
    }
    Ok(out)
}
