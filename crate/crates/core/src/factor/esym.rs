//! Symmetric functions of `g(alpha)/h(alpha)` over the roots of `f`,
//! computed inside `F[z]/(f)` without locating any root.

use crate::error::{Error, Result};
use crate::field::{Elem, Field, UniPoly};

/// Trace of multiplication by `v` on `F[z]/(f)`, `f` monic.
pub fn trace_mod(v: &UniPoly, f: &UniPoly) -> Result<Elem> {
    let field = f.field();
    let k = f.degree().unwrap_or(0);
    let v = v.rem(f)?;
    let mut acc = field.zero();
    let mut col = v;
    for i in 0..k {
        acc = field.add(&acc, &col.coeff(i));
        col = col.mul(&UniPoly::z(field)).rem(f)?;
    }
    Ok(acc)
}

/// `s_u = sum_i alpha_i^u` for `u < count`.
pub fn root_power_sums(f: &UniPoly, count: usize) -> Result<Vec<Elem>> {
    let field = f.field();
    let mut out = Vec::with_capacity(count);
    let mut zu = UniPoly::one(field);
    for _ in 0..count {
        out.push(trace_mod(&zu, f)?);
        zu = zu.mul(&UniPoly::z(field)).rem(f)?;
    }
    Ok(out)
}

/// Newton's identities: elementary symmetric functions `e_0..=e_r` from
/// power sums `p_1..=p_r` (index 0 of `p` unused).
pub fn newton_esym(field: &Field, p: &[Elem], r: usize) -> Result<Vec<Elem>> {
    let ch = field.characteristic();
    if ch != 0 && r as u64 >= ch {
        return Err(Error::CharTooSmallForNewton { p: ch, r });
    }
    let mut e = vec![field.one()];
    for k in 1..=r {
        let mut acc = field.zero();
        for i in 1..=k {
            let term = field.mul(&e[k - i], &p[i]);
            acc = if i % 2 == 1 { field.add(&acc, &term) } else { field.sub(&acc, &term) };
        }
        e.push(field.div(&acc, &field.from_i64(k as i64))?);
    }
    Ok(e)
}

fn check_inputs(f: &UniPoly, h: &UniPoly) -> Result<()> {
    let field = f.field();
    if f.degree().is_none() || !field.is_one(&f.lc()) {
        return Err(Error::HypothesisViolated("f must be monic".into()));
    }
    if f.field() != h.field() {
        return Err(Error::SpecMismatch);
    }
    if f.degree() == Some(0) {
        return Ok(());
    }
    if h.is_zero() || !f.gcd(h)?.is_one() {
        return Err(Error::HVanishesAtRoot);
    }
    Ok(())
}

/// `Esym_r(g(alpha_1)/h(alpha_1), ..., g(alpha_k)/h(alpha_k))` over the roots
/// of the monic `f`, through power sums `tr((g(M) h(M)^-1)^j)` of the
/// companion matrix `M`.
pub fn esym_at_roots(f: &UniPoly, g: &UniPoly, h: &UniPoly, r: usize) -> Result<Elem> {
    check_inputs(f, h)?;
    if f.field() != g.field() {
        return Err(Error::SpecMismatch);
    }
    let field = f.field();
    let k = f.degree().unwrap();
    if r > k {
        return Ok(field.zero());
    }
    if r == 0 {
        return Ok(field.one());
    }
    let u = g.rem(f)?.mul(&h.rem(f)?.inv_mod(f)?).rem(f)?;
    let mut p = vec![field.zero()];
    let mut pw = UniPoly::one(field);
    for _ in 1..=r {
        pw = pw.mul(&u).rem(f)?;
        p.push(trace_mod(&pw, f)?);
    }
    Ok(newton_esym(field, &p, r)?.pop().unwrap())
}
