//! Power-series roots of `P(x, y)` in `y`.
//!
//! All series are in the non-`y` variables and truncated by total degree.
//! Several variables are handled by grading: `x_i -> x_i * y` plays the
//! role of `t -> t*y` followed by `t = 1`, so the diagonal picks the terms
//! whose `y`-degree equals their `x`-degree.

mod construct;

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

pub use construct::{border_root_circuit, border_root_circuit_with_order, root_circuit, root_circuit_with_bounds};

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::poly::{Monomial, Poly, PowerSeriesTrunc, RootSpec, Var};

const Y: Var = Var::Y;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesVariant {
    /// Diagonal of the logarithmic-derivative rational function.
    Diagonal,
    /// `sum_m Coeff[H * (a y^e - P)^m] / a^(m+1)` with a Hasse derivative `H`;
    /// valid in every characteristic.
    HasseClosedForm,
    /// `sum_m Coeff[(a y - P)^m] / (m a^m)`; needs `m` invertible for `m <= 2d`.
    Char0ClosedForm,
}

impl FromStr for SeriesVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal" => Ok(SeriesVariant::Diagonal),
            "closedp" | "hasse" => Ok(SeriesVariant::HasseClosedForm),
            "closed0" | "char0" => Ok(SeriesVariant::Char0ClosedForm),
            other => Err(Error::UnsupportedDescriptor(format!("series variant `{other}`"))),
        }
    }
}

impl SeriesVariant {
    pub const ALL: [SeriesVariant; 3] = [
        SeriesVariant::Diagonal,
        SeriesVariant::HasseClosedForm,
        SeriesVariant::Char0ClosedForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesVariant::Diagonal => "diagonal",
            SeriesVariant::HasseClosedForm => "closedp",
            SeriesVariant::Char0ClosedForm => "closed0",
        }
    }
}

fn xdeg(m: &Monomial) -> u32 {
    m.degree() - m.exp(Y)
}

/// Product keeping `x`-degree `<= dx` and `y`-degree `<= dy`.
fn mul2(a: &Poly, b: &Poly, dx: u32, dy: u32) -> Poly {
    let f = a.field();
    let bt: Vec<(&Monomial, &Elem, u32, u32)> = b.terms().map(|(m, c)| (m, c, xdeg(m), m.exp(Y))).collect();
    let mut acc: HashMap<Monomial, Elem> = HashMap::new();
    for (ma, ca) in a.terms() {
        let (xa, ya) = (xdeg(ma), ma.exp(Y));
        if xa > dx || ya > dy {
            continue;
        }
        for &(mb, cb, xb, yb) in &bt {
            if xa + xb > dx || ya + yb > dy {
                continue;
            }
            let prod = f.mul(ca, cb);
            let e = acc.entry(ma.mul(mb)).or_insert_with(|| f.zero());
            *e = f.add(e, &prod);
        }
    }
    Poly::from_terms(f, acc)
}

fn trunc2(p: &Poly, dx: u32, dy: u32) -> Poly {
    p.filter_terms(|m| xdeg(m) <= dx && m.exp(Y) <= dy)
}

/// Inverse of a unit modulo `x`-degree `> dx` or `y`-degree `> dy`.
fn inv2(u: &Poly, dx: u32, dy: u32) -> Result<Poly> {
    let f = u.field();
    let c = u.constant_term();
    if f.is_zero(&c) {
        return Err(Error::NonUnitConstantTerm);
    }
    let ci = f.inv(&c)?;
    let w = Poly::one(f).sub(&trunc2(u, dx, dy).scale(&ci));
    let mut acc = Poly::one(f);
    let mut pw = Poly::one(f);
    for _ in 0..=(dx + dy) {
        pw = mul2(&pw, &w, dx, dy);
        if pw.is_zero() {
            break;
        }
        acc = acc.add(&pw);
    }
    Ok(acc.scale(&ci))
}

/// `x^a y^c -> x^a y^(c + |a|)`.
fn tilt(p: &Poly) -> Poly {
    Poly::from_terms(
        p.field(),
        p.terms().map(|(m, c)| {
            let k = xdeg(m);
            (m.mul(&Monomial::var(Y, k)), c.clone())
        }),
    )
}

/// Terms with `y`-degree equal to `x`-degree, with `y` dropped.
fn diagonal(p: &Poly) -> Poly {
    Poly::from_terms(
        p.field(),
        p.terms().filter_map(|(m, c)| {
            let (ey, rest) = m.split_var(Y);
            (ey == rest.degree()).then(|| (rest, c.clone()))
        }),
    )
}

/// `P(x, y + alpha)`.
fn shift(p: &Poly, alpha: &Elem) -> Result<Poly> {
    let f = p.field();
    if f.is_zero(alpha) {
        return Ok(p.clone());
    }
    let img = Poly::var(f, Y).add(&Poly::constant(f, alpha.clone()));
    p.substitute(&BTreeMap::from([(Y, img)]))
}

/// `P(x, phi)` modulo total degree `> d`; `phi` must not involve `y`.
pub fn compose_y(p: &Poly, phi: &Poly, d: u32) -> Poly {
    let f = p.field();
    let coeffs = p.coeffs_in(Y);
    let mut acc = Poly::zero(f);
    for c in coeffs.iter().rev() {
        acc = acc.mul_trunc(phi, d).add(&c.truncate(d));
    }
    acc
}

/// Coefficient of `y^k` in `P(0, y)`.
fn boundary_coeff(p: &Poly, k: u32) -> Elem {
    p.coeff(&Monomial::var(Y, k))
}

/// The unique root with `phi(0) = alpha`, by fixed-point iteration
/// `phi <- phi - P(x, phi) / P_y(0, alpha)`, which gains one degree per step.
pub fn newton_root_oracle(p: &Poly, alpha: &Elem, d: u32) -> Result<PowerSeriesTrunc> {
    let f = p.field();
    let ps = shift(p, alpha)?;
    if !f.is_zero(&ps.constant_term()) {
        return Err(Error::NoRoot);
    }
    let c = boundary_coeff(&ps, 1);
    if f.is_zero(&c) {
        return Err(Error::SingularRoot);
    }
    let ci = f.inv(&c)?;
    let mut phi = Poly::zero(f);
    for _ in 0..=d {
        let r = compose_y(&ps, &phi, d);
        if r.is_zero() {
            break;
        }
        phi = phi.sub(&r.scale(&ci));
    }
    if !compose_y(&ps, &phi, d).is_zero() {
        return Err(Error::NoRoot);
    }
    Ok(PowerSeriesTrunc::new(phi.add(&Poly::constant(f, alpha.clone())), d))
}

/// Root oracle for a root of multiplicity `e` (with `ell = 0`): the root is
/// simple for the Hasse derivative of order `e - 1`.
pub fn root_oracle(p: &Poly, root: &RootSpec, d: u32) -> Result<PowerSeriesTrunc> {
    let f = p.field();
    root.validate(f.characteristic())?;
    if root.ell != 0 {
        return Err(Error::HypothesisViolated("oracle needs ell = 0".into()));
    }
    newton_root_oracle(&p.hasse(Y, root.e - 1), &root.alpha, d)
}

fn check_root(p: &Poly, root: &RootSpec) -> Result<(Poly, u32)> {
    let f = p.field();
    root.validate(f.characteristic())?;
    let ps = shift(p, &root.alpha)?;
    let q = u32::try_from(root.multiplicity(f.characteristic()) / u64::from(root.e))
        .map_err(|_| Error::HypothesisViolated("p^ell too large".into()))?;
    // P(0, y) must vanish to order exactly q*e at y = 0
    for k in 0..q * root.e {
        if !f.is_zero(&boundary_coeff(&ps, k)) {
            return Err(Error::HypothesisViolated(format!(
                "P(0, y) does not vanish to order {} at the root",
                q * root.e
            )));
        }
    }
    if f.is_zero(&boundary_coeff(&ps, q * root.e)) {
        return Err(Error::NonUnitConstantTerm);
    }
    Ok((ps, q))
}

/// `phi_s^q` for the shifted polynomial via the diagonal identity.
fn diagonal_power(ps: &Poly, e: u32, q: u32, d: u32) -> Result<Poly> {
    let f = ps.field();
    let h = ps.hasse(Y, q);
    let u = tilt(ps).div_var_pow(Y, q * e)?;
    let ht = tilt(&h).div_var_pow(Y, q * (e - 1))?;
    let ratio = mul2(&ht, &inv2(&u, d, d)?, d, d);
    let ratio = ratio
        .mul_term(&f.inv(&f.from_i64(i64::from(e)))?, &Monomial::var(Y, q))
        .filter_terms(|m| m.exp(Y) <= d);
    Ok(diagonal(&ratio))
}

/// Hasse closed form summed over `m = 0..=m_max`; returns `phi_s^q`
/// truncated to degree `d`.
pub fn hasse_closed_sum(ps: &Poly, e: u32, q: u32, d: u32, m_max: u32) -> Result<Poly> {
    let f = ps.field();
    let a = boundary_coeff(ps, q * e);
    let ai = f.inv(&a)?;
    let target = |m: u32| -> Option<u32> { (q * (e * (m + 1))).checked_sub(2 * q) };
    let ymax = target(m_max).unwrap_or(0);
    let g = trunc2(&Poly::term(f, a.clone(), Monomial::var(Y, q * e)).sub(ps), d, ymax);
    let h = trunc2(&ps.hasse(Y, q), d, ymax).scale(&f.inv(&f.from_i64(i64::from(e)))?);
    let mut gm = Poly::one(f);
    let mut out = Poly::zero(f);
    let mut scale = ai.clone();
    for m in 0..=m_max {
        if m > 0 {
            gm = mul2(&gm, &g, d, ymax);
            scale = f.mul(&scale, &ai);
        }
        if let Some(k) = target(m) {
            let term = mul2(&h, &gm, d, k).coeff_in(Y, k);
            out = out.add(&term.scale(&scale));
        }
    }
    Ok(out)
}

/// Default cutoff for the Hasse closed form.
pub fn hasse_cutoff(e: u32, q: u32, d: u32) -> u32 {
    2 * e * (d + q)
}

/// Characteristic-zero closed form summed over `m = 1..=m_max`.
pub fn char0_closed_sum(ps: &Poly, e: u32, d: u32, m_max: u32) -> Result<Poly> {
    let f = ps.field();
    let p = f.characteristic();
    if p != 0 && u64::from(m_max) >= p {
        return Err(Error::CharacteristicTooSmall { p, degree: m_max });
    }
    let simple = ps.hasse(Y, e - 1);
    let a = boundary_coeff(&simple, 1);
    if f.is_zero(&a) {
        return Err(Error::SingularRoot);
    }
    let ymax = m_max.saturating_sub(1);
    let g = trunc2(&Poly::term(f, a.clone(), Monomial::var(Y, 1)).sub(&simple), d, ymax);
    let mut gm = Poly::one(f);
    let mut out = Poly::zero(f);
    let ai = f.inv(&a)?;
    let mut apow = f.one();
    for m in 1..=m_max {
        gm = mul2(&gm, &g, d, ymax);
        apow = f.mul(&apow, &ai);
        let w = f.mul(&apow, &f.inv(&f.from_i64(i64::from(m)))?);
        out = out.add(&gm.coeff_in(Y, m - 1).scale(&w));
    }
    Ok(out)
}

/// The root lifted from `root.alpha`, to total degree `d`.
pub fn furstenberg_series(p: &Poly, root: &RootSpec, d: u32, variant: SeriesVariant) -> Result<PowerSeriesTrunc> {
    if root.ell != 0 {
        return Err(Error::HypothesisViolated(
            "ell > 0 gives a p-power of the root; use charp_root_power".into(),
        ));
    }
    let f = p.field();
    let (ps, _) = check_root(p, root)?;
    let e = root.e;
    let phi = match variant {
        SeriesVariant::Diagonal => diagonal_power(&ps, e, 1, d)?,
        SeriesVariant::HasseClosedForm => hasse_closed_sum(&ps, e, 1, d, hasse_cutoff(e, 1, d))?,
        SeriesVariant::Char0ClosedForm => char0_closed_sum(&ps, e, d, 2 * d)?,
    };
    Ok(PowerSeriesTrunc::new(phi.add(&Poly::constant(f, root.alpha.clone())), d))
}

/// `phi^(p^ell)` to degree `d` for a root of multiplicity `p^ell * e`.
pub fn charp_root_power(p: &Poly, root: &RootSpec, d: u32, variant: SeriesVariant) -> Result<PowerSeriesTrunc> {
    let f = p.field();
    let (ps, q) = check_root(p, root)?;
    let e = root.e;
    let phi_q = match variant {
        SeriesVariant::Diagonal => diagonal_power(&ps, e, q, d)?,
        SeriesVariant::HasseClosedForm => hasse_closed_sum(&ps, e, q, d, hasse_cutoff(e, q, d))?,
        SeriesVariant::Char0ClosedForm => {
            return Err(Error::HypothesisViolated(
                "the characteristic-zero form does not apply to p-th powers".into(),
            ))
        }
    };
    // (alpha + phi_s)^q = alpha^q + phi_s^q in characteristic p
    let shift = f.pow(&root.alpha, u64::from(q));
    Ok(PowerSeriesTrunc::new(phi_q.add(&Poly::constant(f, shift)), d))
}

/// `P(x, phi) = 0` modulo degree `> d`.
pub fn is_root_to_order(p: &Poly, phi: &Poly, d: u32) -> bool {
    compose_y(p, phi, d).is_zero()
}
