//! Sparse multivariate polynomials with exact coefficients.
//!
//! [`Poly`] is the oracle representation: every circuit construction is
//! checked against operations here.

mod gcd;
mod resultant;
mod series;
mod text;
mod var;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;

pub use gcd::{content_in, gcd, gcd_univariate, squarefree_decomposition, squarefree_part};
pub use resultant::{bezout_univariate, discriminant, resultant, resultant_unchecked};
pub use series::{PowerSeriesTrunc, RootSpec};
pub use var::{Monomial, Var};

use crate::error::{Error, Result};
use crate::field::{Elem, Field, UniPoly};

/// Total degree with a dedicated value for the zero polynomial.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }

    /// Finite degree, treating the zero polynomial as degree 0.
    pub fn or_zero(self) -> u32 {
        self.finite().unwrap_or(0)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Finite(d) => write!(f, "{d}"),
            Degree::MinusInfinity => f.write_str("-inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    terms: BTreeMap<Monomial, Elem>,
}

/// Result of pseudo-division in a main variable:
/// `multiplier * a = q * b + r` with `deg_v(r) < deg_v(b)`.
#[derive(Clone, Debug)]
pub struct PseudoDivision {
    pub q: Poly,
    pub r: Poly,
    pub multiplier: Poly,
}

pub type PolyValue = Poly;

impl Poly {
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::term(field, c, Monomial::one())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn from_i64(field: &Field, c: i64) -> Poly {
        Poly::constant(field, field.from_i64(c))
    }

    pub fn term(field: &Field, c: Elem, m: Monomial) -> Poly {
        let mut p = Poly::zero(field);
        if !field.is_zero(&c) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(field: &Field, v: Var) -> Poly {
        Poly::term(field, field.one(), Monomial::var(v, 1))
    }

    pub fn var_pow(field: &Field, v: Var, e: u32) -> Poly {
        Poly::term(field, field.one(), Monomial::var(v, e))
    }

    pub fn from_terms(field: &Field, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> Poly {
        let mut p = Poly::zero(field);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Elem)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term() == self.field.one()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(&Monomial::one())
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Greatest term in graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Elem)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|m| m.degree())
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    pub fn degree_in(&self, v: Var) -> Degree {
        self.terms
            .keys()
            .map(|m| m.exp(v))
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// Total degree in the variables accepted by `pred`.
    pub fn degree_where(&self, pred: impl Fn(Var) -> bool) -> Degree {
        self.terms
            .keys()
            .map(|m| m.degree_in(&pred))
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn x_vars(&self) -> Vec<Var> {
        self.vars().into_iter().filter(|v| v.is_x()).collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &Elem) -> Poly {
        if self.field.is_zero(c) {
            return Poly::zero(&self.field);
        }
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
                .filter(|(_, a)| !self.field.is_zero(a))
                .collect(),
        }
    }

    pub fn mul_term(&self, c: &Elem, m: &Monomial) -> Poly {
        let mut out = Poly::zero(&self.field);
        for (k, a) in &self.terms {
            out.add_term(k.mul(m), self.field.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let prod = f.mul(a, b);
                let e = acc.entry(ma.mul(mb)).or_insert_with(|| f.zero());
                *e = f.add(e, &prod);
            }
        }
        Poly::from_terms(f, acc)
    }

    /// Product, or `None` once more than `limit` distinct monomials have
    /// been produced (cancellation is not waited for).
    pub fn mul_limited(&self, other: &Poly, limit: usize) -> Option<Poly> {
        let f = &self.field;
        let rows: Vec<(&Monomial, &Elem)> = self.terms.iter().collect();
        let n = rows.len();
        // spread-out row order, so that dense products cross the limit early
        let mut stride = (n as f64 * 0.618) as usize | 1;
        while n > 1 && num_integer::gcd(stride, n) != 1 {
            stride += 2;
        }
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for i in 0..n {
            let (ma, a) = rows[(i * stride) % n.max(1)];
            for (mb, b) in &other.terms {
                let prod = f.mul(a, b);
                let e = acc.entry(ma.mul(mb)).or_insert_with(|| f.zero());
                *e = f.add(e, &prod);
            }
            if acc.len() > limit {
                return None;
            }
        }
        Some(Poly::from_terms(f, acc))
    }

    /// Product keeping only terms of total degree `<= cap`.
    pub fn mul_trunc(&self, other: &Poly, cap: u32) -> Poly {
        let f = &self.field;
        let mut acc: HashMap<Monomial, Elem> = HashMap::new();
        for (ma, a) in &self.terms {
            let da = ma.degree();
            for (mb, b) in &other.terms {
                if da + mb.degree() > cap {
                    continue;
                }
                let prod = f.mul(a, b);
                let e = acc.entry(ma.mul(mb)).or_insert_with(|| f.zero());
                *e = f.add(e, &prod);
            }
        }
        Poly::from_terms(f, acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact quotient; `NotDivisible` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Result<Poly> {
        let f = &self.field;
        let (lm, lc) = d.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = f.inv(lc)?;
        let mut rem = self.clone();
        let mut q = Poly::zero(f);
        while let Some((m, c)) = rem.leading_term() {
            let Some(qm) = m.div(lm) else {
                return Err(Error::NotDivisible);
            };
            let qc = f.mul(c, &lc_inv);
            rem = rem.sub(&d.mul_term(&qc, &qm));
            q.add_term(qm, qc);
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.exact_div(self).is_ok()
    }

    /// Coefficients with respect to `v`: `self = sum_i out[i] * v^i`.
    pub fn coeffs_in(&self, v: Var) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            let e = e as usize;
            while out.len() <= e {
                out.push(Poly::zero(&self.field));
            }
            out[e].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(field: &Field, v: Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero(field);
        for (i, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(v, i as u32);
            for (m, a) in &c.terms {
                out.add_term(m.mul(&vm), a.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v` (a polynomial in the others).
    pub fn lc_in(&self, v: Var) -> Poly {
        self.coeffs_in(v).pop().unwrap_or_else(|| Poly::zero(&self.field))
    }

    /// Coefficient of `v^i`.
    pub fn coeff_in(&self, v: Var, i: u32) -> Poly {
        let mut out = Poly::zero(&self.field);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if e == i {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Pseudo-division in `v`. When the leading coefficient of `b` is a
    /// constant this is ordinary division and the multiplier is 1.
    pub fn pseudo_divrem(&self, b: &Poly, v: Var) -> Result<PseudoDivision> {
        let f = &self.field;
        let db = b.degree_in(v).finite().ok_or(Error::DivisionByZero)?;
        let lcb = b.lc_in(v);
        let mut q = Poly::zero(f);
        let mut r = self.clone();
        let mut multiplier = Poly::one(f);
        if lcb.is_constant() {
            let inv = f.inv(&lcb.constant_term())?;
            while let Some(dr) = r.degree_in(v).finite().filter(|&d| d >= db) {
                let t = r.lc_in(v).scale(&inv).mul(&Poly::var_pow(f, v, dr - db));
                r = r.sub(&t.mul(b));
                q = q.add(&t);
            }
        } else {
            while let Some(dr) = r.degree_in(v).finite().filter(|&d| d >= db) {
                let t = r.lc_in(v).mul(&Poly::var_pow(f, v, dr - db));
                r = r.mul(&lcb).sub(&t.mul(b));
                q = q.mul(&lcb).add(&t);
                multiplier = multiplier.mul(&lcb);
            }
        }
        Ok(PseudoDivision { q, r, multiplier })
    }

    /// Whether `b` divides `self`, by pseudo-division in `v` followed by an
    /// exact check of the quotient.
    pub fn divisible_by(&self, b: &Poly, v: Var) -> Result<bool> {
        if b.is_zero() {
            return Ok(self.is_zero());
        }
        if b.degree_in(v) == Degree::Finite(0) {
            return Ok(self.exact_div(b).is_ok());
        }
        let pd = self.pseudo_divrem(b, v)?;
        if !pd.r.is_zero() {
            return Ok(false);
        }
        Ok(pd.multiplier.is_one() || pd.q.exact_div(&pd.multiplier).is_ok())
    }

    /// Evaluates at a full assignment.
    pub fn eval(&self, point: &HashMap<Var, Elem>) -> Result<Elem> {
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                let x = point
                    .get(&v)
                    .ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
                t = f.mul(&t, &f.pow(x, e as u64));
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitutes polynomials for variables (unmapped variables stay).
    pub fn substitute(&self, map: &BTreeMap<Var, Poly>) -> Result<Poly> {
        let f = &self.field;
        if map.values().any(|p| p.field != *f) {
            return Err(Error::SpecMismatch);
        }
        let mut powers: HashMap<(Var, u32), Poly> = HashMap::new();
        let mut out = Poly::zero(f);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(f, c.clone());
            let mut kept = Monomial::one();
            for &(v, e) in m.pairs() {
                match map.get(&v) {
                    Some(img) => {
                        let pw = powers
                            .entry((v, e))
                            .or_insert_with(|| img.pow(e))
                            .clone();
                        t = t.mul(&pw);
                    }
                    None => kept = kept.mul(&Monomial::var(v, e)),
                }
            }
            if !kept.is_one() {
                t = t.mul_term(&f.one(), &kept);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Substitutes a constant for one variable.
    pub fn subs_value(&self, v: Var, value: &Elem) -> Poly {
        let f = &self.field;
        let mut out = Poly::zero(f);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            out.add_term(rest, f.mul(c, &f.pow(value, e as u64)));
        }
        out
    }

    /// Partial derivative in `v`.
    pub fn derivative(&self, v: Var) -> Poly {
        self.hasse(v, 1)
    }

    /// Hasse derivative: coefficient of `z^i` in `self(v + z)`.
    pub fn hasse(&self, v: Var, i: u32) -> Poly {
        let f = &self.field;
        let mut out = Poly::zero(f);
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            if e < i {
                continue;
            }
            let b = binomial(BigInt::from(e), BigInt::from(i));
            let coef = f.mul(c, &f.from_bigint(&b));
            out.add_term(rest.mul(&Monomial::var(v, e - i)), coef);
        }
        out
    }

    /// Terms whose degree in `vars` equals `i`.
    pub fn hom_component(&self, vars: &[Var], i: u32) -> Poly {
        self.filter_terms(|m| m.degree_in(|v| vars.contains(&v)) == i)
    }

    /// Terms of total degree `<= d`.
    pub fn truncate(&self, d: u32) -> Poly {
        self.filter_terms(|m| m.degree() <= d)
    }

    /// Terms whose degree in `vars` is `<= d`.
    pub fn truncate_in(&self, vars: &[Var], d: u32) -> Poly {
        self.filter_terms(|m| m.degree_in(|v| vars.contains(&v)) <= d)
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Diagonal: keeps the terms `t^i y^i` (other variables pass through)
    /// and maps them to `t^i`.
    pub fn diagonal(&self, t: Var, y: Var) -> Poly {
        let mut out = Poly::zero(&self.field);
        for (m, c) in &self.terms {
            let (et, rest) = m.split_var(t);
            let (ey, rest) = rest.split_var(y);
            if et == ey {
                out.add_term(rest.mul(&Monomial::var(t, et)), c.clone());
            }
        }
        out
    }

    /// Divides by `v^k`; every term must be divisible.
    pub fn div_var_pow(&self, v: Var, k: u32) -> Result<Poly> {
        let mut out = Poly::zero(&self.field);
        let vk = Monomial::var(v, k);
        for (m, c) in &self.terms {
            out.add_term(m.div(&vk).ok_or(Error::NotDivisible)?, c.clone());
        }
        Ok(out)
    }

    /// Renames variables (must be injective on the variables present).
    pub fn rename(&self, map: impl Fn(Var) -> Var) -> Poly {
        let mut out = Poly::zero(&self.field);
        for (m, c) in &self.terms {
            let nm = Monomial::from_pairs(m.pairs().iter().map(|&(v, e)| (map(v), e)));
            out.add_term(nm, c.clone());
        }
        out
    }

    /// Scales so that the greatest term in graded lexicographic order has
    /// coefficient 1.
    pub fn normalize(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.field.inv(c).unwrap()),
        }
    }

    /// Makes the leading coefficient in `v` equal to 1 (it must be constant).
    pub fn monic_in(&self, v: Var) -> Result<Poly> {
        let lc = self.lc_in(v);
        if !lc.is_constant() || lc.is_zero() {
            return Err(Error::InvalidMap("leading coefficient is not a constant".into()));
        }
        Ok(self.scale(&self.field.inv(&lc.constant_term())?))
    }

    /// Maps coefficients into another field.
    pub fn map_coeffs(&self, target: &Field, map: impl Fn(&Elem) -> Elem) -> Poly {
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), map(c));
        }
        out
    }

    /// Univariate view in `v` (the only variable allowed).
    pub fn to_uni(&self, v: Var) -> Result<UniPoly> {
        let coeffs = self.coeffs_in(v);
        let mut out = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            if !c.is_constant() {
                return Err(Error::HypothesisViolated(format!("not univariate in {v}")));
            }
            out.push(c.constant_term());
        }
        Ok(UniPoly::new(&self.field, out))
    }

    pub fn from_uni(u: &UniPoly, v: Var) -> Poly {
        Poly::from_terms(
            u.field(),
            u.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(v, i as u32), c.clone())),
        )
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
