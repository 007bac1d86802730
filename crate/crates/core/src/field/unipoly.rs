//! Dense univariate polynomials over a field: the kernel used by the
//! univariate factorizer, extension-field search and companion matrices.

use std::fmt;

use num_bigint::BigUint;

use super::{Elem, Field};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    /// Ascending coefficients; the last one is nonzero (empty for zero).
    coeffs: Vec<Elem>,
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if self.field.is_zero(c) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let c = self.field.format_elem(c);
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: Elem) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    pub fn one(field: &Field) -> UniPoly {
        UniPoly::constant(field, field.one())
    }

    /// `c * z^k`.
    pub fn monomial(field: &Field, c: Elem, k: usize) -> UniPoly {
        let mut v = vec![field.zero(); k];
        v.push(c);
        UniPoly::new(field, v)
    }

    /// The variable `z`.
    pub fn z(field: &Field) -> UniPoly {
        UniPoly::monomial(field, field.one(), 1)
    }

    /// `prod (z - r)`.
    pub fn from_roots(field: &Field, roots: &[Elem]) -> UniPoly {
        roots.iter().fold(UniPoly::one(field), |acc, r| {
            acc.mul(&UniPoly::new(field, vec![field.neg(r), field.one()]))
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.field.is_one(&self.coeffs[0])
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            f,
            (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(
            &self.field,
            self.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Elem) -> UniPoly {
        UniPoly::new(
            &self.field,
            self.coeffs.iter().map(|a| self.field.mul(a, c)).collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        UniPoly::new(f, out)
    }

    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let f = &self.field;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.coeffs.len() - 1;
        let lc_inv = f.inv(&d.lc())?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(f), self.clone()));
        }
        let mut q = vec![f.zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(&rem[i], &lc_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, b) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, b));
            }
            q[i - dd] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(f, q), UniPoly::new(f, rem)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; `NotDivisible` when the remainder is nonzero.
    pub fn exact_div(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.field.inv(&self.lc()).unwrap())
    }

    /// Monic gcd; `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &UniPoly) -> Result<(UniPoly, UniPoly, UniPoly)> {
        let f = &self.field;
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (UniPoly::one(f), UniPoly::zero(f));
        let (mut t0, mut t1) = (UniPoly::zero(f), UniPoly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = f.inv(&r0.lc())?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// Inverse modulo `m`; `DivisionByZero` if not coprime.
    pub fn inv_mod(&self, m: &UniPoly) -> Result<UniPoly> {
        let (g, s, _) = self.rem(m)?.ext_gcd(m)?;
        if !g.is_one() {
            return Err(Error::DivisionByZero);
        }
        s.rem(m)
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        UniPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn mul_mod(&self, other: &UniPoly, m: &UniPoly) -> UniPoly {
        self.mul(other).rem(m).unwrap()
    }

    pub fn pow_mod(&self, e: &BigUint, m: &UniPoly) -> UniPoly {
        let mut result = UniPoly::one(&self.field).rem(m).unwrap();
        let base = self.rem(m).unwrap();
        for i in (0..e.bits()).rev() {
            result = result.mul_mod(&result, m);
            if e.bit(i) {
                result = result.mul_mod(&base, m);
            }
        }
        result
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::one(&self.field), |acc, _| acc.mul(self))
    }

    /// Composition `self(g)`.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(&self.field), |acc, c| {
                acc.mul(g).add(&UniPoly::constant(&self.field, c.clone()))
            })
    }

    /// Applies `map` to every coefficient, moving into `target`.
    pub fn map_coeffs(&self, target: &Field, map: impl Fn(&Elem) -> Elem) -> UniPoly {
        UniPoly::new(target, self.coeffs.iter().map(map).collect())
    }
}
