//! Truncated Laurent jets `eps^val * (c_0 + c_1 eps + ...)`.
//!
//! A jet keeps `order` coefficients starting at its valuation, so the relative
//! precision is fixed while the valuation may be any integer.

use super::{Elem, Field};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Jet {
    pub val: i64,
    /// `coeffs[0]` is nonzero unless the jet is zero (empty).
    pub coeffs: Vec<Elem>,
}

impl Jet {
    pub fn zero() -> Jet {
        Jet {
            val: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant(base: &Field, c: Elem) -> Jet {
        Jet::monomial(base, c, 0)
    }

    pub fn monomial(base: &Field, c: Elem, val: i64) -> Jet {
        if base.is_zero(&c) {
            Jet::zero()
        } else {
            Jet {
                val,
                coeffs: vec![c],
            }
        }
    }

    pub(crate) fn normalize(base: &Field, mut val: i64, coeffs: Vec<Elem>, order: usize) -> Jet {
        let lead = coeffs.iter().position(|c| !base.is_zero(c));
        let Some(lead) = lead else {
            return Jet::zero();
        };
        val += lead as i64;
        let mut coeffs: Vec<Elem> = coeffs.into_iter().skip(lead).take(order).collect();
        while coeffs.last().is_some_and(|c| base.is_zero(c)) {
            coeffs.pop();
        }
        Jet { val, coeffs }
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Coefficient of `eps^exp` (zero outside the stored window).
    pub fn coeff(&self, base: &Field, exp: i64) -> Elem {
        let i = exp - self.val;
        if i < 0 || i as usize >= self.coeffs.len() {
            base.zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub(crate) fn add(&self, other: &Jet, base: &Field, order: usize) -> Jet {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let v = self.val.min(other.val);
        let coeffs = (0..order as i64)
            .map(|i| base.add(&self.coeff(base, v + i), &other.coeff(base, v + i)))
            .collect();
        Jet::normalize(base, v, coeffs, order)
    }

    pub(crate) fn neg(&self, base: &Field) -> Jet {
        Jet {
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| base.neg(c)).collect(),
        }
    }

    pub(crate) fn mul(&self, other: &Jet, base: &Field, order: usize) -> Jet {
        if self.is_zero() || other.is_zero() {
            return Jet::zero();
        }
        let n = (self.coeffs.len() + other.coeffs.len() - 1).min(order);
        let mut out = vec![base.zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                out[i + j] = base.add(&out[i + j], &base.mul(a, b));
            }
        }
        Jet::normalize(base, self.val + other.val, out, order)
    }

    pub(crate) fn inv(&self, base: &Field, order: usize) -> Result<Jet> {
        let c0_inv = base.inv(&self.coeffs[0])?;
        let mut out: Vec<Elem> = Vec::with_capacity(order);
        out.push(c0_inv.clone());
        for k in 1..order {
            let mut s = base.zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s = base.add(&s, &base.mul(&self.coeffs[j], &out[k - j]));
            }
            out.push(base.neg(&base.mul(&s, &c0_inv)));
        }
        Ok(Jet::normalize(base, -self.val, out, order))
    }
}
