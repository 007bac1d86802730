//! Truncated power series and root descriptors.

use std::fmt;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::Elem;

/// A power series known up to total degree `order` (inclusive).
#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeriesTrunc {
    poly: Poly,
    order: u32,
}

impl PowerSeriesTrunc {
    pub fn new(poly: Poly, order: u32) -> Self {
        PowerSeriesTrunc {
            poly: poly.truncate(order),
            order,
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        PowerSeriesTrunc::new(self.poly.add(&other.poly), order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        PowerSeriesTrunc::new(self.poly.sub(&other.poly), order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        PowerSeriesTrunc {
            poly: self.poly.mul_trunc(&other.poly, order),
            order,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let one = PowerSeriesTrunc::new(Poly::one(self.poly.field()), self.order);
        (0..e).fold(one, |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inv(&self) -> Result<Self> {
        let f = self.poly.field();
        let c = self.poly.constant_term();
        if f.is_zero(&c) {
            return Err(Error::NonUnitConstantTerm);
        }
        let c_inv = f.inv(&c)?;
        // 1/s = c^-1 * sum_k (1 - s/c)^k, the k-th term has degree >= k
        let u = PowerSeriesTrunc::new(Poly::one(f).sub(&self.poly.scale(&c_inv)), self.order);
        let mut acc = PowerSeriesTrunc::new(Poly::one(f), self.order);
        let mut pw = acc.clone();
        for _ in 0..self.order {
            pw = pw.mul(&u);
            if pw.poly.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(PowerSeriesTrunc::new(acc.poly.scale(&c_inv), self.order))
    }
}

impl fmt::Display for PowerSeriesTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(deg {})", self.poly, self.order + 1)
    }
}

impl fmt::Debug for PowerSeriesTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Root data: constant term `alpha`, co-multiplicity `e` and the p-adic
/// exponent `ell` (total multiplicity `p^ell * e`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSpec {
    pub alpha: Elem,
    pub e: u32,
    pub ell: u32,
}

impl RootSpec {
    pub fn simple(alpha: Elem) -> Self {
        RootSpec { alpha, e: 1, ell: 0 }
    }

    /// Checks `e >= 1`, `gcd(p, e) = 1`, and `ell = 0` in characteristic 0.
    pub fn validate(&self, characteristic: u64) -> Result<()> {
        if self.e == 0 {
            return Err(Error::HypothesisViolated("multiplicity e must be >= 1".into()));
        }
        if characteristic == 0 {
            if self.ell != 0 {
                return Err(Error::HypothesisViolated(
                    "ell must be 0 in characteristic 0".into(),
                ));
            }
        } else if self.e as u64 % characteristic == 0 {
            return Err(Error::CharDividesE);
        }
        Ok(())
    }

    pub fn multiplicity(&self, characteristic: u64) -> u64 {
        characteristic.max(1).pow(self.ell) * self.e as u64
    }
}
