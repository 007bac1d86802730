//! Exact coefficient domains: rationals, prime fields, extension fields and
//! truncated Laurent jets in a formal `eps`.
//!
//! A [`Field`] is a cheap, shareable handle to an immutable [`FieldSpec`].
//! Elements are plain [`Elem`] values interpreted relative to a field; every
//! arithmetic entry point lives on [`Field`]. [`FieldElement`] bundles a value
//! with its field for callers that want field-checked arithmetic.

mod descriptor;
mod element;
pub mod factor;
mod jet;
pub mod unipoly;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

pub use descriptor::{make_field, make_field_seeded};
pub use element::FieldElement;
pub use jet::Jet;
pub use unipoly::UniPoly;

use crate::error::{Error, Result};

/// Default seed for randomized field construction (modulus search).
pub const DEFAULT_SEED: u64 = 0x5eed_f1e1d;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    Prime {
        p: u64,
    },
    /// `F_p[z] / (modulus)`; `modulus` is monic of degree `k`, ascending coefficients.
    Extension {
        p: u64,
        k: usize,
        modulus: Vec<u64>,
    },
    /// Laurent jets `sum c_i eps^(v+i)` over `base`, keeping `order` coefficients.
    Jet {
        base: Field,
        order: usize,
    },
}

#[derive(Debug, PartialEq, Eq)]
pub struct FieldSpec {
    kind: FieldKind,
}

/// Shared handle to a field specification.
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.kind == other.0.kind
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.descriptor())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

/// A field element in canonical form. Interpretation depends on the field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Rat(BigRational),
    Mod(u64),
    /// Coefficient vector of length `k`, ascending powers of the generator.
    Ext(Vec<u64>),
    Jet(Jet),
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn invmod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(p as i128) as u64)
}

impl Field {
    pub(crate) fn from_kind(kind: FieldKind) -> Field {
        Field(Arc::new(FieldSpec { kind }))
    }

    pub fn rationals() -> Field {
        Field::from_kind(FieldKind::Rationals)
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::from_kind(FieldKind::Prime { p }))
    }

    /// Extension `F_p[z]/(modulus)`; the modulus (ascending, monic) is checked
    /// for irreducibility with the univariate factorizer.
    pub fn extension_with_modulus(p: u64, modulus: Vec<u64>) -> Result<Field> {
        let base = Field::prime(p)?;
        let mut modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::ReducibleModulus(
                "modulus must be monic of degree >= 1".into(),
            ));
        }
        let m = UniPoly::new(&base, modulus.iter().map(|&c| Elem::Mod(c)).collect());
        if !factor::is_irreducible(&m)? {
            return Err(Error::ReducibleModulus(format!("{m:?}")));
        }
        let k = modulus.len() - 1;
        Ok(Field::from_kind(FieldKind::Extension { p, k, modulus }))
    }

    /// Extension of degree `k` with a modulus found by seeded random search.
    pub fn extension(p: u64, k: usize, seed: u64) -> Result<Field> {
        use rand::SeedableRng;
        if k == 0 {
            return Err(Error::UnsupportedDescriptor("extension degree 0".into()));
        }
        let base = Field::prime(p)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ (p << 8) ^ k as u64);
        loop {
            let mut coeffs: Vec<Elem> = (0..k).map(|_| base.random(&mut rng)).collect();
            coeffs.push(base.one());
            let cand = UniPoly::new(&base, coeffs);
            if factor::is_irreducible(&cand)? {
                let modulus = cand
                    .coeffs()
                    .iter()
                    .map(|c| match c {
                        Elem::Mod(v) => *v,
                        _ => unreachable!(),
                    })
                    .collect();
                return Ok(Field::from_kind(FieldKind::Extension { p, k, modulus }));
            }
        }
    }

    pub fn jet(base: &Field, order: usize) -> Result<Field> {
        if order == 0 {
            return Err(Error::UnsupportedDescriptor("jet order must be >= 1".into()));
        }
        if base.is_jet() {
            return Err(Error::UnsupportedDescriptor("nested jet fields".into()));
        }
        Ok(Field::from_kind(FieldKind::Jet {
            base: base.clone(),
            order,
        }))
    }

    pub fn kind(&self) -> &FieldKind {
        &self.0.kind
    }

    pub fn is_jet(&self) -> bool {
        matches!(self.0.kind, FieldKind::Jet { .. })
    }

    pub fn is_finite(&self) -> bool {
        matches!(
            self.0.kind,
            FieldKind::Prime { .. } | FieldKind::Extension { .. }
        )
    }

    /// Base field of a jet field.
    pub fn jet_base(&self) -> Option<(&Field, usize)> {
        match &self.0.kind {
            FieldKind::Jet { base, order } => Some((base, *order)),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            FieldKind::Rationals => 0,
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => *p,
            FieldKind::Jet { base, .. } => base.characteristic(),
        }
    }

    /// Degree over the prime field (1 for `F_p` and `Q`).
    pub fn extension_degree(&self) -> usize {
        match &self.0.kind {
            FieldKind::Extension { k, .. } => *k,
            _ => 1,
        }
    }

    /// Number of elements, `None` when infinite.
    pub fn size(&self) -> Option<BigUint> {
        match &self.0.kind {
            FieldKind::Prime { p } => Some(BigUint::from(*p)),
            FieldKind::Extension { p, k, .. } => Some(BigUint::from(*p).pow(*k as u32)),
            _ => None,
        }
    }

    /// Whether the field holds at least `n` distinct elements.
    pub fn has_at_least(&self, n: usize) -> bool {
        match self.size() {
            None => true,
            Some(q) => q >= BigUint::from(n),
        }
    }

    pub fn zero(&self) -> Elem {
        match &self.0.kind {
            FieldKind::Rationals => Elem::Rat(BigRational::zero()),
            FieldKind::Prime { .. } => Elem::Mod(0),
            FieldKind::Extension { k, .. } => Elem::Ext(vec![0; *k]),
            FieldKind::Jet { .. } => Elem::Jet(Jet::zero()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match &self.0.kind {
            FieldKind::Rationals => Elem::Rat(BigRational::from_integer(n.clone())),
            FieldKind::Prime { p } => Elem::Mod(reduce_bigint(n, *p)),
            FieldKind::Extension { p, k, .. } => {
                let mut v = vec![0; *k];
                v[0] = reduce_bigint(n, *p);
                Elem::Ext(v)
            }
            FieldKind::Jet { base, .. } => Elem::Jet(Jet::constant(base, base.from_bigint(n))),
        }
    }

    /// Embeds a rational number; fails in positive characteristic when the
    /// denominator vanishes.
    pub fn from_rational(&self, q: &BigRational) -> Result<Elem> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        self.div(&num, &den)
    }

    /// Embeds a base-field element into a jet field (identity otherwise).
    pub fn embed_base(&self, e: Elem) -> Elem {
        match &self.0.kind {
            FieldKind::Jet { base, .. } if !matches!(e, Elem::Jet(_)) => {
                Elem::Jet(Jet::constant(base, e))
            }
            _ => e,
        }
    }

    /// The formal variable `eps` of a jet field.
    pub fn eps(&self) -> Option<Elem> {
        self.jet_base()
            .map(|(base, _)| Elem::Jet(Jet::monomial(base, base.one(), 1)))
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Rat(r) => r.is_zero(),
            Elem::Mod(v) => *v == 0,
            Elem::Ext(v) => v.iter().all(|&c| c == 0),
            Elem::Jet(j) => j.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        *a == self.one()
    }

    /// Checks that `a` is a canonical element of this field.
    pub fn contains(&self, a: &Elem) -> bool {
        match (&self.0.kind, a) {
            (FieldKind::Rationals, Elem::Rat(_)) => true,
            (FieldKind::Prime { p }, Elem::Mod(v)) => v < p,
            (FieldKind::Extension { p, k, .. }, Elem::Ext(v)) => {
                v.len() == *k && v.iter().all(|c| c < p)
            }
            (FieldKind::Jet { base, order }, Elem::Jet(j)) => {
                j.coeffs.len() <= *order && j.coeffs.iter().all(|c| base.contains(c))
            }
            _ => false,
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (FieldKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (FieldKind::Prime { p }, Elem::Mod(x), Elem::Mod(y)) => {
                let s = x + y;
                Elem::Mod(if s >= *p { s - p } else { s })
            }
            (FieldKind::Extension { p, .. }, Elem::Ext(x), Elem::Ext(y)) => Elem::Ext(
                x.iter()
                    .zip(y)
                    .map(|(a, b)| {
                        let s = a + b;
                        if s >= *p {
                            s - p
                        } else {
                            s
                        }
                    })
                    .collect(),
            ),
            (FieldKind::Jet { base, order }, Elem::Jet(x), Elem::Jet(y)) => {
                Elem::Jet(x.add(y, base, *order))
            }
            _ => panic!("element does not belong to field {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&self.0.kind, a) {
            (FieldKind::Rationals, Elem::Rat(x)) => Elem::Rat(-x),
            (FieldKind::Prime { p }, Elem::Mod(x)) => Elem::Mod(if *x == 0 { 0 } else { p - x }),
            (FieldKind::Extension { p, .. }, Elem::Ext(x)) => {
                Elem::Ext(x.iter().map(|&c| if c == 0 { 0 } else { p - c }).collect())
            }
            (FieldKind::Jet { base, .. }, Elem::Jet(x)) => Elem::Jet(x.neg(base)),
            _ => panic!("element does not belong to field {self}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&self.0.kind, a, b) {
            (FieldKind::Rationals, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (FieldKind::Prime { p }, Elem::Mod(x), Elem::Mod(y)) => Elem::Mod(mulmod(*x, *y, *p)),
            (FieldKind::Extension { p, k, modulus }, Elem::Ext(x), Elem::Ext(y)) => {
                Elem::Ext(ext_mul(x, y, *p, *k, modulus))
            }
            (FieldKind::Jet { base, order }, Elem::Jet(x), Elem::Jet(y)) => {
                Elem::Jet(x.mul(y, base, *order))
            }
            _ => panic!("element does not belong to field {self}"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&self.0.kind, a) {
            (FieldKind::Rationals, Elem::Rat(x)) => Elem::Rat(x.recip()),
            (FieldKind::Prime { p }, Elem::Mod(x)) => Elem::Mod(invmod(*x, *p).unwrap()),
            (FieldKind::Extension { p, modulus, .. }, Elem::Ext(x)) => {
                Elem::Ext(ext_inv(x, *p, modulus))
            }
            (FieldKind::Jet { base, order }, Elem::Jet(x)) => Elem::Jet(x.inv(base, *order)?),
            _ => panic!("element does not belong to field {self}"),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: u64) -> Elem {
        let mut result = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    pub fn pow_big(&self, a: &Elem, e: &BigUint) -> Elem {
        let mut result = self.one();
        for i in (0..e.bits()).rev() {
            result = self.mul(&result, &result);
            if e.bit(i) {
                result = self.mul(&result, a);
            }
        }
        result
    }

    /// Signed exponent: a negative exponent inverts first.
    pub fn powi(&self, a: &Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// The `i`-th element of a fixed enumeration (`0, 1, 2, ...` embedded,
    /// and for extensions the base-`p` digits of `i` as coefficients).
    pub fn element(&self, i: u64) -> Elem {
        match &self.0.kind {
            FieldKind::Rationals | FieldKind::Jet { .. } => self.from_i64(i as i64),
            FieldKind::Prime { p } => Elem::Mod(i % p),
            FieldKind::Extension { p, k, .. } => {
                let mut v = vec![0; *k];
                let mut rest = i;
                for c in v.iter_mut() {
                    *c = rest % p;
                    rest /= p;
                }
                Elem::Ext(v)
            }
        }
    }

    /// `count` distinct elements from the enumeration, or `FieldTooSmall`.
    pub fn distinct_nodes(&self, count: usize) -> Result<Vec<Elem>> {
        if !self.has_at_least(count) {
            return Err(Error::FieldTooSmall {
                needed: count,
                field: self.descriptor(),
            });
        }
        Ok((0..count as u64).map(|i| self.element(i)).collect())
    }

    /// Uniform random element (for rationals: small integers in `[-50, 50]`).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        match &self.0.kind {
            FieldKind::Rationals => self.from_i64(rng.gen_range(-50..=50)),
            FieldKind::Prime { p } => Elem::Mod(rng.gen_range(0..*p)),
            FieldKind::Extension { p, k, .. } => {
                Elem::Ext((0..*k).map(|_| rng.gen_range(0..*p)).collect())
            }
            FieldKind::Jet { base, .. } => self.embed_base(base.random(rng)),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        loop {
            let e = self.random(rng);
            if !self.is_zero(&e) {
                return e;
            }
        }
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: &Elem) -> Elem {
        match self.characteristic() {
            0 => a.clone(),
            p => self.pow(a, p),
        }
    }

    /// Small-integer view of an element when it is one (used for printing and tests).
    pub fn to_i64(&self, a: &Elem) -> Option<i64> {
        match a {
            Elem::Rat(r) if r.is_integer() => r.numer().to_i64(),
            Elem::Mod(v) => Some(*v as i64),
            Elem::Ext(v) if v[1..].iter().all(|&c| c == 0) => Some(v[0] as i64),
            _ => None,
        }
    }

    /// Wraps a value as a field-carrying element.
    pub fn element_of(&self, value: Elem) -> FieldElement {
        FieldElement::new(self.clone(), value)
    }
}

pub(crate) fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = n.mod_floor(&m);
    r.to_u64().unwrap()
}

fn ext_mul(x: &[u64], y: &[u64], p: u64, k: usize, modulus: &[u64]) -> Vec<u64> {
    let mut prod = vec![0u128; 2 * k - 1];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + a as u128 * b as u128) % p as u128;
        }
    }
    let mut prod: Vec<u64> = prod.into_iter().map(|c| c as u64).collect();
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (j, &m) in modulus[..k].iter().enumerate() {
            let sub = mulmod(c, m, p);
            let slot = &mut prod[d - k + j];
            *slot = (*slot + p - sub) % p;
        }
    }
    prod.truncate(k);
    prod.resize(k, 0);
    prod
}

/// Inverse in `F_p[z]/(modulus)` by the extended Euclidean algorithm.
fn ext_inv(x: &[u64], p: u64, modulus: &[u64]) -> Vec<u64> {
    let k = modulus.len() - 1;
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let mut r0: Vec<u64> = modulus.to_vec();
    let mut r1: Vec<u64> = x.to_vec();
    trim(&mut r1);
    let mut s0: Vec<u64> = vec![];
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // q, r = divmod(r0, r1)
        let mut rem = r0.clone();
        let lc_inv = invmod(*r1.last().unwrap(), p).unwrap();
        let mut q = vec![0u64; rem.len().saturating_sub(r1.len()) + 1];
        while rem.len() >= r1.len() && !rem.is_empty() {
            let shift = rem.len() - r1.len();
            let c = mulmod(*rem.last().unwrap(), lc_inv, p);
            q[shift] = c;
            for (j, &b) in r1.iter().enumerate() {
                let s = mulmod(c, b, p);
                rem[shift + j] = (rem[shift + j] + p - s) % p;
            }
            trim(&mut rem);
        }
        // s2 = s0 - q*s1
        let mut qs = vec![0u64; q.len() + s1.len()];
        for (i, &a) in q.iter().enumerate() {
            for (j, &b) in s1.iter().enumerate() {
                qs[i + j] = (qs[i + j] + mulmod(a, b, p)) % p;
            }
        }
        let mut s2 = vec![0u64; qs.len().max(s0.len())];
        for (i, slot) in s2.iter_mut().enumerate() {
            let a = s0.get(i).copied().unwrap_or(0);
            let b = qs.get(i).copied().unwrap_or(0);
            *slot = (a + p - b) % p;
        }
        trim(&mut s2);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is a nonzero constant c; inverse = s0 / c
    let c_inv = invmod(r0[0], p).unwrap();
    let mut out: Vec<u64> = s0.iter().map(|&c| mulmod(c, c_inv, p)).collect();
    out.resize(k, 0);
    out
}

impl Elem {
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Elem::Rat(r) => Some(r),
            _ => None,
        }
    }
}

/// Helper for tests and generators: rational from numerator/denominator.
pub fn rat(n: i64, d: i64) -> Elem {
    Elem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
}
