//! Field descriptors (`Q`, `Fp:7`, `Fq:5^2[:c0,c1,c2]`, `eps:<base>:<order>`)
//! and element literals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Elem, Field, FieldKind, Jet, DEFAULT_SEED};
use crate::error::{Error, Result};

/// Builds a field from its descriptor using the default seed.
pub fn make_field(descriptor: &str) -> Result<Field> {
    make_field_seeded(descriptor, DEFAULT_SEED)
}

/// Builds a field from its descriptor; `seed` drives the modulus search.
pub fn make_field_seeded(descriptor: &str, seed: u64) -> Result<Field> {
    let d = descriptor.trim();
    let bad = || Error::UnsupportedDescriptor(d.to_string());
    if d == "Q" {
        return Ok(Field::rationals());
    }
    if let Some(rest) = d.strip_prefix("eps:") {
        let (base, order) = rest.rsplit_once(':').ok_or_else(bad)?;
        let order: usize = order.trim().parse().map_err(|_| bad())?;
        let base = make_field_seeded(base, seed)?;
        return Field::jet(&base, order);
    }
    if let Some(rest) = d.strip_prefix("Fp:") {
        let p: u64 = rest.trim().parse().map_err(|_| bad())?;
        return Field::prime(p);
    }
    if let Some(rest) = d.strip_prefix("Fq:") {
        let (pk, modulus) = match rest.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (rest, None),
        };
        let (p, k) = pk.split_once('^').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let k: usize = k.trim().parse().map_err(|_| bad())?;
        return match modulus {
            None => Field::extension(p, k, seed),
            Some(m) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<i64>().map(|v| v.rem_euclid(p as i64) as u64))
                    .collect::<std::result::Result<Vec<u64>, _>>()
                    .map_err(|_| bad())?;
                if coeffs.len() != k + 1 {
                    return Err(bad());
                }
                Field::extension_with_modulus(p, coeffs)
            }
        };
    }
    Err(bad())
}

impl Field {
    /// Canonical descriptor; extensions include their modulus so the field
    /// can be rebuilt exactly.
    pub fn descriptor(&self) -> String {
        match self.kind() {
            FieldKind::Rationals => "Q".into(),
            FieldKind::Prime { p } => format!("Fp:{p}"),
            FieldKind::Extension { p, k, modulus } => {
                let m: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                format!("Fq:{p}^{k}:{}", m.join(","))
            }
            FieldKind::Jet { base, order } => format!("eps:{}:{order}", base.descriptor()),
        }
    }

    pub fn format_elem(&self, a: &Elem) -> String {
        match (self.kind(), a) {
            (_, Elem::Rat(r)) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (_, Elem::Mod(v)) => v.to_string(),
            (_, Elem::Ext(v)) => {
                if v[1..].iter().all(|&c| c == 0) {
                    v[0].to_string()
                } else {
                    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                    format!("[{}]", parts.join(","))
                }
            }
            (FieldKind::Jet { base, .. }, Elem::Jet(j)) => {
                let parts: Vec<String> = j.coeffs.iter().map(|c| base.format_elem(c)).collect();
                format!("<{}|{}>", j.val, parts.join(","))
            }
            _ => panic!("element does not belong to field {self}"),
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        let err = |msg: &str| Error::Parse {
            pos: 0,
            msg: format!("{msg}: `{s}`"),
        };
        match self.kind() {
            FieldKind::Jet { base, order } => {
                if let Some(inner) = s.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
                    let (v, cs) = inner.split_once('|').ok_or_else(|| err("bad jet literal"))?;
                    let val: i64 = v.trim().parse().map_err(|_| err("bad valuation"))?;
                    let coeffs = split_top_level(cs)
                        .into_iter()
                        .filter(|c| !c.trim().is_empty())
                        .map(|c| base.parse_elem(c))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Elem::Jet(Jet::normalize(base, val, coeffs, *order)))
                } else {
                    Ok(self.embed_base(base.parse_elem(s)?))
                }
            }
            FieldKind::Extension { p, k, .. } if s.starts_with('[') => {
                let inner = s
                    .strip_prefix('[')
                    .and_then(|r| r.strip_suffix(']'))
                    .ok_or_else(|| err("bad extension literal"))?;
                let mut v = inner
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<i64>()
                            .map(|x| x.rem_euclid(*p as i64) as u64)
                    })
                    .collect::<std::result::Result<Vec<u64>, _>>()
                    .map_err(|_| err("bad extension coefficient"))?;
                if v.len() > *k {
                    return Err(err("too many extension coefficients"));
                }
                v.resize(*k, 0);
                Ok(Elem::Ext(v))
            }
            _ => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| err("bad number"))?;
                let d: BigInt = d.parse().map_err(|_| err("bad number"))?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                self.from_rational(&BigRational::new(n, d))
            }
        }
    }
}

/// Splits on commas that are not nested inside brackets.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '<' => depth += 1,
            ']' | '>' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
