//! Variables and monomials.
//!
//! Variables are totally ordered `x1 < x2 < ... < w1 < w2 < ... < t < y < z < eps`.
//! Monomials store only the variables with a positive exponent.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

const W_BASE: u32 = 1 << 20;
const SPECIAL: u32 = 1 << 24;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub const T: Var = Var(SPECIAL);
    pub const Y: Var = Var(SPECIAL + 1);
    pub const Z: Var = Var(SPECIAL + 2);
    pub const EPS: Var = Var(SPECIAL + 3);

    /// `x_i`, `i >= 1`.
    pub fn x(i: u32) -> Var {
        assert!((1..W_BASE).contains(&i));
        Var(i)
    }

    /// `w_i`, `i >= 1`.
    pub fn w(i: u32) -> Var {
        assert!((1..SPECIAL - W_BASE).contains(&i));
        Var(W_BASE + i)
    }

    pub fn is_x(self) -> bool {
        self.0 < W_BASE
    }

    pub fn is_w(self) -> bool {
        (W_BASE..SPECIAL).contains(&self.0)
    }

    /// Index of an `x` or `w` variable.
    pub fn index(self) -> Option<u32> {
        if self.is_x() {
            Some(self.0)
        } else if self.is_w() {
            Some(self.0 - W_BASE)
        } else {
            None
        }
    }

    pub fn parse(name: &str) -> Result<Var> {
        let unknown = || Error::UnknownVariable(name.to_string());
        match name {
            "t" => Ok(Var::T),
            "y" => Ok(Var::Y),
            "z" => Ok(Var::Z),
            "eps" => Ok(Var::EPS),
            _ => {
                let (ctor, rest): (fn(u32) -> Var, &str) = if let Some(r) = name.strip_prefix('x') {
                    (Var::x, r)
                } else if let Some(r) = name.strip_prefix('w') {
                    (Var::w, r)
                } else {
                    return Err(unknown());
                };
                if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(unknown());
                }
                let i: u32 = rest.parse().map_err(|_| unknown())?;
                if i >= W_BASE {
                    return Err(unknown());
                }
                Ok(ctor(i))
            }
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::T => f.write_str("t"),
            Var::Y => f.write_str("y"),
            Var::Z => f.write_str("z"),
            Var::EPS => f.write_str("eps"),
            v if v.is_x() => write!(f, "x{}", v.0),
            v => write!(f, "w{}", v.0 - W_BASE),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse exponent vector, sorted by variable, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u32); 4]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: u32) -> Monomial {
        let mut m = Monomial::one();
        if e > 0 {
            m.0.push((v, e));
        }
        m
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Monomial {
        let mut m = Monomial::one();
        for (v, e) in pairs {
            m = m.mul(&Monomial::var(v, e));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Degree restricted to variables accepted by `pred`.
    pub fn degree_in(&self, pred: impl Fn(Var) -> bool) -> u32 {
        self.0.iter().filter(|(v, _)| pred(*v)).map(|(_, e)| e).sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(self.0.iter().map(|&(v, k)| (v, k * e)).filter(|p| p.1 > 0).collect())
    }

    /// `self / other` when it is a monomial.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.clone();
        for &(v, e) in other.0.iter() {
            let pos = out.0.iter().position(|(w, _)| *w == v)?;
            let have = out.0[pos].1;
            match have.cmp(&e) {
                Ordering::Less => return None,
                Ordering::Equal => {
                    out.0.remove(pos);
                }
                Ordering::Greater => out.0[pos].1 = have - e,
            }
        }
        Some(out)
    }

    /// Removes `v`, returning its exponent and the rest.
    pub fn split_var(&self, v: Var) -> (u32, Monomial) {
        let e = self.exp(v);
        let rest = Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect());
        (e, rest)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|(v, _)| *v)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order with `x1 > x2 > ... > eps`.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a[i].1.cmp(&b[j].1) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    o => return o,
                },
            }
        }
        (a.len() - i).cmp(&(b.len() - j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
