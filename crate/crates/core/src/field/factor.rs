//! Univariate factorization over finite fields (squarefree, distinct-degree
//! and equal-degree splitting), roots, embeddings and splitting fields.

use num_bigint::BigUint;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{mulmod, Elem, Field, FieldKind, UniPoly, DEFAULT_SEED};
use crate::error::{Error, Result};

/// Result of factoring: `lc * prod f_i^{m_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniFactorization {
    pub lc: Elem,
    pub factors: Vec<(UniPoly, usize)>,
}

impl UniFactorization {
    pub fn reassemble(&self, field: &Field) -> UniPoly {
        self.factors.iter().fold(
            UniPoly::constant(field, self.lc.clone()),
            |acc, (f, m)| acc.mul(&f.pow(*m as u32)),
        )
    }
}

fn q_of(field: &Field) -> Result<BigUint> {
    field.size().ok_or(Error::InfiniteField)
}

fn pth_root_elem(field: &Field, a: &Elem) -> Elem {
    let k = field.extension_degree() as u32;
    let e = BigUint::from(field.characteristic()).pow(k - 1);
    field.pow_big(a, &e)
}

/// Squarefree decomposition of a monic polynomial over a finite field.
pub fn squarefree_uni(f: &UniPoly) -> Result<Vec<(UniPoly, usize)>> {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    let mut c = f.gcd(&f.derivative())?;
    let mut w = f.exact_div(&c)?;
    let mut i = 1;
    while w.degree() != Some(0) {
        let y = w.gcd(&c)?;
        let fac = w.exact_div(&y)?;
        if fac.degree() != Some(0) {
            out.push((fac.monic(), i));
        }
        c = c.exact_div(&y)?;
        w = y;
        i += 1;
    }
    if c.degree() != Some(0) && p > 0 {
        let coeffs: Vec<Elem> = c
            .coeffs()
            .iter()
            .step_by(p)
            .map(|a| pth_root_elem(&field, a))
            .collect();
        let root = UniPoly::new(&field, coeffs).monic();
        for (g, m) in squarefree_uni(&root)? {
            out.push((g, m * p));
        }
    }
    out.sort_by_key(|(_, m)| *m);
    Ok(out)
}

/// Distinct-degree splitting of a squarefree monic polynomial.
pub fn distinct_degree(f: &UniPoly) -> Result<Vec<(UniPoly, usize)>> {
    let field = f.field().clone();
    let q = q_of(&field)?;
    let z = UniPoly::z(&field);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = z.clone();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.pow_mod(&q, &rest);
        let g = rest.gcd(&h.sub(&z))?;
        if !g.is_one() {
            rest = rest.exact_div(&g)?;
            h = h.rem(&rest)?;
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    Ok(out)
}

/// Splits a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(f: &UniPoly, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<UniPoly>> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == d {
        return Ok(vec![f.clone()]);
    }
    let field = f.field().clone();
    let q = q_of(&field)?;
    let p = field.characteristic();
    loop {
        let a = UniPoly::new(&field, (0..n).map(|_| field.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            let m = field.extension_degree() * d;
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..m {
                t = t.mul_mod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - 1u32) / 2u32;
            a.pow_mod(&e, f).sub(&UniPoly::one(&field))
        };
        let g = f.gcd(&b)?;
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let h = f.exact_div(&g)?.monic();
            let mut out = equal_degree(&g, d, rng)?;
            out.extend(equal_degree(&h, d, rng)?);
            return Ok(out);
        }
    }
}

/// Complete factorization with an explicit seed for the random splitting.
pub fn factor_seeded(f: &UniPoly, seed: u64) -> Result<UniFactorization> {
    let field = f.field().clone();
    if !field.is_finite() {
        return Err(Error::InfiniteField);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let lc = f.lc();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (g, m) in squarefree_uni(&f.monic())? {
        for (h, d) in distinct_degree(&g)? {
            for irr in equal_degree(&h, d, &mut rng)? {
                factors.push((irr.monic(), m));
            }
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| {
        (a.degree(), a.coeffs(), ma).cmp(&(b.degree(), b.coeffs(), mb))
    });
    Ok(UniFactorization { lc, factors })
}

pub fn factor(f: &UniPoly) -> Result<UniFactorization> {
    factor_seeded(f, DEFAULT_SEED)
}

/// Irreducibility test: no factor of degree at most `n/2`.
pub fn is_irreducible(f: &UniPoly) -> Result<bool> {
    let field = f.field().clone();
    let q = q_of(&field)?;
    let n = match f.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let f = f.monic();
    let z = UniPoly::z(&field);
    let mut h = z.clone();
    for _ in 1..=n / 2 {
        h = h.pow_mod(&q, &f);
        if !f.gcd(&h.sub(&z))?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Distinct roots in the coefficient field, sorted.
pub fn roots(f: &UniPoly) -> Result<Vec<Elem>> {
    let fac = factor(f)?;
    let field = f.field();
    let mut out: Vec<Elem> = fac
        .factors
        .iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| field.neg(&g.coeff(0)))
        .collect();
    out.sort();
    Ok(out)
}

/// Field embedding `src -> dst` between finite fields of the same
/// characteristic, determined by the image of the generator of `src`.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: Field,
    dst: Field,
    /// Images of `1, g, ..., g^{k-1}` in `dst`.
    basis: Vec<Elem>,
}

impl Embedding {
    pub fn identity(field: &Field) -> Embedding {
        let gen = match field.kind() {
            FieldKind::Extension { k, .. } if *k > 1 => {
                let mut v = vec![0; *k];
                v[1] = 1;
                Some(Elem::Ext(v))
            }
            _ => None,
        };
        Embedding::with_generator(field, field, gen)
    }

    fn with_generator(src: &Field, dst: &Field, gen: Option<Elem>) -> Embedding {
        let k = src.extension_degree();
        let mut basis = vec![dst.one()];
        if let Some(g) = gen {
            for i in 1..k {
                basis.push(dst.mul(&basis[i - 1], &g));
            }
        }
        Embedding {
            src: src.clone(),
            dst: dst.clone(),
            basis,
        }
    }

    /// Embedding of `src` into `dst` (degrees must divide), sending the
    /// generator of `src` to a root of its modulus in `dst`.
    pub fn new(src: &Field, dst: &Field) -> Result<Embedding> {
        if src == dst {
            return Ok(Embedding::identity(src));
        }
        if src.characteristic() != dst.characteristic()
            || dst.extension_degree() % src.extension_degree() != 0
        {
            return Err(Error::SpecMismatch);
        }
        match src.kind() {
            FieldKind::Prime { .. } => Ok(Embedding::with_generator(src, dst, None)),
            FieldKind::Extension { modulus, .. } => {
                let m = UniPoly::new(dst, modulus.iter().map(|&c| dst.from_i64(c as i64)).collect());
                let r = roots(&m)?.into_iter().next().ok_or(Error::SpecMismatch)?;
                Ok(Embedding::with_generator(src, dst, Some(r)))
            }
            _ => Err(Error::InfiniteField),
        }
    }

    pub fn src(&self) -> &Field {
        &self.src
    }

    pub fn dst(&self) -> &Field {
        &self.dst
    }

    pub fn embed(&self, a: &Elem) -> Elem {
        let digits: Vec<u64> = match a {
            Elem::Mod(v) => vec![*v],
            Elem::Ext(v) => v.clone(),
            _ => panic!("embedding applies to finite fields"),
        };
        let mut acc = self.dst.zero();
        for (d, b) in digits.iter().zip(&self.basis) {
            if *d != 0 {
                acc = self.dst.add(&acc, &self.dst.mul(&self.dst.from_i64(*d as i64), b));
            }
        }
        acc
    }

    /// Preimage of `a`, or `None` when `a` lies outside the image.
    pub fn pullback(&self, a: &Elem) -> Option<Elem> {
        let p = self.dst.characteristic();
        let coords = |e: &Elem| -> Vec<u64> {
            match e {
                Elem::Mod(v) => vec![*v],
                Elem::Ext(v) => v.clone(),
                _ => unreachable!(),
            }
        };
        let rows = self.dst.extension_degree();
        let k = self.basis.len();
        // augmented matrix rows x (k + 1)
        let mut m = vec![vec![0u64; k + 1]; rows];
        for (j, b) in self.basis.iter().enumerate() {
            for (i, c) in coords(b).into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        for (i, c) in coords(a).into_iter().enumerate() {
            m[i][k] = c;
        }
        let sol = solve_mod_p(m, k, p)?;
        Some(match self.src.kind() {
            FieldKind::Prime { .. } => Elem::Mod(sol[0]),
            _ => Elem::Ext(sol),
        })
    }
}

/// Solves an augmented system over `F_p`; `None` if inconsistent.
fn solve_mod_p(mut m: Vec<Vec<u64>>, k: usize, p: u64) -> Option<Vec<u64>> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = super::invmod(m[r][c], p).unwrap();
        for x in m[r].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..=k {
                    let s = mulmod(f, m[r][j], p);
                    m[i][j] = (m[i][j] + p - s) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| row[k] != 0) {
        return None;
    }
    let mut sol = vec![0u64; k];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][k];
    }
    Some(sol)
}

/// Smallest extension of `f`'s field (degree = lcm of the irreducible factor
/// degrees) over which `f` splits, with the embedding of the base field.
pub fn splitting_field(f: &UniPoly, seed: u64) -> Result<Embedding> {
    let field = f.field().clone();
    let fac = factor_seeded(f, seed)?;
    let lcm = fac
        .factors
        .iter()
        .fold(1usize, |acc, (g, _)| acc.lcm(&g.degree().unwrap()));
    if lcm == 1 {
        return Ok(Embedding::identity(&field));
    }
    let dst = Field::extension(
        field.characteristic(),
        field.extension_degree() * lcm,
        seed,
    )?;
    Embedding::new(&field, &dst)
}
