//! Sylvester resultants, discriminants and Bezout witnesses.
//!
//! The Sylvester matrix has the shifted coefficient rows of `Q` first and
//! then those of `P`, columns in ascending powers of the main variable, so
//! `resultant_y(y - a, y - b) = a - b`.

use super::{Poly, Var};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

fn sylvester(p: &Poly, q: &Poly, v: Var) -> Vec<Vec<Poly>> {
    let f = p.field();
    let pc = p.coeffs_in(v);
    let qc = q.coeffs_in(v);
    let m = pc.len() - 1;
    let n = qc.len() - 1;
    let size = m + n;
    let mut mat = vec![vec![Poly::zero(f); size]; size];
    for i in 0..m {
        for (j, c) in qc.iter().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..n {
        for (j, c) in pc.iter().enumerate() {
            mat[m + i][i + j] = c.clone();
        }
    }
    mat
}

/// Fraction-free determinant over the polynomial ring.
fn bareiss(mut m: Vec<Vec<Poly>>, field: &Field) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(field);
    }
    let mut sign = false;
    let mut prev = Poly::one(field);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Poly::zero(field);
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = Poly::zero(field);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Resultant in `v`; both inputs must have positive degree in `v`.
pub fn resultant(p: &Poly, q: &Poly, v: Var) -> Result<Poly> {
    if p.degree_in(v).or_zero() == 0 || q.degree_in(v).or_zero() == 0 {
        return Err(Error::DegreeZeroInput);
    }
    Ok(resultant_unchecked(p, q, v))
}

/// Sylvester determinant without the degree check (a degree-0 `q` gives
/// `q^deg(p)`, a zero input gives 0).
pub fn resultant_unchecked(p: &Poly, q: &Poly, v: Var) -> Poly {
    if p.is_zero() || q.is_zero() {
        return Poly::zero(p.field());
    }
    bareiss(sylvester(p, q, v), p.field())
}

/// `resultant(P, dP/dv)` without leading-coefficient normalization.
pub fn discriminant(p: &Poly, v: Var) -> Result<Poly> {
    if p.degree_in(v).or_zero() == 0 {
        return Err(Error::DegreeZeroInput);
    }
    Ok(resultant_unchecked(p, &p.derivative(v), v))
}

/// For univariate `p, q` in `v`, returns `(A, B, res)` with
/// `A*p + B*q = res`, obtained from the transposed Sylvester system.
pub fn bezout_univariate(p: &Poly, q: &Poly, v: Var) -> Result<(Poly, Poly, Poly)> {
    let f = p.field();
    let res = resultant(p, q, v)?;
    let m = p.degree_in(v).or_zero() as usize;
    let n = q.degree_in(v).or_zero() as usize;
    if res.is_zero() {
        return Ok((Poly::zero(f), Poly::zero(f), res));
    }
    let r = res.constant_term();
    let mat = sylvester(p, q, v);
    let size = m + n;
    // augmented M^T | r e_0
    let mut a: Vec<Vec<Elem>> = (0..size)
        .map(|i| {
            let mut row: Vec<Elem> = (0..size).map(|j| mat[j][i].constant_term()).collect();
            row.push(if i == 0 { r.clone() } else { f.zero() });
            row
        })
        .collect();
    let u = solve(&mut a, f)?;
    let bq = Poly::from_terms(
        f,
        (0..m).map(|i| (super::Monomial::var(v, i as u32), u[i].clone())),
    );
    let ap = Poly::from_terms(
        f,
        (0..n).map(|i| (super::Monomial::var(v, i as u32), u[m + i].clone())),
    );
    Ok((ap, bq, res))
}

/// Gauss-Jordan elimination on a square augmented system with a unique
/// solution.
pub(crate) fn solve(a: &mut [Vec<Elem>], f: &Field) -> Result<Vec<Elem>> {
    let n = a.len();
    for c in 0..n {
        let piv = (c..n)
            .find(|&r| !f.is_zero(&a[r][c]))
            .ok_or(Error::DivisionByZero)?;
        a.swap(c, piv);
        let inv = f.inv(&a[c][c])?;
        for x in a[c].iter_mut() {
            *x = f.mul(x, &inv);
        }
        for r in 0..n {
            if r != c && !f.is_zero(&a[r][c]) {
                let k = a[r][c].clone();
                for j in c..=n {
                    let s = f.mul(&k, &a[c][j]);
                    a[r][j] = f.sub(&a[r][j], &s);
                }
            }
        }
    }
    Ok(a.iter().map(|row| row[n].clone()).collect())
}
