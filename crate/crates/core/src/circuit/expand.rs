//! Expansion of circuits into explicit polynomials.
//!
//! Exact mode computes every gate as a sparse polynomial and fails once a
//! degree exceeds the cap. Truncated mode works modulo all monomials of
//! total degree above the cap (a ring homomorphism), using dense coefficient
//! vectors and a precomputed multiplication table.

use std::collections::HashMap;

use super::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, FieldKind};
use crate::poly::{Degree, Monomial, Poly, Var};

pub const DEFAULT_TERM_LIMIT: usize = 200_000;

/// Largest multiplication table built for dense truncated expansion.
const MAX_TABLE: usize = 6_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpandMode {
    Exact,
    Truncated,
}

/// Expands with the default term limit.
pub fn expand(c: &Circuit, cap: u32, mode: ExpandMode) -> Result<Poly> {
    expand_with_limit(c, cap, mode, DEFAULT_TERM_LIMIT)
}

pub fn expand_with_limit(c: &Circuit, cap: u32, mode: ExpandMode, term_limit: usize) -> Result<Poly> {
    match mode {
        ExpandMode::Exact => expand_exact(c, cap, term_limit),
        ExpandMode::Truncated => {
            let vars: Vec<Var> = c.vars().into_iter().collect();
            match DenseLayout::new(&vars, cap) {
                Some(layout) => match c.field().kind() {
                    FieldKind::Prime { p } => expand_dense(c, &layout, &ModP(*p)),
                    _ => expand_dense(c, &layout, &Generic(c.field().clone())),
                },
                None => expand_sparse_trunc(c, cap, term_limit),
            }
        }
    }
}

/// Index of the last gate reading each gate's value.
fn last_uses(c: &Circuit) -> Vec<usize> {
    let mut last: Vec<usize> = (0..c.gates().len()).collect();
    for (i, g) in c.gates().iter().enumerate() {
        for k in g.children() {
            last[k] = i;
        }
    }
    last[c.output()] = usize::MAX;
    last
}

fn release<T>(vals: &mut [Option<T>], g: &Gate, i: usize, last: &[usize]) {
    for k in g.children() {
        if last[k] == i {
            vals[k] = None;
        }
    }
}

fn expand_exact(c: &Circuit, cap: u32, term_limit: usize) -> Result<Poly> {
    let f = c.field();
    let last = last_uses(c);
    let mut vals: Vec<Option<Poly>> = vec![None; c.gates().len()];
    for (i, g) in c.gates().iter().enumerate() {
        let v = match g {
            Gate::Var(v) => Poly::var(f, *v),
            Gate::Const(k) => Poly::constant(f, k.clone()),
            Gate::Add(ch) => {
                let mut acc = Poly::zero(f);
                for (k, w) in ch {
                    acc = acc.add(&vals[*k].as_ref().unwrap().scale(w));
                }
                acc
            }
            Gate::Mul(ch) => {
                let mut acc = Poly::one(f);
                for k in ch {
                    let rhs = vals[*k].as_ref().unwrap();
                    // degrees add, except over jets where leading terms may cancel
                    if let (false, Degree::Finite(a), Degree::Finite(b)) = (f.is_jet(), acc.total_degree(), rhs.total_degree()) {
                        if a + b > cap {
                            return Err(Error::DegreeCapExceeded { cap, found: a + b });
                        }
                    }
                    acc = acc.mul_limited(rhs, term_limit).ok_or(Error::TermLimitExceeded(term_limit))?;
                    if let Degree::Finite(d) = acc.total_degree() {
                        if d > cap {
                            return Err(Error::DegreeCapExceeded { cap, found: d });
                        }
                    }
                }
                acc
            }
        };
        release(&mut vals, g, i, &last);
        vals[i] = Some(v);
    }
    Ok(vals[c.output()].take().unwrap())
}

fn expand_sparse_trunc(c: &Circuit, cap: u32, term_limit: usize) -> Result<Poly> {
    let f = c.field();
    let last = last_uses(c);
    let mut vals: Vec<Option<Poly>> = vec![None; c.gates().len()];
    for (i, g) in c.gates().iter().enumerate() {
        let v = match g {
            Gate::Var(v) => Poly::var(f, *v).truncate(cap),
            Gate::Const(k) => Poly::constant(f, k.clone()),
            Gate::Add(ch) => {
                let mut acc = Poly::zero(f);
                for (k, w) in ch {
                    acc = acc.add(&vals[*k].as_ref().unwrap().scale(w));
                }
                acc
            }
            Gate::Mul(ch) => {
                let mut acc = Poly::one(f);
                for k in ch {
                    acc = acc.mul_trunc(vals[*k].as_ref().unwrap(), cap);
                    if acc.num_terms() > term_limit {
                        return Err(Error::TermLimitExceeded(term_limit));
                    }
                }
                acc
            }
        };
        release(&mut vals, g, i, &last);
        vals[i] = Some(v);
    }
    Ok(vals[c.output()].take().unwrap())
}

trait Ring {
    type T: Clone;
    fn zero(&self) -> Self::T;
    fn one(&self) -> Self::T;
    fn is_zero(&self, a: &Self::T) -> bool;
    fn add_mul(&self, acc: &mut Self::T, a: &Self::T, b: &Self::T);
    fn from_elem(&self, e: &Elem) -> Self::T;
    fn to_elem(&self, a: &Self::T) -> Elem;
}

struct ModP(u64);

impl Ring for ModP {
    type T = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add_mul(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = (*acc + a * b) % self.0;
    }
    fn from_elem(&self, e: &Elem) -> u64 {
        match e {
            Elem::Mod(v) => *v,
            _ => unreachable!(),
        }
    }
    fn to_elem(&self, a: &u64) -> Elem {
        Elem::Mod(*a)
    }
}

struct Generic(Field);

impl Ring for Generic {
    type T = Elem;
    fn zero(&self) -> Elem {
        self.0.zero()
    }
    fn one(&self) -> Elem {
        self.0.one()
    }
    fn is_zero(&self, a: &Elem) -> bool {
        self.0.is_zero(a)
    }
    fn add_mul(&self, acc: &mut Elem, a: &Elem, b: &Elem) {
        *acc = self.0.add(acc, &self.0.mul(a, b));
    }
    fn from_elem(&self, e: &Elem) -> Elem {
        e.clone()
    }
    fn to_elem(&self, a: &Elem) -> Elem {
        a.clone()
    }
}

/// Monomials of total degree `<= cap` in `vars`, with a product table.
struct DenseLayout {
    vars: Vec<Var>,
    exps: Vec<Vec<u32>>,
    /// For each index `i`: pairs `(j, k)` with `m_i * m_j = m_k`.
    table: Vec<Vec<(u32, u32)>>,
}

impl DenseLayout {
    fn new(vars: &[Var], cap: u32) -> Option<DenseLayout> {
        let mut exps: Vec<Vec<u32>> = vec![vec![]];
        for _ in vars {
            let mut next = Vec::new();
            for e in &exps {
                let used: u32 = e.iter().sum();
                for k in 0..=cap - used {
                    let mut v = e.clone();
                    v.push(k);
                    next.push(v);
                }
            }
            exps = next;
            if exps.len() > MAX_TABLE {
                return None;
            }
        }
        let index: HashMap<&Vec<u32>, u32> = exps.iter().enumerate().map(|(i, e)| (e, i as u32)).collect();
        let degs: Vec<u32> = exps.iter().map(|e| e.iter().sum()).collect();
        let mut table = Vec::with_capacity(exps.len());
        let mut total = 0usize;
        for (i, ei) in exps.iter().enumerate() {
            let mut row = Vec::new();
            for (j, ej) in exps.iter().enumerate() {
                if degs[i] + degs[j] <= cap {
                    let s: Vec<u32> = ei.iter().zip(ej).map(|(a, b)| a + b).collect();
                    row.push((j as u32, index[&s]));
                }
            }
            total += row.len();
            if total > MAX_TABLE {
                return None;
            }
            table.push(row);
        }
        Some(DenseLayout {
            vars: vars.to_vec(),
            exps,
            table,
        })
    }

    fn var_index(&self, v: Var) -> Option<usize> {
        let pos = self.vars.iter().position(|w| *w == v)?;
        self.exps
            .iter()
            .position(|e| e.iter().enumerate().all(|(i, &k)| k == u32::from(i == pos)))
    }
}

fn dense_mul<R: Ring>(r: &R, layout: &DenseLayout, a: &[R::T], b: &[R::T]) -> Vec<R::T> {
    let mut out = vec![r.zero(); a.len()];
    for (i, ai) in a.iter().enumerate() {
        if r.is_zero(ai) {
            continue;
        }
        for &(j, k) in &layout.table[i] {
            let bj = &b[j as usize];
            if !r.is_zero(bj) {
                r.add_mul(&mut out[k as usize], ai, bj);
            }
        }
    }
    out
}

fn dense_pow<R: Ring>(r: &R, layout: &DenseLayout, a: &[R::T], mut e: usize) -> Vec<R::T> {
    let mut result: Option<Vec<R::T>> = None;
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(acc) => dense_mul(r, layout, &acc, &base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = dense_mul(r, layout, &base, &base);
        }
    }
    result.unwrap()
}

fn expand_dense<R: Ring>(c: &Circuit, layout: &DenseLayout, r: &R) -> Result<Poly> {
    let n = layout.exps.len();
    let last = last_uses(c);
    let mut vals: Vec<Option<Vec<R::T>>> = vec![None; c.gates().len()];
    for (i, g) in c.gates().iter().enumerate() {
        let v = match g {
            Gate::Var(v) => {
                let mut out = vec![r.zero(); n];
                if let Some(k) = layout.var_index(*v) {
                    out[k] = r.one();
                }
                out
            }
            Gate::Const(k) => {
                let mut out = vec![r.zero(); n];
                out[0] = r.from_elem(k);
                out
            }
            Gate::Add(ch) => {
                let mut out = vec![r.zero(); n];
                for (k, w) in ch {
                    let w = r.from_elem(w);
                    for (o, x) in out.iter_mut().zip(vals[*k].as_ref().unwrap()) {
                        if !r.is_zero(x) {
                            r.add_mul(o, x, &w);
                        }
                    }
                }
                out
            }
            Gate::Mul(ch) => {
                let mut counts: Vec<(usize, usize)> = Vec::new();
                for &k in ch {
                    match counts.iter_mut().find(|(g, _)| *g == k) {
                        Some(e) => e.1 += 1,
                        None => counts.push((k, 1)),
                    }
                }
                let mut acc: Option<Vec<R::T>> = None;
                for (k, e) in counts {
                    let pw = dense_pow(r, layout, vals[k].as_ref().unwrap(), e);
                    acc = Some(match acc {
                        None => pw,
                        Some(a) => dense_mul(r, layout, &a, &pw),
                    });
                }
                acc.unwrap_or_else(|| {
                    let mut out = vec![r.zero(); n];
                    out[0] = r.one();
                    out
                })
            }
        };
        release(&mut vals, g, i, &last);
        vals[i] = Some(v);
    }
    let out = vals[c.output()].take().unwrap();
    let f = c.field();
    Ok(Poly::from_terms(
        f,
        out.iter().enumerate().filter(|(_, x)| !r.is_zero(x)).map(|(i, x)| {
            let m = Monomial::from_pairs(
                layout
                    .vars
                    .iter()
                    .zip(&layout.exps[i])
                    .map(|(v, e)| (*v, *e)),
            );
            (m, r.to_elem(x))
        }),
    ))
}
