//! Factoring polynomials monic in `y` with a squarefree boundary at `t = 0`
//! by lifting boundary roots and recombining subsets.

use super::generator::GeneratorSpec;
use crate::error::{Error, Result};
use crate::factor::{boundary, pullback_poly, root_family, subset_product, RootFamily};
use crate::field::UniPoly;
use crate::poly::{Poly, Var};

const Y: Var = Var::Y;
const T: Var = Var::T;

/// Whether `f` divides `g`, by exact division with `y` as main variable.
pub fn divisibility_test(f: &Poly, g: &Poly, y: Var) -> bool {
    if f.is_zero() {
        return g.is_zero();
    }
    g.divisible_by(f, y).unwrap_or(false)
}

/// Lexicographic `k`-subsets of `items`.
fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Whether `prod_{i in S} (y - alpha_i)` has base-field coefficients.
fn boundary_in_base(fam: &RootFamily, s: &[usize]) -> bool {
    let k = fam.field();
    let mut acc = UniPoly::one(k);
    for &i in s {
        acc = acc.mul(&UniPoly::new(k, vec![k.neg(&fam.alphas[i]), k.one()]));
    }
    acc.coeffs().iter().all(|c| fam.embedding.pullback(c).is_some())
}

/// Minimal subsets first; `None` when the precision was insufficient.
fn recombine(g: &Poly, fam: &RootFamily) -> Option<Vec<Poly>> {
    let mut remaining: Vec<usize> = (0..fam.alphas.len()).collect();
    let mut cur = g.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while !remaining.is_empty() {
        if size > remaining.len() {
            return None;
        }
        let mut found = None;
        for s in subsets(&remaining, size) {
            if !boundary_in_base(fam, &s) {
                continue;
            }
            let Some(q) = pullback_poly(&subset_product(fam, &s), &fam.embedding) else {
                continue;
            };
            if let Ok(rest) = cur.exact_div(&q) {
                found = Some((s, q, rest));
                break;
            }
        }
        match found {
            Some((s, q, rest)) => {
                remaining.retain(|i| !s.contains(i));
                out.push(q);
                cur = rest;
            }
            None => size += 1,
        }
    }
    cur.is_constant().then_some(out)
}

/// Irreducible factors of `G`, monic in `y`, over the coefficient field.
/// Variables other than `t, y` are carried as coefficients; `G(., 0, y)`
/// must be a squarefree univariate.
pub fn bivariate_base_factorize(g: &Poly, seed: u64) -> Result<Vec<Poly>> {
    let lc = g.lc_in(Y);
    if !lc.is_constant() || lc.is_zero() {
        return Err(Error::HypothesisViolated("not monic in y".into()));
    }
    let g = g.scale(&g.field().inv(&lc.constant_term())?);
    let g0 = boundary(&g)?;
    if !g0.gcd(&g0.derivative())?.is_one() {
        return Err(Error::NotSquarefreeAtZero);
    }
    match g0.degree() {
        Some(0) => return Ok(Vec::new()),
        Some(1) => return Ok(vec![g]),
        _ => {}
    }
    let d = g.degree_in(T).or_zero() + 1;
    for prec in [d, 2 * d] {
        let fam = root_family(&g, prec, seed)?;
        if let Some(fs) = recombine(&g, &fam) {
            return Ok(fs);
        }
    }
    Err(Error::PrecisionTooLow)
}

/// Outcome of comparing factorizations before and after variable reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreservationReport {
    pub factors_before: usize,
    pub factors_after: usize,
    /// For each factor of `F`, the number of factors of its image.
    pub image_counts: Vec<usize>,
    pub preserved: bool,
}

/// Checks the hypotheses (monic in `y`, `F(x, 0, y) = F(0, 0, y)`,
/// squarefree boundary) and compares the factorizations of `F` and `F o G`.
pub fn irreducibility_preservation_check(f: &Poly, gen: &GeneratorSpec, seed: u64) -> Result<PreservationReport> {
    let lc = f.lc_in(Y);
    if !lc.is_constant() || lc.is_zero() {
        return Err(Error::HypothesisViolated("monic in y".into()));
    }
    if f.terms().any(|(m, _)| m.vars().any(|v| v.is_x()) && m.exp(T) == 0) {
        return Err(Error::HypothesisViolated("x-monomials divisible by t".into()));
    }
    let g0 = boundary(f)?;
    if !g0.gcd(&g0.derivative())?.is_one() {
        return Err(Error::HypothesisViolated("squarefree boundary".into()));
    }
    let before = bivariate_base_factorize(f, seed)?;
    let after = bivariate_base_factorize(&gen.apply(f)?, seed)?;
    let image_counts = before
        .iter()
        .map(|h| Ok(bivariate_base_factorize(&gen.apply(h)?, seed)?.len()))
        .collect::<Result<Vec<_>>>()?;
    Ok(PreservationReport {
        factors_before: before.len(),
        factors_after: after.len(),
        preserved: before.len() == after.len() && image_counts.iter().all(|&c| c == 1),
        image_counts,
    })
}
