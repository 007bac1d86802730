//! Circuit for a factor of `P` from its boundary `g(0, y)`.

use std::collections::HashMap;

use super::esym::root_power_sums;
use super::preprocess::PreprocessMap;
use crate::circuit::{lagrange_basis, Builder, Circuit, GateId, TransformReport};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, UniPoly};
use crate::poly::Var;

/// Partitions of `k` as multiplicity vectors `m[j]` (index 0 unused).
fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for j in (1..=max.min(rest)).rev() {
            cur[j] += 1;
            rec(rest - j, j, cur, out);
            cur[j] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut vec![0; k + 1], &mut out);
    out
}

/// Coefficient of `prod_j p_j^{m_j}` in `e_k` (Newton's identities solved).
fn partition_coeff(f: &Field, m: &[usize]) -> Result<Elem> {
    let k: usize = m.iter().enumerate().map(|(j, c)| j * c).sum();
    let parts: usize = m.iter().sum();
    let mut den = f.one();
    for (j, &c) in m.iter().enumerate().skip(1) {
        for i in 1..=c {
            den = f.mul(&den, &f.from_i64((j * i) as i64));
        }
    }
    let c = f.inv(&den)?;
    Ok(if (k - parts) % 2 == 1 { f.neg(&c) } else { c })
}

/// Sum of the `t^0..=t^prec` coefficients of `l` evaluated at `at`.
fn trunc_eval(f: &Field, l: &UniPoly, prec: u32, at: &Elem) -> Elem {
    let mut acc = f.zero();
    let mut pw = f.one();
    for s in 0..=prec as usize {
        acc = f.add(&acc, &f.mul(&l.coeff(s), &pw));
        pw = f.mul(&pw, at);
    }
    acc
}

/// `count` distinct nodes, balanced around 0 in characteristic 0 so that
/// rational magnitudes stay small.
fn nodes(f: &Field, count: usize) -> Result<Vec<Elem>> {
    if f.characteristic() != 0 {
        return f.distinct_nodes(count);
    }
    Ok((0..count as i64).map(|i| f.from_i64(if i % 2 == 1 { (i + 1) / 2 } else { -i / 2 })).collect())
}

/// `P(a*y + b)` recovered by interpolation from circuit evaluations.
fn boundary_of(c: &Circuit, map: &PreprocessMap, deg: u32) -> Result<UniPoly> {
    let f = c.field();
    let nodes = f.distinct_nodes(deg as usize + 2)?;
    let mut vals = Vec::with_capacity(nodes.len());
    for y in &nodes {
        let pt: HashMap<Var, Elem> = map
            .vars
            .iter()
            .zip(map.a.iter().zip(&map.b))
            .map(|(&v, (a, b))| (v, f.add(&f.mul(a, y), b)))
            .collect();
        vals.push(c.eval(&pt)?);
    }
    let basis = lagrange_basis(f, &nodes[..=deg as usize])?;
    let mut poly = UniPoly::zero(f);
    for (l, v) in basis.iter().zip(&vals) {
        poly = poly.add(&l.scale(v));
    }
    if poly.eval(&nodes[deg as usize + 1]) != vals[deg as usize + 1] {
        return Err(Error::DegreeBoundViolated("P(a*y + b) exceeds the map degree".into()));
    }
    Ok(poly)
}

/// Circuit computing, up to a scalar, the factor of `P` whose image under
/// `map` has boundary `boundary(y) = prod_{alpha in S} (y - alpha)`.
///
/// With `G = map(P)` monic in `y` and `phi_alpha` its roots modulo
/// `t^(prec+1)`, the factor is `(-1)^k e_k(phi_alpha : alpha in S)` at
/// `t = 1`, `x -> x - b`. Each `phi_alpha` is `R(alpha)` for the truncated
/// rational family, and `e_k` is obtained from traces over `F[z]/(boundary)`
/// by Newton's identities, so no individual root is ever formed.
pub fn factor_circuit(
    c: &Circuit,
    map: &PreprocessMap,
    boundary: &UniPoly,
    precision: Option<u32>,
) -> Result<(Circuit, TransformReport)> {
    let f = c.field();
    if boundary.field() != f {
        return Err(Error::BoundaryNotInBaseField);
    }
    if c.vars().iter().any(|v| !map.vars.contains(v)) {
        return Err(Error::InvalidMap("circuit has unmapped variables".into()));
    }
    let k = boundary.degree().ok_or(Error::ZeroPolynomial)?;
    if k == 0 {
        return Err(Error::DegreeZeroInput);
    }
    let prec = precision.unwrap_or(k as u32);
    if (prec as usize) < k {
        return Err(Error::PrecisionTooLow);
    }
    let ch = f.characteristic();
    if ch != 0 && k as u64 >= ch {
        return Err(Error::CharTooSmallForNewton { p: ch, r: k });
    }
    let g0 = boundary.monic();
    let dg = map.degree;
    let full = boundary_of(c, map, dg)?;
    if full.degree() != Some(dg as usize) {
        return Err(Error::InvalidMap("top homogeneous part vanishes at a".into()));
    }
    let lc_inv = f.inv(&full.lc())?;
    let full = full.monic();
    if !full.gcd(&full.derivative())?.is_one() {
        return Err(Error::NotSquarefreeAtZero);
    }
    if !full.rem(&g0)?.is_zero() {
        return Err(Error::NotAFactor);
    }
    let d0 = full.derivative();
    let i0 = d0.rem(&g0)?.inv_mod(&g0).map_err(|_| Error::HVanishesAtRoot)?;

    let mmax = 2 * prec - 1;
    let nt1 = ((mmax + 1) * dg + 1) as usize;
    let nz1 = ((mmax + 1) * dg) as usize + k;
    let ny = |m: u32| ((m + 1) * dg) as usize;
    let nt2 = k * prec as usize + 1;
    let nz2 = k * (k - 1) + 1;
    let big = nt1.max(nz1).max(ny(mmax)).max(dg as usize + 1);
    nodes(f, big)?;
    let t1 = nodes(f, nt1)?;
    let z1 = nodes(f, nz1)?;
    let ys = nodes(f, ny(mmax))?;
    let t2 = nodes(f, nt2)?;
    let z2 = nodes(f, nz2)?;
    let offs = nodes(f, dg as usize + 1)?;

    // G_y(v) = sum_j L'_j(0) G(v + offs_j), scaled to the monic G
    let dweights: Vec<Elem> = lagrange_basis(f, &offs)?
        .iter()
        .map(|l| f.mul(&l.derivative().eval(&f.zero()), &lc_inv))
        .collect();
    let ybasis: Vec<Vec<UniPoly>> = (0..=mmax)
        .map(|m| if m == 0 { Ok(Vec::new()) } else { lagrange_basis(f, &ys[..ny(m)]) })
        .collect::<Result<_>>()?;
    let mut i0pow = vec![UniPoly::one(f)];
    for m in 1..=(mmax + 1) as usize {
        i0pow.push(i0pow[m - 1].mul(&i0).rem(&g0)?);
    }
    let t1basis = lagrange_basis(f, &t1)?;
    let z1basis = lagrange_basis(f, &z1)?;
    let z1red: Vec<UniPoly> = z1basis.iter().map(|l| l.rem(&g0)).collect::<Result<_>>()?;
    let z2basis = lagrange_basis(f, &z2)?;
    let t2basis = lagrange_basis(f, &t2)?;
    let sums = root_power_sums(&g0, nz2)?;
    let trace_w: Vec<Elem> = z2basis
        .iter()
        .map(|l| f.sum((0..nz2).map(|u| f.mul(&sums[u], &l.coeff(u))).collect::<Vec<_>>().iter()))
        .collect();

    let mut b = Builder::new(f);
    let one = b.one();
    let xvars: Vec<(usize, Var)> = map.vars.iter().cloned().enumerate().filter(|(_, v)| c.vars().contains(v)).collect();
    // n_gates[tau][zeta]
    let mut n_gates: Vec<Vec<GateId>> = Vec::with_capacity(nt1);
    for tau in &t1 {
        let mut gcopy: HashMap<Elem, GateId> = HashMap::new();
        let mut get_g = |b: &mut Builder, v: &Elem| -> GateId {
            if let Some(&g) = gcopy.get(v) {
                return g;
            }
            let mut leaves: HashMap<Var, GateId> = HashMap::new();
            for &(i, x) in &xvars {
                // tau*(x - b) + a*v + b
                let shift = f.add(&f.mul(&map.a[i], v), &f.mul(&map.b[i], &f.sub(&f.one(), tau)));
                let xg = b.var(x);
                leaves.insert(x, b.add(vec![(xg, tau.clone()), (one, shift)]));
            }
            let g = b.copy_circuit(c, true, &mut |_, v| leaves[&v]);
            gcopy.insert(v.clone(), g);
            g
        };
        let mut gy_cache: HashMap<Elem, GateId> = HashMap::new();
        let mut row = Vec::with_capacity(nz1);
        for zeta in &z1 {
            let d0z = d0.eval(zeta);
            let mut terms: Vec<(GateId, Elem)> = vec![(one, zeta.clone())];
            let mut a_gates: Vec<Option<GateId>> = vec![None; ys.len()];
            for m in 1..=mmax {
                let scale = i0pow[m as usize + 1].eval(zeta);
                for (bi, l) in ybasis[m as usize].iter().enumerate() {
                    let w = f.mul(&l.coeff(m as usize - 1), &scale);
                    if f.is_zero(&w) {
                        continue;
                    }
                    let eta = &ys[bi];
                    let v = f.add(zeta, eta);
                    let gy = match gy_cache.get(&v) {
                        Some(&g) => g,
                        None => {
                            let parts: Vec<(GateId, Elem)> = offs
                                .iter()
                                .zip(&dweights)
                                .map(|(o, w)| (get_g(&mut b, &f.add(&v, o)), w.clone()))
                                .collect();
                            let g = b.add(parts);
                            gy_cache.insert(v.clone(), g);
                            g
                        }
                    };
                    let ag = match a_gates[bi] {
                        Some(g) => g,
                        None => {
                            let gv = get_g(&mut b, &v);
                            let g = b.add(vec![(one, f.mul(eta, &d0z)), (gv, f.neg(&lc_inv))]);
                            a_gates[bi] = Some(g);
                            g
                        }
                    };
                    let mut ch = vec![gy];
                    ch.extend(std::iter::repeat(ag).take(m as usize));
                    terms.push((b.mul(ch), w));
                }
            }
            row.push(b.add(terms));
        }
        n_gates.push(row);
    }

    // r(tau2, zeta2): N reduced mod the boundary, truncated in t, re-evaluated
    let alpha: Vec<Vec<Elem>> = t2
        .iter()
        .map(|t| t1basis.iter().map(|l| trunc_eval(f, l, prec, t)).collect())
        .collect();
    let beta: Vec<Vec<Elem>> = z2.iter().map(|z| z1red.iter().map(|l| l.eval(z)).collect()).collect();
    let parts = partitions(k);
    let pcoef: Vec<Elem> = parts.iter().map(|m| partition_coeff(f, m)).collect::<Result<_>>()?;
    let sign = if k % 2 == 1 { f.neg(&f.one()) } else { f.one() };
    let mut out_terms = Vec::new();
    for ti in 0..t2.len() {
        let mut powers: Vec<Vec<GateId>> = vec![Vec::new(); k + 1];
        for (zi, _) in z2.iter().enumerate() {
            let mut terms = Vec::with_capacity(nt1 * nz1);
            for (a, row) in alpha[ti].iter().zip(&n_gates) {
                if f.is_zero(a) {
                    continue;
                }
                for (bz, &g) in beta[zi].iter().zip(row) {
                    let w = f.mul(a, bz);
                    if !f.is_zero(&w) {
                        terms.push((g, w));
                    }
                }
            }
            let r = b.add(terms);
            for j in 1..=k {
                let pw = b.mul(vec![r; j]);
                powers[j].push(pw);
            }
        }
        let psum: Vec<GateId> = (0..=k)
            .map(|j| {
                if j == 0 {
                    return one;
                }
                let terms = powers[j].iter().cloned().zip(trace_w.iter().cloned()).collect();
                b.add(terms)
            })
            .collect();
        let wt = trunc_eval(f, &t2basis[ti], prec, &f.one());
        if f.is_zero(&wt) {
            continue;
        }
        for (m, pc) in parts.iter().zip(&pcoef) {
            let mut ch = Vec::new();
            for (j, &cnt) in m.iter().enumerate().skip(1) {
                ch.extend(std::iter::repeat(psum[j]).take(cnt));
            }
            let g = b.mul(ch);
            out_terms.push((g, f.mul(&f.mul(pc, &wt), &sign)));
        }
    }
    let out = b.add(out_terms);
    let out = b.finish(out);
    let report = TransformReport::new("factor_circuit", c, &out)
        .with("factor_degree", k)
        .with("precision", prec)
        .with("input_degree", dg)
        .with("terms_m", mmax)
        .with("grid", format!("{nt1}x{nz1}/{nt2}x{nz2}"));
    Ok((out, report))
}
