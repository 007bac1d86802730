//! Circuit constructions for truncated roots.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{derivative_circuit, lagrange_basis, lift_to, Builder, Circuit, GateId, TransformReport};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, UniPoly};
use crate::poly::Var;

const Y: Var = Var::Y;

fn zero_point(c: &Circuit) -> HashMap<Var, Elem> {
    c.vars().into_iter().map(|v| (v, c.field().zero())).collect()
}

/// Circuit for `Hom_{<=d}[phi]` where `phi(0) = 0` is the root of `P(x, y)`
/// with `P_y(0, 0) != 0`. Degree bounds come from syntactic degrees.
pub fn root_circuit(c: &Circuit, d: u32) -> Result<(Circuit, TransformReport)> {
    let dy = c.syntactic_degrees(|v| v == Y)[c.output()];
    let dx = c.syntactic_degrees(|v| v != Y)[c.output()];
    let cap = u64::from(u32::MAX);
    if dx > cap || dy > cap {
        return Err(Error::DegreeBoundViolated("syntactic degree too large".into()));
    }
    root_circuit_with_bounds(c, d, dx as u32, dy as u32)
}

/// As [`root_circuit`] with caller-supplied bounds on the `x`-degree and
/// the `y`-degree of `P`.
///
/// Layout: a grid of copies `P(tau_a x, eta_b)` whose leaves are addition
/// gates, then `P_y` and `A = c y - P` on the grid by interpolation, then
/// products `P_y * A^m`, then a single weighted sum performing the
/// `y`-coefficient extraction, the `t`-truncation and `t = 1` at once.
pub fn root_circuit_with_bounds(c: &Circuit, d: u32, dx: u32, dy: u32) -> Result<(Circuit, TransformReport)> {
    let f = c.field();
    let zero = zero_point(c);
    if !f.is_zero(&c.eval(&zero)?) {
        return Err(Error::NoRoot);
    }
    let c0 = derivative_circuit(c, Y).eval(&zero)?;
    if f.is_zero(&c0) {
        return Err(Error::SingularRoot);
    }
    let mmax = 2 * d;
    let nt = ((mmax + 1) * dx + 1) as usize;
    let ny = ((mmax + 1) * dy.max(1)) as usize;
    let taus = f.distinct_nodes(nt)?;
    let etas = f.distinct_nodes(ny)?;
    let lt = lagrange_basis(f, &taus)?;
    let ly = lagrange_basis(f, &etas)?;
    // sum of the t^0..t^d coefficients of each basis polynomial
    let wt: Vec<Elem> = lt
        .iter()
        .map(|l| f.sum((0..=d as usize).map(|k| l.coeff(k)).collect::<Vec<_>>().iter()))
        .collect();
    // kappa[b][b'] = L'_{b'}(eta_b)
    let dly: Vec<UniPoly> = ly.iter().map(UniPoly::derivative).collect();
    let c0_inv = f.inv(&c0)?;
    let c0_pows: Vec<Elem> = (0..=mmax + 1).map(|k| f.pow(&c0_inv, u64::from(k))).collect();

    let mut b = Builder::new(f);
    let one = b.one();
    let mut terms: Vec<(GateId, Elem)> = Vec::new();
    for (tau, w_a) in taus.iter().zip(&wt) {
        if f.is_zero(w_a) {
            continue;
        }
        let mut xleaf: HashMap<Var, GateId> = HashMap::new();
        let mut grid = Vec::with_capacity(ny);
        for eta in &etas {
            let g = b.copy_circuit(c, true, &mut |b, v| {
                if v == Y {
                    b.add(vec![(one, eta.clone())])
                } else {
                    *xleaf.entry(v).or_insert_with(|| {
                        let x = b.var(v);
                        b.add(vec![(x, tau.clone())])
                    })
                }
            });
            grid.push(g);
        }
        for (bi, eta) in etas.iter().enumerate() {
            let dpart: Vec<(GateId, Elem)> = grid
                .iter()
                .zip(&dly)
                .map(|(&g, dl)| (g, dl.eval(eta)))
                .collect();
            let dg = b.add(dpart);
            let ag = b.add(vec![(grid[bi], f.neg(&f.one())), (one, f.mul(&c0, eta))]);
            for m in 1..=mmax {
                let w = f.mul(&f.mul(w_a, &ly[bi].coeff(m as usize - 1)), &c0_pows[m as usize + 1]);
                if f.is_zero(&w) {
                    continue;
                }
                let mut ch = vec![dg];
                ch.extend(std::iter::repeat(ag).take(m as usize));
                let mg = b.mul(ch);
                terms.push((mg, w));
            }
        }
    }
    let out = b.add(terms);
    let out = b.finish(out);
    let report = TransformReport::new("root_circuit", c, &out)
        .with("precision", d)
        .with("x_degree_bound", dx)
        .with("y_degree_bound", dy)
        .with("grid", format!("{nt}x{ny}"))
        .with("terms_m", mmax);
    Ok((out, report))
}

/// Jet order used by [`border_root_circuit`].
pub fn border_jet_order(e: u32, n: u32) -> usize {
    (2 * n + 2 * e + 2) as usize
}

/// Circuit over an eps-jet field computing `Hom_{<=n}[phi(t)] + O(eps)`
/// where `P(t, y) = (y - phi)^e * U` with `phi(0) = 0` and `U(0, 0)` a
/// nonzero constant. Other variables are treated as coefficients.
///
/// Only `n + 1` points per direction are used for each `t^r`, so the size
/// does not depend on the degree of `P`. Division by powers of `y` happens
/// on jet constants, never in gates.
pub fn border_root_circuit(c: &Circuit, e: u32, n: u32) -> Result<(Circuit, TransformReport)> {
    let jet = Field::jet(c.field(), border_jet_order(e, n))?;
    border_root_circuit_with_order(c, e, n, &jet)
}

pub fn border_root_circuit_with_order(
    c: &Circuit,
    e: u32,
    n: u32,
    jet: &Field,
) -> Result<(Circuit, TransformReport)> {
    let base = c.field().clone();
    if e == 0 || (base.characteristic() != 0 && u64::from(e) % base.characteristic() == 0) {
        return Err(Error::CharDividesE);
    }
    let (jbase, order) = jet.jet_base().ok_or(Error::SpecMismatch)?;
    if jbase != &base {
        return Err(Error::SpecMismatch);
    }
    if order < (2 * n + e) as usize {
        return Err(Error::PrecisionTooLow);
    }
    let cj = lift_to(c, jet)?;
    let dj = lift_to(&derivative_circuit(c, Y), jet)?;
    let eps = jet.eps().expect("jet field");

    // c0 = Coeff_{y^e} P(0, y), read off P(0, eps); must not depend on x
    let unit = {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6c0);
        let mut seen: Option<Elem> = None;
        for trial in 0..3 {
            let pt: HashMap<Var, Elem> = cj
                .vars()
                .into_iter()
                .map(|v| {
                    let val = if v == Y {
                        eps.clone()
                    } else if v == Var::T || trial == 0 {
                        jet.zero()
                    } else {
                        jet.embed_base(base.random(&mut rng))
                    };
                    (v, val)
                })
                .collect();
            let Elem::Jet(j) = cj.eval(&pt)? else {
                return Err(Error::SpecMismatch);
            };
            if j.valuation().is_some_and(|v| v < i64::from(e)) {
                return Err(Error::HypothesisViolated("P(0, y) is not divisible by y^e".into()));
            }
            let c0 = j.coeff(jbase, i64::from(e));
            match &seen {
                None => seen = Some(c0),
                Some(s) if *s != c0 => {
                    return Err(Error::HypothesisViolated("Coeff_{y^e} P(0, y) depends on x".into()))
                }
                _ => {}
            }
        }
        seen.unwrap()
    };
    if base.is_zero(&unit) {
        return Err(Error::NonzeroQAtOrigin);
    }
    let unit_inv = jet.embed_base(base.inv(&unit)?);
    let e_inv = jet.embed_base(base.inv(&base.from_i64(i64::from(e)))?);

    if !base.has_at_least(n as usize + 2) {
        return Err(Error::FieldTooSmall {
            needed: n as usize + 2,
            field: base.descriptor(),
        });
    }
    let mut b = Builder::new(jet);
    let one = b.one();
    let tvar = b.var(Var::T);
    let mut outer = Vec::new();
    for r in 1..=n {
        let nodes: Vec<Elem> = (1..=u64::from(r) + 1).map(|i| base.element(i)).collect();
        let basis = lagrange_basis(&base, &nodes)?;
        let eps_r = jet.powi(&eps, -i64::from(r))?;
        let betas: Vec<Elem> = basis
            .iter()
            .map(|l| jet.mul(&eps_r, &jet.embed_base(l.coeff(r as usize))))
            .collect();
        let pts: Vec<Elem> = nodes.iter().map(|a| jet.mul(&eps, &jet.embed_base(a.clone()))).collect();
        let mut inner = Vec::new();
        for (ti, bt) in pts.iter().zip(&betas) {
            for (yv, by) in pts.iter().zip(&betas) {
                // the t-argument of P(t*y, y)
                let tv = jet.mul(ti, yv);
                let mut leaf = |b: &mut Builder, v: Var| -> GateId {
                    if v == Var::T {
                        b.constant(tv.clone())
                    } else if v == Y {
                        b.constant(yv.clone())
                    } else {
                        b.var(v)
                    }
                };
                let pv = b.copy_circuit(&cj, false, &mut leaf);
                let dv = b.copy_circuit(&dj, false, &mut leaf);
                let y_inv = jet.inv(yv)?;
                // C1 = P_y(ty, y) / (c0 e y^(e-1))
                let w1 = jet.mul(&jet.mul(&unit_inv, &e_inv), &jet.pow(&y_inv, u64::from(e - 1)));
                let c1 = b.add(vec![(dv, w1)]);
                // C2 = 1 - P(ty, y) / (c0 y^e)
                let w2 = jet.neg(&jet.mul(&unit_inv, &jet.pow(&y_inv, u64::from(e))));
                let c2 = b.add(vec![(one, jet.one()), (pv, w2)]);
                // S = 1 + C2 + ... + C2^(2r), Horner
                let mut s = one;
                for _ in 0..2 * r {
                    let m = b.mul(vec![c2, s]);
                    s = b.add(vec![(m, jet.one()), (one, jet.one())]);
                }
                let v = b.mul(vec![c1, s]);
                let w = jet.mul(&jet.mul(bt, by), yv);
                inner.push((v, w));
            }
        }
        let inner = b.add(inner);
        let tr = b.pow(tvar, r as usize);
        outer.push(b.mul(vec![tr, inner]));
    }
    let out = b.sum(&outer);
    let out = b.finish(out);
    let report = TransformReport::new("border_root_circuit", c, &out)
        .with("e", e)
        .with("precision", n)
        .with("jet_order", order)
        .with("input_syntactic_degree", c.syntactic_degree());
    Ok((out, report))
}
