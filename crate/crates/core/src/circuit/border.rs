//! Coefficient extraction through eps-jets.
//!
//! Substituting `t = eps * a_j` and combining `d + 1` copies with Lagrange
//! weights scaled by `eps^-d` yields `Coeff_{t^d}(C) + O(eps)`, whatever the
//! degree of `C` in `t`. Every gate value is exact modulo `eps^L` once all
//! leaves have nonnegative valuation, so jet order `L >= d + 1` suffices.

use std::collections::HashMap;

use super::{lagrange_basis, Builder, Circuit, Gate, TransformReport};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Var;

/// Re-expresses `c` over the jet field `jet` (constants embedded).
pub fn lift_to(c: &Circuit, jet: &Field) -> Result<Circuit> {
    if c.field() == jet {
        return Ok(c.clone());
    }
    match jet.jet_base() {
        Some((base, _)) if base == c.field() => {}
        _ => return Err(Error::SpecMismatch),
    }
    let gates = c
        .gates()
        .iter()
        .map(|g| match g {
            Gate::Const(k) => Gate::Const(jet.embed_base(k.clone())),
            Gate::Add(ch) => Gate::Add(
                ch.iter()
                    .map(|(k, w)| (*k, jet.embed_base(w.clone())))
                    .collect(),
            ),
            other => other.clone(),
        })
        .collect();
    Circuit::from_gates(jet, gates, c.output())
}

/// Circuit over `jet` computing `Coeff_{t^d}(C) + O(eps)`.
///
/// `c` may be over the jet field already or over its base field.
pub fn border_coeff_extract(
    c: &Circuit,
    t: Var,
    d: u32,
    jet: &Field,
) -> Result<(Circuit, TransformReport)> {
    let (base, order) = jet.jet_base().ok_or(Error::SpecMismatch)?;
    if order < d as usize + 1 {
        return Err(Error::PrecisionTooLow);
    }
    let lifted = lift_to(c, jet)?;
    let need = d as usize + 2;
    if !base.has_at_least(need) {
        return Err(Error::FieldTooSmall {
            needed: need,
            field: base.descriptor(),
        });
    }
    let nodes: Vec<Elem> = (1..=d as u64 + 1).map(|i| base.element(i)).collect();
    let basis = lagrange_basis(base, &nodes)?;
    let eps = jet.eps().expect("jet field");
    let scale = jet.powi(&eps, -i64::from(d))?;
    let mut b = Builder::new(jet);
    let mut terms = Vec::new();
    for (a, l) in nodes.iter().zip(&basis) {
        let at = jet.mul(&eps, &jet.embed_base(a.clone()));
        let g = b.copy_circuit(&lifted, false, &mut |b, v| {
            if v == t {
                b.constant(at.clone())
            } else {
                b.var(v)
            }
        });
        let w = jet.mul(&scale, &jet.embed_base(l.coeff(d as usize)));
        terms.push((g, w));
    }
    let out = b.add(terms);
    let out = b.finish(out);
    let nodes_txt: Vec<String> = nodes.iter().map(|n| base.format_elem(n)).collect();
    let report = TransformReport::new("border_coeff_extract", c, &out)
        .with("var", t)
        .with("index", d)
        .with("jet_order", order)
        .with("nodes", nodes_txt.join(","));
    Ok((out, report))
}

/// Evaluates a jet circuit at a base-field point and returns the `eps^0`
/// coefficient. Fails if the value has a nonzero negative-order part.
pub fn eval_border(c: &Circuit, point: &HashMap<Var, Elem>) -> Result<Elem> {
    let jet = c.field();
    let (base, _) = jet.jet_base().ok_or(Error::SpecMismatch)?;
    let lifted: HashMap<Var, Elem> = point
        .iter()
        .map(|(v, e)| (*v, jet.embed_base(e.clone())))
        .collect();
    match c.eval(&lifted)? {
        Elem::Jet(j) => {
            if j.valuation().is_some_and(|v| v < 0) {
                return Err(Error::DegreeBoundViolated(format!(
                    "border value has valuation {}",
                    j.val
                )));
            }
            Ok(j.coeff(base, 0))
        }
        _ => Err(Error::SpecMismatch),
    }
}
