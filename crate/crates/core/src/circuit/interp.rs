//! Interpolation transforms: coefficient extraction, derivatives and
//! homogeneous components, each a weighted sum of substituted copies.

use super::{Builder, Circuit, GateId, TransformReport};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, UniPoly};
use crate::poly::Var;

/// Lagrange basis polynomials `L_j` for distinct `nodes`
/// (`L_j(nodes[k]) = [j == k]`).
pub fn lagrange_basis(field: &Field, nodes: &[Elem]) -> Result<Vec<UniPoly>> {
    let full = UniPoly::from_roots(field, nodes);
    nodes
        .iter()
        .map(|a| {
            let num = full.exact_div(&UniPoly::from_roots(field, std::slice::from_ref(a)))?;
            let den = num.eval(a);
            if field.is_zero(&den) {
                return Err(Error::HypothesisViolated("interpolation nodes repeat".into()));
            }
            Ok(num.scale(&field.inv(&den)?))
        })
        .collect()
}

fn format_nodes(field: &Field, nodes: &[Elem]) -> String {
    nodes
        .iter()
        .map(|n| field.format_elem(n))
        .collect::<Vec<_>>()
        .join(",")
}

/// Copies of `c` with `y` replaced by each node.
fn y_copies(b: &mut Builder, c: &Circuit, y: Var, nodes: &[Elem]) -> Vec<GateId> {
    nodes
        .iter()
        .map(|a| {
            b.copy_circuit(c, false, &mut |b, v| {
                if v == y {
                    b.constant(a.clone())
                } else {
                    b.var(v)
                }
            })
        })
        .collect()
}

/// Circuit for the coefficient of `y^i`, given `deg_y(C) <= d`.
pub fn coeff_extract_circuit(
    c: &Circuit,
    y: Var,
    i: u32,
    d: u32,
) -> Result<(Circuit, TransformReport)> {
    let f = c.field();
    let nodes = f.distinct_nodes(d as usize + 1)?;
    let basis = lagrange_basis(f, &nodes)?;
    let mut b = Builder::new(f);
    let copies = y_copies(&mut b, c, y, &nodes);
    let terms = copies
        .iter()
        .zip(&basis)
        .map(|(&g, l)| (g, l.coeff(i as usize)))
        .collect();
    let out = b.add(terms);
    let out = b.finish(out);
    let report = TransformReport::new("coeff_extract", c, &out)
        .with("var", y)
        .with("index", i)
        .with("degree_bound", d)
        .with("nodes", format_nodes(f, &nodes));
    Ok((out, report))
}

/// Circuit for the `order`-th partial derivative in `y`, given `deg_y(C) <= d`:
/// `sum_j sum_e c_{e,j} * C(x, a_j) * y^(e - order)`.
pub fn partial_derivative_circuit(
    c: &Circuit,
    y: Var,
    order: u32,
    d: u32,
) -> Result<(Circuit, TransformReport)> {
    let f = c.field();
    let nodes = f.distinct_nodes(d as usize + 1)?;
    let basis = lagrange_basis(f, &nodes)?;
    let mut b = Builder::new(f);
    let copies = y_copies(&mut b, c, y, &nodes);
    let yv = b.var(y);
    let powers: Vec<GateId> = (0..=d.saturating_sub(order))
        .map(|k| match k {
            0 => usize::MAX,
            1 => yv,
            k => b.pow(yv, k as usize),
        })
        .collect();
    let mut terms = Vec::new();
    for (j, &g) in copies.iter().enumerate() {
        for e in order..=d {
            // falling factorial e (e-1) ... (e-order+1)
            let ff = (e - order + 1..=e).fold(f.one(), |acc, k| f.mul(&acc, &f.from_i64(k as i64)));
            let w = f.mul(&ff, &basis[j].coeff(e as usize));
            if f.is_zero(&w) {
                continue;
            }
            let k = (e - order) as usize;
            let gate = if k == 0 { g } else { b.mul(vec![g, powers[k]]) };
            terms.push((gate, w));
        }
    }
    let out = b.add(terms);
    let out = b.finish(out);
    let report = TransformReport::new("partial_derivative", c, &out)
        .with("var", y)
        .with("order", order)
        .with("degree_bound", d)
        .with("nodes", format_nodes(f, &nodes));
    Ok((out, report))
}

/// Circuit for the homogeneous component of degree `i` in `vars`, given
/// that the degree in `vars` is at most `d`.
pub fn hom_component_circuit(
    c: &Circuit,
    vars: &[Var],
    i: u32,
    d: u32,
) -> Result<(Circuit, TransformReport)> {
    let f = c.field();
    let nodes = f.distinct_nodes(d as usize + 1)?;
    let basis = lagrange_basis(f, &nodes)?;
    let mut b = Builder::new(f);
    let mut terms = Vec::new();
    for (a, l) in nodes.iter().zip(&basis) {
        let g = b.copy_circuit(c, false, &mut |b, v| {
            let leaf = b.var(v);
            if vars.contains(&v) {
                b.add(vec![(leaf, a.clone())])
            } else {
                leaf
            }
        });
        terms.push((g, l.coeff(i as usize)));
    }
    let out = b.add(terms);
    let out = b.finish(out);
    let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    let report = TransformReport::new("hom_component", c, &out)
        .with("vars", names.join(","))
        .with("index", i)
        .with("degree_bound", d)
        .with("nodes", format_nodes(f, &nodes));
    Ok((out, report))
}
