//! Algebraic circuits: gate DAGs over a field with unbounded fan-in,
//! scalar-weighted addition edges and multiplication gates.
//!
//! `size` counts wires, `depth` counts gate layers on the longest
//! output-to-leaf path (leaves have depth 0).

mod border;
mod derive;
mod expand;
mod interp;
mod report;
mod text;

use std::collections::{BTreeSet, HashMap};

pub use border::{border_coeff_extract, eval_border, lift_to};
pub use derive::derivative_circuit;
pub use expand::{expand, expand_with_limit, ExpandMode, DEFAULT_TERM_LIMIT};
pub use interp::{
    coeff_extract_circuit, hom_component_circuit, lagrange_basis, partial_derivative_circuit,
};
pub use report::TransformReport;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::{Poly, Var};

pub type GateId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    Var(Var),
    Const(Elem),
    /// Children with edge scalars.
    Add(Vec<(GateId, Elem)>),
    Mul(Vec<GateId>),
}

impl Gate {
    pub fn children(&self) -> Box<dyn Iterator<Item = GateId> + '_> {
        match self {
            Gate::Var(_) | Gate::Const(_) => Box::new(std::iter::empty()),
            Gate::Add(c) => Box::new(c.iter().map(|(g, _)| *g)),
            Gate::Mul(c) => Box::new(c.iter().copied()),
        }
    }

    pub fn fan_in(&self) -> usize {
        match self {
            Gate::Var(_) | Gate::Const(_) => 0,
            Gate::Add(c) => c.len(),
            Gate::Mul(c) => c.len(),
        }
    }
}

/// An immutable circuit; children always precede their parents and every
/// gate is reachable from the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    field: Field,
    gates: Vec<Gate>,
    output: GateId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Metrics {
    pub size: usize,
    pub depth: usize,
    pub degree: u64,
}

impl Circuit {
    /// Validates topological order and prunes unreachable gates.
    pub fn from_gates(field: &Field, gates: Vec<Gate>, output: GateId) -> Result<Circuit> {
        for (i, g) in gates.iter().enumerate() {
            for c in g.children() {
                if c >= i {
                    return Err(Error::CycleDetected(i));
                }
            }
        }
        if output >= gates.len() {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("output gate g{output} does not exist"),
            });
        }
        Ok(prune(field, gates, output))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    pub fn num_gates(&self) -> usize {
        self.gates.len()
    }

    pub fn size(&self) -> usize {
        self.gates.iter().map(Gate::fan_in).sum()
    }

    pub fn gate_depths(&self) -> Vec<usize> {
        let mut depth = vec![0usize; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            depth[i] = match g {
                Gate::Var(_) | Gate::Const(_) => 0,
                _ => 1 + g.children().map(|c| depth[c]).max().unwrap_or(0),
            };
        }
        depth
    }

    pub fn depth(&self) -> usize {
        self.gate_depths()[self.output]
    }

    /// Syntactic degree by bottom-up propagation (saturating).
    pub fn syntactic_degree(&self) -> u64 {
        self.syntactic_degrees(|_| true)[self.output]
    }

    /// Syntactic degree per gate counting only variables accepted by `pred`.
    pub fn syntactic_degrees(&self, pred: impl Fn(Var) -> bool) -> Vec<u64> {
        let mut deg = vec![0u64; self.gates.len()];
        for (i, g) in self.gates.iter().enumerate() {
            deg[i] = match g {
                Gate::Var(v) => u64::from(pred(*v)),
                Gate::Const(_) => 0,
                Gate::Add(c) => c.iter().map(|(k, _)| deg[*k]).max().unwrap_or(0),
                Gate::Mul(c) => c.iter().fold(0u64, |acc, k| acc.saturating_add(deg[*k])),
            };
        }
        deg
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            size: self.size(),
            depth: self.depth(),
            degree: self.syntactic_degree(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::Var(v) => Some(*v),
                _ => None,
            })
            .collect()
    }

    /// Evaluates at a point; `buffer` is caller-owned scratch space.
    pub fn eval_with(&self, point: &HashMap<Var, Elem>, buffer: &mut Vec<Elem>) -> Result<Elem> {
        let f = &self.field;
        buffer.clear();
        buffer.reserve(self.gates.len());
        for g in &self.gates {
            let v = match g {
                Gate::Var(v) => point
                    .get(v)
                    .cloned()
                    .ok_or_else(|| Error::MissingAssignment(v.to_string()))?,
                Gate::Const(c) => c.clone(),
                Gate::Add(ch) => {
                    let mut acc = f.zero();
                    for (k, w) in ch {
                        acc = f.add(&acc, &f.mul(&buffer[*k], w));
                    }
                    acc
                }
                Gate::Mul(ch) => {
                    let mut acc = f.one();
                    for k in ch {
                        acc = f.mul(&acc, &buffer[*k]);
                    }
                    acc
                }
            };
            buffer.push(v);
        }
        Ok(buffer[self.output].clone())
    }

    pub fn eval(&self, point: &HashMap<Var, Elem>) -> Result<Elem> {
        self.eval_with(point, &mut Vec::new())
    }

    /// `k * self` through one extra addition gate at the output.
    pub fn scale(&self, k: &Elem) -> Circuit {
        let mut b = Builder::new(&self.field);
        let out = b.copy_circuit(self, false, &mut |b, v| b.var(v));
        let top = b.add(vec![(out, k.clone())]);
        b.finish(top)
    }

    /// Depth-2 sum-of-products encoding of a polynomial.
    pub fn from_poly(p: &Poly) -> Circuit {
        let f = p.field();
        let mut b = Builder::new(f);
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let g = if m.is_one() {
                b.constant(f.one())
            } else if m.degree() == 1 {
                b.var(m.pairs()[0].0)
            } else {
                let mut ch = Vec::new();
                for &(v, e) in m.pairs() {
                    let vg = b.var(v);
                    ch.extend(std::iter::repeat(vg).take(e as usize));
                }
                b.mul(ch)
            };
            terms.push((g, c.clone()));
        }
        let out = b.add(terms);
        b.finish(out)
    }
}

fn prune(field: &Field, gates: Vec<Gate>, output: GateId) -> Circuit {
    let mut live = vec![false; gates.len()];
    live[output] = true;
    for i in (0..gates.len()).rev() {
        if live[i] {
            for c in gates[i].children() {
                live[c] = true;
            }
        }
    }
    let mut remap = vec![usize::MAX; gates.len()];
    let mut out = Vec::with_capacity(live.iter().filter(|l| **l).count());
    for (i, g) in gates.into_iter().enumerate() {
        if !live[i] {
            continue;
        }
        remap[i] = out.len();
        out.push(match g {
            Gate::Add(c) => Gate::Add(c.into_iter().map(|(k, w)| (remap[k], w)).collect()),
            Gate::Mul(c) => Gate::Mul(c.into_iter().map(|k| remap[k]).collect()),
            other => other,
        });
    }
    Circuit {
        field: field.clone(),
        gates: out,
        output: remap[output],
    }
}

/// Incremental circuit construction; variable leaves and constants are
/// shared.
pub struct Builder {
    field: Field,
    gates: Vec<Gate>,
    vars: HashMap<Var, GateId>,
    consts: HashMap<Elem, GateId>,
}

impl Builder {
    pub fn new(field: &Field) -> Builder {
        Builder {
            field: field.clone(),
            gates: Vec::new(),
            vars: HashMap::new(),
            consts: HashMap::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn push(&mut self, g: Gate) -> GateId {
        self.gates.push(g);
        self.gates.len() - 1
    }

    pub fn var(&mut self, v: Var) -> GateId {
        if let Some(&g) = self.vars.get(&v) {
            return g;
        }
        let g = self.push(Gate::Var(v));
        self.vars.insert(v, g);
        g
    }

    pub fn constant(&mut self, c: Elem) -> GateId {
        if let Some(&g) = self.consts.get(&c) {
            return g;
        }
        let g = self.push(Gate::Const(c.clone()));
        self.consts.insert(c, g);
        g
    }

    pub fn one(&mut self) -> GateId {
        let one = self.field.one();
        self.constant(one)
    }

    /// Weighted sum; zero weights are dropped.
    pub fn add(&mut self, children: Vec<(GateId, Elem)>) -> GateId {
        let f = self.field.clone();
        let ch: Vec<(GateId, Elem)> = children.into_iter().filter(|(_, w)| !f.is_zero(w)).collect();
        self.push(Gate::Add(ch))
    }

    pub fn sum(&mut self, children: &[GateId]) -> GateId {
        let one = self.field.one();
        self.add(children.iter().map(|&g| (g, one.clone())).collect())
    }

    pub fn mul(&mut self, children: Vec<GateId>) -> GateId {
        self.push(Gate::Mul(children))
    }

    /// `g^e` as a single multiplication gate with repeated children.
    pub fn pow(&mut self, g: GateId, e: usize) -> GateId {
        if e == 0 {
            return self.one();
        }
        self.mul(vec![g; e])
    }

    /// Copies `c` into this builder. Variable leaves are replaced by
    /// `leaf(builder, var)`; when `const_as_add` is set, constant leaves
    /// become one-edge addition gates so that every leaf of the copy sits
    /// at the same depth.
    pub fn copy_circuit(
        &mut self,
        c: &Circuit,
        const_as_add: bool,
        leaf: &mut dyn FnMut(&mut Builder, Var) -> GateId,
    ) -> GateId {
        let mut map = vec![0usize; c.gates.len()];
        for (i, g) in c.gates.iter().enumerate() {
            map[i] = match g {
                Gate::Var(v) => leaf(self, *v),
                Gate::Const(k) => {
                    if const_as_add {
                        let one = self.one();
                        self.push(Gate::Add(vec![(one, k.clone())]))
                    } else {
                        self.constant(k.clone())
                    }
                }
                Gate::Add(ch) => self.push(Gate::Add(ch.iter().map(|(k, w)| (map[*k], w.clone())).collect())),
                Gate::Mul(ch) => self.push(Gate::Mul(ch.iter().map(|k| map[*k]).collect())),
            };
        }
        map[c.output]
    }

    /// Finishes with `output` as the output gate (unreachable gates pruned).
    pub fn finish(self, output: GateId) -> Circuit {
        prune(&self.field, self.gates, output)
    }
}

#[cfg(test)]
mod tests;
