//! Forward-mode partial derivatives of circuits.

use super::{Builder, Circuit, Gate, GateId};
use crate::poly::Var;

/// Circuit computing `dC/dv`. Size grows by at most the sum of squared
/// multiplication fan-ins; repeated children are handled through the
/// product rule on multiplicities.
pub fn derivative_circuit(c: &Circuit, v: Var) -> Circuit {
    let f = c.field();
    let mut b = Builder::new(f);
    let mut val: Vec<GateId> = Vec::with_capacity(c.num_gates());
    let mut der: Vec<Option<GateId>> = Vec::with_capacity(c.num_gates());
    for g in c.gates() {
        let (x, dx) = match g {
            Gate::Var(w) => {
                let x = b.var(*w);
                let dx = (*w == v).then(|| b.one());
                (x, dx)
            }
            Gate::Const(k) => (b.constant(k.clone()), None),
            Gate::Add(ch) => {
                let x = b.add(ch.iter().map(|(k, w)| (val[*k], w.clone())).collect());
                let terms: Vec<(GateId, _)> = ch
                    .iter()
                    .filter_map(|(k, w)| der[*k].map(|d| (d, w.clone())))
                    .collect();
                let dx = (!terms.is_empty()).then(|| b.add(terms));
                (x, dx)
            }
            Gate::Mul(ch) => {
                let x = b.mul(ch.iter().map(|k| val[*k]).collect());
                // group repeated children: d(g^e) = e * g^(e-1) * dg
                let mut counts: Vec<(GateId, u64)> = Vec::new();
                for &k in ch {
                    match counts.iter_mut().find(|(g, _)| *g == k) {
                        Some(e) => e.1 += 1,
                        None => counts.push((k, 1)),
                    }
                }
                let mut terms = Vec::new();
                for (i, &(k, e)) in counts.iter().enumerate() {
                    let Some(dk) = der[k] else { continue };
                    let mut factors = vec![dk];
                    for (j, &(kk, ee)) in counts.iter().enumerate() {
                        let reps = if i == j { ee - 1 } else { ee };
                        factors.extend(std::iter::repeat(val[kk]).take(reps as usize));
                    }
                    let m = if factors.len() == 1 { factors[0] } else { b.mul(factors) };
                    terms.push((m, f.from_i64(e as i64)));
                }
                let dx = (!terms.is_empty()).then(|| b.add(terms));
                (x, dx)
            }
        };
        val.push(x);
        der.push(dx);
    }
    let out = match der[c.output()] {
        Some(d) => d,
        None => b.add(Vec::new()),
    };
    b.finish(out)
}
