//! Line-oriented circuit text and a small s-expression form.
//!
//! ```text
//! g0=var x1
//! g1=const 3
//! g2=add 2*g0 g1
//! g3=mul g0 g2 g2
//! out g3
//! ```
//!
//! Statements may be separated by newlines or `;`. Gates may be listed in
//! any order; they are sorted topologically on input.

use std::collections::HashMap;
use std::fmt;

use super::{Builder, Circuit, Gate, GateId};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Var;

enum RawGate {
    Var(Var),
    Const(Elem),
    Add(Vec<(usize, Elem)>),
    Mul(Vec<usize>),
}

fn parse_ref(tok: &str, pos: usize) -> Result<usize> {
    tok.strip_prefix('g')
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| Error::Parse {
            pos,
            msg: format!("expected a gate reference, found `{tok}`"),
        })
}

impl Circuit {
    /// Parses either form (input starting with `(` is an s-expression).
    pub fn parse(field: &Field, text: &str) -> Result<Circuit> {
        if text.trim_start().starts_with('(') {
            return Circuit::parse_sexpr(field, text);
        }
        let mut raw: HashMap<usize, RawGate> = HashMap::new();
        let mut output = None;
        let mut offset = 0;
        for stmt in text.split(['\n', ';']) {
            let pos = offset;
            offset += stmt.len() + 1;
            let stmt = stmt.trim();
            if stmt.is_empty() || stmt.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse { pos, msg };
            if let Some(rest) = stmt.strip_prefix("out") {
                output = Some(parse_ref(rest.trim(), pos)?);
                continue;
            }
            let (lhs, rhs) = stmt
                .split_once('=')
                .ok_or_else(|| perr(format!("expected `g<k>=...`, found `{stmt}`")))?;
            let id = parse_ref(lhs.trim(), pos)?;
            let mut words = rhs.split_whitespace();
            let kind = words.next().ok_or_else(|| perr("missing gate kind".into()))?;
            let args: Vec<&str> = words.collect();
            let gate = match kind {
                "var" => {
                    let [name] = args[..] else {
                        return Err(perr("var takes one name".into()));
                    };
                    RawGate::Var(Var::parse(name)?)
                }
                "const" => RawGate::Const(
                    field
                        .parse_elem(&args.join(" "))
                        .map_err(|_| perr(format!("bad constant `{}`", args.join(" "))))?,
                ),
                "add" => RawGate::Add(
                    args.iter()
                        .map(|a| match a.rsplit_once('*') {
                            Some((c, g)) => Ok((
                                parse_ref(g, pos)?,
                                field
                                    .parse_elem(c)
                                    .map_err(|_| perr(format!("bad coefficient `{c}`")))?,
                            )),
                            None => Ok((parse_ref(a, pos)?, field.one())),
                        })
                        .collect::<Result<_>>()?,
                ),
                "mul" => RawGate::Mul(
                    args.iter()
                        .map(|a| parse_ref(a, pos))
                        .collect::<Result<_>>()?,
                ),
                other => return Err(perr(format!("unknown gate kind `{other}`"))),
            };
            if raw.insert(id, gate).is_some() {
                return Err(perr(format!("gate g{id} defined twice")));
            }
        }
        let output = output.ok_or(Error::Parse {
            pos: text.len(),
            msg: "missing `out` statement".into(),
        })?;
        // topological order by depth-first search
        let mut order: Vec<usize> = Vec::new();
        let mut state: HashMap<usize, u8> = HashMap::new();
        let children = |g: &RawGate| -> Vec<usize> {
            match g {
                RawGate::Add(c) => c.iter().map(|(k, _)| *k).collect(),
                RawGate::Mul(c) => c.clone(),
                _ => Vec::new(),
            }
        };
        let mut ids: Vec<usize> = raw.keys().copied().collect();
        ids.sort_unstable();
        for &root in &ids {
            if state.contains_key(&root) {
                continue;
            }
            let mut stack: Vec<(usize, bool)> = vec![(root, false)];
            while let Some((g, done)) = stack.pop() {
                if done {
                    state.insert(g, 2);
                    order.push(g);
                    continue;
                }
                match state.get(&g) {
                    Some(2) => continue,
                    Some(1) => return Err(Error::CycleDetected(g)),
                    _ => {}
                }
                let node = raw.get(&g).ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("undefined gate g{g}"),
                })?;
                state.insert(g, 1);
                stack.push((g, true));
                let mut ch = children(node);
                ch.sort_unstable();
                ch.dedup();
                for c in ch.into_iter().rev() {
                    match state.get(&c) {
                        Some(1) => return Err(Error::CycleDetected(c)),
                        Some(2) => {}
                        _ => stack.push((c, false)),
                    }
                }
            }
        }
        let index: HashMap<usize, usize> = order.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        let out_idx = *index.get(&output).ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("output gate g{output} is undefined"),
        })?;
        let gates = order
            .iter()
            .map(|g| match raw.remove(g).unwrap() {
                RawGate::Var(v) => Gate::Var(v),
                RawGate::Const(c) => Gate::Const(c),
                RawGate::Add(c) => Gate::Add(c.into_iter().map(|(k, w)| (index[&k], w)).collect()),
                RawGate::Mul(c) => Gate::Mul(c.into_iter().map(|k| index[&k]).collect()),
            })
            .collect();
        Circuit::from_gates(field, gates, out_idx)
    }

    /// Canonical line form (gate ids are the internal indices).
    pub fn serialize(&self) -> String {
        self.to_string()
    }

    /// Parses `(add a (* 2 b) ...)`, `(mul a b ...)`, variable names and
    /// field literals.
    pub fn parse_sexpr(field: &Field, text: &str) -> Result<Circuit> {
        let toks = sexpr_tokens(text);
        let mut b = Builder::new(field);
        let mut pos = 0;
        let out = sexpr_node(&toks, &mut pos, &mut b, field)?;
        if pos != toks.len() {
            return Err(Error::Parse {
                pos: toks[pos].0,
                msg: "trailing input".into(),
            });
        }
        Ok(b.finish(out))
    }
}

fn sexpr_tokens(text: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if !cur.is_empty() {
                out.push((start, std::mem::take(&mut cur)));
            }
            if !ch.is_whitespace() {
                out.push((i, ch.to_string()));
            }
        } else {
            if cur.is_empty() {
                start = i;
            }
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        out.push((start, cur));
    }
    out
}

fn sexpr_node(toks: &[(usize, String)], pos: &mut usize, b: &mut Builder, f: &Field) -> Result<GateId> {
    let eof = |p: usize| Error::Parse {
        pos: p,
        msg: "unexpected end of input".into(),
    };
    let (at, tok) = toks.get(*pos).ok_or_else(|| eof(0))?.clone();
    *pos += 1;
    if tok != "(" {
        if tok == ")" {
            return Err(Error::Parse {
                pos: at,
                msg: "unexpected `)`".into(),
            });
        }
        return match Var::parse(&tok) {
            Ok(v) => Ok(b.var(v)),
            Err(e) => match f.parse_elem(&tok) {
                Ok(c) => Ok(b.constant(c)),
                Err(_) => Err(e),
            },
        };
    }
    let (_, head) = toks.get(*pos).ok_or_else(|| eof(at))?.clone();
    *pos += 1;
    let mut items: Vec<(GateId, Elem)> = Vec::new();
    loop {
        let (p, t) = toks.get(*pos).ok_or_else(|| eof(at))?;
        if t == ")" {
            *pos += 1;
            break;
        }
        // (* c node) inside add: weighted edge
        if t == "(" && head == "add" && toks.get(*pos + 1).is_some_and(|(_, s)| s == "*") {
            *pos += 2;
            let (cp, c) = toks.get(*pos).ok_or_else(|| eof(*p))?.clone();
            *pos += 1;
            let w = f.parse_elem(&c).map_err(|_| Error::Parse {
                pos: cp,
                msg: format!("bad coefficient `{c}`"),
            })?;
            let g = sexpr_node(toks, pos, b, f)?;
            match toks.get(*pos) {
                Some((_, s)) if s == ")" => *pos += 1,
                _ => {
                    return Err(Error::Parse {
                        pos: cp,
                        msg: "expected `)` after weighted term".into(),
                    })
                }
            }
            items.push((g, w));
            continue;
        }
        let g = sexpr_node(toks, pos, b, f)?;
        items.push((g, f.one()));
    }
    match head.as_str() {
        "add" | "+" => Ok(b.add(items)),
        "mul" | "*" => Ok(b.mul(items.into_iter().map(|(g, _)| g).collect())),
        other => Err(Error::Parse {
            pos: at,
            msg: format!("unknown operator `{other}`"),
        }),
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field();
        for (i, g) in self.gates().iter().enumerate() {
            write!(f, "g{i}=")?;
            match g {
                Gate::Var(v) => writeln!(f, "var {v}")?,
                Gate::Const(c) => writeln!(f, "const {}", field.format_elem(c))?,
                Gate::Add(ch) => {
                    f.write_str("add")?;
                    for (k, w) in ch {
                        if field.is_one(w) {
                            write!(f, " g{k}")?;
                        } else {
                            write!(f, " {}*g{k}", field.format_elem(w))?;
                        }
                    }
                    writeln!(f)?;
                }
                Gate::Mul(ch) => {
                    f.write_str("mul")?;
                    for k in ch {
                        write!(f, " g{k}")?;
                    }
                    writeln!(f)?;
                }
            }
        }
        writeln!(f, "out g{}", self.output())
    }
}
