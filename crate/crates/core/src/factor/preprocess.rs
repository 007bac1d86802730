//! Maps `x_i -> t*x_i + a_i*y + b_i` that make a polynomial monic in `y`
//! with a squarefree boundary at `t = 0`.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Builder, Circuit};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::{discriminant, squarefree_part, Poly, Var};

const Y: Var = Var::Y;
const T: Var = Var::T;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreprocessMap {
    pub vars: Vec<Var>,
    pub a: Vec<Elem>,
    pub b: Vec<Elem>,
    /// Total degree of the polynomial the map was chosen for.
    pub degree: u32,
    /// Number of random draws used to find the map.
    pub trials: usize,
}

impl PreprocessMap {
    /// The map with the given shifts, for `vars` in order.
    pub fn new(vars: Vec<Var>, a: Vec<Elem>, b: Vec<Elem>, degree: u32) -> PreprocessMap {
        PreprocessMap {
            vars,
            a,
            b,
            degree,
            trials: 0,
        }
    }

    fn forward(&self, f: &Field) -> BTreeMap<Var, Poly> {
        let ty = |v: Var| Poly::var(f, T).mul(&Poly::var(f, v));
        self.vars
            .iter()
            .zip(self.a.iter().zip(&self.b))
            .map(|(&v, (a, b))| {
                let img = ty(v)
                    .add(&Poly::var(f, Y).scale(a))
                    .add(&Poly::constant(f, b.clone()));
                (v, img)
            })
            .collect()
    }

    /// `Hom_d(F)` evaluated at `x = a` (and `y = 1` when `F` involves `y`):
    /// the leading `y`-coefficient of the image.
    pub fn leading_coeff(&self, p: &Poly) -> Result<Elem> {
        let f = p.field();
        let d = p.total_degree().or_zero();
        let top = p.filter_terms(|m| m.degree() == d);
        let mut pt: HashMap<Var, Elem> = self.vars.iter().cloned().zip(self.a.iter().cloned()).collect();
        pt.insert(Y, f.one());
        for v in top.vars() {
            pt.entry(v).or_insert_with(|| f.zero());
        }
        top.eval(&pt)
    }

    /// `sqf(F)(a*y + b, y)` as a polynomial in `y`.
    fn shifted_boundary(&self, sqf: &Poly) -> Result<Poly> {
        let f = sqf.field();
        let map: BTreeMap<Var, Poly> = self
            .vars
            .iter()
            .zip(self.a.iter().zip(&self.b))
            .map(|(&v, (a, b))| (v, Poly::var(f, Y).scale(a).add(&Poly::constant(f, b.clone()))))
            .collect();
        sqf.substitute(&map)
    }

    /// Checks both validity conditions for `p`.
    pub fn validate(&self, p: &Poly) -> Result<()> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.vars.iter().any(|v| !v.is_x()) {
            return Err(Error::InvalidMap("only x variables may be shifted".into()));
        }
        if self.a.len() != self.vars.len() || self.b.len() != self.vars.len() {
            return Err(Error::InvalidMap("shift vectors have the wrong length".into()));
        }
        if p.vars().iter().any(|v| *v != Y && !self.vars.contains(v)) {
            return Err(Error::InvalidMap("polynomial has unmapped variables".into()));
        }
        let f = p.field();
        if f.is_zero(&self.leading_coeff(p)?) {
            return Err(Error::InvalidMap("top homogeneous part vanishes at a".into()));
        }
        if p.total_degree().or_zero() == 0 {
            return Ok(());
        }
        let main = p.vars().into_iter().next().expect("nonconstant");
        let sqf = squarefree_part(p, main)?;
        let h = self.shifted_boundary(&sqf)?;
        if h.degree_in(Y).or_zero() != sqf.total_degree().or_zero() {
            return Err(Error::InvalidMap("boundary loses degree".into()));
        }
        if h.degree_in(Y).or_zero() >= 1 && discriminant(&h, Y)?.is_zero() {
            return Err(Error::InvalidMap("shifted boundary has a repeated root".into()));
        }
        Ok(())
    }

    /// `G(x, t, y) = F(t*x + a*y + b, y)`, scaled to be monic in `y`.
    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        let g = p.substitute(&self.forward(p.field()))?;
        let lc = self.leading_coeff(p)?;
        if p.field().is_zero(&lc) {
            return Err(Error::InvalidMap("top homogeneous part vanishes at a".into()));
        }
        Ok(g.scale(&p.field().inv(&lc)?))
    }

    /// Inverse substitution `x_i -> x_i - a_i*y - b_i`, `t -> 1`, normalized.
    pub fn undo(&self, g: &Poly) -> Result<Poly> {
        let f = g.field();
        let mut map: BTreeMap<Var, Poly> = self
            .vars
            .iter()
            .zip(self.a.iter().zip(&self.b))
            .map(|(&v, (a, b))| {
                let img = Poly::var(f, v)
                    .sub(&Poly::var(f, Y).scale(a))
                    .sub(&Poly::constant(f, b.clone()));
                (v, img)
            })
            .collect();
        map.insert(T, Poly::one(f));
        Ok(g.substitute(&map)?.normalize())
    }

    /// Circuit for `F(t*x + a*y + b, y)` (not rescaled).
    pub fn apply_circuit(&self, c: &Circuit) -> Circuit {
        let f = c.field();
        let mut b = Builder::new(f);
        let one = b.one();
        let mut cache: HashMap<Var, usize> = HashMap::new();
        let out = b.copy_circuit(c, false, &mut |b, v| {
            if let Some(&g) = cache.get(&v) {
                return g;
            }
            let g = match self.vars.iter().position(|&w| w == v) {
                Some(i) => {
                    let t = b.var(T);
                    let x = b.var(v);
                    let tx = b.mul(vec![t, x]);
                    let y = b.var(Y);
                    b.add(vec![(tx, f.one()), (y, self.a[i].clone()), (one, self.b[i].clone())])
                }
                None => b.var(v),
            };
            cache.insert(v, g);
            g
        });
        b.finish(out)
    }
}

/// Draws `(a, b)` at random until both validity conditions hold.
pub fn find_preprocessing(p: &Poly, trials: usize, seed: u64) -> Result<PreprocessMap> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = p.field();
    let vars = p.x_vars();
    let degree = p.total_degree().or_zero();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 1..=trials {
        let a: Vec<Elem> = vars.iter().map(|_| f.random(&mut rng)).collect();
        let b: Vec<Elem> = vars.iter().map(|_| f.random(&mut rng)).collect();
        let mut map = PreprocessMap::new(vars.clone(), a, b, degree);
        map.trials = trial;
        match map.validate(p) {
            Ok(()) => return Ok(map),
            Err(Error::InvalidMap(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::TrialsExhausted(trials))
}
