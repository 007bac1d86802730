//! Variable-reduction maps `x_i -> polynomial in w`.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Poly, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `x_i -> c_i0 + sum_j c_ij w_j` with seeded random coefficients.
    Affine,
    /// `x_i -> w_i`.
    Passthrough,
    /// Caller-supplied images.
    User,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub map: BTreeMap<Var, Poly>,
    pub seed: u64,
    pub w: usize,
}

impl GeneratorSpec {
    pub fn affine(field: &Field, vars: &[Var], w: usize, seed: u64) -> GeneratorSpec {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = vars
            .iter()
            .map(|&v| {
                let mut img = Poly::constant(field, field.random(&mut rng));
                for j in 1..=w as u32 {
                    img = img.add(&Poly::var(field, Var::w(j)).scale(&field.random(&mut rng)));
                }
                (v, img)
            })
            .collect();
        GeneratorSpec {
            kind: GeneratorKind::Affine,
            map,
            seed,
            w,
        }
    }

    pub fn passthrough(field: &Field, vars: &[Var]) -> GeneratorSpec {
        let map = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, Poly::var(field, Var::w(i as u32 + 1))))
            .collect();
        GeneratorSpec {
            kind: GeneratorKind::Passthrough,
            map,
            seed: 0,
            w: vars.len(),
        }
    }

    pub fn user(map: BTreeMap<Var, Poly>) -> Result<GeneratorSpec> {
        let spec = GeneratorSpec {
            kind: GeneratorKind::User,
            w: map
                .values()
                .flat_map(|p| p.vars())
                .filter(|v| v.is_w())
                .collect::<std::collections::BTreeSet<_>>()
                .len(),
            map,
            seed: 0,
        };
        spec.check()?;
        Ok(spec)
    }

    /// Parses `affine:seed=S:w=K`, `passthrough` or `zero` for `vars`.
    pub fn from_descriptor(desc: &str, field: &Field, vars: &[Var]) -> Result<GeneratorSpec> {
        let mut parts = desc.split(':');
        let bad = || Error::UnsupportedDescriptor(desc.to_string());
        match parts.next() {
            Some("affine") => {
                let (mut seed, mut w) = (0u64, 1usize);
                for kv in parts {
                    let (k, v) = kv.split_once('=').ok_or_else(bad)?;
                    match k {
                        "seed" => seed = v.parse().map_err(|_| bad())?,
                        "w" => w = v.parse().map_err(|_| bad())?,
                        _ => return Err(bad()),
                    }
                }
                Ok(GeneratorSpec::affine(field, vars, w, seed))
            }
            Some("passthrough") if parts.next().is_none() => Ok(GeneratorSpec::passthrough(field, vars)),
            Some("zero") if parts.next().is_none() => {
                GeneratorSpec::user(vars.iter().map(|&v| (v, Poly::zero(field))).collect())
            }
            _ => Err(bad()),
        }
    }

    fn check(&self) -> Result<()> {
        let touches = |v: &Var| *v == Var::T || *v == Var::Y;
        if self.map.keys().any(touches) || self.map.values().any(|p| p.vars().iter().any(touches)) {
            return Err(Error::GeneratorTouchesTY);
        }
        Ok(())
    }

    /// Largest total degree of an image.
    pub fn degree(&self) -> u32 {
        self.map.values().map(|p| p.total_degree().or_zero()).max().unwrap_or(0)
    }

    pub fn apply(&self, p: &Poly) -> Result<Poly> {
        self.check()?;
        p.substitute(&self.map)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GeneratorKind::Affine => write!(f, "affine:seed={}:w={}", self.seed, self.w),
            GeneratorKind::Passthrough => write!(f, "passthrough"),
            GeneratorKind::User => {
                let imgs: Vec<String> = self.map.iter().map(|(v, p)| format!("{v}->{p}")).collect();
                write!(f, "user[{}]", imgs.join(", "))
            }
        }
    }
}

/// `F` with the generator substituted for the `x` variables.
pub fn variable_reduce(p: &Poly, gen: &GeneratorSpec) -> Result<Poly> {
    gen.apply(p)
}
