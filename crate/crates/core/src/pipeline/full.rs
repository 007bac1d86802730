//! The full factorization pipeline for circuits.

use std::collections::HashMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bivariate::bivariate_base_factorize;
use super::generator::{GeneratorKind, GeneratorSpec};
use crate::circuit::{expand, Circuit, ExpandMode, TransformReport};
use crate::error::{Error, Result};
use crate::factor::{boundary, factor_circuit, find_preprocessing, PreprocessMap};
use crate::field::{Elem, Field, UniPoly};
use crate::poly::{squarefree_decomposition, Poly, Var};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Largest total degree expanded exactly.
    pub degree_cap: u32,
    /// Generator descriptor, see [`GeneratorSpec::from_descriptor`].
    /// Affine seeds are advanced on retry.
    pub generator: String,
    pub seed: u64,
    pub preprocess_trials: usize,
    /// Fresh preprocessing and generator draws tried per squarefree part.
    pub attempts: usize,
    pub pit_samples: usize,
    /// Known irreducible factors. Required over `Q`, where only their
    /// boundaries are used.
    pub planted: Option<Vec<Poly>>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            degree_cap: 16,
            generator: "affine:seed=0:w=2".into(),
            seed: 0,
            preprocess_trials: 64,
            attempts: 6,
            pit_samples: 8,
            planted: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Factor {
    pub circuit: Circuit,
    pub poly: Poly,
    pub multiplicity: u32,
    pub report: TransformReport,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub reassembly: bool,
    /// `None` when no irreducibility oracle exists for the field.
    pub irreducible: Option<bool>,
    pub multiplicities: bool,
    pub pit_samples: usize,
    pub pit_agree: bool,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.reassembly && self.irreducible != Some(false) && self.multiplicities && self.pit_agree
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let irr = match self.irreducible {
            Some(b) => b.to_string(),
            None => "unchecked".into(),
        };
        write!(
            f,
            "verdict={} reassembly={} irreducible={} multiplicities={} pit_samples={} pit_agree={}",
            if self.passed() { "ok" } else { "FAILED" },
            self.reassembly,
            irr,
            self.multiplicities,
            self.pit_samples,
            self.pit_agree
        )
    }
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    pub factors: Vec<Factor>,
    pub unit: Elem,
    pub certificate: Certificate,
}

impl FactorizationResult {
    /// `unit * prod g_i^{m_i}`.
    pub fn reassemble(&self, field: &Field) -> Poly {
        self.factors
            .iter()
            .fold(Poly::constant(field, self.unit.clone()), |acc, g| acc.mul(&g.poly.pow(g.multiplicity)))
    }
}

#[derive(Clone, Debug)]
pub struct SquarefreePart {
    pub multiplicity: u32,
    pub poly: Poly,
    /// Depth-2 re-encoding of `poly`.
    pub circuit: Circuit,
}

/// Expands `c` and splits it as `unit * prod P_i^i`. Constant parts are
/// dropped; the unit is returned alongside.
pub fn squarefree_part_pipeline(c: &Circuit, cap: u32) -> Result<(Vec<SquarefreePart>, Elem)> {
    let f = expand(c, cap, ExpandMode::Exact)?;
    squarefree_parts(&f)
}

fn squarefree_parts(f: &Poly) -> Result<(Vec<SquarefreePart>, Elem)> {
    let field = f.field();
    let Some(main) = f.vars().into_iter().next() else {
        return Ok((Vec::new(), f.constant_term()));
    };
    let parts = squarefree_decomposition(f, main)?;
    let mut rest = f.clone();
    let mut out = Vec::new();
    for (i, p) in parts.into_iter().enumerate() {
        if p.is_constant() {
            continue;
        }
        let m = i as u32 + 1;
        rest = rest.exact_div(&p.pow(m))?;
        out.push(SquarefreePart {
            multiplicity: m,
            circuit: Circuit::from_poly(&p),
            poly: p,
        });
    }
    if !rest.is_constant() {
        return Err(Error::CertificateFailed("squarefree decomposition does not reassemble".into()));
    }
    let unit = rest.constant_term();
    debug_assert!(!field.is_zero(&unit));
    Ok((out, unit))
}

fn generator_for(cfg: &PipelineConfig, field: &Field, vars: &[Var], attempt: usize) -> Result<GeneratorSpec> {
    let g = GeneratorSpec::from_descriptor(&cfg.generator, field, vars)?;
    Ok(match g.kind {
        GeneratorKind::Affine if attempt > 0 => GeneratorSpec::affine(field, vars, g.w, g.seed + attempt as u64),
        _ => g,
    })
}

/// Irreducible factors of `p` with the circuits that compute them.
fn factor_part(p: &SquarefreePart, cfg: &PipelineConfig) -> Result<Vec<(Circuit, Poly, TransformReport)>> {
    let field = p.poly.field();
    let mut last_err = Error::TrialsExhausted(cfg.attempts);
    for attempt in 0..cfg.attempts {
        let seed = cfg.seed.wrapping_add(1000 * attempt as u64 + p.multiplicity as u64);
        let map = find_preprocessing(&p.poly, cfg.preprocess_trials, seed)?;
        let boundaries = match boundaries_for(p, &map, cfg, attempt, seed) {
            Ok(b) => b,
            Err(e @ (Error::PrecisionTooLow | Error::HypothesisViolated(_))) => {
                last_err = e;
                continue;
            }
            Err(e) => return Err(e),
        };
        match build_factors(p, &map, &boundaries, seed) {
            Ok(fs) => return Ok(fs),
            Err(e @ Error::NotAFactor) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(if field.is_finite() { last_err } else { Error::NotAFactor })
}

/// Boundary of each irreducible factor of `map(P)`.
fn boundaries_for(
    p: &SquarefreePart,
    map: &PreprocessMap,
    cfg: &PipelineConfig,
    attempt: usize,
    seed: u64,
) -> Result<Vec<UniPoly>> {
    let field = p.poly.field();
    if let Some(planted) = &cfg.planted {
        let mut out = Vec::new();
        for q in planted.iter().filter(|q| !q.is_constant() && q.divides(&p.poly)) {
            out.push(boundary(&map.apply(q)?)?.monic());
        }
        return Ok(out);
    }
    if !field.is_finite() {
        return Err(Error::InfiniteField);
    }
    let g = map.apply(&p.poly)?;
    let gen = generator_for(cfg, field, &map.vars, attempt)?;
    let reduced = gen.apply(&g)?;
    bivariate_base_factorize(&reduced, seed)?
        .iter()
        .map(|h| Ok(boundary(h)?.monic()))
        .collect()
}

/// Builds the factor circuits and checks that they multiply to `P`.
fn build_factors(
    p: &SquarefreePart,
    map: &PreprocessMap,
    boundaries: &[UniPoly],
    seed: u64,
) -> Result<Vec<(Circuit, Poly, TransformReport)>> {
    let field = p.poly.field();
    let mut dense: Option<Vec<Poly>> = None;
    let mut out = Vec::new();
    let mut prod = Poly::one(field);
    for b in boundaries {
        let k = b.degree().unwrap_or(0) as u32;
        let (circ, poly, report) = match factor_circuit(&p.circuit, map, b, None) {
            Ok((circ, rep)) => {
                let raw = expand(&circ, k, ExpandMode::Truncated)?;
                let Some((_, lc)) = raw.leading_term() else {
                    return Err(Error::NotAFactor);
                };
                let inv = field.inv(lc)?;
                (circ.scale(&inv), raw.scale(&inv), rep)
            }
            Err(Error::FieldTooSmall { .. }) => {
                // too few interpolation nodes: factor the preprocessed
                // polynomial directly and pick the factor with this boundary
                if dense.is_none() {
                    dense = Some(bivariate_base_factorize(&map.apply(&p.poly)?, seed)?);
                }
                let h = dense
                    .as_ref()
                    .unwrap()
                    .iter()
                    .find(|h| boundary(h).map(|h0| h0.monic() == *b).unwrap_or(false))
                    .ok_or(Error::NotAFactor)?;
                let poly = map.undo(h)?.normalize();
                let circ = Circuit::from_poly(&poly);
                let rep = TransformReport::new("dense_factor", &p.circuit, &circ).with("fallback", "field_too_small");
                (circ, poly, rep)
            }
            Err(e) => return Err(e),
        };
        if poly.total_degree().or_zero() != k || !poly.divides(&p.poly) {
            return Err(Error::NotAFactor);
        }
        prod = prod.mul(&poly);
        out.push((circ, poly, report));
    }
    if prod.normalize() != p.poly.normalize() {
        return Err(Error::NotAFactor);
    }
    Ok(out)
}

/// Irreducibility by exhaustive recombination on the preprocessed
/// polynomial, with no variable reduction.
pub fn oracle_irreducible(g: &Poly, seed: u64) -> Result<Option<bool>> {
    let field = g.field();
    if g.total_degree().or_zero() <= 1 {
        return Ok(Some(!g.is_constant()));
    }
    if !field.is_finite() {
        return Ok(None);
    }
    let map = find_preprocessing(g, 64, seed)?;
    Ok(Some(bivariate_base_factorize(&map.apply(g)?, seed)?.len() == 1))
}

fn multiplicity(f: &Poly, g: &Poly) -> u32 {
    let mut m = 0;
    let mut cur = f.clone();
    while let Ok(q) = cur.exact_div(g) {
        cur = q;
        m += 1;
    }
    m
}

/// Factors the polynomial computed by `c` into irreducibles with
/// multiplicities, emitting a circuit per factor.
pub fn factorize_full(c: &Circuit, cfg: &PipelineConfig) -> Result<FactorizationResult> {
    let field = c.field();
    if !field.is_finite() && cfg.planted.is_none() {
        return Err(Error::InfiniteField);
    }
    let f = expand(c, cfg.degree_cap, ExpandMode::Exact)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let deg = f.total_degree().or_zero();
    let ch = field.characteristic();
    if ch != 0 && ch <= deg as u64 {
        return Err(Error::CharacteristicTooSmall { p: ch, degree: deg });
    }
    let (parts, _) = squarefree_parts(&f)?;

    let mut factors = Vec::new();
    let mut irreducible = Some(true);
    let mut mult_ok = true;
    for part in &parts {
        for (circuit, poly, report) in factor_part(part, cfg)? {
            let m = multiplicity(&f, &poly);
            mult_ok &= m == part.multiplicity;
            irreducible = match (irreducible, oracle_irreducible(&poly, cfg.seed ^ 0x5eed)?) {
                (Some(a), Some(b)) => Some(a && b),
                _ => None,
            };
            factors.push(Factor {
                circuit,
                poly,
                multiplicity: m,
                report,
            });
        }
    }

    let prod = factors
        .iter()
        .fold(Poly::one(field), |acc, g| acc.mul(&g.poly.pow(g.multiplicity)));
    let (reassembly, unit) = match f.exact_div(&prod) {
        Ok(u) if u.is_constant() => (true, u.constant_term()),
        _ => (false, field.zero()),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let vars: Vec<Var> = c.vars().into_iter().collect();
    let mut pit_agree = true;
    for _ in 0..cfg.pit_samples {
        let pt: HashMap<Var, Elem> = vars.iter().map(|&v| (v, field.random(&mut rng))).collect();
        let mut rhs = unit.clone();
        for g in &factors {
            // factor circuits agree with their factor only below degree k
            let pt_g: HashMap<Var, Elem> = g.poly.vars().into_iter().map(|v| (v, pt[&v].clone())).collect();
            rhs = field.mul(&rhs, &field.pow(&g.poly.eval(&pt_g)?, g.multiplicity as u64));
        }
        pit_agree &= c.eval(&pt)? == rhs;
    }

    let certificate = Certificate {
        reassembly,
        irreducible,
        multiplicities: mult_ok,
        pit_samples: cfg.pit_samples,
        pit_agree,
    };
    if !certificate.passed() {
        return Err(Error::CertificateFailed(certificate.to_string()));
    }
    Ok(FactorizationResult {
        factors,
        unit,
        certificate,
    })
}
