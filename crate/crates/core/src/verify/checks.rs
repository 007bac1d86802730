//! One randomized instance per call; `Err` carries a diagnostic.

use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::planted::*;
use crate::circuit::{border_coeff_extract, eval_border, expand, Circuit, ExpandMode, TransformReport};
use crate::error::Error;
use crate::factor::{boundary, factor_circuit, find_preprocessing};
use crate::field::{Elem, Field};
use crate::pipeline::{factorize_full, irreducibility_preservation_check, GeneratorSpec, PipelineConfig};
use crate::poly::{discriminant, gcd, resultant, Poly, PowerSeriesTrunc, Var};
use crate::roots::{charp_root_power, furstenberg_series, newton_root_oracle, root_circuit, root_oracle, SeriesVariant};

const Y: Var = Var::Y;

/// Data an instance reports besides pass or fail.
#[derive(Clone, Debug, Default)]
pub struct InstanceInfo {
    pub reports: Vec<TransformReport>,
    pub notes: Vec<String>,
}

pub type Check = std::result::Result<InstanceInfo, String>;

fn ok() -> Check {
    Ok(InstanceInfo::default())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

trait Diag<T> {
    fn diag(self, what: &str) -> std::result::Result<T, String>;
}

impl<T> Diag<T> for crate::error::Result<T> {
    fn diag(self, what: &str) -> std::result::Result<T, String> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

fn random_point(f: &Field, vars: impl IntoIterator<Item = Var>, rng: &mut ChaCha8Rng) -> HashMap<Var, Elem> {
    vars.into_iter().map(|v| (v, f.random(rng))).collect()
}

/// Field axioms on random elements; Frobenius has order `k` on `F_{p^k}`.
pub fn check_field(f: &Field, rng: &mut ChaCha8Rng) -> Check {
    let (a, b, c) = (f.random(rng), f.random(rng), f.random(rng));
    ensure(f.mul(&f.mul(&a, &b), &c) == f.mul(&a, &f.mul(&b, &c)), || "associativity".into())?;
    ensure(
        f.mul(&a, &f.add(&b, &c)) == f.add(&f.mul(&a, &b), &f.mul(&a, &c)),
        || "distributivity".into(),
    )?;
    ensure(f.is_zero(&f.add(&a, &f.neg(&a))), || "additive inverse".into())?;
    let nz = f.random_nonzero(rng);
    ensure(f.is_one(&f.mul(&nz, &f.inv(&nz).diag("inverse")?)), || "multiplicative inverse".into())?;
    if f.characteristic() != 0 {
        let mut x = a.clone();
        for _ in 0..f.extension_degree() {
            x = f.frobenius(&x);
        }
        ensure(x == a, || "frobenius order".into())?;
    }
    ok()
}

fn bivariate(f: &Field, rng: &mut ChaCha8Rng, dy: u32) -> Poly {
    loop {
        let p = random_poly(f, &[Var::x(1), Y], dy + 1, 0.5, rng);
        if p.degree_in(Y).or_zero() >= 1 {
            return p;
        }
    }
}

/// `Res_y(p, q) = 0` exactly when `gcd(p, q)` involves `y`; half the
/// instances share a planted factor.
pub fn check_resultant_gcd(f: &Field, rng: &mut ChaCha8Rng) -> Check {
    let (dp, dq) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let mut p = bivariate(f, rng, dp);
    let mut q = bivariate(f, rng, dq);
    let planted = rng.gen_bool(0.5);
    if planted {
        let h = bivariate(f, rng, 1);
        p = p.mul(&h);
        q = q.mul(&h);
    }
    let res = resultant(&p, &q, Y).diag("resultant")?;
    let g = gcd(&p, &q).diag("gcd")?;
    let shares = g.degree_in(Y).or_zero() > 0;
    ensure(!planted || shares, || format!("planted factor lost in gcd({p}, {q})"))?;
    ensure(res.is_zero() == shares, || format!("res={res} gcd={g} for {p}, {q}"))?;
    ok()
}

/// `Disc_y(p) = 0` exactly when `p` has a repeated factor involving `y`.
pub fn check_discriminant_squarefree(f: &Field, rng: &mut ChaCha8Rng) -> Check {
    let dp = rng.gen_range(1..=3);
    let mut p = bivariate(f, rng, dp);
    let planted = rng.gen_bool(0.5);
    if planted {
        let h = bivariate(f, rng, 1);
        p = p.mul(&h.pow(2));
    }
    let disc = discriminant(&p, Y).diag("discriminant")?;
    let g = gcd(&p, &p.derivative(Y)).diag("gcd")?;
    let repeated = g.degree_in(Y).or_zero() > 0;
    ensure(!planted || repeated, || format!("planted square missed in {p}"))?;
    ensure(disc.is_zero() == repeated, || format!("disc={disc} gcd={g} for {p}"))?;
    ok()
}

/// A random circuit: evaluation agrees with expansion, text round-trips.
pub fn check_circuit(f: &Field, rng: &mut ChaCha8Rng) -> Check {
    use crate::circuit::Builder;
    let mut b = Builder::new(f);
    let mut ids: Vec<_> = [Var::x(1), Var::x(2), Y].into_iter().map(|v| b.var(v)).collect();
    ids.push(b.constant(f.from_i64(rng.gen_range(1..7))));
    for _ in 0..12 {
        let ch: Vec<_> = (0..rng.gen_range(2..=3)).map(|_| ids[rng.gen_range(0..ids.len())]).collect();
        let g = if rng.gen_bool(0.5) {
            let terms = ch.into_iter().map(|g| (g, f.from_i64(rng.gen_range(-3..4)))).collect();
            b.add(terms)
        } else {
            b.mul(ch)
        };
        ids.push(g);
    }
    let out = *ids.last().unwrap();
    let c = b.finish(out);
    let back = Circuit::parse(f, &c.serialize()).diag("parse")?;
    ensure(back == c, || "serialize round trip".into())?;
    match expand(&c, 64, ExpandMode::Exact) {
        Ok(p) => {
            let pt = random_point(f, c.vars(), rng);
            ensure(c.eval(&pt).diag("eval")? == p.eval(&pt).diag("eval")?, || "eval vs expand".into())?;
        }
        Err(Error::DegreeCapExceeded { .. } | Error::TermLimitExceeded(_)) => {}
        Err(e) => return Err(format!("expand: {e}")),
    }
    ok()
}

/// Coefficients of `t^j`, `j <= d`, through eps-jets on a circuit whose
/// syntactic degree reaches `2^k`.
pub fn check_border(f: &Field, k: u32, rng: &mut ChaCha8Rng) -> Check {
    let d = rng.gen_range(1..=3);
    let (c, a) = border_instance(f, d, k, rng);
    let jet = Field::jet(f, d as usize + 1).diag("jet")?;
    let mut info = InstanceInfo::default();
    for j in 0..=d {
        let (out, rep) = border_coeff_extract(&c, Var::T, j, &jet).diag("extract")?;
        let want = a.coeff_in(Var::T, j);
        for _ in 0..3 {
            let pt = random_point(f, [Var::x(1), Var::x(2)], rng);
            let got = eval_border(&out, &pt).diag("eval")?;
            ensure(got == want.eval(&pt).diag("eval")?, || format!("coefficient t^{j} of {a}"))?;
        }
        info.reports.push(rep);
    }
    Ok(info)
}

fn pick_e(f: &Field, rng: &mut ChaCha8Rng) -> u32 {
    loop {
        let e = rng.gen_range(1..=3u32);
        let p = f.characteristic();
        if p == 0 || e as u64 % p != 0 {
            return e;
        }
    }
}

/// Every series variant against the Newton oracle on a planted root.
pub fn check_series(f: &Field, rng: &mut ChaCha8Rng) -> Check {
    let n = rng.gen_range(1..=3);
    let d = rng.gen_range(1..=10);
    let e = pick_e(f, rng);
    let pr = planted_root(f, n, d, e, 0, rng);
    let want = root_oracle(&pr.p, &pr.root, d).diag("oracle")?;
    ensure(want.poly() == &pr.phi.truncate(d), || "oracle misses the planted root".into())?;
    let mut info = InstanceInfo::default();
    let ch = f.characteristic();
    for v in SeriesVariant::ALL {
        match furstenberg_series(&pr.p, &pr.root, d, v) {
            Ok(s) => ensure(s == want, || format!("{} differs on n={n} d={d} e={e}", v.name()))?,
            Err(Error::CharacteristicTooSmall { .. })
                if v == SeriesVariant::Char0ClosedForm && ch != 0 && ch <= 2 * d as u64 =>
            {
                info.notes.push(format!("{}: inapplicable", v.name()));
            }
            Err(err) => return Err(format!("{}: {err}", v.name())),
        }
    }
    Ok(info)
}

/// The p-power of a planted root of multiplicity `e p^ell`.
pub fn check_charp(f: &Field, rng: &mut ChaCha8Rng) -> Check {
    let p = f.characteristic();
    if p == 0 {
        return Err("characteristic-p suite needs a finite field".into());
    }
    let ell = rng.gen_range(1..=2);
    let e = pick_e(f, rng);
    let d = rng.gen_range(1..=8);
    let n = rng.gen_range(1..=2);
    let pr = planted_root(f, n, d, e, ell, rng);
    let q = (p as u32).pow(ell);
    let want = PowerSeriesTrunc::new(pr.phi.clone(), d).pow(q);
    for v in [SeriesVariant::Diagonal, SeriesVariant::HasseClosedForm] {
        let got = charp_root_power(&pr.p, &pr.root, d, v).diag(v.name())?;
        ensure(got == want, || format!("{} differs on ell={ell} e={e} d={d}", v.name()))?;
    }
    ok()
}

/// `root_circuit` on a depth-3 input against the Newton oracle.
pub fn check_root_circuit(c: &Circuit, d: u32) -> Check {
    let f = c.field();
    let p = expand(c, 3, ExpandMode::Exact).diag("expand input")?;
    let want = newton_root_oracle(&p, &f.zero(), d).diag("oracle")?;
    let (out, rep) = root_circuit(c, d).diag("root_circuit")?;
    let got = expand(&out, d, ExpandMode::Truncated).diag("expand output")?;
    ensure(&got == want.poly(), || format!("root circuit differs at d={d}"))?;
    Ok(InstanceInfo {
        reports: vec![rep],
        notes: Vec::new(),
    })
}

/// Total degree allowed for planted factor-circuit products; rational
/// expansions grow quickly.
pub fn factor_degree_budget(f: &Field) -> u32 {
    if f.characteristic() == 0 {
        3
    } else {
        4
    }
}

/// Factor circuits for every planted factor of a product circuit.
pub fn check_factor_circuit(f: &Field, rng: &mut ChaCha8Rng) -> Check {
    let n = rng.gen_range(1..=3);
    let budget = factor_degree_budget(f);
    let pp = planted_product(f, n, rng.gen_range(2..=3), 2, 1, budget, rng);
    let c = product_circuit(&pp, f);
    let map = find_preprocessing(&pp.product, 64, rng.gen()).diag("preprocess")?;
    let mut info = InstanceInfo::default();
    let mut prod = Poly::one(f);
    for (g, _) in &pp.factors {
        let bd = boundary(&map.apply(g).diag("apply")?).diag("boundary")?.monic();
        let (out, rep) = factor_circuit(&c, &map, &bd, None).diag("factor_circuit")?;
        let k = g.total_degree().or_zero();
        let got = expand(&out, k, ExpandMode::Truncated).diag("expand")?.normalize();
        ensure(&got == g, || format!("factor {g} of {}, got {got}", pp.product))?;
        prod = prod.mul(&got);
        info.reports.push(rep);
    }
    ensure(prod.normalize() == pp.product.normalize(), || "reassembly".into())?;
    Ok(info)
}

/// Full pipeline on a planted product with repeated factors.
pub fn check_pipeline(f: &Field, rng: &mut ChaCha8Rng) -> Check {
    let n = rng.gen_range(1..=3);
    let pp = planted_product(f, n, rng.gen_range(1..=3), 3, 3, 10, rng);
    let c = product_circuit(&pp, f);
    let cfg = PipelineConfig {
        seed: rng.gen(),
        ..PipelineConfig::default()
    };
    let r = factorize_full(&c, &cfg).diag("factorize")?;
    let mut got: Vec<(String, u32)> = r.factors.iter().map(|g| (g.poly.normalize().to_string(), g.multiplicity)).collect();
    let mut want: Vec<(String, u32)> = pp.factors.iter().map(|(g, m)| (g.to_string(), *m)).collect();
    got.sort();
    want.sort();
    ensure(got == want, || format!("factors {got:?}, planted {want:?}"))?;
    ensure(r.certificate.passed(), || r.certificate.to_string())?;
    Ok(InstanceInfo {
        reports: r.factors.into_iter().map(|g| g.report).collect(),
        notes: vec![r.certificate.to_string()],
    })
}

/// Random-affine generator with two `w` variables on a hypothesis-satisfying
/// instance; `Err` when the factorization pattern changes.
pub fn check_preservation(f: &Field, rng: &mut ChaCha8Rng) -> Check {
    let n = rng.gen_range(1..=3);
    let fx = preservation_instance(f, n, rng);
    let gen = GeneratorSpec::affine(f, &xs(n), 2, rng.gen());
    let r = irreducibility_preservation_check(&fx, &gen, rng.gen()).diag("check")?;
    ensure(r.preserved, || format!("not preserved: {r:?} on {fx}"))?;
    Ok(InstanceInfo {
        reports: Vec::new(),
        notes: vec![format!("factors={}", r.factors_before)],
    })
}
