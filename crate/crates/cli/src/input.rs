//! Reading circuits, polynomials and points.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use fkit_core::circuit::Circuit;
use fkit_core::field::{Elem, Field};
use fkit_core::poly::{Poly, Var};
use fkit_core::Error;

#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, std::io::Error),
    Usage(String),
    Core(Error),
    VerificationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed(_) => 1,
            CliError::Core(Error::CertificateFailed(_)) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::VerificationFailed(n) => write!(f, "{n} instance(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// `.poly` files hold polynomial text; anything else is circuit text,
/// line-oriented or a single s-expression.
pub fn load_circuit(field: &Field, path: &Path) -> CliResult<Circuit> {
    let text = read(path)?;
    if path.extension().is_some_and(|e| e == "poly") {
        return Ok(Circuit::from_poly(&Poly::parse(field, text.trim())?));
    }
    let body = text.trim_start();
    Ok(if body.starts_with('(') {
        Circuit::parse_sexpr(field, body)?
    } else {
        Circuit::parse(field, &text)?
    })
}

pub fn load_poly(field: &Field, path: &Path) -> CliResult<Poly> {
    Ok(Poly::parse(field, read(path)?.trim())?)
}

/// `x1=3,y=1/2` into a point.
pub fn parse_point(field: &Field, s: &str) -> CliResult<HashMap<Var, Elem>> {
    let mut out = HashMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("expected name=value, found `{part}`")))?;
        out.insert(Var::parse(k.trim())?, field.parse_elem(v.trim())?);
    }
    Ok(out)
}

pub fn parse_elems(field: &Field, s: &str) -> CliResult<Vec<Elem>> {
    s.split(',')
        .map(|v| Ok(field.parse_elem(v.trim())?))
        .collect()
}
