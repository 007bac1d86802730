//! Randomized verification suites shared by the test harness and the CLI.
//!
//! Each suite draws seeded instances with known answers and checks a
//! construction against an independent oracle.

mod checks;
mod planted;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use checks::*;
pub use planted::*;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Field,
    Resultant,
    Discriminant,
    Circuit,
    Border,
    Roots,
    CharP,
    Factor,
    Pipeline,
    Preservation,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Field,
        Suite::Resultant,
        Suite::Discriminant,
        Suite::Circuit,
        Suite::Border,
        Suite::Roots,
        Suite::CharP,
        Suite::Factor,
        Suite::Pipeline,
        Suite::Preservation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Field => "field",
            Suite::Resultant => "resultant",
            Suite::Discriminant => "discriminant",
            Suite::Circuit => "circuit",
            Suite::Border => "border",
            Suite::Roots => "roots",
            Suite::CharP => "charp",
            Suite::Factor => "factor",
            Suite::Pipeline => "pipeline",
            Suite::Preservation => "preservation",
        }
    }

    /// Suites covering a module name.
    pub fn for_module(name: &str) -> Result<Vec<Suite>> {
        Ok(match name {
            "field" => vec![Suite::Field],
            "poly" => vec![Suite::Resultant, Suite::Discriminant],
            "circuit" => vec![Suite::Circuit, Suite::Border],
            "roots" => vec![Suite::Roots],
            "factor" => vec![Suite::Factor],
            "pipeline" => vec![Suite::Pipeline, Suite::Preservation],
            other => vec![other.parse()?],
        })
    }

    fn run_one(self, f: &Field, rng: &mut ChaCha8Rng) -> Check {
        match self {
            Suite::Field => check_field(f, rng),
            Suite::Resultant => check_resultant_gcd(f, rng),
            Suite::Discriminant => check_discriminant_squarefree(f, rng),
            Suite::Circuit => check_circuit(f, rng),
            Suite::Border => {
                let k = rand::Rng::gen_range(rng, 0..=10);
                check_border(f, k, rng)
            }
            Suite::Roots => check_series(f, rng),
            Suite::CharP => check_charp(f, rng),
            Suite::Factor => check_factor_circuit(f, rng),
            Suite::Pipeline => check_pipeline(f, rng),
            Suite::Preservation => check_preservation(f, rng),
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnsupportedDescriptor(format!("suite `{s}`")))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub field: String,
    pub total: usize,
    pub passed: usize,
    /// `(instance, diagnostic)` in instance order.
    pub failures: Vec<(usize, String)>,
    pub depth_increments: BTreeSet<i64>,
    /// Distinct notes with their counts.
    pub notes: Vec<(String, usize)>,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "suite={} field={} passed={}/{}", self.suite.name(), self.field, self.passed, self.total)?;
        if !self.depth_increments.is_empty() {
            let incs: Vec<String> = self.depth_increments.iter().map(|d| d.to_string()).collect();
            write!(f, " depth_increments={}", incs.join(","))?;
        }
        for (note, count) in &self.notes {
            write!(f, "\n  note: {note} (x{count})")?;
        }
        for (i, msg) in &self.failures {
            write!(f, "\n  instance {i}: {msg}")?;
        }
        Ok(())
    }
}

/// Seed of instance `i`; independent of the worker layout.
pub fn instance_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
}

/// Runs `instances` seeded instances across worker threads.
pub fn run_suite(suite: Suite, field: &Field, instances: usize, seed: u64) -> SuiteOutcome {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(instances.max(1));
    let mut results: Vec<(usize, Check)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                s.spawn(move || {
                    (w..instances)
                        .step_by(workers)
                        .map(|i| {
                            let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(seed, i));
                            (i, suite.run_one(field, &mut rng))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    results.sort_by_key(|(i, _)| *i);

    let mut out = SuiteOutcome {
        suite,
        field: field.descriptor(),
        total: instances,
        passed: 0,
        failures: Vec::new(),
        depth_increments: BTreeSet::new(),
        notes: Vec::new(),
    };
    for (i, r) in results {
        match r {
            Ok(info) => {
                out.passed += 1;
                out.depth_increments.extend(info.reports.iter().map(|r| r.depth_increment));
                for n in info.notes {
                    match out.notes.iter_mut().find(|(m, _)| *m == n) {
                        Some((_, c)) => *c += 1,
                        None => out.notes.push((n, 1)),
                    }
                }
            }
            Err(msg) => out.failures.push((i, msg)),
        }
    }
    out
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_exponent(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[cfg(test)]
mod tests;
