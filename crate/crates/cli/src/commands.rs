use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use fkit_core::circuit::{coeff_extract_circuit, expand, Circuit, ExpandMode, TransformReport};
use fkit_core::factor::{factor_circuit, find_preprocessing, PreprocessMap};
use fkit_core::field::{make_field_seeded, Field};
use fkit_core::pipeline::{factorize_full, FactorizationResult, PipelineConfig};
use fkit_core::poly::{Poly, RootSpec, Var};
use fkit_core::roots::{charp_root_power, furstenberg_series, root_oracle, SeriesVariant};
use fkit_core::verify::{run_suite, Suite};

use crate::input::*;
use crate::{Cli, Command, RunConfig};

pub fn run(cli: &Cli) -> CliResult<ExitCode> {
    let cfg = &cli.run;
    let field = make_field_seeded(&cfg.field, cfg.seed)?;
    match &cli.command {
        Command::Expand { input, truncated } => {
            let c = load_circuit(&field, input)?;
            let mode = if *truncated { ExpandMode::Truncated } else { ExpandMode::Exact };
            println!("{}", expand(&c, cfg.degree_cap, mode)?);
        }
        Command::Eval { input, at } => {
            let c = load_circuit(&field, input)?;
            let pt = parse_point(&field, at)?;
            println!("{}", field.format_elem(&c.eval(&pt)?));
        }
        Command::Metrics { input } => {
            let c = load_circuit(&field, input)?;
            let m = c.metrics();
            let vars: Vec<String> = c.vars().iter().map(|v| v.to_string()).collect();
            println!("size={}\ndepth={}\nsyntactic_degree={}", m.size, m.depth, m.degree);
            println!("gates={}\nvars={}", c.num_gates(), vars.join(","));
        }
        Command::Coeff {
            input,
            var,
            index,
            degree_bound,
        } => {
            let c = load_circuit(&field, input)?;
            let v = Var::parse(var)?;
            let d = match degree_bound {
                Some(d) => *d,
                None => *c.syntactic_degrees(|w| w == v).get(c.output()).unwrap_or(&0) as u32,
            };
            let (out, rep) = coeff_extract_circuit(&c, v, *index, d.max(*index))?;
            print!("{}\n{rep}", out.serialize());
        }
        Command::RootSeries {
            input,
            poly,
            variant,
            precision,
            alpha,
            e,
            ell,
        } => root_series(cfg, &field, input.as_deref(), poly.as_deref(), variant, *precision, alpha, *e, *ell)?,
        Command::FactorCircuit {
            input,
            boundary,
            precision,
            a,
            b,
        } => {
            let c = load_circuit(&field, input)?;
            let p = expand(&c, cfg.degree_cap, ExpandMode::Exact)?;
            let map = match (a, b) {
                (Some(a), Some(b)) => {
                    let m = PreprocessMap::new(p.x_vars(), parse_elems(&field, a)?, parse_elems(&field, b)?, p.total_degree().or_zero());
                    m.validate(&p)?;
                    m
                }
                (None, None) => find_preprocessing(&p, 64, cfg.seed)?,
                _ => return Err(CliError::Usage("--a and --b go together".into())),
            };
            let full = fkit_core::factor::boundary(&map.apply(&p)?)?;
            let Some(bd) = boundary else {
                // no boundary: report the map so that one can be chosen
                println!("a={}\nb={}", join(&field, &map.a), join(&field, &map.b));
                println!("full_boundary={}", Poly::from_uni(&full, Var::Y));
                return Ok(ExitCode::SUCCESS);
            };
            let bd = Poly::parse(&field, bd)?.to_uni(Var::Y)?;
            let (out, rep) = factor_circuit(&c, &map, &bd, *precision)?;
            let rep = rep.with("a", join(&field, &map.a)).with("b", join(&field, &map.b));
            print!("{}\n{rep}", out.serialize());
        }
        Command::Factorize {
            input,
            generator,
            emit_circuits,
            planted,
        } => {
            let c = load_circuit(&field, input)?;
            let planted = if planted.is_empty() {
                None
            } else {
                Some(planted.iter().map(|p| load_poly(&field, p)).collect::<CliResult<Vec<_>>>()?)
            };
            let pc = PipelineConfig {
                degree_cap: cfg.degree_cap,
                generator: generator.clone(),
                seed: cfg.seed,
                planted,
                ..PipelineConfig::default()
            };
            let r = factorize_full(&c, &pc)?;
            let text = render_result(&field, &pc, &r);
            print!("{text}");
            if let Some(dir) = emit_circuits {
                fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.clone(), e))?;
                for (i, g) in r.factors.iter().enumerate() {
                    let path = dir.join(format!("factor_{}.circ", i + 1));
                    fs::write(&path, g.circuit.serialize()).map_err(|e| CliError::Io(path, e))?;
                }
                let path = dir.join("result.txt");
                fs::write(&path, &text).map_err(|e| CliError::Io(path, e))?;
            }
        }
        Command::Verify { module, instances } => {
            let mut failed = 0;
            for s in Suite::for_module(module)? {
                let out = run_suite(s, &field, *instances, cfg.seed);
                println!("{out}");
                failed += out.total - out.passed;
            }
            if failed > 0 {
                return Err(CliError::VerificationFailed(failed));
            }
        }
        Command::Report { files } => {
            let mut reports = Vec::new();
            for f in files {
                reports.extend(reports_in(&read(f)?)?);
            }
            print!("{}", growth_table(&reports));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn join(field: &Field, xs: &[fkit_core::Elem]) -> String {
    xs.iter().map(|x| field.format_elem(x)).collect::<Vec<_>>().join(",")
}

#[allow(clippy::too_many_arguments)]
fn root_series(
    cfg: &RunConfig,
    field: &Field,
    input: Option<&std::path::Path>,
    poly: Option<&str>,
    variant: &str,
    d: u32,
    alpha: &str,
    e: u32,
    ell: u32,
) -> CliResult<()> {
    let p = match (input, poly) {
        (_, Some(s)) => Poly::parse(field, s)?,
        (Some(path), None) => expand(&load_circuit(field, path)?, cfg.degree_cap, ExpandMode::Exact)?,
        (None, None) => return Err(CliError::Usage("pass an input file or --poly".into())),
    };
    let root = RootSpec {
        alpha: field.parse_elem(alpha)?,
        e,
        ell,
    };
    let series = match (variant, ell) {
        ("newton", 0) => root_oracle(&p, &root, d)?,
        ("newton", _) => return Err(CliError::Usage("newton supports ell = 0 only".into())),
        (v, 0) => furstenberg_series(&p, &root, d, v.parse::<SeriesVariant>()?)?,
        (v, _) => charp_root_power(&p, &root, d, v.parse::<SeriesVariant>()?)?,
    };
    let rep = TransformReport::new("root_series", &Circuit::from_poly(&p), &Circuit::from_poly(series.poly()))
        .with("variant", variant)
        .with("precision", d)
        .with("e", e)
        .with("ell", ell);
    print!("{}\n\n{rep}", series.poly());
    Ok(())
}

fn render_result(field: &Field, pc: &PipelineConfig, r: &FactorizationResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "field={}", field.descriptor());
    let _ = writeln!(s, "generator={}", pc.generator);
    let _ = writeln!(s, "seed={}", pc.seed);
    let _ = writeln!(s, "unit={}", field.format_elem(&r.unit));
    let _ = writeln!(s, "factors={}", r.factors.len());
    for (i, g) in r.factors.iter().enumerate() {
        let _ = writeln!(s, "factor_{}={}", i + 1, g.poly);
        let _ = writeln!(s, "multiplicity_{}={}", i + 1, g.multiplicity);
    }
    let _ = writeln!(s, "certificate={}", r.certificate);
    for g in &r.factors {
        let _ = write!(s, "\n{}", g.report);
    }
    s
}

/// Report records among blank-line separated blocks; other blocks are
/// skipped.
fn reports_in(text: &str) -> CliResult<Vec<TransformReport>> {
    let blocks: Vec<&str> = text
        .split("\n\n")
        .filter(|b| b.lines().any(|l| l.trim_start().starts_with("construction=")))
        .collect();
    Ok(TransformReport::parse_all(&blocks.join("\n\n"))?)
}

fn growth_table(reports: &[TransformReport]) -> String {
    let header = ["construction", "in_size", "in_depth", "out_size", "out_depth", "depth_inc", "size_ratio"];
    let rows: Vec<Vec<String>> = reports
        .iter()
        .map(|r| {
            vec![
                r.construction.clone(),
                r.input_size.to_string(),
                r.input_depth.to_string(),
                r.output_size.to_string(),
                r.output_depth.to_string(),
                r.depth_increment.to_string(),
                format!("{:.2}", r.output_size as f64 / r.input_size.max(1) as f64),
            ]
        })
        .collect();
    let widths: Vec<usize> = (0..header.len())
        .map(|i| rows.iter().map(|r| r[i].len()).chain([header[i].len()]).max().unwrap())
        .collect();
    let mut s = String::new();
    let fmt_row = |cells: Vec<&str>, s: &mut String| {
        let line: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        let _ = writeln!(s, "{}", line.join("  ").trim_end());
    };
    fmt_row(header.to_vec(), &mut s);
    for r in &rows {
        fmt_row(r.iter().map(String::as_str).collect(), &mut s);
    }
    s
}
