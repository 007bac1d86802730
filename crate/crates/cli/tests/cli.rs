use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fkit_core::circuit::{expand, Circuit, ExpandMode, TransformReport};
use fkit_core::field::make_field;
use fkit_core::poly::Poly;

const EX1: &str = "\
g0=var x1
g1=var x2
g2=const 1
g3=add g0 g1 g2
g4=mul g0 g1
g5=const 2
g6=add g4 g5
g7=mul g3 g3 g6
out g7
";

// (x1 + x2 + 1)(x1 x2 + 2)
const SQUAREFREE: &str = "g0=var x1; g1=var x2; g2=const 1; g3=add g0 g1 g2; g4=mul g0 g1; g5=const 2; g6=add g4 g5; g7=mul g3 g6; out g7";

fn fkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fkit"))
        .args(args)
        .env_remove("FKIT_SEED")
        .output()
        .expect("spawn fkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn kv<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn factorize_planted_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex1.circ", EX1);
    let out_dir = dir.path().join("out");
    let o = fkit(&["factorize", "--field", "Fp:101", &input, "--emit-circuits", out_dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(kv(&text, "factors"), Some("2"));
    assert!(kv(&text, "certificate").unwrap().starts_with("verdict=ok"));

    let f = make_field("Fp:101").unwrap();
    let mut mults = Vec::new();
    for i in 1..=2 {
        let circ = fs::read_to_string(out_dir.join(format!("factor_{i}.circ"))).unwrap();
        let c = Circuit::parse(&f, &circ).unwrap();
        let p = expand(&c, 16, ExpandMode::Exact).unwrap();
        let listed = Poly::parse(&f, kv(&text, &format!("factor_{i}")).unwrap()).unwrap();
        assert_eq!(p, listed);
        mults.push(kv(&text, &format!("multiplicity_{i}")).unwrap().parse::<u32>().unwrap());
    }
    mults.sort();
    assert_eq!(mults, [1, 2]);
    assert!(out_dir.join("result.txt").exists());
    assert!(!out_dir.join("factor_3.circ").exists());

    // the stored reports render as a growth table
    let o = fkit(&["report", out_dir.join("result.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let table = stdout(&o);
    let mut lines = table.lines();
    assert!(lines.next().unwrap().starts_with("construction"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn factorize_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex1.circ", EX1);
    let a = fkit(&["factorize", "--field", "Fp:101", "--seed", "7", &input]);
    let b = fkit(&["factorize", "--field", "Fp:101", "--seed", "7", &input]);
    assert_eq!(stdout(&a), stdout(&b));
    let c = Command::new(env!("CARGO_BIN_EXE_fkit"))
        .args(["factorize", "--field", "Fp:101", &input])
        .env("FKIT_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(stdout(&a), stdout(&c));
}

#[test]
fn verify_roots_over_q() {
    let o = fkit(&["verify", "roots", "--field", "Q", "--instances", "100", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.contains("suite=roots") && l.contains("passed=100/100")), "{text}");
}

#[test]
fn verify_failure_exit_code() {
    // Frobenius-power roots need positive characteristic
    let o = fkit(&["verify", "charp", "--field", "Q", "--instances", "3"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn root_series_catalan() {
    let o = fkit(&["root-series", "--variant", "closed0", "--precision", "5", "--poly", "y^2 - y + t"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let f = make_field("Q").unwrap();
    let got = Poly::parse(&f, text.lines().next().unwrap()).unwrap();
    // root through 0 is sum C_{n-1} t^n
    let cat = |n: u64| -> u64 { (0..n).fold(1, |c, k| c * 2 * (2 * k + 1) / (k + 2)) };
    let want: Vec<String> = (1..=5).map(|n| format!("{}*t^{n}", cat(n - 1))).collect();
    assert_eq!(got, Poly::parse(&f, &want.join(" + ")).unwrap());
    let rep = TransformReport::parse_all(text.split_once("\n\n").unwrap().1).unwrap();
    assert_eq!(rep[0].get("variant"), Some("closed0"));
}

#[test]
fn outputs_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "ex1.circ", EX1);
    let f = make_field("Q").unwrap();
    let want = expand(&Circuit::parse(&f, EX1).unwrap(), 16, ExpandMode::Exact).unwrap();

    let o = fkit(&["expand", &input]);
    assert_eq!(Poly::parse(&f, stdout(&o).trim()).unwrap(), want);

    let o = fkit(&["eval", &input, "--at", "x1=1,x2=1/2"]);
    assert_eq!(f.parse_elem(stdout(&o).trim()).unwrap(), f.parse_elem("125/8").unwrap());

    let o = fkit(&["metrics", &input]);
    let m = stdout(&o);
    assert_eq!(kv(&m, "syntactic_degree"), Some("4"));
    assert_eq!(kv(&m, "vars"), Some("x1,x2"));

    let o = fkit(&["coeff", &input, "--var", "x2", "--index", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let (circ, rep) = text.split_once("\n\n").unwrap_or((&text, ""));
    let c = Circuit::parse(&f, circ).unwrap();
    let got = expand(&c, 16, ExpandMode::Exact).unwrap();
    // coefficient of x2^2 in (x1+x2+1)^2 (x1 x2 + 2)
    assert_eq!(got, Poly::parse(&f, "2*x1^2 + 2*x1 + 2").unwrap());
    assert!(rep.contains("construction="));
    // the s-expression form is accepted too
    let sx = write(dir.path(), "s.circ", "(* (+ x1 1) (+ x1 1))");
    assert_eq!(stdout(&fkit(&["expand", &sx])).trim(), stdout(&fkit(&["expand", &write(dir.path(), "s.poly", "x1^2+2*x1+1")])).trim());
}

#[test]
fn factor_circuit_with_and_without_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "sf.circ", SQUAREFREE);
    let base = ["factor-circuit", "--field", "Fp:101", input.as_str()];
    let o = fkit(&base);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let (a, b) = (kv(&text, "a").unwrap().to_owned(), kv(&text, "b").unwrap().to_owned());
    let f = make_field("Fp:101").unwrap();
    let full = Poly::parse(&f, kv(&text, "full_boundary").unwrap()).unwrap();
    assert_eq!(full.total_degree().or_zero(), 3);

    // x1 + x2 + 1 at (a y + b) vanishes at y = -(b1 + b2 + 1) / (a1 + a2)
    let el = |s: &str| -> Vec<_> { s.split(',').map(|v| f.parse_elem(v).unwrap()).collect() };
    let (av, bv) = (el(&a), el(&b));
    let num = f.add(&f.add(&bv[0], &bv[1]), &f.one());
    let r = f.neg(&f.div(&num, &f.add(&av[0], &av[1])).unwrap());
    let uni = full.to_uni(fkit_core::poly::Var::Y).unwrap();
    assert!(f.is_zero(&uni.eval(&r)));
    let bd = format!("y - {}", f.format_elem(&r));
    let mut args = base.to_vec();
    args.extend(["--a", &a, "--b", &b, "--boundary", &bd]);
    let o = fkit(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let (circ, _) = text.split_once("\n\n").unwrap_or((&text, ""));
    // components above the boundary degree are not part of the factor
    let g = expand(&Circuit::parse(&f, circ).unwrap(), 1, ExpandMode::Truncated).unwrap();
    let want = expand(&Circuit::parse(&f, SQUAREFREE).unwrap(), 16, ExpandMode::Exact).unwrap();
    assert!(g.divides(&want));
    assert_eq!(g.total_degree().or_zero(), 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fkit(&["expand", "--field", "Fp:100", "nowhere.circ"]).status.code(), Some(2));
    assert_eq!(fkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fkit(&["expand", "/no/such/file.circ"]).status.code(), Some(2));
    assert_eq!(fkit(&["--degree-cap", "0", "metrics", "x.circ"]).status.code(), Some(2));
}
