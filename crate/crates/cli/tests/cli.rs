use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cartier_core::klein;
use cartier_core::text::{format_curve, parse_curve};

fn cartier(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartier")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn klein_files(dir: &Path) -> (PathBuf, PathBuf) {
    let curve = write(dir, "klein.curve", &format!("{}\n", format_curve(&klein::klein_quartic().unwrap())));
    let mut g = String::from("# G0 - G-\n");
    for r in klein::R_IDEALS {
        g.push_str(&format!("{r} 1\n"));
    }
    for p in ["(0:1:0)", "(0:0:1)", "(1:0:0)"] {
        g.push_str(&format!("{p} -1\n"));
    }
    (curve, write(dir, "g.div", &g))
}

#[test]
fn klein_demo_reproduces_the_example() {
    let o = cartier(&["klein-demo"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("rational points 24"));
    assert!(s.contains("h1(G0-G-) = 0"));
    assert!(s.contains("h1(-G-) = 5"));
    assert!(s.contains("Car_2(D, G0-G-)        [21, 6, 8]_2"));
    assert!(s.contains("C_Omega(D, G0-G-)|F_2  [21, 18, 1]_2"));
    assert!(s.contains("Car_2(D, 2G0-G-)       [21, 6, 8]_2"));
    assert!(s.contains("C_Omega(D, 2G0-G-)|F_2 [21, 6, 8]_2"));
    assert!(s.contains("codimension 12 <= 15"));
    assert!(s.contains("dimension bound (direct) 5, Stichtenoth 3, actual 6"));
}

#[test]
fn klein_demo_follows_the_curve() {
    let dir = tempfile::tempdir().unwrap();
    let base = stdout(&cartier(&["klein-demo"]));
    let line = "curve field=field p=2 m=3 modulus=1,1,0,1 gen=w poly=x^3*y + y^3*z + x*z^3 + x^2*y*z";
    let curve = parse_curve(line).unwrap();
    let mut g0 = String::new();
    for p in curve.places_of_degree(2).unwrap().iter().take(3) {
        g0.push_str(&format!("{} 1\n", curve.format_place(p)));
    }
    let cf = write(dir.path(), "c.curve", line);
    let gf = write(dir.path(), "g0.div", &g0);
    let o = cartier(&["klein-demo", "--curve", cf.to_str().unwrap(), "--divisor-G", gf.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert_ne!(s, base);
    let pts = curve.rational_points().unwrap().len();
    assert!(s.contains(&format!("rational points {pts}")));
    assert!(s.contains(&format!("n = {}, q = 2, l = 3", pts - 3)));
    assert!(s.contains("all bounds hold: true"));
}

#[test]
fn goppa_repetition_code() {
    let args = ["goppa", "--field", "field p=2 m=2", "--support", "0,1,w^2", "--gpoly", "w,1"];
    let o = cartier(&args);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("Gamma(L,f) [3, 1, 3]_2\n"));
    let mut bits = args.to_vec();
    bits.extend(["--format", "bits"]);
    assert_eq!(stdout(&cartier(&bits)), "Gamma(L,f) [3, 1, 3]_2\ncode q=2 n=3 k=1\n111\n");
}

#[test]
fn verify_random_goppa_instances() {
    let o = cartier(&["verify", "--theorem", "goppa-eq", "--random", "20", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("20/20 hold\n"));
    for t in ["example-32", "cartier-eq"] {
        let o = cartier(&["verify", "--theorem", t, "--random", "5", "--seed", "1"]);
        assert_eq!(o.status.code(), Some(0), "{t}");
        assert!(stdout(&o).ends_with("5/5 hold\n"));
    }
}

#[test]
fn same_seed_same_report() {
    let args = ["verify", "--theorem", "goppa-eq", "--random", "8", "--seed", "99", "--jobs", "2"];
    let a = cartier(&args);
    let b = cartier(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = cartier(&["verify", "--theorem", "goppa-eq", "--random", "8", "--seed", "100"]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(cartier(&["klein-demo"]).stdout, cartier(&["klein-demo", "--jobs", "1"]).stdout);
}

#[test]
fn theorem_checks_on_files() {
    let dir = tempfile::tempdir().unwrap();
    let (curve, g) = klein_files(dir.path());
    let (c, g) = (curve.to_str().unwrap(), g.to_str().unwrap());
    let g1 = write(dir.path(), "g1.div", "(0:1:0) -1\n(0:0:1) -1\n(1:0:0) -1\n");
    let g1 = g1.to_str().unwrap();

    let o = cartier(&["agcode", "--curve", c, "--divisor-G", g, "--budget", "300000"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "C_Omega(D,G) [21, 20, ?]_8\nC_Omega(D,G)|F_2 [21, 18, 1]_2\n");

    let o = cartier(&["cartier-code", "--curve", c, "--divisor-G", g]);
    assert!(stdout(&o).starts_with("Car_2(D,G) [21, 6, 8]_2\n"));

    let o = cartier(&["verify", "--theorem", "codim", "--curve", c, "--divisor-G", g, "--divisor-G1", g1]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("codimension = 12"));

    for t in ["cartier-eq", "dim-b"] {
        let o = cartier(&["verify", "--theorem", t, "--curve", c, "--divisor-G", g]);
        assert_eq!(o.status.code(), Some(0), "{t}: {}", stdout(&o));
    }
    let o = cartier(&["verify", "--theorem", "dim-a", "--curve", c, "--divisor-G", g, "--divisor-G1", g1]);
    assert_eq!(o.status.code(), Some(0));

    let o = cartier(&["export", "--curve", c, "--divisor-G", g, "--format", "bits"]);
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.len() == 21));
}

#[test]
fn cartier_apply() {
    let line = "curve field=field p=2 poly=P1";
    assert_eq!(stdout(&cartier(&["cartier", "apply", "--curve", line, "--form", "x^3"])), "(x)dx\n");
    assert_eq!(stdout(&cartier(&["cartier", "apply", "--curve", line, "--form", "x^3", "--iterate", "3"])), "0\n");
    let klein = format_curve(&klein::klein_quartic().unwrap());
    assert_eq!(stdout(&cartier(&["cartier", "apply", "--curve", &klein, "--form", "1"])), "0\n");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cartier(&["bogus"]).status.code(), Some(1));
    assert_eq!(cartier(&["goppa", "--field", "field p=4"]).status.code(), Some(1));
    assert_eq!(cartier(&["agcode", "--curve", "/nonexistent/file"]).status.code(), Some(1));
    let o = cartier(&["goppa", "--field", "field p=2 m=2", "--support", "0,0", "--gpoly", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let (curve, g) = klein_files(dir.path());
    let g1 = write(dir.path(), "g1.div", "(0:1:0) 3\n");
    let o = cartier(&[
        "verify",
        "--theorem",
        "codim",
        "--curve",
        curve.to_str().unwrap(),
        "--divisor-G",
        g.to_str().unwrap(),
        "--divisor-G1",
        g1.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypothesis"));
    assert_eq!(cartier(&["--help"]).status.code(), Some(0));
}
