use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hochschild")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// `(degree, homology, exact)` from `--format records` output.
fn records(o: &Output) -> Vec<(usize, usize, bool)> {
    stdout(o)
        .lines()
        .map(|line| {
            let field = |key: &str| {
                line.split_whitespace()
                    .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
                    .unwrap_or_else(|| panic!("no {key} in {line}"))
                    .to_string()
            };
            (field("degree").parse().unwrap(), field("homology").parse().unwrap(), field("exact") == "true")
        })
        .collect()
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn circle_homology_of_dual_numbers() {
    let o = run(&["homology", "--format", "records", "--nmax", "6"]);
    assert!(o.status.success());
    let rows = records(&o);
    assert_eq!(rows.len(), 7);
    let exact: Vec<usize> = rows.iter().filter(|r| r.2).map(|r| r.1).collect();
    assert_eq!(exact, vec![2, 1, 1, 1, 1, 1]);
    assert!(!rows[6].2);
}

#[test]
fn three_sphere_table() {
    let o = run(&["homology", "--sphere", "3", "--nmax", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("upper bound"));
    let o = run(&["homology", "--sphere", "3", "--nmax", "4", "--format", "records"]);
    let h: Vec<usize> = records(&o).iter().map(|r| r.1).collect();
    assert_eq!(&h[..3], &[2, 0, 0]);
}

#[test]
fn cohomology_in_degree_zero_is_the_module() {
    for d in ["1", "2", "3"] {
        let o = run(&["cohomology", "--sphere", d, "--nmax", "3", "--format", "records"]);
        assert!(o.status.success(), "d={d}");
        assert_eq!(records(&o)[0].1, 2, "d={d}");
    }
}

#[test]
fn describe_counts_positions() {
    let o = run(&["describe", "--sphere", "3", "--nmax", "4"]);
    assert!(o.status.success());
    let rows: Vec<Vec<usize>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows[3], vec![3, 2, 4, 35, 34]);
    assert_eq!(rows[4], vec![4, 5, 32, 56, 52]);
}

#[test]
fn verify_passes_and_reports_corruption() {
    for (d, n) in [("3", "3"), ("2", "4")] {
        let o = run(&["verify", "--sphere", d, "--nmax", n]);
        assert!(o.status.success(), "d={d}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
    let o = run(&["verify", "--sphere", "2", "--nmax", "4", "--corrupt", "delta"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["verify", "--sphere", "2", "--nmax", "3", "--corrupt", "phi"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["homology", "--algebra", "file:/nonexistent/alg.txt"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "--algebra", "builtin:matrix:2"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "--sphere", "0"]).status.code(), Some(2));
    let o = run(&["homology", "--sphere", "3", "--nmax", "6", "--cap", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degree 5"));
}

const DUAL_NUMBERS: &str = "\
# k[x]/(x^2) acting on k through x = 0
algebra dim=2 field=gfp:7
unit 1 0
mul 0 0 1 0
mul 0 1 0 1
mul 1 0 0 1
module dim=1
act 0 0 1
";

#[test]
fn algebra_files() {
    let file = temp_file(DUAL_NUMBERS);
    let arg = format!("file:{}", file.path().display());
    let o = run(&["homology", "--algebra", &arg, "--nmax", "4", "--format", "records"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // Tor over k[x]/x² of k with k is one-dimensional in every degree.
    let h: Vec<usize> = records(&o).iter().filter(|r| r.2).map(|r| r.1).collect();
    assert_eq!(h, vec![1, 1, 1, 1]);
    let o = run(&["homology", "--algebra", &arg, "--field", "gfp:101"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["homology", "--algebra", &arg, "--field", "gfp:7", "--nmax", "2"]);
    assert!(o.status.success());
    let broken = temp_file("algebra dim=2 field=gfp:7\nunit 1 0\nmul 0 0 1\n");
    let o = run(&["homology", "--algebra", &format!("file:{}", broken.path().display())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn loday_over_a_simplicial_file() {
    let circle = temp_file("simplicial max_level=1\nlevel 0 size=1\nlevel 1 size=2\nface 1 0: 0 0\nface 1 1: 0 0\n");
    let o = run(&["loday", circle.path().to_str().unwrap(), "--format", "records"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = records(&o);
    assert_eq!(rows[0], (0, 2, true));
}
