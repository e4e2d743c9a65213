use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(rel: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", rel].iter().collect()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    fs::read_to_string(path).unwrap()
}

fn bkei(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bkei")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Builds `name.kei` into `dir/name.tbl`.
fn table(dir: &TempDir, name: &str) -> PathBuf {
    let out = dir.path().join(format!("{name}.tbl"));
    let o = bkei(&["build", p(&fixture(&format!("presentations/{name}.kei"))), "-o", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn d3(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("d3.tbl");
    fs::write(&path, "3\n0 2 1\n2 1 0\n1 0 2\n").unwrap();
    path
}

#[test]
fn build_reports_sizes_and_lengths() {
    let o = bkei(&["build", p(&fixture("presentations/q43.kei"))]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), golden("build_q43.txt"));
    assert!(stdout(&o).starts_with("81 elements\n"));
    let o = bkei(&["build", p(&fixture("presentations/q34.kei"))]);
    assert_eq!(stdout(&o), golden("build_q34.txt"));
    assert!(stdout(&o).starts_with("96 elements\n"));
    let o = bkei(&["build", p(&fixture("presentations/q25.kei"))]);
    assert!(stdout(&o).starts_with("5 elements\n"));
}

#[test]
fn build_writes_identical_tables() {
    let dir = TempDir::new().unwrap();
    let a = table(&dir, "q43");
    let b = dir.path().join("again.tbl");
    bkei(&["build", p(&fixture("presentations/q43.kei")), "-o", p(&b)]);
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("81\n"));
}

#[test]
fn divergence_has_its_own_exit_code() {
    let o = bkei(&["build", p(&fixture("presentations/q34.kei")), "--max-elements", "20"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("diverged"));
    let o = bkei(&["link", p(&fixture("links/trefoil.pd")), "--burnside", "4", "--max-steps", "5"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn check_reports_one_line_per_flag() {
    let dir = TempDir::new().unwrap();
    let q43 = table(&dir, "q43");
    let o = bkei(&["check", p(&q43), "--burnside", "3", "--behavioral"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "PASS burnside 3\nPASS behavioral\n");

    let q34 = table(&dir, "q34");
    let o = bkei(&[
        "check",
        p(&q34),
        "--kei",
        "--commutative",
        "--power-of-3",
        "--connectivity",
        "--behavioral",
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout(&o), golden("check_q34.txt"));
}

#[test]
fn check_power_of_three_on_a_core() {
    let dir = TempDir::new().unwrap();
    // Core(Z_3^4): x*y = 2y - x coordinatewise
    let m = 81;
    let enc = |v: [usize; 4]| v.iter().fold(0, |acc, d| acc * 3 + d);
    let dec = |x: usize| [x / 27 % 3, x / 9 % 3, x / 3 % 3, x % 3];
    let mut text = format!("{m}\n");
    for x in 0..m {
        let row: Vec<String> = (0..m)
            .map(|y| {
                let (a, b) = (dec(x), dec(y));
                enc([0, 1, 2, 3].map(|i| (2 * b[i] + 3 - a[i]) % 3)).to_string()
            })
            .collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    let path = dir.path().join("core.tbl");
    fs::write(&path, text).unwrap();
    let o = bkei(&["check", p(&path), "--kei", "--power-of-3"]);
    assert_eq!(stdout(&o), "PASS kei\nPASS power-of-3 (81 = 3^4)\n");
    assert_eq!(code(&o), 0);
}

#[test]
fn check_rejects_broken_tables() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.tbl");
    fs::write(&path, "2\n1 0\n0 1\n").unwrap();
    let o = bkei(&["check", p(&path)]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("FAIL kei: axiom i fails at (0)"));
    fs::write(&path, "2\n1 0\n0\n").unwrap();
    assert_eq!(code(&bkei(&["check", p(&path)])), 1);
}

/// Vertices, edges as (from, to, style), from DOT text.
fn parse_dot(text: &str) -> (usize, Vec<(usize, usize, String)>) {
    let mut vertices = 0;
    let mut edges = Vec::new();
    for line in text.lines().map(str::trim) {
        if let Some((lhs, rest)) = line.split_once(" -> ") {
            let (to, attrs) = rest.split_once(' ').unwrap();
            let style = attrs.split("style=").nth(1).unwrap().split(',').next().unwrap();
            edges.push((lhs.parse().unwrap(), to.parse().unwrap(), style.to_string()));
        } else if line.contains("[label=") {
            vertices += 1;
        }
    }
    (vertices, edges)
}

fn weak_components(n: usize, edges: &[(usize, usize, String)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (a, b, _) in edges {
        let (ra, rb) = (find(&mut parent, *a), find(&mut parent, *b));
        parent[ra] = rb;
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

#[test]
fn dot_export_of_q34_has_three_parts() {
    let dir = TempDir::new().unwrap();
    let q34 = table(&dir, "q34");
    let o = bkei(&["export", p(&q34), "--dot"]);
    assert_eq!(code(&o), 0);
    let (n, edges) = parse_dot(&stdout(&o));
    assert_eq!(n, 96);
    assert_eq!(edges.len(), 96 * 3);
    assert_eq!(weak_components(n, &edges), 3);
    let styles: std::collections::BTreeSet<&str> = edges.iter().map(|e| e.2.as_str()).collect();
    assert_eq!(styles.into_iter().collect::<Vec<_>>(), ["dashed", "dotted", "solid"]);
    // the first generator is drawn solid and vertices come in index order
    assert!(edges[0].2 == "solid" && edges[0].0 == 0);
    assert!(edges.windows(2).all(|w| w[0].0 <= w[1].0));
    let again = bkei(&["export", p(&q34), "--dot"]);
    assert_eq!(stdout(&o), stdout(&again));
}

#[test]
fn dot_export_of_q43_has_generator_loops() {
    let dir = TempDir::new().unwrap();
    let q43 = table(&dir, "q43");
    let out = dir.path().join("q43.dot");
    let o = bkei(&["export", p(&q43), "--dot", "-o", p(&out)]);
    assert_eq!(code(&o), 0);
    let (n, edges) = parse_dot(&fs::read_to_string(&out).unwrap());
    assert_eq!(n, 81);
    for g in 0..4 {
        assert!(edges.iter().any(|(a, b, _)| *a == g && *b == g), "no loop at generator {g}");
    }
}

#[test]
fn gap_export_of_q34_presentation() {
    let o = bkei(&["export", p(&fixture("presentations/q34.kei")), "--gap"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text, golden("export_q34_gap.txt"));
    assert!(text.lines().next().unwrap().contains("a^2=b^2=c^2=1"));
}

#[test]
fn gap_export_of_a_table() {
    let dir = TempDir::new().unwrap();
    let o = bkei(&["export", p(&d3(&dir)), "--gap"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("G := F / ["));
}

#[test]
fn link_burnside_and_colorings() {
    let dir = TempDir::new().unwrap();
    let o = bkei(&["link", p(&fixture("links/trefoil.pd")), "--burnside", "4"]);
    assert_eq!((code(&o), stdout(&o)), (0, "1 element\n".to_string()));
    let d3 = d3(&dir);
    let o = bkei(&["link", p(&fixture("links/trefoil.pd")), "--color", p(&d3)]);
    assert_eq!(stdout(&o), "9\n");
    let o = bkei(&["link", p(&fixture("links/unknot.pd")), "--color", p(&d3)]);
    assert_eq!(stdout(&o), "3\n");
    let o = bkei(&["link", p(&fixture("links/trefoil.pd")), "--color", p(&d3), "--require-burnside", "3"]);
    assert_eq!(stdout(&o), "9\n");
    let o = bkei(&["link", p(&fixture("links/trefoil.pd")), "--color", p(&d3), "--require-burnside", "4"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn isomorphic_prints_a_mapping_or_a_verdict() {
    let dir = TempDir::new().unwrap();
    let d4 = dir.path().join("d4.tbl");
    fs::write(&d4, "4\n0 2 0 2\n3 1 3 1\n2 0 2 0\n1 3 1 3\n").unwrap();
    let relabeled = dir.path().join("d4b.tbl");
    // the same kei relabeled by 0->1, 1->3, 2->0, 3->2
    fs::write(&relabeled, "4\n0 0 1 1\n1 1 0 0\n3 3 2 2\n2 2 3 3\n").unwrap();
    let o = bkei(&["isomorphic", p(&d4), p(&relabeled)]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("ISOMORPHIC\n"));
    assert_eq!(text.lines().count(), 5);

    let d3 = d3(&dir);

    let q43 = table(&dir, "q43");
    let o = bkei(&["isomorphic", p(&d3), p(&q43)]);
    assert_eq!((code(&o), stdout(&o)), (2, "NOT ISOMORPHIC\n".to_string()));
}

#[test]
fn usage_and_io_errors_exit_with_one() {
    assert_eq!(code(&bkei(&["frobnicate"])), 1);
    assert_eq!(code(&bkei(&["check", "/nonexistent/table"])), 1);
    assert_eq!(code(&bkei(&["export", p(&fixture("presentations/q34.kei"))])), 1);
    assert_eq!(code(&bkei(&["--threads", "0", "build", p(&fixture("presentations/q23.kei"))])), 1);
    assert_eq!(code(&bkei(&["--help"])), 0);
    let o = bkei(&["--threads", "2", "build", p(&fixture("presentations/q23.kei"))]);
    assert_eq!((code(&o), stdout(&o).lines().next()), (0, Some("3 elements")));
}
