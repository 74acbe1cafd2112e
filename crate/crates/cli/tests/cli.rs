use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn cycloid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycloid"))
        .args(args)
        .env_remove("CYCLOID_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn eigenvalues(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn regular_octagon_spectrum() {
    let ball = fixture("regular8.json");
    let text = stdout(&cycloid(&["spectrum", "--ball", ball.to_str().unwrap()]));
    assert!(text.starts_with("index,k_label,branch,eigenvalue,class,cusps\n"));
    let ev = eigenvalues(&text);
    assert_eq!(ev.len(), 8);
    let top = 1.0 / (std::f64::consts::PI / 8.0).sin().powi(2);
    assert!((ev[7] - top).abs() < 1e-9);
    assert!((ev[7] - 6.828427).abs() < 1e-6);
}

#[test]
fn two_turns_keep_the_old_eigenvalues() {
    let ball = fixture("regular8.json");
    let one = eigenvalues(&stdout(&cycloid(&[
        "spectrum",
        "--ball",
        ball.to_str().unwrap(),
    ])));
    let text = stdout(&cycloid(&[
        "spectrum",
        "--ball",
        ball.to_str().unwrap(),
        "--turns",
        "2",
    ]));
    assert!(text.lines().next().unwrap().ends_with(",k_fractional"));
    let two = eigenvalues(&text);
    assert_eq!(two.len(), 16);
    for l in one {
        assert!(two.iter().any(|m| (m - l).abs() < 1e-9), "{l} missing");
    }
}

#[test]
fn gallery_has_one_svg_per_cycloid() {
    let dir = tempfile::tempdir().unwrap();
    let ball = fixture("octagon.json");
    stdout(&cycloid(&[
        "cycloids",
        "--ball",
        ball.to_str().unwrap(),
        "--render",
        dir.path().to_str().unwrap(),
    ]));
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8);
    assert_eq!(names[0], "cycloid_k0_0.svg");
    assert!(names.contains(&"cycloid_k3_2.svg".to_string()));
    let svg = fs::read_to_string(dir.path().join("cycloid_k2_1.svg")).unwrap();
    assert!(svg.contains("version=\"1.1\""));
    assert_eq!(svg.matches("<circle").count(), 4);
}

#[test]
fn output_is_deterministic() {
    let ball = fixture("octagon.json");
    let args = [
        "cycloids",
        "--ball",
        ball.to_str().unwrap(),
        "--format",
        "json",
    ];
    assert_eq!(stdout(&cycloid(&args)), stdout(&cycloid(&args)));
}

#[test]
fn out_dir_receives_named_file() {
    let dir = tempfile::tempdir().unwrap();
    let ball = fixture("octagon.json");
    stdout(&cycloid(&[
        "dual",
        "--ball",
        ball.to_str().unwrap(),
        "--format",
        "json",
        "--out",
        dir.path().to_str().unwrap(),
    ]));
    let text = fs::read_to_string(dir.path().join("dual.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 8);
    assert_eq!(v["alpha"].as_array().unwrap().len(), 8);
}

#[test]
fn decomposition_of_closed_radii() {
    let radii = fixture("closed_radii.json");
    let text = stdout(&cycloid(&["decompose", "--radii", radii.to_str().unwrap()]));
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 8);
    // eigenvalue-1 coefficients vanish on a closed polygon
    for row in &rows[1..3] {
        assert!(row[4].parse::<f64>().unwrap().abs() < 1e-9);
    }
}

#[test]
fn edgex_counts_and_rejects_open_radii() {
    let closed = fixture("closed_radii.json");
    let text = stdout(&cycloid(&[
        "edgex",
        "--radii",
        closed.to_str().unwrap(),
        "--format",
        "json",
    ]));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["edgex_count"], 4);

    let open = fixture("open_radii.json");
    let out = cycloid(&["edgex", "--radii", open.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not close"));
}

#[test]
fn edgex_fuzz_is_seeded() {
    let a = stdout(&cycloid(&["edgex", "--fuzz", "12", "--seed", "5"]));
    let b = stdout(&cycloid(&["edgex", "--fuzz", "12", "--seed", "5"]));
    assert_eq!(a, b);
    for line in a.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let count: usize = f[3].parse().unwrap();
        let bound = if f[2] == "constant_width" { 6 } else { 4 };
        assert!(count >= bound, "{line}");
    }
}

#[test]
fn spiral_point_count() {
    let ball = fixture("regular8.json");
    let text = stdout(&cycloid(&[
        "spiral",
        "--ball",
        ball.to_str().unwrap(),
        "--lambda",
        "2.5",
        "--laps",
        "10",
    ]));
    assert_eq!(text.lines().count() - 1, 20 * 4 + 1);
}

#[test]
fn render_every_figure() {
    let dir = tempfile::tempdir().unwrap();
    let ball = fixture("octagon.json");
    let radii = fixture("open_radii.json");
    for what in [
        "ball",
        "dual",
        "polygon",
        "evolute",
        "double_evolute",
        "spiral",
    ] {
        stdout(&cycloid(&[
            "render",
            "--what",
            what,
            "--ball",
            ball.to_str().unwrap(),
            "--radii",
            radii.to_str().unwrap(),
            "--lambda",
            "3",
            "--out",
            dir.path().to_str().unwrap(),
        ]));
        let svg = fs::read_to_string(dir.path().join(format!("{what}.svg"))).unwrap();
        assert!(svg.starts_with("<?xml"));
    }
    // the open polygon is drawn as a polyline
    let svg = fs::read_to_string(dir.path().join("polygon.svg")).unwrap();
    assert!(svg.contains("<polyline"));
}

#[test]
fn evolute_matrix_shape() {
    let ball = fixture("regular8.json");
    let text = stdout(&cycloid(&[
        "evolute",
        "--ball",
        ball.to_str().unwrap(),
        "--matrix",
        "--double",
    ]));
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.split(',').count() == 8));
}

#[test]
fn validation_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"vertices": [[1,0],[0,1],[-1,0],[0,-1.2]]}"#).unwrap();
    let out = cycloid(&["spectrum", "--ball", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = cycloid(&["spectrum", "--ball", "/does/not/exist.json"]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(
        cycloid(&["spectrum", "--no-such-flag"]).status.code(),
        Some(1)
    );
    assert_eq!(cycloid(&["--help"]).status.code(), Some(0));
}

#[test]
fn tolerance_from_environment() {
    let ball = fixture("regular8.json");
    let out = Command::new(env!("CARGO_BIN_EXE_cycloid"))
        .args(["spectrum", "--ball", ball.to_str().unwrap()])
        .env("CYCLOID_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = Command::new(env!("CARGO_BIN_EXE_cycloid"))
        .args([
            "spectrum",
            "--ball",
            ball.to_str().unwrap(),
            "--tol",
            "1e-6",
        ])
        .env("CYCLOID_TOL", "-1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
