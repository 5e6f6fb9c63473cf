//! End-to-end checks of the `isoasym` binary: exit-code contract, OBJ
//! output shape, and coefficient sweeps.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_isoasym");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tmp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("isoasym-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn list_prints_all_presets_in_stable_order() {
    let out = run(&["list"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let ids: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(
        ids,
        ["ex3_1", "ex4_1", "ex4_2", "helicoid1", "helicoid2", "helicoid3", "enneper2", "cylinder", "negcontrol"]
    );
}

#[test]
fn verify_exit_codes() {
    assert_eq!(exit_code(&run(&["verify", "helicoid1"])), 0);
    assert_eq!(exit_code(&run(&["verify", "negcontrol"])), 1);
    assert_eq!(exit_code(&run(&["verify", "no_such_preset"])), 2);

    // alias resolves; the carried example fails its gate and says why
    let out = run(&["verify", "ex4_6"]);
    assert_eq!(exit_code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("unit_speed"));
    assert!(text.contains("FAIL"));
}

#[test]
fn verify_writes_json_report() {
    let dir = tmp_dir("json");
    let path = dir.join("report.json");
    let out = run(&["verify", "helicoid2", "--grid", "20x20", "--json", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed["family_id"], "helicoid2");
    assert_eq!(parsed["overall"], true);
}

#[test]
fn mesh_vertex_and_face_counts() {
    let dir = tmp_dir("mesh");
    let path = dir.join("h1.obj");
    let out = run(&["mesh", "helicoid1", "--grid", "12x9", "--out", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let v = text.lines().filter(|l| l.starts_with("v ")).count();
    let f = text.lines().filter(|l| l.starts_with("f ")).count();
    let l = text.lines().filter(|l| l.starts_with("l ")).count();
    assert_eq!(v, 12 * 9);
    assert_eq!(f, 2 * 11 * 8);
    assert_eq!(l, 1);
}

#[test]
fn mesh_ex4_1_bounding_box_sanity() {
    let dir = tmp_dir("bbox");
    let path = dir.join("e41.obj");
    assert_eq!(exit_code(&run(&["mesh", "ex4_1", "--out", path.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for line in text.lines().filter(|l| l.starts_with("v ")) {
        for (k, tok) in line.split_whitespace().skip(1).enumerate() {
            let x: f64 = tok.parse().unwrap();
            lo[k] = lo[k].min(x);
            hi[k] = hi[k].max(x);
        }
    }
    // x1 = cosh(u)(1 + sin v), x2 = u v^2, x3 = sinh(u)(1 + sin v)
    // on u in [-2, 2], v in [-1, 1]
    assert!(lo[0] > 0.0 && hi[0] < 7.0, "x1 range [{}, {}]", lo[0], hi[0]);
    assert!(lo[1] >= -2.0 && hi[1] <= 2.0, "x2 range [{}, {}]", lo[1], hi[1]);
    assert!(lo[2] > -7.0 && hi[2] < 7.0, "x3 range [{}, {}]", lo[2], hi[2]);
    assert!(hi[0] - lo[0] > 2.0, "surface did not spread in x1");
}

#[test]
fn sweep_benign_coefficient_all_pass() {
    let dir = tmp_dir("sweep-ok");
    let out = run(&[
        "sweep", &config("ex3_1_series.json"),
        "--param", "a2,1",
        "--values", "0.25,1,3",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let csv = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], "value,max_asymptotic_residual,overall");
    assert!(rows[1..].iter().all(|r| r.ends_with(",true")), "{csv}");
    assert!(dir.join("a2_1_0.25.obj").exists());
    assert!(dir.join("a2_1_0.25.json").exists());
}

#[test]
fn sweep_z_slope_coefficient_flips_the_gate() {
    let dir = tmp_dir("sweep-flip");
    let out = run(&[
        "sweep", &config("z_linear.json"),
        "--param", "a3,1",
        "--values", "0,1",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    let csv = std::fs::read_to_string(dir.join("summary.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert!(rows[1].starts_with("0,") && rows[1].ends_with(",true"), "{csv}");
    assert!(rows[2].starts_with("1,") && rows[2].ends_with(",false"), "{csv}");
}

#[test]
fn sweep_rejects_unknown_coefficient_and_empty_values() {
    let dir = tmp_dir("sweep-bad");
    let out = run(&[
        "sweep", &config("ex3_1_series.json"),
        "--param", "b2,1",
        "--values", "1",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);

    // index beyond the coefficient row
    let out = run(&[
        "sweep", &config("ex3_1_series.json"),
        "--param", "a2,9",
        "--values", "1",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);

    let out = run(&[
        "sweep", &config("ex3_1_series.json"),
        "--param", "a2,1",
        "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_accepts_config_files() {
    assert_eq!(exit_code(&run(&["verify", &config("custom_cylinder.json")])), 0);
    assert_eq!(exit_code(&run(&["verify", &config("ex3_1_series.json")])), 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(exit_code(&run(&[])), 2);
    assert_eq!(exit_code(&run(&["frobnicate"])), 2);
    assert_eq!(exit_code(&run(&["mesh", "helicoid1", "--grid", "oops", "--out", "/tmp/x.obj"])), 2);
}
