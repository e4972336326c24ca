//! End-to-end tests against the built binary.

#![allow(clippy::excessive_precision)] // frozen 30-digit fixtures

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weierstrass"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("valid json")
}

fn complex_field(v: &serde_json::Value, name: &str) -> (f64, f64) {
    (
        v[name]["re"].as_f64().unwrap(),
        v[name]["im"].as_f64().unwrap(),
    )
}

fn close(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
    let d = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
    let s = (b.0 * b.0 + b.1 * b.1).sqrt().max(1.0);
    d <= tol * s
}

#[test]
fn roots_simple_curve() {
    let out = run(&["roots", "--g2", "4+0i", "--g3", "0+0i"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("delta = 6.4000000000000000e1"));
    assert!(text.contains("|delta| = 6.4000000000000000e1"));
}

#[test]
fn roots_reference_curve_reports_delta() {
    let out = run(&["roots", "--g2", "3+1i", "--g3", "2+0i", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert!(close(complex_field(&v, "delta"), (-90.0, 26.0), 1e-14));
    // properly ordered: e1 is the distinguished root
    assert!(close(
        complex_field(&v, "e1"),
        (1.100114629532992106524345, 0.09577595482024323326286796),
        1e-13
    ));
}

#[test]
fn roots_error_paths() {
    let out = run(&["roots", "--g2", "nan+0i", "--g3", "0+0i"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["roots", "--g2", "oops", "--g3", "0+0i"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["roots", "--g2", "1+0i"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_reproduces_first_row() {
    let out = run(&["chain", "--g2", "3+1i", "--g3", "2+0i", "--json"]);
    assert!(out.status.success());
    let rows = json_of(&out);
    let rows = rows.as_array().unwrap();
    assert!(rows.len() >= 5); // n = 0 plus at least four steps
    assert_eq!(rows[0]["n"], 0);
    assert!(close(
        complex_field(&rows[0], "delta"),
        (-90.0, 26.0),
        1e-14
    ));
    assert!(close(
        complex_field(&rows[1], "g2"),
        (
            3.754046867215436982426029182236,
            0.540233967914303556235718229303
        ),
        1e-13
    ));
    assert!(close(
        complex_field(&rows[1], "g3"),
        (
            1.388499235514097862630349344347,
            0.303503045561126645130957672495
        ),
        1e-13
    ));
}

#[test]
fn chain_rank0_notice() {
    let out = run(&["chain", "--g2", "0+0i", "--g3", "0+0i"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("rank-0"));
    assert!(text.contains("n = 0"));
    assert!(!text.contains("n = 1"));
}

#[test]
fn periods_reference_and_square() {
    let out = run(&["periods", "--g2", "3+1i", "--g3", "2+0i", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert!(close(
        complex_field(&v, "omega1"),
        (
            2.417537043081800860284148042662,
            -0.086555072799597063046083291895
        ),
        1e-13
    ));
    assert!(v["legendre_residual"].as_f64().unwrap() <= 1e-12 * 2.0 * std::f64::consts::PI);

    let out = run(&["periods", "--g2", "4+0i", "--g3", "0+0i", "--json"]);
    let v = json_of(&out);
    let w1 = complex_field(&v, "omega1");
    let w2 = complex_field(&v, "omega2");
    // omega2/omega1 = i for the square lattice
    let ratio = (
        (w2.0 * w1.0 + w2.1 * w1.1) / (w1.0 * w1.0 + w1.1 * w1.1),
        (w2.1 * w1.0 - w2.0 * w1.1) / (w1.0 * w1.0 + w1.1 * w1.1),
    );
    assert!(close(ratio, (0.0, 1.0), 1e-12), "ratio {ratio:?}");
}

#[test]
fn periods_degenerate_is_domain_error() {
    let out = run(&["periods", "--g2", "0+0i", "--g3", "0+0i"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn abel_reference_point_and_round_trip() {
    // (x, y) = (1, i 2^(1/4) e^(i pi/8))
    let y = "-0.4550898605622273+1.0986841134678098i";
    let out = run(&[
        "abel", "--g2", "3+1i", "--g3", "2+0i", "--x", "1+0i", "--y", y, "--json",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    let z = complex_field(&v, "z");
    assert!(
        close(
            z,
            (
                1.135511094868984650675588970809,
                0.168231964506622644282195234558
            ),
            1e-12
        ),
        "z = {z:?}"
    );

    // eval at the returned z reproduces (x, y)
    let zflag = format!("{}{}{}i", z.0, if z.1 >= 0.0 { "+" } else { "" }, z.1);
    let out = run(&[
        "eval", "--g2", "3+1i", "--g3", "2+0i", "--z", &zflag, "--json",
    ]);
    let v = json_of(&out);
    assert!(close(complex_field(&v, "p"), (1.0, 0.0), 1e-11));
    assert!(close(
        complex_field(&v, "dp"),
        (-0.4550898605622273, 1.0986841134678098),
        1e-11
    ));
}

#[test]
fn abel_half_period() {
    // e1 of the properly ordered square-lattice triple is -1; its image is
    // half the matching period
    let out = run(&[
        "abel", "--g2", "4+0i", "--g3", "0+0i", "--x", "-1+0i", "--y", "0+0i", "--json",
    ]);
    assert!(out.status.success());
    let v = json_of(&out);
    let z = complex_field(&v, "z");
    let half = 2.62205755429211981 / 2.0;
    let len = (z.0 * z.0 + z.1 * z.1).sqrt();
    assert!((len - half).abs() <= 1e-12 * half, "z = {z:?}");
}

#[test]
fn eval_reference_values() {
    let z = "1.135511094868984650675588970809+0.168231964506622644282195234558i";
    let out = run(&["eval", "--g2", "3+1i", "--g3", "2+0i", "--z", z, "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert!(close(complex_field(&v, "p"), (1.0, 0.0), 1e-12));
    assert!(close(
        complex_field(&v, "dp"),
        (
            -0.455089860562227341304357757822,
            1.098684113467809966039801195240
        ),
        1e-13
    ));
    assert!(close(
        complex_field(&v, "zeta"),
        (
            0.783555262412587753042456275712,
            -0.206399816285624800076666108370
        ),
        1e-13
    ));
    assert!(close(
        complex_field(&v, "sigma"),
        (
            1.119474135932126172237167916856,
            0.139788689691469525777332568971
        ),
        1e-13
    ));
}

#[test]
fn eval_subset_matches_full() {
    let z = "0.31+0.17i";
    let full = json_of(&run(&[
        "eval", "--g2", "3+1i", "--g3", "2+0i", "--z", z, "--json",
    ]));
    let only_p = json_of(&run(&[
        "eval",
        "--g2",
        "3+1i",
        "--g3",
        "2+0i",
        "--z",
        z,
        "--functions",
        "p",
        "--json",
    ]));
    assert!(only_p.get("sigma").is_none());
    assert!(only_p.get("dp").is_none());
    let a = complex_field(&full, "p");
    let b = complex_field(&only_p, "p");
    assert!(close(b, a, 1e-13), "{a:?} vs {b:?}");
}

#[test]
fn eval_on_pole_is_domain_error() {
    let out = run(&["eval", "--g2", "3+1i", "--g3", "2+0i", "--z", "0+0i"]);
    assert_eq!(out.status.code(), Some(5));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("lattice point"), "stderr: {err}");
}

fn write_params(dir: &std::path::Path) -> std::path::PathBuf {
    // gamma = 0 curve: square lattice with real period L
    let l = 3.7081493546027438;
    let params = serde_json::json!({
        "D": {"re": 0.0, "im": 0.2},
        "zplus": {"re": 0.0, "im": 0.80 * l},
        "zminus": {"re": 0.0, "im": 0.60 * l},
        "hplus": std::f64::consts::PI,
        "hminus": std::f64::consts::PI + 0.5,
        "g2": {"re": 1.0, "im": 0.0},
        "g3": {"re": 0.0, "im": 0.0},
    });
    let path = dir.join("qmap_params.json");
    std::fs::write(&path, serde_json::to_string_pretty(&params).unwrap()).unwrap();
    path
}

#[test]
fn qmap_single_point_and_gamma_flag() {
    let dir = std::env::temp_dir();
    let params = write_params(&dir);
    let p = params.to_str().unwrap();
    let l = 3.7081493546027438;
    // rectangle center
    let z = format!("{}+{}i", -l / 4.0, l / 4.0);
    let out = run(&["qmap", "--params", p, "--z", &z, "--json"]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json_of(&out);
    let q = complex_field(&v, "q");
    assert!(q.0.is_finite() && q.1.is_finite());

    // --gamma 0 must agree with the file's (g2, g3) = (1, 0)
    let out2 = run(&["qmap", "--params", p, "--gamma", "0", "--z", &z, "--json"]);
    assert!(out2.status.success());
    let q2 = complex_field(&json_of(&out2), "q");
    assert!(close(q2, q, 1e-12));
}

#[test]
fn qmap_singularity_is_domain_error() {
    let dir = std::env::temp_dir();
    let params = write_params(&dir);
    let l = 3.7081493546027438;
    let z = format!("0+{}i", 0.80 * l); // exactly z+
    let out = run(&["qmap", "--params", params.to_str().unwrap(), "--z", &z]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn qmap_trace_emits_one_record_per_sample() {
    let dir = std::env::temp_dir();
    let params = write_params(&dir);
    let l = 3.7081493546027438;
    // samples along the inset real edge
    let samples: Vec<serde_json::Value> = (0..40)
        .map(|k| {
            let x = -0.45 * l + 0.40 * l * (k as f64 / 39.0);
            serde_json::json!({"re": x, "im": 0.05 * l})
        })
        .collect();
    let trace_path = dir.join("qmap_trace.json");
    std::fs::write(&trace_path, serde_json::to_string(&samples).unwrap()).unwrap();
    let out = run(&[
        "qmap",
        "--params",
        params.to_str().unwrap(),
        "--trace",
        trace_path.to_str().unwrap(),
        "--json",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let records = json_of(&out);
    let records = records.as_array().unwrap();
    assert_eq!(records.len(), 40);
    // no branch jumps between consecutive samples
    let qs: Vec<(f64, f64)> = records.iter().map(|r| complex_field(r, "q")).collect();
    for w in qs.windows(2) {
        let d = ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt();
        assert!(d < 1.0, "jump {d}");
    }
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("usage"));
}
