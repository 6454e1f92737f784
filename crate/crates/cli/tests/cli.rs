use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_pointscatter");

fn pointscatter(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = pointscatter(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn stderr_line(out: &Output) -> String {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "diagnostic must be one line: {text:?}");
    text.trim_end().to_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pointscatter-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_owned()).collect()
}

fn values(csv: &str, name: &str) -> Vec<f64> {
    column(csv, name).iter().map(|v| v.parse().unwrap()).collect()
}

#[test]
fn amplitude_rows_are_constant() {
    let csv = stdout(&[
        "amplitude",
        "--k",
        "1",
        "--theta0",
        "3.14159",
        "--z",
        "1,0",
        "--format",
        "csv",
    ]);
    let re = values(&csv, "re_f_dfss");
    let im = values(&csv, "im_f_dfss");
    assert!(!re.is_empty());
    assert!(re.iter().all(|v| (v + 0.187737).abs() < 1e-6));
    assert!(im.iter().all(|v| (v - 0.046934).abs() < 1e-6));
    assert!(re.windows(2).all(|w| w[0] == w[1]));
    assert!(values(&csv, "abs_diff").iter().all(|d| *d == 0.0));
}

#[test]
fn amplitude_json_reports_route_agreement() {
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["amplitude", "--z", "0.3,-2", "--format", "json"])).unwrap();
    assert_eq!(json["routes_agree"], serde_json::Value::Bool(true));
    assert_eq!(json["rows"][0]["f_dfss"], json["rows"][0]["f_renorm"]);
}

#[test]
fn pole_coupling_is_rejected() {
    let out = pointscatter(&["amplitude", "--z", "0,4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_line(&out).starts_with("error[pole]: "));
}

#[test]
fn errors_are_single_prefixed_lines() {
    for args in [
        &["amplitude", "--z", "1"][..],
        &["amplitude", "--z", "1,0", "--theta0", "0.2"],
        &["amplitude"],
        &["flow", "--z", "1,0", "--lambda", "1e4,1e2"],
        &["flow", "--z", "1,0", "--lambda", "0.5"],
        &["field", "--z", "1,0", "--grid", "1,-1,5,0,1,5"],
        &["family", "--z", "1,0", "--lambda", "1"],
        &["bogus"],
    ] {
        let out = pointscatter(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr_line(&out).starts_with("error["), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn flow_gap_shrinks_and_b_tilde_settles() {
    let csv = stdout(&["flow", "--z", "1,0", "--lambda", "1e2,1e4,1e6"]);
    let gap = values(&csv, "abs_diff");
    assert!(gap[0] > gap[1] && gap[1] > gap[2]);
    let (re, im) = (values(&csv, "re_b_tilde")[2], values(&csv, "im_b_tilde")[2]);
    // 1/(1 − 4i) = (1 + 4i)/17
    assert!(((re - 1.0 / 17.0).powi(2) + (im - 4.0 / 17.0).powi(2)).sqrt() < 1e-2);
}

#[test]
fn flow_at_the_renormalization_scale_keeps_the_coupling() {
    let csv = stdout(&["flow", "--z", "0.7,-0.2", "--lambda", "5", "--mu", "5"]);
    assert_eq!(column(&csv, "re_z_bare"), vec![format!("{:.14e}", 0.7)]);
    assert_eq!(column(&csv, "im_z_bare"), vec![format!("{:.14e}", -0.2)]);
}

#[test]
fn family_with_absorbing_weights_matches_transfer_route() {
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["family", "--z", "1,0", "--lambda", "50", "--format", "json"])).unwrap();
    let b = &json["b_sum_absorbing"];
    let arg = format!("{},{}", b[0], b[1]);
    let csv = stdout(&["family", "--z", "1,0", "--lambda", "50", "--b-plus", &arg]);
    assert!(values(&csv, "abs_diff")[0] < 1e-12);
}

#[test]
fn default_field_grid_masks_only_the_origin() {
    let dir = scratch("mask");
    let path = dir.join("psi.csv");
    stdout(&[
        "field",
        "--k",
        "1",
        "--theta0",
        "3.141592653589793",
        "--z",
        "1,0",
        "--out",
        path.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 1 + 201 * 201);
    let mask = column(&csv, "mask");
    assert_eq!(mask.iter().filter(|m| *m == "1").count(), 1);
    let xs = column(&csv, "x");
    let ys = column(&csv, "y");
    let i = mask.iter().position(|m| m == "1").unwrap();
    assert_eq!(xs[i].parse::<f64>().unwrap().abs(), 0.0);
    assert_eq!(ys[i].parse::<f64>().unwrap().abs(), 0.0);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn psi0_has_no_transverse_current() {
    let csv = stdout(&[
        "field",
        "--psi0",
        "--b-plus",
        "1,0",
        "--b-minus",
        "1,0",
        "--grid",
        "-2,2,81,-2,2,81",
    ]);
    let jx: Vec<f64> = column(&csv, "jx")
        .iter()
        .filter(|v| !v.is_empty())
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(!jx.is_empty());
    assert!(jx.iter().all(|v| v.abs() <= 1e-10));
}

#[test]
fn far_field_table_has_residual_column() {
    let dir = scratch("far");
    let path = dir.join("g.csv");
    stdout(&[
        "field",
        "--z",
        "1,0",
        "--grid",
        "-1,1,11,-1,1,11",
        "--far-field",
        "--theta-grid",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    let far = std::fs::read_to_string(dir.join("g.far.csv")).unwrap();
    let kr = values(&far, "kr");
    let res = values(&far, "rel_residual");
    assert_eq!(kr.len(), 24);
    for (kr, r) in kr.iter().zip(&res) {
        assert!((r * kr - 0.125).abs() < 0.01, "kr = {kr}, residual {r}");
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_passes_and_fault_injection_fails_loudly() {
    let out = pointscatter(&["verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8(out.stdout).unwrap().contains("11/11 criteria passed"));

    let out = pointscatter(&["verify", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_line(&out).starts_with("error[verify]: "));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL  2"));
}

#[test]
fn verify_json_lists_tolerances() {
    let json: serde_json::Value = serde_json::from_str(&stdout(&["verify", "--json"])).unwrap();
    let checks = json["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 11);
    for c in checks {
        for m in c["measurements"].as_array().unwrap() {
            assert!(m["tolerance"].is_number() && m["measured"].is_number());
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["amplitude", "--z", "2,1", "--format", "json"][..],
        &["flow", "--z", "1,0.5", "--lambda", "10,1000"],
        &["field", "--z", "1,0", "--grid", "-1,1,31,-1,1,31", "--format", "json"],
    ] {
        assert_eq!(pointscatter(args).stdout, pointscatter(args).stdout, "{args:?}");
    }
}
