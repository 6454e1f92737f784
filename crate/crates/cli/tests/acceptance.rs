//! Acceptance suite: criteria 1–10 through the library, criterion 11 by
//! running the installed binary twice per command. Prints one line per
//! criterion and exits nonzero if any fails.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use pointscatter::verify::{run_suite, CheckResult, VerifyOptions};

const BIN: &str = env!("CARGO_BIN_EXE_pointscatter");

struct Run {
    stdout: Vec<u8>,
    files: Vec<Vec<u8>>,
    status: Option<i32>,
}

fn run(args: &[&str], dir: &Path, files: &[&str]) -> Run {
    for f in files {
        let _ = std::fs::remove_file(dir.join(f));
    }
    let out = Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    Run {
        stdout: out.stdout,
        files: files
            .iter()
            .map(|f| std::fs::read(dir.join(f)).unwrap_or_default())
            .collect(),
        status: out.status.code(),
    }
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pointscatter-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch directory");
    dir
}

/// (passed, detail)
fn determinism() -> (bool, String) {
    let dir = scratch();
    let cases: &[(&[&str], &[&str])] = &[
        (
            &[
                "amplitude",
                "--k",
                "1",
                "--theta0",
                "3.14159",
                "--z",
                "1,0",
                "--format",
                "csv",
            ],
            &[],
        ),
        (
            &["amplitude", "--z", "-3,0.5", "--theta0", "2.2", "--format", "json"],
            &[],
        ),
        (&["flow", "--z", "1,0", "--lambda", "1e2,1e4,1e6"], &[]),
        (
            &["flow", "--z", "1,0", "--lambda", "1e2,1e4,1e6", "--format", "json"],
            &[],
        ),
        (
            &[
                "family",
                "--z",
                "2,-1",
                "--lambda",
                "100",
                "--b-plus",
                "0.5,0.25",
                "--b-minus",
                "-1,0",
            ],
            &[],
        ),
        (&["field", "--z", "1,0", "--out", "field.csv"], &["field.csv"]),
        (
            &[
                "field",
                "--z",
                "1,0",
                "--grid",
                "-1,1,21,-1,1,21",
                "--far-field",
                "--out",
                "ff.csv",
            ],
            &["ff.csv", "ff.far.csv"],
        ),
        (
            &[
                "field",
                "--psi0",
                "--b-plus",
                "1,0",
                "--b-minus",
                "1,0",
                "--format",
                "json",
                "--grid",
                "-1,1,11,-1,1,11",
            ],
            &[],
        ),
        (&["verify", "--json"], &[]),
    ];
    let mut failures = Vec::new();
    for (args, files) in cases {
        let a = run(args, &dir, files);
        let b = run(args, &dir, files);
        let nonempty = !a.stdout.is_empty() || a.files.iter().all(|f| !f.is_empty());
        if a.status != Some(0) || !nonempty || a.stdout != b.stdout || a.files != b.files || a.status != b.status {
            failures.push(args.join(" "));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    if failures.is_empty() {
        (true, format!("{} commands byte-identical across two runs", cases.len()))
    } else {
        (false, format!("differing or failing: {}", failures.join("; ")))
    }
}

fn detail(c: &CheckResult) -> String {
    if let Some(e) = &c.error {
        return format!("error: {e}");
    }
    match c.worst() {
        Some(m) => format!(
            "tightest: {} = {:.3e} (tolerance {:.1e})",
            m.label, m.measured, m.tolerance
        ),
        None => "no measurements".into(),
    }
}

fn main() -> ExitCode {
    let opts = VerifyOptions::from_env();
    println!("acceptance suite, seed {}", opts.seed);
    let report = run_suite(&opts);
    let mut all = true;
    for c in &report.checks {
        all &= c.passed;
        println!(
            "criterion {:>2} {} {}: {}",
            c.id,
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            detail(c)
        );
    }
    let (ok, text) = determinism();
    all &= ok;
    println!(
        "criterion 11 {} CLI determinism: {text}",
        if ok { "PASS" } else { "FAIL" }
    );
    if report.checks.len() != 10 {
        println!("expected 10 library criteria, found {}", report.checks.len());
        all = false;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
