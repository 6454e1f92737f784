//! The `verify` command: the library suite plus the CLI determinism check.

use std::f64::consts::PI;

use pointscatter::verify::{run_suite, CheckResult, Measurement, Report, VerifyOptions};
use pointscatter::{Complex64, GridSpec};

use crate::commands::{
    amplitude, family, field, flow, AmplitudeConfig, FamilyConfig, FieldConfig, FieldSource, FlowConfig, Format,
    Rendered, Wave,
};

type Render = Box<dyn Fn() -> Result<Rendered, crate::commands::Failure>>;

fn fixtures() -> Vec<(String, Render)> {
    let wave = || Wave { k: 1.0, theta0: PI };
    let one = Complex64::new(1.0, 0.0);
    let mut out: Vec<(String, Render)> = Vec::new();
    for (label, format) in [("csv", Format::Csv), ("json", Format::Json)] {
        let amp = AmplitudeConfig {
            wave: wave(),
            z: one,
            theta_grid: 16,
            format,
        };
        let fl = FlowConfig {
            wave: wave(),
            z_tilde: one,
            lambdas: vec![1e2, 1e4, 1e6],
            mu: None,
            format,
        };
        let fam = FamilyConfig {
            wave: Wave { k: 1.0, theta0: 2.5 },
            z: Complex64::new(2.0, -1.0),
            lambda: 100.0,
            b_plus: Complex64::new(0.5, 0.25),
            b_minus: Complex64::new(-0.125, 1.0),
            format,
        };
        let fie = FieldConfig {
            source: FieldSource::Total { wave: wave(), z: one },
            grid: GridSpec {
                x0: -1.0,
                x1: 1.0,
                nx: 21,
                y0: -1.0,
                y1: 1.0,
                ny: 21,
            },
            far_field: true,
            theta_grid: 16,
            format,
        };
        out.push((format!("amplitude {label}"), Box::new(move || amplitude(&amp))));
        out.push((format!("flow {label}"), Box::new(move || flow(&fl))));
        out.push((format!("family {label}"), Box::new(move || family(&fam))));
        out.push((format!("field {label}"), Box::new(move || field(&fie))));
    }
    out
}

/// Renders every command twice and requires byte-identical output.
pub fn determinism() -> CheckResult {
    let mut measurements = Vec::new();
    let mut error = None;
    for (name, render) in fixtures() {
        match (render(), render()) {
            (Ok(a), Ok(b)) => {
                let same = a == b;
                measurements.push(Measurement {
                    label: format!("byte-identical re-render: {name}"),
                    measured: if same { 0.0 } else { 1.0 },
                    tolerance: 0.0,
                    passed: same,
                });
            }
            (Err(e), _) | (_, Err(e)) => {
                error = Some(format!("{name}: {}", e.diagnostic()));
                break;
            }
        }
    }
    CheckResult {
        id: 11,
        name: "CLI determinism",
        passed: error.is_none() && measurements.iter().all(|m| m.passed),
        measurements,
        error,
    }
}

pub fn full_report(opts: &VerifyOptions) -> Report {
    let mut report = run_suite(opts);
    report.checks.push(determinism());
    report
}

pub fn render_text(report: &Report) -> String {
    let mut out = format!(
        "seed {} (set {} to override)\n",
        report.seed,
        pointscatter::verify::SEED_ENV
    );
    if report.inject_fault {
        out.push_str("fault injection: sign of c' flipped inside the suite\n");
    }
    for check in &report.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status} {:>2} {}\n", check.id, check.name));
        for m in &check.measurements {
            let mark = if m.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "     {mark} {} = {:.3e} (tolerance {:.1e})\n",
                m.label, m.measured, m.tolerance
            ));
        }
        if let Some(e) = &check.error {
            out.push_str(&format!("     error: {e}\n"));
        }
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    out.push_str(&format!("{passed}/{} criteria passed\n", report.checks.len()));
    out
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
