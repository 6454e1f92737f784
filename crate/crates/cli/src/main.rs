//! `pointscatter`: amplitudes, cutoff flows, field grids and the
//! verification suite from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod format;
mod verify;

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pointscatter::verify::VerifyOptions;
use pointscatter::{Complex64, GridSpec};

use commands::{AmplitudeConfig, Failure, FamilyConfig, FieldConfig, FieldSource, FlowConfig, Format, Rendered, Wave};

#[derive(Parser, Debug)]
#[command(
    name = "pointscatter",
    version,
    about = "Scattering by a 2D delta-function point scatterer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// f(θ) from the transfer-matrix and renormalized routes, side by side.
    Amplitude(AmplitudeArgs),
    /// Bare coupling, bare amplitude and b̃ along a list of cutoffs at fixed z̃.
    Flow(FlowArgs),
    /// Amplitude of the singularity-free family at one cutoff.
    Family(FamilyArgs),
    /// ψ and its probability current on a grid.
    Field(FieldArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Args, Debug)]
struct WaveArgs {
    /// Wavenumber k > 0.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Incidence angle in radians, inside (π/2, 3π/2).
    #[arg(long, default_value_t = PI, allow_hyphen_values = true)]
    theta0: f64,
}

impl WaveArgs {
    fn wave(&self) -> Wave {
        Wave {
            k: self.k,
            theta0: self.theta0,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AmplitudeArgs {
    #[command(flatten)]
    wave: WaveArgs,
    /// Coupling as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Complex64,
    /// Number of scattering angles.
    #[arg(long, default_value_t = 16)]
    theta_grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FlowArgs {
    #[command(flatten)]
    wave: WaveArgs,
    /// Renormalized coupling z̃ as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Complex64,
    /// Strictly increasing cutoffs, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<f64>,
    /// Renormalization scale (defaults to k).
    #[arg(long)]
    mu: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[command(flatten)]
    wave: WaveArgs,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    z: Complex64,
    /// Momentum cutoff Λ > k.
    #[arg(long)]
    lambda: f64,
    /// Weight of the +k edge atom as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    b_plus: Complex64,
    /// Weight of the −k edge atom as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    b_minus: Complex64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct FieldArgs {
    #[command(flatten)]
    wave: WaveArgs,
    /// Coupling as RE,IM (ignored with --psi0).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, required_unless_present = "psi0")]
    z: Option<Complex64>,
    /// Grid as X0,X1,NX,Y0,Y1,NY.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true, default_value = "-2,2,201,-2,2,201")]
    grid: GridSpec,
    /// Sample the x-independent solution ψ₀ built from --b-plus and --b-minus.
    #[arg(long)]
    psi0: bool,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    b_plus: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    b_minus: Complex64,
    /// Also sample circles kr = 20, 50, 100 against the asymptotic form
    /// (CSV: written beside --out as *.far.csv).
    #[arg(long)]
    far_field: bool,
    /// Angles per far-field circle.
    #[arg(long, default_value_t = 64)]
    theta_grid: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
    /// Flip the sign of c′ inside the suite; the run must fail.
    #[arg(long)]
    inject_fault: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [re, im] = parts.as_slice() else {
        return Err(format!("expected RE,IM, got '{s}'"));
    };
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part '{re}'"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part '{im}'"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(Complex64::new(re, im))
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x0, x1, nx, y0, y1, ny] = parts.as_slice() else {
        return Err(format!("expected X0,X1,NX,Y0,Y1,NY, got '{s}'"));
    };
    let real = |v: &str| v.parse::<f64>().map_err(|_| format!("bad bound '{v}'"));
    let count = |v: &str| v.parse::<usize>().map_err(|_| format!("bad sample count '{v}'"));
    GridSpec::new(real(x0)?, real(x1)?, count(nx)?, real(y0)?, real(y1)?, count(ny)?).map_err(|e| e.to_string())
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Validation {
        kind: "io",
        message: e.to_string(),
    };
    match path {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io),
    }
}

fn emit(rendered: &Rendered, out: Option<&Path>) -> Result<(), Failure> {
    for w in &rendered.warnings {
        eprintln!("warning: {w}");
    }
    if let Some(far) = &rendered.far_field {
        let Some(main) = out else {
            return Err(Failure::validation(
                "--far-field with CSV output needs --out for the second table",
            ));
        };
        write_text(Some(&main.with_extension("far.csv")), far)?;
    }
    write_text(out, &rendered.main)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Amplitude(a) => {
            let cfg = AmplitudeConfig {
                wave: a.wave.wave(),
                z: a.z,
                theta_grid: a.theta_grid,
                format: a.output.format.into(),
            };
            emit(&commands::amplitude(&cfg)?, a.output.out.as_deref())
        }
        Command::Flow(a) => {
            let cfg = FlowConfig {
                wave: a.wave.wave(),
                z_tilde: a.z,
                lambdas: a.lambda,
                mu: a.mu,
                format: a.output.format.into(),
            };
            emit(&commands::flow(&cfg)?, a.output.out.as_deref())
        }
        Command::Family(a) => {
            let cfg = FamilyConfig {
                wave: a.wave.wave(),
                z: a.z,
                lambda: a.lambda,
                b_plus: a.b_plus,
                b_minus: a.b_minus,
                format: a.output.format.into(),
            };
            emit(&commands::family(&cfg)?, a.output.out.as_deref())
        }
        Command::Field(a) => {
            let source = if a.psi0 {
                FieldSource::Psi0 {
                    k: a.wave.k,
                    b_plus: a.b_plus,
                    b_minus: a.b_minus,
                }
            } else {
                FieldSource::Total {
                    wave: a.wave.wave(),
                    z: a.z.expect("clap requires --z without --psi0"),
                }
            };
            let format: Format = a.output.format.into();
            if a.far_field && format == Format::Csv && a.output.out.is_none() {
                return Err(Failure::validation(
                    "--far-field with CSV output needs --out for the second table",
                ));
            }
            let cfg = FieldConfig {
                source,
                grid: a.grid,
                far_field: a.far_field,
                theta_grid: a.theta_grid,
                format,
            };
            emit(&commands::field(&cfg)?, a.output.out.as_deref())
        }
        Command::Verify(a) => {
            let opts = VerifyOptions {
                inject_fault: a.inject_fault,
                ..VerifyOptions::from_env()
            };
            let report = verify::full_report(&opts);
            let text = if a.json {
                verify::render_json(&report)
            } else {
                verify::render_text(&report)
            };
            write_text(a.out.as_deref(), &text)?;
            if report.passed() {
                Ok(())
            } else {
                let failed: Vec<String> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| c.id.to_string())
                    .collect();
                Err(Failure::Invariant {
                    kind: "verify",
                    message: format!("failed criteria: {}", failed.join(", ")),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("invalid arguments");
            let line = line.strip_prefix("error: ").unwrap_or(line);
            eprintln!("error[usage]: {line}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.diagnostic());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
