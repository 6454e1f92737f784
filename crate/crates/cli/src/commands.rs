//! Each command validates its configuration, computes, and renders to a
//! string. Rendering is pure, so two runs of the same configuration produce
//! identical bytes.

use std::f64::consts::PI;

use pointscatter::amplitudes::IncidentWave;
use pointscatter::fields::{asymptotic_scattered, current_density, psi0_field, scattered_field_at, total_field};
use pointscatter::kernel::{green_cutoff_zero, CutoffSpec, Dispersion};
use pointscatter::singfree::{
    absorption_condition, absorption_condition_in, family_amplitude, family_solution, renormalized_b,
    renormalized_b_limit, FamilyParams, RegulatorScheme,
};
use pointscatter::transfer::{
    bare_amplitude_with_cutoff, bare_from_renormalized, c_prime_closed_form, scattering_amplitude_dfss,
    scattering_amplitude_renormalized, Coupling,
};
use pointscatter::{Complex64, Error, GridSpec};

use crate::format::{jcx, jnum, num, render_json, Csv, Obj};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Why a command stopped. Validation problems exit 1, numerical-invariant
/// failures exit 2.
#[derive(Debug)]
pub enum Failure {
    Validation { kind: &'static str, message: String },
    Invariant { kind: &'static str, message: String },
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure::Validation {
            kind: "config",
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation { .. } => 1,
            Failure::Invariant { .. } => 2,
        }
    }

    /// `error[kind]: message` on a single line.
    pub fn diagnostic(&self) -> String {
        let (kind, message) = match self {
            Failure::Validation { kind, message } | Failure::Invariant { kind, message } => (kind, message),
        };
        let flat: Vec<&str> = message.split_whitespace().collect();
        format!("error[{kind}]: {}", flat.join(" "))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = e.kind();
        let message = e.to_string();
        match e {
            Error::Residual { .. } | Error::NonConvergence { .. } => Failure::Invariant { kind, message },
            _ => Failure::Validation { kind, message },
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Main output plus an optional far-field table written beside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub main: String,
    pub far_field: Option<String>,
    pub warnings: Vec<String>,
}

impl Rendered {
    fn single(main: String) -> Self {
        Self {
            main,
            far_field: None,
            warnings: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Wave {
    pub k: f64,
    pub theta0: f64,
}

impl Wave {
    fn build(&self) -> Outcome<IncidentWave<f64>> {
        Ok(IncidentWave::new(Dispersion::new(self.k)?, self.theta0)?)
    }
}

fn finite(z: Complex64) -> Outcome<Coupling<f64>> {
    if (z - Complex64::new(0.0, 4.0)).norm() == 0.0 {
        return Err(Failure::Validation {
            kind: "pole",
            message: "z = 4i is the pole of the amplitude (z^-1 + i/4 = 0)".into(),
        });
    }
    Ok(Coupling::finite(z)?)
}

/// Angles (m + ½)·2π/n − π/2 for m < n, skipping the forward and grazing directions.
pub fn theta_grid(n: usize, theta0: f64) -> Vec<f64> {
    let near = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d) < 1e-9
    };
    (0..n)
        .map(|m| -0.5 * PI + 2.0 * PI * (m as f64 + 0.5) / n as f64)
        .filter(|&t| !near(t, theta0) && !near(t, 0.5 * PI) && !near(t, -0.5 * PI))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeConfig {
    pub wave: Wave,
    pub z: Complex64,
    pub theta_grid: usize,
    pub format: Format,
}

const ROUTE_TOLERANCE: f64 = 1e-14;

pub fn amplitude(cfg: &AmplitudeConfig) -> Outcome<Rendered> {
    let w = cfg.wave.build()?;
    let z = finite(cfg.z)?;
    if cfg.theta_grid == 0 {
        return Err(Failure::validation("--theta-grid must be at least 1"));
    }
    let f_ren = scattering_amplitude_renormalized(&w, &Coupling::renormalized(cfg.z, w.k())?)?;
    let mut rows = Vec::new();
    for theta in theta_grid(cfg.theta_grid, w.theta0()) {
        let f = scattering_amplitude_dfss(&w, &z, theta)?;
        rows.push((theta, f, (f - f_ren).norm()));
    }
    let agree = rows.iter().all(|r| r.2 <= ROUTE_TOLERANCE * f_ren.norm());
    if !agree {
        return Err(Failure::Invariant {
            kind: "routes",
            message: format!("transfer-matrix and renormalized amplitudes differ beyond {ROUTE_TOLERANCE:e}"),
        });
    }

    let main = match cfg.format {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "theta",
                "re_f_dfss",
                "im_f_dfss",
                "abs2_f_dfss",
                "re_f_renorm",
                "im_f_renorm",
                "abs2_f_renorm",
                "abs_diff",
            ]);
            for &(t, f, d) in &rows {
                csv.row(&[
                    num(t),
                    num(f.re),
                    num(f.im),
                    num(f.norm_sqr()),
                    num(f_ren.re),
                    num(f_ren.im),
                    num(f_ren.norm_sqr()),
                    num(d),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let table = rows
                .iter()
                .map(|&(t, f, d)| {
                    Obj::new()
                        .set("theta", jnum(t))
                        .set("f_dfss", jcx(f))
                        .set("abs2_f_dfss", jnum(f.norm_sqr()))
                        .set("f_renorm", jcx(f_ren))
                        .set("abs2_f_renorm", jnum(f_ren.norm_sqr()))
                        .set("abs_diff", jnum(d))
                        .value()
                })
                .collect();
            let forward = Obj::new()
                .set("theta", jnum(w.theta0()))
                .set(
                    "term",
                    "-2*pi*delta(theta - theta0) in the reflection reading; no finite value".into(),
                )
                .value();
            render_json(
                &Obj::new()
                    .set("k", jnum(w.k()))
                    .set("theta0", jnum(w.theta0()))
                    .set("z", jcx(cfg.z))
                    .set("routes_agree", agree.into())
                    .set("forward_direction", forward)
                    .set("rows", serde_json::Value::Array(table))
                    .value(),
            )
        }
    };
    Ok(Rendered::single(main))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowConfig {
    pub wave: Wave,
    pub z_tilde: Complex64,
    pub lambdas: Vec<f64>,
    pub mu: Option<f64>,
    pub format: Format,
}

struct FlowRow {
    lambda: f64,
    z_bare: Complex64,
    g0: Complex64,
    f_bare: Complex64,
    gap: f64,
    b_sum: Complex64,
    b_tilde: Complex64,
    b_tilde_momentum: Complex64,
}

pub fn flow(cfg: &FlowConfig) -> Outcome<Rendered> {
    let w = cfg.wave.build()?;
    let k = w.k();
    let mu = cfg.mu.unwrap_or(k);
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Failure::validation(format!(
            "--mu must be positive and finite, got {mu}"
        )));
    }
    if cfg.lambdas.is_empty() {
        return Err(Failure::validation("--lambda needs at least one cutoff"));
    }
    for (i, &l) in cfg.lambdas.iter().enumerate() {
        if !(l > k) || !l.is_finite() {
            return Err(Failure::validation(format!(
                "cutoff {l} must be finite and exceed k = {k}"
            )));
        }
        if i > 0 && !(l > cfg.lambdas[i - 1]) {
            return Err(Failure::validation("--lambda values must be strictly increasing"));
        }
    }
    let zc = finite(cfg.z_tilde)?;
    let f_ren = scattering_amplitude_renormalized(&w, &Coupling::renormalized(cfg.z_tilde, mu)?)?;
    let d = *w.dispersion();
    let mut rows = Vec::new();
    for &lambda in &cfg.lambdas {
        let z_bare = bare_from_renormalized(cfg.z_tilde, lambda, mu)?;
        let f_bare = bare_amplitude_with_cutoff(&w, z_bare, lambda)?;
        let b_sum = absorption_condition_in(RegulatorScheme::Position, &zc, lambda, &d)?;
        let b_sum_momentum = absorption_condition(&zc, lambda, &d)?;
        rows.push(FlowRow {
            lambda,
            z_bare,
            g0: green_cutoff_zero(&CutoffSpec::sharp(lambda)?, &d)?,
            f_bare,
            gap: (f_bare - f_ren).norm(),
            b_sum,
            b_tilde: renormalized_b(b_sum, lambda, &d)?,
            b_tilde_momentum: renormalized_b(b_sum_momentum, lambda, &d)?,
        });
    }

    let main = match cfg.format {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "lambda",
                "re_z_bare",
                "im_z_bare",
                "re_g_lambda0",
                "im_g_lambda0",
                "re_f_bare",
                "im_f_bare",
                "re_f_renorm",
                "im_f_renorm",
                "abs_diff",
                "re_b_sum",
                "im_b_sum",
                "re_b_tilde",
                "im_b_tilde",
                "re_b_tilde_momentum",
                "im_b_tilde_momentum",
            ]);
            for r in &rows {
                csv.row(&[
                    num(r.lambda),
                    num(r.z_bare.re),
                    num(r.z_bare.im),
                    num(r.g0.re),
                    num(r.g0.im),
                    num(r.f_bare.re),
                    num(r.f_bare.im),
                    num(f_ren.re),
                    num(f_ren.im),
                    num(r.gap),
                    num(r.b_sum.re),
                    num(r.b_sum.im),
                    num(r.b_tilde.re),
                    num(r.b_tilde.im),
                    num(r.b_tilde_momentum.re),
                    num(r.b_tilde_momentum.im),
                ]);
            }
            csv.finish()
        }
        Format::Json => {
            let table = rows
                .iter()
                .map(|r| {
                    Obj::new()
                        .set("lambda", jnum(r.lambda))
                        .set("z_bare", jcx(r.z_bare))
                        .set("g_lambda0", jcx(r.g0))
                        .set("f_bare", jcx(r.f_bare))
                        .set("f_renorm", jcx(f_ren))
                        .set("abs_diff", jnum(r.gap))
                        .set("b_sum", jcx(r.b_sum))
                        .set("b_tilde", jcx(r.b_tilde))
                        .set("b_tilde_momentum", jcx(r.b_tilde_momentum))
                        .value()
                })
                .collect();
            render_json(
                &Obj::new()
                    .set("k", jnum(k))
                    .set("theta0", jnum(w.theta0()))
                    .set("mu", jnum(mu))
                    .set("z_tilde", jcx(cfg.z_tilde))
                    .set("b_tilde_limit", jcx(renormalized_b_limit(&zc)?))
                    .set("rows", serde_json::Value::Array(table))
                    .value(),
            )
        }
    };
    Ok(Rendered::single(main))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyConfig {
    pub wave: Wave,
    pub z: Complex64,
    pub lambda: f64,
    pub b_plus: Complex64,
    pub b_minus: Complex64,
    pub format: Format,
}

pub fn family(cfg: &FamilyConfig) -> Outcome<Rendered> {
    let w = cfg.wave.build()?;
    let d = *w.dispersion();
    if !(cfg.lambda > d.k()) || !cfg.lambda.is_finite() {
        return Err(Failure::validation(format!(
            "cutoff {} must be finite and exceed k = {}",
            cfg.lambda,
            d.k()
        )));
    }
    let z = finite(cfg.z)?;
    let params = FamilyParams::new(cfg.b_plus, cfg.b_minus)?;
    let (_, c) = family_solution(&w, &z, params, cfg.lambda)?;
    let f = family_amplitude(&w, &z, params, cfg.lambda)?;
    let reference_theta = if w.theta0() > PI { 0.25 * PI } else { -0.25 * PI };
    let f_dfss = scattering_amplitude_dfss(&w, &z, reference_theta)?;
    let absorbing = absorption_condition(&z, cfg.lambda, &d)?;
    let b_tilde = renormalized_b(params.sum(), cfg.lambda, &d)?;

    let main = match cfg.format {
        Format::Csv => {
            let mut csv = Csv::new(&[
                "lambda",
                "re_b_sum",
                "im_b_sum",
                "re_c",
                "im_c",
                "re_f_family",
                "im_f_family",
                "abs2_f_family",
                "re_f_dfss",
                "im_f_dfss",
                "abs_diff",
                "re_b_sum_absorbing",
                "im_b_sum_absorbing",
                "re_b_tilde",
                "im_b_tilde",
            ]);
            csv.row(&[
                num(cfg.lambda),
                num(params.sum().re),
                num(params.sum().im),
                num(c.re),
                num(c.im),
                num(f.re),
                num(f.im),
                num(f.norm_sqr()),
                num(f_dfss.re),
                num(f_dfss.im),
                num((f - f_dfss).norm()),
                num(absorbing.re),
                num(absorbing.im),
                num(b_tilde.re),
                num(b_tilde.im),
            ]);
            csv.finish()
        }
        Format::Json => render_json(
            &Obj::new()
                .set("k", jnum(d.k()))
                .set("theta0", jnum(w.theta0()))
                .set("z", jcx(cfg.z))
                .set("lambda", jnum(cfg.lambda))
                .set("b_plus", jcx(cfg.b_plus))
                .set("b_minus", jcx(cfg.b_minus))
                .set("b_sum", jcx(params.sum()))
                .set("c", jcx(c))
                .set("f_family", jcx(f))
                .set("abs2_f_family", jnum(f.norm_sqr()))
                .set("f_dfss", jcx(f_dfss))
                .set("abs_diff", jnum((f - f_dfss).norm()))
                .set("b_sum_absorbing", jcx(absorbing))
                .set("b_tilde", jcx(b_tilde))
                .value(),
        ),
    };
    Ok(Rendered::single(main))
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldSource {
    Total {
        wave: Wave,
        z: Complex64,
    },
    Psi0 {
        k: f64,
        b_plus: Complex64,
        b_minus: Complex64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldConfig {
    pub source: FieldSource,
    pub grid: GridSpec,
    pub far_field: bool,
    pub theta_grid: usize,
    pub format: Format,
}

/// Radii of the far-field circles, in units of 1/k.
pub const FAR_FIELD_KR: [f64; 3] = [20.0, 50.0, 100.0];

struct FarRow {
    kr: f64,
    theta: f64,
    x: f64,
    y: f64,
    psi_sc: Complex64,
    psi_asym: Complex64,
    residual: f64,
}

fn far_field_rows(w: &IncidentWave<f64>, z: &Coupling<f64>, n: usize) -> Outcome<Vec<FarRow>> {
    let c_prime = c_prime_closed_form(z)?;
    let f = scattering_amplitude_dfss(w, z, if w.theta0() > PI { 0.25 * PI } else { -0.25 * PI })?;
    let mut rows = Vec::new();
    for kr in FAR_FIELD_KR {
        let asym = asymptotic_scattered(kr, f);
        let r = kr / w.k();
        for m in 0..n {
            let theta = 2.0 * PI * (m as f64 + 0.5) / n as f64;
            let (s, c) = theta.sin_cos();
            let (x, y) = (r * c, r * s);
            let psi_sc = scattered_field_at(w, c_prime, x, y)?;
            rows.push(FarRow {
                kr,
                theta,
                x,
                y,
                psi_sc,
                psi_asym: asym,
                residual: (psi_sc - asym).norm() / asym.norm(),
            });
        }
    }
    Ok(rows)
}

pub fn field(cfg: &FieldConfig) -> Outcome<Rendered> {
    cfg.grid.validate()?;
    let (grid, coupling_and_wave) = match &cfg.source {
        FieldSource::Total { wave, z } => {
            let w = wave.build()?;
            let zc = finite(*z)?;
            (total_field(&w, &zc, &cfg.grid)?, Some((w, zc)))
        }
        FieldSource::Psi0 { k, b_plus, b_minus } => {
            Dispersion::new(*k)?;
            if cfg.far_field {
                return Err(Failure::validation(
                    "--far-field needs the scattered field; drop --psi0",
                ));
            }
            (psi0_field(FamilyParams::new(*b_plus, *b_minus)?, *k, &cfg.grid)?, None)
        }
    };
    if cfg.far_field && cfg.theta_grid == 0 {
        return Err(Failure::validation("--theta-grid must be at least 1"));
    }
    let current = current_density(&grid);
    let mut warnings = Vec::new();
    if current.coarse_grid_warning {
        warnings.push(format!(
            "grid spacing ({}, {}) exceeds 1/(50k); finite-difference currents are coarse",
            num(current.dx),
            num(current.dy)
        ));
    }
    let far = match (&coupling_and_wave, cfg.far_field) {
        (Some((w, z)), true) => Some(far_field_rows(w, z, cfg.theta_grid)?),
        _ => None,
    };

    let (nx, ny) = grid.values.dim();
    let (main, far_text) = match cfg.format {
        Format::Csv => {
            let mut csv = Csv::new(&["x", "y", "re_psi", "im_psi", "abs2_psi", "jx", "jy", "mask"]);
            for i in 0..nx {
                for j in 0..ny {
                    let v = grid.values[[i, j]];
                    csv.row(&[
                        num(grid.x[i]),
                        num(grid.y[j]),
                        num(v.re),
                        num(v.im),
                        num(v.norm_sqr()),
                        num(current.jx[[i, j]]),
                        num(current.jy[[i, j]]),
                        u8::from(grid.mask[[i, j]]).to_string(),
                    ]);
                }
            }
            let far_text = far.as_ref().map(|rows| {
                let mut csv = Csv::new(&[
                    "kr",
                    "theta",
                    "x",
                    "y",
                    "re_psi_sc",
                    "im_psi_sc",
                    "re_psi_asym",
                    "im_psi_asym",
                    "rel_residual",
                ]);
                for r in rows {
                    csv.row(&[
                        num(r.kr),
                        num(r.theta),
                        num(r.x),
                        num(r.y),
                        num(r.psi_sc.re),
                        num(r.psi_sc.im),
                        num(r.psi_asym.re),
                        num(r.psi_asym.im),
                        num(r.residual),
                    ]);
                }
                csv.finish()
            });
            (csv.finish(), far_text)
        }
        Format::Json => {
            let mut points = Vec::with_capacity(nx * ny);
            for i in 0..nx {
                for j in 0..ny {
                    let v = grid.values[[i, j]];
                    points.push(
                        Obj::new()
                            .set("x", jnum(grid.x[i]))
                            .set("y", jnum(grid.y[j]))
                            .set("psi", jcx(v))
                            .set("abs2_psi", jnum(v.norm_sqr()))
                            .set("jx", jnum(current.jx[[i, j]]))
                            .set("jy", jnum(current.jy[[i, j]]))
                            .set("masked", grid.mask[[i, j]].into())
                            .value(),
                    );
                }
            }
            let g = &cfg.grid;
            let spec = Obj::new()
                .set("x0", jnum(g.x0))
                .set("x1", jnum(g.x1))
                .set("nx", g.nx.into())
                .set("y0", jnum(g.y0))
                .set("y1", jnum(g.y1))
                .set("ny", g.ny.into())
                .value();
            let source = match &cfg.source {
                FieldSource::Total { wave, z } => Obj::new()
                    .set("kind", "total".into())
                    .set("theta0", jnum(wave.theta0))
                    .set("z", jcx(*z)),
                FieldSource::Psi0 { b_plus, b_minus, .. } => Obj::new()
                    .set("kind", "psi0".into())
                    .set("b_plus", jcx(*b_plus))
                    .set("b_minus", jcx(*b_minus)),
            }
            .value();
            let mut obj = Obj::new()
                .set("k", jnum(grid.k))
                .set("source", source)
                .set("grid", spec)
                .set("masked_points", grid.masked_count().into())
                .set("coarse_grid", current.coarse_grid_warning.into())
                .set("points", serde_json::Value::Array(points));
            if let Some(rows) = &far {
                let samples = rows
                    .iter()
                    .map(|r| {
                        Obj::new()
                            .set("kr", jnum(r.kr))
                            .set("theta", jnum(r.theta))
                            .set("x", jnum(r.x))
                            .set("y", jnum(r.y))
                            .set("psi_sc", jcx(r.psi_sc))
                            .set("psi_asym", jcx(r.psi_asym))
                            .set("rel_residual", jnum(r.residual))
                            .value()
                    })
                    .collect();
                obj = obj.set("far_field", serde_json::Value::Array(samples));
            }
            (render_json(&obj.value()), None)
        }
    };
    Ok(Rendered {
        main,
        far_field: far_text,
        warnings,
    })
}
