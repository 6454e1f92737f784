//! Real-space observables: the total wavefunction, the x-independent
//! solution ψ₀, probability current, near- and far-field checks and the
//! differential cross-section.

use ndarray::Array2;

use crate::amplitudes::IncidentWave;
use crate::error::{Error, Result};
use crate::singfree::FamilyParams;
use crate::specfun::{euler_gamma, hankel1_0};
use crate::transfer::{c_prime_closed_form, scattering_amplitude_dfss, Coupling};
use crate::{c_i, c_real, cx, Complex, Real};

/// Points with kr below this are masked instead of evaluated.
pub const ORIGIN_MASK_KR: f64 = 1e-6;

/// Uniform rectangular grid [x0, x1] × [y0, y1] with nx × ny samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub x0: T,
    pub x1: T,
    pub nx: usize,
    pub y0: T,
    pub y1: T,
    pub ny: usize,
}

impl<T: Real> GridSpec<T> {
    pub fn new(x0: T, x1: T, nx: usize, y0: T, y1: T, ny: usize) -> Result<Self> {
        let g = Self { x0, x1, nx, y0, y1, ny };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (lo, hi, n, axis) in [(self.x0, self.x1, self.nx, "x"), (self.y0, self.y1, self.ny, "y")] {
            if !lo.is_finite() || !hi.is_finite() || !(hi > lo) {
                return Err(Error::Precondition(format!(
                    "{axis} range must be finite and increasing, got [{lo}, {hi}]"
                )));
            }
            if n < 2 {
                return Err(Error::Precondition(format!("{axis} needs at least two samples")));
            }
        }
        Ok(())
    }

    fn axis(lo: T, hi: T, n: usize) -> Vec<T> {
        let step = (hi - lo) / T::lit((n - 1) as f64);
        (0..n)
            .map(|i| if i + 1 == n { hi } else { lo + step * T::lit(i as f64) })
            .collect()
    }

    pub fn x_samples(&self) -> Vec<T> {
        Self::axis(self.x0, self.x1, self.nx)
    }

    pub fn y_samples(&self) -> Vec<T> {
        Self::axis(self.y0, self.y1, self.ny)
    }

    pub fn dx(&self) -> T {
        (self.x1 - self.x0) / T::lit((self.nx - 1) as f64)
    }

    pub fn dy(&self) -> T {
        (self.y1 - self.y0) / T::lit((self.ny - 1) as f64)
    }
}

/// Sampled complex field. `values[[i, j]]` is the value at (x[i], y[j]);
/// masked entries hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid<T> {
    pub spec: GridSpec<T>,
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub values: Array2<Complex<T>>,
    pub mask: Array2<bool>,
    pub k: T,
}

impl<T: Real> FieldGrid<T> {
    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }
}

/// Probability current J = 2 Im(ψ*∇ψ) on a field grid. Boundary points and
/// points next to a masked sample hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentGrid<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub jx: Array2<T>,
    pub jy: Array2<T>,
    pub dx: T,
    pub dy: T,
    /// Set when the spacing exceeds 1/(50k).
    pub coarse_grid_warning: bool,
}

fn plane_wave<T: Real>(w: &IncidentWave<T>, x: T, y: T) -> Complex<T> {
    let (kx, ky) = w.wavevector();
    Complex::from_polar(T::one(), kx * x + ky * y) / (T::lit(2.0) * T::PI())
}

/// Scattered part (c′/4π)H₀⁽¹⁾(kr) at one point with kr > 0.
pub fn scattered_field_at<T: Real>(w: &IncidentWave<T>, c_prime: Complex<T>, x: T, y: T) -> Result<Complex<T>> {
    let kr = w.k() * x.hypot(y);
    Ok(c_prime * hankel1_0(kr)? / (T::lit(4.0) * T::PI()))
}

/// ψ(x, y) = e^{ik·r}/2π + (c′/4π)H₀⁽¹⁾(kr).
pub fn total_field_at<T: Real>(w: &IncidentWave<T>, z: &Coupling<T>, x: T, y: T) -> Result<Complex<T>> {
    let c_prime = c_prime_closed_form(z)?;
    Ok(plane_wave(w, x, y) + scattered_field_at(w, c_prime, x, y)?)
}

/// ψ on a grid, with points closer than kr = 1e-6 to the scatterer masked.
pub fn total_field<T: Real>(w: &IncidentWave<T>, z: &Coupling<T>, grid: &GridSpec<T>) -> Result<FieldGrid<T>> {
    grid.validate()?;
    let c_prime = c_prime_closed_form(z)?;
    let (xs, ys) = (grid.x_samples(), grid.y_samples());
    let k = w.k();
    let nan = cx(T::nan(), T::nan());
    let mut values = Array2::from_elem((xs.len(), ys.len()), nan);
    let mut mask = Array2::from_elem((xs.len(), ys.len()), false);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            if k * x.hypot(y) < T::lit(ORIGIN_MASK_KR) {
                mask[[i, j]] = true;
            } else {
                values[[i, j]] = plane_wave(w, x, y) + scattered_field_at(w, c_prime, x, y)?;
            }
        }
    }
    Ok(FieldGrid {
        spec: *grid,
        x: xs,
        y: ys,
        values,
        mask,
        k,
    })
}

/// ψ₀(y) = (b₊e^{iky} + b₋e^{−iky})/2π on a grid; constant in x.
pub fn psi0_field<T: Real>(params: FamilyParams<T>, k: T, grid: &GridSpec<T>) -> Result<FieldGrid<T>> {
    grid.validate()?;
    if !(k > T::zero()) || !k.is_finite() {
        return Err(Error::Precondition(format!("wavenumber must be positive, got {k}")));
    }
    let (xs, ys) = (grid.x_samples(), grid.y_samples());
    let two_pi = T::lit(2.0) * T::PI();
    let column: Vec<Complex<T>> = ys
        .iter()
        .map(|&y| {
            let e = Complex::from_polar(T::one(), k * y);
            (params.b_plus * e + params.b_minus * e.conj()) / two_pi
        })
        .collect();
    let values = Array2::from_shape_fn((xs.len(), ys.len()), |(_, j)| column[j]);
    let mask = Array2::from_elem((xs.len(), ys.len()), false);
    Ok(FieldGrid {
        spec: *grid,
        x: xs,
        y: ys,
        values,
        mask,
        k,
    })
}

/// J = 2 Im(ψ*∇ψ) by second-order centered differences.
pub fn current_density<T: Real>(f: &FieldGrid<T>) -> CurrentGrid<T> {
    let (nx, ny) = f.values.dim();
    let (dx, dy) = (f.spec.dx(), f.spec.dy());
    let limit = T::one() / (T::lit(50.0) * f.k);
    let mut jx = Array2::from_elem((nx, ny), T::nan());
    let mut jy = Array2::from_elem((nx, ny), T::nan());
    let usable = |i: usize, j: usize| !f.mask[[i, j]];
    for i in 1..nx.saturating_sub(1) {
        for j in 1..ny.saturating_sub(1) {
            if !(usable(i, j) && usable(i - 1, j) && usable(i + 1, j) && usable(i, j - 1) && usable(i, j + 1)) {
                continue;
            }
            let psi = f.values[[i, j]];
            let gx = (f.values[[i + 1, j]] - f.values[[i - 1, j]]) / (dx * T::lit(2.0));
            let gy = (f.values[[i, j + 1]] - f.values[[i, j - 1]]) / (dy * T::lit(2.0));
            jx[[i, j]] = (psi.conj() * gx).im * T::lit(2.0);
            jy[[i, j]] = (psi.conj() * gy).im * T::lit(2.0);
        }
    }
    CurrentGrid {
        x: f.x.clone(),
        y: f.y.clone(),
        jx,
        jy,
        dx,
        dy,
        coarse_grid_warning: dx > limit || dy > limit,
    }
}

/// ∇·J by centered differences of the current; NaN wherever a neighbor is undefined.
pub fn divergence<T: Real>(j: &CurrentGrid<T>) -> Array2<T> {
    let (nx, ny) = j.jx.dim();
    let mut out = Array2::from_elem((nx, ny), T::nan());
    for i in 1..nx.saturating_sub(1) {
        for jj in 1..ny.saturating_sub(1) {
            let d = (j.jx[[i + 1, jj]] - j.jx[[i - 1, jj]]) / (j.dx * T::lit(2.0))
                + (j.jy[[i, jj + 1]] - j.jy[[i, jj - 1]]) / (j.dy * T::lit(2.0));
            out[[i, jj]] = d;
        }
    }
    out
}

/// Near-field comparison along the line through the scatterer
/// perpendicular to the incidence direction, where the plane wave is
/// exactly 1/2π.
#[derive(Debug, Clone, PartialEq)]
pub struct NearFieldCheck<T> {
    pub kr: Vec<T>,
    /// |ψ − ψ_log| at each kr.
    pub residual: Vec<T>,
    /// residual / |ψ|.
    pub relative_residual: Vec<T>,
    pub max_relative_residual: T,
}

/// 1/(4π²(𝔷⁻¹ + i/4)), the coefficient of ln(kr) in ψ near the scatterer.
pub fn near_field_log_coefficient<T: Real>(z: &Coupling<T>) -> Result<Complex<T>> {
    // c′/4π · 2i/π
    let c_prime = c_prime_closed_form(z)?;
    Ok(c_prime * c_i::<T>() * T::lit(2.0) / (T::lit(4.0) * T::PI() * T::PI()))
}

/// ψ_log = [1/(4π²(𝔷⁻¹ + i/4))]·(ln(kr/2) + 2π𝔷⁻¹ + γ).
pub fn near_field_log_form<T: Real>(z: &Coupling<T>, kr: T) -> Result<Complex<T>> {
    let coeff = near_field_log_coefficient(z)?;
    let z_inv = z.value().inv();
    let inner = c_real((kr / T::lit(2.0)).ln() + euler_gamma::<T>()) + z_inv * (T::lit(2.0) * T::PI());
    Ok(coeff * inner)
}

fn perpendicular_point<T: Real>(w: &IncidentWave<T>, kr: T) -> (T, T) {
    let r = kr / w.k();
    let (s, c) = w.theta0().sin_cos();
    (-s * r, c * r)
}

/// Compares ψ with its logarithmic small-r form at each kr ≤ 0.05.
pub fn near_field_expansion_check<T: Real>(
    w: &IncidentWave<T>,
    z: &Coupling<T>,
    kr_points: &[T],
) -> Result<NearFieldCheck<T>> {
    if kr_points.is_empty() {
        return Err(Error::Precondition("need at least one radius".into()));
    }
    let mut out = NearFieldCheck {
        kr: Vec::new(),
        residual: Vec::new(),
        relative_residual: Vec::new(),
        max_relative_residual: T::zero(),
    };
    for &kr in kr_points {
        if !(kr > T::zero()) || kr > T::lit(0.05) {
            return Err(Error::Precondition(format!(
                "near-field radii need 0 < kr ≤ 0.05, got {kr}"
            )));
        }
        let (x, y) = perpendicular_point(w, kr);
        let psi = total_field_at(w, z, x, y)?;
        let approx = near_field_log_form(z, kr)?;
        let res = (psi - approx).norm();
        let rel = res / psi.norm();
        out.kr.push(kr);
        out.residual.push(res);
        out.relative_residual.push(rel);
        out.max_relative_residual = out.max_relative_residual.max(rel);
    }
    Ok(out)
}

/// Least-squares slope of ψ against ln(kr) over the given radii.
pub fn near_field_log_slope<T: Real>(w: &IncidentWave<T>, z: &Coupling<T>, kr_points: &[T]) -> Result<Complex<T>> {
    if kr_points.len() < 2 {
        return Err(Error::Precondition("slope fit needs at least two radii".into()));
    }
    let mut logs = Vec::with_capacity(kr_points.len());
    let mut vals = Vec::with_capacity(kr_points.len());
    for &kr in kr_points {
        if !(kr > T::zero()) || kr > T::lit(0.05) {
            return Err(Error::Precondition(format!(
                "near-field radii need 0 < kr ≤ 0.05, got {kr}"
            )));
        }
        let (x, y) = perpendicular_point(w, kr);
        logs.push(kr.ln());
        vals.push(total_field_at(w, z, x, y)?);
    }
    let n = T::lit(logs.len() as f64);
    let mean_l = logs.iter().fold(T::zero(), |a, &b| a + b) / n;
    let mean_v = vals.iter().fold(c_real(T::zero()), |a, &b| a + b) / n;
    let mut num = c_real(T::zero());
    let mut den = T::zero();
    for (l, v) in logs.iter().zip(&vals) {
        let dl = *l - mean_l;
        num = num + (*v - mean_v) * dl;
        den = den + dl * dl;
    }
    Ok(num / den)
}

/// Far-field comparison on one circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldCheck<T> {
    pub kr: T,
    /// max over the circle of |ψ_sc − ψ_asym| / |ψ_asym|.
    pub max_relative_residual: T,
}

/// (1/2π)√(i/(kr)) e^{ikr} f, the leading far-field form of the scattered wave.
pub fn asymptotic_scattered<T: Real>(kr: T, f: Complex<T>) -> Complex<T> {
    let phase = Complex::from_polar((T::one() / kr).sqrt(), kr + T::FRAC_PI_4());
    phase * f / (T::lit(2.0) * T::PI())
}

/// Samples `n_angles` points on the circle of radius kr/k and compares the
/// scattered wave with its asymptotic form.
pub fn far_field_check<T: Real>(
    w: &IncidentWave<T>,
    z: &Coupling<T>,
    kr: T,
    n_angles: usize,
) -> Result<FarFieldCheck<T>> {
    if !(kr >= T::one()) || !kr.is_finite() {
        return Err(Error::Precondition(format!("far-field radius needs kr ≥ 1, got {kr}")));
    }
    if n_angles == 0 {
        return Err(Error::Precondition("need at least one angle".into()));
    }
    let c_prime = c_prime_closed_form(z)?;
    // isotropic, so any non-forward, non-grazing direction gives f
    let f = scattering_amplitude_dfss(w, z, T::zero())?;
    let asym = asymptotic_scattered(kr, f);
    let r = kr / w.k();
    let mut worst = T::zero();
    for m in 0..n_angles {
        let theta = T::lit(2.0) * T::PI() * (T::lit(m as f64) + T::lit(0.5)) / T::lit(n_angles as f64);
        let (s, c) = theta.sin_cos();
        let sc = scattered_field_at(w, c_prime, r * c, r * s)?;
        worst = worst.max((sc - asym).norm() / asym.norm());
    }
    Ok(FarFieldCheck {
        kr,
        max_relative_residual: worst,
    })
}

/// (θ, |f(θ)|²) for each angle of the grid.
pub fn cross_section<T: Real>(w: &IncidentWave<T>, z: &Coupling<T>, thetas: &[T]) -> Result<Vec<(T, T)>> {
    thetas
        .iter()
        .map(|&t| scattering_amplitude_dfss(w, z, t).map(|f| (t, f.norm_sqr())))
        .collect()
}
