//! Transfer-matrix treatment of the delta scatterer: the nilpotent
//! Hamiltonian kernel, the auxiliary and fundamental transfer-matrix
//! entries, the c′ solve, amplitude extraction, and the cutoff plus
//! renormalized-coupling route it is compared against.

use crate::amplitudes::{
    add, integrate_inverse_varpi, project_band, GeneralizedAmplitude, IncidentWave, IntegrationDomain, Support,
};
use crate::error::{Error, Result};
use crate::kernel::{green_cutoff_zero, CutoffSpec, Dispersion};
use crate::{c_i, c_real, cx, is_finite_c, Complex, Real};

/// Strength of the delta potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling<T> {
    /// Physical coupling of the transfer-matrix route.
    Finite(Complex<T>),
    /// Bare coupling defined together with a momentum cutoff.
    Bare { z: Complex<T>, lambda: T },
    /// Renormalized coupling at momentum scale μ.
    Renormalized { z: Complex<T>, mu: T },
}

fn check_coupling_value<T: Real>(z: Complex<T>) -> Result<()> {
    if !is_finite_c(z) {
        return Err(Error::Precondition("coupling must be finite".into()));
    }
    if z == c_real(T::zero()) {
        return Err(Error::Precondition(
            "coupling must be nonzero (its inverse enters every formula)".into(),
        ));
    }
    Ok(())
}

fn check_scale<T: Real>(name: &str, v: T) -> Result<()> {
    if !v.is_finite() || v <= T::zero() {
        return Err(Error::Precondition(format!(
            "{name} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}

impl<T: Real> Coupling<T> {
    pub fn finite(z: Complex<T>) -> Result<Self> {
        check_coupling_value(z)?;
        Ok(Coupling::Finite(z))
    }

    pub fn bare(z: Complex<T>, lambda: T) -> Result<Self> {
        check_coupling_value(z)?;
        check_scale("cutoff", lambda)?;
        Ok(Coupling::Bare { z, lambda })
    }

    pub fn renormalized(z: Complex<T>, mu: T) -> Result<Self> {
        check_coupling_value(z)?;
        check_scale("renormalization scale", mu)?;
        Ok(Coupling::Renormalized { z, mu })
    }

    pub fn value(&self) -> Complex<T> {
        match *self {
            Coupling::Finite(z) | Coupling::Bare { z, .. } | Coupling::Renormalized { z, .. } => z,
        }
    }

    fn inverse(&self) -> Result<Complex<T>> {
        let z = self.value();
        check_coupling_value(z)?;
        Ok(z.inv())
    }

    fn kind_name(&self) -> &'static str {
        match self {
            Coupling::Finite(_) => "finite",
            Coupling::Bare { .. } => "bare",
            Coupling::Renormalized { .. } => "renormalized",
        }
    }
}

/// The fixed matrix σ₃ + iσ₂ = [[1, 1], [−1, −1]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KMatrix;

impl KMatrix {
    pub fn entries<T: Real>(&self) -> [[Complex<T>; 2]; 2] {
        let one = c_real(T::one());
        [[one, one], [-one, -one]]
    }

    /// K² computed entrywise; it is the zero matrix.
    pub fn square<T: Real>(&self) -> [[Complex<T>; 2]; 2] {
        let k = self.entries::<T>();
        let mut out = [[c_real(T::zero()); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = k[i][0] * k[0][j] + k[i][1] * k[1][j];
            }
        }
        out
    }

    /// σ₃ + iσ₂ assembled from the Pauli matrices.
    pub fn from_pauli<T: Real>() -> [[Complex<T>; 2]; 2] {
        let (o, one, i) = (c_real(T::zero()), c_real(T::one()), c_i::<T>());
        let sigma2 = [[o, -i], [i, o]];
        let sigma3 = [[one, o], [o, -one]];
        let mut out = [[o; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = sigma3[r][c] + i * sigma2[r][c];
            }
        }
        out
    }
}

/// A pair of coefficient functions the kernel acts on.
pub type AmplitudePair<T> = (GeneralizedAmplitude<T>, GeneralizedAmplitude<T>);

/// The delta-potential Hamiltonian kernel (1/2)·v·ϖ̂⁻¹·K, where v acts as
/// the rank-one smear (𝔷/2π)∫dq.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaKernel<T> {
    z: Complex<T>,
    domain: IntegrationDomain<T>,
    dispersion: Dispersion<T>,
}

/// Kernel of a finite (band integral) or bare (cutoff-line integral) coupling.
pub fn hamiltonian_kernel<T: Real>(z: &Coupling<T>, d: &Dispersion<T>) -> Result<DeltaKernel<T>> {
    let domain = match *z {
        Coupling::Finite(_) => IntegrationDomain::Band,
        Coupling::Bare { lambda, .. } => {
            if !(lambda > d.k()) {
                return Err(Error::Precondition(format!(
                    "cutoff {lambda} must exceed k = {}",
                    d.k()
                )));
            }
            IntegrationDomain::CutoffLine(lambda)
        }
        Coupling::Renormalized { .. } => {
            return Err(Error::Precondition(
                "the Hamiltonian kernel takes a finite or bare coupling".into(),
            ))
        }
    };
    Ok(DeltaKernel {
        z: z.value(),
        domain,
        dispersion: *d,
    })
}

impl<T: Real> DeltaKernel<T> {
    /// (ξ₊, ξ₋) ↦ (𝔷/4π)·S·(1, −1) with S = ∫(ξ₊ + ξ₋)/ϖ.
    pub fn apply(&self, pair: &AmplitudePair<T>) -> Result<AmplitudePair<T>> {
        let sum = add(&pair.0, &pair.1)?;
        let s = integrate_inverse_varpi(&sum, self.domain, &self.dispersion)?;
        let coeff = self.z * s / (T::lit(4.0) * T::PI());
        let support = match self.domain {
            IntegrationDomain::Band => Support::Band { k: self.dispersion.k() },
            IntegrationDomain::CutoffLine(_) => Support::FullLine,
        };
        Ok((
            GeneralizedAmplitude::constant(coeff, support)?,
            GeneralizedAmplitude::constant(-coeff, support)?,
        ))
    }

    /// Applies the kernel twice. K² = 0 makes the result the zero pair.
    pub fn apply_twice(&self, pair: &AmplitudePair<T>) -> Result<AmplitudePair<T>> {
        self.apply(&self.apply(pair)?)
    }
}

/// φ ↦ identity_coefficient·φ + rank_one_coefficient·(∫φ/ϖ over the domain)·1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferEntry<T> {
    pub identity_coefficient: Complex<T>,
    pub rank_one_coefficient: Complex<T>,
    pub domain: IntegrationDomain<T>,
}

impl<T: Real> TransferEntry<T> {
    fn output_support(&self, d: &Dispersion<T>) -> Support<T> {
        match self.domain {
            IntegrationDomain::Band => Support::Band { k: d.k() },
            IntegrationDomain::CutoffLine(_) => Support::FullLine,
        }
    }

    fn prepare(&self, phi: &GeneralizedAmplitude<T>, d: &Dispersion<T>) -> Result<GeneralizedAmplitude<T>> {
        match self.domain {
            IntegrationDomain::Band => Ok(project_band(phi, d)),
            IntegrationDomain::CutoffLine(_) => phi.on_full_line(),
        }
    }

    /// Action on φ. Band-domain entries are sandwiched between band
    /// projections, so the input is projected first.
    pub fn apply(&self, phi: &GeneralizedAmplitude<T>, d: &Dispersion<T>) -> Result<GeneralizedAmplitude<T>> {
        let phi = self.prepare(phi, d)?;
        let integral = integrate_inverse_varpi(&phi, self.domain, d)?;
        let constant = GeneralizedAmplitude::constant(self.rank_one_coefficient * integral, self.output_support(d))?;
        add(&phi.scale(self.identity_coefficient), &constant)
    }

    /// Solves entry(φ) = source for φ, which has the form source/α + c·1
    /// with c = −β·I(source) / (α(α + β·I(1))).
    pub fn solve(&self, source: &GeneralizedAmplitude<T>, d: &Dispersion<T>) -> Result<GeneralizedAmplitude<T>> {
        let alpha = self.identity_coefficient;
        let beta = self.rank_one_coefficient;
        if alpha == c_real(T::zero()) {
            return Err(Error::Pole(
                "identity coefficient vanishes; the entry is not invertible".into(),
            ));
        }
        let source = self.prepare(source, d)?;
        let support = self.output_support(d);
        let i_source = integrate_inverse_varpi(&source, self.domain, d)?;
        let i_one = integrate_inverse_varpi(
            &GeneralizedAmplitude::constant(c_real(T::one()), support)?,
            self.domain,
            d,
        )?;
        let den = alpha * (alpha + beta * i_one);
        if den.norm() <= T::epsilon() * alpha.norm() * (alpha.norm() + (beta * i_one).norm()) {
            return Err(Error::Pole("rank-one denominator α(α + β∫1/ϖ) vanishes".into()));
        }
        let c = -beta * i_source / den;
        add(&source.scale(alpha.inv()), &GeneralizedAmplitude::constant(c, support)?)
    }
}

fn entries_on<T: Real>(z: Complex<T>, domain: IntegrationDomain<T>) -> (TransferEntry<T>, TransferEntry<T>) {
    let beta = c_i::<T>() * z / (T::lit(4.0) * T::PI());
    (
        TransferEntry {
            identity_coefficient: c_real(T::zero()),
            rank_one_coefficient: -beta,
            domain,
        },
        TransferEntry {
            identity_coefficient: c_real(T::one()),
            rank_one_coefficient: beta,
            domain,
        },
    )
}

/// (M₁₂, M₂₂) of the auxiliary transfer matrix, with the full-line
/// integrals cut off at Λ.
pub fn auxiliary_entries<T: Real>(
    z: &Coupling<T>,
    lambda: T,
    d: &Dispersion<T>,
) -> Result<(TransferEntry<T>, TransferEntry<T>)> {
    check_coupling_value(z.value())?;
    if !(lambda > d.k()) || !lambda.is_finite() {
        return Err(Error::Precondition(format!(
            "cutoff {lambda} must be finite and exceed k = {}",
            d.k()
        )));
    }
    Ok(entries_on(z.value(), IntegrationDomain::CutoffLine(lambda)))
}

/// (M₁₂, M₂₂) of the fundamental transfer matrix: integrals over the band only.
pub fn fundamental_entries<T: Real>(z: &Coupling<T>) -> Result<(TransferEntry<T>, TransferEntry<T>)> {
    match z {
        Coupling::Finite(v) => {
            check_coupling_value(*v)?;
            Ok(entries_on(*v, IntegrationDomain::Band))
        }
        other => Err(Error::Precondition(format!(
            "the fundamental transfer matrix takes a finite coupling, got a {} one",
            other.kind_name()
        ))),
    }
}

/// 𝔷⁻¹ + i/4, the denominator shared by c′ and f.
fn dfss_denominator<T: Real>(z_inv: Complex<T>) -> Result<Complex<T>> {
    let den = z_inv + cx(T::zero(), T::lit(0.25));
    if den.norm() <= T::epsilon() * (z_inv.norm() + T::lit(0.25)) {
        return Err(Error::Pole("z⁻¹ + i/4 vanishes (z = 4i)".into()));
    }
    Ok(den)
}

/// c′ = −i / (2(𝔷⁻¹ + i/4)).
pub fn c_prime_closed_form<T: Real>(z: &Coupling<T>) -> Result<Complex<T>> {
    let den = dfss_denominator(z.inverse()?)?;
    Ok(-c_i::<T>() * (den.inv() * T::lit(0.5)))
}

/// Output of [`solve_fundamental`].
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalSolution<T> {
    pub b_minus: GeneralizedAmplitude<T>,
    pub a_plus: GeneralizedAmplitude<T>,
    pub c_prime: Complex<T>,
    /// max modulus of M₂₂B₋ − source.
    pub residual: T,
}

/// Solves M₂₂B₋ = 2πϖ(p₀)δ(p − p₀) with the ansatz B₋ = source + c′ and
/// sets A₊ = M₁₂B₋. The ansatz is checked against the equation and against
/// a direct rank-one solve.
pub fn solve_fundamental<T: Real>(w: &IncidentWave<T>, z: &Coupling<T>) -> Result<FundamentalSolution<T>> {
    let d = w.dispersion();
    let (m12, m22) = fundamental_entries(z)?;
    let c_prime = c_prime_closed_form(z)?;
    let source = w.source();
    let support = Support::Band { k: d.k() };
    let b_minus = add(&source, &GeneralizedAmplitude::constant(c_prime, support)?)?;

    let tolerance = T::lit(1e-12) * T::one().max(z.value().norm());
    let reproduced = m22.apply(&b_minus, d)?;
    let residual = add(&reproduced, &source.scale(-c_real(T::one())))?.max_modulus();
    if !(residual <= tolerance) {
        return Err(Error::Residual {
            check: "M22 B- = source",
            residual: residual.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    let direct = m22.solve(&source, d)?;
    let mismatch = (direct.background() - c_prime).norm();
    if !(mismatch <= tolerance) {
        return Err(Error::Residual {
            check: "closed-form c' against rank-one solve",
            residual: mismatch.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    let a_plus = m12.apply(&b_minus, d)?;
    let a_gap = (a_plus.background() - c_prime).norm();
    if !(a_gap <= tolerance) {
        return Err(Error::Residual {
            check: "M12 B- = c'",
            residual: a_gap.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    Ok(FundamentalSolution {
        b_minus,
        a_plus,
        c_prime,
        residual,
    })
}

/// Maps θ into (−π/2, 3π/2].
pub fn normalize_angle<T: Real>(theta: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let lo = -T::FRAC_PI_2();
    let mut t = theta - two_pi * ((theta - lo) / two_pi).floor();
    if t <= lo {
        t = t + two_pi;
    }
    t
}

const ANGLE_TOLERANCE: f64 = 1e-12;

fn check_scattering_angle<T: Real>(w: &IncidentWave<T>, theta: T) -> Result<T> {
    if !theta.is_finite() {
        return Err(Error::Precondition(format!("scattering angle {theta} is not finite")));
    }
    let t = normalize_angle(theta);
    let tol = T::lit(ANGLE_TOLERANCE);
    let half_pi = T::FRAC_PI_2();
    if (t - half_pi).abs() <= tol || (t - T::lit(3.0) * half_pi).abs() <= tol {
        return Err(Error::GrazingAngle {
            theta: theta.to_f64_lossy(),
        });
    }
    if (t - w.theta0()).abs() <= tol {
        return Err(Error::ForwardAngle {
            theta: theta.to_f64_lossy(),
        });
    }
    Ok(t)
}

/// Which side of the scatterer an outgoing direction points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// θ ∈ (−π/2, π/2): back toward the source, read off B₋.
    Reflection,
    /// θ ∈ (π/2, 3π/2): past the scatterer, read off A₊.
    Transmission,
}

/// Both readings of f from one fundamental solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeExtraction<T> {
    pub from_transmission: Complex<T>,
    pub from_reflection: Complex<T>,
    pub side: Side,
}

/// f = −i·c′/√(2π) on the transmission side and −i·(B₋ background)/√(2π)
/// on the reflection side. The forward δ(θ − θ₀) term is not part of the
/// result.
pub fn extract_amplitudes<T: Real>(w: &IncidentWave<T>, z: &Coupling<T>, theta: T) -> Result<AmplitudeExtraction<T>> {
    let t = check_scattering_angle(w, theta)?;
    let sol = solve_fundamental(w, z)?;
    let sqrt_2pi = (T::lit(2.0) * T::PI()).sqrt();
    let read = |background: Complex<T>| (-c_i::<T>() * background) / sqrt_2pi;
    Ok(AmplitudeExtraction {
        from_transmission: read(sol.c_prime),
        from_reflection: read(sol.b_minus.background()),
        side: if t < T::FRAC_PI_2() {
            Side::Reflection
        } else {
            Side::Transmission
        },
    })
}

/// Scattering amplitude f(θ) of the transfer-matrix route. It is isotropic;
/// both extraction paths are computed and required to agree.
pub fn scattering_amplitude_dfss<T: Real>(w: &IncidentWave<T>, z: &Coupling<T>, theta: T) -> Result<Complex<T>> {
    let e = extract_amplitudes(w, z, theta)?;
    let scale = e.from_transmission.norm().max(T::min_positive_value());
    let gap = (e.from_transmission - e.from_reflection).norm();
    if gap > T::lit(1e-14) * scale {
        return Err(Error::Residual {
            check: "transmission and reflection amplitudes",
            residual: gap.to_f64_lossy(),
            tolerance: (T::lit(1e-14) * scale).to_f64_lossy(),
        });
    }
    Ok(match e.side {
        Side::Transmission => e.from_transmission,
        Side::Reflection => e.from_reflection,
    })
}

fn amplitude_from_denominator<T: Real>(den: Complex<T>) -> Complex<T> {
    -(den.inv() * T::lit(0.5)) / (T::lit(2.0) * T::PI()).sqrt()
}

/// f = −(1/√(8π)) / (z̃⁻¹ + i/4) for a renormalized coupling.
pub fn scattering_amplitude_renormalized<T: Real>(_w: &IncidentWave<T>, z_tilde: &Coupling<T>) -> Result<Complex<T>> {
    match z_tilde {
        Coupling::Renormalized { .. } => {}
        other => {
            return Err(Error::Precondition(format!(
                "expected a renormalized coupling, got a {} one",
                other.kind_name()
            )))
        }
    }
    Ok(amplitude_from_denominator(dfss_denominator(z_tilde.inverse()?)?))
}

fn log_ratio_over_2pi<T: Real>(lambda: T, mu: T) -> Result<T> {
    check_scale("cutoff", lambda)?;
    check_scale("renormalization scale", mu)?;
    Ok((lambda / mu).ln() / (T::lit(2.0) * T::PI()))
}

/// z̃ = (z̊⁻¹ + (1/2π) ln(Λ/μ))⁻¹.
pub fn renormalize_bare<T: Real>(z_bare: Complex<T>, lambda: T, mu: T) -> Result<Complex<T>> {
    check_coupling_value(z_bare)?;
    let shift = log_ratio_over_2pi(lambda, mu)?;
    if shift == T::zero() {
        return Ok(z_bare);
    }
    let den = z_bare.inv() + shift;
    if den == c_real(T::zero()) {
        return Err(Error::Pole("z̊⁻¹ + ln(Λ/μ)/2π vanishes".into()));
    }
    Ok(den.inv())
}

/// Inverse of [`renormalize_bare`]: z̊(Λ) = (z̃⁻¹ − (1/2π) ln(Λ/μ))⁻¹.
pub fn bare_from_renormalized<T: Real>(z_tilde: Complex<T>, lambda: T, mu: T) -> Result<Complex<T>> {
    check_coupling_value(z_tilde)?;
    let shift = log_ratio_over_2pi(lambda, mu)?;
    if shift == T::zero() {
        return Ok(z_tilde);
    }
    let den = z_tilde.inv() - shift;
    if den == c_real(T::zero()) {
        return Err(Error::Pole("z̃⁻¹ − ln(Λ/μ)/2π vanishes".into()));
    }
    Ok(den.inv())
}

/// f = −(1/√(8π)) / (z̊⁻¹ − G_Λ(0)) with the cutoff Green's function at the origin.
pub fn bare_amplitude_with_cutoff<T: Real>(w: &IncidentWave<T>, z_bare: Complex<T>, lambda: T) -> Result<Complex<T>> {
    check_coupling_value(z_bare)?;
    let z_inv = z_bare.inv();
    let g = green_cutoff_zero(&CutoffSpec::sharp(lambda)?, w.dispersion())?;
    let den = z_inv - g;
    if den.norm() <= T::epsilon() * (z_inv.norm() + g.norm()) {
        return Err(Error::Pole("z̊⁻¹ − G_Λ(0) vanishes".into()));
    }
    Ok(amplitude_from_denominator(den))
}
