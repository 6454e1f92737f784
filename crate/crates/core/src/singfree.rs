//! The two-parameter solution family with on-shell atoms at p = ±k whose
//! weights absorb the logarithmic divergence instead of the coupling.

use crate::amplitudes::{project_band, Atom, GeneralizedAmplitude, IncidentWave, Support};
use crate::error::{Error, Result};
use crate::kernel::{position_regularized_h0, regularized_h0_at_zero, CutoffSpec, Dispersion};
use crate::transfer::Coupling;
use crate::{c_i, c_real, is_finite_c, Complex, Real};

/// Free weights b₊, b₋ of the on-shell atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams<T> {
    pub b_plus: Complex<T>,
    pub b_minus: Complex<T>,
}

impl<T: Real> FamilyParams<T> {
    pub fn new(b_plus: Complex<T>, b_minus: Complex<T>) -> Result<Self> {
        if !is_finite_c(b_plus) || !is_finite_c(b_minus) {
            return Err(Error::Precondition("family parameters must be finite".into()));
        }
        Ok(Self { b_plus, b_minus })
    }

    pub fn sum(&self) -> Complex<T> {
        self.b_minus + self.b_plus
    }
}

/// How H₀⁽¹⁾(0) is regularized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegulatorScheme {
    /// Sharp momentum cutoff: (1/π)∫_{−Λ}^{Λ}dq/ϖ = 1 − (2i/π) arccosh(Λ/k).
    Momentum,
    /// Small radius r = 1/Λ: H₀⁽¹⁾(k/Λ).
    Position,
}

/// The regularized stand-in for H₀⁽¹⁾(0) in the given scheme.
pub fn regularized_h0<T: Real>(scheme: RegulatorScheme, lambda: T, d: &Dispersion<T>) -> Result<Complex<T>> {
    match scheme {
        RegulatorScheme::Momentum => regularized_h0_at_zero(&CutoffSpec::sharp(lambda)?, d),
        RegulatorScheme::Position => {
            if !(lambda > d.k()) {
                return Err(Error::Precondition(format!(
                    "cutoff {lambda} must exceed k = {}",
                    d.k()
                )));
            }
            position_regularized_h0(lambda, d)
        }
    }
}

/// F(p) = 2π[δ(p − p₀) + b₊δ(p − k) + b₋δ(p + k)] + c/ϖ(p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FRepresentation<T> {
    pub p0: T,
    pub k: T,
    pub params: FamilyParams<T>,
    /// c, the coefficient of 1/ϖ(p).
    pub background_over_varpi: Complex<T>,
}

impl<T: Real> FRepresentation<T> {
    /// B₋ = ϖ·F. ϖ(±k) = 0 turns the edge atoms into zero-weight atoms,
    /// the incident atom gets weight 2πϖ(p₀), and c/ϖ becomes the constant c.
    pub fn times_varpi(&self, d: &Dispersion<T>) -> Result<GeneralizedAmplitude<T>> {
        let two_pi = T::lit(2.0) * T::PI();
        let atoms = vec![
            Atom::new(self.p0, d.varpi(self.p0) * two_pi),
            Atom::new(self.k, self.params.b_plus * two_pi * d.varpi(self.k)),
            Atom::new(-self.k, self.params.b_minus * two_pi * d.varpi(-self.k)),
        ];
        GeneralizedAmplitude::new(atoms, self.background_over_varpi, Support::FullLine)
    }

    /// ∫_{−Λ}^{Λ} F(q) dq = 2π(1 + b₋ + b₊) + c·π·H_reg.
    pub fn integrate(&self, scheme: RegulatorScheme, lambda: T, d: &Dispersion<T>) -> Result<Complex<T>> {
        let h = regularized_h0(scheme, lambda, d)?;
        let atoms = (c_real(T::one()) + self.params.sum()) * (T::lit(2.0) * T::PI());
        Ok(atoms + self.background_over_varpi * h * T::PI())
    }
}

fn finite_coupling_inverse<T: Real>(z: &Coupling<T>) -> Result<Complex<T>> {
    match z {
        Coupling::Finite(v) if is_finite_c(*v) && *v != c_real(T::zero()) => Ok(v.inv()),
        Coupling::Finite(_) => Err(Error::Precondition("coupling must be finite and nonzero".into())),
        _ => Err(Error::Precondition(
            "the solution family takes a finite coupling".into(),
        )),
    }
}

fn family_denominator<T: Real>(z_inv: Complex<T>, h: Complex<T>) -> Result<Complex<T>> {
    let quarter_i = c_i::<T>() * T::lit(0.25);
    let den = z_inv + quarter_i * h;
    if den.norm() <= T::epsilon() * (z_inv.norm() + (quarter_i * h).norm()) {
        return Err(Error::Pole("z⁻¹ + (i/4)H_reg vanishes".into()));
    }
    Ok(den)
}

/// Solution of the F equation at cutoff Λ (momentum scheme):
/// c = −i(1 + b₋ + b₊) / (2(𝔷⁻¹ + (i/4)H_reg)).
///
/// The result is substituted back (c = −(i𝔷/4π)∫F) and rejected if the
/// residual exceeds 1e-12·max(1, |c|).
pub fn family_solution<T: Real>(
    w: &IncidentWave<T>,
    z: &Coupling<T>,
    params: FamilyParams<T>,
    lambda: T,
) -> Result<(FRepresentation<T>, Complex<T>)> {
    let d = w.dispersion();
    let z_inv = finite_coupling_inverse(z)?;
    let h = regularized_h0(RegulatorScheme::Momentum, lambda, d)?;
    let den = family_denominator(z_inv, h)?;
    let c = -c_i::<T>() * (c_real(T::one()) + params.sum()) / (den * T::lit(2.0));
    let f = FRepresentation {
        p0: w.p0(),
        k: d.k(),
        params,
        background_over_varpi: c,
    };
    let integral = f.integrate(RegulatorScheme::Momentum, lambda, d)?;
    let back = -c_i::<T>() * z.value() * integral / (T::lit(4.0) * T::PI());
    let residual = (back - c).norm();
    let tolerance = T::lit(1e-12) * T::one().max(c.norm());
    if !(residual <= tolerance) {
        return Err(Error::Residual {
            check: "c = -(iz/4pi) * integral of F",
            residual: residual.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    Ok((f, c))
}

/// f = −(1/√(8π))·(1 + b₋ + b₊)/(𝔷⁻¹ + (i/4)H_reg). Only the sum b₋ + b₊ enters.
pub fn family_amplitude<T: Real>(
    w: &IncidentWave<T>,
    z: &Coupling<T>,
    params: FamilyParams<T>,
    lambda: T,
) -> Result<Complex<T>> {
    family_amplitude_in(RegulatorScheme::Momentum, w, z, params.sum(), lambda)
}

/// [`family_amplitude`] for a given b₋ + b₊ and regulator scheme.
pub fn family_amplitude_in<T: Real>(
    scheme: RegulatorScheme,
    w: &IncidentWave<T>,
    z: &Coupling<T>,
    b_sum: Complex<T>,
    lambda: T,
) -> Result<Complex<T>> {
    let z_inv = finite_coupling_inverse(z)?;
    let h = regularized_h0(scheme, lambda, w.dispersion())?;
    let den = family_denominator(z_inv, h)?;
    let norm = (T::lit(8.0) * T::PI()).sqrt();
    Ok(-(c_real(T::one()) + b_sum) / (den * norm))
}

/// b₋ + b₊ = (H_reg − 1)/(1 − 4i/𝔷), which makes the family amplitude equal
/// the transfer-matrix amplitude at this Λ (momentum scheme).
pub fn absorption_condition<T: Real>(z: &Coupling<T>, lambda: T, d: &Dispersion<T>) -> Result<Complex<T>> {
    absorption_condition_in(RegulatorScheme::Momentum, z, lambda, d)
}

pub fn absorption_condition_in<T: Real>(
    scheme: RegulatorScheme,
    z: &Coupling<T>,
    lambda: T,
    d: &Dispersion<T>,
) -> Result<Complex<T>> {
    let z_inv = finite_coupling_inverse(z)?;
    let h = regularized_h0(scheme, lambda, d)?;
    let den = c_real(T::one()) - c_i::<T>() * T::lit(4.0) * z_inv;
    if den.norm() <= T::epsilon() * (T::one() + T::lit(4.0) * z_inv.norm()) {
        return Err(Error::Pole("1 − 4i/z vanishes (z = 4i)".into()));
    }
    Ok((h - c_real(T::one())) / den)
}

/// b̃ = iπ(b₋ + b₊)/(2 ln(Λ/k)).
pub fn renormalized_b<T: Real>(b_sum: Complex<T>, lambda: T, d: &Dispersion<T>) -> Result<Complex<T>> {
    if !lambda.is_finite() || !(lambda > d.k()) {
        return Err(Error::Precondition(format!(
            "cutoff {lambda} must be finite and exceed k = {}",
            d.k()
        )));
    }
    let log = (lambda / d.k()).ln();
    Ok(c_i::<T>() * b_sum * T::PI() / (log * T::lit(2.0)))
}

/// The limit of b̃ as Λ → ∞ in either scheme: 𝔷/(𝔷 − 4i).
pub fn renormalized_b_limit<T: Real>(z: &Coupling<T>) -> Result<Complex<T>> {
    let v = z.value();
    let den = v - c_i::<T>() * T::lit(4.0);
    if den == c_real(T::zero()) {
        return Err(Error::Pole("z − 4i vanishes".into()));
    }
    Ok(v / den)
}

/// Largest modulus the ±k atoms contribute to ϖ·F and to its band
/// projection. The product rule ϖ(±k) = 0 makes it exactly zero.
pub fn edge_annihilation_check<T: Real>(params: FamilyParams<T>, d: &Dispersion<T>) -> Result<T> {
    let f = FRepresentation {
        p0: T::zero(),
        k: d.k(),
        params,
        background_over_varpi: c_real(T::zero()),
    };
    let b = f.times_varpi(d)?;
    let in_b = b.edge_atoms(d).iter().map(|a| a.weight.norm()).fold(T::zero(), T::max);
    let projected = project_band(&b, d);
    let in_projection = projected
        .edge_atoms(d)
        .iter()
        .map(|a| a.weight.norm())
        .fold(T::zero(), T::max);
    Ok(in_b.max(in_projection))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{scattering_amplitude_dfss, solve_fundamental};
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn d1() -> Dispersion<f64> {
        Dispersion::new(1.0).unwrap()
    }

    fn wave() -> IncidentWave<f64> {
        IncidentWave::new(d1(), 2.7).unwrap()
    }

    fn finite(re: f64, im: f64) -> Coupling<f64> {
        Coupling::finite(C::new(re, im)).unwrap()
    }

    fn params(bp: C, bm: C) -> FamilyParams<f64> {
        FamilyParams::new(bp, bm).unwrap()
    }

    #[test]
    fn zero_params_at_root_two() {
        let z = finite(1.0, 0.0);
        let lambda = 2.0_f64.sqrt();
        let (_, c) = family_solution(&wave(), &z, params(C::new(0.0, 0.0), C::new(0.0, 0.0)), lambda).unwrap();
        let h = C::new(1.0, -(2.0 / PI) * (2.0_f64.sqrt() + 1.0).ln());
        let expected = C::new(0.0, -1.0) / (2.0 * (C::new(1.0, 0.0) + C::new(0.0, 0.25) * h));
        assert!((c - expected).norm() < 1e-15);
    }

    #[test]
    fn dark_point() {
        let p = params(C::new(-0.3, 1.0), C::new(-0.7, -1.0));
        for lambda in [2.0, 50.0] {
            let (_, c) = family_solution(&wave(), &finite(0.5, 2.0), p, lambda).unwrap();
            assert_eq!(c, C::new(0.0, 0.0));
            assert_eq!(
                family_amplitude(&wave(), &finite(0.5, 2.0), p, lambda).unwrap(),
                C::new(0.0, 0.0)
            );
        }
    }

    #[test]
    fn absorption_reproduces_transfer_route() {
        let w = wave();
        for z in [finite(1.0, 0.0), finite(0.0, 0.5), finite(2.0, -1.0)] {
            let target = scattering_amplitude_dfss(&w, &z, 0.2).unwrap();
            let c_prime = solve_fundamental(&w, &z).unwrap().c_prime;
            for ratio in [2.0, 10.0, 100.0] {
                let sum = absorption_condition(&z, ratio, &d1()).unwrap();
                let p = params(sum, C::new(0.0, 0.0));
                let f = family_amplitude(&w, &z, p, ratio).unwrap();
                assert!((f - target).norm() <= 1e-12, "z={:?} ratio={ratio}", z);
                let (_, c) = family_solution(&w, &z, p, ratio).unwrap();
                assert!((c - c_prime).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn absorption_at_ten() {
        let sum = absorption_condition(&finite(1.0, 0.0), 10.0, &d1()).unwrap();
        let h_minus_one = C::new(0.0, -(2.0 / PI) * 10.0_f64.acosh());
        assert!((sum - h_minus_one / C::new(1.0, -4.0)).norm() < 1e-15);
        assert!(matches!(
            absorption_condition(&finite(0.0, 4.0), 10.0, &d1()),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn absorption_growth() {
        let z = finite(1.0, 0.0);
        let lambda = 1e12;
        let sum = absorption_condition(&z, lambda, &d1()).unwrap();
        let lead = (2.0 / PI) * lambda.ln() / C::new(1.0, -4.0).norm();
        assert!((sum.norm() / lead - 1.0).abs() < 0.03);
    }

    #[test]
    fn amplitude_depends_on_sum_only() {
        let b = C::new(0.4, -1.3);
        let zero = C::new(0.0, 0.0);
        let z = finite(1.0, 1.0);
        let f1 = family_amplitude(&wave(), &z, params(b, zero), 7.0).unwrap();
        let f2 = family_amplitude(&wave(), &z, params(zero, b), 7.0).unwrap();
        assert_eq!(f1, f2);
    }

    #[test]
    fn fixed_bare_amplitude_fades() {
        let z = finite(1.0, 0.0);
        let zero = params(C::new(0.0, 0.0), C::new(0.0, 0.0));
        let mut prev = f64::INFINITY;
        for lambda in [1e2, 1e4, 1e8, 1e16] {
            let f = family_amplitude(&wave(), &z, zero, lambda).unwrap().norm();
            assert!(f < prev);
            // |f| ≈ (1/√(8π))/(1 + (1/2π) ln(2Λ/k))
            let lead = (1.0 / (8.0 * PI).sqrt()) / (1.0 + (2.0 * lambda).ln() / (2.0 * PI));
            assert!((f / lead - 1.0).abs() < 0.01, "lambda={lambda}");
            prev = f;
        }
    }

    #[test]
    fn renormalized_b_rules() {
        let d = d1();
        assert_eq!(renormalized_b(C::new(0.0, 0.0), 10.0, &d).unwrap(), C::new(0.0, 0.0));
        let s = C::new(1.0, 2.0);
        let a = renormalized_b(s, 10.0, &d).unwrap();
        let b = renormalized_b(s, 100.0, &d).unwrap();
        assert!((a - b * 2.0).norm() < 1e-15);
        assert!(renormalized_b(s, 1.0, &d).is_err());
    }

    #[test]
    fn renormalized_b_converges_in_both_schemes() {
        let d = d1();
        let z = finite(1.0, 0.0);
        let limit = renormalized_b_limit(&z).unwrap();
        assert!((limit - C::new(1.0 / 17.0, 4.0 / 17.0)).norm() < 1e-15);
        for scheme in [RegulatorScheme::Momentum, RegulatorScheme::Position] {
            let errs: Vec<f64> = [1e3, 1e6, 1e9]
                .iter()
                .map(|&l| {
                    let s = absorption_condition_in(scheme, &z, l, &d).unwrap();
                    (renormalized_b(s, l, &d).unwrap() - limit).norm()
                })
                .collect();
            assert!(errs[0] > errs[1] && errs[1] > errs[2], "{scheme:?}: {errs:?}");
        }
        let s = absorption_condition_in(RegulatorScheme::Position, &z, 1e6, &d).unwrap();
        assert!((renormalized_b(s, 1e6, &d).unwrap() - limit).norm() < 1e-2);
    }

    #[test]
    fn edge_atoms_are_annihilated() {
        let d = d1();
        for (bp, bm) in [
            (C::new(1.0, 0.0), C::new(0.0, 2.0)),
            (C::new(1e6, 0.0), C::new(-1e6, 0.0)),
        ] {
            assert_eq!(edge_annihilation_check(params(bp, bm), &d).unwrap(), 0.0);
        }
    }

    #[test]
    fn projected_family_matches_fundamental_b_minus() {
        let w = wave();
        let z = finite(1.0, 0.0);
        let lambda = 30.0;
        let sum = absorption_condition(&z, lambda, &d1()).unwrap();
        let (f, _) = family_solution(&w, &z, params(sum * 0.25, sum * 0.75), lambda).unwrap();
        let projected = project_band(&f.times_varpi(&d1()).unwrap(), &d1());
        let fundamental = solve_fundamental(&w, &z).unwrap().b_minus;
        assert_eq!(projected.atoms(), fundamental.atoms());
        assert!((projected.background() - fundamental.background()).norm() < 1e-12);
    }
}
