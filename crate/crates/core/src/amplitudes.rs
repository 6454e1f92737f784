//! Momentum-space coefficient functions made of Dirac atoms plus a constant
//! background, the band projection, and integrals against 1/ϖ.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::kernel::{regularized_h0_at_zero, CutoffSpec, Dispersion};
use crate::{c_real, is_finite_c, Complex, Real};

/// A weighted delta function w·δ(p − location).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<T> {
    pub location: T,
    pub weight: Complex<T>,
}

impl<T: Real> Atom<T> {
    pub fn new(location: T, weight: Complex<T>) -> Self {
        Self { location, weight }
    }
}

/// Where the constant background of an amplitude lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support<T> {
    FullLine,
    /// The traveling band (−k, k).
    Band {
        k: T,
    },
}

impl<T> Support<T> {
    fn name(&self) -> &'static str {
        match self {
            Support::FullLine => "full-line",
            Support::Band { .. } => "band",
        }
    }
}

/// Integration range for [`integrate_inverse_varpi`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationDomain<T> {
    /// (−k, k), where ∫dq/ϖ = π.
    Band,
    /// (−Λ, Λ) with Λ > k, where ∫dq/ϖ = π·(1 − (2i/π) arccosh(Λ/k)).
    CutoffLine(T),
}

/// Σⱼ wⱼ δ(p − pⱼ) + background·1 on `support`.
///
/// Atoms are kept sorted by location and coincident locations are merged
/// (exact equality only). Atoms at |p| = k on a band amplitude are allowed
/// and are treated as on-shell edge atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedAmplitude<T> {
    atoms: Vec<Atom<T>>,
    background: Complex<T>,
    support: Support<T>,
}

impl<T: Real> GeneralizedAmplitude<T> {
    pub fn new(atoms: Vec<Atom<T>>, background: Complex<T>, support: Support<T>) -> Result<Self> {
        if !is_finite_c(background) {
            return Err(Error::Precondition("background must be finite".into()));
        }
        for a in &atoms {
            if !a.location.is_finite() || !is_finite_c(a.weight) {
                return Err(Error::Precondition(format!(
                    "atom at {} has non-finite location or weight",
                    a.location
                )));
            }
            if let Support::Band { k } = support {
                if a.location.abs() > k {
                    return Err(Error::Precondition(format!(
                        "atom at {} lies outside the band (−{k}, {k})",
                        a.location
                    )));
                }
            }
        }
        if let Support::Band { k } = support {
            if !(k > T::zero()) || !k.is_finite() {
                return Err(Error::Precondition(format!(
                    "band half-width must be positive, got {k}"
                )));
            }
        }
        Ok(Self::canonical(atoms, background, support))
    }

    pub fn zero(support: Support<T>) -> Self {
        Self {
            atoms: Vec::new(),
            background: c_real(T::zero()),
            support,
        }
    }

    pub fn constant(background: Complex<T>, support: Support<T>) -> Result<Self> {
        Self::new(Vec::new(), background, support)
    }

    fn canonical(mut atoms: Vec<Atom<T>>, background: Complex<T>, support: Support<T>) -> Self {
        atoms.sort_by(|a, b| a.location.partial_cmp(&b.location).unwrap_or(Ordering::Equal));
        let mut merged: Vec<Atom<T>> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.location == a.location => last.weight = last.weight + a.weight,
                _ => merged.push(a),
            }
        }
        Self {
            atoms: merged,
            background,
            support,
        }
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn background(&self) -> Complex<T> {
        self.background
    }

    pub fn support(&self) -> Support<T> {
        self.support
    }

    /// Atoms sitting exactly on the shell |p| = k.
    pub fn edge_atoms(&self, d: &Dispersion<T>) -> Vec<Atom<T>> {
        self.atoms
            .iter()
            .copied()
            .filter(|a| a.location.abs() == d.k())
            .collect()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            atoms: self.atoms.iter().map(|a| Atom::new(a.location, a.weight * s)).collect(),
            background: self.background * s,
            support: self.support,
        }
    }

    /// Largest modulus among atom weights and the background.
    pub fn max_modulus(&self) -> T {
        self.atoms
            .iter()
            .map(|a| a.weight.norm())
            .fold(self.background.norm(), T::max)
    }

    /// True when every weight and the background are exactly zero.
    pub fn is_zero(&self) -> bool {
        let z = c_real(T::zero());
        self.background == z && self.atoms.iter().all(|a| a.weight == z)
    }

    /// Same function viewed on the full line. Only possible when the
    /// background vanishes or already lives on the full line.
    pub fn on_full_line(&self) -> Result<Self> {
        match self.support {
            Support::FullLine => Ok(self.clone()),
            Support::Band { .. } if self.background == c_real(T::zero()) => Ok(Self {
                support: Support::FullLine,
                ..self.clone()
            }),
            Support::Band { .. } => Err(Error::SupportMismatch {
                left: "band",
                right: "full-line",
            }),
        }
    }
}

/// Restriction to |p| < k: drops every atom with |p| ≥ k and marks the
/// background as living on the band. Idempotent.
pub fn project_band<T: Real>(a: &GeneralizedAmplitude<T>, d: &Dispersion<T>) -> GeneralizedAmplitude<T> {
    let k = d.k();
    GeneralizedAmplitude {
        atoms: a.atoms.iter().copied().filter(|x| x.location.abs() < k).collect(),
        background: a.background,
        support: Support::Band { k },
    }
}

/// ∫ a(q)/ϖ(q) dq over `domain`.
///
/// Atoms inside the domain contribute wⱼ/ϖ(pⱼ). A full-line background
/// contributes background·∫dq/ϖ over the domain; a band background always
/// contributes background·π. An atom at |p| = k is an [`Error::EdgeAtom`].
pub fn integrate_inverse_varpi<T: Real>(
    a: &GeneralizedAmplitude<T>,
    domain: IntegrationDomain<T>,
    d: &Dispersion<T>,
) -> Result<Complex<T>> {
    let k = d.k();
    let upper = match domain {
        IntegrationDomain::Band => k,
        IntegrationDomain::CutoffLine(lambda) => {
            if !(lambda > k) || !lambda.is_finite() {
                return Err(Error::Precondition(format!(
                    "cutoff {lambda} must be finite and exceed k = {k}"
                )));
            }
            lambda
        }
    };
    let mut total = c_real(T::zero());
    for atom in &a.atoms {
        let p = atom.location.abs();
        if p == k {
            return Err(Error::EdgeAtom {
                location: atom.location.to_f64_lossy(),
            });
        }
        if p < upper {
            total = total + atom.weight / d.varpi(atom.location);
        }
    }
    let measure = match (a.support, domain) {
        (Support::Band { .. }, _) | (_, IntegrationDomain::Band) => c_real(T::PI()),
        (Support::FullLine, IntegrationDomain::CutoffLine(lambda)) => {
            regularized_h0_at_zero(&CutoffSpec::sharp(lambda)?, d)? * T::PI()
        }
    };
    Ok(total + a.background * measure)
}

/// Sum of two amplitudes with the same support.
pub fn add<T: Real>(a: &GeneralizedAmplitude<T>, b: &GeneralizedAmplitude<T>) -> Result<GeneralizedAmplitude<T>> {
    if a.support != b.support {
        return Err(Error::SupportMismatch {
            left: a.support.name(),
            right: b.support.name(),
        });
    }
    let mut atoms = a.atoms.clone();
    atoms.extend_from_slice(&b.atoms);
    Ok(GeneralizedAmplitude::canonical(
        atoms,
        a.background + b.background,
        a.support,
    ))
}

/// Right-incident plane wave with incidence angle θ₀ ∈ (π/2, 3π/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncidentWave<T> {
    dispersion: Dispersion<T>,
    theta0: T,
    p0: T,
}

impl<T: Real> IncidentWave<T> {
    pub fn new(d: Dispersion<T>, theta0: T) -> Result<Self> {
        let half_pi = T::FRAC_PI_2();
        if !theta0.is_finite() || theta0 <= half_pi || theta0 >= T::lit(3.0) * half_pi {
            return Err(Error::Precondition(format!(
                "incidence angle {theta0} must lie strictly inside (π/2, 3π/2)"
            )));
        }
        let p0 = d.k() * theta0.sin();
        if p0.abs() >= d.k() {
            return Err(Error::Precondition(format!(
                "incidence angle {theta0} is numerically grazing"
            )));
        }
        Ok(Self {
            dispersion: d,
            theta0,
            p0,
        })
    }

    pub fn dispersion(&self) -> &Dispersion<T> {
        &self.dispersion
    }

    pub fn k(&self) -> T {
        self.dispersion.k()
    }

    pub fn theta0(&self) -> T {
        self.theta0
    }

    /// Transverse momentum p₀ = k sin θ₀.
    pub fn p0(&self) -> T {
        self.p0
    }

    /// Wavevector (−ϖ(p₀), p₀).
    pub fn wavevector(&self) -> (T, T) {
        (-self.dispersion.varpi(self.p0).re, self.p0)
    }

    /// The incident source 2πϖ(p₀)δ(p − p₀) on the band.
    pub fn source(&self) -> GeneralizedAmplitude<T> {
        let weight = self.dispersion.varpi(self.p0) * (T::lit(2.0) * T::PI());
        GeneralizedAmplitude {
            atoms: vec![Atom::new(self.p0, weight)],
            background: c_real(T::zero()),
            support: Support::Band { k: self.k() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{self, QuadOptions, QuadResult};
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn d1() -> Dispersion<f64> {
        Dispersion::new(1.0).unwrap()
    }

    #[test]
    fn projection_keeps_interior_atoms() {
        let d = d1();
        let a = GeneralizedAmplitude::new(
            vec![Atom::new(0.5, C::new(1.0, 0.0))],
            C::new(0.0, 0.0),
            Support::FullLine,
        )
        .unwrap();
        let p = project_band(&a, &d);
        assert_eq!(p.atoms(), a.atoms());
        assert_eq!(p.support(), Support::Band { k: 1.0 });
        assert_eq!(project_band(&p, &d), p);
    }

    #[test]
    fn projection_drops_edge_and_evanescent_atoms() {
        let d = d1();
        let c = C::new(0.3, -0.2);
        let a = GeneralizedAmplitude::new(
            vec![
                Atom::new(1.0, C::new(2.0, 1.0)),
                Atom::new(-1.0, C::new(-1.0, 0.5)),
                Atom::new(3.0, C::new(1.0, 0.0)),
            ],
            c,
            Support::FullLine,
        )
        .unwrap();
        let p = project_band(&a, &d);
        assert!(p.atoms().is_empty());
        assert_eq!(p.background(), c);
    }

    #[test]
    fn incident_atom_integrates_to_two_pi() {
        let d = d1();
        let w = IncidentWave::new(d, 2.5).unwrap();
        let v = integrate_inverse_varpi(&w.source(), IntegrationDomain::Band, &d).unwrap();
        assert!((v - C::new(2.0 * PI, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn background_integrals() {
        let d = d1();
        let one = GeneralizedAmplitude::constant(C::new(1.0, 0.0), Support::FullLine).unwrap();
        assert_eq!(
            integrate_inverse_varpi(&one, IntegrationDomain::Band, &d).unwrap(),
            C::new(PI, 0.0)
        );
        let v = integrate_inverse_varpi(&one, IntegrationDomain::CutoffLine(10.0), &d).unwrap();
        assert!((v.re - PI).abs() < 1e-15);
        assert!((v.im + 2.0 * (10.0 + 99.0_f64.sqrt()).ln()).abs() < 1e-13);
        assert!((v.im + 5.986_446).abs() < 1e-6);
        let band_one = project_band(&one, &d);
        assert_eq!(
            integrate_inverse_varpi(&band_one, IntegrationDomain::CutoffLine(10.0), &d).unwrap(),
            C::new(PI, 0.0)
        );
    }

    #[test]
    fn cutoff_background_matches_quadrature() {
        // ∫_{−Λ}^{Λ} dq/ϖ(q) split at ±k, with q = k sin φ and q = k cosh u
        let d = d1();
        let lambda: f64 = 10.0;
        let opts = QuadOptions::default();
        let band: QuadResult<f64, f64> = quad::integrate(|_: f64| 1.0, -PI / 2.0, PI / 2.0, &opts).unwrap();
        let tails: QuadResult<C, f64> =
            quad::integrate(|_: f64| C::new(0.0, -2.0), 0.0, lambda.acosh(), &opts).unwrap();
        let one = GeneralizedAmplitude::constant(C::new(1.0, 0.0), Support::FullLine).unwrap();
        let v = integrate_inverse_varpi(&one, IntegrationDomain::CutoffLine(lambda), &d).unwrap();
        assert!((v - (C::new(band.value, 0.0) + tails.value)).norm() < 1e-12);
    }

    #[test]
    fn edge_atom_is_rejected() {
        let d = d1();
        let a = GeneralizedAmplitude::new(
            vec![Atom::new(-1.0, C::new(0.0, 0.0))],
            C::new(0.0, 0.0),
            Support::FullLine,
        )
        .unwrap();
        assert_eq!(
            integrate_inverse_varpi(&a, IntegrationDomain::Band, &d),
            Err(Error::EdgeAtom { location: -1.0 })
        );
    }

    #[test]
    fn evanescent_atom_inside_cutoff_contributes() {
        let d = d1();
        let a = GeneralizedAmplitude::new(
            vec![Atom::new(2.0, C::new(1.0, 0.0))],
            C::new(0.0, 0.0),
            Support::FullLine,
        )
        .unwrap();
        let v = integrate_inverse_varpi(&a, IntegrationDomain::CutoffLine(5.0), &d).unwrap();
        assert!((v - C::new(0.0, -1.0 / 3.0_f64.sqrt())).norm() < 1e-15);
        assert_eq!(
            integrate_inverse_varpi(&a, IntegrationDomain::Band, &d).unwrap(),
            C::new(0.0, 0.0)
        );
    }

    #[test]
    fn addition_rules() {
        let a = GeneralizedAmplitude::new(
            vec![Atom::new(0.2, C::new(1.0, 0.0))],
            C::new(1.0, 0.0),
            Support::FullLine,
        )
        .unwrap();
        let b = GeneralizedAmplitude::new(
            vec![Atom::new(0.2, C::new(0.0, 2.0))],
            C::new(0.0, 1.0),
            Support::FullLine,
        )
        .unwrap();
        assert_eq!(add(&a, &GeneralizedAmplitude::zero(Support::FullLine)).unwrap(), a);
        let s = add(&a, &b).unwrap();
        assert_eq!(s.atoms(), &[Atom::new(0.2, C::new(1.0, 2.0))]);
        assert_eq!(s.background(), C::new(1.0, 1.0));
        let band = GeneralizedAmplitude::zero(Support::Band { k: 1.0 });
        assert!(matches!(add(&a, &band), Err(Error::SupportMismatch { .. })));
    }

    #[test]
    fn construction_merges_and_sorts() {
        let a = GeneralizedAmplitude::new(
            vec![
                Atom::new(0.5, C::new(1.0, 0.0)),
                Atom::new(-0.5, C::new(2.0, 0.0)),
                Atom::new(0.5, C::new(3.0, 0.0)),
            ],
            C::new(0.0, 0.0),
            Support::FullLine,
        )
        .unwrap();
        assert_eq!(
            a.atoms(),
            &[Atom::new(-0.5, C::new(2.0, 0.0)), Atom::new(0.5, C::new(4.0, 0.0))]
        );
        assert!(GeneralizedAmplitude::new(
            vec![Atom::new(2.0, C::new(1.0, 0.0))],
            C::new(0.0, 0.0),
            Support::Band { k: 1.0 }
        )
        .is_err());
        assert!(GeneralizedAmplitude::new(
            vec![Atom::new(f64::NAN, C::new(1.0, 0.0))],
            C::new(0.0, 0.0),
            Support::FullLine
        )
        .is_err());
    }

    #[test]
    fn incident_wave_validation() {
        let d = d1();
        assert!(IncidentWave::new(d, PI / 2.0).is_err());
        assert!(IncidentWave::new(d, 1.5 * PI).is_err());
        assert!(IncidentWave::new(d, 0.3).is_err());
        let w = IncidentWave::new(d, PI).unwrap();
        let (kx, ky) = w.wavevector();
        assert_eq!(kx, -1.0);
        assert!(ky.abs() < 1e-15);
    }
}
