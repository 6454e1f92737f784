//! Dispersion relation, the outgoing 2D Green's function in closed and
//! cutoff-regularized form, and the momentum-space representation of
//! H₀⁽¹⁾ along the scattering axis.

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions, QuadResult};
use crate::specfun::{self, euler_gamma};
use crate::{c_i, c_real, cx, Complex, Real};

/// Wavenumber k > 0 and the longitudinal wavenumber ϖ(p) it induces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion<T> {
    k: T,
}

impl<T: Real> Dispersion<T> {
    pub fn new(k: T) -> Result<Self> {
        if !k.is_finite() || k <= T::zero() {
            return Err(Error::Precondition(format!(
                "wavenumber must be positive and finite, got {k}"
            )));
        }
        Ok(Self { k })
    }

    #[inline]
    pub fn k(&self) -> T {
        self.k
    }

    /// ϖ(p): √(k²−p²) on the traveling band, i√(p²−k²) outside it,
    /// exactly zero at |p| = k.
    pub fn varpi(&self, p: T) -> Complex<T> {
        let a = p.abs();
        if a < self.k {
            c_real(((self.k - a) * (self.k + a)).sqrt())
        } else {
            cx(T::zero(), ((a - self.k) * (a + self.k)).sqrt())
        }
    }
}

/// ϖ(p) with a finiteness check on p.
pub fn varpi<T: Real>(p: T, d: &Dispersion<T>) -> Result<Complex<T>> {
    if !p.is_finite() {
        return Err(Error::Domain {
            function: "varpi",
            value: p.to_f64_lossy(),
            reason: "is not finite",
        });
    }
    Ok(d.varpi(p))
}

/// How the on-shell pole of 1/(k²−p²+iε) is treated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonPolicy<T> {
    /// ε → 0⁺ taken first: principal value minus iπδ(k²−p²).
    PrincipalValuePlusDelta,
    /// Literal finite ε, kept for cross-validation only.
    FiniteEpsilon(T),
}

/// Sharp momentum cutoff Λ together with the iε policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec<T> {
    pub lambda: T,
    pub epsilon_policy: EpsilonPolicy<T>,
}

impl<T: Real> CutoffSpec<T> {
    /// Cutoff with the principal-value-plus-delta policy.
    pub fn sharp(lambda: T) -> Result<Self> {
        Self::new(lambda, EpsilonPolicy::PrincipalValuePlusDelta)
    }

    pub fn new(lambda: T, epsilon_policy: EpsilonPolicy<T>) -> Result<Self> {
        if !lambda.is_finite() || lambda <= T::zero() {
            return Err(Error::Precondition(format!(
                "cutoff must be positive and finite, got {lambda}"
            )));
        }
        if let EpsilonPolicy::FiniteEpsilon(eps) = epsilon_policy {
            if !eps.is_finite() || eps <= T::zero() {
                return Err(Error::Precondition(format!(
                    "finite epsilon must be positive, got {eps}"
                )));
            }
        }
        Ok(Self { lambda, epsilon_policy })
    }

    fn require_above_shell(&self, d: &Dispersion<T>) -> Result<()> {
        if self.lambda > d.k() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "cutoff {} must exceed the wavenumber {}",
                self.lambda,
                d.k()
            )))
        }
    }
}

/// G(r) = −(i/4) H₀⁽¹⁾(kr) for r > 0.
pub fn green_closed<T: Real>(r: T, d: &Dispersion<T>) -> Result<Complex<T>> {
    if r == T::zero() {
        return Err(Error::Domain {
            function: "green_closed",
            value: 0.0,
            reason: "is the origin, where G diverges; use a cutoff",
        });
    }
    let h = specfun::hankel1_0(d.k() * r)?;
    Ok(-c_i::<T>() * h / T::lit(4.0))
}

/// G_Λ(0) = −(1/4π) ln(Λ²/k² − 1) − i/4.
pub fn green_cutoff_zero<T: Real>(c: &CutoffSpec<T>, d: &Dispersion<T>) -> Result<Complex<T>> {
    c.require_above_shell(d)?;
    let ratio = c.lambda / d.k();
    let re = -((ratio - T::one()) * (ratio + T::one())).ln() / (T::lit(4.0) * T::PI());
    Ok(cx(re, -T::lit(0.25)))
}

/// Numerical G_Λ(r) = ∫₀^Λ (dp/2π) p J₀(pr)/(k²−p²+iε), ε → 0⁺.
///
/// Under the principal-value policy the pole at p = k is handled by
/// pairing p = k ± t on a window of half-width min(k, Λ−k)/10, and the
/// on-shell delta contributes −(i/4) J₀(kr) exactly.
pub fn green_cutoff_quadrature<T: Real>(
    r: T,
    c: &CutoffSpec<T>,
    d: &Dispersion<T>,
) -> Result<QuadResult<Complex<T>, T>> {
    c.require_above_shell(d)?;
    if !r.is_finite() || r < T::zero() {
        return Err(Error::Precondition(format!(
            "radial distance must be finite and non-negative, got {r}"
        )));
    }
    let k = d.k();
    let lambda = c.lambda;
    let two_pi = T::lit(2.0) * T::PI();
    let j0 = |p: T| specfun::bessel_j0(p * r).unwrap_or_else(|_| T::nan());
    let opts = QuadOptions::with_tolerance(T::lit(1e-13), T::lit(1e-13)).max_intervals(4000);

    match c.epsilon_policy {
        EpsilonPolicy::PrincipalValuePlusDelta => {
            let half_width = (k / T::lit(10.0)).min((lambda - k) / T::lit(10.0));
            let regular = |p: T| p * j0(p) / ((k - p) * (k + p));
            let g = |p: T| p * j0(p) / (k + p);
            let paired = |t: T| (g(k - t) - g(k + t)) / t;

            let below = quad::integrate(regular, T::zero(), k - half_width, &opts)?;
            let window = quad::integrate(paired, T::zero(), half_width, &opts)?;
            let above = quad::integrate(regular, k + half_width, lambda, &opts)?;
            let pv: QuadResult<T, T> = below.combine(window).combine(above).scale(two_pi.recip());

            let on_shell = -j0(k) / T::lit(4.0);
            Ok(QuadResult {
                value: cx(pv.value, on_shell),
                error: pv.error,
                evaluations: pv.evaluations,
            })
        }
        EpsilonPolicy::FiniteEpsilon(eps) => {
            let integrand = |p: T| {
                let den = cx((k - p) * (k + p), eps);
                c_real(p * j0(p) / two_pi) / den
            };
            // resolve the Lorentzian of width ~ε/2k around the shell
            let w = eps / k;
            let mut points = vec![T::zero()];
            for m in [1e4, 1e2, 1.0] {
                let off = w * T::lit(m);
                if off < k && k + off < lambda {
                    points.push(k - off);
                }
            }
            points.push(k);
            for m in [1.0, 1e2, 1e4] {
                let off = w * T::lit(m);
                if off < k && k + off < lambda {
                    points.push(k + off);
                }
            }
            points.push(lambda);
            points.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            quad::integrate_with_breakpoints(integrand, &points, &opts.max_intervals(20_000))
        }
    }
}

/// Cutoff stand-in for H₀⁽¹⁾(0): (1/π)∫_{−Λ}^{Λ} dq/ϖ(q) = 1 − (2i/π) arccosh(Λ/k).
pub fn regularized_h0_at_zero<T: Real>(c: &CutoffSpec<T>, d: &Dispersion<T>) -> Result<Complex<T>> {
    c.require_above_shell(d)?;
    let acosh = (c.lambda / d.k()).acosh();
    Ok(cx(T::one(), -T::FRAC_2_PI() * acosh))
}

/// Position-space stand-in for H₀⁽¹⁾(0) with the regulator r = 1/Λ: H₀⁽¹⁾(k/Λ).
pub fn position_regularized_h0<T: Real>(lambda: T, d: &Dispersion<T>) -> Result<Complex<T>> {
    if !lambda.is_finite() || lambda <= T::zero() {
        return Err(Error::Precondition(format!(
            "cutoff must be positive and finite, got {lambda}"
        )));
    }
    specfun::hankel1_0(d.k() / lambda)
}

/// Limit of [`regularized_h0_at_zero`]`(Λ)` − [`position_regularized_h0`]`(Λ)`
/// as Λ → ∞: −(2i/π)γ. This is the fixed offset between the sharp momentum
/// cutoff and the small-radius regulator.
pub fn momentum_minus_position_offset<T: Real>() -> Complex<T> {
    cx(T::zero(), -T::FRAC_2_PI() * euler_gamma::<T>())
}

/// Outcome of evaluating ∫dp e^{iϖ|x|}e^{ipy}/ϖ against πH₀⁽¹⁾(kr).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck<T> {
    pub integral: Complex<T>,
    pub reference: Complex<T>,
    /// |integral − πH₀⁽¹⁾(kr)|
    pub residual: T,
    /// Quadrature error estimate summed over all pieces.
    pub quadrature_error: T,
    /// Rigorous bound on the evanescent tails discarded beyond the cutoff.
    pub tail_bound: T,
}

/// Evaluates ∫_{−∞}^{∞} dp e^{iϖ(p)|x|} e^{ipy}/ϖ(p) and compares it with
/// πH₀⁽¹⁾(kr).
///
/// The traveling band uses p = k sin φ, which removes the 1/ϖ endpoint
/// singularity. The evanescent tails use p = k cosh u and are cut at
/// |p| = `tail_cutoff` (earlier when e^{−ϖ|x|} has already decayed below
/// e^{−60}); the discarded part is bounded by integration by parts and
/// reported as `tail_bound`.
pub fn momentum_identity_check<T: Real>(x: T, y: T, d: &Dispersion<T>, tail_cutoff: T) -> Result<IdentityCheck<T>> {
    let k = d.k();
    if !x.is_finite() || !y.is_finite() {
        return Err(Error::Precondition("sample point must be finite".into()));
    }
    let r = x.hypot(y);
    if k * r < T::lit(1e-3) {
        return Err(Error::Precondition(format!(
            "kr = {} is below 1e-3; the momentum integral does not converge near the origin",
            k * r
        )));
    }
    if !(tail_cutoff > k) || !tail_cutoff.is_finite() {
        return Err(Error::Precondition(format!(
            "tail cutoff {tail_cutoff} must be finite and exceed k = {k}"
        )));
    }
    let ax = x.abs();
    let half_pi = T::FRAC_PI_2();
    let opts = QuadOptions::with_tolerance(T::lit(1e-13), T::lit(1e-13)).max_intervals(4000);

    let band_integrand = |phi: T| {
        let (s, c) = phi.sin_cos();
        Complex::from_polar(T::one(), k * c * ax + k * s * y)
    };
    let band = quad::integrate(band_integrand, -half_pi, half_pi, &opts)?;

    // tails: ∫_{|p|>k} = −2i ∫₀^U e^{−k sinh(u)|x|} cos(k y cosh u) du
    let mut u_max = (tail_cutoff / k).acosh();
    if ax > T::zero() {
        let decay_cut = (T::lit(60.0) / (k * ax)).asinh();
        u_max = u_max.min(decay_cut);
    }
    let tail_integrand = |u: T| (-k * u.sinh() * ax).exp() * (k * y * u.cosh()).cos();

    // panel boundaries at half periods of cos(k y cosh u)
    let mut points = vec![T::zero()];
    let ky = (k * y).abs();
    if ky > T::zero() {
        let step = T::PI() / ky;
        let p_max = u_max.cosh();
        let mut j = (T::one() / step).ceil();
        if j * step <= T::one() {
            j = j + T::one();
        }
        while j * step < p_max {
            points.push((j * step).acosh());
            j = j + T::one();
        }
    }
    points.push(u_max);

    let panel_opts = QuadOptions::with_tolerance(T::lit(1e-16), T::lit(1e-13)).max_intervals(200);
    let mut tail = QuadResult {
        value: T::zero(),
        error: T::zero(),
        evaluations: 0,
    };
    for w in points.windows(2) {
        if w[1] > w[0] {
            let piece = quad::integrate(tail_integrand, w[0], w[1], &panel_opts)?;
            tail = tail.combine(piece);
        }
    }
    let tail_value = cx(T::zero(), -T::lit(2.0) * tail.value);

    // bound on 2∫_P^∞ e^{−s|x|} cos(py)/s dp, s = √(p²−k²)
    let p_cut = k * u_max.cosh();
    let s_cut = k * u_max.sinh();
    let damp = (-s_cut * ax).exp();
    let mut tail_bound = T::infinity();
    if ax > T::zero() {
        tail_bound = tail_bound.min(T::lit(2.0) * damp / (p_cut * ax));
    }
    if y != T::zero() {
        tail_bound = tail_bound.min(T::lit(4.0) * damp / (s_cut * y.abs()));
    }

    let integral = band.value + tail_value;
    let reference = specfun::hankel1_0(k * r)? * T::PI();
    Ok(IdentityCheck {
        integral,
        reference,
        residual: (integral - reference).norm(),
        quadrature_error: band.error + T::lit(2.0) * tail.error,
        tail_bound,
    })
}

/// Extrapolated r → 0 limit of G(r) − G_{α/r}(0).
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeLimit<T> {
    pub limit: Complex<T>,
    pub differences: Vec<Complex<T>>,
}

/// Computes G(r) − G_{α/r}(0) along a decreasing sequence of radii and
/// extrapolates to r → 0, assuming an O(r²) approach. The exact limit is
/// (γ + ln(α/2))/2π.
pub fn scheme_matching_limit<T: Real>(alpha: T, d: &Dispersion<T>, r_sequence: &[T]) -> Result<SchemeLimit<T>> {
    if !alpha.is_finite() || alpha <= T::zero() {
        return Err(Error::Precondition(format!("alpha must be positive, got {alpha}")));
    }
    if r_sequence.len() < 2 {
        return Err(Error::Precondition("need at least two radii".into()));
    }
    let k = d.k();
    for (i, &r) in r_sequence.iter().enumerate() {
        if !(r > T::zero()) || k * r >= T::lit(0.1) {
            return Err(Error::Precondition(format!(
                "radii must satisfy 0 < kr < 0.1, got r = {r}"
            )));
        }
        if i > 0 && r >= r_sequence[i - 1] {
            return Err(Error::Precondition("radii must be strictly decreasing".into()));
        }
    }
    let mut differences = Vec::with_capacity(r_sequence.len());
    for &r in r_sequence {
        let cutoff = CutoffSpec::sharp(alpha / r)?;
        differences.push(green_closed(r, d)? - green_cutoff_zero(&cutoff, d)?);
    }
    let steps: Vec<T> = differences.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    for s in steps.windows(2) {
        if s[1] > s[0] {
            return Err(Error::NonConvergence {
                estimate: s[1].to_f64_lossy(),
                tolerance: s[0].to_f64_lossy(),
            });
        }
    }
    let n = differences.len();
    let (r1, r0) = (r_sequence[n - 1], r_sequence[n - 2]);
    let (d1, d0) = (differences[n - 1], differences[n - 2]);
    let weight = r1 * r1 / (r0 * r0 - r1 * r1);
    let limit = d1 + (d1 - d0) * weight;
    Ok(SchemeLimit { limit, differences })
}

/// (γ + ln(α/2))/2π, the closed-form value of [`scheme_matching_limit`].
pub fn scheme_matching_constant<T: Real>(alpha: T) -> T {
    (euler_gamma::<T>() + (alpha / T::lit(2.0)).ln()) / (T::lit(2.0) * T::PI())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn d1() -> Dispersion<f64> {
        Dispersion::new(1.0).unwrap()
    }

    #[test]
    fn varpi_branches() {
        let d = d1();
        assert_eq!(varpi(0.0, &d).unwrap(), Complex::new(1.0, 0.0));
        assert_eq!(varpi(1.0, &d).unwrap(), Complex::new(0.0, 0.0));
        assert_eq!(varpi(-1.0, &d).unwrap(), Complex::new(0.0, 0.0));
        let w = varpi(2.0_f64.sqrt(), &d).unwrap();
        assert!(w.re == 0.0 && (w.im - 1.0).abs() < 1e-15);
        assert!(varpi(f64::NAN, &d).is_err());
    }

    #[test]
    fn varpi_squared_plus_p_squared() {
        let d = Dispersion::new(1.7).unwrap();
        for i in -40..=40 {
            let p = i as f64 * 0.11;
            let w = d.varpi(p);
            let lhs = w * w + p * p;
            assert!((lhs - 1.7 * 1.7).norm() < 1e-13, "p = {p}");
            assert_eq!(d.varpi(-p), w);
        }
    }

    #[test]
    fn dispersion_rejects_bad_k() {
        assert!(Dispersion::new(0.0).is_err());
        assert!(Dispersion::new(-1.0).is_err());
        assert!(Dispersion::new(f64::INFINITY).is_err());
    }

    #[test]
    fn green_closed_at_unit_radius() {
        let g = green_closed(1.0, &d1()).unwrap();
        assert!((g.re - 0.088_256_964_215_677 / 4.0).abs() < 1e-14);
        assert!((g.im + 0.765_197_686_557_967 / 4.0).abs() < 1e-14);
        assert!(green_closed(0.0, &d1()).is_err());
    }

    #[test]
    fn green_closed_log_growth_and_far_magnitude() {
        let d = d1();
        for &r in &[1e-4, 1e-6, 1e-8] {
            let g = green_closed(r, &d).unwrap();
            let lead = (1.0 / (2.0 * PI)) * r.ln().abs();
            assert!((g.norm() - lead).abs() / lead < 0.1);
        }
        let g = green_closed(100.0, &d).unwrap();
        let expected = 0.25 * (2.0 / (PI * 100.0)).sqrt();
        assert!((g.norm() - expected).abs() / expected < 1e-3);
    }

    #[test]
    fn green_cutoff_zero_values() {
        let d = d1();
        let g = green_cutoff_zero(&CutoffSpec::sharp(10.0).unwrap(), &d).unwrap();
        assert!((g.re + 0.365_668_019_124_304_6).abs() < 1e-14);
        assert_eq!(g.im, -0.25);
        let g = green_cutoff_zero(&CutoffSpec::sharp(2.0_f64.sqrt()).unwrap(), &d).unwrap();
        assert!(g.re.abs() < 1e-15);
        let g = green_cutoff_zero(&CutoffSpec::sharp(100.0).unwrap(), &d).unwrap();
        assert!((g.re + 100.0_f64.ln() / (2.0 * PI)).abs() < 2e-5);
        assert!(green_cutoff_zero(&CutoffSpec::sharp(1.0).unwrap(), &d).is_err());
    }

    #[test]
    fn cutoff_quadrature_matches_closed_form_at_origin() {
        for &k in &[1.0, 2.5] {
            let d = Dispersion::new(k).unwrap();
            for &ratio in &[2.0, 10.0, 100.0] {
                let c = CutoffSpec::sharp(ratio * k).unwrap();
                let q = green_cutoff_quadrature(0.0, &c, &d).unwrap();
                let closed = green_cutoff_zero(&c, &d).unwrap();
                assert!((q.value - closed).norm() < 1e-8, "k={k} ratio={ratio}");
                assert!(q.error < 1e-8);
            }
        }
    }

    #[test]
    fn cutoff_quadrature_approaches_closed_green() {
        let d = d1();
        let c = CutoffSpec::sharp(200.0).unwrap();
        let q = green_cutoff_quadrature(1.0, &c, &d).unwrap();
        let g = green_closed(1.0, &d).unwrap();
        assert!((q.value - g).norm() < 1e-4, "{:?} vs {:?}", q.value, g);
    }

    #[test]
    fn finite_epsilon_policy_agrees_with_principal_value() {
        let d = d1();
        let pv = green_cutoff_quadrature(0.0, &CutoffSpec::sharp(2.0).unwrap(), &d).unwrap();
        let fe = green_cutoff_quadrature(
            0.0,
            &CutoffSpec::new(2.0, EpsilonPolicy::FiniteEpsilon(1e-6)).unwrap(),
            &d,
        )
        .unwrap();
        assert!((pv.value - fe.value).norm() < 1e-4, "{:?} vs {:?}", pv.value, fe.value);
    }

    #[test]
    fn regularized_h0_values() {
        let d = d1();
        let h = regularized_h0_at_zero(&CutoffSpec::sharp(10.0).unwrap(), &d).unwrap();
        // arccosh(10) = ln(10 + √99)
        let expected_im = -(2.0 / PI) * (10.0 + 99.0_f64.sqrt()).ln();
        assert_eq!(h.re, 1.0);
        assert!((h.im - expected_im).abs() < 1e-14);
        assert!((h.im + 1.905_544_846_946_420_6).abs() < 1e-13);
        let h = regularized_h0_at_zero(&CutoffSpec::sharp((PI / 2.0).cosh()).unwrap(), &d).unwrap();
        assert!((h - Complex::new(1.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn regularized_h0_matches_quadrature_of_inverse_varpi() {
        // (1/π)∫_{−Λ}^{Λ} dq/ϖ(q) with q = k sin φ on the band and q = k cosh u outside
        let d = Dispersion::new(1.3).unwrap();
        let lambda = 13.0;
        let opts = QuadOptions::default();
        let band: QuadResult<f64, f64> = quad::integrate(|_phi: f64| 1.0, -PI / 2.0, PI / 2.0, &opts).unwrap();
        let tails: QuadResult<f64, f64> =
            quad::integrate(|_u: f64| 1.0, 0.0, (lambda / 1.3_f64).acosh(), &opts).unwrap();
        let numeric = Complex::new(band.value, -2.0 * tails.value) / PI;
        let h = regularized_h0_at_zero(&CutoffSpec::sharp(lambda).unwrap(), &d).unwrap();
        assert!((numeric - h).norm() < 1e-13);
    }

    #[test]
    fn regularized_minus_hankel_tends_to_scheme_constant() {
        let d = d1();
        let mut prev = f64::INFINITY;
        for &r in &[1e-2, 1e-3, 1e-4, 1e-5] {
            let reg = regularized_h0_at_zero(&CutoffSpec::sharp(1.0 / r).unwrap(), &d).unwrap();
            let h = specfun::hankel1_0(r).unwrap();
            let diff = (reg - h) * PI - Complex::new(0.0, -2.0 * specfun::EULER_GAMMA);
            assert!(diff.norm() < prev);
            prev = diff.norm();
        }
        assert!(prev < 1e-8);
        let off: Complex<f64> = momentum_minus_position_offset();
        assert!((off * PI - Complex::new(0.0, -2.0 * specfun::EULER_GAMMA)).norm() < 1e-15);
    }

    #[test]
    fn identity_on_axis() {
        let c = momentum_identity_check(1.0, 0.0, &d1(), 1e3).unwrap();
        assert!(c.residual <= 1e-6, "{c:?}");
    }

    #[test]
    fn identity_pure_evanescent_point() {
        let c = momentum_identity_check(0.0, 2.0, &d1(), 1e5).unwrap();
        assert!(c.residual <= 1e-4, "{c:?}");
        assert!(c.residual <= c.tail_bound + c.quadrature_error + 1e-12);
        assert!(c.tail_bound <= 4.0 / (1e5 * 2.0) * 1.0001);
    }

    #[test]
    fn identity_generic_point() {
        let c = momentum_identity_check(3.0, 4.0, &d1(), 1e3).unwrap();
        assert!(c.residual <= 1e-6, "{c:?}");
    }

    #[test]
    fn identity_rejects_origin() {
        assert!(momentum_identity_check(1e-4, 0.0, &d1(), 1e3).is_err());
    }

    #[test]
    fn scheme_limit_values() {
        let d = d1();
        let radii = [1e-3, 1e-4, 1e-5];
        for (alpha, expected) in [
            (2.0, 0.091_866_726_299_153_99),
            (2.0 * (-specfun::EULER_GAMMA).exp(), 0.0),
            (1.0, -0.018_451_073_777_171_806),
        ] {
            let s = scheme_matching_limit(alpha, &d, &radii).unwrap();
            assert!((s.limit.re - expected).abs() < 1e-6, "alpha={alpha}: {:?}", s.limit);
            assert!(s.limit.im.abs() < 1e-6);
            assert!((scheme_matching_constant(alpha) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn scheme_limit_validates_sequence() {
        let d = d1();
        assert!(scheme_matching_limit(1.0, &d, &[1e-4, 1e-3]).is_err());
        assert!(scheme_matching_limit(1.0, &d, &[0.5, 1e-3]).is_err());
        assert!(scheme_matching_limit(1.0, &d, &[1e-3]).is_err());
    }
}
