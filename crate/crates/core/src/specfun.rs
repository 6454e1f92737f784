//! Zero-order Bessel and Hankel functions of real argument.
//!
//! Below [`SERIES_ASYMPTOTIC_SWITCH`] the ascending power series is summed
//! directly; above it the Hankel asymptotic expansion is used, truncated at
//! its smallest term. Both branches stay within about 1e-12 absolute of the
//! true value in `f64` on their own side of the switch.

use crate::error::{Error, Result};
use crate::{c_real, cx, Complex, Real};

/// Euler-Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// Argument at which J₀ and Y₀ switch from the power series to the
/// asymptotic expansion.
pub const SERIES_ASYMPTOTIC_SWITCH: f64 = 12.0;

const MIN_SERIES_TERMS: usize = 30;
const MAX_SERIES_TERMS: usize = 120;
const MAX_ASYMPTOTIC_TERMS: usize = 80;

#[inline]
pub fn euler_gamma<T: Real>() -> T {
    T::lit(EULER_GAMMA)
}

fn check_nonnegative<T: Real>(function: &'static str, x: T) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain {
            function,
            value: x.to_f64_lossy(),
            reason: "is not finite",
        });
    }
    if x < T::zero() {
        return Err(Error::Domain {
            function,
            value: x.to_f64_lossy(),
            reason: "is negative",
        });
    }
    Ok(())
}

fn check_positive<T: Real>(function: &'static str, x: T) -> Result<()> {
    check_nonnegative(function, x)?;
    if x == T::zero() {
        return Err(Error::Domain {
            function,
            value: 0.0,
            reason: "is zero (logarithmic singularity)",
        });
    }
    Ok(())
}

/// Ascending series for J₀ together with the harmonic-weighted series that
/// enters Y₀: returns (Σ tₘ, −Σ Hₘ tₘ) with tₘ = (−x²/4)ᵐ/(m!)².
fn ascending_series<T: Real>(x: T) -> (T, T) {
    let q = -(x * x) / T::lit(4.0);
    let eps = T::epsilon();
    let mut term = T::one();
    let mut j0 = T::one();
    let mut harmonic = T::zero();
    let mut y_part = T::zero();
    for m in 1..=MAX_SERIES_TERMS {
        let mf = T::lit(m as f64);
        term = term * q / (mf * mf);
        harmonic = harmonic + mf.recip();
        j0 = j0 + term;
        y_part = y_part - harmonic * term;
        if m >= MIN_SERIES_TERMS && term.abs() * harmonic < eps * eps {
            break;
        }
    }
    (j0, y_part)
}

/// Hankel asymptotic expansion: returns (J₀, Y₀) for large x.
fn asymptotic<T: Real>(x: T) -> (T, T) {
    let eight_x = T::lit(8.0) * x;
    let mut p = T::zero();
    let mut q = T::zero();
    let mut a = T::one();
    let mut prev = T::infinity();
    for k in 0..MAX_ASYMPTOTIC_TERMS {
        if k > 0 {
            let odd = T::lit((2 * k - 1) as f64);
            a = a * (-(odd * odd)) / (T::lit(k as f64) * eight_x);
        }
        if a.abs() > prev {
            break;
        }
        prev = a.abs();
        // P = Σ (−1)^m a_{2m}, Q = Σ (−1)^m a_{2m+1}
        match k % 4 {
            0 => p = p + a,
            1 => q = q + a,
            2 => p = p - a,
            _ => q = q - a,
        }
    }
    let (s, c) = x.sin_cos();
    let sqrt2 = T::SQRT_2();
    let cos_chi = (c + s) / sqrt2;
    let sin_chi = (s - c) / sqrt2;
    let amp = (T::lit(2.0) / (T::PI() * x)).sqrt();
    (amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi))
}

/// Bessel function of the first kind of order zero, J₀(x), for x ≥ 0.
pub fn bessel_j0<T: Real>(x: T) -> Result<T> {
    check_nonnegative("bessel_j0", x)?;
    if x <= T::lit(SERIES_ASYMPTOTIC_SWITCH) {
        Ok(ascending_series(x).0)
    } else {
        Ok(asymptotic(x).0)
    }
}

/// Bessel function of the second kind of order zero, Y₀(x), for x > 0.
pub fn bessel_y0<T: Real>(x: T) -> Result<T> {
    check_positive("bessel_y0", x)?;
    Ok(j0_y0_unchecked(x).1)
}

fn j0_y0_unchecked<T: Real>(x: T) -> (T, T) {
    if x <= T::lit(SERIES_ASYMPTOTIC_SWITCH) {
        let (j0, y_part) = ascending_series(x);
        let log_term = (x / T::lit(2.0)).ln() + euler_gamma();
        let y0 = T::FRAC_2_PI() * (log_term * j0 + y_part);
        (j0, y0)
    } else {
        asymptotic(x)
    }
}

/// Hankel function of the first kind of order zero, H₀⁽¹⁾(x) = J₀(x) + iY₀(x).
///
/// x = 0 is a domain error: the logarithmic divergence there is the whole
/// subject of this crate and must be regularized explicitly by the caller
/// (see [`crate::kernel::regularized_h0_at_zero`]).
pub fn hankel1_0<T: Real>(x: T) -> Result<Complex<T>> {
    check_positive("hankel1_0", x)?;
    let (j0, y0) = j0_y0_unchecked(x);
    Ok(cx(j0, y0))
}

/// Small-argument form of H₀⁽¹⁾ truncated before the O(x²) terms:
/// 1 + (2i/π)(ln(x/2) + γ). Valid input is 0 < x < 0.5.
pub fn hankel1_0_small_x_expansion<T: Real>(x: T) -> Result<Complex<T>> {
    check_positive("hankel1_0_small_x_expansion", x)?;
    if x >= T::lit(0.5) {
        return Err(Error::Domain {
            function: "hankel1_0_small_x_expansion",
            value: x.to_f64_lossy(),
            reason: "is outside (0, 0.5)",
        });
    }
    let log_term = (x / T::lit(2.0)).ln() + euler_gamma();
    Ok(c_real(T::one()) + cx(T::zero(), T::FRAC_2_PI() * log_term))
}
