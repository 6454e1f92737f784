//! Independent reference computations used by the verification suite and
//! by tests. Nothing here calls into the production numerical paths.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

const FRAC_BITS: u64 = 320;
const MAX_TERMS: usize = 2000;

fn to_f64_fixed(v: &BigInt) -> f64 {
    // exact power-of-two rescale after a single rounding
    v.to_f64().unwrap_or(f64::NAN) * (2.0_f64).powi(-(FRAC_BITS as i32))
}

/// Exact decomposition x = mantissa · 2^exponent of a finite positive f64.
fn decompose(x: f64) -> (BigInt, i64) {
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (BigInt::from(frac), -1074)
    } else {
        (BigInt::from(frac | (1u64 << 52)), exp_bits - 1075)
    }
}

fn shift(v: BigInt, by: i64) -> BigInt {
    if by >= 0 {
        v << (by as usize)
    } else {
        v >> ((-by) as usize)
    }
}

/// Ascending series of J₀ and of Σ Hₘ(−x²/4)ᵐ/(m!)², summed in 320-bit
/// fixed point. Returns both sums as f64.
fn fixed_point_series(x: f64) -> (f64, f64) {
    assert!(x.is_finite() && x >= 0.0);
    if x == 0.0 {
        return (1.0, 0.0);
    }
    let (mant, exp) = decompose(x);
    let mant2 = &mant * &mant;
    // x²/4 = mant² · 2^(2 exp − 2)
    let scale = 2 * exp - 2;
    let one = BigInt::one() << (FRAC_BITS as usize);
    let mut term = one.clone();
    let mut harmonic = BigInt::zero();
    let mut j_sum = one.clone();
    let mut h_sum = BigInt::zero();
    let tiny = BigInt::one() << ((FRAC_BITS - 80) as usize);
    let peak = (x / 2.0).ceil() as usize + 1;
    for m in 1..MAX_TERMS {
        let m_big = BigInt::from(m as u64);
        term = shift(term * &mant2, scale) / (&m_big * &m_big);
        term = -term;
        harmonic += &one / &m_big;
        j_sum += &term;
        h_sum += (&term * &harmonic) >> (FRAC_BITS as usize);
        if m > peak && term.abs() < tiny {
            break;
        }
    }
    (to_f64_fixed(&j_sum), to_f64_fixed(&h_sum))
}

/// J₀(x) from the power series Σ(−1)ᵐ(x/2)²ᵐ/(m!)², evaluated in
/// extended fixed-point arithmetic (accurate to f64 rounding for x ≤ 200).
pub fn j0_series(x: f64) -> f64 {
    fixed_point_series(x).0
}

/// Y₀(x) = (2/π)[(ln(x/2)+γ)J₀(x) − Σ Hₘ(−x²/4)ᵐ/(m!)²] with both series
/// in extended fixed point.
pub fn y0_series(x: f64) -> f64 {
    assert!(x > 0.0);
    let (j, h) = fixed_point_series(x);
    let gamma = 0.577_215_664_901_532_9_f64;
    std::f64::consts::FRAC_2_PI * (((x / 2.0).ln() + gamma) * j - h)
}

/// Bisection on a sign change of `f` in [a, b].
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    assert!(fa * f(b) <= 0.0, "no sign change in [{a}, {b}]");
    while b - a > tol {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Tanh-sinh quadrature on [a, b]. The integrand receives the abscissa and
/// its distances to the two endpoints (computed without cancellation), so
/// integrable endpoint singularities can be evaluated accurately.
/// Returns (value, difference between the last two refinement levels).
pub fn tanh_sinh(f: impl Fn(f64, f64, f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let t_max = 4.5_f64;
    let pi2 = std::f64::consts::FRAC_PI_2;
    let eval = |t: f64| -> f64 {
        let u = pi2 * t.sinh();
        // 1 ± tanh(u) in cancellation-free form
        let one_minus = 2.0 / ((2.0 * u).exp() + 1.0);
        let one_plus = 2.0 / ((-2.0 * u).exp() + 1.0);
        let weight = pi2 * t.cosh() / u.cosh().powi(2);
        let da = half * one_plus;
        let db = half * one_minus;
        if da <= 0.0 || db <= 0.0 || weight == 0.0 || !weight.is_finite() {
            return 0.0;
        }
        weight * f(center + half * u.tanh(), da, db)
    };
    let mut h = 1.0_f64;
    let mut sum = eval(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut estimate = half * h * sum;
    let mut last_diff = f64::INFINITY;
    for _level in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= t_max {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let next = half * h * sum;
        last_diff = (next - estimate).abs();
        estimate = next;
        if last_diff < tol * estimate.abs().max(1.0) * 0.01 {
            break;
        }
    }
    (estimate, last_diff)
}
