//! Scattering by a delta-function point scatterer in two dimensions.
//!
//! Two routes to the same scattering amplitude are implemented side by side:
//!
//! * the Lippmann-Schwinger route, where the Green's function at the origin
//!   diverges and is tamed by a momentum cutoff plus a renormalized coupling;
//! * the transfer-matrix route, where the fundamental transfer matrix only
//!   sees traveling modes and never meets the divergence.
//!
//! The crate also exposes the two-parameter family of solutions that absorbs
//! the divergence into the weights of on-shell transverse modes, and
//! real-space observables (wavefields, probability current, near and far
//! field checks).
//!
//! The numerical core is generic over the scalar type through [`Real`]; the
//! `f64` aliases below are what the command-line tool and the verification
//! suite use.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod amplitudes;
pub mod error;
pub mod fields;
pub mod kernel;
pub mod quad;
pub mod singfree;
pub mod specfun;
pub mod transfer;
pub mod verify;

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

pub use error::{Error, Result};

/// Real scalar type the numerical core is written against: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        // FromPrimitive for f32/f64 never fails on finite input
        Self::from_f64(x).unwrap_or_else(Self::nan)
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate's scalar type.
pub type Complex<T> = num_complex::Complex<T>;

pub type Complex64 = num_complex::Complex64;
pub type Dispersion = kernel::Dispersion<f64>;
pub type CutoffSpec = kernel::CutoffSpec<f64>;
pub type GeneralizedAmplitude = amplitudes::GeneralizedAmplitude<f64>;
pub type IncidentWave = amplitudes::IncidentWave<f64>;
pub type Coupling = transfer::Coupling<f64>;
pub type TransferEntry = transfer::TransferEntry<f64>;
pub type FamilyParams = singfree::FamilyParams<f64>;
pub type FRepresentation = singfree::FRepresentation<f64>;
pub type FieldGrid = fields::FieldGrid<f64>;
pub type CurrentGrid = fields::CurrentGrid<f64>;
pub type GridSpec = fields::GridSpec<f64>;

/// Shorthand for `Complex::new`.
#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn c_real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn c_i<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

#[inline]
pub(crate) fn is_finite_c<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
