use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error in {function}: argument {value} {reason}")]
    Domain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A denominator of a closed-form amplitude vanishes.
    #[error("pole: {0}")]
    Pole(String),

    /// An on-shell atom at |p| = k was passed to a 1/ϖ integral.
    #[error("singular atom at p = {location}: 1/varpi is not integrable at |p| = k")]
    EdgeAtom { location: f64 },

    #[error("support mismatch: cannot combine {left} and {right} amplitudes")]
    SupportMismatch { left: &'static str, right: &'static str },

    #[error("quadrature did not converge: error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    NonConvergence { estimate: f64, tolerance: f64 },

    /// The forward direction θ = θ₀ carries the unscattered beam.
    #[error("scattering angle {theta} coincides with the incidence angle; the forward delta term has no finite value")]
    ForwardAngle { theta: f64 },

    #[error("scattering angle {theta} is grazing (|sin θ| = 1); amplitude extraction is undefined there")]
    GrazingAngle { theta: f64 },

    /// An internal consistency check exceeded its tolerance.
    #[error("{check}: residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual {
        check: &'static str,
        residual: f64,
        tolerance: f64,
    },
}

impl Error {
    /// Short machine-readable category used by the CLI diagnostic prefix.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Precondition(_) => "precondition",
            Error::Pole(_) => "pole",
            Error::EdgeAtom { .. } => "edge-atom",
            Error::SupportMismatch { .. } => "support",
            Error::NonConvergence { .. } => "nonconvergence",
            Error::ForwardAngle { .. } => "forward-angle",
            Error::GrazingAngle { .. } => "grazing-angle",
            Error::Residual { .. } => "residual",
        }
    }
}
