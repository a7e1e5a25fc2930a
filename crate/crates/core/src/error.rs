use thiserror::Error;

/// Broad failure category, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    /// Malformed input or an argument outside an operation's domain.
    Config,
    /// The input describes something physically inadmissible.
    Physics,
    /// Singular or ill-conditioned numerics.
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid element id {index} (surface has {count} elements)")]
    InvalidElement { index: usize, count: usize },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected} entries, got {got} ({what})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("element {element}: |r|²+|t|² = {value:.6} > 1")]
    PassivityViolation { element: usize, value: f64 },

    #[error("element {element}: {reason}")]
    ActiveElement { element: usize, reason: String },

    #[error("element {element}: singular sheet (normalized {which} = -1)")]
    SingularSheet { element: usize, which: &'static str },

    #[error("grid is not aligned to the element grid: {0}")]
    Alignment(String),

    #[error("element {element} covers no susceptibility samples")]
    Coverage { element: usize },

    #[error("point source must lie on the reflection side (z < 0), got z = {z}")]
    SourceSide { z: f64 },

    #[error("receiver at z = {z} is not in the {side} half-space")]
    WrongSide { side: &'static str, z: f64 },

    #[error("receiver lies on the surface plane")]
    OnSurfacePlane,

    #[error("receiver coincides with element {element}")]
    SingularDistance { element: usize },

    #[error("sampling pitch {pitch:.4e} m exceeds λ/2 = {limit:.4e} m")]
    Aliasing { pitch: f64, limit: f64 },

    #[error("steering is evanescent: sin θ = {sin_theta:.6}")]
    EvanescentSteering { sin_theta: f64 },

    #[error("ports {p} and {q} coincide")]
    SingularCoupling { p: usize, q: usize },

    #[error("impedance matrix is not reciprocal: |Z[{p},{q}] - Z[{q},{p}]| = {deviation:.3e}")]
    NonReciprocal { p: usize, q: usize, deviation: f64 },

    #[error("port network is not passive (Hermitian part has a negative eigenvalue below {threshold:.3e})")]
    NonPassiveNetwork { threshold: f64 },

    #[error("network is resonant: condition number {condition:.3e}")]
    Resonance { condition: f64 },

    #[error("unknown method '{0}'")]
    UnknownMethod(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidElement { .. }
            | InvalidGeometry(_)
            | InvalidArgument(_)
            | LengthMismatch { .. }
            | Alignment(_)
            | Coverage { .. }
            | UnknownMethod(_) => ErrorClass::Config,
            PassivityViolation { .. }
            | ActiveElement { .. }
            | SourceSide { .. }
            | WrongSide { .. }
            | OnSurfacePlane
            | Aliasing { .. }
            | EvanescentSteering { .. }
            | NonReciprocal { .. }
            | NonPassiveNetwork { .. } => ErrorClass::Physics,
            SingularSheet { .. }
            | SingularDistance { .. }
            | SingularCoupling { .. }
            | Resonance { .. } => ErrorClass::Numerical,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
