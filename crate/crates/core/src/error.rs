use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Evaluation requested at (or numerically on top of) a pole of Γ.
    #[error("pole of the gamma function at {0}")]
    GammaPole(String),

    /// Argument outside the domain where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("test function support window [{lo}, {hi}] is not contained in [0, {support}]")]
    Geometry { lo: f64, hi: f64, support: f64 },

    #[error("|Im z| = {im} exceeds the transform strip bound {bound}")]
    StripExceeded { im: f64, bound: f64 },

    #[error("quadrature did not converge after {evaluations} evaluations (estimate {estimate:e}, tolerance {tol:e})")]
    NonConvergence {
        evaluations: usize,
        estimate: f64,
        tol: f64,
    },

    #[error("coefficient stream must satisfy a(1) = 1, found {0}")]
    Normalization(String),

    #[error("character {index} mod {modulus} is not primitive")]
    NonPrimitive { modulus: u64, index: u64 },

    #[error("no character with index {index} mod {modulus} ({count} characters exist)")]
    CharacterIndex { modulus: u64, index: u64, count: u64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("coverage error: {0}")]
    Coverage(String),

    #[error("z = {0} is not in the upper half-plane")]
    LowerHalfPlane(String),

    #[error("invalid twist specification: {0}")]
    TwistSpec(String),

    #[error("resonance: d * alpha = 2 (alpha = {alpha}, d = {degree})")]
    Resonance { alpha: f64, degree: f64 },

    #[error("ill-conditioned fit: {0}")]
    IllConditioned(String),

    #[error("degree {0} outside the admissible range")]
    DegreeRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("spec document error: {0}")]
    Spec(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}
