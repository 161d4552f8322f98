use thiserror::Error;

use crate::geometry::ComplexValue;

/// Errors raised by the geometric and combinatorial layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate shape {0}: shapes must avoid 0, 1 and infinity")]
    DegenerateShape(ComplexValue),

    #[error("trace invariant is undefined for orientation-reversing isometries")]
    OrientationReversing,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid triangulation: {0}")]
    Validation(String),

    #[error("triangulation is already orientable")]
    AlreadyOrientable,

    #[error("zero shape parameter for tetrahedron {0}")]
    ZeroShape(usize),

    #[error("cusp {cusp} has no curve named `{curve}`")]
    MissingCurve { cusp: usize, curve: String },

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("initial residual {residual:.3e} exceeds the capture radius {radius:.3e}")]
    OutsideCaptureRadius { residual: f64, radius: f64 },

    #[error("newton iteration diverged: residual {residual:.3e} after {iterations} iterations")]
    Divergence { iterations: usize, residual: f64 },

    #[error("singular jacobian: numerical rank {rank} of {expected}, condition estimate {condition:.3e}")]
    SingularJacobian {
        rank: usize,
        expected: usize,
        condition: f64,
    },

    #[error("tetrahedron {0} left the upper half-plane during the line search")]
    Degeneration(usize),

    #[error("continuation step {index} too large: {reason}; insert intermediate targets (bisect the step)")]
    StepTooLarge { index: usize, reason: String },

    #[error("branch jump: log increment {increment:.3} is ambiguous, refine the path")]
    BranchJump { increment: f64 },

    #[error("holonomy factor for tetrahedron {0} is zero or infinite")]
    DegenerateFactor(usize),

    #[error("dehn coefficients are not unique: u and v are real-proportional")]
    NonUniqueDehn,

    #[error("trace invariant {name} is not real (imaginary part {imaginary:.3e})")]
    NonRealTrace { name: &'static str, imaginary: f64 },

    #[error("cross-check failed at sample {index}: disagreement {value:.3e} exceeds {tol:.3e}")]
    CrossCheck { index: usize, value: f64, tol: f64 },

    #[error("inconsistent trace pattern: I_a2 = {i_a2:.6e}, I_b = {i_b:.6e}")]
    InconsistentPattern { i_a2: f64, i_b: f64 },

    #[error("the meridian image is the identity")]
    TrivialMeridian,

    #[error("klein bottle relation violated (residual {0:.3e})")]
    RelationViolated(f64),

    #[error("degenerate representation has no completion geometry")]
    DegenerateType,

    #[error("point is off the character circle |x - 1| = 1 (distance {0:.3e})")]
    OffCircle(f64),

    #[error("x = 2 is the reducible character")]
    ReducibleCharacter,

    #[error("curve parameter {0} outside the open interval (0, 2pi)")]
    ParameterOutOfRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
