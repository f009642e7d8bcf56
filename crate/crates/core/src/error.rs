use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Error, Debug)]
pub enum Error {
    #[error("zero divisor: |a conj(a)| = {modulus:e} against scale {scale:e}")]
    ZeroDivisor { modulus: f64, scale: f64 },

    #[error("expected a pure vector, scalar part has modulus {scalar:e}")]
    NotPureVector { scalar: f64 },

    #[error("finite-difference stencil of radius {h:e} at {point:?} leaves the field domain")]
    StencilOutsideDomain { point: [f64; 3], h: f64 },

    #[error("field provides no analytic {order} derivatives")]
    MissingDerivative { order: &'static str },

    #[error("kernel evaluated at its singular point")]
    SingularPoint,

    #[error("point {point:?} is {distance:e} from the surface, below the minimum {minimum:e}")]
    TooCloseToSurface {
        point: [f64; 3],
        distance: f64,
        minimum: f64,
    },

    #[error("Richardson extrapolation did not contract (last step {last:e}, first step {first:e})")]
    ExtrapolationDiverged { first: f64, last: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("orientation error: {0}")]
    Orientation(String),

    #[error("degenerate mesh: {0}")]
    DegenerateMesh(String),

    #[error("boundary data fails the membership test: {value:e} > {tolerance:e}")]
    MembershipFailed { value: f64, tolerance: f64 },

    #[error("quadrature budget exceeded: {required} evaluations > {budget}")]
    QuadratureBudgetExceeded { required: usize, budget: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
