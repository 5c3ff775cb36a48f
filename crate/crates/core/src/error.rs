use thiserror::Error;

use crate::dispersion::CrystalAxis;

/// Errors raised by the design and analysis pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("missing axis block `{0}`")]
    MissingAxis(CrystalAxis),

    #[error("axis `{axis}`: {reason}")]
    InvalidAxis { axis: CrystalAxis, reason: String },

    #[error("non-physical index n = {n} on axis `{axis}` at {lambda_um} um, {temp_c} C")]
    NonPhysical {
        axis: CrystalAxis,
        lambda_um: f64,
        temp_c: f64,
        n: f64,
    },

    #[error("{quantity} = {value} is outside the validity range [{min}, {max}]")]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no design found: {0}")]
    NoSolution(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for this error: 1 invalid input, 2 no solution,
    /// 3 internal numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoSolution(_) => 2,
            Error::Numerical(_) => 3,
            _ => 1,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::MissingAxis(_) => "missing_axis",
            Error::InvalidAxis { .. } => "invalid_axis",
            Error::NonPhysical { .. } => "non_physical",
            Error::OutOfRange { .. } => "out_of_range",
            Error::InvalidInput(_) => "invalid_input",
            Error::NoSolution(_) => "no_solution",
            Error::Numerical(_) => "numerical",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
