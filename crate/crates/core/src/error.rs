use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("independent variable s = {0} lies on a fixed singularity (s = 0 or s = 1)")]
    SingularIndependentVariable(String),

    #[error("{generator} is singular at this state (phi_{phi_index} vanishes){}", step_suffix(*.step))]
    SingularTransformation {
        generator: String,
        phi_index: usize,
        step: Option<usize>,
    },

    #[error("invalid generator or index: {0}")]
    InvalidGenerator(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("claim {claim}: {attempts} consecutive samples hit singular loci at trial {trial}")]
    ResampleExhausted {
        claim: String,
        trial: usize,
        attempts: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bracket produced loop degree {degree} outside the truncation |n| <= {max}")]
    TruncationOverflow { degree: i32, max: i32 },

    #[error("element is not homogeneous for the gradation")]
    NotHomogeneous,

    #[error("step size underflow at s = {s} (h = {h:e})")]
    StepUnderflow { s: f64, h: f64 },

    #[error("maximum number of steps ({0}) exceeded")]
    MaxStepsExceeded(usize),

    #[error("invalid integration interval: {0}")]
    InvalidInterval(String),

    #[error("non-finite value encountered at s = {0}")]
    NonFinite(f64),
}

fn step_suffix(step: Option<usize>) -> String {
    match step {
        Some(k) => format!(" at word step {k}"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
