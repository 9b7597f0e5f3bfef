use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cyclic substitution bindings through `{0}`")]
    CyclicBindings(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rewrite did not terminate after {steps} steps; trace:\n{trace}")]
    NonTerminating { steps: usize, trace: String },
    #[error("inconsistent relation: {0}")]
    InconsistentRelation(String),
    #[error("generator X{0} has no matrix image")]
    UncoveredGenerator(u32),
    #[error("matrix B is singular")]
    SingularB,
    #[error("{0}")]
    Unsupported(String),
    #[error("time step {dt} exceeds the stability bound {bound}")]
    StepTooLarge { dt: f64, bound: f64 },
    #[error("non-finite value at step {0}")]
    NonFinite(usize),
    #[error("monitor `{monitor}` uses `{symbol}`, deeper than second order")]
    JetTooDeep { monitor: String, symbol: String },
    #[error("parse error at line {line}, column {column}: expected {expected}")]
    Parse { line: usize, column: usize, expected: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
