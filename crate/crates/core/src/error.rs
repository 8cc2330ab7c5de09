use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("label {label} out of range for k = {k}")]
    LabelOutOfRange { label: usize, k: usize },

    #[error("invalid restriction: {0}")]
    InvalidRestriction(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The brute-force oracle would have to enumerate more than `2^budget_bits` maps.
    #[error("enumeration budget exceeded: needs 2^{required_bits:.2} maps, budget is 2^{budget_bits:.2}")]
    BudgetExceeded { required_bits: f64, budget_bits: f64 },

    #[error("cost guard: order {order} needs ~{estimate:.3e} elementary products, ceiling is {ceiling:.3e}")]
    CostGuard {
        order: usize,
        estimate: f64,
        ceiling: f64,
    },

    #[error("weights outside the zero-free polydisc: delta = {delta} > delta_max = {delta_max}")]
    CertificateFailed { delta: f64, delta_max: f64 },

    #[error("no root of the angle equation in (0, 2pi/3) for alpha = {alpha}")]
    NoRoot { alpha: f64 },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CertificateFailed { .. } => 2,
            Error::CostGuard { .. } | Error::BudgetExceeded { .. } => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
