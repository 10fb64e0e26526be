use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ground set of size {n} exceeds the enumeration limit of {max}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The generic projection hit its iteration cap. Carries the best iterate
    /// and its Frank-Wolfe gap.
    #[error("projection did not converge after {iterations} iterations (gap {gap:e})")]
    ConvergenceFailure {
        best: Vec<f64>,
        gap: f64,
        iterations: u64,
    },

    #[error("malformed image: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::InvalidInput(format!(
            "non-finite coordinate {} at index {i}",
            x[i]
        ))),
        None => Ok(()),
    }
}
