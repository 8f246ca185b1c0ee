use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("logistic fit did not converge after {iters} iterations (gradient norm {grad_norm:.3e})")]
    NoConvergence { iters: usize, grad_norm: f64 },

    #[error("complete separation detected (coefficient norm {coef_norm:.1}); use the kernel learner")]
    Separation { coef_norm: f64 },

    #[error("fold {fold}: training complement has no {what} in arm {arm}")]
    FoldArm { fold: usize, arm: u8, what: &'static str },

    #[error("estimation failed: {0}")]
    Estimation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
