//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Off-diagonal Gram entries cannot be debiased: under exact-size
    /// masking with a budget of one, no pair of coordinates is ever
    /// observed together, so every off-diagonal estimate is identically
    /// zero.
    #[error("off-diagonal Gram entries are uncorrectable (exact-size masks with k0 = 1, d = {d})")]
    OffDiagonalUncorrectable { d: usize },

    /// The Dantzig program has no feasible point at the given threshold.
    #[error("Dantzig program infeasible at lambda = {lambda}")]
    Infeasible { lambda: f64 },

    /// The LP solver hit its pivot cap or left the feasibility tolerance.
    #[error("LP solver failed to converge: {reason}")]
    NumericalFailure { reason: String },

    /// A subset enumeration would exceed the configured cap.
    #[error("enumeration of {required} subsets exceeds cap {cap}")]
    EnumerationTooLarge { required: u128, cap: u128 },

    /// A loss fed to the budgeted-experts update lies outside [0, 1].
    #[error("expert loss {value} for expert {expert} outside [0, 1]")]
    LossOutOfRange { expert: usize, value: f64 },

    /// Too few positive-regret checkpoints to fit a log-log slope.
    #[error("degenerate slope fit: only {usable} usable checkpoints (need {needed})")]
    DegenerateFit { usable: usize, needed: usize },

    /// Configuration file rejected.
    #[error("config error: {0}")]
    Config(String),

    /// Stream/data file rejected.
    #[error("data format error: {0}")]
    DataFormat(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for config errors, 3 for runtime errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}
