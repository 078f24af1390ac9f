//! Online sparse linear regression with restricted feature access.
//!
//! Each round the learner commits a k-sparse weight vector, queries at
//! most k0 coordinates of the incoming feature vector, predicts by
//! inner product, and suffers the squared loss; performance is measured
//! as regret against the best k-sparse regressor in hindsight. Two
//! learners are provided, each with the conditioning assumptions it
//! needs made auditable:
//!
//! * [`dantzig`]: for labels from a sparse linear model with Gaussian
//!   noise, an l1-minimizing program over unbiased masked moment
//!   estimates, re-solved on a doubling schedule and truncated to the
//!   top k coordinates.
//! * [`greedy`]: for arbitrary bounded labels, mini-batched greedy
//!   subset selection driven by budgeted-experts instances, with an
//!   online ridge forecaster inside each batch.
//!
//! Supporting modules: masked moment estimation ([`estimator`]), an
//! exhaustive best-subset comparator ([`sparse_oracle`]), restricted
//! isometry / condition-number audits ([`conditioning`]), the batch
//! least-squares set function with weak-supermodularity audits
//! ([`supermodular`]), budgeted experts ([`bexp`]), the within-batch
//! forecaster ([`vaw`]), seeded generators ([`datagen`]), and the
//! experiment harness ([`harness`]).
//!
//! The `examples/` directory has one runnable walk-through per
//! capability; the `poslr` binary exposes `run`, `audit`, `oracle`,
//! and `sweep` subcommands over the same library surface.

pub mod bexp;
pub mod conditioning;
pub mod config;
pub mod dantzig;
pub mod datagen;
pub mod error;
pub mod estimator;
pub mod greedy;
pub mod harness;
pub mod rng;
pub mod simplex;
pub mod sparse_oracle;
pub mod supermodular;
pub mod types;
pub mod vaw;

pub use config::{validate_config, MaskMode, Mode, ProblemConfig, ValidationReport};
pub use error::{Error, Result};
pub use types::{
    squared_loss, Checkpoint, LabeledExample, MaskedObservation, RegretLedger, RoundRecord,
    SparseWeight,
};
