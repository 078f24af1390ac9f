//! Shared protocol types: examples, masked observations, sparse plays,
//! and the regret ledger.
//!
//! The round protocol: commit a sparse weight vector, choose a query
//! set of at most k0 coordinates, observe those feature coordinates and
//! the label, suffer the squared loss of the inner-product prediction.
//! Indices are 0-based internally; all external formats are 1-based.

/// One labeled example (x, y) with ||x||_inf <= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledExample {
    pub x: Vec<f64>,
    pub y: f64,
}

impl LabeledExample {
    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// The coordinates of one example actually revealed to the learner.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskedObservation {
    /// Round index t (1-based).
    pub round: usize,
    /// Strictly increasing coordinate indices, |mask| <= k0.
    pub mask: Vec<usize>,
    /// The entries x_t(i) for i in `mask`, in mask order.
    pub values: Vec<f64>,
    pub y: f64,
}

impl MaskedObservation {
    pub fn from_example(round: usize, example: &LabeledExample, mask: Vec<usize>) -> Self {
        debug_assert!(mask.windows(2).all(|w| w[0] < w[1]));
        let values = mask.iter().map(|&i| example.x[i]).collect();
        MaskedObservation {
            round,
            mask,
            values,
            y: example.y,
        }
    }
}

/// A dense d-vector with sparsity bookkeeping; the per-round play.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseWeight {
    w: Vec<f64>,
    support: Vec<usize>,
}

impl SparseWeight {
    pub fn zeros(d: usize) -> Self {
        SparseWeight {
            w: vec![0.0; d],
            support: Vec::new(),
        }
    }

    pub fn from_dense(w: Vec<f64>) -> Self {
        let support = w
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(i, _)| i)
            .collect();
        SparseWeight { w, support }
    }

    /// Build from (index, value) pairs on a given dimension.
    pub fn from_pairs(d: usize, pairs: &[(usize, f64)]) -> Self {
        let mut w = vec![0.0; d];
        for &(i, v) in pairs {
            w[i] = v;
        }
        Self::from_dense(w)
    }

    pub fn dense(&self) -> &[f64] {
        &self.w
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        // Support is typically much smaller than d.
        self.support.iter().map(|&i| self.w[i] * x[i]).sum()
    }

    pub fn l1_norm(&self) -> f64 {
        self.support.iter().map(|&i| self.w[i].abs()).sum()
    }

    pub fn l2_dist(&self, other: &[f64]) -> f64 {
        self.w
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Squared prediction loss (y - y_hat)^2.
#[inline]
pub fn squared_loss(y: f64, y_hat: f64) -> f64 {
    let gap = y - y_hat;
    gap * gap
}

/// One protocol round as recorded by every driver.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    /// Round index, 1-based.
    pub t: usize,
    /// Queried coordinates S_t (0-based, sorted).
    pub mask: Vec<usize>,
    pub y: f64,
    pub y_hat: f64,
    pub loss: f64,
    /// |S_t union support(w_t)|: the query budget of the improper
    /// protocol conversion. |S_t| alone is `mask.len()`.
    pub union_query_size: usize,
}

/// One regret checkpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub t: usize,
    pub cum_loss: f64,
    pub comparator_loss: f64,
    pub regret: f64,
}

/// Per-round losses plus checkpointed cumulative/comparator/regret values.
#[derive(Debug, Clone, Default)]
pub struct RegretLedger {
    pub losses: Vec<f64>,
    pub checkpoints: Vec<Checkpoint>,
}

impl RegretLedger {
    pub fn cumulative_loss(&self) -> f64 {
        self.losses.iter().sum()
    }

    /// Cumulative loss over the first t rounds.
    pub fn cumulative_through(&self, t: usize) -> f64 {
        self.losses[..t].iter().sum()
    }

    /// Rebuild every checkpoint from the per-round losses and the stored
    /// comparator losses; used to audit ledger consistency.
    pub fn rebuild_checkpoints(&self) -> Vec<Checkpoint> {
        self.checkpoints
            .iter()
            .map(|c| {
                let cum = self.cumulative_through(c.t);
                Checkpoint {
                    t: c.t,
                    cum_loss: cum,
                    comparator_loss: c.comparator_loss,
                    regret: cum - c.comparator_loss,
                }
            })
            .collect()
    }
}
