//! Forecaster for online least squares over a fixed coordinate subset.
//!
//! Classic ridge-regularized follow-the-leader with the twist that the
//! current feature vector is folded into the second-moment matrix
//! *before* predicting:
//!
//! ```text
//!   A_t = a I + sum_{s <= t} x_s x_s^T     (current round included)
//!   b_t = sum_{s < t} y_s x_s              (labels lag one round)
//!   w_t = A_t^{-1} b_t,   y_hat = <x_t, w_t>
//! ```
//!
//! The per-batch regret against the best fixed weight vector on the
//! same support grows as O(dim log B), which the greedy driver relies
//! on within each mini-batch.

use nalgebra::{Cholesky, DMatrix, DVector};

/// Forecaster state over one support.
#[derive(Debug, Clone)]
pub struct VawState {
    a_mat: DMatrix<f64>,
    b: DVector<f64>,
    ridge: f64,
}

impl VawState {
    pub fn new(dim: usize, ridge: f64) -> Self {
        assert!(ridge > 0.0);
        VawState {
            a_mat: DMatrix::identity(dim, dim) * ridge,
            b: DVector::zeros(dim),
            ridge,
        }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn ridge(&self) -> f64 {
        self.ridge
    }

    /// Fold the incoming features into A, then predict.
    /// Returns (y_hat, w_t).
    pub fn predict(&mut self, x: &[f64]) -> (f64, Vec<f64>) {
        debug_assert_eq!(x.len(), self.dim());
        let xv = DVector::from_column_slice(x);
        self.a_mat += &xv * xv.transpose();
        // A is positive definite for any ridge > 0.
        let w = Cholesky::new(self.a_mat.clone())
            .expect("ridge keeps A positive definite")
            .solve(&self.b);
        let y_hat = xv.dot(&w);
        (y_hat, w.iter().copied().collect())
    }

    /// Reveal the label for the features passed to the matching
    /// `predict` call.
    pub fn update(&mut self, x: &[f64], y: f64) {
        debug_assert_eq!(x.len(), self.dim());
        if y == 0.0 {
            return;
        }
        for (bi, &xi) in self.b.iter_mut().zip(x) {
            *bi += y * xi;
        }
    }
}
