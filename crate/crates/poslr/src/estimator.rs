//! Unbiased second-moment estimation from masked observations.
//!
//! Only k0 of d feature coordinates are seen each round. Rescaling the
//! observed entries by d/k0 gives an unbiased estimate x_hat of the full
//! feature vector, and accumulating x_hat x_hat^T / y x_hat gives plug-in
//! estimates of X^T X and X^T Y. Two corrections restore entrywise
//! unbiasedness of the Gram estimate:
//!
//! * diagonal: E[x_hat(i)^2] = (d/k0) x(i)^2, so a running diagonal
//!   correction D_hat = (1 - k0/d) diag(G_hat) is subtracted;
//! * off-diagonal (exact-size masks only): a pair {i, j} is observed
//!   together with probability k0(k0-1)/(d(d-1)), so raw off-diagonal
//!   sums carry the factor d(k0-1)/(k0(d-1)) and are rescaled by its
//!   inverse rho = k0(d-1)/(d(k0-1)). Under Bernoulli masks inclusions
//!   are independent and the off-diagonals are already unbiased.
//!
//! With exact-size masks and k0 = 1 no pair is ever observed together;
//! off-diagonals are then uncorrectable and `debiased_gram` reports it.

use nalgebra::{DMatrix, DVector};

use crate::config::MaskMode;
use crate::error::{Error, Result};
use crate::rng::Rng64;
use crate::types::MaskedObservation;

/// Running masked-moment accumulator.
#[derive(Debug, Clone)]
pub struct EstimatorState {
    d: usize,
    k0: usize,
    mask_mode: MaskMode,
    /// Rounds accumulated.
    t: usize,
    /// Sum of x_hat x_hat^T (symmetric, dense).
    g_hat: DMatrix<f64>,
    /// Sum of y * x_hat.
    b_hat: DVector<f64>,
    /// Diagonal bias correction, (1 - k0/d) * diag(g_hat).
    d_hat: DVector<f64>,
}

impl EstimatorState {
    pub fn new(d: usize, k0: usize, mask_mode: MaskMode) -> Self {
        EstimatorState {
            d,
            k0,
            mask_mode,
            t: 0,
            g_hat: DMatrix::zeros(d, d),
            b_hat: DVector::zeros(d),
            d_hat: DVector::zeros(d),
        }
    }

    /// Assemble a state from raw parts (external data, tests).
    pub fn from_parts(
        d: usize,
        k0: usize,
        mask_mode: MaskMode,
        t: usize,
        g_hat: DMatrix<f64>,
        b_hat: DVector<f64>,
    ) -> Self {
        let frac = 1.0 - k0 as f64 / d as f64;
        let d_hat = DVector::from_fn(d, |i, _| frac * g_hat[(i, i)]);
        EstimatorState {
            d,
            k0,
            mask_mode,
            t,
            g_hat,
            b_hat,
            d_hat,
        }
    }

    pub fn rounds(&self) -> usize {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn budget(&self) -> usize {
        self.k0
    }

    pub fn g_hat(&self) -> &DMatrix<f64> {
        &self.g_hat
    }

    pub fn b_hat(&self) -> &DVector<f64> {
        &self.b_hat
    }

    pub fn d_hat(&self) -> &DVector<f64> {
        &self.d_hat
    }

    /// Fold one rescaled observation into the moments.
    pub fn accumulate(&mut self, x_hat: &[f64], y: f64) {
        debug_assert_eq!(x_hat.len(), self.d);
        let frac = 1.0 - self.k0 as f64 / self.d as f64;
        for i in 0..self.d {
            let xi = x_hat[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..self.d {
                self.g_hat[(i, j)] += xi * x_hat[j];
            }
            self.d_hat[i] += frac * xi * xi;
            self.b_hat[i] += y * xi;
        }
        self.t += 1;
    }

    /// Observe a masked example: rescale and accumulate.
    pub fn observe(&mut self, obs: &MaskedObservation) {
        let x_hat = unbiased_estimate(obs, self.d, self.k0);
        self.accumulate(&x_hat, obs.y);
    }

    /// Entrywise-unbiased Gram estimate of X^T X (unnormalized sum form).
    pub fn debiased_gram(&self) -> Result<DMatrix<f64>> {
        let rho = self.off_diagonal_correction()?;
        let mut g = self.g_hat.clone();
        for i in 0..self.d {
            for j in 0..self.d {
                if i == j {
                    g[(i, i)] -= self.d_hat[i];
                } else {
                    g[(i, j)] *= rho;
                }
            }
        }
        Ok(g)
    }

    fn off_diagonal_correction(&self) -> Result<f64> {
        match self.mask_mode {
            MaskMode::Bernoulli => Ok(1.0),
            MaskMode::ExactSize => {
                if self.d == 1 {
                    return Ok(1.0);
                }
                if self.k0 == 1 {
                    return Err(Error::OffDiagonalUncorrectable { d: self.d });
                }
                let (d, k0) = (self.d as f64, self.k0 as f64);
                Ok(k0 * (d - 1.0) / (d * (k0 - 1.0)))
            }
        }
    }

    /// The vector (1/t)(b_hat - G_debiased w) whose sup-norm the Dantzig
    /// program constrains.
    pub fn residual(&self, w: &[f64]) -> Result<DVector<f64>> {
        debug_assert!(self.t >= 1);
        let g = self.debiased_gram()?;
        let wv = DVector::from_column_slice(w);
        let mut r = &self.b_hat - g * wv;
        r /= self.t as f64;
        Ok(r)
    }
}

/// Draw one query mask: sorted indices into [0, d).
pub fn sample_mask(rng: &mut Rng64, d: usize, k0: usize, mode: MaskMode) -> Vec<usize> {
    debug_assert!(k0 >= 1 && k0 <= d);
    match mode {
        MaskMode::ExactSize => rng.subset_exact(d, k0),
        MaskMode::Bernoulli => {
            let p = k0 as f64 / d as f64;
            (0..d).filter(|_| rng.next_f64() < p).collect()
        }
    }
}

/// Rescale a masked observation to an unbiased estimate of the full
/// feature vector: (d/k0) x(i) on observed coordinates, 0 elsewhere.
pub fn unbiased_estimate(obs: &MaskedObservation, d: usize, k0: usize) -> Vec<f64> {
    let scale = d as f64 / k0 as f64;
    let mut x_hat = vec![0.0; d];
    for (&i, &v) in obs.mask.iter().zip(&obs.values) {
        x_hat[i] = scale * v;
    }
    x_hat
}

/// All subsets of {0,..,d-1} of size m, lexicographic; enumeration helper
/// for unbiasedness audits and the exhaustive oracles.
pub fn subsets_exact(d: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn rec(start: usize, d: usize, m: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        let need = m - current.len();
        for i in start..=d.saturating_sub(need) {
            current.push(i);
            rec(i + 1, d, m, current, out);
            current.pop();
        }
    }
    rec(0, d, m, &mut current, &mut out);
    out
}
