//! Budgeted prediction from expert advice.
//!
//! Each round the learner follows one expert j and names an observation
//! set U containing j of size at most m; only the losses of experts in
//! U are revealed, and the learner suffers the loss of j. The
//! implementation is exponential weights with a uniform exploration
//! mixture and importance-weighted loss estimates:
//!
//! ```text
//!   p = (1 - gamma) softmax(log_weights) + gamma / d
//!   j ~ p,  U = {j} + (m-1 distinct experts uniform from the rest)
//!   q_j = p_j + (1 - p_j)(m-1)/(d-1)          (inclusion probability)
//!   est_j = loss_j / q_j on U, 0 elsewhere
//!   log_weights_j -= eta * est_j
//! ```
//!
//! The estimates are exactly unbiased, E[est_j] = loss_j, which the
//! tests verify by enumerating every (j, U) outcome.

use crate::error::{Error, Result};
use crate::rng::Rng64;

/// State of one budgeted-experts instance.
#[derive(Debug, Clone)]
pub struct BexpState {
    d: usize,
    m: usize,
    log_weights: Vec<f64>,
    pub eta: f64,
    pub gamma: f64,
    t: usize,
    horizon: usize,
}

impl BexpState {
    /// Rates follow the standard schedule for a known horizon:
    /// eta = sqrt(m ln(d) / (d T)), gamma = min(1, sqrt(d ln(d)/(m T))).
    pub fn new(d: usize, m: usize, horizon: usize) -> Self {
        assert!(m >= 1 && m <= d);
        let horizon = horizon.max(1);
        let ln_d = (d as f64).ln();
        let eta = (m as f64 * ln_d / (d as f64 * horizon as f64)).sqrt();
        let gamma = (d as f64 * ln_d / (m as f64 * horizon as f64))
            .sqrt()
            .min(1.0);
        Self::with_rates(d, m, horizon, eta, gamma)
    }

    pub fn with_rates(d: usize, m: usize, horizon: usize, eta: f64, gamma: f64) -> Self {
        assert!(m >= 1 && m <= d);
        assert!(eta >= 0.0);
        assert!((0.0..=1.0).contains(&gamma));
        BexpState {
            d,
            m,
            log_weights: vec![0.0; d],
            eta,
            gamma,
            t: 0,
            horizon,
        }
    }

    pub fn num_experts(&self) -> usize {
        self.d
    }

    pub fn budget(&self) -> usize {
        self.m
    }

    pub fn rounds(&self) -> usize {
        self.t
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The distribution the followed expert is drawn from.
    pub fn selection_probabilities(&self) -> Vec<f64> {
        let max = self
            .log_weights
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let exps: Vec<f64> = self.log_weights.iter().map(|&w| (w - max).exp()).collect();
        let total: f64 = exps.iter().sum();
        let uniform = self.gamma / self.d as f64;
        exps.iter()
            .map(|e| (1.0 - self.gamma) * e / total + uniform)
            .collect()
    }

    /// Probability that each expert lands in the observation set.
    pub fn inclusion_probabilities(&self) -> Vec<f64> {
        let p = self.selection_probabilities();
        if self.m == self.d {
            return vec![1.0; self.d];
        }
        let frac = (self.m - 1) as f64 / (self.d - 1) as f64;
        p.iter().map(|&pj| pj + (1.0 - pj) * frac).collect()
    }

    /// Choose the followed expert and the observation set (sorted).
    pub fn select(&self, rng: &mut Rng64) -> (usize, Vec<usize>) {
        let p = self.selection_probabilities();
        let mut u = rng.next_f64();
        let mut j = self.d - 1;
        for (i, &pi) in p.iter().enumerate() {
            if u < pi {
                j = i;
                break;
            }
            u -= pi;
        }
        if self.m == self.d {
            return (j, (0..self.d).collect());
        }
        let mut others: Vec<usize> = (0..self.d).filter(|&i| i != j).collect();
        let picks = self.m - 1;
        for i in 0..picks {
            let swap = i + rng.next_below(others.len() - i);
            others.swap(i, swap);
        }
        let mut set = others[..picks].to_vec();
        set.push(j);
        set.sort_unstable();
        (j, set)
    }

    /// Importance-weighted loss estimates for one observed set.
    pub fn loss_estimates(&self, observed: &[(usize, f64)]) -> Result<Vec<f64>> {
        let q = self.inclusion_probabilities();
        let mut est = vec![0.0; self.d];
        for &(j, loss) in observed {
            if !(0.0..=1.0).contains(&loss) {
                return Err(Error::LossOutOfRange {
                    expert: j,
                    value: loss,
                });
            }
            est[j] = loss / q[j];
        }
        Ok(est)
    }

    /// Fold the observed losses into the weights.
    pub fn update(&mut self, observed: &[(usize, f64)]) -> Result<()> {
        let est = self.loss_estimates(observed)?;
        for (w, e) in self.log_weights.iter_mut().zip(&est) {
            *w -= self.eta * e;
        }
        self.t += 1;
        Ok(())
    }
}
