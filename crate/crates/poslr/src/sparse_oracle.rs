//! Exact least squares on a fixed support and exhaustive best-subset
//! search. This is the ground-truth comparator for every regret number
//! the harness reports, and the kernel behind the per-batch set
//! function of the greedy learner.
//!
//! Normal equations are solved through a symmetric factorization with a
//! tiny relative ridge so rank-deficient supports return the
//! minimum-norm minimizer (the ridge solution converges to it as the
//! ridge vanishes; tests check against a decreasing-ridge oracle).

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative ridge applied to the support Gram matrix.
const RIDGE_REL: f64 = 1e-12;

/// Default cap on subset enumerations.
pub const DEFAULT_ENUM_CAP: u128 = 2_000_000;

/// A least-squares fit restricted to one support.
#[derive(Debug, Clone)]
pub struct SubsetFit {
    /// Sorted support indices (0-based).
    pub support: Vec<usize>,
    /// Dense weights, zero off-support.
    pub w: Vec<f64>,
    /// (1/n) sum of squared residuals.
    pub mean_loss: f64,
}

/// Precomputed second moments of a dataset; lets subset fits run off
/// d x d data instead of n x d data.
#[derive(Debug, Clone)]
pub struct GramForm {
    pub xtx: DMatrix<f64>,
    pub xty: DVector<f64>,
    pub yty: f64,
    pub n: usize,
}

impl GramForm {
    pub fn new(rows: &[Vec<f64>], ys: &[f64]) -> Self {
        assert_eq!(rows.len(), ys.len());
        assert!(!rows.is_empty());
        let d = rows[0].len();
        let mut xtx = DMatrix::zeros(d, d);
        let mut xty = DVector::zeros(d);
        let mut yty = 0.0;
        for (x, &y) in rows.iter().zip(ys) {
            for i in 0..d {
                let xi = x[i];
                if xi == 0.0 {
                    continue;
                }
                for j in 0..d {
                    xtx[(i, j)] += xi * x[j];
                }
                xty[i] += xi * y;
            }
            yty += y * y;
        }
        GramForm {
            xtx,
            xty,
            yty,
            n: rows.len(),
        }
    }

    pub fn dim(&self) -> usize {
        self.xtx.nrows()
    }

    /// Minimum-norm least squares restricted to `support`.
    pub fn fit_support(&self, support: &[usize]) -> SubsetFit {
        let d = self.dim();
        let s = support.len();
        if s == 0 {
            return SubsetFit {
                support: Vec::new(),
                w: vec![0.0; d],
                mean_loss: (self.yty / self.n as f64).max(0.0),
            };
        }
        let mut g = DMatrix::zeros(s, s);
        let mut b = DVector::zeros(s);
        for (a, &i) in support.iter().enumerate() {
            for (c, &j) in support.iter().enumerate() {
                g[(a, c)] = self.xtx[(i, j)];
            }
            b[a] = self.xty[i];
        }
        let scale = (0..s).map(|i| g[(i, i)]).fold(0.0f64, f64::max).max(1.0);
        let mut ridge = RIDGE_REL * scale;
        let ws = loop {
            let mut reg = g.clone();
            for i in 0..s {
                reg[(i, i)] += ridge;
            }
            match Cholesky::new(reg) {
                Some(chol) => break chol.solve(&b),
                None => ridge *= 100.0,
            }
        };
        let mut w = vec![0.0; d];
        for (a, &i) in support.iter().enumerate() {
            w[i] = ws[a];
        }
        // Quadratic-form residual: y'y - 2 w'b + w'G w.
        let quad = self.yty - 2.0 * ws.dot(&b) + (ws.transpose() * &g * &ws)[(0, 0)];
        SubsetFit {
            support: support.to_vec(),
            w,
            mean_loss: (quad / self.n as f64).max(0.0),
        }
    }
}

/// Least squares restricted to `support`, from raw rows. The returned
/// mean loss is recomputed from the explicit residual.
pub fn least_squares_on_support(rows: &[Vec<f64>], ys: &[f64], support: &[usize]) -> SubsetFit {
    let gram = GramForm::new(rows, ys);
    let mut fit = gram.fit_support(support);
    fit.mean_loss = mean_loss_of(rows, ys, &fit.w);
    fit
}

/// (1/n) sum of squared residuals of a dense weight vector.
pub fn mean_loss_of(rows: &[Vec<f64>], ys: &[f64], w: &[f64]) -> f64 {
    let n = rows.len();
    let mut total = 0.0;
    for (x, &y) in rows.iter().zip(ys) {
        let pred: f64 = x.iter().zip(w).map(|(a, b)| a * b).sum();
        let gap = y - pred;
        total += gap * gap;
    }
    total / n as f64
}

/// Binomial coefficient with saturation, for enumeration-cap checks.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Visit every subset of {0,..,d-1} of size <= k in size-then-lex order.
pub fn for_each_subset_up_to(d: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut current: Vec<usize> = Vec::with_capacity(k);
    f(&current);
    fn rec(start: usize, d: usize, size: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let need = size - cur.len();
        for i in start..=d.saturating_sub(need) {
            cur.push(i);
            rec(i + 1, d, size, cur, f);
            cur.pop();
        }
    }
    for size in 1..=k.min(d) {
        rec(0, d, size, &mut current, &mut f);
    }
}

/// Exhaustive minimum of the mean squared loss over all supports of
/// size at most k; ties broken toward the lexicographically smallest
/// sorted support.
pub fn best_subset(rows: &[Vec<f64>], ys: &[f64], k: usize, cap: u128) -> Result<SubsetFit> {
    let gram = GramForm::new(rows, ys);
    best_subset_gram(&gram, k, cap).map(|mut fit| {
        fit.mean_loss = mean_loss_of(rows, ys, &fit.w);
        fit
    })
}

/// Same search over a precomputed Gram form (per-checkpoint comparator).
pub fn best_subset_gram(gram: &GramForm, k: usize, cap: u128) -> Result<SubsetFit> {
    let d = gram.dim();
    let k = k.min(d);
    let required = binomial(d, k);
    if required > cap {
        return Err(Error::EnumerationTooLarge { required, cap });
    }
    let mut best: Option<SubsetFit> = None;
    for_each_subset_up_to(d, k, |support| {
        let fit = gram.fit_support(support);
        let better = match &best {
            None => true,
            Some(b) => {
                fit.mean_loss < b.mean_loss
                    || (fit.mean_loss == b.mean_loss && lex_less(&fit.support, &b.support))
            }
        };
        if better {
            best = Some(fit);
        }
    });
    Ok(best.expect("at least the empty support is visited"))
}

fn lex_less(a: &[usize], b: &[usize]) -> bool {
    a < b
}
