//! Brute-force conditioning audits.
//!
//! * Restricted isometry: over every support S of size k, the singular
//!   values of (1/sqrt(n)) X_S must lie in [1 - eps, 1 + eps]; the audit
//!   returns the smallest eps that works.
//! * Restricted condition number: the worst ratio of a largest singular
//!   value over a smallest singular value across supports of size k
//!   (unscaled; the ratio is scale invariant).
//! * Block audit: every window of consecutive rows drawn from the
//!   window policy must keep its restricted condition number under a
//!   bound.
//!
//! Everything here enumerates supports outright; it is a diagnostic for
//! desk-scale designs, not a certified bound.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::sparse_oracle::{binomial, for_each_subset_up_to};

/// Conditioning summary for one design matrix.
#[derive(Debug, Clone)]
pub struct ConditioningReport {
    /// Audited sparsity.
    pub k: usize,
    /// Smallest eps such that the restricted isometry sandwich holds.
    pub epsilon: f64,
    /// Restricted condition number (possibly +inf).
    pub kappa: f64,
    /// Support attaining the smallest singular value.
    pub worst_support_min: Vec<usize>,
    /// Support attaining the largest singular value.
    pub worst_support_max: Vec<usize>,
    /// Rows audited.
    pub n: usize,
}

fn check_enumerable(d: usize, k: usize, cap: u128) -> Result<()> {
    let required = binomial(d, k);
    if required > cap {
        return Err(Error::EnumerationTooLarge { required, cap });
    }
    Ok(())
}

/// Eigenvalues of a small symmetric PSD matrix. Diagonal matrices are
/// read off directly, which also keeps exactly-orthogonal designs exact.
fn psd_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let s = m.nrows();
    let diagonal_only = (0..s).all(|i| (0..s).all(|j| i == j || m[(i, j)] == 0.0));
    if diagonal_only {
        return (0..s).map(|i| m[(i, i)]).collect();
    }
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

fn gram(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let d = rows[0].len();
    let mut g = DMatrix::zeros(d, d);
    for x in rows {
        for i in 0..d {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..d {
                g[(i, j)] += xi * x[j];
            }
        }
    }
    g
}

/// Extreme singular values of X_S from a precomputed Gram of X.
/// Returned as (sigma_min, sigma_max); entries are clamped at zero
/// before the square root.
fn support_extremes(g: &DMatrix<f64>, support: &[usize]) -> (f64, f64) {
    let s = support.len();
    let mut sub = DMatrix::zeros(s, s);
    for (a, &i) in support.iter().enumerate() {
        for (b, &j) in support.iter().enumerate() {
            sub[(a, b)] = g[(i, j)];
        }
    }
    let eigs = psd_eigenvalues(&sub);
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for e in eigs {
        // PSD up to roundoff; clamp tiny negative eigenvalues.
        let e = e.max(0.0);
        lo = lo.min(e);
        hi = hi.max(e);
    }
    (lo.sqrt(), hi.sqrt())
}

/// Full conditioning report at sparsity k.
pub fn conditioning_report(rows: &[Vec<f64>], k: usize, cap: u128) -> Result<ConditioningReport> {
    assert!(!rows.is_empty());
    let d = rows[0].len();
    let k = k.min(d);
    check_enumerable(d, k, cap)?;
    let n = rows.len();
    let g = gram(rows);

    let mut min_sigma = f64::INFINITY;
    let mut max_sigma = 0.0f64;
    let mut worst_min = Vec::new();
    let mut worst_max = Vec::new();
    let mut visit = |support: &[usize]| {
        if support.len() != k {
            return;
        }
        let (lo, hi) = support_extremes(&g, support);
        if lo < min_sigma {
            min_sigma = lo;
            worst_min = support.to_vec();
        }
        if hi > max_sigma {
            max_sigma = hi;
            worst_max = support.to_vec();
        }
    };
    for_each_subset_up_to(d, k, &mut visit);

    let scale = (n as f64).sqrt();
    let epsilon = (1.0 - min_sigma / scale).max(max_sigma / scale - 1.0);
    let kappa = if min_sigma > 0.0 {
        max_sigma / min_sigma
    } else {
        f64::INFINITY
    };
    Ok(ConditioningReport {
        k,
        epsilon,
        kappa,
        worst_support_min: worst_min,
        worst_support_max: worst_max,
        n,
    })
}

/// Smallest eps such that X satisfies the (eps, k) isometry sandwich.
pub fn rip_epsilon(rows: &[Vec<f64>], k: usize, cap: u128) -> Result<f64> {
    conditioning_report(rows, k, cap).map(|r| r.epsilon)
}

/// Restricted condition number for sparsity k; +inf when some support
/// is rank deficient.
pub fn restricted_condition_number(rows: &[Vec<f64>], k: usize, cap: u128) -> Result<f64> {
    conditioning_report(rows, k, cap).map(|r| r.kappa)
}

/// Which windows the block audit checks.
#[derive(Debug, Clone)]
pub struct WindowPolicy {
    /// Minimum window length; dyadic multiples of it are audited at
    /// starts aligned to it.
    pub t0: usize,
    /// When set, all consecutive batches of this length (including a
    /// final partial batch) are audited too.
    pub batch_len: Option<usize>,
}

/// One audited window.
#[derive(Debug, Clone)]
pub struct WindowStat {
    /// 0-based start row.
    pub start: usize,
    pub len: usize,
    pub kappa: f64,
}

/// Result of the block audit.
#[derive(Debug, Clone)]
pub struct BbrcnpReport {
    pub k: usize,
    pub kappa_bound: f64,
    pub windows_checked: usize,
    /// Window with the largest condition number.
    pub worst: Option<WindowStat>,
    pub violations: Vec<WindowStat>,
}

impl BbrcnpReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Audit the restricted condition number of consecutive windows.
pub fn bbrcnp_audit(
    rows: &[Vec<f64>],
    k: usize,
    kappa_bound: f64,
    policy: &WindowPolicy,
    cap: u128,
) -> Result<BbrcnpReport> {
    assert!(!rows.is_empty());
    assert!(policy.t0 >= 1);
    let n = rows.len();
    let d = rows[0].len();
    let k = k.min(d);
    check_enumerable(d, k, cap)?;

    let mut windows: Vec<(usize, usize)> = Vec::new();
    let mut len = policy.t0;
    while len <= n {
        let mut start = 0;
        while start + len <= n {
            windows.push((start, len));
            start += policy.t0;
        }
        len *= 2;
    }
    if let Some(b) = policy.batch_len {
        let mut start = 0;
        while start < n {
            let len = b.min(n - start);
            windows.push((start, len));
            start += b;
        }
    }
    windows.sort_unstable();
    windows.dedup();

    let mut worst: Option<WindowStat> = None;
    let mut violations = Vec::new();
    let count = windows.len();
    for (start, len) in windows {
        let kappa = restricted_condition_number(&rows[start..start + len], k, cap)?;
        let stat = WindowStat { start, len, kappa };
        if worst.as_ref().map_or(true, |w| kappa > w.kappa) {
            worst = Some(stat.clone());
        }
        if kappa > kappa_bound {
            violations.push(stat);
        }
    }
    Ok(BbrcnpReport {
        k,
        kappa_bound,
        windows_checked: count,
        worst,
        violations,
    })
}
