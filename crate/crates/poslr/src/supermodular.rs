//! The per-batch least-squares set function and its weak-supermodularity
//! audits.
//!
//! For a batch of B examples, g(S) is the best mean squared loss
//! achievable by a weight vector supported on S. The function is
//! monotone nonincreasing, and when the batch design has restricted
//! condition number kappa at sparsity k it has approximately decreasing
//! marginal gains with factor alpha = kappa^2:
//!
//! ```text
//!   g(S) - g(T) <= alpha * sum_{i in T \ S} [g(S) - g(S + i)]
//! ```
//!
//! for all S subset of T with |T| <= k. The audits below check both
//! conditions by brute force, including on restrictions S -> g(U + S)
//! and on the greedy single-coordinate bound.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::sparse_oracle::{binomial, for_each_subset_up_to, GramForm};

/// Memoized evaluator of the batch set function.
#[derive(Debug, Clone)]
pub struct BatchSetFunction {
    gram: GramForm,
    memo: HashMap<Vec<usize>, f64>,
}

impl BatchSetFunction {
    pub fn new(rows: &[Vec<f64>], ys: &[f64]) -> Self {
        BatchSetFunction {
            gram: GramForm::new(rows, ys),
            memo: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    pub fn batch_len(&self) -> usize {
        self.gram.n
    }

    /// g(S): best mean squared loss on support S. `support` need not be
    /// sorted; the memo key is canonical.
    pub fn eval(&mut self, support: &[usize]) -> f64 {
        let mut key = support.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.gram.fit_support(&key).mean_loss;
        self.memo.insert(key, v);
        v
    }
}

/// One violated audit inequality.
#[derive(Debug, Clone)]
pub struct AuditViolation {
    pub small: Vec<usize>,
    pub large: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
    /// Which condition failed: monotonicity or marginal gains.
    pub condition: AuditCondition,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditCondition {
    Monotonicity,
    MarginalGains,
}

/// Absolute tolerance on each audited inequality; all quantities are
/// O(1) under the boundedness assumptions.
pub const AUDIT_TOL: f64 = 1e-8;

/// Check both weak-supermodularity conditions for every pair
/// S subset of T over the ground set, |T| <= k, against a closure g.
pub fn audit_set_function(
    g: &mut dyn FnMut(&[usize]) -> f64,
    ground: &[usize],
    k: usize,
    alpha: f64,
    cap: u128,
) -> Result<Vec<AuditViolation>> {
    let d = ground.len();
    let k = k.min(d);
    // Pairs (S, T): sum over |T| <= k of 2^|T|.
    let mut required: u128 = 0;
    for size in 0..=k {
        required = required.saturating_add(binomial(d, size) << size);
    }
    if required > cap {
        return Err(Error::EnumerationTooLarge { required, cap });
    }

    let mut violations = Vec::new();
    for_each_subset_up_to(d, k, |t_local| {
        let t_set: Vec<usize> = t_local.iter().map(|&i| ground[i]).collect();
        let g_t = g(&t_set);
        // All subsets of T via bitmask.
        let m = t_set.len();
        for bits in 0..(1u32 << m) {
            let s_set: Vec<usize> = (0..m)
                .filter(|&i| bits >> i & 1 == 1)
                .map(|i| t_set[i])
                .collect();
            if s_set.len() == m {
                continue;
            }
            let g_s = g(&s_set);
            if g_t > g_s + AUDIT_TOL {
                violations.push(AuditViolation {
                    small: s_set.clone(),
                    large: t_set.clone(),
                    lhs: g_t,
                    rhs: g_s,
                    condition: AuditCondition::Monotonicity,
                });
            }
            let mut gain_sum = 0.0;
            for &i in t_set.iter().filter(|i| !s_set.contains(i)) {
                let mut s_plus = s_set.clone();
                s_plus.push(i);
                gain_sum += g_s - g(&s_plus);
            }
            let lhs = g_s - g_t;
            let rhs = alpha * gain_sum;
            if lhs > rhs + AUDIT_TOL {
                violations.push(AuditViolation {
                    small: s_set,
                    large: t_set.clone(),
                    lhs,
                    rhs,
                    condition: AuditCondition::MarginalGains,
                });
            }
        }
    });
    Ok(violations)
}

/// Audit the batch set function itself at sparsity k.
pub fn weak_supermodularity_audit(
    f: &mut BatchSetFunction,
    k: usize,
    alpha: f64,
    cap: u128,
) -> Result<Vec<AuditViolation>> {
    let ground: Vec<usize> = (0..f.dim()).collect();
    audit_set_function(&mut |s| f.eval(s), &ground, k, alpha, cap)
}

/// Audit the restriction S -> g(U + S) at sparsity k - |U| over the
/// ground set excluding U.
pub fn restriction_audit(
    f: &mut BatchSetFunction,
    u: &[usize],
    k: usize,
    alpha: f64,
    cap: u128,
) -> Result<Vec<AuditViolation>> {
    assert!(u.len() < k);
    let ground: Vec<usize> = (0..f.dim()).filter(|i| !u.contains(i)).collect();
    let mut g = |s: &[usize]| {
        let mut full = u.to_vec();
        full.extend_from_slice(s);
        f.eval(&full)
    };
    audit_set_function(&mut g, &ground, k - u.len(), alpha, cap)
}

/// argmin over single coordinates of g({j}); ties toward the smaller
/// index.
pub fn greedy_best_singleton(f: &mut BatchSetFunction, candidates: &[usize]) -> usize {
    assert!(!candidates.is_empty());
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    let mut best = sorted[0];
    let mut best_val = f.eval(&[best]);
    for &j in &sorted[1..] {
        let v = f.eval(&[j]);
        if v < best_val {
            best = j;
            best_val = v;
        }
    }
    best
}

/// Check the greedy single-step bound for every candidate comparator V
/// with |V| <= k:
///
/// ```text
///   g({j*}) - g(V) <= (1 - 1/(alpha |V|)) [g(empty) - g(V)]
/// ```
pub fn greedy_singleton_audit(
    f: &mut BatchSetFunction,
    k: usize,
    alpha: f64,
    cap: u128,
) -> Result<Vec<AuditViolation>> {
    let d = f.dim();
    let required = (0..=k.min(d)).map(|s| binomial(d, s)).sum::<u128>();
    if required > cap {
        return Err(Error::EnumerationTooLarge { required, cap });
    }
    let candidates: Vec<usize> = (0..d).collect();
    let j_star = greedy_best_singleton(f, &candidates);
    let g_star = f.eval(&[j_star]);
    let g_empty = f.eval(&[]);

    let mut violations = Vec::new();
    for_each_subset_up_to(d, k, |v| {
        if v.is_empty() {
            return;
        }
        let g_v = f.eval(v);
        let lhs = g_star - g_v;
        let rhs = (1.0 - 1.0 / (alpha * v.len() as f64)) * (g_empty - g_v);
        if lhs > rhs + AUDIT_TOL {
            violations.push(AuditViolation {
                small: vec![j_star],
                large: v.to_vec(),
                lhs,
                rhs,
                condition: AuditCondition::MarginalGains,
            });
        }
    });
    Ok(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditioning::restricted_condition_number;
    use crate::rng::Rng64;

    fn toy_batch() -> BatchSetFunction {
        // rows (1,0) y=1 and (0,1) y=-1.
        BatchSetFunction::new(&[vec![1.0, 0.0], vec![0.0, 1.0]], &[1.0, -1.0])
    }

    #[test]
    fn hand_values_on_toy_batch() {
        let mut g = toy_batch();
        assert!((g.eval(&[]) - 1.0).abs() < 1e-12);
        assert!((g.eval(&[0]) - 0.5).abs() < 1e-12);
        assert!((g.eval(&[1]) - 0.5).abs() < 1e-12);
        assert!(g.eval(&[0, 1]) < 1e-12);
    }

    #[test]
    fn memo_matches_recomputation() {
        let mut rng = Rng64::new(31);
        let rows: Vec<Vec<f64>> = (0..20)
            .map(|_| (0..5).map(|_| rng.next_gauss()).collect())
            .collect();
        let ys: Vec<f64> = (0..20).map(|_| rng.next_gauss()).collect();
        let mut f = BatchSetFunction::new(&rows, &ys);
        let first = f.eval(&[1, 3]);
        let unsorted = f.eval(&[3, 1]);
        assert_eq!(first, unsorted);
        let fresh = BatchSetFunction::new(&rows, &ys).eval(&[1, 3]);
        assert!((first - fresh).abs() <= 1e-10);
    }

    #[test]
    fn monotone_on_chains() {
        let mut rng = Rng64::new(33);
        let rows: Vec<Vec<f64>> = (0..15)
            .map(|_| (0..6).map(|_| rng.next_gauss()).collect())
            .collect();
        let ys: Vec<f64> = (0..15).map(|_| rng.next_gauss()).collect();
        let mut f = BatchSetFunction::new(&rows, &ys);
        let mut chain: Vec<usize> = Vec::new();
        let mut prev = f.eval(&chain);
        for j in [2usize, 0, 5, 3] {
            chain.push(j);
            let v = f.eval(&chain);
            assert!(v <= prev + 1e-10);
            prev = v;
        }
    }

    #[test]
    fn gaussian_batch_passes_at_measured_kappa_squared() {
        let mut rng = Rng64::new(35);
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..6).map(|_| rng.next_gauss()).collect())
            .collect();
        let ys: Vec<f64> = (0..30).map(|_| rng.next_gauss()).collect();
        let kappa = restricted_condition_number(&rows, 3, 1 << 20).unwrap();
        let mut f = BatchSetFunction::new(&rows, &ys);
        let violations = weak_supermodularity_audit(&mut f, 3, kappa * kappa, 1 << 20).unwrap();
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn tiny_alpha_is_detected() {
        let mut rng = Rng64::new(35);
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..6).map(|_| rng.next_gauss()).collect())
            .collect();
        let ys: Vec<f64> = (0..30).map(|_| rng.next_gauss()).collect();
        let mut f = BatchSetFunction::new(&rows, &ys);
        let violations = weak_supermodularity_audit(&mut f, 3, 0.01, 1 << 20).unwrap();
        assert!(!violations.is_empty());
        assert!(violations
            .iter()
            .all(|v| v.condition == AuditCondition::MarginalGains));
    }

    #[test]
    fn orthonormal_design_passes_at_alpha_one() {
        // Marginal gains are exactly additive for orthogonal columns.
        let rows = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let ys = vec![0.9, -0.4, 0.2];
        let mut f = BatchSetFunction::new(&rows, &ys);
        let violations = weak_supermodularity_audit(&mut f, 3, 1.0, 1 << 20).unwrap();
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn greedy_singleton_tie_rule_and_bound() {
        let mut g = toy_batch();
        let j = greedy_best_singleton(&mut g, &[0, 1]);
        assert_eq!(j, 0);
        // Equality case of the greedy bound with alpha = 1, V = {0,1}:
        // g({j*}) - g(V) = 0.5 = (1 - 1/2)(g(empty) - g(V)).
        let lhs = g.eval(&[0]) - g.eval(&[0, 1]);
        let rhs = (1.0 - 0.5) * (g.eval(&[]) - g.eval(&[0, 1]));
        assert!((lhs - rhs).abs() < 1e-12);
        let violations = greedy_singleton_audit(&mut g, 2, 1.0, 1 << 20).unwrap();
        assert!(violations.is_empty(), "{violations:?}");
    }

    #[test]
    fn singleton_dimension_returns_only_candidate() {
        let mut f = BatchSetFunction::new(&[vec![1.0]], &[0.5]);
        assert_eq!(greedy_best_singleton(&mut f, &[0]), 0);
    }

    #[test]
    fn restrictions_inherit_weak_supermodularity() {
        let mut rng = Rng64::new(37);
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|_| (0..6).map(|_| rng.next_gauss()).collect())
            .collect();
        let ys: Vec<f64> = (0..30).map(|_| rng.next_gauss()).collect();
        let kappa = restricted_condition_number(&rows, 3, 1 << 20).unwrap();
        let alpha = kappa * kappa;
        let mut f = BatchSetFunction::new(&rows, &ys);
        for u in [vec![0], vec![4], vec![1, 2], vec![0, 5]] {
            let violations = restriction_audit(&mut f, &u, 3, alpha, 1 << 20).unwrap();
            assert!(violations.is_empty(), "U = {u:?}: {violations:?}");
        }
    }

    #[test]
    fn enumeration_cap_enforced() {
        let rows = vec![vec![0.0; 25]];
        let ys = vec![0.0];
        let mut f = BatchSetFunction::new(&rows, &ys);
        match weak_supermodularity_audit(&mut f, 12, 1.0, 1000) {
            Err(Error::EnumerationTooLarge { .. }) => {}
            other => panic!("expected EnumerationTooLarge, got {other:?}"),
        }
    }
}
