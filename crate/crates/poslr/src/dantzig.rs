//! Masked Dantzig selection for the realizable setting.
//!
//! The selector minimizes ||w||_1 subject to a sup-norm cap on the
//! plug-in residual built from masked observations,
//!
//! ```text
//!   || (1/t) (b_hat - G w) ||_inf  <=  lambda(t)
//!   lambda(t) = C sqrt( d ln(t d / delta) / (t k0) ) (sigma + d/k0)
//! ```
//!
//! where G is the debiased Gram estimate. The program is linear after
//! the split w = u - v with u, v >= 0: the objective is sum(u) + sum(v)
//! and each residual bound contributes two inequality rows.
//!
//! The driver plays the zero vector through a warm-up prefix, then
//! re-solves the program at rounds that are powers of two, truncates the
//! solution to its top k coordinates by absolute value (ties toward the
//! smaller index), and replays that vector until the next solve.

use crate::config::ProblemConfig;
use crate::error::{Error, Result};
use crate::estimator::{sample_mask, EstimatorState};
use crate::rng::{Rng64, Stream};
use crate::simplex::{solve, Inequality, LinearProgram, LpStatus};
use crate::types::{squared_loss, LabeledExample, MaskedObservation, RoundRecord, SparseWeight};

/// Feasibility slack allowed on the reported solution.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// Solver diagnostics attached to a solution.
#[derive(Debug, Clone, Copy)]
pub struct SolverStats {
    pub pivots: usize,
    /// max(0, ||residual(w)||_inf - lambda).
    pub max_constraint_violation: f64,
}

/// Optimum of the selector program.
#[derive(Debug, Clone)]
pub struct DantzigSolution {
    pub w_hat: Vec<f64>,
    pub l1_value: f64,
    pub lambda: f64,
    pub stats: SolverStats,
}

/// The sup-norm threshold lambda(t); natural logarithm throughout.
pub fn lambda_threshold(t: usize, cfg: &ProblemConfig) -> f64 {
    debug_assert!(t >= 1);
    let (d, k0, t) = (cfg.d as f64, cfg.k0 as f64, t as f64);
    cfg.c_lambda * (d * (t * d / cfg.delta).ln() / (t * k0)).sqrt() * (cfg.sigma + d / k0)
}

/// Solve the selector program on the accumulated state.
pub fn solve_dantzig(state: &EstimatorState, lambda: f64) -> Result<DantzigSolution> {
    debug_assert!(state.rounds() >= 1);
    debug_assert!(lambda > 0.0);
    let d = state.dim();
    let t = state.rounds() as f64;
    let gram = state.debiased_gram()? / t;
    let target: Vec<f64> = state.b_hat().iter().map(|v| v / t).collect();

    // Variables (u, v), w = u - v. Row pair per coordinate i:
    //   +g_i (u - v) <= lambda + target_i      (residual >= -lambda)
    //   -g_i (u - v) <= lambda - target_i      (residual <= +lambda)
    let mut constraints = Vec::with_capacity(2 * d);
    for i in 0..d {
        let mut plus = vec![0.0; 2 * d];
        let mut minus = vec![0.0; 2 * d];
        for j in 0..d {
            let gij = gram[(i, j)];
            plus[j] = gij;
            plus[d + j] = -gij;
            minus[j] = -gij;
            minus[d + j] = gij;
        }
        constraints.push(Inequality {
            coeffs: plus,
            rhs: lambda + target[i],
        });
        constraints.push(Inequality {
            coeffs: minus,
            rhs: lambda - target[i],
        });
    }
    let lp = LinearProgram {
        objective: vec![1.0; 2 * d],
        constraints,
    };

    let max_pivots = 2000 + 50 * d * d;
    let sol = solve(&lp, max_pivots);
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::Infeasible { lambda }),
        LpStatus::Unbounded => {
            return Err(Error::NumericalFailure {
                reason: "LP reported unbounded".into(),
            })
        }
        LpStatus::IterationLimit => {
            return Err(Error::NumericalFailure {
                reason: format!("pivot cap {max_pivots} reached"),
            })
        }
    }

    let w_hat: Vec<f64> = (0..d).map(|j| sol.x[j] - sol.x[d + j]).collect();
    let residual = state.residual(&w_hat)?;
    let violation = (residual.amax() - lambda).max(0.0);
    if violation > FEASIBILITY_TOL {
        return Err(Error::NumericalFailure {
            reason: format!("constraint violation {violation:.3e} above tolerance"),
        });
    }
    let l1_value = w_hat.iter().map(|v| v.abs()).sum();
    Ok(DantzigSolution {
        w_hat,
        l1_value,
        lambda,
        stats: SolverStats {
            pivots: sol.pivots,
            max_constraint_violation: violation,
        },
    })
}

/// Keep the k entries largest in absolute value, ties toward the smaller
/// index, and zero the rest.
pub fn top_k(w_hat: &[f64], k: usize) -> SparseWeight {
    debug_assert!(k >= 1 && k <= w_hat.len());
    let mut order: Vec<usize> = (0..w_hat.len()).collect();
    order.sort_by(|&a, &b| {
        w_hat[b]
            .abs()
            .partial_cmp(&w_hat[a].abs())
            .unwrap()
            .then(a.cmp(&b))
    });
    let pairs: Vec<(usize, f64)> = order[..k].iter().map(|&i| (i, w_hat[i])).collect();
    SparseWeight::from_pairs(w_hat.len(), &pairs)
}

/// A program solve at a doubling round.
#[derive(Debug, Clone)]
pub struct SolveEvent {
    /// Round at which the solve happened (state holds t-1 rounds).
    pub t: usize,
    pub lambda: f64,
    /// l1 norm of the LP optimum; NaN when the solve failed.
    pub l1_value: f64,
    pub failed: bool,
    /// ||w_lp - w*||_2 when ground truth is known.
    pub lp_error: Option<f64>,
    /// ||top_k(w_lp) - w*||_2 when ground truth is known.
    pub play_error: Option<f64>,
}

/// Full trace of one selector run.
#[derive(Debug, Clone)]
pub struct DantzigTrace {
    pub rounds: Vec<RoundRecord>,
    /// Plays in force: (first round, weight vector); first entry is (1, 0).
    pub plays: Vec<(usize, SparseWeight)>,
    pub solves: Vec<SolveEvent>,
    pub warmup: usize,
}

impl DantzigTrace {
    /// The play in force at round t (1-based).
    pub fn play_at(&self, t: usize) -> &SparseWeight {
        let idx = match self.plays.binary_search_by_key(&t, |(start, _)| *start) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        &self.plays[idx].1
    }

    pub fn losses(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.loss).collect()
    }
}

/// Run the doubling-schedule selector over a stream.
///
/// Every round draws a query mask, observes the masked coordinates and
/// the label, and folds them into the moment estimates. The play is zero
/// through the warm-up, then refreshed at each power-of-two round from
/// the program solution truncated to k coordinates. A failed solve
/// (infeasible or non-converged) keeps the previous play and flags the
/// round in the trace.
pub fn run_dantzig_selector(
    stream: &[LabeledExample],
    cfg: &ProblemConfig,
    truth: Option<&SparseWeight>,
) -> Result<DantzigTrace> {
    assert!(!stream.is_empty());
    let d = cfg.d;
    let horizon = cfg.horizon.min(stream.len());
    let warmup = cfg.warmup_len();
    let mut mask_rng = Rng64::substream(cfg.seed, Stream::Masks);
    let mut state = EstimatorState::new(d, cfg.k0, cfg.mask_mode);

    let mut play = SparseWeight::zeros(d);
    let mut plays = vec![(1usize, play.clone())];
    let mut rounds = Vec::with_capacity(horizon);
    let mut solves = Vec::new();

    for t in 1..=horizon {
        if t > warmup && t.is_power_of_two() && state.rounds() >= 1 {
            let lambda = lambda_threshold(state.rounds(), cfg);
            match solve_dantzig(&state, lambda) {
                Ok(sol) => {
                    let truncated = top_k(&sol.w_hat, cfg.k);
                    solves.push(SolveEvent {
                        t,
                        lambda,
                        l1_value: sol.l1_value,
                        failed: false,
                        lp_error: truth.map(|w| {
                            SparseWeight::from_dense(sol.w_hat.clone()).l2_dist(w.dense())
                        }),
                        play_error: truth.map(|w| truncated.l2_dist(w.dense())),
                    });
                    if truncated != play {
                        play = truncated;
                        plays.push((t, play.clone()));
                    }
                }
                Err(Error::Infeasible { .. }) | Err(Error::NumericalFailure { .. }) => {
                    solves.push(SolveEvent {
                        t,
                        lambda,
                        l1_value: f64::NAN,
                        failed: true,
                        lp_error: None,
                        play_error: None,
                    });
                }
                Err(e) => return Err(e),
            }
        }

        let example = &stream[t - 1];
        let mask = sample_mask(&mut mask_rng, d, cfg.k0, cfg.mask_mode);
        let obs = MaskedObservation::from_example(t, example, mask.clone());
        let y_hat = play.dot(&example.x);
        let loss = squared_loss(example.y, y_hat);
        let union_query_size = {
            let mut u = mask.clone();
            u.extend_from_slice(play.support());
            u.sort_unstable();
            u.dedup();
            u.len()
        };
        rounds.push(RoundRecord {
            t,
            mask,
            y: example.y,
            y_hat,
            loss,
            union_query_size,
        });
        state.observe(&obs);
    }

    Ok(DantzigTrace {
        rounds,
        plays,
        solves,
        warmup,
    })
}
