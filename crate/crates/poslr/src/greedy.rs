//! Online greedy subset learner for the agnostic setting.
//!
//! The horizon is cut into mini-batches. A stack of k1 budgeted-experts
//! instances runs over the d coordinates: at each batch boundary,
//! instance i names a followed coordinate j_i and an observation set
//! U_i. The nested supports V_0 = {} and V_i = V_{i-1} + {j_i} mimic a
//! greedy forward-selection chain; the union of the U_i is the query
//! set for every round of the batch, within the k0 budget. Inside the
//! batch a fresh forecaster predicts on the deepest support V_{k1}. At
//! batch end, instance i receives the loss g(V_{i-1} + {j}) for each of
//! its observed coordinates j, where g is the batch's least-squares set
//! function evaluated on queried coordinates only (every candidate set
//! lies inside the query union, so no unobserved feature is needed).

use crate::bexp::BexpState;
use crate::config::ProblemConfig;
use crate::error::Result;
use crate::rng::{Rng64, Stream};
use crate::supermodular::BatchSetFunction;
use crate::types::{squared_loss, LabeledExample, RoundRecord};
use crate::vaw::VawState;

/// Resolved schedule of the greedy learner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub batch_len: usize,
    pub k1: usize,
    /// Per-instance observation budgets; sums to k0.
    pub budgets: Vec<usize>,
}

/// Horizon-based schedule: `batch_len = round((k0 T / (kappa^2 d k))^(1/3))`
/// and `k1 = round(kappa^2 k ln(T) / 3)`, both clamped to their valid
/// ranges; the k0 budget is split as evenly as possible across the k1
/// instances, remainder to the front.
pub fn schedule_params(cfg: &ProblemConfig, kappa: f64) -> Schedule {
    let t = cfg.horizon as f64;
    let kappa2 = kappa * kappa;
    let raw_b = (cfg.k0 as f64 * t / (kappa2 * cfg.d as f64 * cfg.k as f64)).powf(1.0 / 3.0);
    let batch_len = (raw_b.round() as usize).clamp(1, cfg.horizon);
    let raw_k1 = (kappa2 * cfg.k as f64 * t.ln() / 3.0).round() as usize;
    let k1 = raw_k1.clamp(1, cfg.k0);
    Schedule {
        batch_len,
        k1,
        budgets: split_budget(cfg.k0, k1),
    }
}

/// floor(k0/k1) per instance, remainder +1 to the first k0 mod k1.
pub fn split_budget(k0: usize, k1: usize) -> Vec<usize> {
    let base = k0 / k1;
    let extra = k0 % k1;
    (0..k1).map(|i| base + usize::from(i < extra)).collect()
}

/// Resolve the schedule from explicit config values where present.
pub fn resolve_schedule(cfg: &ProblemConfig) -> Schedule {
    let auto = schedule_params(cfg, cfg.kappa);
    let batch_len = cfg.batch_len.unwrap_or(auto.batch_len).clamp(1, cfg.horizon);
    let k1 = cfg.k1.unwrap_or(auto.k1).clamp(1, cfg.k0);
    Schedule {
        batch_len,
        k1,
        budgets: split_budget(cfg.k0, k1),
    }
}

/// Everything recorded at one batch boundary.
#[derive(Debug, Clone)]
pub struct BatchEvent {
    /// Batch index, 1-based.
    pub batch: usize,
    /// First round of the batch, 1-based.
    pub start: usize,
    pub len: usize,
    /// Followed coordinate per instance.
    pub chosen: Vec<usize>,
    /// Observation set per instance.
    pub query_sets: Vec<Vec<usize>>,
    /// Deepest nested support V_{k1} (sorted, deduped).
    pub support: Vec<usize>,
    /// Query union S_t for the whole batch (sorted).
    pub query_union: Vec<usize>,
    /// Losses fed back, per instance: (coordinate, g value).
    pub fed_losses: Vec<Vec<(usize, f64)>>,
}

/// Full trace of one greedy run.
#[derive(Debug, Clone)]
pub struct GreedyTrace {
    pub rounds: Vec<RoundRecord>,
    pub batches: Vec<BatchEvent>,
    pub schedule: Schedule,
    /// Feedback values clipped into [0,1] (nonzero only when labels are
    /// unbounded, i.e. realizable-mode streams).
    pub clip_warnings: usize,
}

impl GreedyTrace {
    pub fn losses(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.loss).collect()
    }
}

/// Run the batched greedy learner over a stream.
pub fn run_online_greedy(stream: &[LabeledExample], cfg: &ProblemConfig) -> Result<GreedyTrace> {
    assert!(!stream.is_empty());
    let d = cfg.d;
    let horizon = cfg.horizon.min(stream.len());
    let schedule = resolve_schedule(cfg);
    let num_batches = horizon.div_ceil(schedule.batch_len);

    let mut expert_rng = Rng64::substream(cfg.seed, Stream::Experts);
    let mut instances: Vec<BexpState> = schedule
        .budgets
        .iter()
        .map(|&m| BexpState::new(d, m, num_batches))
        .collect();

    let mut rounds = Vec::with_capacity(horizon);
    let mut batches = Vec::with_capacity(num_batches);
    let mut clip_warnings = 0usize;

    let mut start = 0usize;
    let mut batch_idx = 0usize;
    while start < horizon {
        batch_idx += 1;
        let len = schedule.batch_len.min(horizon - start);

        // Batch-boundary selections.
        let mut chosen = Vec::with_capacity(schedule.k1);
        let mut query_sets = Vec::with_capacity(schedule.k1);
        for inst in &instances {
            let (j, u) = inst.select(&mut expert_rng);
            chosen.push(j);
            query_sets.push(u);
        }
        let mut support: Vec<usize> = chosen.clone();
        support.sort_unstable();
        support.dedup();
        let mut query_union: Vec<usize> = query_sets.iter().flatten().copied().collect();
        query_union.sort_unstable();
        query_union.dedup();
        debug_assert!(query_union.len() <= cfg.k0);
        debug_assert!(support.iter().all(|i| query_union.contains(i)));

        // Within-batch prediction on the deepest support.
        let mut vaw = VawState::new(support.len(), cfg.vaw_reg);
        for offset in 0..len {
            let t = start + offset + 1;
            let example = &stream[start + offset];
            let x_v: Vec<f64> = support.iter().map(|&i| example.x[i]).collect();
            let (y_hat, _) = vaw.predict(&x_v);
            let loss = squared_loss(example.y, y_hat);
            vaw.update(&x_v, example.y);
            rounds.push(RoundRecord {
                t,
                mask: query_union.clone(),
                y: example.y,
                y_hat,
                loss,
                // The play lives on V which sits inside the query union.
                union_query_size: query_union.len(),
            });
        }

        // Batch-end feedback: g over observed coordinates only.
        let batch_rows: Vec<Vec<f64>> = stream[start..start + len]
            .iter()
            .map(|ex| {
                let mut masked = vec![0.0; d];
                for &i in &query_union {
                    masked[i] = ex.x[i];
                }
                masked
            })
            .collect();
        let batch_ys: Vec<f64> = stream[start..start + len].iter().map(|ex| ex.y).collect();
        let mut g = BatchSetFunction::new(&batch_rows, &batch_ys);

        let mut fed_losses = Vec::with_capacity(schedule.k1);
        let mut nested: Vec<usize> = Vec::new();
        for (i, inst) in instances.iter_mut().enumerate() {
            let mut fed = Vec::with_capacity(query_sets[i].len());
            for &j in &query_sets[i] {
                let mut candidate = nested.clone();
                candidate.push(j);
                let mut value = g.eval(&candidate);
                if !(0.0..=1.0).contains(&value) {
                    value = value.clamp(0.0, 1.0);
                    clip_warnings += 1;
                }
                fed.push((j, value));
            }
            inst.update(&fed)?;
            fed_losses.push(fed);
            if !nested.contains(&chosen[i]) {
                nested.push(chosen[i]);
            }
        }

        batches.push(BatchEvent {
            batch: batch_idx,
            start: start + 1,
            len,
            chosen,
            query_sets,
            support,
            query_union,
            fed_losses,
        });
        start += len;
    }

    Ok(GreedyTrace {
        rounds,
        batches,
        schedule,
        clip_warnings,
    })
}
