//! Acceptance suite: one test per release criterion, each printing a
//! single PASS/FAIL line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.
//!
//! Every tolerance is pinned here, in code. Empirical criteria use
//! fixed seeds; the two slope checks stand in for the theoretical
//! regret guarantees of the two learners (O(log T) realizable,
//! O(T^(2/3)) agnostic), whose constants are not otherwise observable.

use nalgebra::{DMatrix, DVector};

use poslr::bexp::BexpState;
use poslr::conditioning::conditioning_report;
use poslr::config::{MaskMode, ProblemConfig};
use poslr::dantzig::{lambda_threshold, run_dantzig_selector, solve_dantzig, top_k};
use poslr::datagen::{gen_agnostic, gen_realizable};
use poslr::error::Error;
use poslr::estimator::{subsets_exact, unbiased_estimate, EstimatorState};
use poslr::greedy::run_online_greedy;
use poslr::harness::{compute_regret, median, slope_estimate};
use poslr::rng::{Rng64, Stream};
use poslr::sparse_oracle::least_squares_on_support;
use poslr::supermodular::{
    greedy_singleton_audit, restriction_audit, weak_supermodularity_audit, BatchSetFunction,
};
use poslr::types::{Checkpoint, LabeledExample, MaskedObservation};
use poslr::vaw::VawState;

const ENUM_CAP: u128 = 1 << 22;

fn report(num: u32, name: &str, pass: bool, details: &str) {
    println!(
        "criterion {num:02} ({name}): {} — {details}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {num:02} ({name}) failed: {details}");
}

#[test]
fn criterion_01_exhaustive_unbiasedness() {
    let x = [1.0, -0.5, 0.25, 1.0];
    let (d, k0) = (4usize, 2usize);
    let masks = subsets_exact(d, k0);
    assert_eq!(masks.len(), 6);

    let mut avg_vec = vec![0.0; d];
    let mut avg_gram = DMatrix::<f64>::zeros(d, d);
    for mask in &masks {
        let ex = LabeledExample {
            x: x.to_vec(),
            y: 0.0,
        };
        let obs = MaskedObservation::from_example(1, &ex, mask.clone());
        let x_hat = unbiased_estimate(&obs, d, k0);
        for i in 0..d {
            avg_vec[i] += x_hat[i] / masks.len() as f64;
        }
        let mut st = EstimatorState::new(d, k0, MaskMode::ExactSize);
        st.observe(&obs);
        avg_gram += st.debiased_gram().unwrap() / masks.len() as f64;
    }

    let mut worst: f64 = 0.0;
    for i in 0..d {
        worst = worst.max((avg_vec[i] - x[i]).abs());
        for j in 0..d {
            worst = worst.max((avg_gram[(i, j)] - x[i] * x[j]).abs());
        }
    }
    report(
        1,
        "exhaustive unbiasedness",
        worst <= 1e-12,
        &format!("max entrywise error {worst:.2e} (tol 1e-12)"),
    );
}

#[test]
fn criterion_02_truncation_error_factor() {
    let d = 20;
    let mut rng = Rng64::substream(42, Stream::Aux(2));
    let mut violations = 0usize;
    let mut worst_excess: f64 = f64::MIN;
    for trial in 0..10_000 {
        let k = 1 + trial % 5;
        let support = rng.subset_exact(d, k);
        let mut w_star = vec![0.0; d];
        for &i in &support {
            w_star[i] = rng.next_gauss();
        }
        let scale = 0.2 + 2.0 * rng.next_f64();
        let w_hat: Vec<f64> = w_star
            .iter()
            .map(|&v| v + scale * rng.next_gauss())
            .collect();
        let truncated = top_k(&w_hat, k);
        let lhs = truncated.l2_dist(&w_star);
        let rhs: f64 = w_hat
            .iter()
            .zip(&w_star)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let excess = lhs - (3f64.sqrt() * rhs + 1e-9);
        worst_excess = worst_excess.max(excess);
        if excess > 0.0 {
            violations += 1;
        }
    }
    report(
        2,
        "top-k truncation within sqrt(3)",
        violations == 0,
        &format!("0 of 10000 pairs may violate; got {violations} (worst excess {worst_excess:.2e})"),
    );
}

/// Gaussian audit batch shared by criteria 3-5.
fn audit_batch(seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut rng = Rng64::substream(seed, Stream::Aux(3));
    let rows: Vec<Vec<f64>> = (0..30)
        .map(|_| (0..6).map(|_| rng.next_gauss()).collect())
        .collect();
    let ys: Vec<f64> = (0..30).map(|_| rng.next_gauss()).collect();
    (rows, ys)
}

fn batch_alpha(rows: &[Vec<f64>], k: usize) -> f64 {
    let kappa = poslr::conditioning::restricted_condition_number(rows, k, ENUM_CAP).unwrap();
    assert!(kappa.is_finite());
    kappa * kappa
}

#[test]
fn criterion_03_weak_supermodularity_audit() {
    let mut total = 0usize;
    for seed in 0..20u64 {
        let (rows, ys) = audit_batch(3000 + seed);
        let alpha = batch_alpha(&rows, 3);
        let mut f = BatchSetFunction::new(&rows, &ys);
        total += weak_supermodularity_audit(&mut f, 3, alpha, ENUM_CAP)
            .unwrap()
            .len();
    }
    report(
        3,
        "weak supermodularity at measured kappa^2",
        total == 0,
        &format!("{total} violations across 20 Gaussian batches (tol 1e-8)"),
    );
}

#[test]
fn criterion_04_greedy_singleton_bound() {
    let mut total = 0usize;
    for seed in 0..20u64 {
        let (rows, ys) = audit_batch(3000 + seed);
        let alpha = batch_alpha(&rows, 3);
        let mut f = BatchSetFunction::new(&rows, &ys);
        total += greedy_singleton_audit(&mut f, 3, alpha, ENUM_CAP)
            .unwrap()
            .len();
    }
    report(
        4,
        "greedy singleton bound",
        total == 0,
        &format!("{total} violations across 20 batches, all |V| <= 3"),
    );
}

#[test]
fn criterion_05_restriction_audit() {
    let mut total = 0usize;
    let mut audits = 0usize;
    for seed in 0..20u64 {
        let (rows, ys) = audit_batch(3000 + seed);
        let alpha = batch_alpha(&rows, 3);
        let mut f = BatchSetFunction::new(&rows, &ys);
        let mut visit = |u: &[usize]| {
            if u.is_empty() || u.len() > 2 {
                return;
            }
            audits += 1;
            total += restriction_audit(&mut f, u, 3, alpha, ENUM_CAP)
                .unwrap()
                .len();
        };
        poslr::sparse_oracle::for_each_subset_up_to(6, 2, &mut visit);
    }
    report(
        5,
        "union-restriction audit",
        total == 0,
        &format!("{total} violations across {audits} restrictions g(U + .)"),
    );
}

/// Independent program oracle: enumerate basic solutions. Each optimum
/// vertex solves d equations drawn from active residual bounds (with a
/// sign) and zeroed coordinates; minimizing the l1 norm over all
/// feasible such solutions recovers the LP optimum.
fn dantzig_lp_oracle(gram_over_t: &DMatrix<f64>, target: &DVector<f64>, lambda: f64) -> Option<f64> {
    let d = target.len();
    let feas_tol = 1e-9;
    let check = |w: &DVector<f64>| -> bool {
        let r = target - gram_over_t * w;
        r.amax() <= lambda + feas_tol
    };
    let mut best: Option<f64> = None;

    for row_mask in 0..(1u32 << d) {
        let rows: Vec<usize> = (0..d).filter(|&i| row_mask >> i & 1 == 1).collect();
        let a = rows.len();
        let free_size = a;
        // Coordinates left free (not pinned to zero).
        for free_mask in 0..(1u32 << d) {
            let free: Vec<usize> = (0..d).filter(|&j| free_mask >> j & 1 == 1).collect();
            if free.len() != free_size {
                continue;
            }
            for signs in 0..(1u32 << a) {
                let mut sys = DMatrix::<f64>::zeros(a, a);
                let mut rhs = DVector::<f64>::zeros(a);
                for (r_i, &i) in rows.iter().enumerate() {
                    for (c_j, &j) in free.iter().enumerate() {
                        sys[(r_i, c_j)] = gram_over_t[(i, j)];
                    }
                    let sigma = if signs >> r_i & 1 == 1 { 1.0 } else { -1.0 };
                    rhs[r_i] = target[i] + sigma * lambda;
                }
                let w_free = if a == 0 {
                    DVector::<f64>::zeros(0)
                } else {
                    match sys.clone().lu().solve(&rhs) {
                        Some(sol) => {
                            // Reject garbage from near-singular systems.
                            if (&sys * &sol - &rhs).amax() > 1e-8 * (1.0 + rhs.amax()) {
                                continue;
                            }
                            sol
                        }
                        None => continue,
                    }
                };
                let mut w = DVector::<f64>::zeros(d);
                for (c_j, &j) in free.iter().enumerate() {
                    w[j] = w_free[c_j];
                }
                if check(&w) {
                    let l1: f64 = w.iter().map(|v| v.abs()).sum();
                    best = Some(best.map_or(l1, |b: f64| b.min(l1)));
                }
            }
        }
    }
    best
}

#[test]
fn criterion_06_dantzig_lp_vs_oracle() {
    let mut rng = Rng64::substream(606, Stream::Aux(6));
    let mut worst_gap: f64 = 0.0;
    let mut worst_violation: f64 = 0.0;
    let mut infeasible_agree = 0usize;
    let mut solved = 0usize;

    for trial in 0..50 {
        let d = 2 + trial % 5; // up to 6
        let st = if trial % 7 == 3 {
            // Rank-deficient plug-in moments with a residual component no
            // weight vector can cancel: often infeasible.
            let v: Vec<f64> = (0..d).map(|_| rng.rademacher() * rng.next_f64()).collect();
            let mut g = DMatrix::<f64>::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    g[(i, j)] = v[i] * v[j];
                }
            }
            let b = DVector::from_fn(d, |i, _| v[i] * 0.2 + rng.rademacher());
            EstimatorState::from_parts(d, d, MaskMode::ExactSize, 1, g, b)
        } else {
            let k0 = 2 + rng.next_below(d - 1); // in [2, d]
            let t = 1 + rng.next_below(6);
            let mut st = EstimatorState::new(d, k0, MaskMode::ExactSize);
            let mut mask_rng = Rng64::substream(700 + trial as u64, Stream::Masks);
            for round in 0..t {
                let x: Vec<f64> = (0..d).map(|_| rng.rademacher() * rng.next_f64()).collect();
                let y = 2.0 * rng.next_f64() - 1.0;
                let mask =
                    poslr::estimator::sample_mask(&mut mask_rng, d, k0, MaskMode::ExactSize);
                let ex = LabeledExample { x, y };
                st.observe(&MaskedObservation::from_example(round + 1, &ex, mask));
            }
            st
        };
        let lambda = 0.02 + 0.6 * rng.next_f64() * rng.next_f64();

        let tt = st.rounds() as f64;
        let gram_over_t = st.debiased_gram().unwrap() / tt;
        let target = st.b_hat() / tt;
        let oracle = dantzig_lp_oracle(&gram_over_t, &target, lambda);

        match (solve_dantzig(&st, lambda), oracle) {
            (Ok(sol), Some(best)) => {
                solved += 1;
                worst_gap = worst_gap.max((sol.l1_value - best).abs());
                worst_violation = worst_violation.max(sol.stats.max_constraint_violation);
            }
            (Err(Error::Infeasible { .. }), None) => {
                infeasible_agree += 1;
            }
            (got, want) => panic!(
                "trial {trial}: solver/oracle disagree: solver {:?}, oracle {:?}",
                got.map(|s| s.l1_value),
                want
            ),
        }
    }

    // Orthogonal-design closed form: diagonal Gram soft-thresholds.
    let mut worst_soft: f64 = 0.0;
    for trial in 0..20 {
        let d = 2 + trial % 5;
        let t = d; // one scaled basis row per coordinate
        let mut st = EstimatorState::new(d, d, MaskMode::ExactSize);
        let mut diag = vec![0.0; d];
        let mut b = vec![0.0; d];
        for i in 0..d {
            let scale = 0.5 + rng.next_f64();
            let y = 2.0 * rng.next_f64() - 1.0;
            let mut x = vec![0.0; d];
            x[i] = scale;
            st.accumulate(&x, y);
            diag[i] = scale * scale;
            b[i] = scale * y;
        }
        let lambda = 0.01 + 0.2 * rng.next_f64();
        let sol = solve_dantzig(&st, lambda).unwrap();
        for i in 0..d {
            let shrunk = (b[i].abs() - t as f64 * lambda).max(0.0) / diag[i];
            let expect = b[i].signum() * shrunk;
            worst_soft = worst_soft.max((sol.w_hat[i] - expect).abs());
        }
    }

    let pass =
        worst_gap <= 1e-6 && worst_violation <= 1e-8 && worst_soft <= 1e-8 && infeasible_agree > 0;
    report(
        6,
        "program optimum vs basic-solution oracle",
        pass,
        &format!(
            "{solved} solved within {worst_gap:.2e} of oracle (tol 1e-6), max violation {worst_violation:.2e} (tol 1e-8), {infeasible_agree} infeasible agreed, soft-threshold error {worst_soft:.2e} (tol 1e-8)"
        ),
    );
}

/// Shared runs of criteria 7 and 8: the realizable suite configuration
/// with the per-suite threshold constant frozen at 0.15.
fn realizable_suite_cfg(seed: u64) -> ProblemConfig {
    let mut cfg = ProblemConfig::realizable(20, 3, 10, 4096, seed);
    cfg.sigma = 0.1;
    cfg.c_lambda = 0.15;
    cfg
}

#[test]
fn criterion_07_realizable_regret_slope() {
    let mut slopes = Vec::new();
    let mut ratios = Vec::new();
    for seed in 0..10u64 {
        let cfg = realizable_suite_cfg(1000 + seed);
        let (stream, truth) = gen_realizable(&cfg);
        let trace = run_dantzig_selector(&stream, &cfg, Some(&truth.w_star)).unwrap();
        assert!(!trace.solves.iter().any(|s| s.failed));

        let errs: Vec<f64> = trace
            .solves
            .iter()
            .map(|s| s.lp_error.unwrap())
            .collect();
        for pair in errs.windows(2) {
            if pair[0] > 1e-12 {
                ratios.push(pair[1] / pair[0]);
            }
        }

        let warmup = cfg.warmup_len();
        let cps: Vec<usize> = poslr::harness::dyadic_checkpoints(cfg.horizon)
            .into_iter()
            .filter(|&t| t >= warmup)
            .collect();
        let ledger = compute_regret(&trace.losses(), &stream, cfg.k, &cps, ENUM_CAP).unwrap();
        let fit = slope_estimate(&ledger.checkpoints, warmup).unwrap();
        slopes.push(fit.slope);
    }
    let med_slope = median(&mut slopes);
    let med_ratio = median(&mut ratios);
    let pass = med_slope <= 0.35 && (0.5..=0.95).contains(&med_ratio);
    report(
        7,
        "realizable log-regret slope",
        pass,
        &format!(
            "median slope {med_slope:.3} (<= 0.35), median dyadic error ratio {med_ratio:.3} (in [0.5, 0.95], 10 seeds)"
        ),
    );
}

#[test]
fn criterion_08_comparator_gap_stays_constant() {
    let bound = 20.0 * 0.1 * 0.1 * 3.0 * (20f64).ln();
    let mut worst_gap: f64 = 0.0;
    let mut worst_growth: f64 = f64::MIN;
    for seed in 0..10u64 {
        let cfg = realizable_suite_cfg(1000 + seed);
        let (stream, truth) = gen_realizable(&cfg);
        let star_losses: Vec<f64> = stream
            .iter()
            .map(|ex| {
                let gap = ex.y - truth.w_star.dot(&ex.x);
                gap * gap
            })
            .collect();
        let t = cfg.horizon;
        let ledger =
            compute_regret(&star_losses, &stream, cfg.k, &[t / 2, t], ENUM_CAP).unwrap();
        let gap_half = ledger.checkpoints[0].regret;
        let gap_full = ledger.checkpoints[1].regret;
        worst_gap = worst_gap.max(gap_full).max(gap_half);
        worst_growth = worst_growth.max(gap_full - gap_half);
    }
    let pass = worst_gap <= bound && worst_growth <= bound;
    report(
        8,
        "comparator gap O(1) in horizon",
        pass,
        &format!(
            "worst gap {worst_gap:.3}, worst growth {worst_growth:.3} (bound {bound:.3}, all 10 seeds)"
        ),
    );
}

#[test]
fn criterion_09_vaw_batch_regret() {
    let dim = 4;
    let ridge = 1.0;
    let mut worst_ratio: f64 = 0.0;
    for &b_len in &[64usize, 256, 1024] {
        for seed in 0..20u64 {
            let mut rng = Rng64::substream(9000 + seed, Stream::Aux(9));
            let mut w_true = vec![0.0; dim];
            for w in &mut w_true {
                *w = (2.0 * rng.next_f64() - 1.0) / dim as f64;
            }
            let mut vaw = VawState::new(dim, ridge);
            let mut rows = Vec::with_capacity(b_len);
            let mut ys = Vec::with_capacity(b_len);
            let mut cum = 0.0;
            for _ in 0..b_len {
                let x: Vec<f64> = (0..dim).map(|_| rng.rademacher()).collect();
                let signal: f64 = x.iter().zip(&w_true).map(|(a, b)| a * b).sum();
                let y = (signal + 0.4 * rng.next_gauss()).clamp(-1.0, 1.0);
                let (y_hat, _) = vaw.predict(&x);
                cum += (y - y_hat) * (y - y_hat);
                vaw.update(&x, y);
                rows.push(x);
                ys.push(y);
            }
            let support: Vec<usize> = (0..dim).collect();
            let g_v = least_squares_on_support(&rows, &ys, &support).mean_loss;
            let ratio = (cum - b_len as f64 * g_v) / (dim as f64 * ((b_len + 1) as f64).ln());
            worst_ratio = worst_ratio.max(ratio);
        }
    }
    report(
        9,
        "forecaster batch regret",
        worst_ratio <= 10.0,
        &format!("worst normalized batch regret {worst_ratio:.3} (<= 10, 20 seeds x 3 batch lengths)"),
    );
}

#[test]
fn criterion_10_budgeted_experts() {
    // (a) exact unbiasedness by outcome enumeration at d=3, m=2.
    let mut st = BexpState::new(3, 2, 64);
    st.update(&[(0, 0.7), (2, 0.2)]).unwrap();
    st.update(&[(1, 0.05), (2, 0.8)]).unwrap();
    let losses = [0.3, 0.85, 0.5];
    let p = st.selection_probabilities();
    let mut expectation = [0.0f64; 3];
    for j in 0..3 {
        for extra in 0..3 {
            if extra == j {
                continue;
            }
            let prob = p[j] * 0.5;
            let est = st
                .loss_estimates(&[(j, losses[j]), (extra, losses[extra])])
                .unwrap();
            for i in 0..3 {
                expectation[i] += prob * est[i];
            }
        }
    }
    let worst_bias = (0..3)
        .map(|i| (expectation[i] - losses[i]).abs())
        .fold(0.0f64, f64::max);

    // (b) empirical regret on i.i.d. Bernoulli losses.
    let (d, m, horizon) = (16usize, 4usize, 10_000usize);
    let mut total_regret = 0.0;
    let seeds = 20u64;
    for seed in 0..seeds {
        let mut rng = Rng64::substream(10_000 + seed, Stream::Aux(10));
        let mut state = BexpState::new(d, m, horizon);
        let mut cum = vec![0.0f64; d];
        let mut alg = 0.0;
        for _ in 0..horizon {
            let (j, u) = state.select(&mut rng);
            let losses: Vec<f64> = (0..d)
                .map(|i| {
                    let mean = if i == 5 { 0.3 } else { 0.5 };
                    if rng.next_f64() < mean {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            for (c, &l) in cum.iter_mut().zip(&losses) {
                *c += l;
            }
            alg += losses[j];
            let observed: Vec<(usize, f64)> = u.iter().map(|&i| (i, losses[i])).collect();
            state.update(&observed).unwrap();
        }
        let best = cum.iter().cloned().fold(f64::INFINITY, f64::min);
        total_regret += alg - best;
    }
    let mean_regret = total_regret / seeds as f64;
    let budget = 3.0 * (d as f64 * (d as f64).ln() / m as f64 * horizon as f64).sqrt();

    let pass = worst_bias <= 1e-12 && mean_regret <= budget;
    report(
        10,
        "budgeted experts",
        pass,
        &format!(
            "enumeration bias {worst_bias:.2e} (tol 1e-12), mean regret {mean_regret:.1} (<= {budget:.1}, 20 seeds)"
        ),
    );
}

#[test]
fn criterion_11_agnostic_regret_slope() {
    let horizon = 32_000usize;
    let cps = vec![horizon / 8, horizon / 4, horizon / 2, horizon];
    let mut regret_by_cp: Vec<Vec<f64>> = vec![Vec::new(); cps.len()];
    let mut per_seed_slopes = Vec::new();
    for seed in 0..10u64 {
        let mut cfg = ProblemConfig::agnostic(16, 2, 8, horizon, 2000 + seed);
        cfg.kappa = 1.0;
        let stream = gen_agnostic(&cfg);
        let trace = run_online_greedy(&stream, &cfg).unwrap();
        assert_eq!(trace.schedule.batch_len, 20);
        let ledger = compute_regret(&trace.losses(), &stream, cfg.k, &cps, ENUM_CAP).unwrap();
        for (slot, c) in regret_by_cp.iter_mut().zip(&ledger.checkpoints) {
            slot.push(c.regret);
        }
        if let Ok(fit) = slope_estimate(&ledger.checkpoints, horizon / 8) {
            per_seed_slopes.push(fit.slope);
        }
    }

    // Aggregate by the median regret curve across seeds.
    let med_curve: Vec<Checkpoint> = cps
        .iter()
        .zip(&mut regret_by_cp)
        .map(|(&t, regs)| Checkpoint {
            t,
            cum_loss: 0.0,
            comparator_loss: 0.0,
            regret: median(regs),
        })
        .collect();
    let rates: Vec<f64> = med_curve.iter().map(|c| c.regret / c.t as f64).collect();
    let strictly_decreasing = rates.windows(2).all(|w| w[1] < w[0]);
    let curve_slope = slope_estimate(&med_curve, 1).map(|f| f.slope);
    let med_seed_slope = median(&mut per_seed_slopes);

    let pass = matches!(curve_slope, Ok(s) if s <= 0.85)
        && med_seed_slope <= 0.85
        && strictly_decreasing;
    report(
        11,
        "agnostic sublinear regret",
        pass,
        &format!(
            "median-curve slope {curve_slope:?} and per-seed median {med_seed_slope:.3} (<= 0.85), median regret/t decreasing from T/8: {strictly_decreasing} (10 seeds)"
        ),
    );
}

#[test]
fn criterion_12_conditioning_sanity() {
    // Exactly orthogonal designs: signed permutations scaled by sqrt(n).
    let mut exact_ok = true;
    for (n, k) in [(2usize, 1usize), (3, 1), (3, 2), (5, 2), (4, 3)] {
        let scale = (n as f64).sqrt();
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            let col = (i + 1) % n;
            rows[i][col] = if i % 2 == 0 { scale } else { -scale };
        }
        let rep = conditioning_report(&rows, k, ENUM_CAP).unwrap();
        exact_ok &= rep.epsilon == 0.0 && rep.kappa == 1.0;
    }

    // diag(2, 1) at k = 1.
    let rep = conditioning_report(&[vec![2.0, 0.0], vec![0.0, 1.0]], 1, ENUM_CAP).unwrap();
    let eps_err = (rep.epsilon - (2f64.sqrt() - 1.0)).abs();
    let kappa_err = (rep.kappa - 2.0).abs();

    // kappa <= (1+eps)/(1-eps) on random designs.
    let mut rng = Rng64::substream(1212, Stream::Aux(12));
    let mut bound_ok = 0usize;
    let mut checked = 0usize;
    for _ in 0..20 {
        let n = 40 + rng.next_below(30);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..5).map(|_| rng.next_gauss()).collect())
            .collect();
        let r = conditioning_report(&rows, 2, ENUM_CAP).unwrap();
        if r.epsilon < 1.0 {
            checked += 1;
            if r.kappa <= (1.0 + r.epsilon) / (1.0 - r.epsilon) + 1e-9 {
                bound_ok += 1;
            }
        }
    }

    let pass = exact_ok && eps_err <= 1e-12 && kappa_err <= 1e-12 && bound_ok == checked;
    report(
        12,
        "conditioning audit sanity",
        pass,
        &format!(
            "orthogonal designs exact: {exact_ok}; diag(2,1) errors eps {eps_err:.2e} kappa {kappa_err:.2e} (tol 1e-12); kappa bound held {bound_ok}/{checked}"
        ),
    );
}

#[test]
fn criterion_13_determinism() {
    use poslr::harness::{emit_result, execute, Algorithm, CheckpointPolicy, ExperimentSpec};
    let tmp = tempfile::tempdir().unwrap();

    let mut identical = true;
    let mut compared = 0usize;
    for (name, algorithm, mode) in [
        ("dantzig", Algorithm::Dantzig, poslr::Mode::Realizable),
        ("greedy", Algorithm::Greedy, poslr::Mode::Agnostic),
    ] {
        let mut dirs = Vec::new();
        for run in 0..2 {
            let spec = ExperimentSpec {
                mode,
                algorithm,
                d: 8,
                k: 2,
                k0: 4,
                horizon: 256,
                sigma: 0.1,
                delta: 0.05,
                c_lambda: 0.15,
                warmup: None,
                batch_len: None,
                k1: None,
                vaw_reg: 1.0,
                kappa: 2.0,
                flip_frac: 0.1,
                mask_mode: MaskMode::ExactSize,
                seed: 77,
                checkpoints: CheckpointPolicy::Named("dyadic".into()),
                out_dir: tmp.path().join(format!("{name}_{run}")),
            };
            let result = execute(&spec).unwrap();
            emit_result(&result).unwrap();
            dirs.push(spec.out_dir);
        }
        let mut names: Vec<String> = std::fs::read_dir(&dirs[0])
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert!(names.contains(&"trace.csv".to_string()));
        for file in names {
            let a = std::fs::read(dirs[0].join(&file)).unwrap();
            let b = std::fs::read(dirs[1].join(&file)).unwrap();
            compared += 1;
            identical &= a == b;
        }
    }
    report(
        13,
        "bitwise determinism",
        identical && compared >= 10,
        &format!("{compared} output files compared byte for byte across re-runs"),
    );
}

#[test]
fn lambda_threshold_reference_values() {
    // Companion check for the slope suite: the threshold schedule is the
    // documented formula at the suite's dimensions.
    let cfg = realizable_suite_cfg(0);
    let t = 255;
    let expect = 0.15
        * (20.0 * ((t as f64) * 20.0 / 0.05).ln() / (t as f64 * 10.0)).sqrt()
        * (0.1 + 2.0);
    assert!((lambda_threshold(t, &cfg) - expect).abs() < 1e-12);
}
