//! The exhaustive best-subset comparator.
//!
//! Enumerates every support of size at most k, solves the restricted
//! least squares in closed form, and reports the minimizer. This is the
//! ground truth all regret numbers are measured against.
//!
//! Run with: `cargo run --example best_subset_oracle`

use poslr::config::ProblemConfig;
use poslr::datagen::gen_realizable;
use poslr::sparse_oracle::{best_subset, least_squares_on_support, DEFAULT_ENUM_CAP};

fn main() {
    let mut cfg = ProblemConfig::realizable(10, 3, 10, 200, 21);
    cfg.sigma = 0.2;
    let (stream, truth) = gen_realizable(&cfg);
    let rows: Vec<Vec<f64>> = stream.iter().map(|e| e.x.clone()).collect();
    let ys: Vec<f64> = stream.iter().map(|e| e.y).collect();

    println!("=== Exhaustive best-subset search (n={}, d={}) ===\n", rows.len(), cfg.d);
    let support: Vec<usize> = truth.w_star.support().iter().map(|&i| i + 1).collect();
    println!("hidden support (1-based): {support:?}");
    println!("noise sigma = {}\n", cfg.sigma);

    println!("{:>3} {:>12} {:>24}", "k", "mean loss", "support");
    for k in 1..=4 {
        let fit = best_subset(&rows, &ys, k, DEFAULT_ENUM_CAP).unwrap();
        let sup: Vec<usize> = fit.support.iter().map(|&i| i + 1).collect();
        println!("{:>3} {:>12.5} {:>24}", k, fit.mean_loss, format!("{sup:?}"));
    }

    let fit = best_subset(&rows, &ys, 3, DEFAULT_ENUM_CAP).unwrap();
    println!("\nrecovered weights vs truth on the chosen support:");
    for &i in &fit.support {
        println!(
            "  coordinate {:>2}: fitted {:+.4}, true {:+.4}",
            i + 1,
            fit.w[i],
            truth.w_star.dense()[i]
        );
    }

    // The empty support scores the raw label energy.
    let empty = least_squares_on_support(&rows, &ys, &[]);
    println!("\ng(empty) = mean y^2 = {:.5}", empty.mean_loss);
}
