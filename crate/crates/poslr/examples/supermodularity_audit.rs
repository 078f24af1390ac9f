//! Weak supermodularity of the least-squares set function.
//!
//! For a batch of examples, g(S) is the best mean squared loss on
//! support S. When the design's restricted condition number at sparsity
//! k is kappa, g has approximately decreasing marginal gains with
//! factor kappa^2. The audit brute-forces every S inside T pair; a
//! deliberately small factor shows what a detected violation looks
//! like.
//!
//! Run with: `cargo run --example supermodularity_audit`

use poslr::conditioning::restricted_condition_number;
use poslr::rng::{Rng64, Stream};
use poslr::sparse_oracle::DEFAULT_ENUM_CAP;
use poslr::supermodular::{
    greedy_singleton_audit, restriction_audit, weak_supermodularity_audit, BatchSetFunction,
};

fn main() {
    let (b_len, d, k) = (30usize, 6usize, 3usize);
    let mut rng = Rng64::substream(11, Stream::Aux(0));
    let rows: Vec<Vec<f64>> = (0..b_len)
        .map(|_| (0..d).map(|_| rng.next_gauss()).collect())
        .collect();
    let ys: Vec<f64> = (0..b_len).map(|_| rng.next_gauss()).collect();

    println!("=== Weak supermodularity audit (B={b_len}, d={d}, k={k}) ===\n");

    let kappa = restricted_condition_number(&rows, k, DEFAULT_ENUM_CAP).unwrap();
    let alpha = kappa * kappa;
    println!("measured restricted condition number kappa = {kappa:.4}");
    println!("audit factor alpha = kappa^2 = {alpha:.4}\n");

    let mut g = BatchSetFunction::new(&rows, &ys);
    println!("g(empty)      = {:.5}", g.eval(&[]));
    println!("g({{1}})        = {:.5}", g.eval(&[0]));
    println!("g({{1,2}})      = {:.5}", g.eval(&[0, 1]));
    println!("g({{1,2,3}})    = {:.5}\n", g.eval(&[0, 1, 2]));

    let violations = weak_supermodularity_audit(&mut g, k, alpha, DEFAULT_ENUM_CAP).unwrap();
    println!("marginal-gain audit at alpha = kappa^2: {} violations", violations.len());

    let greedy = greedy_singleton_audit(&mut g, k, alpha, DEFAULT_ENUM_CAP).unwrap();
    println!("greedy singleton bound over all |V| <= {k}: {} violations", greedy.len());

    let restricted = restriction_audit(&mut g, &[0], k, alpha, DEFAULT_ENUM_CAP).unwrap();
    println!("restriction g({{1}} + .) at sparsity {}: {} violations", k - 1, restricted.len());

    // An absurdly small factor must trip the detector.
    let bad = weak_supermodularity_audit(&mut g, k, 0.01, DEFAULT_ENUM_CAP).unwrap();
    println!("\nsanity: at alpha = 0.01 the audit reports {} violations, e.g.:", bad.len());
    if let Some(v) = bad.first() {
        let small: Vec<usize> = v.small.iter().map(|i| i + 1).collect();
        let large: Vec<usize> = v.large.iter().map(|i| i + 1).collect();
        println!(
            "  S = {small:?} inside T = {large:?}: gain {:.5} > alpha * marginal sum {:.5}",
            v.lhs, v.rhs
        );
    }
}
