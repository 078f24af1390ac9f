//! Restricted isometry and condition-number audits.
//!
//! Audits three designs at sparsity k: an exactly orthogonal one, a
//! skewed diagonal one, and a random sign matrix, then runs the block
//! audit that the batched greedy learner's guarantees lean on.
//!
//! Run with: `cargo run --example conditioning_audit`

use poslr::conditioning::{bbrcnp_audit, conditioning_report, WindowPolicy};
use poslr::rng::{Rng64, Stream};
use poslr::sparse_oracle::DEFAULT_ENUM_CAP;

fn show(label: &str, rows: &[Vec<f64>], k: usize) {
    let rep = conditioning_report(rows, k, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "{label}: n={}, k={k} -> epsilon={:.4}, kappa={:.4}",
        rep.n, rep.epsilon, rep.kappa
    );
    if rep.epsilon < 1.0 {
        println!(
            "  (1+eps)/(1-eps) = {:.4} upper-bounds kappa",
            (1.0 + rep.epsilon) / (1.0 - rep.epsilon)
        );
    }
}

fn main() {
    println!("=== Conditioning audits ===\n");

    // sqrt(n)-scaled identity: an exact restricted isometry.
    let scale = 2f64;
    let ortho: Vec<Vec<f64>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { scale } else { 0.0 }).collect())
        .collect();
    show("sqrt(n)-scaled identity", &ortho, 2);

    // diag(2,1): per-column norms differ, so kappa = 2 at k = 1.
    let skew = vec![vec![2.0, 0.0], vec![0.0, 1.0]];
    show("\ndiag(2,1)", &skew, 1);

    // Random signs: well-conditioned once n is a few times k log d.
    let mut rng = Rng64::substream(4, Stream::Aux(0));
    let rows: Vec<Vec<f64>> = (0..256)
        .map(|_| (0..8).map(|_| rng.rademacher()).collect())
        .collect();
    show("\nrandom signs 256 x 8", &rows, 2);

    println!("\n--- Block audit (every window of >= 64 consecutive rows) ---");
    let policy = WindowPolicy {
        t0: 64,
        batch_len: Some(32),
    };
    let report = bbrcnp_audit(&rows, 2, 2.0, &policy, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "windows checked: {}, bound kappa <= 2.0, pass: {}",
        report.windows_checked,
        report.pass()
    );
    if let Some(w) = &report.worst {
        println!(
            "worst window: rows {}..{} with kappa = {:.4}",
            w.start + 1,
            w.start + w.len,
            w.kappa
        );
    }

    // A window of duplicated rows is rank deficient: kappa = infinity.
    let mut degenerate = rows.clone();
    for r in degenerate.iter_mut().skip(128).take(64) {
        *r = vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    }
    let report = bbrcnp_audit(&degenerate, 2, 2.0, &policy, DEFAULT_ENUM_CAP).unwrap();
    println!(
        "\nafter planting 64 duplicated rows: pass: {}, violations: {}",
        report.pass(),
        report.violations.len()
    );
}
