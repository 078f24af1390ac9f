//! Seeded stream generators.
//!
//! Features are i.i.d. Rademacher (+-1) in both settings, which keeps
//! ||x||_inf = 1 exactly and gives sub-Gaussian isotropic designs that
//! pass the conditioning audits at desk scale.
//!
//! * Realizable: y = <x, w*> + Gaussian noise for a hidden k-sparse
//!   w* with ||w*||_1 = 1; labels are not clipped.
//! * Agnostic: the signal vector switches between two k-sparse vectors
//!   at the stream midpoint (sharing floor(k/2) support coordinates), a
//!   configured fraction of labels have their sign flipped, and labels
//!   are clipped to [-1, 1].
//!
//! Everything is reproducible bit for bit from the config seed; the
//! features, signal, and label perturbations draw from independent
//! substreams.

use crate::config::{Mode, ProblemConfig};
use crate::rng::{Rng64, Stream};
use crate::types::{LabeledExample, SparseWeight};

/// Hidden signal behind a realizable stream.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub w_star: SparseWeight,
    pub sigma: f64,
}

/// Draw a k-sparse vector with random support, uniform signs, and
/// magnitudes normalized to unit l1 norm.
fn sparse_signal(rng: &mut Rng64, d: usize, k: usize) -> SparseWeight {
    let support = rng.subset_exact(d, k);
    signal_on_support(rng, d, &support)
}

fn signal_on_support(rng: &mut Rng64, d: usize, support: &[usize]) -> SparseWeight {
    let magnitudes: Vec<f64> = support.iter().map(|_| rng.next_f64_open()).collect();
    let total: f64 = magnitudes.iter().sum();
    let pairs: Vec<(usize, f64)> = support
        .iter()
        .zip(&magnitudes)
        .map(|(&i, &m)| (i, rng.rademacher() * m / total))
        .collect();
    SparseWeight::from_pairs(d, &pairs)
}

fn rademacher_row(rng: &mut Rng64, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.rademacher()).collect()
}

/// Generate a realizable stream and its ground truth.
pub fn gen_realizable(cfg: &ProblemConfig) -> (Vec<LabeledExample>, GroundTruth) {
    let mut feat_rng = Rng64::substream(cfg.seed, Stream::Features);
    let mut signal_rng = Rng64::substream(cfg.seed, Stream::Signal);
    let mut noise_rng = Rng64::substream(cfg.seed, Stream::Labels);

    let w_star = sparse_signal(&mut signal_rng, cfg.d, cfg.k);
    let mut stream = Vec::with_capacity(cfg.horizon);
    for _ in 0..cfg.horizon {
        let x = rademacher_row(&mut feat_rng, cfg.d);
        let y = w_star.dot(&x) + cfg.sigma * noise_rng.next_gauss();
        stream.push(LabeledExample { x, y });
    }
    (
        stream,
        GroundTruth {
            w_star,
            sigma: cfg.sigma,
        },
    )
}

/// Generate the phase-switching agnostic benchmark stream.
pub fn gen_agnostic(cfg: &ProblemConfig) -> Vec<LabeledExample> {
    let mut feat_rng = Rng64::substream(cfg.seed, Stream::Features);
    let mut signal_rng = Rng64::substream(cfg.seed, Stream::Signal);
    let mut label_rng = Rng64::substream(cfg.seed, Stream::Labels);

    // Two phase vectors sharing floor(k/2) support coordinates, so the
    // best fixed k-sparse comparator stays competitive across phases.
    let first_support = signal_rng.subset_exact(cfg.d, cfg.k);
    let shared = cfg.k / 2;
    let mut second_support: Vec<usize> = first_support[..shared].to_vec();
    let outside: Vec<usize> = (0..cfg.d)
        .filter(|i| !first_support.contains(i))
        .collect();
    let fresh = cfg.k - shared;
    let mut pool = outside;
    for i in 0..fresh.min(pool.len()) {
        let j = i + signal_rng.next_below(pool.len() - i);
        pool.swap(i, j);
        second_support.push(pool[i]);
    }
    second_support.sort_unstable();
    second_support.dedup();
    let w_first = signal_on_support(&mut signal_rng, cfg.d, &first_support);
    let w_second = signal_on_support(&mut signal_rng, cfg.d, &second_support);

    let midpoint = cfg.horizon / 2;
    let mut stream = Vec::with_capacity(cfg.horizon);
    for t in 0..cfg.horizon {
        let x = rademacher_row(&mut feat_rng, cfg.d);
        let w_phase = if t < midpoint { &w_first } else { &w_second };
        let mut y = w_phase.dot(&x);
        if label_rng.next_f64() < cfg.flip_frac {
            y = -y;
        }
        stream.push(LabeledExample {
            x,
            y: y.clamp(-1.0, 1.0),
        });
    }
    stream
}

/// Generate whichever stream the config mode calls for; the ground
/// truth is only available in realizable mode.
pub fn gen_stream(cfg: &ProblemConfig) -> (Vec<LabeledExample>, Option<GroundTruth>) {
    match cfg.mode {
        Mode::Realizable => {
            let (stream, truth) = gen_realizable(cfg);
            (stream, Some(truth))
        }
        Mode::Agnostic => (gen_agnostic(cfg), None),
    }
}
