//! Problem configuration and validation.

use serde::{Deserialize, Serialize};

/// How labels are generated / which guarantees apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Labels follow a fixed k-sparse linear model plus Gaussian noise.
    Realizable,
    /// Arbitrary bounded labels, |y| <= 1.
    Agnostic,
}

/// Per-round query-mask sampling scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MaskMode {
    /// Uniform over all subsets of exactly k0 coordinates.
    ExactSize,
    /// Each coordinate included independently with probability k0/d.
    Bernoulli,
}

/// All dimensions, budgets, constants and seeds for one experiment.
///
/// `k1` and `batch_len` may be left unset for the greedy learner, in
/// which case the horizon-based schedule fills them in (see
/// [`crate::greedy::schedule_params`]).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemConfig {
    /// Ambient dimension d.
    pub d: usize,
    /// Comparator sparsity k.
    pub k: usize,
    /// Per-round query budget k0.
    pub k0: usize,
    /// Number of expert instances for the greedy learner.
    pub k1: Option<usize>,
    /// Horizon T.
    pub horizon: usize,
    /// Noise standard deviation (realizable mode).
    pub sigma: f64,
    /// Allowed failure probability, in (0, 1).
    pub delta: f64,
    /// Multiplicative constant in the Dantzig threshold.
    pub c_lambda: f64,
    /// Warm-up length; `None` selects ceil(2 k ln(d) ln(T+1)).
    pub warmup: Option<usize>,
    /// Mini-batch length for the greedy learner.
    pub batch_len: Option<usize>,
    /// Ridge parameter of the within-batch forecaster.
    pub vaw_reg: f64,
    /// Restricted-condition-number estimate used by the schedule.
    pub kappa: f64,
    /// Fraction of agnostic labels with flipped sign.
    pub flip_frac: f64,
    pub mask_mode: MaskMode,
    pub seed: u64,
    pub mode: Mode,
}

impl ProblemConfig {
    /// A small realizable default; tests and examples override fields.
    pub fn realizable(d: usize, k: usize, k0: usize, horizon: usize, seed: u64) -> Self {
        ProblemConfig {
            d,
            k,
            k0,
            k1: None,
            horizon,
            sigma: 0.1,
            delta: 0.05,
            c_lambda: 1.0,
            warmup: None,
            batch_len: None,
            vaw_reg: 1.0,
            kappa: 2.0,
            flip_frac: 0.1,
            mask_mode: MaskMode::ExactSize,
            seed,
            mode: Mode::Realizable,
        }
    }

    pub fn agnostic(d: usize, k: usize, k0: usize, horizon: usize, seed: u64) -> Self {
        ProblemConfig {
            mode: Mode::Agnostic,
            ..Self::realizable(d, k, k0, horizon, seed)
        }
    }

    /// Warm-up length before the Dantzig driver starts updating plays.
    pub fn warmup_len(&self) -> usize {
        self.warmup.unwrap_or_else(|| {
            let t = (2.0 * self.k as f64 * (self.d as f64).ln() * ((self.horizon + 1) as f64).ln())
                .ceil();
            t.max(0.0) as usize
        })
    }
}

/// One violated invariant, by field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: &'static str,
    pub requirement: &'static str,
}

/// Result of validating a [`ProblemConfig`].
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_pass() {
            write!(f, "pass")
        } else {
            for v in &self.violations {
                writeln!(f, "{}: {}", v.field, v.requirement)?;
            }
            Ok(())
        }
    }
}

/// Check every config invariant; violations are reported, not thrown.
pub fn validate_config(cfg: &ProblemConfig) -> ValidationReport {
    let mut violations = Vec::new();
    let mut check = |ok: bool, field: &'static str, requirement: &'static str| {
        if !ok {
            violations.push(Violation { field, requirement });
        }
    };

    check(cfg.k >= 1, "k", "k >= 1");
    check(cfg.k <= cfg.k0, "k", "k <= k0");
    check(cfg.k0 <= cfg.d, "k0", "k0 <= d");
    check(cfg.horizon >= 1, "horizon", "horizon >= 1");
    check(cfg.sigma >= 0.0, "sigma", "sigma >= 0");
    check(
        cfg.delta > 0.0 && cfg.delta < 1.0,
        "delta",
        "delta in (0,1)",
    );
    check(cfg.c_lambda > 0.0, "c_lambda", "c_lambda > 0");
    check(cfg.vaw_reg > 0.0, "vaw_reg", "vaw_reg > 0");
    check(cfg.kappa >= 1.0, "kappa", "kappa >= 1");
    check(
        (0.0..=1.0).contains(&cfg.flip_frac),
        "flip_frac",
        "flip_frac in [0,1]",
    );
    if let Some(k1) = cfg.k1 {
        check(k1 >= 1, "k1", "k1 >= 1");
        check(k1 <= cfg.k0, "k1", "k1 <= k0");
    }
    if let Some(b) = cfg.batch_len {
        check(b >= 1, "batch_len", "batch_len >= 1");
    }

    ValidationReport { violations }
}
