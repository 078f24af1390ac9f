//! Experiment orchestration: config files, stream generation, driver
//! dispatch, regret accounting against the exhaustive comparator, slope
//! estimation, and structured result emission.
//!
//! Config files are strict TOML: unknown keys are errors. Output tables
//! are comma-separated with a header row; every float is serialized
//! with 17 significant digits so that re-runs can be compared byte for
//! byte. Wall-clock timing goes to stderr only, never into the output
//! files.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::config::{validate_config, MaskMode, Mode, ProblemConfig};
use crate::conditioning::conditioning_report;
use crate::dantzig::{run_dantzig_selector, DantzigTrace};
use crate::datagen::gen_stream;
use crate::error::{Error, Result};
use crate::greedy::{run_online_greedy, GreedyTrace};
use crate::sparse_oracle::{best_subset_gram, binomial, GramForm, DEFAULT_ENUM_CAP};
use crate::types::{Checkpoint, LabeledExample, RegretLedger, RoundRecord};
use crate::vaw::VawState;

/// Format with 17 significant digits.
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Dyadic checkpoint schedule: powers of two up to the horizon, plus
/// the horizon itself.
pub fn dyadic_checkpoints(horizon: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut t = 1usize;
    while t <= horizon {
        out.push(t);
        t *= 2;
    }
    if *out.last().unwrap() != horizon {
        out.push(horizon);
    }
    out
}

/// Regret of a loss sequence against the best k-sparse fixed weight
/// vector in hindsight, evaluated at the given checkpoints. The
/// comparator sees the full, unmasked data.
pub fn compute_regret(
    losses: &[f64],
    stream: &[LabeledExample],
    k: usize,
    checkpoints: &[usize],
    cap: u128,
) -> Result<RegretLedger> {
    assert!(losses.len() <= stream.len());
    let mut sorted: Vec<usize> = checkpoints
        .iter()
        .copied()
        .filter(|&t| t >= 1 && t <= losses.len())
        .collect();
    sorted.sort_unstable();
    sorted.dedup();

    let d = stream[0].x.len();
    let mut xtx = DMatrix::<f64>::zeros(d, d);
    let mut xty = DVector::<f64>::zeros(d);
    let mut yty = 0.0f64;
    let mut cum = 0.0f64;
    let mut out_checkpoints = Vec::with_capacity(sorted.len());
    let mut next = sorted.iter().copied().peekable();

    for (idx, (ex, &loss)) in stream.iter().zip(losses).enumerate() {
        cum += loss;
        for i in 0..d {
            let xi = ex.x[i];
            if xi != 0.0 {
                for j in 0..d {
                    xtx[(i, j)] += xi * ex.x[j];
                }
                xty[i] += xi * ex.y;
            }
        }
        yty += ex.y * ex.y;
        let t = idx + 1;
        if next.peek() == Some(&t) {
            next.next();
            let gram = GramForm {
                xtx: xtx.clone(),
                xty: xty.clone(),
                yty,
                n: t,
            };
            let fit = best_subset_gram(&gram, k, cap)?;
            let comparator_loss = fit.mean_loss * t as f64;
            out_checkpoints.push(Checkpoint {
                t,
                cum_loss: cum,
                comparator_loss,
                regret: cum - comparator_loss,
            });
        }
    }

    Ok(RegretLedger {
        losses: losses.to_vec(),
        checkpoints: out_checkpoints,
    })
}

/// Least-squares fit of log(regret) against log(t).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fit over checkpoints with t >= t_min and positive regret; at least
/// four such points are required.
pub fn slope_estimate(checkpoints: &[Checkpoint], t_min: usize) -> Result<SlopeFit> {
    let pts: Vec<(f64, f64)> = checkpoints
        .iter()
        .filter(|c| c.t >= t_min && c.regret > 0.0)
        .map(|c| ((c.t as f64).ln(), c.regret.ln()))
        .collect();
    if pts.len() < 4 {
        return Err(Error::DegenerateFit {
            usable: pts.len(),
            needed: 4,
        });
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    let ss_res: f64 = pts
        .iter()
        .map(|p| {
            let pred = mean_y + slope * (p.0 - mean_x);
            (p.1 - pred) * (p.1 - pred)
        })
        .sum();
    let r_squared = if ss_tot <= 1e-30 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(SlopeFit {
        slope,
        r_squared,
        points: pts.len(),
    })
}

/// Which learner to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Masked Dantzig selection with the doubling schedule.
    Dantzig,
    /// Batched greedy subset learner.
    Greedy,
    /// Zero-prediction baseline.
    Zero,
    /// Full-information online ridge baseline.
    Ridge,
}

/// Checkpoint policy: "dyadic" or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckpointPolicy {
    Named(String),
    List(Vec<usize>),
}

impl Default for CheckpointPolicy {
    fn default() -> Self {
        CheckpointPolicy::Named("dyadic".into())
    }
}

impl CheckpointPolicy {
    pub fn resolve(&self, horizon: usize) -> Result<Vec<usize>> {
        match self {
            CheckpointPolicy::Named(name) if name == "dyadic" => Ok(dyadic_checkpoints(horizon)),
            CheckpointPolicy::Named(other) => Err(Error::Config(format!(
                "unknown checkpoint policy `{other}` (expected \"dyadic\" or a list)"
            ))),
            CheckpointPolicy::List(list) => {
                if list.is_empty() {
                    return Err(Error::Config("checkpoint list is empty".into()));
                }
                let mut out = list.clone();
                out.sort_unstable();
                out.dedup();
                if out[0] < 1 || *out.last().unwrap() > horizon {
                    return Err(Error::Config(
                        "checkpoints must lie in [1, horizon]".into(),
                    ));
                }
                Ok(out)
            }
        }
    }
}

fn default_sigma() -> f64 {
    0.1
}
fn default_delta() -> f64 {
    0.05
}
fn default_c_lambda() -> f64 {
    1.0
}
fn default_vaw_reg() -> f64 {
    1.0
}
fn default_kappa() -> f64 {
    2.0
}
fn default_flip_frac() -> f64 {
    0.1
}
fn default_mask_mode() -> MaskMode {
    MaskMode::ExactSize
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// One experiment, as written in a config file. Strict: unknown keys
/// are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub mode: Mode,
    pub algorithm: Algorithm,
    pub d: usize,
    pub k: usize,
    pub k0: usize,
    pub horizon: usize,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_c_lambda")]
    pub c_lambda: f64,
    #[serde(default)]
    pub warmup: Option<usize>,
    #[serde(default)]
    pub batch_len: Option<usize>,
    #[serde(default)]
    pub k1: Option<usize>,
    #[serde(default = "default_vaw_reg")]
    pub vaw_reg: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_flip_frac")]
    pub flip_frac: f64,
    #[serde(default = "default_mask_mode")]
    pub mask_mode: MaskMode,
    pub seed: u64,
    #[serde(default)]
    pub checkpoints: CheckpointPolicy,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: ExperimentSpec =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let report = validate_config(&self.problem());
        if !report.is_pass() {
            return Err(Error::Config(format!("invalid config:\n{report}")));
        }
        self.checkpoints.resolve(self.horizon)?;
        Ok(())
    }

    pub fn problem(&self) -> ProblemConfig {
        ProblemConfig {
            d: self.d,
            k: self.k,
            k0: self.k0,
            k1: self.k1,
            horizon: self.horizon,
            sigma: self.sigma,
            delta: self.delta,
            c_lambda: self.c_lambda,
            warmup: self.warmup,
            batch_len: self.batch_len,
            vaw_reg: self.vaw_reg,
            kappa: self.kappa,
            flip_frac: self.flip_frac,
            mask_mode: self.mask_mode,
            seed: self.seed,
            mode: self.mode,
        }
    }
}

/// Driver output in a common shape.
#[derive(Debug, Clone)]
pub enum RunTrace {
    Dantzig(DantzigTrace),
    Greedy(GreedyTrace),
    Baseline(Vec<RoundRecord>),
}

impl RunTrace {
    pub fn rounds(&self) -> &[RoundRecord] {
        match self {
            RunTrace::Dantzig(t) => &t.rounds,
            RunTrace::Greedy(t) => &t.rounds,
            RunTrace::Baseline(r) => r,
        }
    }

    pub fn losses(&self) -> Vec<f64> {
        self.rounds().iter().map(|r| r.loss).collect()
    }
}

/// Summary block of one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub final_cum_loss: f64,
    pub final_comparator_loss: f64,
    pub final_regret: f64,
    pub slope: Option<SlopeFit>,
    pub slope_note: Option<String>,
    pub solver_failures: usize,
    pub clip_warnings: usize,
    /// Conditioning digest of the full stream, when enumerable.
    pub stream_epsilon: Option<f64>,
    pub stream_kappa: Option<f64>,
}

/// Everything one experiment produced.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub stream: Vec<LabeledExample>,
    pub trace: RunTrace,
    pub ledger: RegretLedger,
    pub summary: ExperimentSummary,
}

fn run_zero_baseline(stream: &[LabeledExample]) -> Vec<RoundRecord> {
    stream
        .iter()
        .enumerate()
        .map(|(i, ex)| RoundRecord {
            t: i + 1,
            mask: Vec::new(),
            y: ex.y,
            y_hat: 0.0,
            loss: ex.y * ex.y,
            union_query_size: 0,
        })
        .collect()
}

fn run_ridge_baseline(stream: &[LabeledExample], cfg: &ProblemConfig) -> Vec<RoundRecord> {
    let d = cfg.d;
    let full: Vec<usize> = (0..d).collect();
    let mut vaw = VawState::new(d, cfg.vaw_reg);
    stream
        .iter()
        .enumerate()
        .map(|(i, ex)| {
            let (y_hat, _) = vaw.predict(&ex.x);
            vaw.update(&ex.x, ex.y);
            let gap = ex.y - y_hat;
            RoundRecord {
                t: i + 1,
                mask: full.clone(),
                y: ex.y,
                y_hat,
                loss: gap * gap,
                union_query_size: d,
            }
        })
        .collect()
}

/// Generate data, run the configured learner, and account regret.
pub fn execute(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let cfg = spec.problem();
    let (stream, truth) = gen_stream(&cfg);

    let trace = match spec.algorithm {
        Algorithm::Dantzig => RunTrace::Dantzig(run_dantzig_selector(
            &stream,
            &cfg,
            truth.as_ref().map(|t| &t.w_star),
        )?),
        Algorithm::Greedy => RunTrace::Greedy(run_online_greedy(&stream, &cfg)?),
        Algorithm::Zero => RunTrace::Baseline(run_zero_baseline(&stream)),
        Algorithm::Ridge => RunTrace::Baseline(run_ridge_baseline(&stream, &cfg)),
    };

    let checkpoints = spec.checkpoints.resolve(cfg.horizon)?;
    let losses = trace.losses();
    let ledger = compute_regret(&losses, &stream, cfg.k, &checkpoints, DEFAULT_ENUM_CAP)?;

    let t_min = match spec.algorithm {
        Algorithm::Dantzig => cfg.warmup_len().max(1),
        _ => (cfg.horizon / 8).max(1),
    };
    let (slope, slope_note) = match slope_estimate(&ledger.checkpoints, t_min) {
        Ok(fit) => (Some(fit), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let (stream_epsilon, stream_kappa) = if binomial(cfg.d, cfg.k) <= 10_000 {
        let rows: Vec<Vec<f64>> = stream.iter().map(|e| e.x.clone()).collect();
        let rep = conditioning_report(&rows, cfg.k, DEFAULT_ENUM_CAP)?;
        (Some(rep.epsilon), Some(rep.kappa))
    } else {
        (None, None)
    };

    let solver_failures = match &trace {
        RunTrace::Dantzig(t) => t.solves.iter().filter(|s| s.failed).count(),
        _ => 0,
    };
    let clip_warnings = match &trace {
        RunTrace::Greedy(t) => t.clip_warnings,
        _ => 0,
    };

    let last = ledger
        .checkpoints
        .last()
        .copied()
        .unwrap_or(Checkpoint {
            t: 0,
            cum_loss: ledger.cumulative_loss(),
            comparator_loss: 0.0,
            regret: ledger.cumulative_loss(),
        });

    Ok(ExperimentResult {
        spec: spec.clone(),
        stream,
        trace,
        ledger,
        summary: ExperimentSummary {
            final_cum_loss: last.cum_loss,
            final_comparator_loss: last.comparator_loss,
            final_regret: last.regret,
            slope,
            slope_note,
            solver_failures,
            clip_warnings,
            stream_epsilon,
            stream_kappa,
        },
    })
}

fn mask_to_one_based(mask: &[usize]) -> String {
    mask.iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Write the stream in the row-per-line text format:
/// a `d=<int>` header, then `t x1 .. xd y` per row.
pub fn write_stream(path: &Path, stream: &[LabeledExample]) -> Result<()> {
    let mut out = String::new();
    let d = stream.first().map_or(0, |e| e.x.len());
    writeln!(out, "d={d}").unwrap();
    for (i, ex) in stream.iter().enumerate() {
        write!(out, "{}", i + 1).unwrap();
        for v in &ex.x {
            write!(out, " {}", fmt_g17(*v)).unwrap();
        }
        writeln!(out, " {}", fmt_g17(ex.y)).unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Read a stream file; tolerates arbitrary round indices but requires
/// exactly d feature values plus a label per row.
pub fn read_stream(path: &Path) -> Result<Vec<LabeledExample>> {
    let file = fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::DataFormat("empty stream file".into()))??;
    let d: usize = header
        .trim()
        .strip_prefix("d=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::DataFormat(format!("bad header line `{header}`, expected d=<int>")))?;
    let mut stream = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != d + 2 {
            return Err(Error::DataFormat(format!(
                "row {}: expected {} fields (t, {} features, y), got {}",
                lineno + 2,
                d + 2,
                d,
                tokens.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::DataFormat(format!("row {}: bad number `{s}`", lineno + 2)))
        };
        let x: Vec<f64> = tokens[1..=d]
            .iter()
            .map(|s| parse(s))
            .collect::<Result<_>>()?;
        let y = parse(tokens[d + 1])?;
        stream.push(LabeledExample { x, y });
    }
    if stream.is_empty() {
        return Err(Error::DataFormat("stream has no rows".into()));
    }
    Ok(stream)
}

/// Emit every output table for one experiment into its directory.
pub fn emit_result(result: &ExperimentResult) -> Result<()> {
    let dir = &result.spec.out_dir;
    fs::create_dir_all(dir)?;

    write_stream(&dir.join("stream.txt"), &result.stream)?;

    let mut trace_csv = String::from("t,queried,y,y_hat,loss,query_size,union_query_size\n");
    for r in result.trace.rounds() {
        writeln!(
            trace_csv,
            "{},{},{},{},{},{},{}",
            r.t,
            mask_to_one_based(&r.mask),
            fmt_g17(r.y),
            fmt_g17(r.y_hat),
            fmt_g17(r.loss),
            r.mask.len(),
            r.union_query_size
        )
        .unwrap();
    }
    fs::write(dir.join("trace.csv"), trace_csv)?;

    let mut cp_csv = String::from("t,cum_loss,comparator_loss,regret\n");
    for c in &result.ledger.checkpoints {
        writeln!(
            cp_csv,
            "{},{},{},{}",
            c.t,
            fmt_g17(c.cum_loss),
            fmt_g17(c.comparator_loss),
            fmt_g17(c.regret)
        )
        .unwrap();
    }
    fs::write(dir.join("checkpoints.csv"), cp_csv)?;

    match &result.trace {
        RunTrace::Dantzig(t) => {
            let mut csv = String::from("t,lambda,l1_value,failed,lp_error,play_error\n");
            for s in &t.solves {
                writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    s.t,
                    fmt_g17(s.lambda),
                    fmt_g17(s.l1_value),
                    s.failed,
                    s.lp_error.map_or(String::new(), fmt_g17),
                    s.play_error.map_or(String::new(), fmt_g17)
                )
                .unwrap();
            }
            fs::write(dir.join("solves.csv"), csv)?;
        }
        RunTrace::Greedy(t) => {
            let mut csv = String::from("batch,start,len,chosen,support,query_union\n");
            for b in &t.batches {
                writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    b.batch,
                    b.start,
                    b.len,
                    mask_to_one_based(&b.chosen),
                    mask_to_one_based(&b.support),
                    mask_to_one_based(&b.query_union)
                )
                .unwrap();
            }
            fs::write(dir.join("batches.csv"), csv)?;
        }
        RunTrace::Baseline(_) => {}
    }

    fs::write(dir.join("summary.txt"), render_summary(result))?;
    Ok(())
}

fn render_summary(result: &ExperimentResult) -> String {
    let spec = &result.spec;
    let cfg = spec.problem();
    let mut s = String::new();
    let mode = match spec.mode {
        Mode::Realizable => "realizable",
        Mode::Agnostic => "agnostic",
    };
    let algorithm = match spec.algorithm {
        Algorithm::Dantzig => "dantzig",
        Algorithm::Greedy => "greedy",
        Algorithm::Zero => "zero",
        Algorithm::Ridge => "ridge",
    };
    let mask_mode = match spec.mask_mode {
        MaskMode::ExactSize => "exact-size",
        MaskMode::Bernoulli => "bernoulli",
    };
    writeln!(s, "mode = {mode}").unwrap();
    writeln!(s, "algorithm = {algorithm}").unwrap();
    writeln!(s, "d = {}", spec.d).unwrap();
    writeln!(s, "k = {}", spec.k).unwrap();
    writeln!(s, "k0 = {}", spec.k0).unwrap();
    writeln!(s, "horizon = {}", spec.horizon).unwrap();
    writeln!(s, "sigma = {}", fmt_g17(spec.sigma)).unwrap();
    writeln!(s, "delta = {}", fmt_g17(spec.delta)).unwrap();
    writeln!(s, "c_lambda = {}", fmt_g17(spec.c_lambda)).unwrap();
    writeln!(s, "warmup = {}", cfg.warmup_len()).unwrap();
    if spec.algorithm == Algorithm::Greedy {
        let sched = crate::greedy::resolve_schedule(&cfg);
        writeln!(s, "batch_len = {}", sched.batch_len).unwrap();
        writeln!(s, "k1 = {}", sched.k1).unwrap();
    }
    writeln!(s, "vaw_reg = {}", fmt_g17(spec.vaw_reg)).unwrap();
    writeln!(s, "kappa = {}", fmt_g17(spec.kappa)).unwrap();
    writeln!(s, "flip_frac = {}", fmt_g17(spec.flip_frac)).unwrap();
    writeln!(s, "mask_mode = {mask_mode}").unwrap();
    writeln!(s, "seed = {}", spec.seed).unwrap();

    let sum = &result.summary;
    writeln!(s, "final_cum_loss = {}", fmt_g17(sum.final_cum_loss)).unwrap();
    writeln!(
        s,
        "final_comparator_loss = {}",
        fmt_g17(sum.final_comparator_loss)
    )
    .unwrap();
    writeln!(s, "final_regret = {}", fmt_g17(sum.final_regret)).unwrap();
    match &sum.slope {
        Some(fit) => {
            writeln!(s, "slope = {}", fmt_g17(fit.slope)).unwrap();
            writeln!(s, "r_squared = {}", fmt_g17(fit.r_squared)).unwrap();
            writeln!(s, "slope_points = {}", fit.points).unwrap();
        }
        None => {
            writeln!(
                s,
                "slope_note = {}",
                sum.slope_note.as_deref().unwrap_or("unavailable")
            )
            .unwrap();
        }
    }
    writeln!(s, "solver_failures = {}", sum.solver_failures).unwrap();
    writeln!(s, "clip_warnings = {}", sum.clip_warnings).unwrap();
    if let Some(eps) = sum.stream_epsilon {
        writeln!(s, "stream_epsilon = {}", fmt_g17(eps)).unwrap();
    }
    if let Some(kappa) = sum.stream_kappa {
        writeln!(s, "stream_kappa = {}", fmt_g17(kappa)).unwrap();
    }
    s
}

/// Overrides applied on top of a loaded config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub checkpoints: Option<CheckpointPolicy>,
}

impl Overrides {
    pub fn apply(&self, spec: &mut ExperimentSpec) {
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if let Some(dir) = &self.out_dir {
            spec.out_dir = dir.clone();
        }
        if let Some(cp) = &self.checkpoints {
            spec.checkpoints = cp.clone();
        }
    }
}

/// Load a config file, run it, and emit the output files.
pub fn run_experiment(path: &Path, overrides: &Overrides) -> Result<ExperimentResult> {
    let mut spec = ExperimentSpec::load(path)?;
    overrides.apply(&mut spec);
    let started = std::time::Instant::now();
    let result = execute(&spec)?;
    emit_result(&result)?;
    eprintln!(
        "experiment finished in {:.2?} (out: {})",
        started.elapsed(),
        spec.out_dir.display()
    );
    Ok(result)
}

/// Aggregated row of one sweep member.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub seed: u64,
    pub final_regret: f64,
    pub slope: Option<SlopeFit>,
}

/// Sweep outcome.
#[derive(Debug, Clone)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub median_final_regret: f64,
    pub median_slope: Option<f64>,
}

pub fn median(values: &mut Vec<f64>) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Run the same config across seeds on a small worker pool; each seed
/// writes into `<out_dir>/seed_<s>/`.
pub fn run_sweep(
    path: &Path,
    seeds: &[u64],
    out_dir: &Path,
    jobs: usize,
) -> Result<SweepSummary> {
    if seeds.is_empty() {
        return Err(Error::Config("sweep needs at least one seed".into()));
    }
    let base = ExperimentSpec::load(path)?;
    let jobs = jobs.max(1).min(seeds.len());

    let specs: Vec<ExperimentSpec> = seeds
        .iter()
        .map(|&seed| {
            let mut spec = base.clone();
            spec.seed = seed;
            spec.out_dir = out_dir.join(format!("seed_{seed}"));
            spec
        })
        .collect();

    let next = std::sync::atomic::AtomicUsize::new(0);
    let results: Vec<std::sync::Mutex<Option<Result<ExperimentResult>>>> =
        specs.iter().map(|_| std::sync::Mutex::new(None)).collect();

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= specs.len() {
                    break;
                }
                let r = execute(&specs[i]).and_then(|res| {
                    emit_result(&res)?;
                    Ok(res)
                });
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });

    let mut rows = Vec::with_capacity(specs.len());
    for (spec, cell) in specs.iter().zip(results) {
        let res = cell.into_inner().unwrap().expect("worker ran")?;
        rows.push(SweepRow {
            seed: spec.seed,
            final_regret: res.summary.final_regret,
            slope: res.summary.slope,
        });
    }

    let mut regrets: Vec<f64> = rows.iter().map(|r| r.final_regret).collect();
    let median_final_regret = median(&mut regrets);
    let mut slopes: Vec<f64> = rows
        .iter()
        .filter_map(|r| r.slope.map(|s| s.slope))
        .collect();
    let median_slope = if slopes.is_empty() {
        None
    } else {
        Some(median(&mut slopes))
    };

    fs::create_dir_all(out_dir)?;
    let mut csv = String::from("seed,final_regret,slope,r_squared\n");
    for row in &rows {
        writeln!(
            csv,
            "{},{},{},{}",
            row.seed,
            fmt_g17(row.final_regret),
            row.slope.map_or("nan".into(), |s| fmt_g17(s.slope)),
            row.slope.map_or("nan".into(), |s| fmt_g17(s.r_squared)),
        )
        .unwrap();
    }
    fs::write(out_dir.join("sweep.csv"), csv)?;

    let mut summary = String::new();
    writeln!(summary, "seeds = {}", rows.len()).unwrap();
    writeln!(
        summary,
        "median_final_regret = {}",
        fmt_g17(median_final_regret)
    )
    .unwrap();
    if let Some(slope) = median_slope {
        writeln!(summary, "median_slope = {}", fmt_g17(slope)).unwrap();
    }
    fs::write(out_dir.join("sweep_summary.txt"), summary)?;

    Ok(SweepSummary {
        rows,
        median_final_regret,
        median_slope,
    })
}
