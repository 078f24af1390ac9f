//! Thin command-line front end over the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use poslr::conditioning::{bbrcnp_audit, conditioning_report, WindowPolicy};
use poslr::error::{Error, Result};
use poslr::harness::{
    fmt_g17, run_experiment, run_sweep, CheckpointPolicy, Overrides,
};
use poslr::sparse_oracle::{best_subset, DEFAULT_ENUM_CAP};
use poslr::supermodular::{weak_supermodularity_audit, BatchSetFunction};

#[derive(Parser)]
#[command(
    name = "poslr",
    about = "Online sparse linear regression under restricted feature access"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file and emit result tables.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Checkpoint policy: "dyadic" or a comma-separated list.
        #[arg(long)]
        checkpoints: Option<String>,
    },
    /// Conditioning and weak-supermodularity audits of a stream file.
    Audit {
        #[arg(long)]
        data: PathBuf,
        /// Sparsity to audit.
        #[arg(long)]
        k: usize,
        /// Minimum window length of the block audit.
        #[arg(long, default_value_t = 64)]
        t0: usize,
        /// Condition-number bound windows are checked against.
        #[arg(long, default_value_t = 2.0)]
        kappa_bound: f64,
        /// Also audit consecutive batches of this length.
        #[arg(long)]
        batch_len: Option<usize>,
        /// Subset enumeration cap.
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: u128,
        /// Write the report here in addition to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive best-k-subset fit of a stream file.
    Oracle {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: u128,
    },
    /// Run a config across seeds and aggregate.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated seeds; ranges like 1..8 are inclusive.
        #[arg(long)]
        seeds: String,
        #[arg(long, default_value = "sweep_out")]
        out: PathBuf,
        /// Worker threads.
        #[arg(long, default_value_t = 4)]
        jobs: usize,
    },
}

fn parse_checkpoints(text: &str) -> Result<CheckpointPolicy> {
    if text == "dyadic" {
        return Ok(CheckpointPolicy::Named("dyadic".into()));
    }
    let list: std::result::Result<Vec<usize>, _> =
        text.split(',').map(|s| s.trim().parse::<usize>()).collect();
    match list {
        Ok(list) if !list.is_empty() => Ok(CheckpointPolicy::List(list)),
        _ => Err(Error::Config(format!(
            "bad --checkpoints value `{text}`: expected \"dyadic\" or a comma-separated list"
        ))),
    }
}

fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let mut seeds = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let lo: u64 = a
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad seed range `{part}`")))?;
            let hi: u64 = b
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad seed range `{part}`")))?;
            if hi < lo {
                return Err(Error::Config(format!("empty seed range `{part}`")));
            }
            seeds.extend(lo..=hi);
        } else if !part.is_empty() {
            seeds.push(
                part.parse()
                    .map_err(|_| Error::Config(format!("bad seed `{part}`")))?,
            );
        }
    }
    if seeds.is_empty() {
        return Err(Error::Config("no seeds given".into()));
    }
    seeds.dedup();
    Ok(seeds)
}

fn cmd_run(
    config: &PathBuf,
    out: Option<PathBuf>,
    seed: Option<u64>,
    checkpoints: Option<String>,
) -> Result<()> {
    let checkpoints = checkpoints.as_deref().map(parse_checkpoints).transpose()?;
    let overrides = Overrides {
        seed,
        out_dir: out,
        checkpoints,
    };
    let result = run_experiment(config, &overrides)?;
    println!(
        "final_regret = {}",
        fmt_g17(result.summary.final_regret)
    );
    if let Some(fit) = &result.summary.slope {
        println!("slope = {}", fmt_g17(fit.slope));
    }
    println!("out_dir = {}", result.spec.out_dir.display());
    Ok(())
}

fn cmd_audit(
    data: &PathBuf,
    k: usize,
    t0: usize,
    kappa_bound: f64,
    batch_len: Option<usize>,
    cap: u128,
    out: Option<PathBuf>,
) -> Result<()> {
    let stream = poslr::harness::read_stream(data)?;
    let rows: Vec<Vec<f64>> = stream.iter().map(|e| e.x.clone()).collect();
    let ys: Vec<f64> = stream.iter().map(|e| e.y).collect();

    let mut report = String::new();
    let cond = conditioning_report(&rows, k, cap)?;
    report.push_str(&format!("rows = {}\n", cond.n));
    report.push_str(&format!("k = {}\n", cond.k));
    report.push_str(&format!("epsilon = {}\n", fmt_g17(cond.epsilon)));
    report.push_str(&format!("kappa = {}\n", fmt_g17(cond.kappa)));
    report.push_str(&format!(
        "worst_support_min = {}\n",
        cond.worst_support_min
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(";")
    ));
    report.push_str(&format!(
        "worst_support_max = {}\n",
        cond.worst_support_max
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(";")
    ));

    let policy = WindowPolicy {
        t0: t0.min(rows.len()).max(1),
        batch_len,
    };
    let block = bbrcnp_audit(&rows, k, kappa_bound, &policy, cap)?;
    report.push_str(&format!("block_windows = {}\n", block.windows_checked));
    report.push_str(&format!("block_kappa_bound = {}\n", fmt_g17(kappa_bound)));
    report.push_str(&format!("block_pass = {}\n", block.pass()));
    if let Some(worst) = &block.worst {
        report.push_str(&format!(
            "block_worst = start {} len {} kappa {}\n",
            worst.start + 1,
            worst.len,
            fmt_g17(worst.kappa)
        ));
    }

    // Weak supermodularity of the batch set function, one batch per
    // block of batch_len rows (whole stream when unset), at the measured
    // kappa^2 of each batch.
    let b = batch_len.unwrap_or(rows.len());
    let mut batch_idx = 0;
    let mut total_violations = 0usize;
    let mut start = 0;
    while start < rows.len() {
        let len = b.min(rows.len() - start);
        batch_idx += 1;
        let batch_rows = rows[start..start + len].to_vec();
        let batch_ys = ys[start..start + len].to_vec();
        let kappa = poslr::conditioning::restricted_condition_number(&batch_rows, k, cap)?;
        let alpha = if kappa.is_finite() {
            kappa * kappa
        } else {
            f64::INFINITY
        };
        let mut f = BatchSetFunction::new(&batch_rows, &batch_ys);
        let violations = if alpha.is_finite() {
            weak_supermodularity_audit(&mut f, k, alpha, cap)?
        } else {
            Vec::new()
        };
        report.push_str(&format!(
            "batch_{batch_idx} = start {} len {} kappa {} violations {}\n",
            start + 1,
            len,
            fmt_g17(kappa),
            violations.len()
        ));
        total_violations += violations.len();
        start += len;
    }
    report.push_str(&format!("supermodularity_violations = {total_violations}\n"));

    print!("{report}");
    if let Some(path) = out {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(path, report)?;
    }
    Ok(())
}

fn cmd_oracle(data: &PathBuf, k: usize, cap: u128) -> Result<()> {
    let stream = poslr::harness::read_stream(data)?;
    let rows: Vec<Vec<f64>> = stream.iter().map(|e| e.x.clone()).collect();
    let ys: Vec<f64> = stream.iter().map(|e| e.y).collect();
    let fit = best_subset(&rows, &ys, k, cap)?;
    println!(
        "support = {}",
        fit.support
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(";")
    );
    for &i in &fit.support {
        println!("w_{} = {}", i + 1, fmt_g17(fit.w[i]));
    }
    println!("mean_loss = {}", fmt_g17(fit.mean_loss));
    println!(
        "cumulative_loss = {}",
        fmt_g17(fit.mean_loss * rows.len() as f64)
    );
    Ok(())
}

fn cmd_sweep(config: &PathBuf, seeds: &str, out: &PathBuf, jobs: usize) -> Result<()> {
    let seeds = parse_seeds(seeds)?;
    let summary = run_sweep(config, &seeds, out, jobs)?;
    println!(
        "median_final_regret = {}",
        fmt_g17(summary.median_final_regret)
    );
    if let Some(slope) = summary.median_slope {
        println!("median_slope = {}", fmt_g17(slope));
    }
    println!("out_dir = {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            checkpoints,
        } => cmd_run(&config, out, seed, checkpoints),
        Command::Audit {
            data,
            k,
            t0,
            kappa_bound,
            batch_len,
            cap,
            out,
        } => cmd_audit(&data, k, t0, kappa_bound, batch_len, cap, out),
        Command::Oracle { data, k, cap } => cmd_oracle(&data, k, cap),
        Command::Sweep {
            config,
            seeds,
            out,
            jobs,
        } => cmd_sweep(&config, &seeds, &out, jobs),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
