use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use catbench::aggregation::{Strategy, DEFAULT_KEMENY_CAP};
use catbench::analysis::{
    replicability_curve, sensitivity_matrix, tuning_gain, Factor, QualityGrid, ReplicabilityOptions,
};
use catbench::bench::{
    aggregate, report, run, write_consensus, write_toy_datasets, BenchError, EvaluationStore,
    ExperimentConfig, FactorFilter, ReportKind, TOY_SEED, WORKERS_ENV,
};
use catbench::models::Tuning;

#[derive(Parser)]
#[command(
    name = "catbench",
    version,
    about = "Benchmark categorical encoders and aggregate their rankings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute (or resume) the evaluation grid described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Consensus rankings per factor combination, written as CSV and JSON.
    Aggregate {
        /// Strategy name such as `R-M`, `Q-Th0.95`, `R-Kem`, or `all`.
        #[arg(long, default_value = "all")]
        strategy: String,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, default_value = "catbench-out")]
        out: PathBuf,
    },
    /// Print an analysis table as CSV on stdout.
    Analyze {
        #[command(subcommand)]
        what: Analysis,
        #[arg(long, global = true, default_value = "catbench-out")]
        out: PathBuf,
    },
    /// Write CSV and SVG report files into `<out>/reports`.
    Report {
        /// sensitivity, replicability, ranks, tuning-gain or all.
        kind: String,
        #[arg(long, default_value = "catbench-out")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the bundled toy datasets.
    GenerateToy {
        #[arg(long, default_value = "data")]
        dir: PathBuf,
        #[arg(long, default_value_t = TOY_SEED)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct FilterArgs {
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    tuning: Option<String>,
}

#[derive(Subcommand)]
enum Analysis {
    /// Spearman and top-tier Jaccard similarity between values of one factor.
    Sensitivity {
        /// model, metric, tuning or aggregation.
        #[arg(long)]
        factor: String,
    },
    /// Similarity of consensus rankings built on disjoint dataset samples.
    Replicability {
        #[command(flatten)]
        filter: FilterArgs,
        /// Comma-separated sample sizes; defaults to 1..=datasets/2.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quality change from one tuning strategy to another.
    TuningGain {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Print per-cell deltas instead of the grouped summary.
        #[arg(long)]
        deltas: bool,
    },
}

fn fail(msg: impl std::fmt::Display) -> Box<dyn std::error::Error> {
    msg.to_string().into()
}

fn strategies(name: &str, n_encoders: usize) -> Result<Vec<Strategy>, Box<dyn std::error::Error>> {
    if !name.eq_ignore_ascii_case("all") {
        return Ok(vec![name.parse::<Strategy>()?]);
    }
    let mut all = Strategy::all();
    if n_encoders > DEFAULT_KEMENY_CAP {
        eprintln!("note: skipping R-Kem, the store has {n_encoders} encoders (exact solver cap {DEFAULT_KEMENY_CAP})");
        all.retain(|s| *s != Strategy::Kemeny);
    }
    Ok(all)
}

fn execute(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            eprintln!(
                "grid of {} cells, {} workers (set {WORKERS_ENV} to override), store in {}",
                cfg.grid_size(),
                cfg.worker_count(),
                cfg.output_dir.display()
            );
            let summary = run(&cfg, |done, total| {
                eprintln!("  {done}/{total} evaluations")
            })?;
            println!(
                "planned {} | skipped {} | executed {} | missing {}",
                summary.planned, summary.skipped, summary.executed, summary.missing
            );
        }
        Command::Aggregate {
            strategy,
            filter,
            out,
        } => {
            let store = EvaluationStore::read(&out)?;
            let n = QualityGrid::from_records(store.records()).encoders.len();
            let filter = FactorFilter {
                model: filter.model,
                metric: filter.metric,
                tuning: filter.tuning,
            };
            let set = aggregate(store.records(), &strategies(&strategy, n)?, &filter)?;
            for path in write_consensus(&out.join("consensus"), &set)? {
                println!("{}", path.display());
            }
        }
        Command::Analyze { what, out } => {
            let store = EvaluationStore::read(&out)?;
            let grid = QualityGrid::from_records(store.records());
            match what {
                Analysis::Sensitivity { factor } => {
                    let factor: Factor = factor.parse()?;
                    let r = sensitivity_matrix(&grid, factor, &Strategy::all())?;
                    print!("{}", r.to_csv());
                    if r.degenerate_spearman > 0 {
                        eprintln!(
                            "note: {} constant-rank Spearman comparisons used the tie convention",
                            r.degenerate_spearman
                        );
                    }
                }
                Analysis::Replicability {
                    filter,
                    sizes,
                    pairs,
                    seed,
                } => {
                    let filter = FactorFilter {
                        model: filter.model,
                        metric: filter.metric,
                        tuning: filter.tuning,
                    };
                    let grid = filter.apply(&grid)?;
                    let sizes = if sizes.is_empty() {
                        (1..=grid.datasets.len() / 2).collect()
                    } else {
                        sizes
                    };
                    let options = ReplicabilityOptions {
                        sizes,
                        pairs,
                        seed,
                        ..Default::default()
                    };
                    print!("{}", replicability_curve(&grid, &options)?.to_csv());
                }
                Analysis::TuningGain { a, b, deltas } => {
                    let (a, b): (Tuning, Tuning) = (a.parse()?, b.parse()?);
                    let g = tuning_gain(store.records(), a, b)?;
                    print!(
                        "{}",
                        if deltas {
                            g.deltas_csv()
                        } else {
                            g.summary_csv()
                        }
                    );
                }
            }
        }
        Command::Report { kind, out, seed } => {
            let kinds: Vec<ReportKind> = if kind.eq_ignore_ascii_case("all") {
                ReportKind::ALL.to_vec()
            } else {
                vec![kind.parse().map_err(fail)?]
            };
            let store = EvaluationStore::read(&out)?;
            let dir = out.join("reports");
            let mut failures = 0;
            for k in kinds.iter().copied() {
                match report(store.records(), k, &dir, seed) {
                    Ok(o) => {
                        o.files.iter().for_each(|p| println!("{}", p.display()));
                        o.notes.iter().for_each(|n| eprintln!("note: {k}: {n}"));
                    }
                    Err(e @ BenchError::MissingPrerequisite { .. }) if kinds.len() > 1 => {
                        eprintln!("note: {e}")
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        failures += 1;
                    }
                }
            }
            if failures > 0 {
                return Err(fail(format!("{failures} report(s) failed")));
            }
        }
        Command::GenerateToy { dir, seed } => {
            for path in write_toy_datasets(&dir, seed)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
