use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use globcorr::io::{self, IngestError, SampleTable};
use globcorr::maxent::{self, SolverOptions};
use globcorr::sufficiency;
use globcorr::verify::{run_battery, BatteryConfig};
use globcorr::{info, Error, Execution, JointDistribution, Partition};

#[derive(Parser)]
#[command(
    name = "globcorr",
    version,
    about = "Global correlation functionals on discrete distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy, total correlation, n-partite or mutual information of a distribution
    Info {
        #[arg(long)]
        dist: PathBuf,
        /// Blocks of comma-separated axis indices joined by `|`, e.g. "0,1|2"
        #[arg(long)]
        partition: Option<String>,
        #[arg(long, value_enum, default_value_t = Measure::Tc)]
        measure: Measure,
    },
    /// Run the identity and inequality battery
    Verify {
        #[arg(long)]
        dist: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        max_axes: usize,
        #[arg(long, default_value_t = 4)]
        max_labels: usize,
    },
    /// Sufficiency of a statistic with respect to a parameter block
    Suff {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        statistic: PathBuf,
        /// Comma-separated axis indices of the parameter block
        #[arg(long)]
        theta: String,
    },
    /// Entropic update of a prior under expectation constraints
    Maxent {
        #[arg(long)]
        prior: PathBuf,
        #[arg(long)]
        constraints: PathBuf,
        #[arg(long, default_value_t = maxent::DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = maxent::DEFAULT_MAX_ITERATIONS)]
        max_iter: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Plug-in distribution estimate from a CSV of samples
    Estimate {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        axes: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        smoothing: f64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Entropy,
    Tc,
    Npi,
    Mi,
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PARTITION: u8 = 3;
const EXIT_NO_BASELINE: u8 = 4;
const EXIT_NOT_CONVERGED: u8 = 5;
const EXIT_INFEASIBLE: u8 = 6;

/// A diagnostic plus the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl std::fmt::Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        Failure::new(EXIT_INPUT, e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidPartition(_) => EXIT_PARTITION,
            Error::NoBaselineCorrelation(_) => EXIT_NO_BASELINE,
            Error::InfeasibleConstraint { .. } => EXIT_INFEASIBLE,
            Error::NotConverged { .. } => EXIT_NOT_CONVERGED,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Info {
            dist,
            partition,
            measure,
        } => cmd_info(&dist, partition.as_deref(), measure),
        Command::Verify {
            dist,
            seed,
            trials,
            max_axes,
            max_labels,
        } => cmd_verify(dist.as_deref(), seed, trials, max_axes, max_labels),
        Command::Suff {
            dist,
            statistic,
            theta,
        } => cmd_suff(&dist, &statistic, &theta),
        Command::Maxent {
            prior,
            constraints,
            tol,
            max_iter,
            out,
        } => cmd_maxent(&prior, &constraints, tol, max_iter, out.as_deref()),
        Command::Estimate {
            samples,
            axes,
            smoothing,
            out,
        } => cmd_estimate(&samples, &axes, smoothing, out.as_deref()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn load_distribution(path: &Path) -> Result<JointDistribution, Failure> {
    io::parse_distribution(&read(path)?)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

/// Fixed 12-decimal rendering; rounding noise around zero prints as zero.
fn nats(v: f64) -> String {
    let v = if v.abs() < 5e-13 { 0.0 } else { v };
    format!("{v:.12}")
}

fn parse_partition(text: &str, axis_count: usize) -> Result<Partition, Failure> {
    io::parse_partition(text, axis_count).map_err(|e| Failure::new(EXIT_PARTITION, e))
}

fn cmd_info(path: &Path, partition: Option<&str>, measure: Measure) -> Result<u8, Failure> {
    let dist = load_distribution(path)?;
    let partition = partition
        .map(|p| parse_partition(p, dist.axis_count()))
        .transpose()?;
    let value = match measure {
        Measure::Entropy => info::shannon_entropy(&dist),
        Measure::Tc => info::total_correlation(&dist),
        Measure::Npi | Measure::Mi => {
            let p = partition.as_ref().ok_or_else(|| {
                Failure::new(EXIT_PARTITION, "--partition is required for npi and mi")
            })?;
            if matches!(measure, Measure::Mi) {
                if p.block_count() != 2 {
                    return Err(Failure::new(
                        EXIT_PARTITION,
                        "mi needs a partition with exactly two blocks",
                    ));
                }
                info::mutual_information(&dist, &p.blocks()[0], &p.blocks()[1])?
            } else {
                info::npartite_information(&dist, p)?
            }
        }
    };
    println!("{}", nats(value));
    if let Some(p) = &partition {
        let dec = info::entropy_decomposition(&dist, p)?;
        for (block, s) in p.blocks().iter().zip(&dec.block_entropies) {
            let ids: Vec<String> = block.iter().map(usize::to_string).collect();
            println!("block_entropy {} {}", ids.join(","), nats(*s));
        }
        println!("joint_entropy {}", nats(dec.joint_entropy));
    }
    Ok(0)
}

fn cmd_verify(
    path: Option<&Path>,
    seed: u64,
    trials: usize,
    max_axes: usize,
    max_labels: usize,
) -> Result<u8, Failure> {
    let fixed = path.map(load_distribution).transpose()?;
    let config = BatteryConfig {
        seed,
        trials,
        max_axes,
        max_labels,
    };
    let report = run_battery(&config, fixed.as_ref(), Execution::default())?;
    print!("{}", report.to_json());
    Ok(if report.passed { 0 } else { EXIT_CHECK_FAILED })
}

fn parse_axis_list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::new(EXIT_INPUT, format!("`{t}` is not an axis index")))
        })
        .collect()
}

fn cmd_suff(dist_path: &Path, stat_path: &Path, theta: &str) -> Result<u8, Failure> {
    let dist = load_distribution(dist_path)?;
    let stat = io::parse_statistic(&read(stat_path)?, dist.axes())
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", stat_path.display())))?;
    let theta = parse_axis_list(theta)?;
    let parts = sufficiency::sufficiency_parts(&dist, &stat, &theta)?;
    println!("{}", nats(parts.ratio()));
    println!("numerator_mi {}", nats(parts.after));
    println!("denominator_mi {}", nats(parts.before));
    Ok(0)
}

fn cmd_maxent(
    prior_path: &Path,
    constraints_path: &Path,
    tol: f64,
    max_iter: usize,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let prior = load_distribution(prior_path)?;
    let constraints = io::parse_constraints(&read(constraints_path)?)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", constraints_path.display())))?;
    let options = SolverOptions {
        tolerance: tol,
        max_iterations: max_iter,
    };
    let result = maxent::maxent_update(&prior, &constraints, options)?;
    let doc = io::serialize_distribution(&result.posterior);
    let line = |key: &str, v: &[f64]| {
        let mut s = key.to_string();
        for x in v {
            s.push_str(&format!(" {x:.12e}"));
        }
        s
    };
    let summary = format!(
        "converged {}\niterations {}\n{}\n{}\n",
        result.converged,
        result.iterations,
        line("beta", &result.multipliers),
        line("residuals", &result.residuals)
    );
    match out {
        Some(path) => {
            write(path, &doc)?;
            print!("{summary}");
        }
        None => {
            print!("{doc}");
            eprint!("{summary}");
        }
    }
    if result.converged {
        Ok(0)
    } else {
        eprintln!(
            "error: solver stopped after {} iterations without converging",
            result.iterations
        );
        Ok(EXIT_NOT_CONVERGED)
    }
}

fn cmd_estimate(
    samples: &Path,
    axes: &Path,
    smoothing: f64,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let axes = io::parse_axes(&read(axes)?)?;
    let file = fs::File::open(samples)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", samples.display())))?;
    let table = SampleTable::from_csv(file)?;
    let dist = io::estimate_from_samples(&table, &axes, smoothing)?;
    let doc = io::serialize_distribution(&dist);
    let summary = format!(
        "cells {}\nsamples {}\n",
        dist.cell_count(),
        table.rows.len()
    );
    match out {
        Some(path) => {
            write(path, &doc)?;
            print!("{summary}");
        }
        None => {
            print!("{doc}");
            eprint!("{summary}");
        }
    }
    Ok(0)
}
