use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use chipfire::chip_core::{default_budget, simulate_to_cycle, StepRecord};
use chipfire::circle_lift::{stair_interval, CdfSpec, CdfTable, RotationOptions, DEFAULT_CDF_GRID};
use chipfire::io::read_heights_file;
use chipfire::laws::{check_suite, FamilySpec, LawParams};
use chipfire::rational::Rational;
use chipfire::staircase::{limit_staircase, phase_diagram, write_staircase_csv, PhaseDiagram};
use chipfire::Error;

#[derive(Parser)]
#[command(
    name = "chipfire",
    version,
    about = "Parallel chip-firing on K_n and its devil's staircases"
)]
struct Cli {
    /// Worker threads (0 = all cores). CHIPFIRE_THREADS takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration to its eventual cycle.
    Simulate {
        /// slope2, constant:<c> or pq:<p>/<q>
        #[arg(long, conflicts_with = "heights_file")]
        family: Option<FamilySpec>,
        #[arg(long, requires = "family")]
        n: Option<usize>,
        /// Chips added to every vertex.
        #[arg(long, default_value_t = 0)]
        add_k: u64,
        /// One height per line.
        #[arg(long)]
        heights_file: Option<PathBuf>,
        /// Update budget (default 64·n²).
        #[arg(long)]
        budget: Option<u64>,
        /// Include the per-step firing trace.
        #[arg(long)]
        trace: bool,
    },
    /// Activity of σ_n + k for k = 0..=n.
    PhaseDiagram {
        #[arg(long, default_value = "slope2")]
        family: FamilySpec,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Activity counts of a phase diagram CSV.
    Census {
        #[arg(long)]
        input: PathBuf,
    },
    /// Rotation number of Φ_y on a uniform grid of y in [0, 1].
    Staircase {
        /// slope2, sqrt, sine, identity or table:<path>
        #[arg(long, default_value = "slope2")]
        cdf: String,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long, default_value_t = 64)]
        q_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The interval of y with ρ(Φ_y) = p/q.
    Stair {
        #[arg(long, default_value = "slope2")]
        cdf: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Check structural laws on seeded random instances.
    Verify {
        /// A law name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } | Error::BudgetExceededAt { .. } => 2,
        Error::DegenerateStair { .. } => 3,
        _ => 1,
    }
}

fn output(path: Option<&Path>) -> chipfire::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> chipfire::Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn parse_cdf(s: &str) -> chipfire::Result<CdfSpec> {
    match s.strip_prefix("table:") {
        Some(path) => Ok(CdfSpec::Table(CdfTable::from_csv(File::open(path)?)?)),
        None => CdfSpec::builtin(s),
    }
}

fn init_threads(flag: usize) -> chipfire::Result<()> {
    let threads = match std::env::var("CHIPFIRE_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParams(format!("CHIPFIRE_THREADS={v:?} is not a number")))?,
        Err(_) => flag,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidParams(e.to_string()))
}

#[derive(Serialize)]
struct SimulateReport {
    n: usize,
    k: u64,
    activity: Rational,
    period: u64,
    transient: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_trace: Option<Vec<StepRecord>>,
}

fn run(cli: Cli) -> chipfire::Result<u8> {
    init_threads(cli.threads)?;
    match cli.command {
        Command::Simulate {
            family,
            n,
            add_k,
            heights_file,
            budget,
            trace,
        } => {
            let base = match (family, n, heights_file) {
                (Some(f), Some(n), None) => f.config(n)?,
                (None, None, Some(path)) => read_heights_file(&path)?,
                _ => {
                    return Err(Error::InvalidParams(
                        "give either --family with --n, or --heights-file".into(),
                    ))
                }
            };
            let c = base.add_to_all(add_k)?;
            let s = simulate_to_cycle(&c, budget.unwrap_or_else(|| default_budget(c.n())))?;
            let report = SimulateReport {
                n: c.n(),
                k: add_k,
                activity: s.activity,
                period: s.period,
                transient: s.transient,
                alpha_trace: trace.then_some(s.alpha_trace),
            };
            write_json(&report, None)?;
        }
        Command::PhaseDiagram {
            family,
            n,
            out,
            format,
            budget,
        } => {
            let d = phase_diagram(&family, n, budget)?;
            match format {
                Format::Csv => {
                    let mut w = output(out.as_deref())?;
                    d.write_csv(&mut w)?;
                    w.flush()?;
                }
                Format::Json => write_json(&d, out.as_deref())?,
            }
        }
        Command::Census { input } => {
            let d = PhaseDiagram::read_csv(File::open(&input)?, FamilySpec::Slope2)?;
            let c = d.census();
            let counts: Vec<_> = c
                .counts
                .iter()
                .map(|(r, count)| json!({ "activity": r, "count": count }))
                .collect();
            let report = json!({
                "rows": c.total(),
                "max_denominator": c.max_denominator(),
                "period_matches": c.period_matches,
                "counts": counts,
            });
            write_json(&report, None)?;
        }
        Command::Staircase {
            cdf,
            grid,
            q_max,
            out,
        } => {
            let opts = RotationOptions {
                q_max,
                cdf_grid: DEFAULT_CDF_GRID,
                ..Default::default()
            };
            let points = limit_staircase(&parse_cdf(&cdf)?, grid, &opts)?;
            let mut w = output(out.as_deref())?;
            write_staircase_csv(&points, &mut w)?;
            w.flush()?;
        }
        Command::Stair { cdf, p, q, tol } => {
            let s = stair_interval(&parse_cdf(&cdf)?, p, q, tol, &RotationOptions::default())?;
            write_json(
                &json!({ "a": s.a, "b": s.b, "width": s.width, "tol": s.tol }),
                None,
            )?;
        }
        Command::Verify {
            suite,
            n_min,
            n_max,
            trials,
            seed,
            out,
        } => {
            let params = LawParams {
                n_min,
                n_max,
                trials,
                seed,
            };
            let reports = check_suite(&suite, &params)?;
            let passed = reports.iter().all(|r| r.passed);
            write_json(
                &json!({ "suite": suite, "params": params, "passed": passed, "laws": reports }),
                out.as_deref(),
            )?;
            if !passed {
                eprintln!("chipfire: law check failed");
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("chipfire: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
