use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperdyn_cli::export::{export_plot_data, read_report};
use hyperdyn_cli::runner::{resolve_seed, run_batch};
use hyperdyn_cli::scenario::{Analysis, Output, Scenario};
use hyperdyn_cli::source::MapSource;
use hyperdyn_cli::write::atomic_write;
use hyperdyn_cli::{CliError, CliResult, Report};

/// Exit status when a checker reports a failure.
const EXIT_CHECK_FAILED: u8 = 1;
/// Exit status for unreadable or invalid input.
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "hyperdyn", version, about = "Exact dynamics of induced maps on subcontinua of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenario files; reports go to each scenario's `output.report`
    /// or to stdout.
    Run {
        #[arg(required = true)]
        scenarios: Vec<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Classify the orbit of a continuum under the induced map.
    Classify {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        continuum: String,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        tol: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a structural checker.
    Check {
        suite: Suite,
        #[command(flatten)]
        map: MapArgs,
        /// Continua to check; nesting takes P1 then P2. Without any, every
        /// enumerated periodic subtree is checked.
        #[arg(long)]
        continuum: Vec<String>,
        /// Check this many random Markov tree maps instead (period-bound and
        /// nesting only).
        #[arg(long)]
        corpus: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        tol: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sampling probes.
    Probe {
        #[command(subcommand)]
        probe: Probe,
    },
    /// Enumerations over a Markov map.
    Enumerate {
        #[command(subcommand)]
        what: Enumerate,
    },
    /// Write CSV plot data for a JSON report.
    Export {
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        csv_dir: PathBuf,
    },
    /// List builtin map names.
    Builtins,
}

#[derive(Subcommand)]
enum Probe {
    /// Equicontinuity probe around the neighborhoods of a subtree.
    Equicontinuity {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        subtree: String,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        gamma: Vec<String>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<usize>,
        /// Accepted for symmetry with the other commands; unused.
        #[arg(long, hide = true)]
        tol: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum Enumerate {
    /// Periodic aligned subtrees and low-period periodic points.
    Periodic {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        tol: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    PeriodBound,
    Nesting,
    Recurrence,
    Center,
}

#[derive(Args)]
struct MapArgs {
    /// Builtin map, e.g. `tent` or `truncated-tent(3)`.
    #[arg(long, conflicts_with_all = ["graph", "map"])]
    builtin: Option<String>,
    #[arg(long, requires = "map")]
    graph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    map: Option<PathBuf>,
}

impl MapArgs {
    fn source(&self) -> Option<MapSource> {
        if self.builtin.is_none() && self.graph.is_none() {
            return None;
        }
        Some(MapSource {
            builtin: self.builtin.clone(),
            graph: self.graph.clone(),
            map: self.map.clone(),
        })
    }
}

#[derive(Args)]
struct OutArgs {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write CSV plot data into this directory.
    #[arg(long)]
    csv_dir: Option<PathBuf>,
}

impl OutArgs {
    fn output(&self) -> Output {
        Output {
            report: self.report.clone(),
            csv_dir: self.csv_dir.clone(),
        }
    }
}

fn single(name: &str, map: &MapArgs, analyses: Vec<Analysis>, out: &OutArgs) -> Scenario {
    Scenario {
        name: name.to_string(),
        seed: None,
        map: map.source(),
        continua: Default::default(),
        analyses,
        output: out.output(),
    }
}

fn check_scenario(
    suite: Suite,
    map: &MapArgs,
    continua: &[String],
    corpus: Option<usize>,
    horizon: Option<usize>,
    tol: Option<String>,
    out: &OutArgs,
) -> CliResult<Scenario> {
    let first = continua.first().cloned();
    let analysis = match (suite, corpus) {
        (Suite::PeriodBound | Suite::Nesting, Some(count)) => Analysis::Corpus { count },
        (_, Some(_)) => return Err(CliError::Invalid("--corpus applies to period-bound and nesting".into())),
        (Suite::PeriodBound, None) => Analysis::PeriodBound {
            continuum: first,
            horizon,
        },
        (Suite::Nesting, None) => Analysis::Nesting {
            p1: first,
            p2: continua.get(1).cloned(),
            horizon,
        },
        (Suite::Recurrence, None) => Analysis::Recurrence {
            continuum: first,
            horizon,
            tol,
        },
        (Suite::Center, None) => Analysis::Center {
            max_depth: None,
            horizon,
        },
    };
    let name = match suite {
        Suite::PeriodBound => "check-period-bound",
        Suite::Nesting => "check-nesting",
        Suite::Recurrence => "check-recurrence",
        Suite::Center => "check-center",
    };
    Ok(single(name, map, vec![analysis], out))
}

/// Writes a report where its scenario asks, or prints it.
fn emit(report: &Report, output: &Output, base: &Path) -> CliResult<()> {
    match &output.report {
        Some(path) => {
            let path = base.join(path);
            atomic_write(&path, report.to_json().as_bytes())?;
            for (a, c) in report.checks() {
                println!("{} {}: {} ({})", a.kind, c.theorem, c.status, c.detail);
            }
            println!("report written to {}", path.display());
        }
        None => print!("{}", report.to_json()),
    }
    if let Some(dir) = &output.csv_dir {
        export_plot_data(report, &base.join(dir))?;
    }
    Ok(())
}

fn run_jobs(jobs: Vec<(Scenario, PathBuf, u64)>) -> CliResult<bool> {
    let mut targets: Vec<PathBuf> = jobs
        .iter()
        .filter_map(|(s, base, _)| s.output.report.as_ref().map(|r| base.join(r)))
        .collect();
    targets.sort();
    if let Some(w) = targets.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Invalid(format!("two scenarios write {}", w[0].display())));
    }
    let reports = run_batch(&jobs);
    let mut failed = false;
    for ((s, base, _), report) in jobs.iter().zip(reports) {
        let report = report?;
        failed |= report.any_failed();
        emit(&report, &s.output, base)?;
    }
    Ok(failed)
}

fn one(s: Scenario, seed: Option<u64>) -> CliResult<bool> {
    let seed = resolve_seed(seed, s.seed)?;
    run_jobs(vec![(s, PathBuf::from("."), seed)])
}

fn dispatch(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Run { scenarios, seed } => {
            let jobs = scenarios
                .iter()
                .map(|path| {
                    let s = Scenario::load(path)?;
                    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                    let seed = resolve_seed(seed, s.seed)?;
                    Ok((s, base, seed))
                })
                .collect::<CliResult<Vec<_>>>()?;
            run_jobs(jobs)
        }
        Command::Classify {
            map,
            continuum,
            horizon,
            tol,
            out,
        } => one(
            single("classify", &map, vec![Analysis::Classify { continuum, horizon, tol }], &out),
            None,
        ),
        Command::Check {
            suite,
            map,
            continuum,
            corpus,
            seed,
            horizon,
            tol,
            out,
        } => one(check_scenario(suite, &map, &continuum, corpus, horizon, tol, &out)?, seed),
        Command::Probe {
            probe:
                Probe::Equicontinuity {
                    map,
                    subtree,
                    eps,
                    gamma,
                    samples,
                    seed,
                    horizon,
                    tol: _,
                    out,
                },
        } => {
            let analysis = Analysis::Equicontinuity {
                subtree,
                eps,
                gammas: (!gamma.is_empty()).then_some(gamma),
                horizon,
                samples,
            };
            one(single("probe-equicontinuity", &map, vec![analysis], &out), seed)
        }
        Command::Enumerate {
            what:
                Enumerate::Periodic {
                    map,
                    seed,
                    horizon: _,
                    tol: _,
                    out,
                },
        } => one(
            single("enumerate-periodic", &map, vec![Analysis::EnumeratePeriodic {}], &out),
            seed,
        ),
        Command::Export { report, csv_dir } => {
            let r = read_report(&report)?;
            for path in export_plot_data(&r, &csv_dir)? {
                println!("{}", path.display());
            }
            Ok(false)
        }
        Command::Builtins => {
            for b in BUILTINS {
                println!("{b}");
            }
            Ok(false)
        }
    }
}

const BUILTINS: [&str; 7] = [
    "tent                       slopes ±2",
    "truncated-tent(s)           slope s > 2",
    "star-3-4-2-5",
    "period-doubling(depth)      depth <= 6",
    "twin-period-doubling(depth) depth <= 5",
    "arm-rotation(k)",
    "denjoy-approx(p/q)          approximate",
];

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("hyperdyn: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
