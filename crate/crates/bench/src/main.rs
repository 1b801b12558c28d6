use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use optbench::cli::{cmd_list, cmd_plot, cmd_run, RunFlags};
use optbench::plot::{PlotOptions, XAxis};

#[derive(Parser)]
#[command(name = "optbench", version, about = "Run optimization benchmarks and plot convergence curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum XArg {
    Time,
    StopValue,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a benchmark config and write the results CSV
    Run {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// per-run time budget in seconds
        #[arg(long)]
        max_time: Option<f64>,
        /// only report the number of planned runs
        #[arg(long)]
        dry_run: bool,
        /// checkpoint directory (default: the output path with extension .store)
        #[arg(long)]
        store: Option<PathBuf>,
        #[arg(long, hide = true)]
        stop_after: Option<usize>,
    },
    /// Render one SVG per (objective, dataset) group of a results CSV
    Plot {
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "suboptimality")]
        metric: String,
        #[arg(long, value_enum, default_value = "time")]
        x: XArg,
    },
    /// Print the registered objectives, solvers, datasets and metrics
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, jobs, seed, max_time, dry_run, store, stop_after } => {
            let flags = RunFlags { jobs, seed, max_time, dry_run, store, stop_after };
            cmd_run(&config, &out, &flags).map(|report| {
                if dry_run {
                    println!("planned runs: {}", report.planned);
                } else {
                    println!(
                        "planned {} runs: {} executed, {} reused, {} errored, {} pairings skipped",
                        report.planned, report.executed, report.reused, report.errored, report.skipped
                    );
                    if report.interrupted {
                        println!("stopped early; re-run to resume");
                    }
                }
                report.exit_code()
            })
        }
        Command::Plot { csv, out, metric, x } => {
            let x = match x {
                XArg::Time => XAxis::Time,
                XArg::StopValue => XAxis::StopValue,
            };
            cmd_plot(&csv, &out, &PlotOptions { metric, x }).map(|files| {
                for f in files {
                    println!("{}", f.display());
                }
                0
            })
        }
        Command::List => {
            print!("{}", cmd_list());
            Ok(0)
        }
    };
    match result {
        Ok(0) => ExitCode::SUCCESS,
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
