use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use orion_dtn::experiment::{
    fit_series, parse_config, render_summary, run_matrix, summarize, write_results_csv, FitError,
    ResultRow,
};
use orion_dtn::sim::{run_scenario_with_events, write_events_csv};

#[derive(Parser)]
#[command(name = "orion", version, about = "DTN routing simulator and contact-series fitting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid and write one CSV row per cell.
    Simulate {
        /// `key = value` configuration file; omitted keys take defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Per-packet event log; needs a single-cell grid.
        #[arg(long)]
        events: Option<PathBuf>,
        /// Seed list or range, e.g. `3` or `1..5`.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long)]
        protocol: Option<String>,
        #[arg(long)]
        nodes: Option<String>,
        #[arg(long)]
        speeds: Option<String>,
        #[arg(long)]
        duration: Option<String>,
    },
    /// Fit ARMA(2,1) to one CSV column and check stationarity.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        column: String,
    },
}

enum Failure {
    Config(String),
    Runtime(String),
}

fn simulate(
    config: Option<PathBuf>,
    out: PathBuf,
    events: Option<PathBuf>,
    overrides: [(&str, Option<String>); 5],
) -> Result<(), Failure> {
    let mut text = match &config {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    for (key, value) in overrides {
        if let Some(v) = value {
            text.push_str(&format!("\n{key} = {v}"));
        }
    }
    let matrix = parse_config(&text).map_err(|e| Failure::Config(e.to_string()))?;

    let rows = match &events {
        Some(path) => {
            let cells = matrix.cells();
            let [cell] = cells.as_slice() else {
                return Err(Failure::Config(format!(
                    "--events needs a single-cell grid, this one has {} cells",
                    cells.len()
                )));
            };
            let (metrics, log) = run_scenario_with_events(cell).map_err(|e| Failure::Runtime(e.to_string()))?;
            let file = File::create(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_events_csv(&log, &mut w)
                .and_then(|_| w.flush())
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            vec![ResultRow {
                protocol: cell.protocol,
                nodes: cell.node_count,
                speed: cell.speed,
                seed: cell.seed,
                metrics,
            }]
        }
        None => run_matrix(&matrix).map_err(|e| Failure::Runtime(e.to_string()))?,
    };

    let file = File::create(&out).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))?;
    write_results_csv(&rows, BufWriter::new(file)).map_err(|e| Failure::Runtime(e.to_string()))?;
    print!("{}", render_summary(&summarize(&rows)));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate {
            config,
            out,
            events,
            seed,
            protocol,
            nodes,
            speeds,
            duration,
        } => simulate(
            config,
            out,
            events,
            [
                ("seeds", seed),
                ("protocols", protocol),
                ("nodes", nodes),
                ("speeds", speeds),
                ("duration", duration),
            ],
        ),
        Command::Fit { input, column } => match fit_series(&input, &column) {
            Ok(report) => {
                print!("{report}");
                Ok(())
            }
            Err(e @ FitError::MissingColumn(_)) => Err(Failure::Config(e.to_string())),
            Err(e) => Err(Failure::Runtime(e.to_string())),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(io::stderr(), "error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(io::stderr(), "error: {msg}");
            ExitCode::from(2)
        }
    }
}
