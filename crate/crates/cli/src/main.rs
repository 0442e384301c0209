//! `linkopt`: run scenarios, sweeps and offline optima from the command line.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use linkopt::presets::{load_preset, sweep_preset};
use linkopt::sim::{run_with_trace, write_sweep_csv};
use linkopt::{optimum_for, run, sweep, Error, ScenarioSpec};

#[derive(Debug, Parser)]
#[command(name = "linkopt", version, about = "Energy-optimal compression and transmission on a wireless link")]
struct Cli {
    /// Worker threads for sweeps (default: one per core).
    #[arg(long, global = true, value_name = "N")]
    parallel: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one scenario and write report.json (and trace.csv with --trace).
    Run {
        #[command(flatten)]
        source: Source,
        /// Also write every slot to trace.csv.
        #[arg(long)]
        trace: bool,
    },
    /// Simulate many scenarios and write sweep.csv. A preset expands to its
    /// built-in sweep; an input file holds a JSON array of scenarios.
    Sweep {
        #[command(flatten)]
        source: Source,
    },
    /// Compute the minimum average power and write optimum.json and curves.csv.
    Optimum {
        #[command(flatten)]
        source: Source,
    },
    /// Print a built-in scenario as JSON, or write it to <output>/<id>.json.
    Preset {
        /// scenario1, scenario2 or scenario3.
        id: String,
        /// Directory to write to instead of standard output.
        #[arg(long, value_name = "DIR")]
        output: Option<PathBuf>,
        /// Override a field, e.g. `--set V=1e5`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

#[derive(Debug, Args)]
struct Source {
    /// Built-in scenario: scenario1, scenario2 or scenario3.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    preset: Option<String>,
    /// Scenario JSON file.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Directory for the output files; created if missing.
    #[arg(long, value_name = "DIR", default_value = ".")]
    output: PathBuf,
    /// Override a field, e.g. `--set V=1e5 --set horizon=1e6`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

/// How a command failed; decides the exit code.
#[derive(Debug)]
enum Failure {
    Config(String),
    Infeasible(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Other(_) => 1,
            Failure::Config(_) => 2,
            Failure::Infeasible(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Infeasible(m) | Failure::Other(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let root = match &e {
            Error::Run { source, .. } => source.as_ref(),
            other => other,
        };
        match root {
            Error::Infeasible(_) => Failure::Infeasible(e.to_string()),
            Error::Io(_) | Error::Csv(_) => Failure::Other(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn output_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Other(format!("cannot write {}: {e}", path.display()))
}

fn parse_override(raw: &str) -> Result<(&str, &str), Failure> {
    raw.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| Failure::Config(format!("override `{raw}` is not KEY=VALUE")))
}

fn apply_overrides(spec: &mut ScenarioSpec, overrides: &[String]) -> Result<(), Failure> {
    for raw in overrides {
        let (key, value) = parse_override(raw)?;
        spec.apply_override(key, value)?;
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn json_error(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure::Config(format!("{}: {e}", path.display()))
}

impl Source {
    fn scenario(&self) -> Result<ScenarioSpec, Failure> {
        let mut spec = match (&self.preset, &self.input) {
            (Some(id), _) => load_preset(id)?,
            (None, Some(path)) => {
                ScenarioSpec::from_json(&read_input(path)?).map_err(|e| json_error(path, e))?
            }
            (None, None) => unreachable!("clap requires a source"),
        };
        apply_overrides(&mut spec, &self.overrides)?;
        Ok(spec)
    }

    fn scenarios(&self) -> Result<Vec<ScenarioSpec>, Failure> {
        let mut specs = match (&self.preset, &self.input) {
            (Some(id), _) => sweep_preset(id)?,
            (None, Some(path)) => {
                let specs: Vec<ScenarioSpec> =
                    serde_json::from_str(&read_input(path)?).map_err(|e| json_error(path, e))?;
                for (i, spec) in specs.iter().enumerate() {
                    spec.validate()
                        .map_err(|e| json_error(path, format!("scenario {i}: {e}")))?;
                }
                specs
            }
            (None, None) => unreachable!("clap requires a source"),
        };
        if specs.is_empty() {
            return Err(Failure::Config("the sweep holds no scenarios".into()));
        }
        for spec in &mut specs {
            apply_overrides(spec, &self.overrides)?;
        }
        Ok(specs)
    }

    fn create(&self, name: &str) -> Result<(PathBuf, BufWriter<File>), Failure> {
        fs::create_dir_all(&self.output).map_err(|e| output_error(&self.output, e))?;
        let path = self.output.join(name);
        let file = File::create(&path).map_err(|e| output_error(&path, e))?;
        Ok((path, BufWriter::new(file)))
    }
}

fn write_json(source: &Source, name: &str, json: serde_json::Result<String>) -> Result<PathBuf, Failure> {
    let (path, mut out) = source.create(name)?;
    let json = json.map_err(|e| output_error(&path, e))?;
    writeln!(out, "{json}").and_then(|_| out.flush()).map_err(|e| output_error(&path, e))?;
    Ok(path)
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { source, trace } => {
            let spec = source.scenario()?;
            let report = if trace {
                let (path, out) = source.create("trace.csv")?;
                let report = run_with_trace(&spec, out)?;
                println!("wrote {}", path.display());
                report
            } else {
                run(&spec)?
            };
            let path = write_json(&source, "report.json", serde_json::to_string_pretty(&report))?;
            println!("wrote {}", path.display());
            println!(
                "P_tot = {:.6}  P_comp = {:.6}  P_tran = {:.6}  U = {:.2}  audit {}",
                report.avg_power,
                report.avg_compression_power,
                report.avg_transmission_power,
                report.avg_backlog,
                if report.audit.passed() { "passed" } else { "FAILED" }
            );
        }
        Command::Sweep { source } => {
            let specs = source.scenarios()?;
            let reports = sweep(&specs)?;
            let (path, out) = source.create("sweep.csv")?;
            write_sweep_csv(&reports, out)?;
            println!("wrote {} ({} runs)", path.display(), reports.len());
        }
        Command::Optimum { source } => {
            let spec = source.scenario()?;
            let report = optimum_for(&spec)?;
            let json = write_json(&source, "optimum.json", serde_json::to_string_pretty(&report))?;
            let (curves, out) = source.create("curves.csv")?;
            report.write_curves_csv(out)?;
            println!("wrote {} and {}", json.display(), curves.display());
            println!("P*_av = {}  r* = {}", report.p_av_star, report.r_star);
        }
        Command::Preset { id, output, overrides } => {
            let mut spec = load_preset(&id)?;
            apply_overrides(&mut spec, &overrides)?;
            let json = spec.to_json()?;
            match output {
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(|e| output_error(&dir, e))?;
                    let path = dir.join(format!("{id}.json"));
                    fs::write(&path, json + "\n").map_err(|e| output_error(&path, e))?;
                    println!("wrote {}", path.display());
                }
                None => {
                    let mut stdout = io::stdout().lock();
                    writeln!(stdout, "{json}").map_err(|e| Failure::Other(e.to_string()))?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.parallel {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure::Config(format!("--parallel {threads}: {e}")))
            .and_then(|pool| pool.install(|| execute(cli.command))),
        None => execute(cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
