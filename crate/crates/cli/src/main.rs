use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use postsel_core::scenario::{emit_report, load_scenario, parse_scenario_file, preset, preset_names, run_scenario, Format};
use postsel_core::Error;

/// Run pre- and post-selected measurement scenarios and emit reports.
#[derive(Debug, Parser)]
#[command(name = "postsel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a scenario file, run it and write the report.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Override the seed of a chain or detector scenario.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the chain sample count or detector run count.
        #[arg(long)]
        samples: Option<u64>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect the bundled scenario presets.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Debug, Subcommand)]
enum PresetAction {
    List,
    Show { name: String },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

/// Exit code for failures writing output.
const IO_FAILURE: u8 = 1;

enum Failure {
    Engine(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Engine(e)) => {
            let code = e.exit_code();
            eprintln!("error kind={} exit={code} msg={:?}", e.class(), e.to_string());
            ExitCode::from(code as u8)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error kind=io exit={IO_FAILURE} msg={msg:?}");
            ExitCode::from(IO_FAILURE)
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run {
            file,
            format,
            seed,
            samples,
            out,
        } => {
            let mut scenario = load_scenario(&file)?;
            if let Some(seed) = seed {
                scenario = scenario.with_seed(seed);
            }
            if let Some(samples) = samples {
                scenario = scenario.with_samples(samples)?;
            }
            let bytes = emit_report(&run_scenario(&scenario)?, format.into());
            match out {
                Some(path) => std::fs::write(&path, bytes)
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
                None => write_stdout(&bytes),
            }
        }
        Command::Preset { action: PresetAction::List } => {
            let mut listing = String::new();
            for name in preset_names() {
                let file = parse_scenario_file(preset(name).expect("listed preset"))?;
                listing.push_str(&format!(
                    "{name}\t{}\t{}\n",
                    file.kind.as_str(),
                    file.description.unwrap_or_default()
                ));
            }
            write_stdout(listing.as_bytes())
        }
        Command::Preset {
            action: PresetAction::Show { name },
        } => {
            let text = preset(&name).ok_or_else(|| Error::Invariant {
                field: "preset".into(),
                message: format!("unknown preset `{name}`"),
            })?;
            write_stdout(text.as_bytes())
        }
    }
}

fn write_stdout(bytes: &[u8]) -> Result<(), Failure> {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(bytes)
        .and_then(|_| stdout.flush())
        .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))
}
