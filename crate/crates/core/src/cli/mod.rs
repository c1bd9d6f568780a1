//! Command-line front end: energy scans from a JSON config and the figure
//! presets.

mod config;
mod scan;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{emit_preset, EnergyGrid, Format, OutputConfig, ProblemConfig, Route, ScanConfig, Spacing, PRESETS};
pub use scan::{run_scan, tolerance, ScanReport, ScanRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BREACH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "deltacouple", version, about = "Transition probabilities for delta-coupled potential curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scan an energy grid and write one row per energy and route.
    Scan {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the route in the config.
        #[arg(long, value_enum)]
        route: Option<Route>,
        /// Defaults to the config's output path, then stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Worker threads for energy rows.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: Option<u16>,
    },
    /// Print or save the config for one of the figure parameter sets.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
        name: String,
        #[arg(long)]
        emit_config: Option<PathBuf>,
    },
}

/// Run the CLI on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    match command {
        Command::Preset { name, emit_config } => {
            let text = emit_preset(&name).map_err(|e| e.to_string())? .to_json() + "\n";
            match emit_config {
                Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?,
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string())?,
            }
            Ok(EXIT_OK)
        }
        Command::Scan { config, route, output, format, jobs } => {
            let text = std::fs::read_to_string(&config).map_err(|e| format!("{}: {e}", config.display()))?;
            let mut cfg = ScanConfig::from_json(&text).map_err(|e| format!("{}: {e}", config.display()))?;
            if let Some(r) = route {
                cfg.route = r;
            }
            let report = run_scan(&cfg, jobs.map(usize::from)).map_err(|e| e.to_string())?;
            let format = format.or(cfg.output.as_ref().map(|o| o.format)).unwrap_or_default();
            let rendered = report.render(format);
            match output.or_else(|| cfg.output.as_ref().and_then(|o| o.path.clone())) {
                Some(path) => std::fs::write(&path, rendered).map_err(|e| format!("{}: {e}", path.display()))?,
                None => out.write_all(rendered.as_bytes()).map_err(|e| e.to_string())?,
            }
            for w in &report.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            for b in &report.breaches {
                let _ = writeln!(err, "tolerance: {b}");
            }
            Ok(report.exit_code())
        }
    }
}
