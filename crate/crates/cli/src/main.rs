//! `combasis` command-line driver.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use combasis::complexes::Caps;
use combasis::exactlin::Ring;
use serde::Serialize;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "combasis", version, about = "Common basis complexes, buildings and Steinberg Tor at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Largest simplex dimension to enumerate.
    #[arg(long, global = true)]
    max_dim: Option<usize>,

    #[arg(long, global = true, default_value_t = combasis::complexes::DEFAULT_MAX_VERTICES)]
    max_vertices: usize,

    #[arg(long, global = true, default_value_t = combasis::complexes::DEFAULT_MAX_SIMPLICES)]
    max_simplices: usize,

    /// Include wall time in reports (makes them non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a complex and write it in the complex file format.
    Build {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: Params,
    },
    /// Integral reduced homology of a complex file or a built complex.
    Homology {
        file: Option<PathBuf>,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[command(flatten)]
        params: Params,
    },
    /// Decide the common basis property of a collection file.
    Cbp {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        params: Params,
    },
    /// Tor of the Steinberg monoid with cross-checks.
    Tor {
        #[command(flatten)]
        params: Params,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Params {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub a: usize,
    #[arg(long, default_value_t = 0)]
    pub b: usize,
    /// Instance count for randomized suites.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value_t = RingArg::Fp)]
    pub ring: RingArg,
}

impl Params {
    pub fn field(&self) -> Result<Ring> {
        Ok(Ring::prime_field(self.p as u64)?)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Tits,
    SplitTits,
    Cb,
    Higher,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Greedy,
    Ie,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Connectivity,
    Koszul,
    Morse,
    Suspension,
    Join,
    SplitCompare,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RingArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Fp")]
    Fp,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

/// Resolved settings shared by every command.
#[derive(Debug, Clone, Serialize)]
pub struct Global {
    pub seed: u64,
    pub max_dim: Option<usize>,
    pub max_vertices: usize,
    pub max_simplices: usize,
    pub max_members: usize,
}

impl Global {
    pub fn caps(&self) -> Caps {
        Caps { max_vertices: self.max_vertices, max_simplices: self.max_simplices, max_dim: self.max_dim }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if cli.max_vertices == 0 || cli.max_simplices == 0 || cli.max_dim == Some(0) {
        bail!("caps must be positive");
    }
    let global = Global {
        seed: cli.seed,
        max_dim: cli.max_dim,
        max_vertices: cli.max_vertices,
        max_simplices: cli.max_simplices,
        max_members: combasis::cbp::MAX_MEMBERS,
    };
    let start = Instant::now();
    let mut report: Report = match &cli.command {
        Command::Build { kind, params } => {
            let text = commands::build(*kind, params, &global)?;
            emit(&text, cli.out.as_ref())?;
            return Ok(true);
        }
        Command::Homology { file, kind, params } => commands::homology(file.as_deref(), *kind, params, &global)?,
        Command::Cbp { file, mode } => commands::cbp(file, *mode, &global)?,
        Command::Verify { suite, params } => commands::verify(*suite, params, &global)?,
        Command::Tor { params } => commands::tor(params, &global)?,
    };
    if cli.timing {
        report.wall_ms = Some(start.elapsed().as_millis());
    }
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    emit(&text, cli.out.as_ref())?;
    Ok(report.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
