//! `soergel`: Hecke algebra, Soergel module and Hodge theory checks for small
//! Coxeter groups.
//!
//! Exit codes: 0 when every check passes, 1 when a counterexample was found,
//! 2 on configuration errors.

mod campaign;
mod config;
mod run;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand, ValueEnum};
use soergel::coxeter::Preset;
use soergel::{Rational, Scalar, Q2, Q3, Q5};

use crate::config::{parse_checks, FieldKind, GroupSource, MatrixFile, ALL_CHECKS};
use crate::run::{Group, Output, Settings, Verify};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyKind {
    Hl,
    Hr,
    Sweep,
}

#[derive(Debug, Parser)]
#[command(name = "soergel", version, about = "Exact checks of Kazhdan–Lusztig positivity, Soergel modules and their Hodge theory")]
struct Cli {
    /// Named group: A1..A4, B2, B3, I2(m), H3, Atilde1, ...
    #[arg(long, global = true)]
    preset: Option<String>,
    /// TOML file with keys rank, entries, mode, field, cartan, alpha, alphavee, rho.
    #[arg(long, global = true)]
    matrix_file: Option<PathBuf>,
    /// Only elements up to this length (required for infinite groups).
    #[arg(long, global = true)]
    max_length: Option<usize>,
    /// Comma separated nonnegative values, e.g. 0,1/4,1/2,1.
    #[arg(long, global = true)]
    zeta_grid: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Comma separated subset of coxeter,hecke,soergel,hodge,sweep,rouquier.
    #[arg(long, global = true)]
    checks: Option<String>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kazhdan–Lusztig polynomials h_{y,w}.
    Kl,
    /// Structure constants mu_{x,y}^z.
    Mu,
    /// Inverse Kazhdan–Lusztig polynomials g_{y,w}.
    InverseKl,
    /// Quantum integer decompositions of the structure constants.
    Unimodality,
    /// Decompose a Bott–Samelson module, e.g. `decompose 0,1,0`.
    Decompose { word: String },
    /// Hard Lefschetz, Hodge–Riemann or zeta sweeps for every element.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        /// Restrict to one element, given by a word.
        #[arg(long)]
        element: Option<String>,
    },
    /// Cohomology of the Rouquier complex of a word.
    Rouquier { word: String },
    /// Every check in dependency order.
    Campaign,
}

fn source(cli: &Cli) -> Result<GroupSource> {
    match (&cli.preset, &cli.matrix_file) {
        (Some(p), None) => Preset::parse(p).map(GroupSource::Preset).ok_or_else(|| anyhow!("unknown preset {p:?}")),
        (None, Some(path)) => Ok(GroupSource::File(Box::new(MatrixFile::load(path)?))),
        (Some(_), Some(_)) => bail!("--preset and --matrix-file are exclusive"),
        (None, None) => bail!("one of --preset or --matrix-file is required"),
    }
}

fn execute<F: Scalar>(cli: &Cli, src: &GroupSource) -> Result<Output> {
    let settings = Settings { max_length: cli.max_length, seed: cli.seed, zeta_grid: cli.zeta_grid.clone() };
    let g = Group::<F>::load(src, settings)?;
    // reject a malformed grid up front for every subcommand
    g.zeta_grid()?;
    Ok(match &cli.command {
        Command::Kl => run::kl(&g),
        Command::Mu => run::mu(&g),
        Command::InverseKl => run::inverse_kl(&g),
        Command::Unimodality => run::unimodality(&g),
        Command::Decompose { word } => run::decompose(&g, word)?,
        Command::Verify { kind, element } => {
            let which = match kind {
                VerifyKind::Hl => Verify::HardLefschetz,
                VerifyKind::Hr => Verify::HodgeRiemann,
                VerifyKind::Sweep => Verify::Sweep,
            };
            run::verify(&g, which, element.as_deref())?
        }
        Command::Rouquier { word } => run::rouquier(&g, word)?,
        Command::Campaign => {
            let checks = match &cli.checks {
                Some(c) => parse_checks(c)?,
                None => ALL_CHECKS.to_vec(),
            };
            campaign::run_campaign(&g, &checks)?
        }
    })
}

fn main_inner(cli: &Cli) -> Result<Output> {
    let src = source(cli)?;
    if cli.checks.is_some() && !matches!(cli.command, Command::Campaign) {
        bail!("--checks only applies to `campaign`");
    }
    match src.field()? {
        FieldKind::Rational => execute::<Rational>(cli, &src),
        FieldKind::Q2 => execute::<Q2>(cli, &src),
        FieldKind::Q3 => execute::<Q3>(cli, &src),
        FieldKind::Q5 => execute::<Q5>(cli, &src),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match main_inner(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out.json).expect("reports serialize"),
        Format::Tsv => out.tsv,
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| anyhow!("writing {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Into::into),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
