mod coord;
mod descriptor;
mod frame;
mod lattice;
mod repr;
mod report;
mod ring;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;
use starreg::frames::Level;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid input; exit status 2.
    Input { location: String, message: String },
}

impl CliError {
    pub fn input(location: impl Into<String>, message: impl Into<String>) -> CliError {
        CliError::Input { location: location.into(), message: message.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Debug, Args)]
pub struct Config {
    /// Seed for every sampled check; recorded in JSON reports.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest carrier enumerated exhaustively.
    #[arg(long = "budget-elements", global = true, default_value_t = 6561, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Samples drawn where a carrier is too large to enumerate.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
}

impl Config {
    pub fn budget(&self) -> usize {
        self.budget as usize
    }

    pub fn samples(&self) -> usize {
        self.samples as usize
    }
}

#[derive(Parser)]
#[command(name = "starreg", version, about = "Checks *-regular rings, their ideal lattices, frames and coordinatization")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rings with involution.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Lattices of principal right ideals and explicit lattices.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// (n,k)-frames.
    #[command(subcommand)]
    Frame(FrameCmd),
    /// Decomposition systems and the maps θ, η, ρ; adjointness.
    #[command(subcommand)]
    Coord(CoordCmd),
    /// Representations extended from ideals or built by coordinatization.
    #[command(subcommand)]
    Repr(ReprCmd),
    /// Named example rings.
    #[command(subcommand)]
    Catalog(CatalogCmd),
}

#[derive(Subcommand)]
enum RingCmd {
    /// Star-ring axioms, *-regularity and the Rickart projections.
    Check { input: String },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Lattice of principal right ideals of a finite ring.
    Build { input: String },
    /// Modularity, complements, orthocomplement axioms, simplicity, duality.
    Check { input: String },
}

#[derive(Subcommand)]
enum FrameCmd {
    /// Search a context for an (n,k)-frame.
    Find {
        input: String,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long, default_value_t = 0)]
        k: usize,
    },
    /// Check every clause of a level.
    Verify {
        input: String,
        #[arg(long)]
        level: Option<Level>,
    },
    /// Derive the remaining axes and choose the complements z_ij.
    Stabilize { input: String },
    /// Replace the tails by pieces orthogonal to the leading part.
    Orthogonalize { input: String },
    /// Lift a frame of a quotient lattice along the quotient map.
    Lift {
        input: String,
        #[arg(long, default_value_t = Level::Stable)]
        level: Level,
    },
}

#[derive(Subcommand)]
enum CoordCmd {
    /// Decomposition system, coefficient ring and θ.
    Theta { input: String },
    /// The ring morphism η induced by a lattice embedding.
    Eta { input: String },
    /// ρ = η∘θ and preservation of the involution.
    Rho { input: String },
    /// Pointwise and graph-orthogonality adjointness tests.
    Adjoint { input: String },
}

#[derive(Subcommand)]
enum ReprCmd {
    /// Extend a *-representation of an ideal to the whole ring.
    Extend { input: String },
    /// Recompute a representation file and compare with its recorded verdicts.
    Verify { input: String },
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
}

fn dispatch(cfg: &Config, command: Command) -> Result<Report, CliError> {
    match command {
        Command::Ring(RingCmd::Check { input }) => ring::check(cfg, &input),
        Command::Lattice(LatticeCmd::Build { input }) => lattice::build(cfg, &input),
        Command::Lattice(LatticeCmd::Check { input }) => lattice::check(cfg, &input),
        Command::Frame(FrameCmd::Find { input, n, k }) => frame::find(cfg, &input, n, k),
        Command::Frame(FrameCmd::Verify { input, level }) => frame::verify(cfg, &input, level),
        Command::Frame(FrameCmd::Stabilize { input }) => frame::stabilize(cfg, &input),
        Command::Frame(FrameCmd::Orthogonalize { input }) => frame::orthogonalize(cfg, &input),
        Command::Frame(FrameCmd::Lift { input, level }) => frame::lift(cfg, &input, level),
        Command::Coord(CoordCmd::Theta { input }) => coord::theta(cfg, &input),
        Command::Coord(CoordCmd::Eta { input }) => coord::eta(cfg, &input, false),
        Command::Coord(CoordCmd::Rho { input }) => coord::eta(cfg, &input, true),
        Command::Coord(CoordCmd::Adjoint { input }) => coord::adjoint(cfg, &input),
        Command::Repr(ReprCmd::Extend { input }) => repr::extend(cfg, &input),
        Command::Repr(ReprCmd::Verify { input }) => repr::verify(cfg, &input),
        Command::Catalog(CatalogCmd::List) => ring::catalog(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config;
    let outcome = dispatch(&cfg, cli.command).and_then(|r| Ok((r.render(cfg.format, cfg.seed)?, r.passed)));
    match outcome {
        Ok((text, passed)) => {
            let written = match &cfg.out {
                Some(path) => std::fs::write(path, text).map_err(|e| format!("{path}: {e}")),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(CliError::Input { location, message }) => {
            eprintln!("error: {location}: {message}");
            ExitCode::from(2)
        }
    }
}
