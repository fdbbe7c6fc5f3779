//! `qcoh`: coherence measures, incoherent channels, gate optima and
//! tripartite additivity from the command line.
//!
//! Exit status: 0 on success, 2 on invalid input, 3 when an optimizer hit its
//! iteration cap (the report is still printed).

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use output::{Format, Settings};

#[derive(Debug, Parser)]
#[command(name = "qcoh", version, about = "Quantum coherence toolkit")]
struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Restarts per optimization.
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,
    /// Iteration cap per restart.
    #[arg(long, global = true, default_value_t = 2000)]
    max_iterations: usize,
    /// Simplex-diameter tolerance for convergence.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CoptChoice {
    OneSide,
    TwoSide,
    Kernel,
    FullU4,
    Ordering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepKind {
    /// GHZ family over |alpha|^2 in [0, 1]
    Ghz,
    /// one-side gain F(|a|^2) for a fixed spectrum
    OneSide,
    /// W family over the (|alpha|^2, |beta|^2) simplex
    W,
    /// closed-form optima for seeded random spectra
    Ordering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GeneratorChoice {
    Ssa,
    Ghz,
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeChoice {
    IncoherentInputs,
    AllInputs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relative entropy (or l1) coherence in a product basis.
    Coherence {
        #[arg(long)]
        state: PathBuf,
        /// Basis document; the computational basis when omitted.
        #[arg(long)]
        basis: Option<PathBuf>,
        /// Report the l1 norm of coherence instead.
        #[arg(long)]
        l1: bool,
    },
    /// Relative-entropy discord.
    Discord {
        #[arg(long)]
        state: PathBuf,
    },
    /// Coherence minimized over local product unitaries.
    BasisFree {
        #[arg(long)]
        state: PathBuf,
    },
    /// Coherence, discord and (pure bipartite) entanglement side by side.
    Hierarchy {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Check a Kraus set for completeness and incoherent column structure.
    ValidateKraus {
        #[arg(long)]
        file: PathBuf,
    },
    /// Apply a Kraus set to a state.
    Channel {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        kraus: PathBuf,
        /// Report every measurement branch.
        #[arg(long)]
        selective: bool,
        /// Write the output state here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal coherence created from diag(delta) by a gate family.
    Copt {
        /// Four comma-separated populations.
        #[arg(long, allow_hyphen_values = true)]
        delta: String,
        #[arg(long, value_enum, default_value_t = CoptChoice::Ordering)]
        family: CoptChoice,
        /// Also run the numeric search for closed-form families.
        #[arg(long)]
        numeric: bool,
    },
    /// Cartan kernel for a Weyl-chamber vector.
    Cartan {
        /// Three comma-separated reals c1,c2,c3.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coherent power of a gate.
    Power {
        /// Gate matrix document.
        #[arg(long, conflicts_with_all = ["cartan", "hh"])]
        gate: Option<PathBuf>,
        /// Use the Cartan kernel at c1,c2,c3.
        #[arg(long, allow_hyphen_values = true)]
        cartan: Option<String>,
        /// Use the product of two Hadamard-like gates.
        #[arg(long)]
        hh: bool,
        #[arg(long, value_enum, default_value_t = ModeChoice::IncoherentInputs)]
        mode: ModeChoice,
    },
    /// Tripartite additivity gap.
    Additivity {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Entropy decomposition of the additivity gap.
    Delta {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Search a state family for negative additivity gaps.
    Search {
        #[arg(long, value_enum, default_value_t = GeneratorChoice::Ssa)]
        generator: GeneratorChoice,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// GHZ-family state alpha|000> + beta|111>.
    Ghz {
        /// Amplitude as `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// W-family state alpha|001> + beta|010> + gamma|100>.
    W {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
    },
    /// Parameter sweeps as tables.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        /// Grid points per axis (sample count for `ordering`).
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Spectrum for `one-side`.
        #[arg(long, default_value = "0.1,0.2,0.3,0.4", allow_hyphen_values = true)]
        delta: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = Settings {
        seed: cli.seed,
        restarts: cli.restarts,
        max_iterations: cli.max_iterations,
        step_tolerance: cli.tol,
    };
    match commands::run(&cli.command, &settings) {
        Ok(report) => {
            print!("{}", report.render(cli.format, &settings));
            if report.rejected {
                ExitCode::from(2)
            } else if report.unconverged {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
