//! Command-line front end for the exact series engine: argument model,
//! geometry files, dispatch and result documents.

pub mod commands;
pub mod document;
pub mod spec;

use std::path::PathBuf;
use clap::{Parser, Subcommand, ValueEnum};

use sepvar_core::algebra::Order;
use sepvar_core::verify::Suite;

#[derive(Parser, Debug)]
#[command(name = "sepvar", version, about = "Exact series computations for symplectic groupoids and star products")]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Flags {
    /// Preset name (flat, disc, fubini-study) or path to a TOML geometry file.
    #[arg(long, global = true, default_value = "flat")]
    pub geometry: String,
    /// Dimension for presets.
    #[arg(long, global = true, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, global = true, default_value_t = 4)]
    pub fiber_order: Order,
    #[arg(long, global = true, default_value_t = 5)]
    pub nu_order: usize,
    /// Base jet order; defaults to the file's value or 12.
    #[arg(long, global = true)]
    pub jet_order: Option<Order>,
    /// TOML file whose `psi` array gives the potential perturbation.
    #[arg(long, global = true)]
    pub psi: Option<PathBuf>,
    /// source|target for maps, left|right for multiplication operators.
    #[arg(long, global = true)]
    pub side: Option<String>,
    /// JSON array of terms `{"z": [..], "zbar": [..], "re": "p/q"}`, or `@path`.
    #[arg(long, global = true)]
    pub function: Option<String>,
    /// Second factor for `star`, in the same form as `--function`.
    #[arg(long, global = true)]
    pub with: Option<String>,
    #[arg(long, global = true, default_value_t = 3)]
    pub test_degree: u32,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,
    #[arg(long, global = true)]
    pub skip_jacobi: bool,
    /// Run independent checks one at a time.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Verb {
    /// Element of the symbol set for the geometry.
    SolveK,
    /// Its first-order deformation along `h`.
    SolveF,
    /// Source map applied to `--function`.
    Source,
    /// Target map applied to `--function`.
    Target,
    /// `f ∗ g`, or the multiplication operator of `f` when `--with` is absent.
    Star,
    /// Berezin transform as a formal differential operator.
    Berezin,
    /// `ν log B` and its symbol.
    LogX,
    /// Compares the symbol of the odd part of `ν log B` with half the deformation term.
    SigmaY,
    /// Runs a named verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: sepvar_core::Error| e.to_string())
}
