//! Command-line flags. Every config key `foo_bar` has a flag `--foo-bar`.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_config_text, Command, ConfigError, RunConfig};

/// Environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "FRACLAB_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "fraclab",
    version,
    about = "Heavy-tailed random walks, their stable limits and fractional operators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Evaluate a pre-limit or limit symbol on a frequency grid.
    Symbol(Params),
    /// Draw endpoints of the random walk or of its limit.
    Simulate(Params),
    /// Run a convergence sweep over a list of scales.
    Converge(Params),
    /// Apply a fractional operator to a test function on a grid.
    Operator(Params),
    /// Run the built-in identity and multiplier checks.
    Verify(Params),
}

impl CommandArgs {
    pub fn split(&self) -> (Command, &Params) {
        match self {
            CommandArgs::Symbol(p) => (Command::Symbol, p),
            CommandArgs::Simulate(p) => (Command::Simulate, p),
            CommandArgs::Converge(p) => (Command::Converge, p),
            CommandArgs::Operator(p) => (Command::Operator, p),
            CommandArgs::Verify(p) => (Command::Verify, p),
        }
    }
}

macro_rules! params {
    ($($field:ident: $help:literal),* $(,)?) => {
        #[derive(Debug, Clone, Default, Args)]
        pub struct Params {
            /// Config file of `key = value` lines with optional `[command]` sections.
            #[arg(long, value_name = "PATH")]
            pub config: Option<PathBuf>,
            $(
                #[arg(long, value_name = "VALUE", allow_hyphen_values = true, help = $help)]
                pub $field: Option<String>,
            )*
        }

        impl Params {
            /// Flags that were given, under their config key names.
            pub fn to_kv(&self) -> BTreeMap<String, String> {
                let mut out = BTreeMap::new();
                $(
                    if let Some(v) = &self.$field {
                        out.insert(stringify!($field).to_string(), v.clone());
                    }
                )*
                out
            }
        }
    };
}

params! {
    thm: "Theorem: 1, 2 or 3",
    alpha: "Tail index",
    beta: "Order of the Riesz derivative",
    gamma: "Jump scale",
    gammas: "Comma-separated, strictly decreasing jump scales",
    lambda: "Poisson rate [default: 1]",
    p: "Probability of a positive jump",
    q: "Probability of a negative jump",
    t: "Time [default: 1]",
    d: "Dimension",
    n: "Sample size [default: 10000]",
    seed: "Master seed [default: 0]",
    xi_min: "Frequency grid lower end [default: -5]",
    xi_max: "Frequency grid upper end [default: 5]",
    xi_points: "Frequency grid points per axis",
    x_min: "Spatial grid lower end [default: -3]",
    x_max: "Spatial grid upper end [default: 3]",
    x_points: "Spatial grid points per axis [default: 61]",
    source: "walk or limit [default: walk]",
    operator: "weyl_left, weyl_right, riesz, frac_laplacian, bochner, frac_multiplier, symbol or generator",
    function: "gaussian, modulated, cosine, constant, linear or quadratic [default: gaussian]",
    center: "Test function center [default: 0]",
    width: "Test function width [default: 1]",
    frequency: "Test function frequency [default: 1]",
    phase: "Cosine phase [default: 0]",
    value: "Constant value, linear slope or quadratic scale [default: 1]",
    form: "compensated, symmetric or uncompensated [default: compensated]",
    cf_tol: "Largest sup CF error accepted at the last scale [default: 0.02]",
    out_dir: "Output directory [default: $FRACLAB_OUT_DIR or ./out]",
    format: "csv, json or both [default: csv]",
    threads: "Worker threads [default: all cores]",
}

/// Merges file values and flags for `command` and validates the result.
pub fn load_config(
    command: Command,
    params: &Params,
    env_out_dir: Option<String>,
) -> Result<RunConfig, ConfigError> {
    let mut kv = match &params.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| ConfigError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            parse_config_text(&text)?.values_for(command)
        }
        None => BTreeMap::new(),
    };
    kv.extend(params.to_kv());
    let default_out = env_out_dir
        .filter(|s| !s.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("out"));
    RunConfig::from_kv(command, &kv, default_out)
}
