use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Flat bands (infinitely degenerate eigenvalues) up to --e-max.
    Flat,
    /// Positive bands up to --k-max.
    Bands,
    /// Negative bands.
    Negative,
    /// Roots of the dispersion relation at --theta (or a θ grid of --n points).
    Dispersion,
    /// Spectral measure in [0, K] for every --window K.
    Measure,
    /// Gap certificates at every --k (or --n points in (0, --k-max]).
    Certify,
    /// Asymptotic predictions next to solved values.
    Asymptotics,
    /// Vertex scattering matrix distance to the identity.
    Scattering,
    /// Proof witnesses plus a randomized determinant / closed-form sweep.
    Selfcheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Flat => "flat",
            Command::Bands => "bands",
            Command::Negative => "negative",
            Command::Dispersion => "dispersion",
            Command::Measure => "measure",
            Command::Certify => "certify",
            Command::Asymptotics => "asymptotics",
            Command::Scattering => "scattering",
            Command::Selfcheck => "selfcheck",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Everything that determines the output of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub ell: f64,
    pub ell_pi: bool,
    pub k_max: f64,
    pub e_max: f64,
    pub theta: Option<f64>,
    pub resolution: f64,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub k: Vec<f64>,
    pub n: usize,
    pub window: Vec<f64>,
    pub degree: Vec<usize>,
}

pub const DEFAULT_WINDOWS: [f64; 3] = [1e2, 1e3, 1e4];
pub const DEFAULT_DEGREES: [usize; 2] = [3, 4];

#[derive(Debug, Parser)]
#[command(name = "ringchain", version, about = "Spectra of periodic ring chains with a rotating vertex coupling")]
pub struct Cli {
    /// Analysis to run; optional with --from-config.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// Connecting link length ℓ (0 is the tight chain).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub ell: f64,

    /// Use ℓ = π exactly (overrides --ell).
    #[arg(long)]
    pub ell_pi: bool,

    #[arg(long, default_value_t = 10.0)]
    pub k_max: f64,

    #[arg(long, default_value_t = 100.0)]
    pub e_max: f64,

    /// Quasimomentum for `dispersion`.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,

    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; standard output when absent (or $RINGCHAIN_OUTPUT_DIR/<command>.<format> if set).
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Explicit k values for `certify` and `scattering` (repeatable).
    #[arg(long, allow_negative_numbers = true)]
    pub k: Vec<f64>,

    /// Number of grid points or random brackets.
    #[arg(long, default_value_t = 64)]
    pub n: usize,

    /// Window K for `measure` (repeatable); defaults to 1e2, 1e3, 1e4.
    #[arg(long)]
    pub window: Vec<f64>,

    /// Vertex degree for `scattering` (repeatable); defaults to 3 and 4.
    #[arg(long)]
    pub degree: Vec<usize>,

    /// Re-run from an echoed config: a JSON object, a `# config` line, or a file holding either.
    #[arg(long)]
    pub from_config: Option<String>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, String> {
        if let Some(src) = &self.from_config {
            let mut cfg = parse_config_source(src)?;
            if let Some(command) = self.command {
                if command != cfg.command {
                    return Err(format!(
                        "command `{}` conflicts with `{}` in --from-config",
                        command.name(),
                        cfg.command.name()
                    ));
                }
            }
            if self.output.is_some() {
                cfg.output = self.output;
            }
            return Ok(cfg);
        }
        let command = self.command.ok_or("missing command (or --from-config)")?;
        Ok(RunConfig {
            command,
            ell: if self.ell_pi { std::f64::consts::PI } else { self.ell },
            ell_pi: self.ell_pi,
            k_max: self.k_max,
            e_max: self.e_max,
            theta: self.theta,
            resolution: self.resolution,
            format: self.format,
            output: self.output,
            seed: self.seed,
            k: self.k,
            n: self.n,
            window: if self.window.is_empty() { DEFAULT_WINDOWS.to_vec() } else { self.window },
            degree: if self.degree.is_empty() { DEFAULT_DEGREES.to_vec() } else { self.degree },
        })
    }
}

fn parse_config_source(src: &str) -> Result<RunConfig, String> {
    let text = if src.trim_start().starts_with('{') || src.trim_start().starts_with('#') {
        src.to_string()
    } else {
        std::fs::read_to_string(src).map_err(|e| format!("cannot read config `{src}`: {e}"))?
    };
    let json = text
        .lines()
        .find_map(|l| l.trim().strip_prefix("# config "))
        .map(str::to_string)
        .unwrap_or(text);
    let value: serde_json::Value = serde_json::from_str(&json).map_err(|e| format!("bad config JSON: {e}"))?;
    // a whole JSON report carries the config under "config"
    let value = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(value).map_err(|e| format!("bad config: {e}"))
}
