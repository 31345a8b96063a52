//! Run configuration: a single JSON document describing the walk, merged
//! with command-line overrides before validation.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use gwalk_core::{CoherentInput, CoinSpec, CoinValue, ModeLayout};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoinConfig {
    Pdc { xi: f64 },
    Bs { theta: f64 },
    Composite { coins: Vec<CoinConfig> },
}

impl CoinConfig {
    pub fn to_spec(&self) -> Result<CoinSpec, CliError> {
        Ok(match self {
            CoinConfig::Pdc { xi } => {
                if !xi.is_finite() {
                    return Err(CliError::Config(format!("coin.xi: {xi} is not finite")));
                }
                CoinSpec::from_squeezing(*xi)
            }
            CoinConfig::Bs { theta } => {
                if !theta.is_finite() {
                    return Err(CliError::Config(format!(
                        "coin.theta: {theta} is not finite"
                    )));
                }
                CoinSpec::from_angle(*theta)
            }
            CoinConfig::Composite { coins } => {
                if coins.is_empty() {
                    return Err(CliError::Config("coin.coins: empty composite coin".into()));
                }
                let mut specs = Vec::with_capacity(coins.len());
                for (i, coin) in coins.iter().enumerate() {
                    if matches!(coin, CoinConfig::Composite { .. }) {
                        return Err(CliError::Config(format!(
                            "coin.coins[{i}]: nested composite coins are not supported"
                        )));
                    }
                    specs.push(coin.to_spec()?);
                }
                CoinSpec::Composite(specs)
            }
        })
    }

    pub fn is_composite(&self) -> bool {
        matches!(self, CoinConfig::Composite { .. })
    }
}

/// One nonzero input amplitude at (position x, coin c).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputEntry {
    pub x: i64,
    pub c: String,
    pub re: f64,
    pub im: f64,
}

impl InputEntry {
    fn coin_value(&self, index: usize) -> Result<CoinValue, CliError> {
        match self.c.as_str() {
            "+" => Ok(CoinValue::Plus),
            "-" => Ok(CoinValue::Minus),
            other => Err(CliError::Config(format!(
                "input[{index}].c: expected \"+\" or \"-\", got {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum EngineChoice {
    #[default]
    Auto,
    Spectral,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
#[clap(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub d: usize,
    pub coin: CoinConfig,
    #[serde(default)]
    pub t_values: Vec<f64>,
    #[serde(default)]
    pub input: Vec<InputEntry>,
    #[serde(default)]
    pub engine: EngineChoice,
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

/// Engine actually used after resolving `auto`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedEngine {
    Spectral,
    Dense,
}

impl ResolvedEngine {
    pub fn name(&self) -> &'static str {
        match self {
            ResolvedEngine::Spectral => "spectral",
            ResolvedEngine::Dense => "dense",
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        // serde_json errors carry line and column diagnostics
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.d < 2 {
            return Err(CliError::Config(format!(
                "d: walk needs at least two positions, got {}",
                self.d
            )));
        }
        self.coin
            .to_spec()?
            .check_constraint()
            .map_err(|e| CliError::Config(format!("coin: {e}")))?;
        for (i, t) in self.t_values.iter().enumerate() {
            if !t.is_finite() || *t < 0.0 {
                return Err(CliError::Config(format!(
                    "t_values[{i}]: {t} must be finite and nonnegative"
                )));
            }
        }
        for (i, entry) in self.input.iter().enumerate() {
            entry.coin_value(i)?;
            if !entry.re.is_finite() || !entry.im.is_finite() {
                return Err(CliError::Config(format!(
                    "input[{i}]: non-finite amplitude"
                )));
            }
        }
        self.resolve_engine().map(|_| ())
    }

    /// Picks the engine: `auto` selects the closed form for simple coins and
    /// the dense composition for composites; the dense engine needs integer
    /// step counts.
    pub fn resolve_engine(&self) -> Result<ResolvedEngine, CliError> {
        let integer_times = self.t_values.iter().all(|t| t.fract() == 0.0);
        match self.engine {
            EngineChoice::Spectral => {
                if self.coin.is_composite() {
                    Err(CliError::Config(
                        "engine: no closed form for composite coins; use dense or auto".into(),
                    ))
                } else {
                    Ok(ResolvedEngine::Spectral)
                }
            }
            EngineChoice::Dense => {
                if integer_times {
                    Ok(ResolvedEngine::Dense)
                } else {
                    Err(CliError::Config(
                        "engine: the dense engine needs integer t_values".into(),
                    ))
                }
            }
            EngineChoice::Auto => {
                if !self.coin.is_composite() {
                    Ok(ResolvedEngine::Spectral)
                } else if integer_times {
                    Ok(ResolvedEngine::Dense)
                } else {
                    Err(CliError::Config(
                        "engine: composite coins evolve densely and need integer t_values".into(),
                    ))
                }
            }
        }
    }

    pub fn coherent_input(&self) -> Result<CoherentInput, CliError> {
        let layout = ModeLayout::new(self.d)
            .map_err(|e| CliError::Config(format!("d: {e}")))?;
        let mut entries = Vec::with_capacity(self.input.len());
        for (i, entry) in self.input.iter().enumerate() {
            entries.push((
                entry.x,
                entry.coin_value(i)?,
                Complex64::new(entry.re, entry.im),
            ));
        }
        CoherentInput::from_entries(&layout, &entries)
            .map_err(|e| CliError::Config(format!("input: {e}")))
    }
}

/// Parses the `--input` flag: either `vacuum` or
/// `x,c,re,im[;x,c,re,im...]`, e.g. `0,+,3.16,0;0,-,0,3.16`.
pub fn parse_input_flag(text: &str) -> Result<Vec<InputEntry>, CliError> {
    let trimmed = text.trim();
    if trimmed.eq_ignore_ascii_case("vacuum") {
        return Ok(Vec::new());
    }
    let mut entries = Vec::new();
    for (i, chunk) in trimmed.split(';').enumerate() {
        let parts: Vec<&str> = chunk.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(CliError::Config(format!(
                "--input entry {i}: expected x,c,re,im, got {chunk:?}"
            )));
        }
        let x = parts[0]
            .parse::<i64>()
            .map_err(|e| CliError::Config(format!("--input entry {i}: x: {e}")))?;
        let re = parts[2]
            .parse::<f64>()
            .map_err(|e| CliError::Config(format!("--input entry {i}: re: {e}")))?;
        let im = parts[3]
            .parse::<f64>()
            .map_err(|e| CliError::Config(format!("--input entry {i}: im: {e}")))?;
        entries.push(InputEntry {
            x,
            c: parts[1].to_string(),
            re,
            im,
        });
    }
    Ok(entries)
}
