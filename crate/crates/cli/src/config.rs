use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::output::Failure;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Human,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub horizon: usize,
    pub float_tolerance: f64,
    pub truncation_ladder: Vec<usize>,
    pub output_dir: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon: opspectra::DEFAULT_HORIZON,
            float_tolerance: 1e-9,
            truncation_ladder: opspectra::spectralops::LADDER.to_vec(),
            output_dir: None,
            format: Format::Json,
        }
    }
}

/// Command-line values that override the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub horizon: Option<usize>,
    pub tolerance: Option<f64>,
    pub ladder: Option<Vec<usize>>,
    pub output_dir: Option<PathBuf>,
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| {
            Failure::Usage(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
        })
    }

    pub fn resolve(file: Option<&Path>, o: Overrides) -> Result<Self, Failure> {
        let mut cfg = match file {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(h) = o.horizon {
            cfg.horizon = h;
        }
        if let Some(t) = o.tolerance {
            cfg.float_tolerance = t;
        }
        if let Some(l) = o.ladder {
            cfg.truncation_ladder = l;
        }
        if o.output_dir.is_some() {
            cfg.output_dir = o.output_dir;
        }
        if let Some(f) = o.format {
            cfg.format = f;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        if self.horizon < 8 {
            return Err(Failure::Usage(format!("horizon must be at least 8, got {}", self.horizon)));
        }
        if !(self.float_tolerance > 0.0 && self.float_tolerance.is_finite()) {
            return Err(Failure::Usage(format!("tolerance must be positive, got {}", self.float_tolerance)));
        }
        if self.truncation_ladder.is_empty() || self.truncation_ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Failure::Usage("truncation ladder must be non-empty and strictly ascending".into()));
        }
        Ok(())
    }
}
