//! Experiment configuration files.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hardy::{BoundaryGrid, TruncatedSeries};
use crate::json;
use crate::symbol::{default_grid_size, realize, SymbolRealization, SymbolSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Boundary deviation `||φ| − 1|` accepted as inner.
    #[serde(default = "default_inner_tol")]
    pub inner_tol: f64,
    /// Relative singular-value cutoff for numerical rank.
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
    /// `A_est < eig_tol · B_est` counts as a vanishing lower bound.
    #[serde(default = "default_eig_tol")]
    pub eig_tol: f64,
}

fn default_inner_tol() -> f64 {
    crate::symbol::INNER_TOL_EXACT
}

fn default_rank_tol() -> f64 {
    crate::diagnostics::RANK_TOL
}

fn default_eig_tol() -> f64 {
    crate::frame::ZERO_REL_TOL
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { inner_tol: default_inner_tol(), rank_tol: default_rank_tol(), eig_tol: default_eig_tol() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub symbol: SymbolSpec,
    #[serde(with = "json::complex_vec")]
    pub seed_coeffs: Vec<Complex64>,
    pub truncation_order: usize,
    pub orbit_length: usize,
    /// Defaults to the smallest power of two above `4N`, at least 1024.
    #[serde(default)]
    pub boundary_grid: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Usage(format!("malformed config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.truncation_order;
        if n < 1 {
            return Err(Error::Usage("truncation_order must be at least 1".into()));
        }
        if self.orbit_length < 1 {
            return Err(Error::Usage("orbit_length must be at least 1".into()));
        }
        if self.grid_size() <= 4 * n {
            return Err(Error::Usage(format!("boundary_grid {} must exceed 4N = {}", self.grid_size(), 4 * n)));
        }
        let t = &self.tolerances;
        for (name, v) in [("inner_tol", t.inner_tol), ("rank_tol", t.rank_tol), ("eig_tol", t.eig_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        if self.seed_coeffs.is_empty() {
            return Err(Error::Usage("seed_coeffs is empty".into()));
        }
        self.symbol.validate().map_err(|e| Error::Usage(e.to_string()))?;
        self.seed()?;
        Ok(())
    }

    pub fn grid_size(&self) -> usize {
        self.boundary_grid.unwrap_or_else(|| default_grid_size(self.truncation_order))
    }

    pub fn grid(&self) -> Result<BoundaryGrid> {
        BoundaryGrid::new(self.grid_size())
    }

    pub fn seed(&self) -> Result<TruncatedSeries> {
        TruncatedSeries::from_coeffs(self.seed_coeffs.clone()).map_err(|e| Error::Usage(e.to_string()))
    }

    pub fn realize_symbol(&self) -> Result<SymbolRealization> {
        realize(&self.symbol, self.truncation_order)
    }
}
