use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;

use crate::error::{Error, Result};

/// Options shared by every subcommand. Each can also come from a config file
/// of flat `key = value` lines named after the long flag; flags win.
#[derive(Args, Clone, Debug, Default, PartialEq)]
pub struct Opts {
    /// Registry id, or `file:<path>` for a sample-cloud CSV
    #[arg(long = "fn", value_name = "ID")]
    pub function: Option<String>,
    /// Dimension for radial and seeded families
    #[arg(long)]
    pub n: Option<usize>,
    /// Center of radial functions, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Truncation radius or box half-width
    #[arg(long)]
    pub radius: Option<f64>,
    /// Sample spacing of the canonical cloud
    #[arg(long)]
    pub mesh: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Relative convexity tolerance, or uniqueness margin for `preservation`
    #[arg(long)]
    pub tol: Option<f64>,
    /// Start point, comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Ball radius
    #[arg(long)]
    pub delta: Option<f64>,
    /// March step
    #[arg(long)]
    pub alpha: Option<f64>,
    /// angular-grid, compass-search or projected-subgradient
    #[arg(long)]
    pub solver: Option<String>,
    /// Stage-1 evaluation budget
    #[arg(long)]
    pub budget: Option<usize>,
    /// Directions in sphere sweeps
    #[arg(long)]
    pub directions: Option<usize>,
    /// Radial levels inside the ball for direction checks
    #[arg(long)]
    pub levels: Option<usize>,
    /// Points per axis for query grids, or segment grid size
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of random instances
    #[arg(long)]
    pub count: Option<usize>,
    /// Probe points, `;` separated, each comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub probes: Option<String>,
    /// Comma-separated step sizes for `bench`
    #[arg(long)]
    pub alphas: Option<String>,
    /// Comma-separated ball radii for `bench`
    #[arg(long)]
    pub deltas: Option<String>,
    /// Fill the wall-time column in `bench`
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub timing: Option<bool>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Config file of `key = value` lines
    #[arg(long)]
    pub config: Option<PathBuf>,
}

fn fill<T: FromStr>(slot: &mut Option<T>, key: &str, value: &str) -> Result<()>
where
    T::Err: std::fmt::Display,
{
    if slot.is_none() {
        *slot = Some(
            value
                .parse()
                .map_err(|e| Error::InvalidInput(format!("config key `{key}`: {e}")))?,
        );
    }
    Ok(())
}

fn scalar_text(key: &str, v: &toml::Value) -> Result<String> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(b) => b.to_string(),
        toml::Value::Array(items) => items
            .iter()
            .map(|i| scalar_text(key, i))
            .collect::<Result<Vec<_>>>()?
            .join(","),
        _ => {
            return Err(Error::InvalidInput(format!(
                "config key `{key}` must be a scalar"
            )))
        }
    })
}

impl Opts {
    /// Fills unset options from the file named by `--config`, if any.
    pub fn resolve(mut self) -> Result<Self> {
        if let Some(path) = self.config.clone() {
            self.merge_file(&path)?;
        }
        Ok(self)
    }

    fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.merge_str(&text)
    }

    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        let table: toml::Table = text
            .parse()
            .map_err(|e| Error::InvalidInput(format!("config file: {e}")))?;
        for (key, value) in &table {
            let v = scalar_text(key, value)?;
            match key.replace('_', "-").as_str() {
                "fn" | "function" => fill(&mut self.function, key, &v)?,
                "n" => fill(&mut self.n, key, &v)?,
                "center" => fill(&mut self.center, key, &v)?,
                "kappa" => fill(&mut self.kappa, key, &v)?,
                "radius" => fill(&mut self.radius, key, &v)?,
                "mesh" => fill(&mut self.mesh, key, &v)?,
                "seed" => fill(&mut self.seed, key, &v)?,
                "tol" => fill(&mut self.tol, key, &v)?,
                "x0" => fill(&mut self.x0, key, &v)?,
                "delta" => fill(&mut self.delta, key, &v)?,
                "alpha" => fill(&mut self.alpha, key, &v)?,
                "solver" => fill(&mut self.solver, key, &v)?,
                "budget" => fill(&mut self.budget, key, &v)?,
                "directions" => fill(&mut self.directions, key, &v)?,
                "levels" => fill(&mut self.levels, key, &v)?,
                "grid" => fill(&mut self.grid, key, &v)?,
                "count" => fill(&mut self.count, key, &v)?,
                "probes" => fill(&mut self.probes, key, &v)?,
                "alphas" => fill(&mut self.alphas, key, &v)?,
                "deltas" => fill(&mut self.deltas, key, &v)?,
                "timing" => fill(&mut self.timing, key, &v)?,
                "out" => fill(&mut self.out, key, &v)?,
                _ => return Err(Error::InvalidInput(format!("unknown config key `{key}`"))),
            }
        }
        Ok(())
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::InvalidInput(format!("`{t}`: {e}")))
        })
        .collect()
}
