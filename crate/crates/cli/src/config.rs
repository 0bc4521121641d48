//! Run configuration: JSON file, region presets and flag overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use vortfront_core::params::DEFAULT_EPS_MAX;
use vortfront_core::{Params, Region};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OdeConfig {
    pub a0: f64,
    pub b0: f64,
    pub x_max: f64,
    pub step: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig {
            a0: -1.5,
            b0: 0.0,
            x_max: 20.0,
            step: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KRange {
    pub k_min: f64,
    pub k_max: f64,
    pub samples: usize,
}

impl Default for KRange {
    fn default() -> Self {
        KRange {
            k_min: -50.0,
            k_max: 50.0,
            samples: 2001,
        }
    }
}

/// Everything a subcommand needs. There is no randomness anywhere, so equal
/// configs give byte-equal data files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub h: f64,
    pub omega0: f64,
    pub eps: f64,
    pub eps_max: f64,
    pub nx: usize,
    pub ny: usize,
    /// Half-width of the X window in units of `1/κ`.
    pub x_window: f64,
    /// Number of Ψ contour levels in a portrait.
    pub levels: usize,
    pub ode: OdeConfig,
    pub k_range: KRange,
    /// Output directory.
    pub out: PathBuf,
    /// Per-artifact file names, relative to `out` unless absolute.
    pub outputs: BTreeMap<String, PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            h: 0.5,
            omega0: 0.25,
            eps: 1e-3,
            eps_max: DEFAULT_EPS_MAX,
            nx: 401,
            ny: 201,
            x_window: 10.0,
            levels: 24,
            ode: OdeConfig::default(),
            k_range: KRange::default(),
            out: PathBuf::from("."),
            outputs: BTreeMap::new(),
        }
    }
}

pub const ARTIFACTS: [(&str, &str); 6] = [
    ("dispersion", "dispersion.csv"),
    ("trajectory", "trajectory.csv"),
    ("field", "field.csv"),
    ("report", "report.json"),
    ("portrait", "portrait.csv"),
    ("stagnation", "stagnation.json"),
];

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.nx < 2 || self.ny < 2 {
            return bad("nx and ny must be at least 2");
        }
        if !(self.x_window > 0.0 && self.x_window.is_finite()) {
            return bad("x_window must be positive");
        }
        if !(self.eps_max > 0.0) {
            return bad("eps_max must be positive");
        }
        if !(self.ode.step > 0.0 && self.ode.x_max > 0.0) {
            return bad("ode.step and ode.x_max must be positive");
        }
        if self.k_range.samples < 2 || !(self.k_range.k_max > self.k_range.k_min) {
            return bad("k_range needs samples >= 2 and k_max > k_min");
        }
        if self.levels == 0 {
            return bad("levels must be positive");
        }
        if let Some(k) = self
            .outputs
            .keys()
            .find(|k| !ARTIFACTS.iter().any(|a| a.0 == k.as_str()))
        {
            return Err(CliError::Config(format!("unknown output name {k:?}")));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<Params, CliError> {
        Ok(Params::with_ceiling(self.h, self.omega0, self.eps, self.eps_max)?)
    }

    pub fn output_path(&self, artifact: &str) -> PathBuf {
        let default = ARTIFACTS
            .iter()
            .find(|a| a.0 == artifact)
            .map(|a| a.1)
            .unwrap_or(artifact);
        let name = self
            .outputs
            .get(artifact)
            .map(PathBuf::as_path)
            .unwrap_or(Path::new(default));
        self.out.join(name)
    }
}

/// Flags shared by every subcommand; each mirrors a config key.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON config file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Canned (h, ω₀) for one of the six regions i..vi.
    #[arg(long)]
    pub region: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub h: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub eps_max: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long)]
    pub x_window: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub a0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b0: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub k_max: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Defaults, then the config file, then the region preset, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(label) = &self.region {
            let (h, w0) = Region::from_label(label)
                .and_then(Region::representative)
                .ok_or_else(|| CliError::Config(format!("unknown region {label:?}; expected i..vi")))?;
            c.h = h;
            c.omega0 = w0;
        }
        fn set<T: Copy>(dst: &mut T, v: Option<T>) {
            if let Some(v) = v {
                *dst = v;
            }
        }
        set(&mut c.h, self.h);
        set(&mut c.omega0, self.omega0);
        set(&mut c.eps, self.eps);
        set(&mut c.eps_max, self.eps_max);
        set(&mut c.nx, self.nx);
        set(&mut c.ny, self.ny);
        set(&mut c.x_window, self.x_window);
        set(&mut c.levels, self.levels);
        set(&mut c.ode.a0, self.a0);
        set(&mut c.ode.b0, self.b0);
        set(&mut c.ode.x_max, self.x_max);
        set(&mut c.ode.step, self.step);
        set(&mut c.k_range.k_min, self.k_min);
        set(&mut c.k_range.k_max, self.k_max);
        set(&mut c.k_range.samples, self.samples);
        if let Some(o) = &self.out {
            c.out = o.clone();
        }
        c.validate()?;
        Ok(c)
    }
}
