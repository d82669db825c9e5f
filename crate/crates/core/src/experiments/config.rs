//! Run configuration and its line-oriented `key = value` text form.
//!
//! ```text
//! # comments and blank lines are ignored
//! form = vector
//! kind = type3
//! epsilon = 0.1
//! lambda = 4.1
//! n = 128
//! dt = 4.2943e-4
//! T = 2
//! snapshot_every = 0.1
//! init = grad-sines
//! output_dir = out
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::calming::{Calming, CalmingKind};
use crate::dynamics::EquationForm;
use crate::error::{Error, Result};
use crate::field::Shape;
use crate::spectral::Grid;

pub const DEFAULT_N: usize = 128;
pub const DEFAULT_LAMBDA: f64 = 4.1;
pub const DEFAULT_DT: f64 = 4.2943e-4;
/// Step used for the large-data robustness runs.
pub const FINE_DT: f64 = 1.0736e-4;
pub const DEFAULT_T: f64 = 1.0;
pub const DEFAULT_SNAPSHOT_EVERY: f64 = 0.1;
pub const DEFAULT_CFL: f64 = 1.0;

/// Seven log-spaced calming parameters from `1e-1` down to `1e-3`.
pub fn default_eps_list() -> Vec<f64> {
    (0..7)
        .map(|i| 10f64.powf(-1.0 - 2.0 * i as f64 / 6.0))
        .collect()
}

/// Initial-data presets.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialPreset {
    /// Vector form: `u0 = grad(sin(x+y) + sin x + sin y)`; scalar form: the
    /// potential itself.
    GradSines,
    /// `u0 = 4 (cos(x+y) + sin 3x, cos(x+y) + cos 4y)`, vector form only.
    HighOsc,
    /// A snapshot file written by this crate.
    Custom(PathBuf),
}

impl fmt::Display for InitialPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialPreset::GradSines => f.write_str("grad-sines"),
            InitialPreset::HighOsc => f.write_str("high-osc"),
            InitialPreset::Custom(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for InitialPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "grad-sines" => Ok(InitialPreset::GradSines),
            "high-osc" => Ok(InitialPreset::HighOsc),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(InitialPreset::Custom(PathBuf::from(path))),
                _ => Err(Error::InvalidParameter(format!(
                    "unknown initial preset '{s}' (expected grad-sines, high-osc or file:<path>)"
                ))),
            },
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub shape: Shape,
    pub kind: CalmingKind,
    pub epsilon: f64,
    pub lambda: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub snapshot_every: f64,
    pub initial: InitialPreset,
    pub output_dir: PathBuf,
    pub eps_list: Vec<f64>,
    pub cfl: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            shape: Shape::Vector,
            kind: CalmingKind::Identity,
            epsilon: 0.1,
            lambda: DEFAULT_LAMBDA,
            n: DEFAULT_N,
            dt: DEFAULT_DT,
            t_end: DEFAULT_T,
            snapshot_every: DEFAULT_SNAPSHOT_EVERY,
            initial: InitialPreset::GradSines,
            output_dir: PathBuf::from("output"),
            eps_list: default_eps_list(),
            cfl: DEFAULT_CFL,
        }
    }
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64> {
    value.parse::<f64>().map_err(|_| Error::Parse {
        line,
        message: format!("{key}: '{value}' is not a number"),
    })
}

impl RunConfig {
    pub fn calming(&self) -> Result<Calming> {
        Calming::new(self.kind, self.epsilon)
    }

    pub fn form(&self) -> Result<EquationForm> {
        EquationForm::new(self.shape, self.calming()?, self.lambda)
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n)
    }

    /// Checks every invariant; run before any work starts.
    pub fn validate(&self) -> Result<()> {
        Grid::new(self.n)?;
        self.form()?;
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
            }
        };
        positive("dt", self.dt)?;
        positive("snapshot_every", self.snapshot_every)?;
        positive("cfl", self.cfl)?;
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "T must be >= 0, got {}",
                self.t_end
            )));
        }
        if self.t_end > 0.0 && self.dt > self.t_end {
            return Err(Error::InvalidParameter(format!(
                "dt = {} exceeds T = {}",
                self.dt, self.t_end
            )));
        }
        if self.initial == InitialPreset::HighOsc && self.shape == Shape::Scalar {
            return Err(Error::InvalidParameter(
                "high-osc initial data is only defined for the vector form".into(),
            ));
        }
        Ok(())
    }

    /// Checks the calming-parameter sweep used by convergence studies.
    pub fn validate_sweep(&self) -> Result<()> {
        if self.kind == CalmingKind::Identity {
            return Err(Error::InvalidParameter(
                "convergence studies need a calming kind other than identity".into(),
            ));
        }
        if self.eps_list.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "eps-list needs at least 3 values, got {}",
                self.eps_list.len()
            )));
        }
        if let Some(bad) = self.eps_list.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "eps-list values must be > 0, got {bad}"
            )));
        }
        let mut sorted = self.eps_list.clone();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();
        if sorted.len() < 3 {
            return Err(Error::InvalidParameter(
                "eps-list needs at least 3 distinct values".into(),
            ));
        }
        Ok(())
    }

    /// Applies one `key = value` assignment.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        let value = value.trim();
        let invalid = |e: Error| Error::Parse {
            line,
            message: e.to_string(),
        };
        match key.trim() {
            "form" => self.shape = value.parse().map_err(invalid)?,
            "kind" => self.kind = value.parse().map_err(invalid)?,
            "epsilon" => self.epsilon = parse_f64(key, value, line)?,
            "lambda" => self.lambda = parse_f64(key, value, line)?,
            "n" => {
                self.n = value.parse().map_err(|_| Error::Parse {
                    line,
                    message: format!("n: '{value}' is not a positive integer"),
                })?
            }
            "dt" => self.dt = parse_f64(key, value, line)?,
            "T" => self.t_end = parse_f64(key, value, line)?,
            "snapshot_every" => self.snapshot_every = parse_f64(key, value, line)?,
            "init" => self.initial = value.parse().map_err(invalid)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            "eps_list" => {
                self.eps_list = value
                    .split(',')
                    .map(|v| parse_f64(key, v.trim(), line))
                    .collect::<Result<_>>()?
            }
            "cfl" => self.cfl = parse_f64(key, value, line)?,
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown key '{other}'"),
                })
            }
        }
        Ok(())
    }

    /// Parses config text on top of `self`; later keys win.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (key, value, line) in parse_key_values(text)? {
            self.set(&key, &value, line)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }

    /// Full resolved configuration in the same text format.
    pub fn to_text(&self) -> String {
        let eps: Vec<String> = self.eps_list.iter().map(|e| format!("{e:?}")).collect();
        format!(
            "form = {}\nkind = {}\nepsilon = {:?}\nlambda = {:?}\nn = {}\ndt = {:?}\nT = {:?}\n\
             snapshot_every = {:?}\ninit = {}\noutput_dir = {}\neps_list = {}\ncfl = {:?}\n",
            self.shape,
            self.kind,
            self.epsilon,
            self.lambda,
            self.n,
            self.dt,
            self.t_end,
            self.snapshot_every,
            self.initial,
            self.output_dir.display(),
            eps.join(", "),
            self.cfl,
        )
    }
}

/// Splits `key = value` text into entries, skipping blanks and `#` comments.
/// Line numbers are 1-based.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String, usize)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "empty key".into(),
            });
        }
        out.push((key.to_string(), value.trim().to_string(), idx + 1));
    }
    Ok(out)
}

/// Same as [`parse_key_values`] but collected into a map, rejecting
/// duplicate keys.
pub fn parse_key_value_map(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (key, value, line) in parse_key_values(text)? {
        if map.insert(key.clone(), value).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key '{key}'"),
            });
        }
    }
    Ok(map)
}
