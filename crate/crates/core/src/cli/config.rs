//! Flat `key = value` run configuration with `#` comments.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use thiserror::Error;

use crate::correction::MeasureMode;
use crate::mixed::MixedEnvModel;
use crate::numerics::pauli_combination;
use crate::state::{BlochVector, DensityMatrix, Ket};
use crate::DephasingModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Roundtrip,
    Scan,
    MixedScan,
    Fig4,
    CheckAppendix,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Roundtrip => "roundtrip",
            Mode::Scan => "scan",
            Mode::MixedScan => "mixed-scan",
            Mode::Fig4 => "fig4",
            Mode::CheckAppendix => "check-appendix",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}`: {msg}")]
    Value { key: String, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// How the relative Hamiltonians are given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hamiltonians {
    /// Pauli coefficients `(γ0, γ1, γ2, γ3)` of `h1` and `h2`.
    Pauli { h1: [f64; 4], h2: [f64; 4] },
    /// `h1,2 = ±kσz + Γ·σ`
    Coupling { k: f64, gamma: [f64; 3] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Enumerate,
    Sample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub hamiltonians: Hamiltonians,
    pub theta: f64,
    pub phi: f64,
    pub w: f64,
    pub rho: [f64; 3],
    pub t_start: f64,
    pub t_end: f64,
    pub t_steps: usize,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub regime_tol: f64,
    pub measure: Measure,
}

impl RunConfig {
    /// Built-in parameters for each mode.
    pub fn defaults(mode: Mode) -> Self {
        let base = Self {
            mode,
            hamiltonians: Hamiltonians::Coupling {
                k: 1.0,
                gamma: [0.5, 0.0, 0.25],
            },
            theta: PI / 4.0,
            phi: 0.0,
            w: 1.0,
            rho: [1.0, 0.0, 0.0],
            t_start: 0.0,
            t_end: 2.0 * PI,
            t_steps: 400,
            seed: 0,
            output_path: None,
            regime_tol: 1e-5,
            measure: Measure::Enumerate,
        };
        match mode {
            Mode::Roundtrip | Mode::Scan => base,
            Mode::MixedScan | Mode::Fig4 => Self { w: 0.9, ..base },
            // near-parallel relative states with a transverse field reach C ≈ 1 - iε
            Mode::CheckAppendix => Self {
                hamiltonians: Hamiltonians::Coupling {
                    k: 0.05,
                    gamma: [1.0, 0.0, 0.0],
                },
                theta: 0.3,
                w: 0.9,
                t_steps: 4001,
                ..base
            },
        }
    }

    pub fn from_file(mode: Mode, path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(mode, &text)
    }

    /// Starts from [`RunConfig::defaults`] and applies every assignment in `text`.
    pub fn parse(mode: Mode, text: &str) -> Result<Self, ConfigError> {
        let entries = parse_entries(text)?;
        let mut cfg = Self::defaults(mode);
        let mut h1 = None;
        let mut h2 = None;
        let (mut k, mut gamma) = match cfg.hamiltonians {
            Hamiltonians::Coupling { k, gamma } => (k, gamma),
            Hamiltonians::Pauli { .. } => unreachable!(),
        };
        for (key, value) in &entries {
            match key.as_str() {
                "h1" => h1 = Some(floats::<4>(key, value)?),
                "h2" => h2 = Some(floats::<4>(key, value)?),
                "k" => k = scalar(key, value)?,
                "gamma" => gamma = floats::<3>(key, value)?,
                "theta" => cfg.theta = scalar(key, value)?,
                "phi" => cfg.phi = scalar(key, value)?,
                "w" => cfg.w = scalar(key, value)?,
                "rho" => cfg.rho = floats::<3>(key, value)?,
                "t_start" => cfg.t_start = scalar(key, value)?,
                "t_end" => cfg.t_end = scalar(key, value)?,
                "t_steps" => cfg.t_steps = scalar(key, value)?,
                "seed" => cfg.seed = scalar(key, value)?,
                "output_path" => cfg.output_path = Some(PathBuf::from(value)),
                "regime_tol" => cfg.regime_tol = scalar(key, value)?,
                "measure" => {
                    cfg.measure = match value.as_str() {
                        "enumerate" => Measure::Enumerate,
                        "sample" => Measure::Sample,
                        other => {
                            return Err(ConfigError::Value {
                                key: key.clone(),
                                msg: format!("expected `enumerate` or `sample`, got `{other}`"),
                            })
                        }
                    }
                }
                _ => return Err(ConfigError::UnknownKey(key.clone())),
            }
        }
        cfg.hamiltonians = match (h1, h2) {
            (Some(h1), Some(h2)) => Hamiltonians::Pauli { h1, h2 },
            (None, None) => Hamiltonians::Coupling { k, gamma },
            _ => {
                return Err(ConfigError::Invalid(
                    "h1 and h2 must be given together".into(),
                ))
            }
        };
        if entries.iter().any(|(k, _)| k == "k" || k == "gamma")
            && matches!(cfg.hamiltonians, Hamiltonians::Pauli { .. })
        {
            return Err(ConfigError::Invalid(
                "give either h1/h2 or k/gamma, not both".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!("{name} must be finite")))
            }
        };
        finite("theta", self.theta)?;
        finite("phi", self.phi)?;
        finite("t_start", self.t_start)?;
        finite("t_end", self.t_end)?;
        match self.hamiltonians {
            Hamiltonians::Pauli { h1, h2 } => {
                h1.iter().chain(&h2).try_for_each(|&x| finite("h1/h2", x))?
            }
            Hamiltonians::Coupling { k, gamma } => {
                finite("k", k)?;
                gamma.iter().try_for_each(|&x| finite("gamma", x))?;
            }
        }
        self.rho.iter().try_for_each(|&x| finite("rho", x))?;
        if self.t_steps < 1 {
            return Err(ConfigError::Invalid("t_steps must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.w) {
            return Err(ConfigError::Invalid(format!(
                "w must lie in [0, 1], got {}",
                self.w
            )));
        }
        if !(self.regime_tol > 0.0 && self.regime_tol.is_finite()) {
            return Err(ConfigError::Invalid("regime_tol must be positive".into()));
        }
        self.initial_state()?;
        Ok(())
    }

    pub fn psi0(&self) -> Ket<f64> {
        Ket::from_bloch_angles(self.theta, self.phi)
    }

    pub fn initial_state(&self) -> Result<DensityMatrix<f64>, ConfigError> {
        let [x, y, z] = self.rho;
        BlochVector::new(x, y, z)
            .map(|b| b.to_density())
            .map_err(|e| ConfigError::Invalid(format!("rho: {e}")))
    }

    pub fn pure_model(&self) -> Result<DephasingModel<f64>, ConfigError> {
        let (h1, h2) = match self.hamiltonians {
            Hamiltonians::Pauli { h1, h2 } => (pauli_combination(h1), pauli_combination(h2)),
            Hamiltonians::Coupling {
                k,
                gamma: [g1, g2, g3],
            } => (
                pauli_combination([0.0, g1, g2, g3 + k]),
                pauli_combination([0.0, g1, g2, g3 - k]),
            ),
        };
        DephasingModel::new(h1, h2, self.psi0()).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn mixed_model(&self) -> Result<MixedEnvModel<f64>, ConfigError> {
        let model = match self.hamiltonians {
            Hamiltonians::Coupling { k, gamma } => {
                MixedEnvModel::from_coupling(self.w, k, gamma, self.psi0())
            }
            Hamiltonians::Pauli { h1, h2 } => MixedEnvModel::from_hamiltonians(
                self.w,
                pauli_combination(h1),
                pauli_combination(h2),
                self.psi0(),
            ),
        };
        model.map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Measurement mode for grid point `index`; sampling seeds advance with the index.
    pub fn measure_mode(&self, index: usize) -> MeasureMode {
        match self.measure {
            Measure::Enumerate => MeasureMode::Enumerate,
            Measure::Sample => MeasureMode::Sample(self.seed.wrapping_add(index as u64)),
        }
    }
}

fn parse_entries(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            msg: "expected `key = value`".into(),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line: i + 1,
                msg: "empty key or value".into(),
            });
        }
        if let Some(prev) = seen.insert(key.clone(), i + 1) {
            return Err(ConfigError::Syntax {
                line: i + 1,
                msg: format!("`{key}` already set on line {prev}"),
            });
        }
        out.push((key, value));
    }
    Ok(out)
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.into(),
        msg: e.to_string(),
    })
}

fn floats<const N: usize>(key: &str, value: &str) -> Result<[f64; N], ConfigError> {
    let parts: Vec<f64> = value
        .trim_matches(|c| c == '[' || c == ']')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| scalar(key, s))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|p: Vec<f64>| ConfigError::Value {
        key: key.into(),
        msg: format!("expected {N} numbers, got {}", p.len()),
    })
}
