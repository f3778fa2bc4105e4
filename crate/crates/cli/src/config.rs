//! Run settings from a `key = value` file with `[section]` headers, overridden
//! by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;
use vqe_core::ansatz::{ParameterTying, TrotterConfig};
use vqe_core::vqe::{GradientMethod, OptimizerConfig};
use vqe_core::{Encoding, PipelineConfig};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Syntax { path: PathBuf, line: usize, message: String },
    #[error("unknown setting '{0}'")]
    UnknownKey(String),
    #[error("invalid value '{value}' for {key}: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("{0}")]
    Invalid(String),
}

const KNOWN_KEYS: &[&str] = &[
    "source.fixture_dir",
    "source.label",
    "source.geometry",
    "source.bond_lengths",
    "mapping.kind",
    "mapping.reduce_two_qubits",
    "trotter.order",
    "trotter.steps",
    "ansatz.tying",
    "optimizer.tol_energy",
    "optimizer.tol_gradient",
    "optimizer.gradient_step",
    "optimizer.max_evals",
    "optimizer.gradient",
    "run.threads",
    "run.output",
];

/// Flat `section.key → value` map.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        let mut section = String::new();
        for (no, raw) in text.lines().enumerate() {
            let syntax =
                |message: &str| ConfigError::Syntax { path: path.into(), line: no + 1, message: message.into() };
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| syntax("unterminated section header"))?;
                section = name.trim().to_ascii_lowercase();
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| syntax("expected key = value"))?;
            let key = if section.is_empty() {
                k.trim().to_ascii_lowercase()
            } else {
                format!("{section}.{}", k.trim().to_ascii_lowercase())
            };
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey(key));
            }
            if values.insert(key, v.trim().to_string()).is_some() {
                return Err(syntax("duplicate key"));
            }
        }
        Ok(ConfigFile { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

fn invalid(key: &str, value: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue { key: key.into(), value: value.into(), reason: reason.into() }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.trim().parse::<T>().map_err(|e| invalid(key, value, e.to_string()))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(invalid(key, value, "expected true or false")),
    }
}

/// Bond lengths in Å as `a,b,c` or an inclusive range `start:stop:step`.
/// Values are rounded to 4 decimals, sorted, and must be positive and
/// distinct.
pub fn parse_bond_lengths(value: &str) -> Result<Vec<f64>, ConfigError> {
    let key = "bond_lengths";
    let mut out: Vec<f64> = if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid(key, value, "range must be start:stop:step"));
        }
        let (a, b, h): (f64, f64, f64) =
            (parse_num(key, parts[0])?, parse_num(key, parts[1])?, parse_num(key, parts[2])?);
        if !(h > 0.0) || b < a {
            return Err(invalid(key, value, "range needs step > 0 and stop ≥ start"));
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        (0..=n).map(|k| a + k as f64 * h).collect()
    } else {
        value.split(',').filter(|s| !s.trim().is_empty()).map(|s| parse_num(key, s)).collect::<Result<_, _>>()?
    };
    for d in &mut out {
        if !(d.is_finite() && *d > 0.0) {
            return Err(invalid(key, value, "bond lengths must be positive"));
        }
        *d = (*d * 1e4).round() / 1e4;
    }
    out.sort_by(f64::total_cmp);
    if out.is_empty() {
        return Err(invalid(key, value, "at least one bond length is required"));
    }
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid(key, value, "bond lengths must be distinct"));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NativeGeometry {
    Hydrogen,
    TrihydrogenCation,
}

impl NativeGeometry {
    pub fn parse(value: &str) -> Result<Self, ConfigError> {
        match value.trim().to_ascii_lowercase().as_str() {
            "h2" => Ok(NativeGeometry::Hydrogen),
            "h3p" | "h3+" => Ok(NativeGeometry::TrihydrogenCation),
            _ => Err(invalid("geometry", value, "supported native geometries are h2 and h3p")),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NativeGeometry::Hydrogen => "h2",
            NativeGeometry::TrihydrogenCation => "h3p",
        }
    }

    pub fn default_bond_lengths(self) -> Vec<f64> {
        let (a, b) = match self {
            NativeGeometry::Hydrogen => (0.5, 2.0),
            NativeGeometry::TrihydrogenCation => (0.6, 1.6),
        };
        parse_bond_lengths(&format!("{a}:{b}:0.1")).expect("static grid")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Fixtures { dir: PathBuf, label: String },
    Native(NativeGeometry),
}

impl Source {
    pub fn label(&self) -> &str {
        match self {
            Source::Fixtures { label, .. } => label,
            Source::Native(g) => g.label(),
        }
    }
}

/// Values given on the command line; `None` defers to the file, then to
/// defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub fixture_dir: Option<PathBuf>,
    pub label: Option<String>,
    pub geometry: Option<String>,
    pub bond_lengths: Option<String>,
    pub mapping: Option<String>,
    pub reduce_two_qubits: bool,
    pub trotter_order: Option<u32>,
    pub trotter_steps: Option<usize>,
    pub tying: Option<String>,
    pub tol_energy: Option<f64>,
    pub tol_gradient: Option<f64>,
    pub gradient_step: Option<f64>,
    pub max_evals: Option<usize>,
    pub gradient: Option<String>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub source: Source,
    /// Explicit points; `None` means the source's default set.
    pub bond_lengths: Option<Vec<f64>>,
    pub pipeline: PipelineConfig,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(file: &ConfigFile, flags: &Overrides) -> Result<Self, ConfigError> {
        let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).map(str::to_string));

        let fixture_dir = flags.fixture_dir.clone().or_else(|| file.get("source.fixture_dir").map(PathBuf::from));
        let geometry = pick(flags.geometry.clone(), "source.geometry");
        let label = pick(flags.label.clone(), "source.label");
        let source = match (fixture_dir, geometry) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::Invalid(
                    "give either a fixture directory or a native geometry, not both".into(),
                ))
            }
            (Some(dir), None) => {
                let label =
                    label.ok_or_else(|| ConfigError::Invalid("a fixture directory needs a molecule label".into()))?;
                if label.is_empty() || label.contains(['/', '\\']) {
                    return Err(invalid("label", &label, "must be a plain file-name prefix"));
                }
                Source::Fixtures { dir, label }
            }
            (None, Some(g)) => Source::Native(NativeGeometry::parse(&g)?),
            (None, None) => {
                return Err(ConfigError::Invalid("no integral source: pass --fixture-dir or --geometry".into()))
            }
        };

        let bond_lengths =
            pick(flags.bond_lengths.clone(), "source.bond_lengths").map(|v| parse_bond_lengths(&v)).transpose()?;

        let encoding =
            match pick(flags.mapping.clone(), "mapping.kind").as_deref().map(str::to_ascii_lowercase).as_deref() {
                None | Some("jw") | Some("jordan-wigner") => Encoding::JordanWigner,
                Some("parity") => Encoding::Parity,
                Some(other) => return Err(invalid("mapping", other, "expected jw or parity")),
            };
        let reduce = flags.reduce_two_qubits
            || file
                .get("mapping.reduce_two_qubits")
                .map(|v| parse_bool("reduce_two_qubits", v))
                .transpose()?
                .unwrap_or(false);
        if reduce && encoding != Encoding::Parity {
            return Err(ConfigError::Invalid("two-qubit reduction requires --mapping parity".into()));
        }

        let order = match flags.trotter_order {
            Some(o) => o,
            None => file.get("trotter.order").map(|v| parse_num("trotter_order", v)).transpose()?.unwrap_or(1),
        };
        let steps = match flags.trotter_steps {
            Some(s) => s,
            None => file.get("trotter.steps").map(|v| parse_num("trotter_steps", v)).transpose()?.unwrap_or(1),
        };
        let trotter = TrotterConfig::new(order, steps)
            .map_err(|e| invalid("trotter", &format!("{order}/{steps}"), e.to_string()))?;

        let tying = match pick(flags.tying.clone(), "ansatz.tying").as_deref() {
            None | Some("spin") => ParameterTying::SpinTied,
            Some("independent") => ParameterTying::Independent,
            Some(other) => return Err(invalid("tying", other, "expected spin or independent")),
        };

        let mut optimizer = OptimizerConfig::default();
        let float = |flag: Option<f64>, key: &str, name: &str| -> Result<Option<f64>, ConfigError> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => file.get(key).map(|v| parse_num(name, v)).transpose(),
            }
        };
        if let Some(v) = float(flags.tol_energy, "optimizer.tol_energy", "tol_energy")? {
            optimizer.energy_tolerance = v;
        }
        if let Some(v) = float(flags.tol_gradient, "optimizer.tol_gradient", "tol_gradient")? {
            optimizer.gradient_tolerance = v;
        }
        if let Some(v) = float(flags.gradient_step, "optimizer.gradient_step", "gradient_step")? {
            optimizer.gradient_step = v;
        }
        if !(optimizer.energy_tolerance > 0.0)
            || !(optimizer.gradient_tolerance > 0.0)
            || !(optimizer.gradient_step > 0.0)
        {
            return Err(ConfigError::Invalid("tolerances and gradient step must be positive".into()));
        }
        let max_evals = match flags.max_evals {
            Some(v) => Some(v),
            None => file.get("optimizer.max_evals").map(|v| parse_num("max_evals", v)).transpose()?,
        };
        if let Some(v) = max_evals {
            if v == 0 {
                return Err(invalid("max_evals", "0", "must be at least 1"));
            }
            optimizer.max_evaluations = v;
        }
        optimizer.gradient = match pick(flags.gradient.clone(), "optimizer.gradient").as_deref() {
            None | Some("fd") | Some("central") => GradientMethod::CentralDifference,
            Some("adjoint") => GradientMethod::Adjoint,
            Some(other) => return Err(invalid("gradient", other, "expected fd or adjoint")),
        };

        let threads = match flags.threads {
            Some(t) => Some(t),
            None => file.get("run.threads").map(|v| parse_num("threads", v)).transpose()?,
        };
        if threads == Some(0) {
            return Err(invalid("threads", "0", "must be at least 1"));
        }
        let output = flags.output.clone().or_else(|| file.get("run.output").map(PathBuf::from));

        Ok(RunConfig {
            source,
            bond_lengths,
            pipeline: PipelineConfig { encoding, reduce_two_qubits: reduce, trotter, optimizer, tying },
            threads,
            output,
        })
    }
}
