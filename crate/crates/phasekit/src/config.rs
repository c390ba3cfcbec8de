//! Run settings from flags and an optional `key = value` file.
//!
//! File keys are the long flag names without the dashes prefix (`j-min`,
//! `g_steps`, ...). Blank lines and `#` comments are ignored. A value given
//! on the command line always wins over the file.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use phasekit_core::ed_full::EDConfig;
use phasekit_core::effective::ChainBackend;
use phasekit_core::{ModelParams, ToleranceSet};

use crate::scan::{Axis, Method, ScanSpec};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("invalid value `{value}` for `{key}`")]
    Value { key: String, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodKind {
    MeanField,
    Effective,
    EdFull,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    FreeFermion,
    ChainEd,
}

#[derive(Debug, Clone, Default, PartialEq, clap::Args)]
pub struct Settings {
    #[arg(long, value_enum)]
    pub method: Option<MethodKind>,
    #[arg(long)]
    pub j_min: Option<f64>,
    #[arg(long)]
    pub j_max: Option<f64>,
    #[arg(long)]
    pub j_steps: Option<usize>,
    #[arg(long)]
    pub g_min: Option<f64>,
    #[arg(long)]
    pub g_max: Option<f64>,
    #[arg(long)]
    pub g_steps: Option<usize>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendKind>,
    /// Chain length for chain-ED, spin count for full ED.
    #[arg(long)]
    pub n_sites: Option<usize>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub tol_jump: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, env = "PHASEKIT_THREADS")]
    pub threads: Option<usize>,
}

const KEYS: [&str; 15] = [
    "method", "j-min", "j-max", "j-steps", "g-min", "g-max", "g-steps", "omega", "eps", "backend",
    "n-sites", "n-max", "tol-jump", "out", "threads",
];

/// Parses a `key = value` file into normalized keys.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, (usize, String)>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((k, v)) = body.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: raw.trim().to_string(),
            });
        };
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { line, key });
        }
        if map.contains_key(&key) {
            return Err(ConfigError::Duplicate { line, key });
        }
        map.insert(key, (line, v.trim().to_string()));
    }
    Ok(map)
}

fn fill<T: FromStr>(
    slot: &mut Option<T>,
    map: &BTreeMap<String, (usize, String)>,
    key: &str,
) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Ok(());
    }
    if let Some((_, v)) = map.get(key) {
        let parsed = v.parse().map_err(|_| ConfigError::Value {
            key: key.to_string(),
            value: v.clone(),
        })?;
        *slot = Some(parsed);
    }
    Ok(())
}

fn fill_enum<T: ValueEnum>(
    slot: &mut Option<T>,
    map: &BTreeMap<String, (usize, String)>,
    key: &str,
) -> Result<(), ConfigError> {
    if slot.is_some() {
        return Ok(());
    }
    if let Some((_, v)) = map.get(key) {
        let parsed = T::from_str(v, true).map_err(|_| ConfigError::Value {
            key: key.to_string(),
            value: v.clone(),
        })?;
        *slot = Some(parsed);
    }
    Ok(())
}

impl Settings {
    /// Fills unset values from the `--config` file, if any.
    pub fn with_file(mut self) -> Result<Self, ConfigError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text =
            std::fs::read_to_string(&path).map_err(|source| ConfigError::Io { path, source })?;
        self.merge_text(&text)?;
        Ok(self)
    }

    pub fn merge_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let m = parse_kv(text)?;
        fill_enum(&mut self.method, &m, "method")?;
        fill(&mut self.j_min, &m, "j-min")?;
        fill(&mut self.j_max, &m, "j-max")?;
        fill(&mut self.j_steps, &m, "j-steps")?;
        fill(&mut self.g_min, &m, "g-min")?;
        fill(&mut self.g_max, &m, "g-max")?;
        fill(&mut self.g_steps, &m, "g-steps")?;
        fill(&mut self.omega, &m, "omega")?;
        fill(&mut self.eps, &m, "eps")?;
        fill_enum(&mut self.backend, &m, "backend")?;
        fill(&mut self.n_sites, &m, "n-sites")?;
        fill(&mut self.n_max, &m, "n-max")?;
        fill(&mut self.tol_jump, &m, "tol-jump")?;
        if self.out.is_none() {
            self.out = m.get("out").map(|(_, v)| PathBuf::from(v));
        }
        fill(&mut self.threads, &m, "threads")?;
        Ok(())
    }

    pub fn template(&self) -> ModelParams {
        ModelParams {
            omega: self.omega.unwrap_or(1.0),
            eps: self.eps.unwrap_or(1.0),
            g: 0.0,
            j: 0.0,
        }
    }

    pub fn tolerances(&self) -> ToleranceSet {
        let mut t = ToleranceSet::default();
        if let Some(tj) = self.tol_jump {
            t.tol_jump = tj;
        }
        t
    }

    /// Chain backend; chain-ED at 16 sites unless told otherwise.
    pub fn chain_backend(&self) -> ChainBackend {
        match self.backend.unwrap_or(BackendKind::ChainEd) {
            BackendKind::FreeFermion => ChainBackend::FreeFermion,
            BackendKind::ChainEd => ChainBackend::ChainEd {
                n_sites: self.n_sites.unwrap_or(16),
            },
        }
    }

    pub fn ed_config(&self) -> EDConfig {
        let d = EDConfig::default();
        EDConfig {
            n_spins: self.n_sites.unwrap_or(d.n_spins),
            n_max: self.n_max.unwrap_or(d.n_max),
            ..d
        }
    }

    pub fn method(&self, default: MethodKind) -> Method {
        match self.method.unwrap_or(default) {
            MethodKind::MeanField => Method::MeanField,
            MethodKind::Effective => Method::Effective(self.chain_backend()),
            MethodKind::EdFull => Method::EdFull(self.ed_config()),
        }
    }

    pub fn j_axis(&self, default: Axis) -> Axis {
        Axis::new(
            self.j_min.unwrap_or(default.min),
            self.j_max.unwrap_or(default.max),
            self.j_steps.unwrap_or(default.steps),
        )
    }

    pub fn g_axis(&self, default: Axis) -> Axis {
        Axis::new(
            self.g_min.unwrap_or(default.min),
            self.g_max.unwrap_or(default.max),
            self.g_steps.unwrap_or(default.steps),
        )
    }

    /// Scan over `J ∈ [−0.6, 0.6]`, `g ∈ [0, 1]` at 61 × 51 by default.
    pub fn scan_spec(&self) -> ScanSpec {
        let t = self.template();
        ScanSpec {
            j: self.j_axis(Axis::new(-0.6, 0.6, 61)),
            g: self.g_axis(Axis::new(0.0, 1.0, 51)),
            omega: t.omega,
            eps: t.eps,
            method: self.method(MethodKind::MeanField),
            tol: self.tolerances(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_merge() {
        let text = "# demo\nmethod = effective\nj_min = -0.4 # trailing\n\ng-steps=7\nbackend = free-fermion\n";
        let mut s = Settings {
            j_min: Some(0.1),
            ..Settings::default()
        };
        s.merge_text(text).unwrap();
        assert_eq!(s.method, Some(MethodKind::Effective));
        assert_eq!(s.j_min, Some(0.1));
        assert_eq!(s.g_steps, Some(7));
        assert_eq!(s.chain_backend(), ChainBackend::FreeFermion);
    }

    #[test]
    fn rejects_bad_files() {
        let mut s = Settings::default();
        assert!(matches!(
            s.merge_text("j-min 0.3"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            s.merge_text("x = 1"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            s.merge_text("omega = one"),
            Err(ConfigError::Value { .. })
        ));
        assert!(matches!(
            s.merge_text("eps = 1\neps = 2"),
            Err(ConfigError::Duplicate { line: 2, .. })
        ));
        assert!(matches!(
            s.merge_text("config = other.cfg"),
            Err(ConfigError::UnknownKey { .. })
        ));
    }

    #[test]
    fn defaults() {
        let s = Settings::default();
        let spec = s.scan_spec();
        assert_eq!(spec.j, Axis::new(-0.6, 0.6, 61));
        assert_eq!(spec.method, Method::MeanField);
        assert_eq!(s.chain_backend(), ChainBackend::ChainEd { n_sites: 16 });
        assert_eq!(s.ed_config(), EDConfig::default());
    }
}
