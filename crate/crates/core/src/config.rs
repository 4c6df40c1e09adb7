//! Flat `key = value` configuration with dotted sections.
//!
//! Lines are `key = value`; `#` starts a comment. Keys may carry a section
//! prefix (`sim.tau = 13`), or a `[sim]` header line prefixes the keys that
//! follow it. Unknown and duplicate keys are errors carrying the line number.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Variant};
use crate::simulator::diagnostics::Signal;
use crate::simulator::{InitialCondition, Profile, SimConfig};

/// Every accepted key.
pub const KNOWN_KEYS: &[&str] = &[
    "beta",
    "m",
    "gamma",
    "d11",
    "d21",
    "d22",
    "ell",
    "variant",
    "analyze.tau",
    "curves.d21_min",
    "curves.d21_max",
    "curves.step",
    "curves.boundary_only",
    "normalform.n_c",
    "normalform.j",
    "sim.tau",
    "sim.n_x",
    "sim.dt",
    "sim.t_end",
    "sim.snapshot_every",
    "sim.scheme",
    "sim.probe",
    "sim.u0",
    "sim.v0",
    "sim.window",
    "sim.signal",
    "sim.export",
];

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed key/value pairs with their source lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, Entry>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(Error::Config {
                    line,
                    message: format!("expected `key = value`, got `{body}`"),
                });
            };
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Config {
                    line,
                    message: "empty key".into(),
                });
            }
            let key = if section.is_empty() {
                k.to_string()
            } else {
                format!("{section}.{k}")
            };
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config {
                    line,
                    message: format!("unknown key `{key}`"),
                });
            }
            let entry = Entry {
                value: v.trim().to_string(),
                line,
            };
            if let Some(prev) = entries.insert(key.clone(), entry) {
                return Err(Error::Config {
                    line,
                    message: format!("duplicate key `{key}` (first on line {})", prev.line),
                });
            }
        }
        Ok(ConfigFile { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    /// Parses the value of `key` if present.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse::<T>().map(Some).map_err(|err| Error::Config {
                line: e.line,
                message: format!("`{key}`: {err}"),
            }),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?
            .ok_or_else(|| Error::MissingKey(key.to_string()))
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map(|e| e.line).unwrap_or(0)
    }

    /// Model parameters; every parameter key is required.
    pub fn params(&self) -> Result<ModelParams> {
        let variant: Variant = self.require("variant")?;
        ModelParams::new(
            variant,
            self.require("beta")?,
            self.require("m")?,
            self.require("gamma")?,
            self.require("d11")?,
            self.require("d22")?,
            self.require("d21")?,
            self.require("ell")?,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvesBlock {
    pub d21_min: f64,
    pub d21_max: f64,
    pub step: f64,
    /// Emit only crossings that lie on the stability boundary.
    pub boundary_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalFormBlock {
    pub n_c: Option<u32>,
    pub j: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Binary,
    Both,
    None,
}

impl FromStr for ExportFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "binary" | "bin" => Ok(ExportFormat::Binary),
            "both" => Ok(ExportFormat::Both),
            "none" => Ok(ExportFormat::None),
            other => Err(format!("unknown export format `{other}`")),
        }
    }
}

/// `mean`, `probe` or `mode:<n>`.
pub fn parse_signal(s: &str) -> std::result::Result<Signal, String> {
    match s.to_ascii_lowercase().as_str() {
        "mean" => Ok(Signal::SpatialMean),
        "probe" => Ok(Signal::Probe),
        other => other
            .strip_prefix("mode:")
            .and_then(|n| n.parse().ok())
            .map(Signal::Mode)
            .ok_or_else(|| format!("unknown signal `{s}` (expected mean, probe or mode:<n>)")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimBlock {
    pub tau: f64,
    pub sim: SimConfig,
    pub initial: InitialCondition,
    pub window: f64,
    pub signal: Signal,
    pub export: ExportFormat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub analyze_tau: Option<f64>,
    pub curves: CurvesBlock,
    pub normal_form: NormalFormBlock,
    pub sim: Option<SimBlock>,
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_file(&ConfigFile::parse(text)?)
    }

    pub fn from_file(f: &ConfigFile) -> Result<Self> {
        let params = f.params()?;
        let curves = CurvesBlock {
            d21_min: f.get_or("curves.d21_min", 20.0)?,
            d21_max: f.get_or("curves.d21_max", 150.0)?,
            step: f.get_or("curves.step", 0.05)?,
            boundary_only: f.get_or("curves.boundary_only", true)?,
        };
        let normal_form = NormalFormBlock {
            n_c: f.get("normalform.n_c")?,
            j: f.get_or("normalform.j", 0)?,
        };
        let sim = match f.get::<f64>("sim.tau")? {
            None => None,
            Some(tau) => {
                let d = SimConfig::default();
                let ss = crate::model::steady_state(&params)?;
                let profile = |key: &str, fallback: f64| -> Result<Profile> {
                    match f.raw(key) {
                        None => Ok(Profile::constant(fallback)),
                        Some(t) => Profile::parse(t).map_err(|message| Error::Config {
                            line: f.line_of(key),
                            message,
                        }),
                    }
                };
                let signal = match f.raw("sim.signal") {
                    None => Signal::SpatialMean,
                    Some(t) => parse_signal(t).map_err(|message| Error::Config {
                        line: f.line_of("sim.signal"),
                        message,
                    })?,
                };
                let sim = SimConfig {
                    n_x: f.get_or("sim.n_x", d.n_x)?,
                    dt: f.get_or("sim.dt", d.dt)?,
                    t_end: f.get_or("sim.t_end", d.t_end)?,
                    snapshot_every: f.get_or("sim.snapshot_every", d.snapshot_every)?,
                    scheme: f.get_or("sim.scheme", d.scheme)?,
                    probe: f.get_or("sim.probe", d.probe)?,
                };
                Some(SimBlock {
                    tau,
                    window: f.get_or("sim.window", sim.t_end / 3.0)?,
                    sim,
                    initial: InitialCondition {
                        u: profile("sim.u0", ss.u_star)?,
                        v: profile("sim.v0", ss.v_star)?,
                    },
                    signal,
                    export: f.get_or("sim.export", ExportFormat::Csv)?,
                })
            }
        };
        Ok(RunConfig {
            params,
            analyze_tau: f.get("analyze.tau")?,
            curves,
            normal_form,
            sim,
        })
    }
}
