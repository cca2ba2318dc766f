//! Run configuration: flat `key=value` files, command-line overrides, and
//! grid syntax (comma lists or `start:stop:factor` geometric ranges).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FlowConfig, ModelParams};

/// Environment variable that overrides the output directory.
pub const OUT_ENV: &str = "BOGOFLOW_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Solve,
    Sweep,
    Verify,
    Sequences,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solve" => Ok(Mode::Solve),
            "sweep" => Ok(Mode::Sweep),
            "verify" => Ok(Mode::Verify),
            "sequences" => Ok(Mode::Sequences),
            other => Err(Error::config("mode", format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub n: Vec<u64>,
    pub epsilon: Vec<f64>,
    pub phi: Vec<f64>,
    pub delta0: Vec<f64>,
    pub flow: FlowConfig,
    pub out: PathBuf,
    pub formats: Formats,
    pub workers: usize,
    pub only: Option<Vec<String>>,
    /// Relative perturbation of one off-diagonal element (negative control).
    pub perturb: Option<f64>,
    /// Adds a `wall_ms` column to results.csv (non-deterministic).
    pub timing: bool,
}

/// One parameter point of the grid, in deterministic order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub index: usize,
    pub n: u64,
    pub epsilon: f64,
    pub phi: f64,
    pub delta0: f64,
}

impl GridPoint {
    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.n, self.epsilon, self.phi, self.delta0)
    }
}

impl RunConfig {
    /// Cartesian product ordered n, then ε, then φ, then Δ0.
    pub fn points(&self) -> Vec<GridPoint> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &epsilon in &self.epsilon {
                for &phi in &self.phi {
                    for &delta0 in &self.delta0 {
                        out.push(GridPoint {
                            index: out.len(),
                            n,
                            epsilon,
                            phi,
                            delta0,
                        });
                    }
                }
            }
        }
        out
    }

    /// Builds a configuration from resolved `key=value` pairs.
    ///
    /// `out_env` is the value of [`OUT_ENV`], which wins over the `out` key.
    pub fn from_pairs(pairs: &BTreeMap<String, String>, out_env: Option<&str>) -> Result<Self> {
        const KNOWN: &[&str] = &[
            "mode",
            "n",
            "epsilon",
            "phi",
            "delta0",
            "nu",
            "mu",
            "gamma",
            "beta",
            "delta",
            "theta",
            "c_gamma",
            "k_gamma",
            "tol",
            "tol_residual",
            "out",
            "format",
            "workers",
            "only",
            "perturb",
            "timing",
        ];
        if let Some(k) = pairs.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(Error::config(k.clone(), "unknown key"));
        }
        let get = |k: &str| pairs.get(k).map(|s| s.trim());
        let mode: Mode = match get("mode") {
            Some(m) => m.parse()?,
            None => return Err(Error::config("mode", "missing (solve|sweep|verify|sequences)")),
        };
        let mut flow = FlowConfig::default();
        let scalar = |k: &str, slot: &mut f64| -> Result<()> {
            if let Some(v) = get(k) {
                *slot = parse_f64(k, v)?;
            }
            Ok(())
        };
        scalar("nu", &mut flow.nu)?;
        scalar("mu", &mut flow.mu)?;
        scalar("gamma", &mut flow.gamma)?;
        scalar("beta", &mut flow.beta)?;
        scalar("theta", &mut flow.theta)?;
        scalar("c_gamma", &mut flow.c_gamma)?;
        scalar("k_gamma", &mut flow.k_gamma)?;
        scalar("tol", &mut flow.tol_root)?;
        scalar("tol_residual", &mut flow.tol_residual)?;
        if let Some(v) = get("delta") {
            flow.delta = Some(parse_f64("delta", v)?);
        }
        flow.validate().map_err(|e| Error::config("flow", e.to_string()))?;

        let default_n = match mode {
            Mode::Verify => "2,4,16,128,1024",
            _ => "1024",
        };
        let default_eps = match mode {
            Mode::Verify => "0.5,0.1,0.01,0.001",
            _ => "0.01",
        };
        let n = parse_n_grid(get("n").unwrap_or(default_n))?;
        let epsilon = parse_positive_grid("epsilon", get("epsilon").unwrap_or(default_eps))?;
        let phi = parse_positive_grid("phi", get("phi").unwrap_or("1"))?;
        let delta0 = parse_positive_grid("delta0", get("delta0").unwrap_or("1"))?;
        if mode == Mode::Solve && n.len() * epsilon.len() * phi.len() * delta0.len() != 1 {
            return Err(Error::config("n", "solve takes a single parameter point"));
        }

        let out = PathBuf::from(out_env.or(get("out")).unwrap_or("bogoflow-out"));
        let formats = parse_formats(get("format").unwrap_or("csv,json"))?;
        let workers = match get("workers") {
            Some(v) => v
                .parse::<usize>()
                .ok()
                .filter(|w| *w > 0)
                .ok_or_else(|| Error::config("workers", format!("expected a positive integer, got `{v}`")))?,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        let only = get("only").map(|v| {
            v.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect()
        });
        let perturb = get("perturb").map(|v| parse_f64("perturb", v)).transpose()?;
        let timing = match get("timing") {
            None | Some("false") | Some("0") => false,
            Some("true") | Some("1") => true,
            Some(v) => return Err(Error::config("timing", format!("expected true/false, got `{v}`"))),
        };
        Ok(Self {
            mode,
            n,
            epsilon,
            phi,
            delta0,
            flow,
            out,
            formats,
            workers,
            only,
            perturb,
            timing,
        })
    }
}

/// Reads a flat `key=value` file. Blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_pairs(&text)
}

pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::config(format!("line {}", lineno + 1), "expected key=value"))?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::config(key, format!("expected a number, got `{v}`")))
}

/// Parses a comma list or a `start:stop:factor` geometric range.
pub fn parse_grid(key: &str, spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(Error::config(key, "grid must be non-empty"));
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::config(key, "range must be start:stop:factor"));
        }
        let start = parse_f64(key, parts[0])?;
        let stop = parse_f64(key, parts[1])?;
        let factor = parse_f64(key, parts[2])?;
        if !(start > 0.0) || !(factor > 0.0) || factor == 1.0 {
            return Err(Error::config(key, "range needs start > 0 and factor > 0, factor != 1"));
        }
        let mut out = Vec::new();
        let mut k = 0i32;
        loop {
            let v = start * factor.powi(k);
            let inside = if factor > 1.0 {
                v <= stop * (1.0 + 1e-12)
            } else {
                v >= stop * (1.0 - 1e-12)
            };
            if !inside || out.len() > 100_000 {
                break;
            }
            out.push(v);
            k += 1;
        }
        if out.is_empty() {
            return Err(Error::config(key, "grid must be non-empty"));
        }
        Ok(out)
    } else {
        spec.split(',').map(|s| parse_f64(key, s.trim())).collect()
    }
}

fn parse_positive_grid(key: &str, spec: &str) -> Result<Vec<f64>> {
    let g = parse_grid(key, spec)?;
    if let Some(v) = g.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::config(key, format!("values must be positive, got {v}")));
    }
    Ok(g)
}

/// N grid: integers, each even and at least 2.
pub fn parse_n_grid(spec: &str) -> Result<Vec<u64>> {
    let raw = parse_grid("n", spec)?;
    raw.into_iter()
        .map(|v| {
            let r = v.round();
            if (v - r).abs() > 1e-9 * r.max(1.0) || r < 2.0 {
                return Err(Error::config("n", format!("expected an integer >= 2, got {v}")));
            }
            let n = r as u64;
            if n % 2 == 1 {
                return Err(Error::config("n", format!("n must be even (got {n})")));
            }
            Ok(n)
        })
        .collect()
}

fn parse_formats(spec: &str) -> Result<Formats> {
    let mut f = Formats {
        csv: false,
        json: false,
    };
    for part in spec.split(',').map(str::trim) {
        match part {
            "csv" => f.csv = true,
            "json" => f.json = true,
            other => return Err(Error::config("format", format!("unknown format `{other}`"))),
        }
    }
    if !(f.csv || f.json) {
        return Err(Error::config("format", "no output format selected"));
    }
    Ok(f)
}
