//! Flat `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored; trailing `# ...`
//! comments are stripped. Unknown keys and repeated keys are errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;

use crate::closed_form::{Guard, RegimeCheck};
use crate::error::{Error, Result};
use crate::fock::{HamiltonianKind, OracleSettings};
use crate::model::{ObservableSpec, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("format must be csv or json, got '{s}'"))),
        }
    }
}

/// How the Ehrenfest breakdown time is detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakdownMode {
    /// `|f − f_cl| / |f_cl| ≥ threshold` for `⟨x̂⟩`.
    Deviation,
    /// `|⟨X²⟩ − ⟨X⟩²| ≥ threshold`.
    Dispersion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl TimeGrid {
    pub fn new(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        if points == 0 {
            return Err(Error::Config("time grid needs at least one point".into()));
        }
        if !(t_min.is_finite() && t_max.is_finite()) {
            return Err(Error::Config("time grid bounds must be finite".into()));
        }
        if points > 1 && !(t_max > t_min) {
            return Err(Error::Config(format!("t_max = {t_max} must exceed t_min = {t_min}")));
        }
        Ok(Self { t_min, t_max, points })
    }

    pub fn times(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.t_min];
        }
        let span = self.t_max - self.t_min;
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| self.t_min + span * k as f64 / last)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kind: HamiltonianKind,
    pub params: SystemParams,
    pub alpha: Complex64,
    pub observable: ObservableSpec,
    pub grid: TimeGrid,
    pub oracle: bool,
    pub oracle_settings: OracleSettings,
    pub guard: Guard,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub ell_range: (i64, i64),
    pub scan_guard: Guard,
    pub hbar_list: Vec<f64>,
    pub threshold: f64,
    pub breakdown: BreakdownMode,
    pub regime: RegimeCheck,
}

pub const KEYS: &[&str] = &[
    "kind",
    "omega",
    "mu",
    "hbar",
    "alpha_re",
    "alpha_im",
    "observable",
    "n",
    "m",
    "q",
    "t_min",
    "t_max",
    "points",
    "oracle",
    "oracle_tol",
    "oracle_tail_tol",
    "oracle_start_dim",
    "oracle_dim_cap",
    "guard",
    "format",
    "out",
    "seed",
    "ell_min",
    "ell_max",
    "scan_guard",
    "hbar_list",
    "threshold",
    "breakdown",
    "regime_ratio",
    "regime_slack",
    "crossover_band",
];

fn parse_lines(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(Error::Config(format!("line {}: unknown key '{k}'", lineno + 1)));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Config(format!("line {}: key '{k}' given twice", lineno + 1)));
        }
    }
    Ok(map)
}

struct Fields(BTreeMap<String, String>);

impl Fields {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn get<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("key '{key}': cannot parse '{v}'"))),
        }
    }

    fn finite(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.get(key, default)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Config(format!("key '{key}' must be finite")))
        }
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.finite(key, default)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::Config(format!("key '{key}' must be positive, got {v}")))
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let f = Fields(parse_lines(text)?);
        let kind = match f.raw("kind").unwrap_or("hyperbolic") {
            "hyperbolic" => HamiltonianKind::Hyperbolic,
            "elliptic" => HamiltonianKind::Elliptic,
            other => return Err(Error::Config(format!("kind must be hyperbolic or elliptic, got '{other}'"))),
        };
        let params = SystemParams::new(f.finite("omega", 1.0)?, f.finite("mu", 0.1)?, f.finite("hbar", 0.1)?)
            .map_err(|e| Error::Config(e.to_string()))?;
        if kind == HamiltonianKind::Hyperbolic {
            params.require_hyperbolic().map_err(|e| Error::Config(e.to_string()))?;
        }
        let alpha = Complex64::new(f.finite("alpha_re", 0.5)?, f.finite("alpha_im", 0.0)?);
        let default_obs = match kind {
            HamiltonianKind::Hyperbolic => "xpower",
            HamiltonianKind::Elliptic => "monomial",
        };
        let observable = match f.raw("observable").unwrap_or(default_obs) {
            "xpower" => {
                let n: u32 = f.get("n", 1)?;
                ObservableSpec::x_power(n).map_err(|e| Error::Config(e.to_string()))?
            }
            "monomial" => ObservableSpec::monomial(f.get("m", 1)?, f.get("q", 0)?),
            other => return Err(Error::Config(format!("observable must be xpower or monomial, got '{other}'"))),
        };
        match (kind, observable) {
            (HamiltonianKind::Hyperbolic, ObservableSpec::Monomial { .. }) => {
                return Err(Error::Config("hyperbolic runs take observable = xpower".into()))
            }
            (HamiltonianKind::Elliptic, ObservableSpec::XPower(_)) => {
                return Err(Error::Config("elliptic runs take observable = monomial".into()))
            }
            _ => {}
        }
        if let ObservableSpec::XPower(n) = observable {
            if n > crate::closed_form::MAX_POWER {
                return Err(Error::Config(format!("n = {n} exceeds {}", crate::closed_form::MAX_POWER)));
            }
        }
        let grid = TimeGrid::new(f.finite("t_min", 0.0)?, f.finite("t_max", 1.0)?, f.get("points", 11)?)?;
        let oracle = match f.raw("oracle").unwrap_or("off") {
            "on" => true,
            "off" => false,
            other => return Err(Error::Config(format!("oracle must be on or off, got '{other}'"))),
        };
        let d = OracleSettings::default();
        let oracle_settings = OracleSettings {
            tol: f.positive("oracle_tol", d.tol)?,
            tail_tol: f.positive("oracle_tail_tol", d.tail_tol)?,
            start_dim: f.get("oracle_start_dim", d.start_dim)?,
            dim_cap: f.get("oracle_dim_cap", d.dim_cap)?,
        };
        if oracle_settings.start_dim < crate::fock::MIN_DIM || oracle_settings.dim_cap < oracle_settings.start_dim {
            return Err(Error::Config("need 5 <= oracle_start_dim <= oracle_dim_cap".into()));
        }
        let guard = Guard::relative(f.positive("guard", Guard::default().relative)?);
        let format = OutputFormat::parse(f.raw("format").unwrap_or("csv"))?;
        let out = f.raw("out").map(PathBuf::from);
        let ell_range = (f.get("ell_min", 0i64)?, f.get("ell_max", 0i64)?);
        if ell_range.0 > ell_range.1 {
            return Err(Error::Config("ell_min must not exceed ell_max".into()));
        }
        let scan_guard = Guard::relative(f.positive("scan_guard", 1e-10)?);
        let hbar_list = match f.raw("hbar_list") {
            None => vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            Some(s) => s
                .split(',')
                .map(|x| {
                    let v: f64 = x
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("hbar_list: cannot parse '{}'", x.trim())))?;
                    if v > 0.0 && v.is_finite() {
                        Ok(v)
                    } else {
                        Err(Error::Config(format!("hbar_list entries must be positive, got {v}")))
                    }
                })
                .collect::<Result<Vec<f64>>>()?,
        };
        let threshold = f.finite("threshold", 1.0)?;
        if threshold < 0.0 {
            return Err(Error::Config("threshold must be non-negative".into()));
        }
        let breakdown = match f.raw("breakdown").unwrap_or("deviation") {
            "deviation" => BreakdownMode::Deviation,
            "dispersion" => BreakdownMode::Dispersion,
            other => return Err(Error::Config(format!("breakdown must be deviation or dispersion, got '{other}'"))),
        };
        let rd = RegimeCheck::default();
        let regime = RegimeCheck {
            ratio: f.positive("regime_ratio", rd.ratio)?,
            slack: f.positive("regime_slack", rd.slack)?,
            crossover_band: f.positive("crossover_band", rd.crossover_band)?,
        };
        Ok(Self {
            kind,
            params,
            alpha,
            observable,
            grid,
            oracle,
            oracle_settings,
            guard,
            format,
            out,
            seed: f.get("seed", 0)?,
            ell_range,
            scan_guard,
            hbar_list,
            threshold,
            breakdown,
            regime,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
