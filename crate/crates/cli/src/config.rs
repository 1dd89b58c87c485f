//! Line-based `key = value` scan configuration.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use cp_nonreciprocal::units::SPEED_OF_LIGHT;
use cp_nonreciprocal::{EvalOptions, HalfSpaceMedium, Handedness, MirrorSign};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("key `{key}` given twice, on lines {first} and {second}")]
    Duplicate { key: String, first: usize, second: usize },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("line {line}: dimensional inconsistency: {message}")]
    Dimension { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MediumSpec {
    PerfectConductor,
    NonreciprocalMirror { sign: i8 },
    Axion { epsilon: f64, mu: f64, theta: f64 },
}

impl MediumSpec {
    pub fn build(&self) -> Result<HalfSpaceMedium, ConfigError> {
        match *self {
            MediumSpec::PerfectConductor => Ok(HalfSpaceMedium::PerfectConductor),
            MediumSpec::NonreciprocalMirror { sign } => Ok(HalfSpaceMedium::PerfectNonreciprocalMirror {
                sign: if sign > 0 { MirrorSign::Plus } else { MirrorSign::Minus },
            }),
            MediumSpec::Axion { epsilon, mu, theta } => {
                HalfSpaceMedium::axion(epsilon, mu, theta).map_err(|e| ConfigError::Invalid(e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    Gamma,
    ShiftRes,
    ShiftNres,
}

impl QuantityKind {
    pub const ALL: [QuantityKind; 3] = [QuantityKind::Gamma, QuantityKind::ShiftRes, QuantityKind::ShiftNres];

    pub fn column(self) -> &'static str {
        match self {
            QuantityKind::Gamma => "gamma_ratio",
            QuantityKind::ShiftRes => "shift_res_ratio",
            QuantityKind::ShiftNres => "shift_nres_ratio",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "gamma" | "gamma_ratio" | "rate" => Some(QuantityKind::Gamma),
            "shift_res" | "shift_res_ratio" => Some(QuantityKind::ShiftRes),
            "shift_nres" | "shift_nres_ratio" => Some(QuantityKind::ShiftNres),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HandednessSpec {
    Plus,
    Minus,
}

impl HandednessSpec {
    pub fn handedness(&self) -> Handedness {
        match self {
            HandednessSpec::Plus => Handedness::Plus,
            HandednessSpec::Minus => Handedness::Minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanConfig {
    pub medium: MediumSpec,
    pub handedness: HandednessSpec,
    /// Grid in units of `omega z / c`.
    pub zeta_min: f64,
    pub zeta_max: f64,
    pub count: usize,
    pub spacing: Spacing,
    /// Sorted, without duplicates.
    pub quantities: Vec<QuantityKind>,
    /// Angular transition frequency (rad/s), needed only for dimensional heights.
    pub frequency: Option<f64>,
    pub output: Option<String>,
    /// Overrides of the quadrature tolerances, applied to both integrals.
    pub rel_tol: Option<f64>,
    pub max_intervals: Option<usize>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            medium: MediumSpec::PerfectConductor,
            handedness: HandednessSpec::Plus,
            zeta_min: 0.05,
            zeta_max: 8.0,
            count: 400,
            spacing: Spacing::Log,
            quantities: QuantityKind::ALL.to_vec(),
            frequency: None,
            output: None,
            rel_tol: None,
            max_intervals: None,
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.zeta_min.is_finite() && self.zeta_min > 0.0) {
            return Err(ConfigError::Invalid(format!(
                "z_min must be > 0, got {}",
                self.zeta_min
            )));
        }
        if !(self.zeta_max.is_finite() && self.zeta_max > self.zeta_min) {
            return Err(ConfigError::Invalid(format!(
                "z_max ({}) must exceed z_min ({})",
                self.zeta_max, self.zeta_min
            )));
        }
        if self.count < 2 {
            return Err(ConfigError::Invalid(format!(
                "count must be at least 2, got {}",
                self.count
            )));
        }
        if self.quantities.is_empty() {
            return Err(ConfigError::Invalid("quantities must not be empty".into()));
        }
        if let Some(t) = self.rel_tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(ConfigError::Invalid(format!("rel_tol must be > 0, got {t}")));
            }
        }
        if self.max_intervals == Some(0) {
            return Err(ConfigError::Invalid("max_intervals must be at least 1".into()));
        }
        self.medium.build().map(|_| ())
    }

    pub fn eval_options(&self) -> EvalOptions {
        let mut opts = EvalOptions::default();
        for q in [&mut opts.greens, &mut opts.frequency_integral] {
            if let Some(t) = self.rel_tol {
                q.rel_tol = t;
            }
            if let Some(n) = self.max_intervals {
                q.max_intervals = n;
            }
        }
        opts
    }

    /// Grid points; the first and last are exactly `zeta_min` and `zeta_max`.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.count;
        let (a, b) = (self.zeta_min, self.zeta_max);
        (0..n)
            .map(|i| {
                if i == 0 {
                    return a;
                }
                if i == n - 1 {
                    return b;
                }
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => a + (b - a) * f,
                    Spacing::Log => (a.ln() + (b.ln() - a.ln()) * f).exp(),
                }
            })
            .collect()
    }
}

const KEYS: [&str; 15] = [
    "medium",
    "sign",
    "epsilon",
    "mu",
    "theta",
    "handedness",
    "z_min",
    "z_max",
    "count",
    "spacing",
    "quantities",
    "frequency",
    "output",
    "rel_tol",
    "max_intervals",
];

/// Splits `1.5nm` / `2 pi` into the number and the trimmed suffix.
fn split_number(value: &str) -> (&str, &str) {
    let end = value
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E')
                    && value[i + 1..].starts_with(|d: char| d.is_ascii_digit() || d == '-' || d == '+')))
        })
        .map(|(i, _)| i)
        .unwrap_or(value.len());
    (value[..end].trim(), value[end..].trim())
}

fn number(line: usize, text: &str) -> Result<f64, ConfigError> {
    text.parse::<f64>().map_err(|_| ConfigError::Syntax {
        line,
        message: format!("expected a number, got `{text}`"),
    })
}

fn dimensionless(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let (num, suffix) = split_number(value);
    if !suffix.is_empty() {
        return Err(ConfigError::Dimension {
            line,
            message: format!("`{key}` is dimensionless but has unit `{suffix}`"),
        });
    }
    number(line, num)
}

/// `pi`, `-pi`, `1.0pi`, `3 pi`, `0.5 rad`, or a bare number of radians.
pub fn parse_theta(value: &str) -> Result<f64, String> {
    let v = value.trim();
    let (num, suffix) = split_number(v);
    let factor = match suffix {
        "pi" => PI,
        "rad" | "" => 1.0,
        other => return Err(format!("unsupported angle unit `{other}` (use `pi` or `rad`)")),
    };
    let mult = match num {
        "" | "+" if suffix == "pi" => 1.0,
        "-" if suffix == "pi" => -1.0,
        n => n.parse::<f64>().map_err(|_| format!("expected an angle, got `{v}`"))?,
    };
    Ok(mult * factor)
}

fn length_unit(suffix: &str) -> Option<f64> {
    Some(match suffix {
        "m" => 1.0,
        "mm" => 1e-3,
        "um" | "µm" => 1e-6,
        "nm" => 1e-9,
        "pm" => 1e-12,
        _ => return None,
    })
}

fn frequency_unit(suffix: &str) -> Option<f64> {
    let two_pi = 2.0 * PI;
    Some(match suffix {
        "rad/s" => 1.0,
        "Hz" => two_pi,
        "kHz" => two_pi * 1e3,
        "MHz" => two_pi * 1e6,
        "GHz" => two_pi * 1e9,
        "THz" => two_pi * 1e12,
        _ => return None,
    })
}

enum Height {
    Scaled(f64),
    Meters(f64, usize),
}

fn height(line: usize, key: &str, value: &str) -> Result<Height, ConfigError> {
    let (num, suffix) = split_number(value);
    let x = number(line, num)?;
    if suffix.is_empty() {
        return Ok(Height::Scaled(x));
    }
    match length_unit(suffix) {
        Some(f) => Ok(Height::Meters(x * f, line)),
        None => Err(ConfigError::Dimension {
            line,
            message: format!("`{key}` needs a length unit (m, mm, um, nm, pm) or none, got `{suffix}`"),
        }),
    }
}

pub fn parse_config(path: &Path) -> Result<ScanConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<ScanConfig, ConfigError> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                message: format!("empty value for `{key}`"),
            });
        }
        if let Some(&(first, _)) = entries.get(known) {
            return Err(ConfigError::Duplicate {
                key: key.to_string(),
                first,
                second: line,
            });
        }
        entries.insert(known, (line, value));
    }

    let mut cfg = ScanConfig::default();
    let get = |k: &str| entries.get(k).copied();

    let (medium_line, medium) = get("medium").ok_or(ConfigError::Missing("medium"))?;
    let allowed: &[&str] = match medium {
        "perfect_conductor" | "conductor" => &[],
        "nonreciprocal_mirror" | "mirror" => &["sign"],
        "axion" | "topological_insulator" => &["epsilon", "mu", "theta"],
        other => {
            return Err(ConfigError::Syntax {
                line: medium_line,
                message: format!("unknown medium `{other}` (perfect_conductor, nonreciprocal_mirror, axion)"),
            })
        }
    };
    for k in ["sign", "epsilon", "mu", "theta"] {
        if let Some((line, _)) = get(k) {
            if !allowed.contains(&k) {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("`{k}` does not apply to medium `{medium}`"),
                });
            }
        }
    }
    cfg.medium = match allowed.len() {
        0 => MediumSpec::PerfectConductor,
        1 => {
            let sign = match get("sign") {
                None => -1,
                Some((line, v)) => match v {
                    "+1" | "1" | "plus" | "+" => 1,
                    "-1" | "minus" | "-" => -1,
                    other => {
                        return Err(ConfigError::Syntax {
                            line,
                            message: format!("sign must be +1 or -1, got `{other}`"),
                        })
                    }
                },
            };
            MediumSpec::NonreciprocalMirror { sign }
        }
        _ => {
            let epsilon = get("epsilon")
                .map(|(l, v)| dimensionless(l, "epsilon", v))
                .transpose()?
                .unwrap_or(1.0);
            let mu = get("mu")
                .map(|(l, v)| dimensionless(l, "mu", v))
                .transpose()?
                .unwrap_or(1.0);
            let theta = match get("theta") {
                None => 0.0,
                Some((line, v)) => parse_theta(v).map_err(|message| ConfigError::Syntax { line, message })?,
            };
            MediumSpec::Axion { epsilon, mu, theta }
        }
    };

    if let Some((line, v)) = get("handedness") {
        cfg.handedness = match v {
            "plus" | "+" => HandednessSpec::Plus,
            "minus" | "-" => HandednessSpec::Minus,
            other => {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("handedness must be plus or minus, got `{other}`"),
                })
            }
        };
    }

    if let Some((line, v)) = get("frequency") {
        let (num, suffix) = split_number(v);
        let Some(f) = frequency_unit(suffix) else {
            return Err(ConfigError::Dimension {
                line,
                message: format!("`frequency` needs a unit (rad/s, Hz, kHz, MHz, GHz, THz), got `{v}`"),
            });
        };
        let w = number(line, num)? * f;
        if !(w.is_finite() && w > 0.0) {
            return Err(ConfigError::Invalid(format!("frequency must be > 0, got `{v}`")));
        }
        cfg.frequency = Some(w);
    }

    for (key, slot) in [("z_min", &mut cfg.zeta_min), ("z_max", &mut cfg.zeta_max)] {
        if let Some((line, v)) = get(key) {
            *slot = match height(line, key, v)? {
                Height::Scaled(x) => x,
                Height::Meters(m, line) => match cfg.frequency {
                    Some(w) => w * m / SPEED_OF_LIGHT,
                    None => {
                        return Err(ConfigError::Dimension {
                            line,
                            message: format!("`{key}` has a length unit but no `frequency` is given"),
                        })
                    }
                },
            };
        }
    }

    if let Some((line, v)) = get("count") {
        cfg.count = v.parse().map_err(|_| ConfigError::Syntax {
            line,
            message: format!("count must be a positive integer, got `{v}`"),
        })?;
    }

    if let Some((line, v)) = get("spacing") {
        cfg.spacing = match v {
            "linear" | "lin" => Spacing::Linear,
            "log" => Spacing::Log,
            other => {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("spacing must be linear or log, got `{other}`"),
                })
            }
        };
    }

    if let Some((line, v)) = get("quantities") {
        let mut q = Vec::new();
        for item in v.split(',').map(str::trim).filter(|s| !s.is_empty() && *s != "none") {
            let kind = QuantityKind::parse(item).ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("unknown quantity `{item}` (gamma, shift_res, shift_nres)"),
            })?;
            q.push(kind);
        }
        q.sort();
        q.dedup();
        cfg.quantities = q;
    }

    if let Some((line, v)) = get("rel_tol") {
        cfg.rel_tol = Some(dimensionless(line, "rel_tol", v)?);
    }
    if let Some((line, v)) = get("max_intervals") {
        cfg.max_intervals = Some(v.parse().map_err(|_| ConfigError::Syntax {
            line,
            message: format!("max_intervals must be a positive integer, got `{v}`"),
        })?);
    }

    cfg.output = get("output").map(|(_, v)| v.to_string());

    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_splitting() {
        assert_eq!(split_number("1.5nm"), ("1.5", "nm"));
        assert_eq!(split_number("2e-3 m"), ("2e-3", "m"));
        assert_eq!(split_number("-3pi"), ("-3", "pi"));
        assert_eq!(split_number("pi"), ("", "pi"));
        assert_eq!(split_number("16"), ("16", ""));
        assert_eq!(split_number("3 THz"), ("3", "THz"));
    }

    #[test]
    fn theta_forms() {
        assert_eq!(parse_theta("pi").unwrap(), PI);
        assert_eq!(parse_theta("1.0pi").unwrap(), PI);
        assert_eq!(parse_theta("-pi").unwrap(), -PI);
        assert_eq!(parse_theta("3 pi").unwrap(), 3.0 * PI);
        assert_eq!(parse_theta("0.5 rad").unwrap(), 0.5);
        assert_eq!(parse_theta("0").unwrap(), 0.0);
        assert!(parse_theta("90 deg").is_err());
        assert!(parse_theta("xpi").is_err());
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let cfg = ScanConfig {
            zeta_min: 0.05,
            zeta_max: 8.0,
            count: 7,
            ..ScanConfig::default()
        };
        let g = cfg.grid();
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[6], 8.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
