use std::path::PathBuf;

use ffdioph_core::algebra::{parse_laurent, Field, Laurent};
use ffdioph_core::goodmaps::PolyMap;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Format, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(CliError::Usage(format!("unknown format '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapChoice {
    Veronese,
    /// Path to a map file.
    File(PathBuf),
}

/// Monte Carlo extremality run. Parsed from flat `key = value` text.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub q: u32,
    pub modulus: Option<Vec<u32>>,
    pub map: MapChoice,
    pub n: usize,
    pub d: usize,
    pub theta: String,
    pub tau_max: u32,
    /// Digits drawn per coordinate (degrees -1 down to -precision).
    pub precision: u32,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            q: 2,
            modulus: None,
            map: MapChoice::Veronese,
            n: 2,
            d: 1,
            theta: "0".into(),
            tau_max: 20,
            precision: 60,
            samples: 200,
            seed: 42,
            format: Format::Json,
        }
    }
}

fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| CliError::Usage(format!("bad value for {k}: '{v}'")))
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::default();
        let mut seed = None;
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key = value, got '{line}'")))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "q" => cfg.q = num(k, v)?,
                "modulus" => {
                    cfg.modulus = Some(v.split(',').map(|c| num(k, c.trim())).collect::<Result<_, _>>()?)
                }
                "map" => {
                    cfg.map = if v == "veronese" { MapChoice::Veronese } else { MapChoice::File(PathBuf::from(v)) }
                }
                "n" => cfg.n = num(k, v)?,
                "d" => cfg.d = num(k, v)?,
                "theta" => cfg.theta = v.trim_matches('"').to_string(),
                "tau_max" => cfg.tau_max = num(k, v)?,
                "precision" => cfg.precision = num(k, v)?,
                "samples" => cfg.samples = num(k, v)?,
                "seed" => seed = Some(num(k, v)?),
                "format" => cfg.format = v.parse()?,
                _ => return Err(CliError::Usage(format!("unknown config key '{k}'"))),
            }
        }
        cfg.seed = seed.ok_or_else(|| CliError::Usage("config lacks seed".into()))?;
        Ok(cfg)
    }

    pub fn field(&self) -> Result<Field, CliError> {
        Ok(match &self.modulus {
            Some(m) => {
                let p = (2..=self.q).find(|p| self.q.is_multiple_of(*p)).unwrap_or(self.q);
                Field::extension(p, m.clone())?
            }
            None => Field::builtin(self.q)?,
        })
    }

    pub fn poly_map(&self) -> Result<PolyMap, CliError> {
        let f = self.field()?;
        let map = match &self.map {
            MapChoice::Veronese => {
                if self.d != 1 {
                    return Err(CliError::Usage("the Veronese map needs d = 1".into()));
                }
                PolyMap::veronese(&f, self.n)
            }
            MapChoice::File(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                let m = PolyMap::parse(&text)?;
                if m.field != f || m.d != self.d || m.n() != self.n {
                    return Err(CliError::Usage(format!(
                        "map file has q={} d={} n={}, config has q={} d={} n={}",
                        m.field.q(),
                        m.d,
                        m.n(),
                        self.q,
                        self.d,
                        self.n
                    )));
                }
                m
            }
        };
        Ok(map)
    }

    pub fn theta_value(&self) -> Result<Laurent, CliError> {
        Ok(parse_laurent(&self.theta, &self.field()?)?)
    }

    /// Digits drawn per coordinate: `precision`, raised if needed so the
    /// floor sits at or below `-((n+1) tau_max + 8)`.
    pub fn digits(&self) -> u32 {
        self.precision.max((self.n as u32 + 1) * self.tau_max + 8)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 || self.d == 0 || self.samples == 0 {
            return Err(CliError::Usage("n, d and samples must be positive".into()));
        }
        if self.tau_max < 2 {
            return Err(CliError::Usage("tau_max must be at least 2".into()));
        }
        self.poly_map()?;
        self.theta_value()?;
        Ok(())
    }
}
