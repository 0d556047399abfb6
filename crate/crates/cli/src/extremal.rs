use ffdioph_core::algebra::{random_laurent, LaurentMat, LaurentVec};
use ffdioph_core::diophantine::{best_profile, omega_estimate, Exponent, ExponentEstimate};
use ffdioph_core::error::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::CliError;

/// Version tag of the CSV layouts below.
pub const CSV_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStatus {
    Ok,
    /// Some profile level hit an exact zero error.
    Infinite,
    PrecisionExhausted,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleRow {
    pub index: usize,
    pub x: Vec<String>,
    pub status: SampleStatus,
    pub estimate: Option<ExponentEstimate>,
    /// `m (-L(tau)) / (n tau)` for `tau = 1..=tau_max`.
    pub ratios: Vec<Exponent>,
    /// Profile entries that are only precision bounds.
    pub flagged: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TauQuantiles {
    pub tau: u32,
    pub count: usize,
    pub median: Exponent,
    pub p90: Exponent,
    pub median_f64: f64,
    pub flagged: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub digits: u32,
    pub m: usize,
    pub n: usize,
    pub tau_min: u32,
    pub samples: Vec<SampleRow>,
    pub quantiles: Vec<TauQuantiles>,
    pub excluded_precision: usize,
    pub excluded_infinite: usize,
}

impl ExperimentReport {
    pub fn quantile_at(&self, tau: u32) -> Option<&TauQuantiles> {
        self.quantiles.iter().find(|t| t.tau == tau)
    }

    pub fn excluded_fraction(&self) -> f64 {
        (self.excluded_precision + self.excluded_infinite) as f64 / self.samples.len().max(1) as f64
    }

    /// `tau,count,median,p90,flagged` per line.
    pub fn quantiles_csv(&self) -> String {
        let mut out = format!("# ffdioph extremal quantiles v{CSV_VERSION}\ntau,count,median,p90,flagged\n");
        for t in &self.quantiles {
            out.push_str(&format!("{},{},{},{},{}\n", t.tau, t.count, t.median, t.p90, t.flagged));
        }
        out
    }
}

/// Lower median and nearest-rank 90th percentile of the sorted values.
pub fn quantiles(sorted: &[Exponent]) -> Option<(Exponent, Exponent)> {
    let k = sorted.len();
    if k == 0 {
        return None;
    }
    let median = sorted[(k - 1) / 2].clone();
    let p90 = sorted[(9 * k).div_ceil(10) - 1].clone();
    Some((median, p90))
}

fn recompute(samples: &[SampleRow], tau_max: u32) -> Vec<TauQuantiles> {
    (1..=tau_max)
        .filter_map(|tau| {
            let ok = samples.iter().filter(|s| s.status == SampleStatus::Ok);
            let mut vals: Vec<Exponent> = ok.clone().map(|s| s.ratios[tau as usize - 1].clone()).collect();
            vals.sort();
            let (median, p90) = quantiles(&vals)?;
            Some(TauQuantiles {
                tau,
                count: vals.len(),
                median_f64: median.to_f64(),
                median,
                p90,
                flagged: ok.filter(|s| s.flagged.contains(&tau)).count(),
            })
        })
        .collect()
}

/// Quantiles recomputed from the per-sample rows.
pub fn recompute_quantiles(report: &ExperimentReport) -> Vec<TauQuantiles> {
    recompute(&report.samples, report.config.tau_max)
}

fn sample(cfg: &ExperimentConfig, index: usize) -> Result<SampleRow, CliError> {
    let field = cfg.field()?;
    let map = cfg.poly_map()?;
    let theta = LaurentVec(vec![cfg.theta_value()?]);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let floor = -(cfg.digits() as i64);
    let x: Vec<_> = (0..cfg.d).map(|_| random_laurent(&field, -1, floor, false, &mut rng)).collect();
    let y = LaurentMat::row(&LaurentVec(map.eval(&x)));
    let mut row = SampleRow {
        index,
        x: x.iter().map(|v| v.to_string()).collect(),
        status: SampleStatus::Ok,
        estimate: None,
        ratios: Vec::new(),
        flagged: Vec::new(),
    };
    let profile = match best_profile(&y, Some(&theta), cfg.tau_max) {
        Ok(p) => p,
        Err(Error::PrecisionExhausted(_)) => {
            row.status = SampleStatus::PrecisionExhausted;
            return Ok(row);
        }
        Err(e) => return Err(e.into()),
    };
    let (m, n) = (profile.m, profile.n);
    row.ratios = profile.entries.iter().map(|e| Exponent::ratio(m, n, e.tau, e.l)).collect();
    row.flagged = profile.entries.iter().filter(|e| !e.exact).map(|e| e.tau).collect();
    row.estimate = omega_estimate(&profile, m, n, (cfg.tau_max / 2).max(1)).ok();
    if row.ratios.iter().any(Exponent::is_infinite) {
        row.status = SampleStatus::Infinite;
    }
    Ok(row)
}

/// Sample `x` uniformly on the unit ball, compute the inhomogeneous profile of
/// `f(x)` (one linear form) against `theta`, and summarise per `tau`.
pub fn run_extremal(cfg: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    cfg.validate()?;
    let mut samples = (0..cfg.samples)
        .into_par_iter()
        .map(|i| sample(cfg, i))
        .collect::<Result<Vec<_>, _>>()?;
    samples.sort_by_key(|s| s.index);
    let count = |st| samples.iter().filter(|s| s.status == st).count();
    Ok(ExperimentReport {
        config: cfg.clone(),
        digits: cfg.digits(),
        m: 1,
        n: cfg.n,
        tau_min: (cfg.tau_max / 2).max(1),
        quantiles: recompute(&samples, cfg.tau_max),
        excluded_precision: count(SampleStatus::PrecisionExhausted),
        excluded_infinite: count(SampleStatus::Infinite),
        samples,
    })
}
