//! Derived quantities on a propagated time series: left-well probability,
//! purity, purity-loss rate, plateau detection and asymptotics.

use crate::error::{Error, Result};
use crate::dynamics::TimeSeries;
use crate::qstate::DensityMatrix;
use crate::qstate::to_bloch;

/// Pointwise observables plus dzeta/dt by central differences.
#[derive(Debug, Clone)]
pub struct DerivedSeries {
    pub times: Vec<f64>,
    pub p_left: Vec<f64>,
    pub purity: Vec<f64>,
    pub purity_rate: Vec<f64>,
    pub source: TimeSeries,
}

/// Three-point derivative on a possibly nonuniform grid, one-sided at the ends.
fn differentiate(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut d = vec![0.0f64; n];
    for i in 1..n - 1 {
        let h0 = t[i] - t[i - 1];
        let h1 = t[i + 1] - t[i];
        d[i] = -h1 / (h0 * (h0 + h1)) * f[i - 1]
            + (h1 - h0) / (h0 * h1) * f[i]
            + h0 / (h1 * (h0 + h1)) * f[i + 1];
    }
    {
        let h0 = t[1] - t[0];
        let h1 = t[2] - t[1];
        d[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * f[0]
            + (h0 + h1) / (h0 * h1) * f[1]
            - h0 / (h1 * (h0 + h1)) * f[2];
        let g0 = t[n - 2] - t[n - 3];
        let g1 = t[n - 1] - t[n - 2];
        d[n - 1] = g1 / (g0 * (g0 + g1)) * f[n - 3]
            - (g0 + g1) / (g0 * g1) * f[n - 2]
            + (g0 + 2.0 * g1) / (g1 * (g0 + g1)) * f[n - 1];
    }
    d
}

pub fn derive(series: &TimeSeries) -> Result<DerivedSeries> {
    if series.times.len() < 3 {
        return Err(Error::Config("derive needs at least 3 samples".into()));
    }
    let p_left: Vec<f64> = series.states.iter().map(|b| 0.5 * (1.0 + b.sx)).collect();
    let purity: Vec<f64> = series.states.iter().map(|b| b.norm_sq()).collect();
    let purity_rate = differentiate(&series.times, &purity);
    Ok(DerivedSeries {
        times: series.times.clone(),
        p_left,
        purity,
        purity_rate,
        source: series.clone(),
    })
}

const FLAT_RATE: f64 = 1e-6;
const MIN_POINTS_PER_PERIOD: f64 = 20.0;

/// Times of the purity plateaux: local minima of |dzeta/dt| over a centered
/// 5-point window. Flat input yields an empty list.
pub fn detect_plateaux(derived: &DerivedSeries) -> Result<Vec<f64>> {
    let r: Vec<f64> = derived.purity_rate.iter().map(|v| v.abs()).collect();
    let n = r.len();
    if n < 5 || r.iter().cloned().fold(0.0f64, f64::max) < FLAT_RATE {
        return Ok(Vec::new());
    }
    let mut found: Vec<usize> = Vec::new();
    for i in 2..n - 2 {
        let w = &r[i - 2..=i + 2];
        let lo = w.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = w.iter().cloned().fold(0.0f64, f64::max);
        if r[i] <= lo && r[i] < hi {
            if let Some(&last) = found.last() {
                if i - last <= 2 {
                    continue;
                }
            }
            found.push(i);
        }
    }
    if found.len() >= 2 {
        let mut spacings: Vec<f64> = found
            .windows(2)
            .map(|w| derived.times[w[1]] - derived.times[w[0]])
            .collect();
        spacings.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let half_period = spacings[spacings.len() / 2];
        let dt = (derived.times[n - 1] - derived.times[0]) / (n - 1) as f64;
        let points_per_period = 2.0 * half_period / dt;
        if points_per_period < MIN_POINTS_PER_PERIOD {
            return Err(Error::Resolution(format!(
                "{points_per_period:.1} points per oscillation period; need at least {MIN_POINTS_PER_PERIOD}"
            )));
        }
    }
    Ok(found.into_iter().map(|i| derived.times[i]).collect())
}

/// Outcome of comparing the tail of a series against an expected fixed point.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoteReport {
    pub max_distance: f64,
    pub pass: bool,
    /// Set when the series fails to converge while staying pure, i.e. the
    /// model has no dissipation to drive it anywhere.
    pub non_dissipative: bool,
}

const ASYMPTOTE_TOL: f64 = 1e-3;

pub fn asymptote_check(
    derived: &DerivedSeries,
    expected: &DensityMatrix,
    horizon: f64,
) -> Result<AsymptoteReport> {
    if *derived.times.last().unwrap() < horizon {
        return Err(Error::Config(format!(
            "series ends at {} before horizon {horizon}",
            derived.times.last().unwrap()
        )));
    }
    let target = to_bloch(expected);
    let mut max_distance = 0.0f64;
    let mut min_purity = f64::INFINITY;
    for (i, t) in derived.times.iter().enumerate() {
        if *t < horizon {
            continue;
        }
        max_distance = max_distance.max(derived.source.states[i].distance(&target));
        min_purity = min_purity.min(derived.purity[i]);
    }
    let pass = max_distance < ASYMPTOTE_TOL;
    Ok(AsymptoteReport {
        max_distance,
        pass,
        non_dissipative: !pass && min_purity > 1.0 - 1e-6,
    })
}
