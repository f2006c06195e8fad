//! Finite-window surrogate for the subexponential condition
//! `Σ_t r^{|t|}‖ε_t‖ < ∞` for every `r ∈ (0, 1)`.
//!
//! No finite window can certify the condition. The diagnostic reports the
//! weighted sums on nested windows together with a growth rate estimated
//! separately toward the future and toward the past: the least-squares slope
//! of `log max_{0≤j≤m}‖ε_{±j}‖` against `m` over the outer half of the window.
//! A direction is flagged as exponentially growing at radius `r` when that
//! slope reaches `−log r`.

use serde::Serialize;

use crate::seq::TimeWindowSequence;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `t → +∞`
    Future,
    /// `t → −∞`
    Past,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusRow {
    pub r: f64,
    /// `Σ_{|t|≤M_k} r^{|t|}‖ε_t‖` for each nested half-width `M_k`.
    pub nested_sums: Vec<f64>,
    pub future_growth: bool,
    pub past_growth: bool,
}

impl RadiusRow {
    pub fn subexponential(&self) -> bool {
        !(self.future_growth || self.past_growth)
    }

    pub fn weighted_sum(&self) -> f64 {
        *self.nested_sums.last().unwrap_or(&0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubexponentialReport {
    pub half_widths: Vec<i64>,
    /// Estimated exponential rate toward the future; `None` when fewer than two nonzero points.
    pub future_rate: Option<f64>,
    pub past_rate: Option<f64>,
    pub rows: Vec<RadiusRow>,
}

impl SubexponentialReport {
    pub fn flagged(&self, direction: Direction) -> bool {
        self.rows.iter().any(|r| match direction {
            Direction::Future => r.future_growth,
            Direction::Past => r.past_growth,
        })
    }

    pub fn all_subexponential(&self) -> bool {
        self.rows.iter().all(RadiusRow::subexponential)
    }
}

const SLOPE_SLACK: f64 = 1e-9;

fn envelope_rate(norms: &[f64]) -> Option<f64> {
    let m = norms.len().checked_sub(1)?;
    let mut env = Vec::with_capacity(norms.len());
    let mut running = 0.0f64;
    for &v in norms {
        running = running.max(v);
        env.push(running);
    }
    let pts: Vec<(f64, f64)> = (m / 2..=m)
        .filter(|&j| env[j] > 0.0)
        .map(|j| (j as f64, env[j].ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

pub fn subexponential_diagnostic(eps: &TimeWindowSequence, r_grid: &[f64]) -> Result<SubexponentialReport> {
    if r_grid.is_empty() {
        return Err(Error::Input("radius grid is empty".into()));
    }
    if let Some(r) = r_grid.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(Error::Input(format!("radius {r} is not in (0, 1)")));
    }
    let future: Vec<f64> = (0..=eps.t_max()).map(|t| eps.norm_at(t)).collect();
    let past: Vec<f64> = (0..=-eps.t_min()).map(|j| eps.norm_at(-j)).collect();
    let future_rate = envelope_rate(&future);
    let past_rate = envelope_rate(&past);

    let outer = eps.t_max().max(-eps.t_min());
    let mut half_widths: Vec<i64> = (1..=4).map(|k| (outer * k) / 4).filter(|&m| m > 0).collect();
    half_widths.dedup();
    if half_widths.is_empty() {
        half_widths.push(0);
    }

    let rows = r_grid
        .iter()
        .map(|&r| {
            let threshold = -r.ln() - SLOPE_SLACK;
            let nested_sums = half_widths
                .iter()
                .map(|&m| {
                    (-m..=m)
                        .filter(|t| eps.contains(*t))
                        .map(|t| r.powi(t.unsigned_abs() as i32) * eps.norm_at(t))
                        .sum()
                })
                .collect();
            RadiusRow {
                r,
                nested_sums,
                future_growth: future_rate.is_some_and(|s| s >= threshold),
                past_growth: past_rate.is_some_and(|s| s >= threshold),
            }
        })
        .collect();
    Ok(SubexponentialReport {
        half_widths,
        future_rate,
        past_rate,
        rows,
    })
}
