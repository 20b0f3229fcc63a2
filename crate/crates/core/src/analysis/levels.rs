//! Level-by-level comparison of measured distances against the bound, and
//! the one-step recursion between consecutive levels.

use super::bound::f_series;
use super::distance::{index_pairs, pairwise_level_profiles};
use super::worthless::Probe;
use crate::circuit::{run_noisy_with, Circuit, NoiseSchedule};
use crate::error::{Error, Result};
use crate::par::{map_slice, Execution};

/// Slack allowed on every inequality check.
pub const REPORT_TOL: f64 = 1e-8;

/// One row of a [`DistanceReport`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceRecord {
    pub level: usize,
    /// Width `n_i` of the level.
    pub i_width: usize,
    /// Subset size bound.
    pub n: usize,
    /// Maximum over probe pairs of the measured distance.
    pub empirical_d: f64,
    pub bound: f64,
    pub slack: f64,
}

/// Measured distances next to `1 − f^n` for every level and subset size.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DistanceReport {
    pub records: Vec<DistanceRecord>,
}

impl DistanceReport {
    pub fn min_slack(&self) -> f64 {
        self.records.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min)
    }
}

/// Worst case over pairs of the step inequality from level `level` to
/// `level + 1` at subset size `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecursionRecord {
    pub level: usize,
    pub n: usize,
    /// Rate of the noise round preceding the step (zero when none).
    pub eta: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// Everything measured on one circuit and probe set.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub report: DistanceReport,
    pub recursion: Vec<RecursionRecord>,
    /// Probe pairs examined.
    pub pairs: usize,
    /// `(pair, level, n)` triples with distance above bound + tolerance.
    pub counterexamples: usize,
    /// `(pair, level, n)` triples breaking the step inequality.
    pub recursion_violations: usize,
}

/// `bounds[i][n] = 1 − f_r^n`, where `r` counts the noise rounds applied
/// before level `i` under `schedule`.
pub fn level_bounds(k: usize, eta: f64, widths: &[usize], schedule: NoiseSchedule) -> Result<Vec<Vec<f64>>> {
    let depth = widths.len().saturating_sub(1);
    let series = f_series(k, eta, schedule.rounds_before_level(depth))?;
    Ok(widths
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let r = schedule.rounds_before_level(i);
            (0..=w).map(|n| series.bound(r, n).expect("series covers every level")).collect()
        })
        .collect())
}

fn binomial(n: usize, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `Σ_m C(kn, m) η^{kn−m} (1−η)^m d_{min(m, n_i)}` for a previous-level
/// profile `prev` (indexed by subset size up to `n_i`).
pub fn recursion_rhs(prev: &[f64], k: usize, eta: f64, n: usize) -> f64 {
    let top = k * n;
    let cap = prev.len() - 1;
    (0..=top)
        .map(|m| binomial(top, m) * eta.powi((top - m) as i32) * (1.0 - eta).powi(m as i32) * prev[m.min(cap)])
        .sum()
}

/// Runs every probe through the noisy circuit and checks the bound at every
/// level and the step inequality between consecutive levels, for every pair.
pub fn check_bounds(
    q: &Circuit,
    eta: f64,
    probes: &[Probe],
    schedule: NoiseSchedule,
    mode: Execution,
) -> Result<BoundCheck> {
    if probes.len() < 2 {
        return Err(Error::InvalidParameter("at least two probes are needed".into()));
    }
    let levels = map_slice(mode, probes, |p| run_noisy_with(q, eta, &p.state, schedule).map(|t| t.levels))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let profiles = pairwise_level_profiles(&levels, mode)?;
    let widths = q.widths();
    let bounds = level_bounds(q.k(), eta, widths, schedule)?;

    let mut records = Vec::new();
    let mut counterexamples = 0;
    for (i, &w) in widths.iter().enumerate() {
        for n in 0..=w {
            let worst = profiles.iter().map(|p| p[i][n]).fold(0.0, f64::max);
            counterexamples += profiles.iter().filter(|p| p[i][n] > bounds[i][n] + REPORT_TOL).count();
            records.push(DistanceRecord {
                level: i,
                i_width: w,
                n,
                empirical_d: worst,
                bound: bounds[i][n],
                slack: bounds[i][n] - worst,
            });
        }
    }

    let mut recursion = Vec::new();
    let mut recursion_violations = 0;
    for i in 0..q.depth() {
        let step_eta = if schedule.noisy_before_layer(i) { eta } else { 0.0 };
        for n in 0..=widths[i + 1] {
            let mut worst: Option<RecursionRecord> = None;
            for p in &profiles {
                let lhs = p[i + 1][n];
                let rhs = recursion_rhs(&p[i], q.k(), step_eta, n);
                if lhs > rhs + REPORT_TOL {
                    recursion_violations += 1;
                }
                let rec = RecursionRecord { level: i, n, eta: step_eta, lhs, rhs, slack: rhs - lhs };
                if worst.is_none_or(|w| rec.slack < w.slack) {
                    worst = Some(rec);
                }
            }
            recursion.extend(worst);
        }
    }

    Ok(BoundCheck {
        report: DistanceReport { records },
        recursion,
        pairs: index_pairs(probes.len()).len(),
        counterexamples,
        recursion_violations,
    })
}
