//! The scalar recursion `f_{i+1} = (η + (1−η) f_i)^k` and the distance bound
//! `1 − f_i^n` it yields.

use crate::error::{Error, Result};

/// Iteration cap for [`min_worthless_depth`].
pub const DEPTH_SEARCH_CAP: usize = 1_000_000;

fn check_fan_in(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("fan-in k must be at least 1".into()));
    }
    if k > i32::MAX as usize {
        return Err(Error::InvalidParameter(format!("fan-in {k} is too large")));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidRate(eta));
    }
    Ok(())
}

fn step(k: usize, eta: f64, f: f64) -> f64 {
    (eta + (1.0 - eta) * f).powi(k as i32)
}

/// `x^n` with `0^0 = 1`.
fn pow_n(x: f64, n: usize) -> f64 {
    match i32::try_from(n) {
        Ok(n) => x.powi(n),
        Err(_) => x.powf(n as f64),
    }
}

/// `f_0 ..= f_t` for one `(k, η)` pair.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundSeries {
    k: usize,
    eta: f64,
    f: Vec<f64>,
    theta: f64,
}

impl BoundSeries {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    /// Contraction factor `k(1−η)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Last index `t` of the series.
    pub fn depth(&self) -> usize {
        self.f.len() - 1
    }

    /// `1 − f_i^n`, or `None` past the end of the series.
    pub fn bound(&self, i: usize, n: usize) -> Option<f64> {
        self.f.get(i).map(|&fi| 1.0 - pow_n(fi, n))
    }
}

/// Iterates the recursion from `f_0 = 0` for `t` steps.
pub fn f_series(k: usize, eta: f64, t: usize) -> Result<BoundSeries> {
    check_fan_in(k)?;
    check_eta(eta)?;
    let mut f = Vec::with_capacity(t + 1);
    f.push(0.0);
    for i in 0..t {
        f.push(step(k, eta, f[i]));
    }
    Ok(BoundSeries { k, eta, f, theta: k as f64 * (1.0 - eta) })
}

/// `1 − f_i^n` with `0^0 = 1`.
pub fn analytic_bound(series: &BoundSeries, i: usize, n: usize) -> Result<f64> {
    series.bound(i, n).ok_or_else(|| {
        Error::InvalidParameter(format!("level {i} is past the end of a depth-{} series", series.depth()))
    })
}

/// Contraction factor and noise threshold for one fan-in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    pub theta: f64,
    /// `1 − 1/k`.
    pub threshold: f64,
    /// Whether `θ < 1`, i.e. the rate lies strictly above the threshold.
    pub above: bool,
}

pub fn theta_and_threshold(k: usize, eta: f64) -> Result<Threshold> {
    check_fan_in(k)?;
    check_eta(eta)?;
    let theta = k as f64 * (1.0 - eta);
    Ok(Threshold { theta, threshold: 1.0 - 1.0 / k as f64, above: theta < 1.0 })
}

/// Result of searching for the smallest collapsing depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthSearch {
    Depth(usize),
    /// The rate is at or below `1 − 1/k`; the bound need not converge.
    BelowThreshold,
    /// No depth up to [`DEPTH_SEARCH_CAP`] brings the bound under `eps`.
    NeverWithinCap,
}

impl DepthSearch {
    pub fn depth(self) -> Option<usize> {
        match self {
            DepthSearch::Depth(t) => Some(t),
            _ => None,
        }
    }
}

/// Smallest `t` with `1 − f_t^n ≤ eps`.
pub fn min_worthless_depth(k: usize, eta: f64, n: usize, eps: f64) -> Result<DepthSearch> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
    }
    if !theta_and_threshold(k, eta)?.above {
        return Ok(DepthSearch::BelowThreshold);
    }
    let mut f = 0.0;
    for t in 0..=DEPTH_SEARCH_CAP {
        if 1.0 - pow_n(f, n) <= eps {
            return Ok(DepthSearch::Depth(t));
        }
        f = step(k, eta, f);
    }
    Ok(DepthSearch::NeverWithinCap)
}
