//! Number formatting and tabular exports.
//!
//! Every export is a [`Table`]: named columns and rows of [`Cell`]s. CSV is
//! produced here; other encodings can walk the same rows.

use std::fmt;

use crate::analysis::{BoundCheck, BoundSeries, DepthSearch, DistanceReport};
use crate::circuit::Trajectory;
use crate::linalg::{DensityMatrix, C64};

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `a+bi` / `a-bi` with both parts in [`fmt_real`] form.
pub fn fmt_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{}{}{}i", fmt_real(z.re), sign, fmt_real(z.im.abs()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Real(v) => f.write_str(&fmt_real(*v)),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    /// Appends a row; panics if its length differs from the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn to_csv(&self) -> String {
        let mut out = csv_line(self.columns.iter().map(String::as_str));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&csv_line(cells.iter().map(String::as_str)));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line<'a>(fields: impl Iterator<Item = &'a str>) -> String {
    let mut line = fields.map(csv_field).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Columns `level,i_width,n,empirical_d,bound,slack`.
pub fn distance_table(report: &DistanceReport) -> Table {
    let mut t = Table::new(["level", "i_width", "n", "empirical_d", "bound", "slack"]);
    for r in &report.records {
        t.push(vec![r.level.into(), r.i_width.into(), r.n.into(), r.empirical_d.into(), r.bound.into(), r.slack.into()]);
    }
    t
}

/// Worst step of the level-to-level inequality per `(level, n)`.
pub fn recursion_table(check: &BoundCheck) -> Table {
    let mut t = Table::new(["level", "n", "eta", "lhs", "rhs", "slack"]);
    for r in &check.recursion {
        t.push(vec![r.level.into(), r.n.into(), r.eta.into(), r.lhs.into(), r.rhs.into(), r.slack.into()]);
    }
    t
}

/// Columns `i,f_i,theta_pow_i,bound_n..` for each requested subset size.
pub fn bound_table(series: &BoundSeries, sizes: &[usize]) -> Table {
    let mut columns = vec!["i".to_string(), "f_i".to_string(), "theta_pow_i".to_string()];
    columns.extend(sizes.iter().map(|n| format!("bound_n{n}")));
    let mut t = Table::new(columns);
    for (i, &f) in series.f().iter().enumerate() {
        let mut row: Vec<Cell> = vec![i.into(), f.into(), series.theta().powi(i as i32).into()];
        row.extend(sizes.iter().map(|&n| Cell::Real(series.bound(i, n).unwrap_or(f64::NAN))));
        t.push(row);
    }
    t
}

/// One grid point of a depth sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub k: usize,
    pub eta: f64,
    pub n: usize,
    pub eps: f64,
    pub depth: DepthSearch,
}

/// Columns `k,eta,n,eps,min_depth`; below-threshold points read `n/a` and
/// capped searches read `never`.
pub fn sweep_table(points: &[SweepPoint]) -> Table {
    let mut t = Table::new(["k", "eta", "n", "eps", "min_depth"]);
    for p in points {
        let depth = match p.depth {
            DepthSearch::Depth(d) => Cell::from(d),
            DepthSearch::BelowThreshold => Cell::from("n/a"),
            DepthSearch::NeverWithinCap => Cell::from("never"),
        };
        t.push(vec![p.k.into(), p.eta.into(), p.n.into(), p.eps.into(), depth]);
    }
    t
}

/// Columns `level,n_i`.
pub fn trajectory_table(traj: &Trajectory) -> Table {
    let mut t = Table::new(["level", "n_i"]);
    for (i, level) in traj.levels.iter().enumerate() {
        t.push(vec![i.into(), level.qubits().into()]);
    }
    t
}

/// Full states of a trajectory: a `level <i> qubits <n>` line per level,
/// then one line per matrix row of space-separated complex entries.
pub fn trajectory_states(traj: &Trajectory) -> String {
    let mut out = String::new();
    for (i, level) in traj.levels.iter().enumerate() {
        out.push_str(&format!("level {i} qubits {}\n", level.qubits()));
        push_state(&mut out, level);
    }
    out
}

fn push_state(out: &mut String, rho: &DensityMatrix) {
    let m = rho.matrix();
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| fmt_complex(m[(r, c)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
}
