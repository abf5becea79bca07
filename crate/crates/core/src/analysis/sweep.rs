use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::entangle::pairwise_concurrence;
use crate::error::{Error, Result};
use crate::gibbs::Diagonalized;
use crate::model::{ModelSpec, Param};

/// Upper bound on the number of grid points in one sweep.
pub const MAX_SWEEP_POINTS: usize = 10_000_000;

/// Environment variable capping sweep parallelism; unset or 0 means automatic.
pub const THREADS_ENV: &str = "SPINLAB_THREADS";

/// A swept quantity: one of the model parameters or the temperature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepVar {
    Delta,
    D,
    H,
    T,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Delta => "delta",
            SweepVar::D => "d",
            SweepVar::H => "h",
            SweepVar::T => "t",
        }
    }

    fn param(self) -> Option<Param> {
        match self {
            SweepVar::Delta => Some(Param::Delta),
            SweepVar::D => Some(Param::D),
            SweepVar::H => Some(Param::H),
            SweepVar::T => None,
        }
    }
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "delta" => Ok(SweepVar::Delta),
            "d" => Ok(SweepVar::D),
            "h" => Ok(SweepVar::H),
            "t" => Ok(SweepVar::T),
            other => Err(Error::Parse(format!(
                "unknown sweep variable '{other}' (expected delta, d, h or t)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AxisValues {
    /// `points` evenly spaced values from `min` to `max` inclusive.
    Range { min: f64, max: f64, points: usize },
    List(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepAxis {
    pub var: SweepVar,
    pub values: AxisValues,
}

impl SweepAxis {
    pub fn range(var: SweepVar, min: f64, max: f64, points: usize) -> Self {
        Self {
            var,
            values: AxisValues::Range { min, max, points },
        }
    }

    pub fn list(var: SweepVar, values: Vec<f64>) -> Self {
        Self {
            var,
            values: AxisValues::List(values),
        }
    }

    pub fn len(&self) -> usize {
        match &self.values {
            AxisValues::Range { points, .. } => *points,
            AxisValues::List(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn value(&self, k: usize) -> f64 {
        match &self.values {
            AxisValues::Range { min, max, points } => {
                if *points == 1 {
                    *min
                } else if k + 1 == *points {
                    *max
                } else {
                    min + (max - min) * k as f64 / (*points - 1) as f64
                }
            }
            AxisValues::List(v) => v[k],
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }

    fn validate(&self) -> Result<()> {
        let name = self.var.name();
        match &self.values {
            AxisValues::Range { min, max, points } => {
                if *points == 0 {
                    return Err(Error::contract(format!("axis {name} has no points")));
                }
                if !min.is_finite() || !max.is_finite() {
                    return Err(Error::contract(format!("axis {name} has a non-finite bound")));
                }
                if *points > 1 && min == max {
                    return Err(Error::contract(format!(
                        "axis {name} repeats {min} {points} times"
                    )));
                }
            }
            AxisValues::List(v) => {
                if v.is_empty() {
                    return Err(Error::contract(format!("axis {name} has no points")));
                }
                if v.iter().any(|x| !x.is_finite()) {
                    return Err(Error::contract(format!("axis {name} has a non-finite value")));
                }
            }
        }
        if self.var == SweepVar::T && self.values().iter().any(|&t| t < 0.0) {
            return Err(Error::contract("temperatures must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Observable {
    C12,
    C13,
    EnergyGap,
    Purity,
    GroundDegeneracy,
}

impl Observable {
    pub const ALL: [Observable; 5] = [
        Observable::C12,
        Observable::C13,
        Observable::EnergyGap,
        Observable::Purity,
        Observable::GroundDegeneracy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::C12 => "c12",
            Observable::C13 => "c13",
            Observable::EnergyGap => "energy_gap",
            Observable::Purity => "purity",
            Observable::GroundDegeneracy => "ground_degeneracy",
        }
    }

    fn is_integer(self) -> bool {
        self == Observable::GroundDegeneracy
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown observable '{}'", s.trim())))
    }
}

/// A rectangular grid over one or two variables around a fixed model.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub axes: Vec<SweepAxis>,
    pub fixed: ModelSpec,
    /// Temperature used when `t` is not an axis.
    pub t: f64,
    pub observables: Vec<Observable>,
}

impl SweepGrid {
    pub fn new(fixed: ModelSpec, axes: Vec<SweepAxis>, observables: Vec<Observable>) -> Self {
        Self {
            axes,
            fixed,
            t: 0.0,
            observables,
        }
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// Replace the point count of every range axis.
    pub fn with_points(mut self, points: usize) -> Self {
        for axis in &mut self.axes {
            if let AxisValues::Range { points: p, .. } = &mut axis.values {
                *p = points;
            }
        }
        self
    }

    /// Replace (or add) the temperature axis with an explicit list.
    pub fn with_temperatures(mut self, ts: Vec<f64>) -> Self {
        match self.axes.iter_mut().find(|a| a.var == SweepVar::T) {
            Some(axis) => axis.values = AxisValues::List(ts),
            None => self.axes.push(SweepAxis::list(SweepVar::T, ts)),
        }
        self
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(SweepAxis::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn header(&self) -> Vec<String> {
        self.axes
            .iter()
            .map(|a| a.var.name().to_string())
            .chain(self.observables.iter().map(|o| o.name().to_string()))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::contract(format!(
                "a sweep needs one or two axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].var == self.axes[1].var {
            return Err(Error::contract(format!(
                "axis {} is declared twice",
                self.axes[0].var
            )));
        }
        for axis in &self.axes {
            axis.validate()?;
        }
        if self.observables.is_empty() {
            return Err(Error::contract("a sweep needs at least one observable"));
        }
        for (k, o) in self.observables.iter().enumerate() {
            if self.observables[..k].contains(o) {
                return Err(Error::contract(format!("observable {o} is listed twice")));
            }
        }
        if self.observables.contains(&Observable::C13) && self.fixed.n < 3 {
            return Err(Error::contract("c13 needs at least 3 sites"));
        }
        if !self.t.is_finite() || self.t < 0.0 {
            return Err(Error::contract("the fixed temperature must be finite and non-negative"));
        }
        let total = self
            .axes
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.len()))
            .unwrap_or(usize::MAX);
        if total > MAX_SWEEP_POINTS {
            return Err(Error::contract(format!(
                "{total} grid points exceed the limit of {MAX_SWEEP_POINTS}"
            )));
        }
        // Catch kind/parameter mismatches (e.g. an h axis on a zero-field model)
        // before any work is done.
        for axis in &self.axes {
            if let Some(p) = axis.var.param() {
                for x in axis.values() {
                    self.fixed.clone().with_param(p, x).validate()?;
                }
            }
        }
        self.point(0).0.validate()
    }

    /// Axis coordinates of row `index` in row-major order (first axis outermost).
    pub fn coords(&self, index: usize) -> Vec<f64> {
        let mut rest = index;
        let mut out = vec![0.0; self.axes.len()];
        for (slot, axis) in out.iter_mut().zip(&self.axes).rev() {
            let len = axis.len();
            *slot = axis.value(rest % len);
            rest /= len;
        }
        out
    }

    fn point(&self, index: usize) -> (ModelSpec, f64, Vec<f64>) {
        let coords = self.coords(index);
        let mut spec = self.fixed.clone();
        let mut t = self.t;
        for (axis, &x) in self.axes.iter().zip(&coords) {
            match axis.var.param() {
                Some(p) => spec.set_param(p, x),
                None => t = x,
            }
        }
        (spec, t, coords)
    }

    fn describe(&self, coords: &[f64]) -> String {
        self.axes
            .iter()
            .zip(coords)
            .map(|(a, x)| format!("{}={x:?}", a.var))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Evaluate the observables for one model at one temperature.
pub fn evaluate(spec: &ModelSpec, t: f64, observables: &[Observable]) -> Result<Vec<f64>> {
    spec.validate()?;
    let diag = Diagonalized::from_model(spec)?;
    let needs_state = observables
        .iter()
        .any(|o| matches!(o, Observable::C12 | Observable::C13 | Observable::Purity));
    let rho = if needs_state {
        Some(diag.thermal_state(t)?)
    } else {
        None
    };
    observables
        .iter()
        .map(|o| {
            Ok(match o {
                Observable::C12 => pairwise_concurrence(rho.as_ref().unwrap(), 1, 2)?.value,
                Observable::C13 => pairwise_concurrence(rho.as_ref().unwrap(), 1, 3)?.value,
                Observable::Purity => rho.as_ref().unwrap().purity(),
                Observable::EnergyGap => diag.energy_gap(),
                Observable::GroundDegeneracy => diag.ground_degeneracy() as f64,
            })
        })
        .collect()
}

/// Computed grid: one row per point, axis coordinates first.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    integer_columns: Vec<bool>,
}

/// Thread count from [`THREADS_ENV`]; `None` means let rayon decide.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(Error::Parse(format!("{THREADS_ENV}='{s}' is not a thread count"))),
        },
    }
}

/// Run a sweep with parallelism taken from the environment.
pub fn run_sweep(grid: &SweepGrid) -> Result<SweepTable> {
    run_sweep_with_threads(grid, threads_from_env()?)
}

/// Run a sweep on `threads` workers (`None`: rayon's global pool). Row order
/// does not depend on the thread count.
pub fn run_sweep_with_threads(grid: &SweepGrid, threads: Option<usize>) -> Result<SweepTable> {
    grid.validate()?;
    let eval_all = || -> Vec<Result<Vec<f64>>> {
        (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (spec, t, coords) = grid.point(k);
                let obs = evaluate(&spec, t, &grid.observables).map_err(|e| Error::AtPoint {
                    coords: grid.describe(&coords),
                    source: Box::new(e),
                })?;
                Ok(coords.into_iter().chain(obs).collect())
            })
            .collect()
    };
    let results = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::contract(format!("cannot start {n} worker threads: {e}")))?
            .install(eval_all),
        None => eval_all(),
    };
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    let integer_columns = grid
        .axes
        .iter()
        .map(|_| false)
        .chain(grid.observables.iter().map(|o| o.is_integer()))
        .collect();
    Ok(SweepTable {
        header: grid.header(),
        rows,
        integer_columns,
    })
}

/// Shortest round-trip decimal, or fixed `precision` digits after the point.
pub fn format_value(x: f64, precision: Option<usize>) -> String {
    match precision {
        Some(p) => format!("{x:.p$}"),
        None => format!("{x}"),
    }
}

impl SweepTable {
    /// Build a table from raw rows; every row must match the header width.
    pub fn from_parts(header: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != header.len()) {
            return Err(Error::contract(format!(
                "row has {} cells for {} columns",
                bad.len(),
                header.len()
            )));
        }
        let integer_columns = vec![false; header.len()];
        Ok(Self {
            header,
            rows,
            integer_columns,
        })
    }

    /// Print column `col` as an integer.
    pub fn mark_integer(&mut self, col: usize) {
        self.integer_columns[col] = true;
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    fn cell(&self, col: usize, x: f64, precision: Option<usize>) -> String {
        if self.integer_columns[col] {
            format!("{}", x as u64)
        } else {
            format_value(x, precision)
        }
    }

    pub fn write_csv<W: Write>(&self, out: W, precision: Option<usize>) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let io = |e: csv::Error| Error::numeric(format!("write failed: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            let cells = row.iter().enumerate().map(|(c, &x)| self.cell(c, x, precision));
            w.write_record(cells).map_err(io)?;
        }
        w.flush().map_err(|e| Error::numeric(format!("write failed: {e}")))?;
        Ok(())
    }

    pub fn to_csv(&self, precision: Option<usize>) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, precision).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is ASCII")
    }

    pub fn to_json(&self, precision: Option<usize>) -> String {
        serde_json::to_string_pretty(&JsonTable {
            table: self,
            precision,
        })
        .expect("serializing plain numbers")
    }
}

struct JsonTable<'a> {
    table: &'a SweepTable,
    precision: Option<usize>,
}

struct JsonRow<'a> {
    table: &'a SweepTable,
    row: &'a [f64],
    precision: Option<usize>,
}

impl Serialize for JsonTable<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.table.rows.len()))?;
        for row in &self.table.rows {
            seq.serialize_element(&JsonRow {
                table: self.table,
                row,
                precision: self.precision,
            })?;
        }
        seq.end()
    }
}

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.row.len()))?;
        for (c, (key, &x)) in self.table.header.iter().zip(self.row).enumerate() {
            if self.table.integer_columns[c] {
                map.serialize_entry(key, &(x as u64))?;
            } else {
                let v = match self.precision {
                    Some(p) => format!("{x:.p$}").parse::<f64>().unwrap_or(x),
                    None => x,
                };
                map.serialize_entry(key, &v)?;
            }
        }
        map.end()
    }
}
