//! Parameter sweeps over one or two axes, evaluated cell by cell.
//!
//! Cells are laid out column-major: axis 1 varies fastest, so the cell at
//! `(i1, i2)` lives at `i1 + n1 * i2`. Every cell is computed independently
//! and written to its own slot, so results do not depend on scheduling.

mod minima;
mod output;
mod overlay;
mod presets;

pub use minima::{find_minima, refine_minimum, Minimum};
pub use output::{grid_json, write_csv, write_json, CSV_HEADER};
pub use overlay::{overlay_curves, OverlayCurves, Polyline, Region};
pub use presets::Figure;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{analytic_g2, ucpb_condition_residual, weak_drive_amplitudes};
use crate::error::{Error, Result};
use crate::hilbert::HilbertSpace;
use crate::lindblad::{build_liouvillian, steady_state};
use crate::model::{Param, SystemParams};
use crate::observables::{g2_zero, photon_stats};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: Param,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(param: Param, start: f64, stop: f64, count: usize) -> Self {
        Self {
            param,
            start,
            stop,
            count,
        }
    }

    /// Axis with (approximately) the requested spacing, endpoints included.
    pub fn with_step(param: Param, start: f64, stop: f64, step: f64) -> Self {
        let count = ((stop - start) / step).round() as usize + 1;
        Self::new(param, start, stop, count)
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.stop
        } else {
            self.start + i as f64 * self.step()
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }

    /// Index of the grid value closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.start) / self.step()).round();
        i.clamp(0.0, (self.count - 1) as f64) as usize
    }

    fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidSpec(format!(
                "axis {} needs at least 2 points",
                self.param
            )));
        }
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "axis {} needs finite start < stop (got {} .. {})",
                self.param, self.start, self.stop
            )));
        }
        Ok(())
    }

    /// Parses `name:start:stop:count`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidSpec(format!(
                "axis '{s}' is not name:start:stop:count"
            )));
        }
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSpec(format!("bad number '{x}' in axis '{s}'")))
        };
        let count = parts[3]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidSpec(format!("bad count in axis '{s}'")))?;
        Ok(Self::new(
            parts[0].trim().parse()?,
            num(parts[1])?,
            num(parts[2])?,
            count,
        ))
    }
}

/// Linear tie `target = factor * source`, applied after the axis values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub target: Param,
    pub source: Param,
    pub factor: f64,
}

impl Constraint {
    /// Parses `target=factor*source`, e.g. `delta_a=-3*delta0`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("constraint '{s}' is not target=factor*source"));
        let (target, rhs) = s.split_once('=').ok_or_else(bad)?;
        let (factor, source) = rhs.split_once('*').ok_or_else(bad)?;
        Ok(Self {
            target: target.trim().parse()?,
            source: source.trim().parse()?,
            factor: factor.trim().parse().map_err(|_| bad())?,
        })
    }

    fn apply(&self, p: &mut SystemParams) {
        let v = self.factor * p.get(self.source);
        p.set(self.target, v);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Analytic,
    Numeric,
    Both,
}

impl Engine {
    pub fn analytic(&self) -> bool {
        matches!(self, Engine::Analytic | Engine::Both)
    }

    pub fn numeric(&self) -> bool {
        matches!(self, Engine::Numeric | Engine::Both)
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "numeric" | "master-equation" => Ok(Engine::Numeric),
            "both" => Ok(Engine::Both),
            other => Err(Error::InvalidSpec(format!("unknown engine '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    /// Values for every parameter not set by an axis or the constraint.
    pub fixed: SystemParams,
    pub constraint: Option<Constraint>,
    pub engine: Engine,
    pub n_max: usize,
}

impl SweepSpec {
    pub fn line(axis: Axis, fixed: SystemParams) -> Self {
        Self {
            axis1: axis,
            axis2: None,
            fixed,
            constraint: None,
            engine: Engine::Numeric,
            n_max: 5,
        }
    }

    pub fn plane(axis1: Axis, axis2: Axis, fixed: SystemParams) -> Self {
        Self {
            axis2: Some(axis2),
            ..Self::line(axis1, fixed)
        }
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_constraint(mut self, constraint: Constraint) -> Self {
        self.constraint = Some(constraint);
        self
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.axis1.validate()?;
        if let Some(axis2) = &self.axis2 {
            axis2.validate()?;
            if axis2.param == self.axis1.param {
                return Err(Error::InvalidSpec(format!(
                    "parameter {} swept twice",
                    axis2.param
                )));
            }
        }
        if let Some(c) = &self.constraint {
            let swept = |p: Param| p == self.axis1.param || self.axis2.map(|a| a.param) == Some(p);
            if swept(c.target) {
                return Err(Error::InvalidSpec(format!(
                    "constraint target {} is a swept axis",
                    c.target
                )));
            }
            if c.target == c.source {
                return Err(Error::InvalidSpec(
                    "constraint ties a parameter to itself".into(),
                ));
            }
            if !c.factor.is_finite() {
                return Err(Error::InvalidSpec(
                    "constraint factor must be finite".into(),
                ));
            }
        }
        HilbertSpace::new(self.n_max)?;
        self.fixed
            .validate()
            .map_err(|e| Error::InvalidSpec(format!("fixed parameters: {e}")))?;
        Ok(())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.axis1.count, self.axis2.map_or(1, |a| a.count))
    }

    pub fn len(&self) -> usize {
        let (n1, n2) = self.shape();
        n1 * n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_index(&self, i1: usize, i2: usize) -> usize {
        i1 + self.axis1.count * i2
    }

    pub fn cell_params(&self, i1: usize, i2: usize) -> SystemParams {
        let mut p = self.fixed;
        p.set(self.axis1.param, self.axis1.value(i1));
        if let Some(axis2) = &self.axis2 {
            p.set(axis2.param, axis2.value(i2));
        }
        if let Some(c) = &self.constraint {
            c.apply(&mut p);
        }
        p
    }
}

/// Everything computed at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub params: SystemParams,
    pub g2_numeric: Option<f64>,
    pub g2_analytic: Option<f64>,
    /// From the steady state when solved, otherwise the weak-drive estimate.
    pub mean_n: f64,
    pub cpb_residual: f64,
    pub ucpb_residual: Complex64,
}

impl PointRecord {
    /// Master-equation value when available, otherwise the closed form.
    pub fn g2(&self) -> Option<f64> {
        self.g2_numeric.or(self.g2_analytic)
    }
}

pub fn run_point(p: &SystemParams, engine: Engine, n_max: usize) -> Result<PointRecord> {
    p.validate()?;
    let space = HilbertSpace::new(n_max)?;
    let mut record = PointRecord {
        params: *p,
        g2_numeric: None,
        g2_analytic: None,
        mean_n: weak_drive_amplitudes(p).mean_photon_number(),
        cpb_residual: p.cpb_residual(),
        ucpb_residual: ucpb_condition_residual(p),
    };
    if engine.numeric() {
        let rho = steady_state(&build_liouvillian(p, space))?;
        record.g2_numeric = Some(g2_zero(&rho)?);
        record.mean_n = photon_stats(&rho).mean_n;
    }
    if engine.analytic() {
        record.g2_analytic = Some(analytic_g2(p)?);
    }
    Ok(record)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub index: (usize, usize),
    pub params: SystemParams,
    pub outcome: std::result::Result<PointRecord, Error>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub spec: SweepSpec,
    /// Column-major, axis 1 fastest.
    pub cells: Vec<Cell>,
}

impl GridResult {
    pub fn shape(&self) -> (usize, usize) {
        self.spec.shape()
    }

    pub fn cell(&self, i1: usize, i2: usize) -> &Cell {
        &self.cells[self.spec.cell_index(i1, i2)]
    }

    /// Preferred g² of a cell; `None` for failed cells.
    pub fn g2(&self, i1: usize, i2: usize) -> Option<f64> {
        self.cell(i1, i2).outcome.as_ref().ok().and_then(|r| r.g2())
    }

    pub fn failures(&self) -> Vec<(usize, usize, &Error)> {
        self.cells
            .iter()
            .filter_map(|c| c.outcome.as_ref().err().map(|e| (c.index.0, c.index.1, e)))
            .collect()
    }

    /// Cell with the smallest g², if any succeeded.
    pub fn global_minimum(&self) -> Option<(&Cell, f64)> {
        self.cells
            .iter()
            .filter_map(|c| c.outcome.as_ref().ok().and_then(|r| r.g2()).map(|v| (c, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Evaluates every cell on the current rayon pool.
pub fn run_grid(spec: &SweepSpec) -> Result<GridResult> {
    spec.validate()?;
    let (n1, _) = spec.shape();
    let cells = (0..spec.len())
        .into_par_iter()
        .map(|k| {
            let index = (k % n1, k / n1);
            let params = spec.cell_params(index.0, index.1);
            Cell {
                index,
                params,
                outcome: run_point(&params, spec.engine, spec.n_max),
            }
        })
        .collect();
    Ok(GridResult {
        spec: spec.clone(),
        cells,
    })
}

/// [`run_grid`] on a dedicated pool of `jobs` threads.
pub fn run_grid_with_jobs(spec: &SweepSpec, jobs: usize) -> Result<GridResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidSpec(format!("cannot start {jobs} workers: {e}")))?;
    pool.install(|| run_grid(spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed(g: f64) -> SystemParams {
        SystemParams::with_detunings(0.0, 0.0, g)
    }

    #[test]
    fn axis_values_hit_endpoints() {
        let a = Axis::with_step(Param::Delta0, -30.0, 30.0, 0.05);
        assert_eq!(a.count, 1201);
        assert_eq!(a.value(0), -30.0);
        assert_eq!(a.value(1200), 30.0);
        assert!((a.value(600)).abs() < 1e-12);
        assert_eq!(a.nearest(-9.3), 414);
    }

    #[test]
    fn spec_validation() {
        let good = SweepSpec::plane(
            Axis::new(Param::Delta0, -1.0, 1.0, 3),
            Axis::new(Param::G, 0.0, 1.0, 3),
            fixed(1.0),
        );
        assert!(good.validate().is_ok());

        let mut bad = good.clone();
        bad.axis1.count = 1;
        assert!(bad.validate().is_err());

        let mut bad = good.clone();
        bad.axis1.start = 2.0;
        assert!(bad.validate().is_err());

        let bad = good
            .clone()
            .with_constraint(Constraint::parse("g=2*delta0").unwrap());
        assert!(matches!(bad.validate(), Err(Error::InvalidSpec(_))));

        let ok = good
            .clone()
            .with_constraint(Constraint::parse("delta_a=-3*delta0").unwrap());
        assert!(ok.validate().is_ok());
        assert_eq!(ok.cell_params(0, 0).delta_a, 3.0);

        let mut twice = good.clone();
        twice.axis2 = Some(Axis::new(Param::Delta0, 0.0, 1.0, 2));
        assert!(twice.validate().is_err());

        assert!(good.clone().with_n_max(1).validate().is_err());
    }

    #[test]
    fn parsing() {
        let a = Axis::parse("delta_a:-30:30:241").unwrap();
        assert_eq!(a, Axis::new(Param::DeltaA, -30.0, 30.0, 241));
        assert!(Axis::parse("gamma:0:1:3").is_err());
        assert!(Axis::parse("g:0:1").is_err());
        let c = Constraint::parse("delta_a = -5 * delta0").unwrap();
        assert_eq!(
            (c.target, c.source, c.factor),
            (Param::DeltaA, Param::Delta0, -5.0)
        );
        assert!(Constraint::parse("delta_a=-5").is_err());
        assert_eq!(
            "master-equation".parse::<Engine>().unwrap(),
            Engine::Numeric
        );
    }

    #[test]
    fn cell_layout_is_column_major() {
        let spec = SweepSpec::plane(
            Axis::new(Param::Delta0, 0.0, 1.0, 3),
            Axis::new(Param::DeltaA, 0.0, 2.0, 2),
            fixed(0.0),
        );
        let grid = run_grid(&spec.with_engine(Engine::Analytic)).unwrap();
        assert_eq!(grid.cells.len(), 6);
        assert_eq!(grid.cells[1].index, (1, 0));
        assert_eq!(grid.cells[3].index, (0, 1));
        assert_eq!(grid.cells[3].params.delta_a, 2.0);
        assert_eq!(grid.cells[2].params.delta0, 1.0);
    }

    #[test]
    fn uncoupled_grid_is_coherent() {
        let spec = SweepSpec::plane(
            Axis::new(Param::Delta0, -5.0, 5.0, 2),
            Axis::new(Param::DeltaA, -5.0, 5.0, 2),
            fixed(0.0),
        )
        .with_engine(Engine::Both);
        let grid = run_grid(&spec).unwrap();
        for c in &grid.cells {
            let r = c.outcome.as_ref().unwrap();
            assert!((r.g2_numeric.unwrap() - 1.0).abs() < 1e-6);
            assert!((r.g2_analytic.unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn failures_are_recorded_per_cell() {
        // ε = 0 at one end of the axis: no excitation there.
        let spec = SweepSpec::line(Axis::new(Param::Epsilon, 0.0, 0.01, 2), fixed(1.0));
        let grid = run_grid(&spec).unwrap();
        let failures = grid.failures();
        assert_eq!(failures.len(), 1);
        assert_eq!((failures[0].0, failures[0].1), (0, 0));
        assert!(matches!(failures[0].2, Error::NoExcitation(_)));
        assert!(grid.g2(1, 0).is_some());
    }

    #[test]
    fn point_examples() {
        let cpb = run_point(
            &SystemParams::with_detunings(10.0, 10.0, 10.0),
            Engine::Both,
            5,
        )
        .unwrap();
        assert!(cpb.g2_numeric.unwrap() < 0.1);
        assert_eq!(cpb.cpb_residual, 0.0);

        let ucpb = run_point(
            &SystemParams::with_detunings(0.0, 0.0, 0.5f64.sqrt()),
            Engine::Numeric,
            5,
        )
        .unwrap();
        assert!(ucpb.g2_numeric.unwrap() < 0.01);
        assert!(ucpb.ucpb_residual.norm() < 1e-12);

        let coherent = run_point(
            &SystemParams::with_detunings(4.0, -2.0, 0.0),
            Engine::Numeric,
            5,
        )
        .unwrap();
        assert!((coherent.g2_numeric.unwrap() - 1.0).abs() < 1e-3);

        let undriven = SystemParams {
            epsilon: 0.0,
            ..fixed(1.0)
        };
        assert!(matches!(
            run_point(&undriven, Engine::Numeric, 5),
            Err(Error::NoExcitation(_))
        ));
    }

    #[test]
    fn grid_is_independent_of_worker_count() {
        let spec = SweepSpec::plane(
            Axis::new(Param::Delta0, -12.0, 12.0, 7),
            Axis::new(Param::DeltaA, -12.0, 12.0, 5),
            fixed(10.0),
        )
        .with_engine(Engine::Both);
        let one = run_grid_with_jobs(&spec, 1).unwrap();
        let four = run_grid_with_jobs(&spec, 4).unwrap();
        assert_eq!(one, four);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&mut a, &[one]).unwrap();
        write_csv(&mut b, &[four]).unwrap();
        assert_eq!(a, b);
    }
}
