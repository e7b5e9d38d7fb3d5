//! Named sweeps reproducing the standard blockade maps.

use serde::Serialize;

use super::{Axis, Constraint, Engine, SweepSpec};
use crate::error::{Error, Result};
use crate::model::{Param, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    /// log10 g² over (Δ0, Δa) at g = 10.
    Fig2a,
    /// Δ0 slices at g = 10 for Δa = 15, 20, 25, 30.
    Fig2b,
    /// (Δ0, Δa) near resonance at the minimal optimal coupling.
    Fig3a,
    /// (Δ0, Δa) near resonance at g = 1.
    Fig3b,
    /// (Δ0, g) at Δa = 30.
    Fig4a,
    /// Δ0 slices at Δa = 30 for g = 1, 10, 20.
    Fig4b,
    /// (Δ0, g) along Δa = −3Δ0.
    Fig5a,
    /// (Δ0, g) along Δa = −5Δ0.
    Fig5b,
}

impl Figure {
    pub const ALL: [Figure; 8] = [
        Figure::Fig2a,
        Figure::Fig2b,
        Figure::Fig3a,
        Figure::Fig3b,
        Figure::Fig4a,
        Figure::Fig4b,
        Figure::Fig5a,
        Figure::Fig5b,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
            Figure::Fig5a => "fig5a",
            Figure::Fig5b => "fig5b",
        }
    }

    /// Sweeps making up the preset. `grid` overrides the point count of every axis.
    pub fn specs(&self, grid: Option<usize>) -> Vec<SweepSpec> {
        let n = |default: usize| grid.unwrap_or(default);
        let d0 = |half: f64, count: usize| Axis::new(Param::Delta0, -half, half, n(count));
        let fixed = SystemParams::with_detunings;
        let plane = |half: f64, g: f64| {
            SweepSpec::plane(
                d0(half, 241),
                Axis::new(Param::DeltaA, -half, half, n(241)),
                fixed(0.0, 0.0, g),
            )
        };
        let tied = |factor: f64| {
            SweepSpec::plane(
                d0(2.0, 241),
                Axis::new(Param::G, 0.0, 3.0, n(241)),
                fixed(0.0, 0.0, 0.0),
            )
            .with_constraint(Constraint {
                target: Param::DeltaA,
                source: Param::Delta0,
                factor,
            })
        };
        let specs = match self {
            Figure::Fig2a => vec![plane(30.0, 10.0)],
            Figure::Fig2b => [15.0, 20.0, 25.0, 30.0]
                .into_iter()
                .map(|da| SweepSpec::line(d0(30.0, 1201), fixed(0.0, da, 10.0)))
                .collect(),
            Figure::Fig3a => vec![plane(1.0, 0.5f64.sqrt())],
            Figure::Fig3b => vec![plane(2.0, 1.0)],
            Figure::Fig4a => vec![SweepSpec::plane(
                d0(30.0, 241),
                Axis::new(Param::G, 0.0, 20.0, n(241)),
                fixed(0.0, 30.0, 0.0),
            )],
            Figure::Fig4b => [1.0, 10.0, 20.0]
                .into_iter()
                .map(|g| SweepSpec::line(d0(30.0, 1201), fixed(0.0, 30.0, g)))
                .collect(),
            Figure::Fig5a => vec![tied(-3.0)],
            Figure::Fig5b => vec![tied(-5.0)],
        };
        specs
            .into_iter()
            .map(|s| s.with_engine(Engine::Both))
            .collect()
    }
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown figure '{s}'")))
    }
}

impl std::fmt::Display for Figure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
