//! Local minima of log10 g² on a finished grid.

use serde::Serialize;

use super::{run_grid, Axis, GridResult, SweepSpec};
use crate::error::Result;

/// Only minima below this g² are reported.
pub const ANTIBUNCHING_LIMIT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Minimum {
    pub index: (usize, usize),
    /// Axis values at the grid cell.
    pub at: (f64, f64),
    /// Axis values after per-axis quadratic interpolation.
    pub refined: (f64, f64),
    pub g2: f64,
}

fn log_value(grid: &GridResult, i1: usize, i2: usize) -> f64 {
    match grid.g2(i1, i2) {
        Some(v) if v > 0.0 => v.log10(),
        Some(_) => f64::NEG_INFINITY,
        None => f64::INFINITY,
    }
}

/// Vertex offset of the parabola through three equally spaced samples,
/// in units of the spacing, limited to half a step.
fn parabola_offset(left: f64, mid: f64, right: f64) -> f64 {
    let curvature = left - 2.0 * mid + right;
    if !(curvature > 0.0) || !left.is_finite() || !right.is_finite() || !mid.is_finite() {
        return 0.0;
    }
    (0.5 * (left - right) / curvature).clamp(-0.5, 0.5)
}

/// Interior cells whose g² is below every neighbour (ties broken towards the
/// lower index) and below [`ANTIBUNCHING_LIMIT`]. Sorted by g², smallest first.
/// Failed cells count as +∞.
pub fn find_minima(grid: &GridResult) -> Vec<Minimum> {
    let (n1, n2) = grid.shape();
    let two_d = grid.spec.axis2.is_some();
    let range2 = if two_d { 1..n2.saturating_sub(1) } else { 0..1 };
    let mut out = Vec::new();
    for i2 in range2 {
        for i1 in 1..n1.saturating_sub(1) {
            let v = log_value(grid, i1, i2);
            if !(v < ANTIBUNCHING_LIMIT.log10()) {
                continue;
            }
            let mut is_min = true;
            'nb: for d2 in if two_d { -1i64..=1 } else { 0..=0 } {
                for d1 in -1i64..=1 {
                    if d1 == 0 && d2 == 0 {
                        continue;
                    }
                    let j1 = (i1 as i64 + d1) as usize;
                    let j2 = (i2 as i64 + d2) as usize;
                    let w = log_value(grid, j1, j2);
                    let earlier = (d2, d1) < (0, 0);
                    if w < v || (earlier && w == v) {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if !is_min {
                continue;
            }
            let axis1 = &grid.spec.axis1;
            let x1 = axis1.value(i1);
            let r1 = x1
                + axis1.step()
                    * parabola_offset(log_value(grid, i1 - 1, i2), v, log_value(grid, i1 + 1, i2));
            let (x2, r2) = match &grid.spec.axis2 {
                Some(axis2) => {
                    let x2 = axis2.value(i2);
                    let off = parabola_offset(
                        log_value(grid, i1, i2 - 1),
                        v,
                        log_value(grid, i1, i2 + 1),
                    );
                    (x2, x2 + axis2.step() * off)
                }
                None => (0.0, 0.0),
            };
            out.push(Minimum {
                index: (i1, i2),
                at: (x1, x2),
                refined: (r1, r2),
                g2: 10f64.powf(v),
            });
        }
    }
    out.sort_by(|a, b| a.g2.total_cmp(&b.g2));
    out
}

/// Re-solves a finer grid spanning one coarse step either side of `minimum`,
/// `levels` times, and returns the best cell of the last level.
pub fn refine_minimum(spec: &SweepSpec, minimum: &Minimum, levels: usize) -> Result<Minimum> {
    const POINTS: usize = 11;
    let mut spec = spec.clone();
    let mut best = *minimum;
    let zoom = |axis: &Axis, centre: f64| {
        let h = axis.step();
        Axis::new(axis.param, centre - h, centre + h, POINTS)
    };
    for _ in 0..levels {
        spec.axis1 = zoom(&spec.axis1, best.at.0);
        if let Some(axis2) = spec.axis2 {
            spec.axis2 = Some(zoom(&axis2, best.at.1));
        }
        let grid = run_grid(&spec)?;
        let Some((cell, g2)) = grid.global_minimum() else {
            break;
        };
        if g2 > best.g2 {
            break;
        }
        let (i1, i2) = cell.index;
        let at = (
            spec.axis1.value(i1),
            spec.axis2.map_or(0.0, |a| a.value(i2)),
        );
        best = Minimum {
            index: minimum.index,
            at,
            refined: at,
            g2,
        };
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Param, SystemParams};
    use crate::sweep::{Engine, SweepSpec};

    #[test]
    fn parabola_vertex() {
        // f(x) = (x - 0.2)^2 sampled at -1, 0, 1.
        let f = |x: f64| (x - 0.2) * (x - 0.2);
        assert!((parabola_offset(f(-1.0), f(0.0), f(1.0)) - 0.2).abs() < 1e-12);
        assert_eq!(parabola_offset(1.0, 0.0, f64::INFINITY), 0.0);
    }

    #[test]
    fn finds_red_side_minimum_on_a_line() {
        let fixed = SystemParams::with_detunings(0.0, 20.0, 10.0);
        let spec = SweepSpec::line(Axis::with_step(Param::Delta0, -30.0, 30.0, 0.05), fixed)
            .with_engine(Engine::Analytic);
        let grid = run_grid(&spec).unwrap();
        let minima = find_minima(&grid);
        assert!(!minima.is_empty());
        let red = minima.iter().find(|m| m.at.0 < 0.0).unwrap();
        assert!((red.refined.0 + 8.59).abs() < 0.05, "{red:?}");
        assert!(minima.iter().any(|m| (m.at.0 - 5.1).abs() < 0.1));
    }

    #[test]
    fn boundary_cells_are_not_minima() {
        // g² falls monotonically towards Δ0 = 0 from the right end; on [0, 2]
        // the smallest cell sits on the boundary.
        let fixed = SystemParams::with_detunings(0.0, 0.0, 0.5f64.sqrt());
        let spec = SweepSpec::line(Axis::new(Param::Delta0, 0.0, 2.0, 21), fixed)
            .with_engine(Engine::Analytic);
        let grid = run_grid(&spec).unwrap();
        assert!(find_minima(&grid).iter().all(|m| m.index.0 != 0));
    }

    #[test]
    fn refinement_improves_minimum() {
        let fixed = SystemParams::with_detunings(0.0, 20.0, 10.0);
        let spec = SweepSpec::line(Axis::new(Param::Delta0, -12.0, -6.0, 7), fixed)
            .with_engine(Engine::Analytic);
        let grid = run_grid(&spec).unwrap();
        let m = find_minima(&grid)[0];
        let r = refine_minimum(&spec, &m, 2).unwrap();
        assert!(r.g2 <= m.g2);
        assert!((r.at.0 + 8.59).abs() < 0.05, "{r:?}");
    }
}
