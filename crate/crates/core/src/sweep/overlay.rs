//! Analytic blockade conditions drawn as curves in the (Δ0, Δa) plane.

use serde::Serialize;

use crate::analytics::{ucpb_optimal_pairs, OptimalPair};

/// Points as (Δ0, Δa).
pub type Polyline = Vec<(f64, f64)>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub delta0: (f64, f64),
    pub delta_a: (f64, f64),
}

impl Region {
    pub fn square(half_width: f64) -> Self {
        Self {
            delta0: (-half_width, half_width),
            delta_a: (-half_width, half_width),
        }
    }

    pub fn contains(&self, (d0, da): (f64, f64)) -> bool {
        d0 >= self.delta0.0 && d0 <= self.delta0.1 && da >= self.delta_a.0 && da <= self.delta_a.1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlayCurves {
    /// g² = ΔaΔ0.
    pub cpb: Vec<Polyline>,
    /// Zero set of the real part of the optimal condition.
    pub ucpb_real: Vec<Polyline>,
    /// Zero set of the imaginary part.
    pub ucpb_imag: Vec<Polyline>,
    pub ucpb_points: Vec<OptimalPair>,
}

/// Splits sampled points into runs that stay inside the region.
fn clip(region: &Region, points: impl Iterator<Item = (f64, f64)>) -> Vec<Polyline> {
    let mut lines = Vec::new();
    let mut current = Vec::new();
    for pt in points {
        if pt.0.is_finite() && pt.1.is_finite() && region.contains(pt) {
            current.push(pt);
        } else if !current.is_empty() {
            lines.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        lines.push(current);
    }
    lines.retain(|l| l.len() >= 2);
    lines
}

/// `samples` points on each side of zero, excluding zero itself.
fn signed_samples(lo: f64, hi: f64, samples: usize) -> [Vec<f64>; 2] {
    let side = |a: f64, b: f64| -> Vec<f64> {
        if !(b > a) {
            return Vec::new();
        }
        (0..samples)
            .map(|k| a + (b - a) * (k as f64 + 0.5) / samples as f64)
            .collect()
    };
    [side(lo, hi.min(0.0)), side(lo.max(0.0), hi)]
}

fn linspace(lo: f64, hi: f64, samples: usize) -> impl Iterator<Item = f64> {
    (0..samples).map(move |k| lo + (hi - lo) * k as f64 / (samples - 1) as f64)
}

pub fn overlay_curves(
    region: &Region,
    g: f64,
    kappa: f64,
    gamma: f64,
    samples: usize,
) -> OverlayCurves {
    let samples = samples.max(2);
    let g2 = g * g;

    let mut cpb = Vec::new();
    if g2 == 0.0 {
        cpb.extend(clip(
            region,
            linspace(region.delta_a.0, region.delta_a.1, samples).map(|da| (0.0, da)),
        ));
        cpb.extend(clip(
            region,
            linspace(region.delta0.0, region.delta0.1, samples).map(|d0| (d0, 0.0)),
        ));
    } else {
        for side in signed_samples(region.delta_a.0, region.delta_a.1, samples) {
            cpb.extend(clip(region, side.into_iter().map(|da| (g2 / da, da))));
        }
    }

    // 4ΔaΔ0 = (γ+κ)γ − 4g² − 4Δ0².
    let offset = (gamma + kappa) * gamma / 4.0 - g2;
    let mut ucpb_real = Vec::new();
    if offset.abs() <= 1e-12 * gamma * gamma {
        ucpb_real.extend(clip(
            region,
            linspace(region.delta0.0, region.delta0.1, samples).map(|d0| (d0, -d0)),
        ));
        ucpb_real.extend(clip(
            region,
            linspace(region.delta_a.0, region.delta_a.1, samples).map(|da| (0.0, da)),
        ));
    } else {
        for side in signed_samples(region.delta0.0, region.delta0.1, samples) {
            ucpb_real.extend(clip(
                region,
                side.into_iter().map(|d0| (d0, offset / d0 - d0)),
            ));
        }
    }

    let slope = -(kappa / gamma + 2.0);
    let ucpb_imag = clip(
        region,
        linspace(region.delta0.0, region.delta0.1, samples).map(|d0| (d0, slope * d0)),
    );

    let ucpb_points = ucpb_optimal_pairs(g, kappa, gamma)
        .into_iter()
        .filter(|p| region.contains((p.delta0, p.delta_a)))
        .collect();

    OverlayCurves {
        cpb,
        ucpb_real,
        ucpb_imag,
        ucpb_points,
    }
}
