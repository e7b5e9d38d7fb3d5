//! Photon statistics extracted from density matrices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{Atom, HilbertSpace, StateIndex};
use crate::lindblad::{build_liouvillian, steady_state, DensityMatrix};
use crate::model::SystemParams;

/// ⟨a†a⟩ below this leaves g²(0) undefined.
pub const EXCITATION_THRESHOLD: f64 = 1e-30;

/// Top-level population above which a truncation is not trusted.
pub const TOP_LEVEL_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonStats {
    /// `None` when the field is (numerically) in the vacuum.
    pub g2_zero: Option<f64>,
    pub mean_n: f64,
    pub p_atom_e: f64,
    /// P(n) summed over the atomic state, for n = 0..=n_max.
    pub pop_by_n: Vec<f64>,
}

fn photon_distribution(rho: &DensityMatrix) -> Vec<f64> {
    let space = rho.space();
    (0..=space.n_max())
        .map(|n| rho.population(StateIndex::ground(n)) + rho.population(StateIndex::excited(n)))
        .collect()
}

/// g²(0) = Tr(ρa†a†aa) / Tr(ρa†a)². Both operators are diagonal in the
/// Fock basis, so only photon-number populations enter.
pub fn g2_zero(rho: &DensityMatrix) -> Result<f64> {
    let pops = photon_distribution(rho);
    g2_from_distribution(&pops)
}

fn g2_from_distribution(pops: &[f64]) -> Result<f64> {
    let (mut n1, mut n2) = (0.0, 0.0);
    for (n, p) in pops.iter().enumerate() {
        let n = n as f64;
        n1 += n * p;
        n2 += n * (n - 1.0) * p;
    }
    if !(n1 > EXCITATION_THRESHOLD) {
        return Err(Error::NoExcitation(n1));
    }
    Ok((n2 / (n1 * n1)).max(0.0))
}

pub fn photon_stats(rho: &DensityMatrix) -> PhotonStats {
    let pop_by_n = photon_distribution(rho);
    let mean_n = pop_by_n.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let p_atom_e = rho
        .space()
        .states()
        .filter(|s| s.atom == Atom::Excited)
        .map(|s| rho.population(s))
        .sum();
    PhotonStats {
        g2_zero: g2_from_distribution(&pop_by_n).ok(),
        mean_n,
        p_atom_e,
        pop_by_n,
    }
}

/// Steady-state photon statistics for a parameter point.
pub fn steady_state_stats(p: &SystemParams, space: HilbertSpace) -> Result<PhotonStats> {
    let rho = steady_state(&build_liouvillian(p, space))?;
    Ok(photon_stats(&rho))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationReport {
    pub converged: bool,
    pub n_max: usize,
    pub g2_low: f64,
    pub g2_high: f64,
    /// |g2_low − g2_high| / g2_high
    pub relative_change: f64,
    /// Population of the n = n_max level at the lower truncation.
    pub top_population: f64,
}

/// Compares g²(0) at `n_max` and `n_max + 2`.
pub fn truncation_converged(p: &SystemParams, n_max: usize, tol: f64) -> Result<TruncationReport> {
    if n_max < 3 {
        return Err(Error::TruncationTooSmall(n_max));
    }
    let low_space = HilbertSpace::new(n_max)?;
    let low = steady_state(&build_liouvillian(p, low_space))?;
    let high = steady_state(&build_liouvillian(p, HilbertSpace::new(n_max + 2)?))?;
    let g2_low = g2_zero(&low)?;
    let g2_high = g2_zero(&high)?;
    let relative_change = (g2_low - g2_high).abs() / g2_high;
    let top_population = photon_distribution(&low)[n_max];
    Ok(TruncationReport {
        converged: relative_change <= tol && top_population < TOP_LEVEL_LIMIT,
        n_max,
        g2_low,
        g2_high,
        relative_change,
        top_population,
    })
}
