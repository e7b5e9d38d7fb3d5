//! Driving-frame Hamiltonian and the dressed-state ladder.
//!
//! All rates and detunings are in units of the atomic decay rate γ. Energies
//! are reported in the frame rotating at the drive frequency, so a dressed
//! level resonant with the drive has zero energy.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Atom, HilbertSpace, Operator, StateIndex};

/// Drive amplitudes at or below this fraction of γ are "weak".
pub const WEAK_DRIVE_LIMIT: f64 = 0.1;

/// Physical parameters of the driven atom–cavity system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Atomic detuning Δ0 = ω0 − ωp.
    pub delta0: f64,
    /// Cavity detuning Δa = ωa − ωp.
    pub delta_a: f64,
    /// Atom–cavity coupling.
    pub g: f64,
    /// Drive amplitude ε.
    pub epsilon: f64,
    /// Cavity decay rate κ.
    pub kappa: f64,
    /// Atomic decay rate γ; 1 in the library's unit convention.
    pub gamma: f64,
}

impl Default for SystemParams {
    /// Resonant, uncoupled system with κ = γ = 1 and ε = 0.01.
    fn default() -> Self {
        Self {
            delta0: 0.0,
            delta_a: 0.0,
            g: 0.0,
            epsilon: 0.01,
            kappa: 1.0,
            gamma: 1.0,
        }
    }
}

impl SystemParams {
    pub fn new(
        delta0: f64,
        delta_a: f64,
        g: f64,
        epsilon: f64,
        kappa: f64,
        gamma: f64,
    ) -> Result<Self> {
        let p = Self {
            delta0,
            delta_a,
            g,
            epsilon,
            kappa,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    /// Default rates (κ = γ = 1, ε = 0.01) with the given detunings and coupling.
    pub fn with_detunings(delta0: f64, delta_a: f64, g: f64) -> Self {
        Self {
            delta0,
            delta_a,
            g,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.delta0,
            self.delta_a,
            self.g,
            self.epsilon,
            self.kappa,
            self.gamma,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if self.kappa <= 0.0 || self.gamma <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "decay rates must be positive (kappa = {}, gamma = {})",
                self.kappa, self.gamma
            )));
        }
        if self.g < 0.0 || self.epsilon < 0.0 {
            return Err(Error::InvalidParams(format!(
                "coupling and drive must be non-negative (g = {}, epsilon = {})",
                self.g, self.epsilon
            )));
        }
        Ok(())
    }

    /// True where the weak-drive closed forms are trusted.
    pub fn is_weak_drive(&self) -> bool {
        self.epsilon <= WEAK_DRIVE_LIMIT * self.gamma
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::Delta0 => self.delta0,
            Param::DeltaA => self.delta_a,
            Param::G => self.g,
            Param::Epsilon => self.epsilon,
            Param::Kappa => self.kappa,
        }
    }

    pub fn set(&mut self, param: Param, value: f64) {
        match param {
            Param::Delta0 => self.delta0 = value,
            Param::DeltaA => self.delta_a = value,
            Param::G => self.g = value,
            Param::Epsilon => self.epsilon = value,
            Param::Kappa => self.kappa = value,
        }
    }

    pub fn with(mut self, param: Param, value: f64) -> Self {
        self.set(param, value);
        self
    }

    /// The same system with both detunings negated.
    pub fn mirrored(&self) -> Self {
        Self {
            delta0: -self.delta0,
            delta_a: -self.delta_a,
            ..*self
        }
    }

    /// CPB residual g² − ΔaΔ0; zero on the nonlinearity-induced blockade manifold.
    pub fn cpb_residual(&self) -> f64 {
        self.g * self.g - self.delta_a * self.delta0
    }
}

/// A sweepable parameter. γ is the unit and is never swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Delta0,
    DeltaA,
    G,
    Epsilon,
    Kappa,
}

impl Param {
    pub const ALL: [Param; 5] = [
        Param::Delta0,
        Param::DeltaA,
        Param::G,
        Param::Epsilon,
        Param::Kappa,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Param::Delta0 => "delta0",
            Param::DeltaA => "delta_a",
            Param::G => "g",
            Param::Epsilon => "epsilon",
            Param::Kappa => "kappa",
        }
    }
}

impl std::str::FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta0" => Ok(Param::Delta0),
            "delta_a" | "delta-a" => Ok(Param::DeltaA),
            "g" => Ok(Param::G),
            "epsilon" => Ok(Param::Epsilon),
            "kappa" => Ok(Param::Kappa),
            other => Err(Error::InvalidSpec(format!("unknown parameter '{other}'"))),
        }
    }
}

impl std::fmt::Display for Param {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// H = Δ0 σ₊σ₋ + Δa a†a + g(σ₊a + σ₋a†) + ε(a + a†), assembled entrywise.
pub fn build_hamiltonian(p: &SystemParams, space: HilbertSpace) -> Operator {
    let mut h = Operator::zeros(space).into_entries();
    for s in space.states() {
        let i = s.flat();
        let excited = (s.atom == Atom::Excited) as u8 as f64;
        h[(i, i)] = Complex64::new(p.delta0 * excited + p.delta_a * s.n as f64, 0.0);
        if s.n >= 1 {
            let amp = (s.n as f64).sqrt();
            // ε a: |n, s⟩ → |n−1, s⟩
            let j = StateIndex::new(s.n - 1, s.atom).flat();
            h[(j, i)] = Complex64::new(p.epsilon * amp, 0.0);
            h[(i, j)] = Complex64::new(p.epsilon * amp, 0.0);
            // g σ₊a: |n, g⟩ → |n−1, e⟩
            if s.atom == Atom::Ground {
                let k = StateIndex::excited(s.n - 1).flat();
                h[(k, i)] = Complex64::new(p.g * amp, 0.0);
                h[(i, k)] = Complex64::new(p.g * amp, 0.0);
            }
        }
    }
    Operator::from_matrix(space, h).expect("dimension fixed by space")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Plus,
    Minus,
}

/// Eigenpair of the n-excitation block spanned by {|n,g⟩, |n−1,e⟩}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DressedLevel {
    pub n: usize,
    pub branch: Branch,
    /// Rotating-frame energy E_{n,±}.
    pub energy: f64,
    /// Amplitude on |n, g⟩.
    pub amp_g: f64,
    /// Amplitude on |n−1, e⟩.
    pub amp_e: f64,
}

/// The undriven Hamiltonian restricted to the n-excitation block.
pub fn excitation_block(p: &SystemParams, n: usize) -> Matrix2<f64> {
    let nf = n as f64;
    let off = nf.sqrt() * p.g;
    Matrix2::new(nf * p.delta_a, off, off, p.delta0 + (nf - 1.0) * p.delta_a)
}

/// Rotating-frame dressed energies `(E_{n,+}, E_{n,−})`; requires `n >= 1`.
pub fn dressed_energies(p: &SystemParams, n: usize) -> (f64, f64) {
    assert!(n >= 1, "dressed ladder starts at n = 1");
    let nf = n as f64;
    let detuning = p.delta_a - p.delta0;
    let root = (4.0 * nf * p.g * p.g + detuning * detuning).sqrt();
    let centre = (2.0 * nf - 1.0) * p.delta_a + p.delta0;
    ((centre + root) / 2.0, (centre - root) / 2.0)
}

pub fn dressed_state(p: &SystemParams, n: usize, branch: Branch) -> Result<DressedLevel> {
    let (plus, minus) = dressed_energies(p, n);
    if (plus - minus).abs() < 1e-12 {
        return Err(Error::DegenerateBranch { n });
    }
    let energy = match branch {
        Branch::Plus => plus,
        Branch::Minus => minus,
    };
    let nf = n as f64;
    let off = nf.sqrt() * p.g;
    let bare_g = nf * p.delta_a;
    let bare_e = p.delta0 + (nf - 1.0) * p.delta_a;

    // Two equivalent null vectors of (H − E); keep whichever is better conditioned.
    let from_first_row = (energy - bare_e, off);
    let from_second_row = (off, energy - bare_g);
    let norm1 = from_first_row.0.hypot(from_first_row.1);
    let norm2 = from_second_row.0.hypot(from_second_row.1);
    let (mut amp_g, mut amp_e, norm) = if norm1 >= norm2 {
        (from_first_row.0, from_first_row.1, norm1)
    } else {
        (from_second_row.0, from_second_row.1, norm2)
    };
    amp_g /= norm;
    amp_e /= norm;
    let flip = if amp_e != 0.0 {
        amp_e < 0.0
    } else {
        amp_g < 0.0
    };
    if flip {
        amp_g = -amp_g;
        amp_e = -amp_e;
    }
    Ok(DressedLevel {
        n,
        branch,
        energy,
        amp_g,
        amp_e,
    })
}

impl DressedLevel {
    /// ‖(H_block − E)v‖ for this level.
    pub fn residual(&self, p: &SystemParams) -> f64 {
        let block = excitation_block(p, self.n);
        let v = nalgebra::Vector2::new(self.amp_g, self.amp_e);
        (block * v - v * self.energy).norm()
    }
}

/// Atomic detuning that puts |1,±⟩ on resonance with the drive: Δ0 = g²/Δa.
pub fn cpb_optimal_delta0(g: f64, delta_a: f64) -> Result<f64> {
    if delta_a == 0.0 {
        return Err(Error::ZeroCavityDetuning);
    }
    Ok(g * g / delta_a)
}

/// Detuning of the |1,±⟩ → |2,±⟩ transition from the drive on the CPB manifold:
/// `[∓(3Δa + Δ0) − √(6ΔaΔ0 + Δa² + Δ0²)] / 2`.
///
/// For positive detunings the `Minus` branch is the driven one and the value
/// equals `E_{2,−} − E_{1,−}`. `tol` bounds the allowed `|g² − ΔaΔ0|`.
pub fn two_photon_detuning(p: &SystemParams, branch: Branch, tol: f64) -> Result<f64> {
    let residual = p.cpb_residual().abs();
    if residual > tol {
        return Err(Error::OffCpbManifold { residual });
    }
    let sign = match branch {
        Branch::Plus => -1.0,
        Branch::Minus => 1.0,
    };
    let (da, d0) = (p.delta_a, p.delta0);
    let radicand = (6.0 * da * d0 + da * da + d0 * d0).max(0.0);
    Ok((sign * (3.0 * da + d0) - radicand.sqrt()) / 2.0)
}
