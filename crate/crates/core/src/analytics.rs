//! Closed-form weak-drive photon statistics.
//!
//! In the weak-drive limit the steady state is well described by a wavefunction
//! truncated at two excitations,
//!
//!   |Ψ⟩ = C0g|0,g⟩ + C1g|1,g⟩ + C0e|0,e⟩ + C2g|2,g⟩ + C1e|1,e⟩,
//!
//! evolving under the non-Hermitian Hamiltonian H − iγ/2 σ₊σ₋ − iκ/2 a†a.
//! Setting the time derivatives to zero gives four linear equations for the
//! amplitudes with C0g fixed to 1, and g²(0) ≈ 2|C2g|²/|C1g|⁴.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::SystemParams;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Relative slack used when deciding that a discriminant is exactly zero.
const ROOT_TOL: f64 = 1e-12;

/// Stationary amplitudes of the two-excitation wavefunction, relative to C0g = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakDriveAmplitudes {
    pub c0g: Complex64,
    pub c1g: Complex64,
    pub c0e: Complex64,
    pub c2g: Complex64,
    pub c1e: Complex64,
    /// Δ0′ = Δ0 − iγ/2
    pub dprime0: Complex64,
    /// Δa′ = Δa − iκ/2
    pub dprime_a: Complex64,
}

pub fn weak_drive_amplitudes(p: &SystemParams) -> WeakDriveAmplitudes {
    let d0 = Complex64::new(p.delta0, -p.gamma / 2.0);
    let da = Complex64::new(p.delta_a, -p.kappa / 2.0);
    let g2 = Complex64::new(p.g * p.g, 0.0);
    let eps = p.epsilon;

    let c1g = eps * d0 / (g2 - da * d0);
    let c2g = eps * eps * ((da + d0) * d0 + g2) / (SQRT2 * (da * d0 - g2) * ((da + d0) * da - g2));
    let c0e = -p.g * c1g / d0;
    let c1e = -(SQRT2 * p.g * c2g + eps * c0e) / (d0 + da);
    WeakDriveAmplitudes {
        c0g: Complex64::new(1.0, 0.0),
        c1g,
        c0e,
        c2g,
        c1e,
        dprime0: d0,
        dprime_a: da,
    }
}

impl WeakDriveAmplitudes {
    /// Left-hand sides of the four stationarity equations, in order:
    /// the |0,e⟩, |1,g⟩, |2,g⟩ and |1,e⟩ rows.
    pub fn residuals(&self, p: &SystemParams) -> [Complex64; 4] {
        let (g, eps) = (p.g, p.epsilon);
        let (d0, da) = (self.dprime0, self.dprime_a);
        [
            self.c1g * g + self.c0e * d0,
            self.c0g * eps + self.c0e * g + self.c1g * da,
            SQRT2 * eps * self.c1g + SQRT2 * g * self.c1e + 2.0 * da * self.c2g,
            SQRT2 * g * self.c2g + self.c1e * (d0 + da) + eps * self.c0e,
        ]
    }

    fn norm_sqr(&self) -> f64 {
        [self.c0g, self.c1g, self.c0e, self.c2g, self.c1e]
            .iter()
            .map(|c| c.norm_sqr())
            .sum()
    }

    /// ⟨a†a⟩ of the normalized truncated wavefunction.
    pub fn mean_photon_number(&self) -> f64 {
        (self.c1g.norm_sqr() + self.c1e.norm_sqr() + 2.0 * self.c2g.norm_sqr()) / self.norm_sqr()
    }
}

/// Weak-drive g²(0) = 2|C2g|²/|C1g|⁴; independent of ε.
pub fn analytic_g2(p: &SystemParams) -> Result<f64> {
    let amps = weak_drive_amplitudes(p);
    let c1_fourth = amps.c1g.norm_sqr().powi(2);
    if !(c1_fourth >= f64::MIN_POSITIVE) || !c1_fourth.is_finite() {
        return Err(Error::ZeroOnePhotonAmplitude);
    }
    Ok(2.0 * amps.c2g.norm_sqr() / c1_fourth)
}

/// 4(Δa+Δ0)Δ0 + 4g² − (γ+κ)γ − 2i[Δaγ + (κ+2γ)Δ0]; vanishes exactly where the
/// two paths into |2,g⟩ interfere destructively (C2g = 0).
pub fn ucpb_condition_residual(p: &SystemParams) -> Complex64 {
    let (d0, da, g, k, gm) = (p.delta0, p.delta_a, p.g, p.kappa, p.gamma);
    Complex64::new(
        4.0 * (da + d0) * d0 + 4.0 * g * g - (gm + k) * gm,
        -2.0 * (da * gm + (k + 2.0 * gm) * d0),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// Dressed-state resonance g² = ΔaΔ0.
    Cpb,
    /// Exact interference zero of C2g.
    UcpbExact,
    /// Strong-coupling interference minimum g² = −Δ0(Δa+Δ0).
    UcpbAsymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalPair {
    pub delta0: f64,
    pub delta_a: f64,
    pub kind: PairKind,
}

/// The CPB optimum for a given cavity detuning.
pub fn cpb_pair(g: f64, delta_a: f64) -> Result<OptimalPair> {
    Ok(OptimalPair {
        delta0: crate::model::cpb_optimal_delta0(g, delta_a)?,
        delta_a,
        kind: PairKind::Cpb,
    })
}

/// Detuning pairs where both parts of [`ucpb_condition_residual`] vanish:
/// Δa = −(κ/γ + 2)Δ0 with Δ0 = ±√(g²γ/(κ+γ) − γ²/4).
pub fn ucpb_optimal_pairs(g: f64, kappa: f64, gamma: f64) -> Vec<OptimalPair> {
    let disc = g * g * gamma / (kappa + gamma) - gamma * gamma / 4.0;
    let pair = |delta0: f64| OptimalPair {
        delta0,
        delta_a: -(kappa / gamma + 2.0) * delta0,
        kind: PairKind::UcpbExact,
    };
    if disc.abs() <= ROOT_TOL * gamma * gamma {
        vec![pair(0.0)]
    } else if disc < 0.0 {
        Vec::new()
    } else {
        let root = disc.sqrt();
        vec![pair(root), pair(-root)]
    }
}

/// Smallest coupling that admits an exact interference zero: √((κ+γ)γ)/2.
pub fn ucpb_min_coupling(kappa: f64, gamma: f64) -> f64 {
    ((kappa + gamma) * gamma).sqrt() / 2.0
}

/// Strong-coupling reduction of the weak-drive g²(0), evaluated as written.
pub fn strong_coupling_g2(p: &SystemParams) -> Result<f64> {
    let (d0, da, g2, k, gm) = (p.delta0, p.delta_a, p.g * p.g, p.kappa, p.gamma);
    let tail = da * da + d0 * da - g2;
    if d0 == 0.0 || tail == 0.0 {
        return Err(Error::SingularDenominator);
    }
    let lead = (g2 - da * d0).powi(2) / (4.0 * d0.powi(4) * tail * tail);
    let re = g2 + da * d0 + d0 * d0;
    let im = da * gm + (k + 2.0 * gm) * d0;
    Ok(lead * (4.0 * re * re + im * im))
}

/// Atomic detunings of the strong-coupling interference minima for a given
/// cavity detuning, from g² = −Δ0(Δa + Δ0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum InterferenceMinima {
    /// |Δa| > 2g: two minima.
    Pair([f64; 2]),
    /// |Δa| = 2g: a double root. The true numerical minimum sits nearby but
    /// not exactly here, since κ and γ are dropped in the derivation.
    Boundary(f64),
    /// |Δa| < 2g: no antibunching from interference.
    None,
}

impl InterferenceMinima {
    pub fn detunings(&self) -> Vec<f64> {
        match *self {
            InterferenceMinima::Pair(pair) => pair.to_vec(),
            InterferenceMinima::Boundary(x) => vec![x],
            InterferenceMinima::None => Vec::new(),
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, InterferenceMinima::Boundary(_))
    }

    pub fn pairs(&self, delta_a: f64) -> Vec<OptimalPair> {
        self.detunings()
            .into_iter()
            .map(|delta0| OptimalPair {
                delta0,
                delta_a,
                kind: PairKind::UcpbAsymptotic,
            })
            .collect()
    }
}

pub fn interference_minimum_delta0(g: f64, delta_a: f64) -> InterferenceMinima {
    let edge = delta_a.abs() - 2.0 * g;
    if edge.abs() <= ROOT_TOL * (2.0 * g).max(1.0) {
        InterferenceMinima::Boundary(-delta_a / 2.0)
    } else if edge < 0.0 {
        InterferenceMinima::None
    } else {
        let root = (delta_a * delta_a - 4.0 * g * g).sqrt();
        InterferenceMinima::Pair([(-delta_a + root) / 2.0, (-delta_a - root) / 2.0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{Matrix4, Vector4};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(delta0: f64, delta_a: f64, g: f64) -> SystemParams {
        SystemParams::with_detunings(delta0, delta_a, g)
    }

    /// Independent route: solve the four stationarity equations as a dense system.
    fn solve_linear_system(p: &SystemParams) -> Vector4<Complex64> {
        let d0 = Complex64::new(p.delta0, -p.gamma / 2.0);
        let da = Complex64::new(p.delta_a, -p.kappa / 2.0);
        let c = |x: f64| Complex64::new(x, 0.0);
        let (g, eps) = (p.g, p.epsilon);
        let zero = c(0.0);
        // unknowns: c1g, c0e, c2g, c1e
        let m = Matrix4::new(
            c(g),
            d0,
            zero,
            zero,
            da,
            c(g),
            zero,
            zero,
            c(SQRT2 * eps),
            zero,
            2.0 * da,
            c(SQRT2 * g),
            zero,
            c(eps),
            c(SQRT2 * g),
            d0 + da,
        );
        let rhs = Vector4::new(zero, c(-eps), zero, zero);
        m.lu().solve(&rhs).unwrap()
    }

    fn random(rng: &mut impl Rng) -> SystemParams {
        SystemParams {
            delta0: rng.gen_range(-30.0..30.0),
            delta_a: rng.gen_range(-30.0..30.0),
            g: rng.gen_range(0.0..20.0),
            epsilon: rng.gen_range(1e-4..0.1),
            kappa: rng.gen_range(0.2..3.0),
            gamma: 1.0,
        }
    }

    #[test]
    fn closed_forms_match_linear_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = random(&mut rng);
            let amps = weak_drive_amplitudes(&p);
            let oracle = solve_linear_system(&p);
            let got = [amps.c1g, amps.c0e, amps.c2g, amps.c1e];
            for (x, y) in got.iter().zip(oracle.iter()) {
                assert!((x - y).norm() <= 1e-10 * y.norm().max(p.epsilon * p.epsilon * 1e-6));
            }
            for r in amps.residuals(&p) {
                assert!(r.norm() < 1e-10, "residual {r}");
            }
            assert_eq!(amps.c0g, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn empty_cavity_is_coherent() {
        for (d0, da) in [(0.0, 0.0), (3.0, -2.0), (-17.0, 25.0)] {
            assert_relative_eq!(
                analytic_g2(&params(d0, da, 0.0)).unwrap(),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn interference_zero_kills_two_photon_amplitude() {
        for g in [0.8, 1.0, 2.0, 5.0] {
            for pair in ucpb_optimal_pairs(g, 1.0, 1.0) {
                let p = params(pair.delta0, pair.delta_a, g);
                let amps = weak_drive_amplitudes(&p);
                assert!(amps.c2g.norm() < 1e-12 * p.epsilon * p.epsilon);
                assert!(analytic_g2(&p).unwrap() < 1e-20);
            }
        }
    }

    #[test]
    fn red_side_reference_point() {
        let g2 = analytic_g2(&params(-9.3, 20.0, 10.0)).unwrap();
        assert!((g2 - 0.012).abs() <= 0.3 * 0.012, "{g2}");
    }

    #[test]
    fn zero_drive_has_no_one_photon_amplitude() {
        let p = SystemParams {
            epsilon: 0.0,
            ..params(1.0, 1.0, 1.0)
        };
        assert_eq!(analytic_g2(&p), Err(Error::ZeroOnePhotonAmplitude));
    }

    #[test]
    fn residual_examples() {
        let g = (2.0f64).sqrt() / 2.0;
        assert!(ucpb_condition_residual(&params(0.0, 0.0, g)).norm() < 1e-15);
        assert!(ucpb_condition_residual(&params(0.5, -1.5, 1.0)).norm() < 1e-15);
        let r = ucpb_condition_residual(&params(1.0, 1.0, 1.0));
        assert_relative_eq!(r.im, -8.0);
        assert_relative_eq!(r.re, 8.0 + 4.0 - 2.0);
    }

    #[test]
    fn residual_is_four_times_c2g_numerator() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let p = random(&mut rng);
            let d0 = Complex64::new(p.delta0, -p.gamma / 2.0);
            let da = Complex64::new(p.delta_a, -p.kappa / 2.0);
            let numerator = (da + d0) * d0 + p.g * p.g;
            let r = ucpb_condition_residual(&p);
            assert!((r - 4.0 * numerator).norm() < 1e-9 * r.norm().max(1.0));
        }
    }

    #[test]
    fn optimal_pair_examples() {
        let single = ucpb_optimal_pairs(0.5f64.sqrt(), 1.0, 1.0);
        assert_eq!(single.len(), 1);
        assert_eq!((single[0].delta0, single[0].delta_a), (0.0, 0.0));

        let twin = ucpb_optimal_pairs(1.0, 1.0, 1.0);
        assert_eq!(twin.len(), 2);
        assert_relative_eq!(twin[0].delta0, 0.5, epsilon = 1e-15);
        assert_relative_eq!(twin[0].delta_a, -1.5, epsilon = 1e-15);
        assert_relative_eq!(twin[1].delta0, -0.5, epsilon = 1e-15);
        assert_relative_eq!(twin[1].delta_a, 1.5, epsilon = 1e-15);

        assert!(ucpb_optimal_pairs(0.5, 1.0, 1.0).is_empty());
        assert_relative_eq!(ucpb_min_coupling(1.0, 1.0), 0.5f64.sqrt());
    }

    #[test]
    fn optimal_pairs_zero_the_residual() {
        for g in [0.7072, 0.8, 1.0, 1.3, 2.0, 5.0, 10.0, 20.0] {
            for kappa in [0.5, 1.0, 2.0] {
                for pair in ucpb_optimal_pairs(g, kappa, 1.0) {
                    let p = SystemParams {
                        kappa,
                        ..params(pair.delta0, pair.delta_a, g)
                    };
                    let r = ucpb_condition_residual(&p);
                    assert!(
                        r.re.abs() < 1e-12 * g * g.max(1.0) && r.im.abs() < 1e-12,
                        "{r}"
                    );
                }
            }
        }
    }

    #[test]
    fn strong_coupling_formula() {
        // On the interference relation the value is of order γ²/g².
        let g = 10.0;
        let d0 = interference_minimum_delta0(g, 30.0).detunings()[0];
        let v = strong_coupling_g2(&params(d0, 30.0, g)).unwrap();
        assert!(v < 10.0 / (g * g), "{v}");
        assert!(strong_coupling_g2(&params(-3.82, 30.0, 10.0)).unwrap() < 0.05);

        assert_eq!(strong_coupling_g2(&params(5.0, 20.0, 10.0)).unwrap(), 0.0);
        assert_eq!(
            strong_coupling_g2(&params(0.0, 20.0, 10.0)),
            Err(Error::SingularDenominator)
        );
        // Δa² + Δ0Δa − g² = 64 − 48 − 16 = 0
        assert_eq!(
            strong_coupling_g2(&params(-6.0, 8.0, 4.0)),
            Err(Error::SingularDenominator)
        );
    }

    #[test]
    fn interference_minima_examples() {
        let m = interference_minimum_delta0(10.0, 30.0).detunings();
        assert_relative_eq!(m[0], -3.819660112501051, epsilon = 1e-12);
        assert_relative_eq!(m[1], -26.18033988749895, epsilon = 1e-12);

        let b = interference_minimum_delta0(10.0, 20.0);
        assert!(b.is_boundary());
        assert_eq!(b.detunings(), vec![-10.0]);

        assert_eq!(
            interference_minimum_delta0(10.0, 15.0),
            InterferenceMinima::None
        );
        assert!(interference_minimum_delta0(10.0, 15.0)
            .pairs(15.0)
            .is_empty());

        for d0 in interference_minimum_delta0(4.0, -11.0).detunings() {
            assert_relative_eq!(-d0 * (-11.0 + d0), 16.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn weak_drive_mean_photon_number() {
        let amps = weak_drive_amplitudes(&params(0.0, 0.0, 0.0));
        // Empty resonant cavity: |C1g|² = (2ε/κ)².
        assert_relative_eq!(amps.mean_photon_number(), 4e-4, max_relative = 1e-3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn g2_has_origin_symmetry(
                d0 in -30.0..30.0f64, da in -30.0..30.0f64, g in 0.0..20.0f64, kappa in 0.2..3.0f64,
            ) {
                let p = SystemParams { kappa, ..params(d0, da, g) };
                let a = analytic_g2(&p).unwrap();
                let b = analytic_g2(&p.mirrored()).unwrap();
                prop_assert!((a - b).abs() <= 1e-10 * a.max(b).max(1e-300));
            }

            #[test]
            fn vanishing_coupling_restores_coherence(d0 in -30.0..30.0f64, da in -30.0..30.0f64) {
                let g2 = analytic_g2(&params(d0, da, 1e-8)).unwrap();
                prop_assert!((g2 - 1.0).abs() < 1e-6);
            }

            // The γ²/g² scaling holds for 1 ≤ |Δa|/g ≤ 2.5; far outside that band the
            // atom decouples and g² climbs back toward 1.
            #[test]
            fn cpb_manifold_is_antibunched(g in 10.0..40.0f64, ratio in 1.0..2.5f64, flip in any::<bool>()) {
                let da = if flip { -ratio * g } else { ratio * g };
                let d0 = g * g / da;
                let g2 = analytic_g2(&params(d0, da, g)).unwrap();
                prop_assert!(g2 < 10.0 / (g * g), "g2 = {}", g2);
            }
        }
    }
}
