//! Truncated Fock ⊗ two-level-atom Hilbert space and its elementary operators.
//!
//! Basis states |n, s⟩ are laid out photon-major with the atom index fastest:
//! flat index `2n + s`, where `s = 0` is the ground state |g⟩ and `s = 1`
//! the excited state |e⟩. Photon numbers run over `0..=n_max`.
//!
//! The cavity ladder is hard-truncated: `a†|n_max, s⟩ = 0`, so `a†a` stays
//! exactly diagonal on the truncated space.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest truncation that still represents two-photon states.
pub const MIN_N_MAX: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    n_max: usize,
    dim: usize,
}

impl HilbertSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < MIN_N_MAX {
            return Err(Error::TruncationTooSmall(n_max));
        }
        Ok(Self {
            n_max,
            dim: 2 * (n_max + 1),
        })
    }

    /// Largest retained photon number.
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> impl Iterator<Item = StateIndex> {
        let n_max = self.n_max;
        (0..=n_max).flat_map(|n| [Atom::Ground, Atom::Excited].map(|s| StateIndex::new(n, s)))
    }

    /// Unit vector for a basis state.
    pub fn basis_vector(&self, state: StateIndex) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim);
        v[state.flat()] = Complex64::new(1.0, 0.0);
        v
    }

    fn check(&self, other: &HilbertSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }
}

/// Free-function spelling of [`HilbertSpace::new`].
pub fn make_space(n_max: usize) -> Result<HilbertSpace> {
    HilbertSpace::new(n_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Ground = 0,
    Excited = 1,
}

/// A bare basis state |n, s⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateIndex {
    pub n: usize,
    pub atom: Atom,
}

impl StateIndex {
    pub fn new(n: usize, atom: Atom) -> Self {
        Self { n, atom }
    }

    pub fn ground(n: usize) -> Self {
        Self::new(n, Atom::Ground)
    }

    pub fn excited(n: usize) -> Self {
        Self::new(n, Atom::Excited)
    }

    pub fn flat(&self) -> usize {
        2 * self.n + self.atom as usize
    }

    pub fn from_flat(index: usize) -> Self {
        let atom = if index.is_multiple_of(2) {
            Atom::Ground
        } else {
            Atom::Excited
        };
        Self { n: index / 2, atom }
    }
}

/// Square complex matrix acting on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    entries: DMatrix<Complex64>,
}

impl Operator {
    pub fn from_matrix(space: HilbertSpace, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != space.dim() || entries.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                left: space.dim(),
                right: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self { space, entries })
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        Self {
            space,
            entries: DMatrix::zeros(space.dim(), space.dim()),
        }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        Self {
            space,
            entries: DMatrix::identity(space.dim(), space.dim()),
        }
    }

    /// Cavity annihilation operator `a`.
    pub fn annihilation(space: HilbertSpace) -> Self {
        let mut op = Self::zeros(space);
        for n in 1..=space.n_max() {
            for atom in [Atom::Ground, Atom::Excited] {
                let from = StateIndex::new(n, atom).flat();
                let to = StateIndex::new(n - 1, atom).flat();
                op.entries[(to, from)] = Complex64::new((n as f64).sqrt(), 0.0);
            }
        }
        op
    }

    /// Cavity creation operator `a†`, truncated at the top level.
    pub fn creation(space: HilbertSpace) -> Self {
        Self::annihilation(space).dagger()
    }

    /// Atomic lowering operator `σ₋ = |g⟩⟨e|`.
    pub fn sigma_minus(space: HilbertSpace) -> Self {
        let mut op = Self::zeros(space);
        for n in 0..=space.n_max() {
            op.entries[(StateIndex::ground(n).flat(), StateIndex::excited(n).flat())] =
                Complex64::new(1.0, 0.0);
        }
        op
    }

    pub fn sigma_plus(space: HilbertSpace) -> Self {
        Self::sigma_minus(space).dagger()
    }

    /// Photon number `a†a`, built directly as a diagonal.
    pub fn number(space: HilbertSpace) -> Self {
        Self::diagonal(space, |s| s.n as f64)
    }

    /// Excited-state projector `σ₊σ₋`.
    pub fn excited_projector(space: HilbertSpace) -> Self {
        Self::diagonal(space, |s| (s.atom == Atom::Excited) as u8 as f64)
    }

    fn diagonal(space: HilbertSpace, f: impl Fn(StateIndex) -> f64) -> Self {
        let mut op = Self::zeros(space);
        for s in space.states() {
            op.entries[(s.flat(), s.flat())] = Complex64::new(f(s), 0.0);
        }
        op
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    /// Matrix element ⟨row| O |col⟩.
    pub fn element(&self, row: StateIndex, col: StateIndex) -> Complex64 {
        self.entries[(row.flat(), col.flat())]
    }

    pub fn dagger(&self) -> Self {
        Self {
            space: self.space,
            entries: self.entries.adjoint(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            space: self.space,
            entries: &self.entries * c,
        }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn add(&self, other: &Operator) -> Result<Self> {
        self.space.check(&other.space)?;
        Ok(Self {
            space: self.space,
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Self> {
        self.space.check(&other.space)?;
        Ok(Self {
            space: self.space,
            entries: &self.entries - &other.entries,
        })
    }

    pub fn mul(&self, other: &Operator) -> Result<Self> {
        self.space.check(&other.space)?;
        Ok(Self {
            space: self.space,
            entries: &self.entries * &other.entries,
        })
    }

    pub fn commutator(&self, other: &Operator) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if v.len() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                left: self.space.dim(),
                right: v.len(),
            });
        }
        Ok(&self.entries * v)
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.space.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }
}
