use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Fock truncation n_max = {0} cannot hold a two-photon state (need n_max >= 2)")]
    TruncationTooSmall(usize),

    #[error("operator dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("cavity detuning is zero; the CPB optimum g^2/delta_a is undefined")]
    ZeroCavityDetuning,

    #[error("dressed branches are degenerate at n = {n}; branch label is ambiguous")]
    DegenerateBranch { n: usize },

    #[error("parameters are off the CPB manifold: |g^2 - delta_a*delta0| = {residual:e}")]
    OffCpbManifold { residual: f64 },

    #[error("one-photon amplitude vanishes; weak-drive g2 is undefined")]
    ZeroOnePhotonAmplitude,

    #[error("strong-coupling g2 formula is singular at these parameters")]
    SingularDenominator,

    #[error("steady state is not unique or the solve is singular ({0})")]
    SingularSteadyState(String),

    #[error("steady state has a negative eigenvalue {0:e}; truncation too small for this drive")]
    NonPositive(f64),

    #[error("time integration diverged: trace deviates from 1 by {0:e}")]
    IntegrationDiverged(f64),

    #[error("mean photon number {0:e} is below threshold; g2 is undefined")]
    NoExcitation(f64),

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// Short machine-readable tag, used as the per-cell `status` in sweep output.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::TruncationTooSmall(_) => "truncation_too_small",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidParams(_) => "invalid_params",
            Error::ZeroCavityDetuning => "zero_cavity_detuning",
            Error::DegenerateBranch { .. } => "degenerate_branch",
            Error::OffCpbManifold { .. } => "off_cpb_manifold",
            Error::ZeroOnePhotonAmplitude => "zero_one_photon_amplitude",
            Error::SingularDenominator => "singular_denominator",
            Error::SingularSteadyState(_) => "singular_steady_state",
            Error::NonPositive(_) => "non_positive",
            Error::IntegrationDiverged(_) => "integration_diverged",
            Error::NoExcitation(_) => "no_excitation",
            Error::InvalidSpec(_) => "invalid_spec",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
