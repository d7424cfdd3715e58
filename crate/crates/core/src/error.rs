//! Error type shared by all simulator modules.

use thiserror::Error;

/// Everything that can go wrong while building models or running them.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Basis index outside `1..=3`.
    #[error("basis index {0} out of range 1..=3")]
    IndexOutOfRange(usize),

    /// A matrix handed in as a state fails the physicality checks.
    #[error("density matrix is not physical: {0}")]
    NotPhysical(String),

    /// An operation requiring a Hermitian input received one with a larger
    /// asymmetry than allowed.
    #[error("input is not Hermitian: max |m_ij - conj(m_ji)| = {0:.3e}")]
    NotHermitian(f64),

    /// Mixing angles are undefined when both pulse amplitudes vanish.
    #[error("mixing angles undefined: both pulse amplitudes are zero")]
    AnglesUndefined,

    /// A parameter fails its domain constraint.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Closed-form dressed eigenvectors disagree with the Hamiltonian.
    #[error("dressed eigenvector residual {residual:.3e} exceeds tolerance at t = {t}")]
    EigenResidual { t: f64, residual: f64 },

    /// Two distinct Bohr frequencies fall below the separation threshold, so
    /// the spectral components cannot be attributed unambiguously.
    #[error("near-degenerate Bohr frequencies: |{0} - {1}| below threshold")]
    DegenerateBohrFrequencies(f64, f64),

    /// Numerical propagation broke an invariant or produced non-finite data.
    #[error("integration failure at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    /// A sweep point failed; carries the offending grid coordinates.
    #[error(
        "sweep point failed (sequence={sequence}, model={model}, gamma={gamma}, \
         alpha={alpha}, n={n_photons}): {reason}"
    )]
    SweepPointFailure {
        sequence: String,
        model: String,
        gamma: f64,
        alpha: f64,
        n_photons: f64,
        reason: String,
    },

    /// I/O failure while writing results.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
