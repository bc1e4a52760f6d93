//! Quantum-information toolkit for small multi-qubit/qudit density matrices.
//!
//! The crate computes entanglement, discord-type correlation, coherence, and
//! quantum-Fisher-information measures, and simulates their decay under Kraus
//! channels and Lindblad dynamics. Every closed form ships together with an
//! independent numeric route so results can be cross-checked (see [`verify`]).
//!
//! Layout:
//! - [`matcore`]: dense complex linear algebra (Hermitian eigensolver, spectral
//!   functions, Kronecker products, partial trace/transpose, trace norm).
//! - [`states`]: state construction, validation, Bloch/Fano representations,
//!   Schmidt decomposition, purification, su(d) generators.
//! - [`entropy`]: Shannon/von Neumann/linear/Rényi entropies.
//! - [`entanglement`]: concurrence, EoF, negativity, tangle, PPT.
//! - [`discord`]: entropic, geometric, trace-distance, and linear-entropy
//!   discord plus Koashi-Winter and conservation-law checkers.
//! - [`uncertainty`]: skew information, local quantum uncertainty, local
//!   quantum Fisher information.
//! - [`coherence`]: basis-dependent coherence quantifiers.
//! - [`metrology`]: SLD, QFI(M) by several routes, classical Fisher
//!   information, Cramér-Rao bounds.
//! - [`dynamics`]: Kraus channels, Lindblad RK4 integration, measure sweeps.

pub mod matcore;
pub mod states;
pub mod entropy;
pub mod entanglement;
pub mod discord;
pub mod uncertainty;
pub mod coherence;
pub mod metrology;
pub mod dynamics;
pub mod measures;
pub mod verify;

pub use matcore::{ComplexMatrix, EigenDecomposition, C64};
pub use states::{DensityMatrix, PureState};

/// Shared numerical tolerances. Tests and the CLI read the same values.
pub mod tol {
    /// Maximum allowed Hermiticity defect, relative to the matrix scale.
    pub const HERMITICITY: f64 = 1e-10;
    /// Eigenvalue floor below which a state is rejected as non-PSD.
    pub const PSD_FLOOR: f64 = -1e-10;
    /// Maximum allowed |Tr(rho) - 1|.
    pub const TRACE: f64 = 1e-10;
    /// Numerical-rank threshold for purification and rank tests.
    pub const RANK: f64 = 1e-12;
    /// Spectral cutoff for pseudo-inverses and SLD kernel blocks.
    pub const SPECTRAL_CUTOFF: f64 = 1e-12;

    /// Validation tolerances as one record, so callers can relax them
    /// coherently (the Lindblad integrator does).
    #[derive(Debug, Clone, Copy)]
    pub struct Tolerances {
        pub hermiticity: f64,
        pub psd_floor: f64,
        pub trace: f64,
    }

    impl Default for Tolerances {
        fn default() -> Self {
            Tolerances { hermiticity: HERMITICITY, psd_floor: PSD_FLOOR, trace: TRACE }
        }
    }

    impl Tolerances {
        /// Looser bounds for states produced by the fixed-step integrator.
        pub fn integrator() -> Self {
            Tolerances { hermiticity: 1e-8, psd_floor: -1e-7, trace: 1e-6 }
        }
    }
}

/// Crate-wide error type. `code()` yields the stable machine-readable name
/// the CLI prints as `error_code=<name>`.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NonHermitian { defect: f64 },
    #[error("eigenvalue {value:.6e} outside the domain of the requested matrix function")]
    DomainError { value: f64 },
    #[error("subsystem index {index} invalid for {count} subsystems")]
    BadSubsystem { index: usize, count: usize },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("state rank {rank} too high for the rank-2 route")]
    RankTooHigh { rank: usize },
    #[error("purification block system is singular (condition estimate {cond:.3e})")]
    SingularPurification { cond: f64 },
    #[error("Fano tensor of the purification is not invertible (condition estimate {cond:.3e})")]
    SingularR { cond: f64 },
    #[error("both correlation quantifiers vanish; precision bounds undefined")]
    ZeroCorrelation,
    #[error("{measure} is unavailable for the {cut} cut")]
    UnsupportedCut { measure: String, cut: String },
    #[error("finite-difference step too large (Richardson gap {gap:.3e})")]
    StepTooLarge { gap: f64 },
    #[error("invalid POVM: {0}")]
    InvalidPOVM(String),
    #[error("Fisher information must be positive, got {0:.6e}")]
    NonpositiveFisher(f64),
    #[error("Bloch vector norm {norm:.6} lies outside the unit ball")]
    BlochOutOfBall { norm: f64 },
    #[error("observable spectrum is degenerate (gap {gap:.3e})")]
    DegenerateObservable { gap: f64 },
    #[error("operator is not unitary (defect {defect:.3e})")]
    NonUnitary { defect: f64 },
    #[error("integrator unstable: trace drift {drift:.3e}; reduce dt")]
    StepUnstable { drift: f64 },
    #[error("unknown measure '{0}'")]
    UnknownMeasure(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonHermitian { .. } => "NonHermitian",
            Error::DomainError { .. } => "DomainError",
            Error::BadSubsystem { .. } => "BadSubsystem",
            Error::DimMismatch(_) => "DimMismatch",
            Error::InvalidParams(_) => "InvalidParams",
            Error::InvalidState(_) => "InvalidState",
            Error::RankTooHigh { .. } => "RankTooHigh",
            Error::SingularPurification { .. } => "SingularPurification",
            Error::SingularR { .. } => "SingularR",
            Error::ZeroCorrelation => "ZeroCorrelation",
            Error::UnsupportedCut { .. } => "UnsupportedCut",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::InvalidPOVM(_) => "InvalidPOVM",
            Error::NonpositiveFisher(_) => "NonpositiveFisher",
            Error::BlochOutOfBall { .. } => "BlochOutOfBall",
            Error::DegenerateObservable { .. } => "DegenerateObservable",
            Error::NonUnitary { .. } => "NonUnitary",
            Error::StepUnstable { .. } => "StepUnstable",
            Error::UnknownMeasure(_) => "UnknownMeasure",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
