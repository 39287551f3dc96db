use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum SikError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not symplectic: max |M^T J M - J| = {defect:.3e} exceeds {tol:.3e}")]
    NotSymplectic { defect: f64, tol: f64 },

    #[error("eigenvalue 1 is not in the spectrum: not a closed-characteristic monodromy")]
    NotAMonodromy,

    #[error("unsupported unit-circle structure: {0}")]
    UnsupportedStructure(String),

    #[error("floor/ceiling certification failed: {0}")]
    Certification(String),

    #[error("crossing at t = {t} could not be certified: {reason}")]
    NonCertifiableCrossing { t: f64, reason: String },

    #[error("splitting limit did not stabilize by eps = {eps_min:.3e} at omega = {omega}")]
    SplittingUnstable { omega: String, eps_min: f64 },

    #[error("seed inconsistent with decomposition: {0}")]
    SeedInconsistent(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("mean index condition violated: {0}")]
    MeanIndexGate(String),

    #[error("resonant specification: {0}")]
    Resonant(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("numeric oracle failure: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, SikError>;
