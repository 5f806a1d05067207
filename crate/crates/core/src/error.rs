//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by state construction, validation, and estimation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("mode count must be at least 1")]
    ZeroModes,

    #[error("matrix is {rows}x{cols}, expected square of even dimension")]
    BadDimension { rows: usize, cols: usize },

    #[error("matrix dimension {dim} does not match {n} modes (expected {expected})")]
    DimensionMismatch { dim: usize, n: usize, expected: usize },

    #[error("matrix is not symmetric: max asymmetry {max_asym:.3e} exceeds {tol:.3e}")]
    NotSymmetric { max_asym: f64, tol: f64 },

    #[error("unphysical state: symplectic eigenvalue {value} below 1 - {tol:.3e}")]
    Unphysical { value: f64, tol: f64 },

    #[error("state is not pure: ||(J sigma)^2 + I||_F = {residual:.3e} exceeds {tol:.3e}")]
    NotPure { residual: f64, tol: f64 },

    #[error("mode subset must be non-empty")]
    EmptySubset,

    #[error("mode indices must be strictly increasing, got {previous} before {current}")]
    IndicesNotIncreasing { previous: usize, current: usize },

    #[error("mode index {index} out of range for {n} modes (indices are 1-based)")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("subset refers to {subset_n} ambient modes but the state has {n}")]
    AmbientMismatch { subset_n: usize, n: usize },

    #[error("the full mode set admits no bipartition")]
    FullSubset,

    #[error("ggm value {value} and lambda_max {lambda_max} do not satisfy value = 1 - lambda_max")]
    InconsistentGgm { value: f64, lambda_max: f64 },

    #[error("a single mode admits no bipartition")]
    SingleMode,

    #[error("matrix is not unitary: ||U^dag U - I||_F = {residual:.3e} exceeds {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("matrix is not orthogonal symplectic: orthogonality residual {ortho:.3e}, symplectic residual {symp:.3e}")]
    NotOrthoSymplectic { ortho: f64, symp: f64 },

    #[error("average energy per mode must be >= 1 (vacuum), got {0}")]
    EnergyBelowVacuum(f64),

    #[error("squeezing value must be positive, got {0}")]
    NonPositiveSqueezing(f64),

    #[error("squeezing spectrum has {len} entries for {n} modes")]
    SqueezingLengthMismatch { len: usize, n: usize },

    #[error("energy shell violated: (1/2n) sum(z + 1/z) = {actual} but nu_bar = {target} (residual {residual:.3e} exceeds {tol:.3e})")]
    OffShell { actual: f64, target: f64, residual: f64, tol: f64 },

    #[error("full-enumeration GGM is limited to {max} modes, got {n}; use the single-mode variant")]
    TooManyModes { n: usize, max: usize },

    #[error("ensemble needs at least one sample")]
    NoSamples,

    #[error("worker count must be at least 1")]
    NoWorkers,

    #[error("histogram bin width must be positive and finite, got {0}")]
    BadBinWidth(f64),

    #[error("epsilon grid must be non-empty with positive entries")]
    BadEpsilonGrid,

    #[error("reference value must lie in [0, 1), got {0}")]
    BadReference(f64),

    #[error("subset size {k} out of range: must be between 1 and floor(n/2) = {max}")]
    SubsetSizeOutOfRange { k: usize, max: usize },

    #[error("ensemble specs differ in {field}: {a} vs {b}")]
    SpecMismatch { field: &'static str, a: String, b: String },

    #[error("gamma policy must be \"uniform\" or a list of squeezing values, got {0:?}")]
    BadGammaPolicy(String),

    #[error("covariance file declares ordering {0:?}, only \"qqpp\" is supported")]
    UnsupportedOrdering(String),

    #[error("covariance file: sigma has {len} entries, expected {expected} for n = {n}")]
    BadPayloadLength { len: usize, expected: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
