//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A vector whose norm is too far from 1 to renormalize safely.
    #[error("vector norm {norm} is outside the unit tolerance {tol}")]
    NotUnit { norm: f64, tol: f64 },

    /// A direction with no usable orientation.
    #[error("cannot normalize a (near-)zero vector, norm {norm:.3e}")]
    ZeroVector { norm: f64 },

    /// A scalar parameter outside its documented domain.
    #[error("parameter `{name}` = {value} outside [{lo}, {hi}]")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// Mismatched collection lengths (settings vs. signs vs. directions).
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// Fewer than two measurement settings.
    #[error("need at least 2 settings, got {n}")]
    TooFewSettings { n: usize },

    /// Sign enumeration would exceed the exact-computation cap.
    #[error("enumeration too large: n = {n} exceeds the exact cap of {max} settings")]
    EnumerationTooLarge { n: usize, max: usize },

    /// Setting count unsupported by a closed-form or pinned-constant routine.
    #[error("n = {n} not supported here (supported: {supported})")]
    UnsupportedN { n: usize, supported: &'static str },

    /// A sign entry other than +1 or -1.
    #[error("sign entries must be +1 or -1, got {got} at index {index}")]
    BadSign { got: i8, index: usize },

    /// Matrix fails the Hermiticity tolerance.
    #[error("matrix is not Hermitian: max |M - M^dag| entry = {dev:.3e}")]
    NotHermitian { dev: f64 },

    /// Density matrix trace differs from 1.
    #[error("density matrix trace = {trace:.17} is not 1 within tolerance")]
    BadTrace { trace: f64 },

    /// Density matrix has a negative eigenvalue beyond the floor.
    #[error("density matrix not positive semidefinite: min eigenvalue {min_eig:.3e}")]
    NotPositive { min_eig: f64 },

    /// Bloch and dense representations disagree.
    #[error("Bloch and dense forms disagree: max deviation {dev:.3e}")]
    Inconsistent { dev: f64 },

    /// An oracle needs the dense form but the state carries none.
    #[error("state has no dense matrix form; construct it via a family constructor or from a density matrix")]
    MissingDense,

    /// Quantum value is exactly zero, so no visibility exists.
    #[error("degenerate instance: quantum value is 0, visibility undefined")]
    Degenerate,

    /// Threshold search requires a violation at theta = pi/4.
    #[error("no violation at theta = pi/4 (V = {v_mid}); threshold angles undefined")]
    NoViolation { v_mid: f64 },

    /// Crossover search requires the chained curve to dip below the linear one.
    #[error("chained visibility never drops below the linear closed form (difference at pi/4 = {gap})")]
    NoCrossing { gap: f64 },

    /// A family-specific operation fed the other family.
    #[error("operation requires the {expected} family")]
    WrongFamily { expected: &'static str },

    /// Scan grid not strictly increasing inside [0, pi/2].
    #[error("scan grid must be strictly increasing within [0, pi/2]: {reason}")]
    BadGrid { reason: String },

    /// Too few samples or grid points for an oracle.
    #[error("`{name}` = {got} is below the minimum {min}")]
    TooFew {
        name: &'static str,
        got: usize,
        min: usize,
    },

    /// Preset name that does not resolve to a pinned direction set.
    #[error("unknown preset `{name}`; see `presets` for the supported names")]
    UnknownPreset { name: String },

    /// Malformed direction-set JSON.
    #[error("direction-set JSON: {0}")]
    Json(#[from] serde_json::Error),
}
