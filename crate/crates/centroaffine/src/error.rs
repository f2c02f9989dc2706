//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Geometry failures carry
//! enough context (node index, offending value) to reproduce the problem.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Grid or run configuration is out of the supported range.
    #[error("configuration: {0}")]
    Config(String),

    /// A numerical routine produced non-finite values or failed to converge.
    #[error("numerics: {0}")]
    Numerics(String),

    /// Inputs outside an operation's domain (wrong grid, non-unit vector, ...).
    #[error("domain: {0}")]
    Domain(String),

    /// Support field fails positivity or the curvature matrix fails
    /// positive-definiteness.
    #[error("invalid body: min support {min_h:.3e}, min curvature eigenvalue {min_eig:.3e} (first failing node {failing_node:?})")]
    InvalidBody {
        min_h: f64,
        min_eig: f64,
        failing_node: Option<usize>,
    },

    /// A resampled polar or linear image no longer validates as a body.
    #[error("polar/resampled body degenerates: {0}")]
    PolarDegenerate(String),

    /// Matrix passed to `linear_image` is not volume-preserving.
    #[error("determinant {0} differs from 1 beyond tolerance")]
    DetNotOne(f64),

    /// Affine index outside the admissible set (p = 0, p = -n, ...).
    #[error("bad index: {0}")]
    BadIndex(String),

    /// An explicit Euler step left the class of valid bodies.
    #[error("convexity lost during flow step ending at t = {t}")]
    ConvexityLost { t: f64 },

    /// `check_containment` was handed a pair that is not nested at t = 0.
    #[error("inner body not contained initially: node {node}, gap {gap:.3e}")]
    InitialNotContained { node: usize, gap: f64 },

    /// Requested cap volume is not in (0, Vol/2).
    #[error("cap volume {delta:.6e} outside (0, {half_vol:.6e})")]
    CapTooLarge { delta: f64, half_vol: f64 },

    /// Cutting caps produced a support field that is no longer convex.
    #[error("cut produces a non-convex support field: {0}")]
    NonConvexCut(String),

    /// Rejection sampling exhausted its attempt budget.
    #[error("generation failed after {attempts} attempts: {what}")]
    GenerationFailed { attempts: usize, what: String },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
