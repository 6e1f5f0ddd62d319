//! Error types shared across the engine.

use thiserror::Error;

/// Unified error type for parsing, evaluation, geometry, and harness I/O.
///
/// The byte `offset` carried by the parse variants points into the original
/// expression source string.
#[derive(Error, Debug)]
pub enum Error {
    /// Malformed expression source.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// Identifier that is neither a coordinate variable nor a known function.
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    /// A function called with the wrong number of arguments.
    #[error("arity mismatch for `{name}` at byte {offset}: expected {expected} argument, found {found}")]
    ArityMismatch {
        name: String,
        offset: usize,
        expected: usize,
        found: usize,
    },

    /// Evaluation left the domain of a function (log of a non-positive value,
    /// square root of a negative value, division by zero, ...).  `subexpr`
    /// names the offending subexpression.
    #[error("domain error in `{subexpr}`: {message}")]
    Domain { subexpr: String, message: String },

    /// The jet order available is too low for a requested derivative.
    #[error("derivative order {requested} exceeds the available jet order {available}")]
    OrderInsufficient { requested: usize, available: usize },

    /// The metric failed to invert at a sample point.
    #[error("singular metric at ({0}, {1}, {2}): |det g| below threshold", point[0], point[1], point[2])]
    SingularMetric { point: [f64; 3] },

    /// Tensor slot bookkeeping violation (contracting two slots of the same
    /// variance, out-of-range slot index, ...).
    #[error("tensor slot error: {0}")]
    Slot(String),

    /// A structurally invalid manifold manifest.
    #[error("invalid manifest: {0}")]
    Manifest(String),

    /// A curvature preset that is undefined for the requested parameters.
    #[error("invalid preset: {0}")]
    Preset(String),

    /// A synthetic model point outside the construction's parameter range.
    #[error("invalid model point: {0}")]
    Model(String),

    /// Sampling could not place the requested number of points inside the
    /// domain after filtering excluded loci.
    #[error("sampling exhausted: placed {placed} of {requested} points before the attempt budget ran out")]
    SamplingExhausted { placed: usize, requested: usize },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// TOML deserialization failure.
    #[error("manifest TOML: {0}")]
    Toml(#[from] toml::de::Error),

    /// JSON (de)serialization failure.
    #[error("report JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
