//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by lattice construction, noise assignment, circuit
/// generation, decoding, and the sweep pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("code distance must be an odd integer >= 3, got {0}")]
    InvalidDistance(u32),

    #[error("{name} must lie in [0, 1], got {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("two-qubit scale factor must be >= 1, got {0}")]
    InvalidScale(f64),

    #[error("unknown location keyword {0:?}")]
    UnknownKeyword(String),

    #[error("coordinate {0} is not a qubit of the distance-{1} lattice")]
    CoordNotOnLattice(String, u32),

    #[error("coordinate {coord} is a {actual} qubit, expected {expected}")]
    ParityMismatch {
        coord: String,
        expected: &'static str,
        actual: &'static str,
    },

    #[error("duplicate defect location {0}")]
    DuplicateDefect(String),

    #[error("noise profile is for distance {profile_d}, lattice has distance {lattice_d}")]
    ProfileMismatch { profile_d: u32, lattice_d: u32 },

    #[error("round count must be >= 1, got {0}")]
    InvalidRounds(u32),

    #[error("circuit text parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid fault location: {0}")]
    InvalidFault(String),

    #[error("single fault flips the observable without firing any detector (instruction {instruction}, component {component}); the circuit is not fault-distance > 1")]
    UndetectableLogicalFault { instruction: usize, component: usize },

    #[error("fired detector {0} is not a node of the matching graph")]
    NotAGraphNode(u32),

    #[error("fired detector {0} has no path to any other fired detector or to the boundary")]
    DisconnectedDetector(u32),

    #[error("detector count mismatch: sample has {sample}, graph expects {graph}")]
    DimensionMismatch { sample: u32, graph: u32 },

    #[error("sweep config invalid: {0}")]
    InvalidConfig(String),

    #[error("BAD computation needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("scaling fit needs at least 3 usable (d, eps) points, got {0}")]
    TooFewFitPoints(usize),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed config: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
