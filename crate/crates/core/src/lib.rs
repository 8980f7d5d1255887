//! Surface-code logical error rate simulation under heterogeneous and
//! defective qubit noise.
//!
//! The pipeline: build a rotated surface-code [`lattice`], assign per-qubit
//! physical error rates ([`noise`]), compile a noisy Z-memory stabilizer
//! [`circuit`], Monte Carlo [`sampler`] it with Pauli frames, extract a
//! detector error model and matching graph ([`dem`]), decode with
//! minimum-weight perfect matching ([`matcher`]), and sweep noise grids to
//! locate Boundaries of Acceptable Defectiveness ([`experiment`]). [`plot`]
//! renders heatmaps and performance curves as SVG.

pub mod circuit;
pub mod dem;
pub mod error;
pub mod experiment;
pub mod lattice;
pub mod matcher;
pub mod noise;
pub mod plot;
pub mod sampler;
pub mod text;

pub use circuit::{build_memory_circuit, Circuit, FaultLocation, Instruction};
pub use dem::{build_matching_graph, extract_dem, DetectorErrorModel, MatchingGraph};
pub use error::{Error, Result};
pub use lattice::{build_lattice, Coord, Lattice, LocationSpec, QubitKind};
pub use matcher::{decode, decode_batch, Syndrome};
pub use noise::{
    apply_defects, heterogeneous_profile, homogeneous_profile, two_qubit_rate, NoiseProfile,
};
pub use sampler::{propagate_fault, propagate_faults, sample, DetectionSample};
