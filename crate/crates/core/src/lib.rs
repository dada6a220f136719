//! Connectivity of sensor networks secured by heterogeneous key predistribution.
//!
//! A network of `n` sensors is modeled as the intersection of two random
//! graphs: a key graph, where two nodes are adjacent when their randomly
//! predistributed key rings share a key, and a channel graph, which is either
//! an Erdős–Rényi graph (on/off channels with probability `alpha`) or a random
//! geometric graph on the unit torus (disk channels with radius `rho`).
//!
//! The crate is organized as:
//!
//! * [`theory`] — closed-form edge probabilities, derived means, connectivity
//!   thresholds, scaling diagnostics, and analytic bound checks;
//! * [`sampler`] — seeded, reproducible generation of class assignments, key
//!   rings, and the three graph families;
//! * [`graph`] — the bitset graph representation plus isolated-node,
//!   connectivity, and component analysis;
//! * [`montecarlo`] — the parallel trial engine, parameter sweeps, and the
//!   edge-occupation (percolation) experiment.

#![forbid(unsafe_code)]

pub mod error;
pub mod graph;
pub mod montecarlo;
pub mod sampler;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{ComponentSummary, Graph};
pub use montecarlo::{
    Estimate, ExperimentConfig, ModelEstimates, PercolationRow, PercolationTable, SweepCell,
    TrialObservation, TrialOutcome,
};
pub use sampler::{derive_seed, KeyRingAssignment, Positions, RandomStream, StreamSequence};
pub use theory::{
    BoundReport, ChannelModel, CriticalK1, DerivedProbabilities, NetworkProfile, ProfileWarning,
    RingRule, ScalingReport,
};
