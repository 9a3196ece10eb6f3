//! Synthetic temporal hypergraph generation and analysis.
//!
//! The crate is organized around a small temporal hypergraph data model
//! ([`hypergraph`]) and four layers built on top of it:
//!
//! * [`patterns`] — the eight structural and dynamic pattern statistics
//!   (degree, edge size, intersection, spectrum, group degree, locality,
//!   inter-event gaps, interaction density) plus log-binned power-law
//!   fitting and the fit-gamma comparison score.
//! * [`microdynamics`] — a rank-based preferential collaboration model
//!   with a quality filter; predicts Zipf-Mandelbrot degree profiles and
//!   simulates edge streams that are checked against that prediction.
//! * [`agents`] — the four generation agents (generator, reviewer,
//!   remover, optimizer): prompt construction, lenient response parsing,
//!   a deterministic oracle backend, and an OpenAI-compatible chat client.
//! * [`engine`] — the two-phase pipeline: iterative local construction
//!   followed by multi-agent evolution steps, over either backend.
//!
//! Everything is deterministic under the oracle backend: a run is a pure
//! function of (profiles, config, seed).

pub mod agents;
pub mod engine;
pub mod hypergraph;
pub mod microdynamics;
pub mod patterns;

pub use agents::{AgentBackend, AgentDecision, AgentRequest, AgentRole, CandidateHyperedge,
    DirectiveKind, OracleBackend, RemoteBackend, ReviewDecision, StrategyDirective};
pub use engine::{
    compute_network_statistics, construct, evolve, evolve_step, oracle_backend, BackendKind,
    ConstructOutcome, EngineError, EvolutionOutcome, EvolutionState, GenerationConfig,
    NetworkStatistics,
};
pub use hypergraph::{EntityProfile, Hyperedge, NodeId, TemporalHypergraph};
pub use microdynamics::{MicroParams, RankedPopulation, SimulationTrace, SizeSampler};
pub use patterns::{DistributionHistogram, DoiSeries, PatternReport, PowerLawFit};
