//! Two-phase generation pipeline over any agent backend.
//!
//! Construction grows a foundational hypergraph edge by edge: pick a
//! center (degree-preferential with probability P, uniform otherwise),
//! pick a size, ask the GENERATOR, validate, insert. Evolution then
//! refines it in rounds: the OPTIMIZER issues a directive, the REMOVER
//! prunes under a hard cap, and a batch of GENERATOR proposals passes
//! through the REVIEWER before merging. Under the oracle backend the
//! whole pipeline is a pure function of (profiles, config, seed).

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::agents::{
    AgentBackend, AgentDecision, AgentRequest, AgentRole, BackendError, CandidateHyperedge,
    GeneratorContext, OptimizerContext, OracleBackend, RemoverContext, ReviewerContext,
    StrategyDirective, Verdict,
};
use crate::agents::prompts::render_node_set;
use crate::hypergraph::{EntityProfile, Hyperedge, NodeId, TemporalHypergraph};
use crate::microdynamics::{MicroError, MicroParams, RankedPopulation, SizeSampler};
use crate::patterns::{
    degree_distribution, fit_power_law, intersecting_pair_counts, pattern_report,
    PatternReport, ReportConfig,
};

pub mod io;

pub use io::{
    load_config, load_profiles, parse_config, render_config, save_config, save_profiles,
    synthesize_profiles, ConfigError, ProfileIoError,
};

/// Candidates are compared against this many trailing edges when
/// checking for recent duplicates.
pub const DUPLICATE_WINDOW: usize = 100;
/// Recent incident edges shown to the GENERATOR, bounding prompt size.
pub const LOCAL_CONTEXT_EDGES: usize = 10;

/// Rng stream ids; the oracle backend keeps the default stream 0.
const STREAM_CONSTRUCT: u64 = 1;
const STREAM_EVOLVE: u64 = 2;
pub(crate) const STREAM_PROFILES: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Oracle,
    Remote,
}

impl std::fmt::Display for BackendKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BackendKind::Oracle => "oracle",
            BackendKind::Remote => "remote",
        })
    }
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "oracle" => Ok(BackendKind::Oracle),
            "remote" => Ok(BackendKind::Remote),
            other => Err(format!("unknown backend {other:?}, expected oracle or remote")),
        }
    }
}

/// All knobs of the two-phase pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationConfig {
    pub num_nodes: usize,
    /// Construction attempts M; the result holds at most M hyperedges.
    pub target_edges: usize,
    /// Probability of degree-preferential center selection.
    pub attach_probability: f64,
    /// Explicit size distribution; the default is a truncated power law.
    pub size_spec: Option<SizeSampler>,
    /// Focus entities the optimizer may suggest per directive (K).
    pub optimizer_suggestion_count: usize,
    pub evolution_steps: usize,
    pub generation_attempts_per_step: usize,
    pub min_size: usize,
    pub max_size: usize,
    pub seed: u64,
    pub domain_label: String,
    pub backend: BackendKind,
    /// Probability of drawing the center from the directive's focus set.
    pub focus_bias: f64,
    /// Exponent of the default size distribution.
    pub size_exponent: f64,
    /// Rank smoothing of the oracle's attachment weights.
    pub alpha: f64,
    /// Rank exponent of the oracle's attachment weights.
    pub exponent_gamma: f64,
    /// Quality filter; nodes at or below it are ineligible.
    pub q_threshold: f64,
    /// Per-step removal cap as a fraction of the current edge count.
    pub removal_fraction: f64,
    /// Interaction density above which the oracle optimizer switches
    /// from growth to diversity.
    pub diversity_target: f64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            num_nodes: 100,
            target_edges: 300,
            attach_probability: 0.85,
            size_spec: None,
            optimizer_suggestion_count: 5,
            evolution_steps: 10,
            generation_attempts_per_step: 20,
            min_size: 2,
            max_size: 10,
            seed: 42,
            domain_label: "collaboration".to_string(),
            backend: BackendKind::Oracle,
            focus_bias: 0.5,
            size_exponent: 2.5,
            alpha: 2.0,
            exponent_gamma: 0.3,
            q_threshold: 0.0,
            removal_fraction: 0.05,
            diversity_target: 0.2,
        }
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bail = |msg: String| Err(EngineError::Config(msg));
        if self.num_nodes == 0 {
            return bail("num_nodes must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.attach_probability) {
            return bail(format!(
                "attach_probability must lie in [0, 1], got {}",
                self.attach_probability
            ));
        }
        if self.min_size < 2 {
            return bail(format!("min_size must be at least 2, got {}", self.min_size));
        }
        if self.min_size > self.max_size {
            return bail(format!(
                "min_size {} exceeds max_size {}",
                self.min_size, self.max_size
            ));
        }
        if self.max_size > self.num_nodes {
            return bail(format!(
                "max_size {} exceeds num_nodes {}",
                self.max_size, self.num_nodes
            ));
        }
        if let Some(spec) = &self.size_spec {
            if let Err(e) = spec.validate() {
                return bail(format!("size_spec: {e}"));
            }
        }
        for (name, value) in [
            ("focus_bias", self.focus_bias),
            ("removal_fraction", self.removal_fraction),
            ("diversity_target", self.diversity_target),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return bail(format!("{name} must lie in [0, 1], got {value}"));
            }
        }
        if !(0.0..1.0).contains(&self.q_threshold) {
            return bail(format!(
                "q_threshold must lie in [0, 1), got {}",
                self.q_threshold
            ));
        }
        if !self.size_exponent.is_finite() {
            return bail("size_exponent must be finite".into());
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return bail(format!("alpha must be finite and non-negative, got {}", self.alpha));
        }
        if !(self.exponent_gamma.is_finite() && self.exponent_gamma > 0.0) {
            return bail(format!(
                "exponent_gamma must be finite and positive, got {}",
                self.exponent_gamma
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Population(#[from] MicroError),
    #[error("backend answered the {role} request with the wrong decision kind")]
    WrongDecision { role: AgentRole },
    #[error("evolution step {step} failed: {source}")]
    Step { step: usize, source: BackendError },
    #[error(transparent)]
    Backend(#[from] BackendError),
}

fn engine_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Oracle backend matching the config: node i holds rank i + 1 with the
/// default quality ramp.
pub fn oracle_backend(config: &GenerationConfig) -> Result<OracleBackend, EngineError> {
    config.validate()?;
    let pop = RankedPopulation::identity(config.num_nodes)?;
    let params = MicroParams::new(
        config.alpha,
        config.exponent_gamma,
        1.0,
        config.q_threshold,
        1.0,
        SizeSampler::Fixed(config.min_size.max(2)),
    )?;
    Ok(OracleBackend::new(pop, params, config.seed))
}

fn check_profiles(
    profiles: &[EntityProfile],
    config: &GenerationConfig,
) -> Result<(), EngineError> {
    if profiles.is_empty() {
        return Err(EngineError::Config("at least one entity profile is required".into()));
    }
    if profiles.len() != config.num_nodes {
        return Err(EngineError::Config(format!(
            "num_nodes {} does not match the {} provided profiles",
            config.num_nodes,
            profiles.len()
        )));
    }
    for (i, profile) in profiles.iter().enumerate() {
        if profile.id.0 != i as u64 {
            return Err(EngineError::Config(format!(
                "profile ids must be dense 0..{}, found id {} at position {i}",
                profiles.len(),
                profile.id.0
            )));
        }
    }
    Ok(())
}

/// Draws the next center. A non-empty focus set wins with probability
/// `focus_bias`; otherwise degree-preferential selection (weight
/// degree + 1, so isolated nodes stay reachable) applies with
/// probability P, uniform selection with 1 - P.
pub fn select_entity(
    h: &TemporalHypergraph,
    config: &GenerationConfig,
    focus: &[NodeId],
    rng: &mut ChaCha12Rng,
) -> NodeId {
    assert!(h.node_count() > 0, "selection needs at least one node");
    if !focus.is_empty() {
        let known: Vec<NodeId> =
            focus.iter().copied().filter(|&v| h.contains_node(v)).collect();
        if !known.is_empty() && rng.gen_bool(config.focus_bias) {
            return known[rng.gen_range(0..known.len())];
        }
    }
    if rng.gen_bool(config.attach_probability) {
        let total = (h.total_incidences() + h.node_count()) as u64;
        let mut x = rng.gen_range(0..total);
        for v in h.nodes() {
            let w = h.degree(v) as u64 + 1;
            if x < w {
                return v;
            }
            x -= w;
        }
        unreachable!("smoothed weights sum to the drawn range");
    }
    let index = rng.gen_range(0..h.node_count());
    h.nodes().nth(index).expect("index drawn below node count")
}

/// Samples the next hyperedge size: the explicit spec when configured
/// (clamped to bounds), otherwise a truncated discrete power law over
/// [min_size, max_size].
pub fn determine_hyperedge_size(config: &GenerationConfig, rng: &mut ChaCha12Rng) -> usize {
    if let Some(spec) = &config.size_spec {
        return spec.sample(rng).clamp(config.min_size, config.max_size);
    }
    if config.min_size == config.max_size {
        return config.min_size;
    }
    let weights: Vec<f64> = (config.min_size..=config.max_size)
        .map(|k| (k as f64).powf(-config.size_exponent))
        .collect();
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen_range(0.0..total);
    for (offset, &w) in weights.iter().enumerate() {
        if x < w {
            return config.min_size + offset;
        }
        x -= w;
    }
    config.max_size
}

/// Accepts a candidate iff all nodes exist, the size is within bounds,
/// and no edge in the trailing [`DUPLICATE_WINDOW`] has the same
/// member set. The error names the reason.
pub fn validate_candidate(
    cand: &CandidateHyperedge,
    h: &TemporalHypergraph,
    config: &GenerationConfig,
) -> Result<(), String> {
    for &v in cand.nodes() {
        if !h.contains_node(v) {
            return Err(format!("unknown node {}", v.0));
        }
    }
    let size = cand.size();
    if size < config.min_size || size > config.max_size {
        return Err(format!(
            "size {size} outside [{}, {}]",
            config.min_size, config.max_size
        ));
    }
    let start = h.edge_count().saturating_sub(DUPLICATE_WINDOW);
    if h.edges()[start..].iter().any(|e| e.nodes() == cand.nodes()) {
        return Err("duplicate of a recent hyperedge".to_string());
    }
    Ok(())
}

/// Snapshot of the hypergraph the optimizer reasons about.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkStatistics {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub mean_degree: f64,
    pub max_degree: usize,
    pub mean_edge_size: f64,
    /// Fraction of hyperedge pairs sharing a node; absent below two
    /// edges.
    pub interaction_density: Option<f64>,
    /// Connected components of the clique expansion; isolated nodes
    /// count singly.
    pub components: usize,
    /// Log-binned power-law slope of the degree distribution, when the
    /// fit is defined.
    pub degree_slope: Option<f64>,
    /// Distinct attribute values per hyperedge, averaged.
    pub attribute_diversity: f64,
}

impl NetworkStatistics {
    /// One-line key=value rendering for the optimizer prompt. Never
    /// empty.
    pub fn render(&self) -> String {
        let opt = |v: Option<f64>| v.map_or("none".to_string(), |x| format!("{x:.4}"));
        format!(
            "nodes={} edges={} mean_degree={:.4} max_degree={} mean_edge_size={:.4} \
             interaction_density={} components={} degree_slope={} attribute_diversity={:.4}",
            self.num_nodes,
            self.num_edges,
            self.mean_degree,
            self.max_degree,
            self.mean_edge_size,
            opt(self.interaction_density),
            self.components,
            opt(self.degree_slope),
            self.attribute_diversity,
        )
    }
}

fn clique_components(h: &TemporalHypergraph) -> usize {
    let nodes: Vec<NodeId> = h.nodes().collect();
    if nodes.is_empty() {
        return 0;
    }
    let index: HashMap<NodeId, usize> =
        nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..nodes.len()).collect();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for edge in h.edges() {
        let mut members = edge.nodes().iter().map(|v| index[v]);
        if let Some(first) = members.next() {
            let root = find(&mut parent, first);
            for member in members {
                let other = find(&mut parent, member);
                parent[other] = root;
            }
        }
    }
    let mut roots: Vec<usize> =
        (0..nodes.len()).map(|i| find(&mut parent, i)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

fn current_doi(h: &TemporalHypergraph) -> Option<f64> {
    let m = h.edge_count();
    if m < 2 {
        return None;
    }
    let count = intersecting_pair_counts(h, &[m])
        .expect("a single checkpoint at m is always valid")[0];
    let pairs = m as u64 * (m as u64 - 1) / 2;
    Some(count as f64 / pairs as f64)
}

fn attribute_diversity(h: &TemporalHypergraph, profiles: &[EntityProfile]) -> f64 {
    if h.edge_count() == 0 {
        return 0.0;
    }
    let total: usize = h
        .edges()
        .iter()
        .map(|edge| {
            let mut values = std::collections::BTreeSet::new();
            for &v in edge.nodes() {
                if let Some(profile) = profiles.get(v.0 as usize) {
                    for (_, value) in &profile.attributes {
                        values.insert(value.as_str());
                    }
                }
            }
            values.len()
        })
        .sum();
    total as f64 / h.edge_count() as f64
}

/// Recomputes every statistic from the hypergraph (and attribute
/// diversity from the profiles, looked up by node id).
pub fn compute_network_statistics(
    h: &TemporalHypergraph,
    profiles: &[EntityProfile],
) -> NetworkStatistics {
    let n = h.node_count();
    let m = h.edge_count();
    let incidences = h.total_incidences();
    let max_degree = h.nodes().map(|v| h.degree(v)).max().unwrap_or(0);
    let degree_slope = fit_power_law(&degree_distribution(h).histogram)
        .ok()
        .map(|fit| fit.slope);
    NetworkStatistics {
        num_nodes: n,
        num_edges: m,
        mean_degree: if n == 0 { 0.0 } else { incidences as f64 / n as f64 },
        max_degree,
        mean_edge_size: if m == 0 { 0.0 } else { incidences as f64 / m as f64 },
        interaction_density: current_doi(h),
        components: clique_components(h),
        degree_slope,
        attribute_diversity: attribute_diversity(h, profiles),
    }
}

fn render_local_context(h: &TemporalHypergraph, center: NodeId) -> String {
    let ctx = h.local_context(center, LOCAL_CONTEXT_EDGES);
    if ctx.degree == 0 {
        return "(no prior relationships)".to_string();
    }
    let groups: Vec<String> = ctx
        .recent
        .iter()
        .map(|(_, edge)| render_node_set(edge.nodes()))
        .collect();
    format!("member of {} hyperedges; most recent: {}", ctx.degree, groups.join(", "))
}

fn generator_context(
    center: NodeId,
    size: usize,
    h: &TemporalHypergraph,
    profiles: &[EntityProfile],
    config: &GenerationConfig,
    directive: Option<&StrategyDirective>,
) -> GeneratorContext {
    let attributes = profiles
        .get(center.0 as usize)
        .map_or_else(|| "(none)".to_string(), EntityProfile::attribute_summary);
    GeneratorContext {
        domain: config.domain_label.clone(),
        center,
        attributes,
        local_context: render_local_context(h, center),
        size,
        global_strategy: directive.map(|d| d.kind.token().to_string()),
    }
}

fn entity_details(cand: &CandidateHyperedge, profiles: &[EntityProfile]) -> String {
    cand.nodes()
        .iter()
        .map(|&v| {
            let summary = profiles
                .get(v.0 as usize)
                .map_or_else(|| "(none)".to_string(), EntityProfile::attribute_summary);
            format!("{}: {}", v.0, summary)
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

/// Result of the construction phase. A backend failure aborts the loop
/// but the hypergraph built so far is kept alongside the error.
#[derive(Debug)]
pub struct ConstructOutcome {
    pub hypergraph: TemporalHypergraph,
    /// Loop iterations actually executed, at most M.
    pub attempts: usize,
    pub accepted: u64,
    /// Validation rejections plus unparseable generator replies.
    pub rejected: u64,
    pub error: Option<BackendError>,
}

/// Iterative local generation: M rounds of select center, pick size,
/// query the GENERATOR, validate, insert. Timestamps are insertion
/// indices. Unparseable replies skip the round; any other backend error
/// stops the loop with a partial result.
pub fn construct(
    profiles: &[EntityProfile],
    config: &GenerationConfig,
    backend: &mut dyn AgentBackend,
) -> Result<ConstructOutcome, EngineError> {
    config.validate()?;
    check_profiles(profiles, config)?;

    let mut rng = engine_rng(config.seed, STREAM_CONSTRUCT);
    let mut h =
        TemporalHypergraph::with_nodes((0..profiles.len()).map(|i| NodeId(i as u64)));
    let mut accepted = 0u64;
    let mut rejected = 0u64;
    let mut error = None;
    let mut attempts = 0usize;

    for _ in 0..config.target_edges {
        attempts += 1;
        let center = select_entity(&h, config, &[], &mut rng);
        let size = determine_hyperedge_size(config, &mut rng);
        let decision = backend.decide(&AgentRequest::Generate(generator_context(
            center, size, &h, profiles, config, None,
        )));
        match decision {
            Ok(AgentDecision::Candidate(cand)) => {
                if validate_candidate(&cand, &h, config).is_ok() {
                    let timestamp = h.edge_count() as u64;
                    let edge = Hyperedge::new(cand.nodes().iter().copied(), timestamp)
                        .expect("validated candidates are non-empty");
                    h.add_hyperedge(edge);
                    accepted += 1;
                } else {
                    rejected += 1;
                }
            }
            Ok(_) => {
                return Err(EngineError::WrongDecision {
                    role: AgentRole::Generator,
                })
            }
            Err(BackendError::Parse(_)) => rejected += 1,
            Err(e) => {
                error = Some(e);
                break;
            }
        }
    }

    Ok(ConstructOutcome {
        hypergraph: h,
        attempts,
        accepted,
        rejected,
        error,
    })
}

/// Evolution bookkeeping: the hypergraph after `step` rounds plus
/// cumulative counters satisfying
/// m_t = m_{t-1} - removed_t + accepted_t.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionState {
    pub hypergraph: TemporalHypergraph,
    pub step: usize,
    pub last_directive: Option<StrategyDirective>,
    pub accepted: u64,
    pub rejected: u64,
    pub removed: u64,
}

impl EvolutionState {
    pub fn new(hypergraph: TemporalHypergraph) -> Self {
        Self {
            hypergraph,
            step: 0,
            last_directive: None,
            accepted: 0,
            rejected: 0,
            removed: 0,
        }
    }
}

fn expect_directive(
    decision: AgentDecision,
) -> Result<StrategyDirective, EngineError> {
    match decision {
        AgentDecision::Directive(d) => Ok(d),
        _ => Err(EngineError::WrongDecision {
            role: AgentRole::Optimizer,
        }),
    }
}

/// One multi-agent round in the order: optimizer directive, capped
/// removal, then generation attempts each reviewed before merging.
/// Errors leave the input state untouched, so a failed step rolls back
/// by construction.
pub fn evolve_step(
    state: &EvolutionState,
    profiles: &[EntityProfile],
    config: &GenerationConfig,
    backend: &mut dyn AgentBackend,
    rng: &mut ChaCha12Rng,
) -> Result<EvolutionState, EngineError> {
    let mut h = state.hypergraph.clone();

    let stats = compute_network_statistics(&h, profiles);
    let directive = expect_directive(backend.decide(&AgentRequest::Optimize(
        OptimizerContext {
            statistics: stats.render(),
            current_doi: stats.interaction_density,
            diversity_target: config.diversity_target,
            suggestion_count: config.optimizer_suggestion_count,
        },
    ))?)?;
    let mut directive = directive;
    directive.focus_entities.truncate(config.optimizer_suggestion_count);

    let cap = (h.edge_count() as f64 * config.removal_fraction).floor() as usize;
    let removed_now = if cap > 0 {
        let raw = match backend.decide(&AgentRequest::Remove(RemoverContext {
            hypergraph: &h,
            global_strategy: directive.kind.token().to_string(),
            max_removals: cap,
        }))? {
            AgentDecision::Removal(indices) => indices,
            _ => {
                return Err(EngineError::WrongDecision {
                    role: AgentRole::Remover,
                })
            }
        };
        // Sanitize whatever the backend answered: known indices only,
        // first mention wins, cap enforced.
        let mut seen = std::collections::BTreeSet::new();
        let mut ordered = Vec::new();
        for i in raw {
            if i < h.edge_count() && seen.insert(i) {
                ordered.push(i);
            }
        }
        ordered.truncate(cap);
        let to_remove: std::collections::BTreeSet<usize> = ordered.into_iter().collect();
        let removed = to_remove.len();
        h.remove_hyperedges(&to_remove)
            .expect("sanitized indices are in range");
        removed as u64
    } else {
        0
    };

    // The event clock continues past every timestamp ever issued, even
    // if removal dropped the newest edge.
    let mut next_timestamp = state.hypergraph.max_timestamp().map_or(0, |t| t + 1);
    let mut accepted_now = 0u64;
    let mut rejected_now = 0u64;

    for _ in 0..config.generation_attempts_per_step {
        let center = select_entity(&h, config, &directive.focus_entities, rng);
        let size = determine_hyperedge_size(config, rng);
        let decision = backend.decide(&AgentRequest::Generate(generator_context(
            center,
            size,
            &h,
            profiles,
            config,
            Some(&directive),
        )));
        let cand = match decision {
            Ok(AgentDecision::Candidate(c)) => c,
            Ok(_) => {
                return Err(EngineError::WrongDecision {
                    role: AgentRole::Generator,
                })
            }
            Err(BackendError::Parse(_)) => {
                rejected_now += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        if validate_candidate(&cand, &h, config).is_err() {
            rejected_now += 1;
            continue;
        }
        let review = match backend.decide(&AgentRequest::Review(ReviewerContext {
            candidate: cand.clone(),
            entity_details: entity_details(&cand, profiles),
            global_strategy: Some(directive.kind.token().to_string()),
            hypergraph: &h,
        }))? {
            AgentDecision::Review(d) => d,
            _ => {
                return Err(EngineError::WrongDecision {
                    role: AgentRole::Reviewer,
                })
            }
        };
        if review.verdict == Verdict::Approve {
            let edge = Hyperedge::new(cand.nodes().iter().copied(), next_timestamp)
                .expect("validated candidates are non-empty");
            h.add_hyperedge(edge);
            next_timestamp += 1;
            accepted_now += 1;
        } else {
            rejected_now += 1;
        }
    }

    Ok(EvolutionState {
        hypergraph: h,
        step: state.step + 1,
        last_directive: Some(directive),
        accepted: state.accepted + accepted_now,
        rejected: state.rejected + rejected_now,
        removed: state.removed + removed_now,
    })
}

/// Final state of an evolution run plus the pattern report over the
/// resulting hypergraph.
#[derive(Debug)]
pub struct EvolutionOutcome {
    pub state: EvolutionState,
    pub report: PatternReport,
}

/// Runs `evolution_steps` rounds of [`evolve_step`] and measures the
/// result. Step failures surface with their index; the input state is
/// never partially modified.
pub fn evolve(
    h0: TemporalHypergraph,
    profiles: &[EntityProfile],
    config: &GenerationConfig,
    backend: &mut dyn AgentBackend,
) -> Result<EvolutionOutcome, EngineError> {
    config.validate()?;
    check_profiles(profiles, config)?;

    let mut rng = engine_rng(config.seed, STREAM_EVOLVE);
    let mut state = EvolutionState::new(h0);
    for step in 0..config.evolution_steps {
        state = evolve_step(&state, profiles, config, backend, &mut rng).map_err(|e| {
            match e {
                EngineError::Backend(source) => EngineError::Step { step, source },
                other => other,
            }
        })?;
    }
    let report = pattern_report(None, &state.hypergraph, &ReportConfig::default());
    Ok(EvolutionOutcome { state, report })
}
