//! The four generation agents and the backends that answer for them.
//!
//! Each evolution step consults up to four roles: a GENERATOR proposing
//! hyperedges around a center, a REVIEWER passing judgment on
//! candidates, a REMOVER naming hyperedges to prune, and an OPTIMIZER
//! issuing a network-wide directive. A request to any role is an
//! [`AgentRequest`]; whatever answers it implements [`AgentBackend`].
//! Two backends exist: [`oracle::OracleBackend`] decides from the
//! rank-based model with no network, and [`chat::RemoteBackend`] sends
//! the role's prompt to an OpenAI-compatible chat endpoint and parses
//! the reply leniently.

use thiserror::Error;

use crate::hypergraph::{NodeId, TemporalHypergraph};

pub mod chat;
pub mod oracle;
pub mod parse;
pub mod prompts;

pub use chat::{chat_complete, ChatMessage, ChatRequest, ChatResponse, RemoteBackend, RemoteConfig};
pub use oracle::{oracle_decide, OracleBackend};
pub use parse::{parse_response, ParseError};
pub use prompts::{build_prompt, TemplateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AgentRole {
    Generator,
    Reviewer,
    Remover,
    Optimizer,
}

impl AgentRole {
    pub fn token(self) -> &'static str {
        match self {
            AgentRole::Generator => "GENERATOR",
            AgentRole::Reviewer => "REVIEWER",
            AgentRole::Remover => "REMOVER",
            AgentRole::Optimizer => "OPTIMIZER",
        }
    }
}

impl std::fmt::Display for AgentRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// Strategy the optimizer hands to the other agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectiveKind {
    IncreaseConnections,
    EnhanceDiversity,
    ReduceClustering,
    Maintain,
}

impl DirectiveKind {
    pub const ALL: [DirectiveKind; 4] = [
        DirectiveKind::IncreaseConnections,
        DirectiveKind::EnhanceDiversity,
        DirectiveKind::ReduceClustering,
        DirectiveKind::Maintain,
    ];

    pub fn token(self) -> &'static str {
        match self {
            DirectiveKind::IncreaseConnections => "INCREASE_CONNECTIONS",
            DirectiveKind::EnhanceDiversity => "ENHANCE_DIVERSITY",
            DirectiveKind::ReduceClustering => "REDUCE_CLUSTERING",
            DirectiveKind::Maintain => "MAINTAIN",
        }
    }
}

impl std::fmt::Display for DirectiveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyDirective {
    pub kind: DirectiveKind,
    /// Entities the next generation attempts should favor as centers.
    pub focus_entities: Vec<NodeId>,
    pub rationale: String,
}

impl StrategyDirective {
    pub fn maintain() -> Self {
        Self {
            kind: DirectiveKind::Maintain,
            focus_entities: Vec::new(),
            rationale: String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("candidate hyperedge must contain its center and at least two nodes")]
pub struct CandidateInvalid;

/// A proposed hyperedge before validation and review.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateHyperedge {
    nodes: Vec<NodeId>,
    pub center: NodeId,
    pub justification: String,
}

impl CandidateHyperedge {
    /// Nodes are deduplicated and sorted; the center must be among them
    /// and at least one other node is required.
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        center: NodeId,
        justification: impl Into<String>,
    ) -> Result<Self, CandidateInvalid> {
        let mut nodes: Vec<NodeId> = nodes.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.len() < 2 || nodes.binary_search(&center).is_err() {
            return Err(CandidateInvalid);
        }
        Ok(Self {
            nodes,
            center,
            justification: justification.into(),
        })
    }

    /// Member ids, ascending.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Approve,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReviewDecision {
    pub verdict: Verdict,
    pub reason: String,
}

/// Inputs for a GENERATOR call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorContext {
    pub domain: String,
    pub center: NodeId,
    /// Rendered attribute summary of the center.
    pub attributes: String,
    /// Rendered summary of the center's recent hyperedges.
    pub local_context: String,
    /// Requested hyperedge size, at least 2.
    pub size: usize,
    /// Directive token during evolution; absent during construction.
    pub global_strategy: Option<String>,
}

/// Inputs for a REVIEWER call. Borrows the hypergraph so review can see
/// the current edge set.
#[derive(Debug, Clone)]
pub struct ReviewerContext<'h> {
    pub candidate: CandidateHyperedge,
    /// Rendered attribute summaries of the candidate members.
    pub entity_details: String,
    pub global_strategy: Option<String>,
    pub hypergraph: &'h TemporalHypergraph,
}

/// Inputs for a REMOVER call.
#[derive(Debug, Clone)]
pub struct RemoverContext<'h> {
    pub hypergraph: &'h TemporalHypergraph,
    pub global_strategy: String,
    /// Hard cap on removals this step; the engine enforces it on any
    /// backend, the oracle already respects it.
    pub max_removals: usize,
}

/// Inputs for an OPTIMIZER call.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerContext {
    /// Rendered network statistics for the prompt.
    pub statistics: String,
    /// Current density of interactions; absent below two hyperedges.
    pub current_doi: Option<f64>,
    /// Density above which diversity is preferred over growth.
    pub diversity_target: f64,
    /// Focus entities the directive should carry (K).
    pub suggestion_count: usize,
}

/// One question to an agent role.
#[derive(Debug, Clone)]
pub enum AgentRequest<'h> {
    Generate(GeneratorContext),
    Review(ReviewerContext<'h>),
    Remove(RemoverContext<'h>),
    Optimize(OptimizerContext),
}

impl AgentRequest<'_> {
    pub fn role(&self) -> AgentRole {
        match self {
            AgentRequest::Generate(_) => AgentRole::Generator,
            AgentRequest::Review(_) => AgentRole::Reviewer,
            AgentRequest::Remove(_) => AgentRole::Remover,
            AgentRequest::Optimize(_) => AgentRole::Optimizer,
        }
    }
}

/// One answer from an agent role, matching the request variant.
#[derive(Debug, Clone, PartialEq)]
pub enum AgentDecision {
    Candidate(CandidateHyperedge),
    Review(ReviewDecision),
    /// Hyperedge indices to remove; empty means NONE.
    Removal(Vec<usize>),
    Directive(StrategyDirective),
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("no credential: set {var}")]
    MissingCredential { var: &'static str },
    #[error("authentication rejected (HTTP {status})")]
    Auth { status: u16 },
    #[error("transport failed: {0}")]
    Transport(String),
    #[error("malformed endpoint response: {0}")]
    Protocol(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("decision rule failed: {0}")]
    Rule(String),
}

/// Anything that can answer agent requests: the deterministic oracle or
/// a remote chat endpoint.
pub trait AgentBackend {
    fn decide(&mut self, request: &AgentRequest<'_>) -> Result<AgentDecision, BackendError>;

    /// Short identifier used in logs and summaries.
    fn name(&self) -> &'static str;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_normalizes_and_validates() {
        let c = CandidateHyperedge::new(
            [NodeId(5), NodeId(1), NodeId(5)],
            NodeId(1),
            "test",
        )
        .unwrap();
        assert_eq!(c.nodes(), &[NodeId(1), NodeId(5)]);
        assert_eq!(c.size(), 2);

        assert_eq!(
            CandidateHyperedge::new([NodeId(1)], NodeId(1), ""),
            Err(CandidateInvalid)
        );
        assert_eq!(
            CandidateHyperedge::new([NodeId(1), NodeId(2)], NodeId(3), ""),
            Err(CandidateInvalid)
        );
    }

    #[test]
    fn role_and_directive_tokens() {
        assert_eq!(AgentRole::Generator.token(), "GENERATOR");
        assert_eq!(AgentRole::Optimizer.to_string(), "OPTIMIZER");
        assert_eq!(
            DirectiveKind::IncreaseConnections.to_string(),
            "INCREASE_CONNECTIONS"
        );
        assert_eq!(DirectiveKind::ALL.len(), 4);
    }

    #[test]
    fn request_reports_its_role() {
        let ctx = OptimizerContext {
            statistics: "n=3".into(),
            current_doi: None,
            diversity_target: 0.2,
            suggestion_count: 5,
        };
        assert_eq!(AgentRequest::Optimize(ctx).role(), AgentRole::Optimizer);
    }
}
