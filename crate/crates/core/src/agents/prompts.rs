//! Prompt construction for the remote backend.
//!
//! Each role has a fixed system prompt and a user template whose slots
//! are filled from the request context. Rendering is deterministic:
//! the same request always yields the same byte-identical pair. A final
//! output-format line pins the reply shape the lenient parsers expect.

use std::fmt::Write;

use thiserror::Error;

use super::{AgentRequest, GeneratorContext, OptimizerContext, RemoverContext, ReviewerContext};
use crate::hypergraph::{NodeId, TemporalHypergraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("prompt field missing or empty: {field}")]
pub struct TemplateError {
    pub field: &'static str,
}

fn require(field: &'static str, value: &str) -> Result<(), TemplateError> {
    if value.trim().is_empty() {
        Err(TemplateError { field })
    } else {
        Ok(())
    }
}

pub const GENERATOR_SYSTEM: &str = "You are a hypergraph relationship generator. Your task is \
     to form a new collaborative group around a central entity.";
pub const REVIEWER_SYSTEM: &str = "You are a hypergraph relationship reviewer. Your task is to \
     validate a candidate hyperedge.";
pub const REMOVER_SYSTEM: &str = "You are a hypergraph network curator. Your task is to \
     identify and remove redundant or low-quality hyperedges.";
pub const OPTIMIZER_SYSTEM: &str = "You are a network strategy analyst. Your task is to assess \
     the entire hypergraph and provide a strategic directive for the next evolution step.";

/// Renders `(system, user)` for a request, erroring on any missing
/// slot. The error names the offending field.
pub fn build_prompt(request: &AgentRequest<'_>) -> Result<(String, String), TemplateError> {
    match request {
        AgentRequest::Generate(ctx) => generator_prompt(ctx),
        AgentRequest::Review(ctx) => reviewer_prompt(ctx),
        AgentRequest::Remove(ctx) => remover_prompt(ctx),
        AgentRequest::Optimize(ctx) => optimizer_prompt(ctx),
    }
}

fn generator_prompt(ctx: &GeneratorContext) -> Result<(String, String), TemplateError> {
    require("domain", &ctx.domain)?;
    require("attributes", &ctx.attributes)?;
    require("local_context", &ctx.local_context)?;
    if ctx.size < 2 {
        return Err(TemplateError { field: "size" });
    }

    let mut user = String::new();
    let _ = writeln!(
        user,
        "A new collaboration is being formed in a {} network.",
        ctx.domain
    );
    let _ = writeln!(user, "\nCentral Entity: {}", ctx.center.0);
    let _ = writeln!(user, "\nAttributes: {}", ctx.attributes);
    let _ = writeln!(user, "\nLocal Context: {}", ctx.local_context);
    if let Some(strategy) = &ctx.global_strategy {
        require("global_strategy", strategy)?;
        let _ = writeln!(user, "\nGlobal Strategy: {strategy}");
    }
    let _ = writeln!(
        user,
        "\nTask: Propose a new hyperedge of size {} that includes the central entity. The \
         group should be semantically coherent and structurally sound based on the context.",
        ctx.size
    );
    let _ = write!(
        user,
        "\nOutput format: a bracketed list of entity IDs, e.g. [1, 2, 3]."
    );
    Ok((GENERATOR_SYSTEM.to_string(), user))
}

fn reviewer_prompt(ctx: &ReviewerContext<'_>) -> Result<(String, String), TemplateError> {
    require("entity_details", &ctx.entity_details)?;

    let mut user = String::new();
    let _ = writeln!(user, "Please review the following candidate hyperedge:");
    let _ = writeln!(
        user,
        "\nCandidate Hyperedge: {}",
        render_node_set(ctx.candidate.nodes())
    );
    let _ = writeln!(user, "\nEntity Details: {}", ctx.entity_details);
    if let Some(strategy) = &ctx.global_strategy {
        require("global_strategy", strategy)?;
        let _ = writeln!(user, "\nGlobal Strategy: {strategy}");
    }
    let _ = writeln!(user, "\nEvaluation Criteria:");
    let _ = writeln!(user, "- Internal Cohesion: Are the members a good fit?");
    let _ = writeln!(
        user,
        "- Network Impact: How does this group affect the overall structure?"
    );
    let _ = write!(user, "\nDecision: Output \"APPROVE\" or \"REJECT\".");
    Ok((REVIEWER_SYSTEM.to_string(), user))
}

fn remover_prompt(ctx: &RemoverContext<'_>) -> Result<(String, String), TemplateError> {
    require("global_strategy", &ctx.global_strategy)?;

    let mut user = String::new();
    let _ = writeln!(user, "Analyze the provided list of hyperedges.");
    let _ = writeln!(user, "\nHyperedges:");
    let _ = write!(user, "{}", render_edge_list(ctx.hypergraph));
    let _ = writeln!(user, "\nGlobal Strategy: {}", ctx.global_strategy);
    let _ = writeln!(
        user,
        "\nTask: Identify indices of hyperedges that are redundant, internally incoherent, or \
         conflict with the global strategy. Output indices or \"NONE\"."
    );
    let _ = write!(
        user,
        "\nOutput format: a bracketed list of at most {} indices, e.g. [0, 4], or \"NONE\".",
        ctx.max_removals
    );
    Ok((REMOVER_SYSTEM.to_string(), user))
}

fn optimizer_prompt(ctx: &OptimizerContext) -> Result<(String, String), TemplateError> {
    require("statistics", &ctx.statistics)?;

    let mut user = String::new();
    let _ = writeln!(user, "Analyze the current hypergraph state.");
    let _ = writeln!(user, "\nNetwork Statistics: {}", ctx.statistics);
    let _ = writeln!(
        user,
        "\nTask: Based on the analysis, choose one strategic directive that will most \
         effectively improve the network's quality and realism."
    );
    let _ = writeln!(user, "\nDecision: Output corresponding optimization suggestions.");
    let _ = write!(
        user,
        "\nOutput format: one of INCREASE_CONNECTIONS, ENHANCE_DIVERSITY, REDUCE_CLUSTERING, \
         MAINTAIN, optionally followed by a bracketed list of up to {} focus entity IDs.",
        ctx.suggestion_count
    );
    Ok((OPTIMIZER_SYSTEM.to_string(), user))
}

/// `{1, 5, 9}` rendering shared by prompts and summaries.
pub fn render_node_set(nodes: &[NodeId]) -> String {
    let ids: Vec<String> = nodes.iter().map(|n| n.0.to_string()).collect();
    format!("{{{}}}", ids.join(", "))
}

fn render_edge_list(h: &TemporalHypergraph) -> String {
    if h.edge_count() == 0 {
        return "(none)\n".to_string();
    }
    let mut out = String::new();
    for (i, edge) in h.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "{i}: {} at t={}",
            render_node_set(edge.nodes()),
            edge.timestamp
        );
    }
    out
}
