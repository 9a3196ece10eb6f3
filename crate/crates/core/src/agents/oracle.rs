//! Deterministic backend answering agent requests from the rank model.
//!
//! No network, no text: decisions come straight from the population's
//! ranks and qualities. The generator samples collaborators with the
//! simulator's attachment rule, scaled by how often each entity has
//! already been handed the pen as a generation center, so busy entities
//! pull collaborator attention the way they do in live transcripts. All
//! other roles are pure functions of their context; only the generator
//! consumes randomness.

use rand_chacha::ChaCha12Rng;

use rand::SeedableRng;

use super::{
    AgentBackend, AgentDecision, AgentRequest, BackendError, CandidateHyperedge, DirectiveKind,
    GeneratorContext, OptimizerContext, RemoverContext, ReviewDecision, ReviewerContext,
    StrategyDirective, Verdict,
};
use crate::hypergraph::NodeId;
use crate::microdynamics::{draw_excluding, MicroParams, RankedPopulation};

/// [`AgentBackend`] over a fixed population. Population index i stands
/// for NodeId(i).
///
/// The backend remembers how many times each entity has been the center
/// of a generation request and lets that count pull collaborator picks.
/// A fresh backend has no history, so its first answers follow the bare
/// attachment rule exactly.
#[derive(Debug, Clone)]
pub struct OracleBackend {
    pop: RankedPopulation,
    params: MicroParams,
    rng: ChaCha12Rng,
    center_counts: Vec<u64>,
}

impl OracleBackend {
    pub fn new(pop: RankedPopulation, params: MicroParams, seed: u64) -> Self {
        let center_counts = vec![0; pop.len()];
        Self {
            pop,
            params,
            rng: ChaCha12Rng::seed_from_u64(seed),
            center_counts,
        }
    }

    pub fn population(&self) -> &RankedPopulation {
        &self.pop
    }

    pub fn params(&self) -> &MicroParams {
        &self.params
    }
}

impl AgentBackend for OracleBackend {
    fn decide(&mut self, request: &AgentRequest<'_>) -> Result<AgentDecision, BackendError> {
        if let AgentRequest::Generate(ctx) = request {
            if let Some(count) = self.center_counts.get_mut(ctx.center.0 as usize) {
                *count += 1;
            }
        }
        decide_with_history(
            request,
            &self.pop,
            &self.params,
            &self.center_counts,
            &mut self.rng,
        )
    }

    fn name(&self) -> &'static str {
        "oracle"
    }
}

/// Answers one request from the rank model with no selection history,
/// as a fresh [`OracleBackend`] would. Only GENERATOR advances the rng;
/// the other roles are deterministic in their inputs.
pub fn oracle_decide(
    request: &AgentRequest<'_>,
    pop: &RankedPopulation,
    params: &MicroParams,
    rng: &mut ChaCha12Rng,
) -> Result<AgentDecision, BackendError> {
    decide_with_history(request, pop, params, &vec![0; pop.len()], rng)
}

fn decide_with_history(
    request: &AgentRequest<'_>,
    pop: &RankedPopulation,
    params: &MicroParams,
    center_counts: &[u64],
    rng: &mut ChaCha12Rng,
) -> Result<AgentDecision, BackendError> {
    match request {
        AgentRequest::Generate(ctx) => {
            generate(ctx, pop, params, center_counts, rng).map(AgentDecision::Candidate)
        }
        AgentRequest::Review(ctx) => Ok(AgentDecision::Review(review(ctx, pop, params))),
        AgentRequest::Remove(ctx) => Ok(AgentDecision::Removal(remove(ctx, pop, params))),
        AgentRequest::Optimize(ctx) => Ok(AgentDecision::Directive(optimize(ctx, pop, params))),
    }
}

/// How sharply repeat centers pull collaborator picks. Above one, an
/// entity that keeps being handed the pen is suggested disproportionately
/// often, the repetition bias live generators show.
const CENTER_PULL_EXPONENT: f64 = 2.0;

/// Samples k-1 collaborators around the center without replacement,
/// weighted by (rank + alpha)^-gamma times (center count + 1)^pull. With
/// no history the marginals reduce to the bare attachment rule; once
/// centers start repeating, their collaborator pull compounds.
fn generate(
    ctx: &GeneratorContext,
    pop: &RankedPopulation,
    params: &MicroParams,
    center_counts: &[u64],
    rng: &mut ChaCha12Rng,
) -> Result<CandidateHyperedge, BackendError> {
    if ctx.size < 2 {
        return Err(BackendError::Rule(format!(
            "hyperedge size {} is below two",
            ctx.size
        )));
    }
    let center = ctx.center.0 as usize;
    if center >= pop.len() {
        return Err(BackendError::Rule(format!(
            "center entity {} is outside the population of {}",
            ctx.center.0,
            pop.len()
        )));
    }
    let eligible: Vec<usize> = pop
        .eligible_indices(params.q_threshold)
        .into_iter()
        .filter(|&i| i != center)
        .collect();
    let needed = ctx.size - 1;
    if eligible.len() < needed {
        return Err(BackendError::Rule(format!(
            "eligible set holds {} collaborators, need {}",
            eligible.len(),
            needed
        )));
    }

    let weights: Vec<f64> = eligible
        .iter()
        .map(|&i| {
            let picks = center_counts.get(i).copied().unwrap_or(0);
            params.weight(pop.rank(i)) * ((picks + 1) as f64).powf(CENTER_PULL_EXPONENT)
        })
        .collect();
    let mut avail: f64 = weights.iter().sum();
    let mut picked: Vec<usize> = Vec::with_capacity(needed);
    for _ in 0..needed {
        let pos = draw_excluding(rng, &weights, &picked, avail);
        avail -= weights[pos];
        picked.push(pos);
    }

    let nodes = picked
        .iter()
        .map(|&pos| NodeId(eligible[pos] as u64))
        .chain([ctx.center]);
    let justification = format!(
        "rank-weighted collaborators, busy centers favored, around entity {}",
        ctx.center.0
    );
    CandidateHyperedge::new(nodes, ctx.center, justification)
        .map_err(|e| BackendError::Rule(e.to_string()))
}

/// Approves exactly when every member passes the quality filter and the
/// member set duplicates no existing hyperedge.
fn review(
    ctx: &ReviewerContext<'_>,
    pop: &RankedPopulation,
    params: &MicroParams,
) -> ReviewDecision {
    for &node in ctx.candidate.nodes() {
        let i = node.0 as usize;
        if i >= pop.len() {
            return ReviewDecision {
                verdict: Verdict::Reject,
                reason: format!("unknown entity {}", node.0),
            };
        }
        if pop.quality(i) <= params.q_threshold {
            return ReviewDecision {
                verdict: Verdict::Reject,
                reason: format!("entity {} fails the quality filter", node.0),
            };
        }
    }
    let duplicate = ctx
        .hypergraph
        .edges()
        .iter()
        .any(|e| e.nodes() == ctx.candidate.nodes());
    if duplicate {
        return ReviewDecision {
            verdict: Verdict::Reject,
            reason: "exact duplicate of an existing hyperedge".to_string(),
        };
    }
    ReviewDecision {
        verdict: Verdict::Approve,
        reason: "members pass the quality filter and the group is new".to_string(),
    }
}

/// Flags hyperedges whose mean member quality falls below the
/// threshold, worst first, at most `max_removals` of them. Members
/// outside the population count as quality zero.
fn remove(
    ctx: &RemoverContext<'_>,
    pop: &RankedPopulation,
    params: &MicroParams,
) -> Vec<usize> {
    let mut flagged: Vec<(f64, usize)> = ctx
        .hypergraph
        .edges()
        .iter()
        .enumerate()
        .filter_map(|(index, edge)| {
            let total: f64 = edge
                .nodes()
                .iter()
                .map(|n| {
                    let i = n.0 as usize;
                    if i < pop.len() {
                        pop.quality(i)
                    } else {
                        0.0
                    }
                })
                .sum();
            let mean = total / edge.size() as f64;
            (mean < params.q_threshold).then_some((mean, index))
        })
        .collect();
    flagged.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    flagged.truncate(ctx.max_removals);
    flagged.into_iter().map(|(_, index)| index).collect()
}

/// Picks diversity once the interaction density exceeds the target,
/// growth otherwise. Focus falls on the top-ranked eligible entities.
fn optimize(
    ctx: &OptimizerContext,
    pop: &RankedPopulation,
    params: &MicroParams,
) -> StrategyDirective {
    let (kind, rationale) = match ctx.current_doi {
        Some(doi) if doi > ctx.diversity_target => (
            DirectiveKind::EnhanceDiversity,
            format!(
                "interaction density {doi} above target {}; favor novel groupings",
                ctx.diversity_target
            ),
        ),
        Some(doi) => (
            DirectiveKind::IncreaseConnections,
            format!(
                "interaction density {doi} at or below target {}; grow connectivity",
                ctx.diversity_target
            ),
        ),
        None => (
            DirectiveKind::IncreaseConnections,
            "too few hyperedges to measure interaction density; grow connectivity"
                .to_string(),
        ),
    };
    let mut eligible = pop.eligible_indices(params.q_threshold);
    eligible.sort_by_key(|&i| pop.rank(i));
    let focus_entities = eligible
        .into_iter()
        .take(ctx.suggestion_count)
        .map(|i| NodeId(i as u64))
        .collect();
    StrategyDirective {
        kind,
        focus_entities,
        rationale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{Hyperedge, TemporalHypergraph};
    use crate::microdynamics::{selection_probability, SizeSampler};

    fn params(q_threshold: f64) -> MicroParams {
        MicroParams::new(1.0, 1.0, 1.0, q_threshold, 1.0, SizeSampler::Fixed(3)).unwrap()
    }

    fn generate_ctx(center: u64, size: usize) -> GeneratorContext {
        GeneratorContext {
            domain: "collaboration".into(),
            center: NodeId(center),
            attributes: "(none)".into(),
            local_context: "(no prior relationships)".into(),
            size,
            global_strategy: None,
        }
    }

    fn decide_once(
        pop: &RankedPopulation,
        p: &MicroParams,
        request: &AgentRequest<'_>,
        seed: u64,
    ) -> AgentDecision {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        oracle_decide(request, pop, p, &mut rng).unwrap()
    }

    #[test]
    fn generator_includes_center_and_respects_size() {
        let pop = RankedPopulation::identity(10).unwrap();
        let p = params(0.0);
        let req = AgentRequest::Generate(generate_ctx(4, 3));
        for seed in 0..20 {
            let AgentDecision::Candidate(c) = decide_once(&pop, &p, &req, seed) else {
                panic!("generator must yield a candidate");
            };
            assert_eq!(c.size(), 3);
            assert_eq!(c.center, NodeId(4));
            assert!(c.nodes().contains(&NodeId(4)));
            assert!(c.nodes().iter().all(|n| n.0 < 10));
        }
    }

    #[test]
    fn generator_avoids_filtered_collaborators() {
        // Default ramp quality: node i has quality 1 - i/8.
        let pop = RankedPopulation::identity(8).unwrap();
        let p = params(0.5);
        let eligible = pop.eligible_indices(0.5);
        let req = AgentRequest::Generate(generate_ctx(0, 4));
        for seed in 0..20 {
            let AgentDecision::Candidate(c) = decide_once(&pop, &p, &req, seed) else {
                panic!("generator must yield a candidate");
            };
            for node in c.nodes() {
                let i = node.0 as usize;
                assert!(i == 0 || eligible.contains(&i), "ineligible {i} picked");
            }
        }
    }

    #[test]
    fn generator_errors_when_eligible_set_is_too_small() {
        let pop = RankedPopulation::identity(3).unwrap();
        let p = params(0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let req = AgentRequest::Generate(generate_ctx(1, 4));
        let err = oracle_decide(&req, &pop, &p, &mut rng).unwrap_err();
        assert!(matches!(err, BackendError::Rule(_)));
        assert!(err.to_string().contains("need 3"));
    }

    #[test]
    fn generator_rejects_center_outside_population() {
        let pop = RankedPopulation::identity(3).unwrap();
        let p = params(0.0);
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let req = AgentRequest::Generate(generate_ctx(9, 2));
        let err = oracle_decide(&req, &pop, &p, &mut rng).unwrap_err();
        assert!(err.to_string().contains("entity 9"));
    }

    #[test]
    fn generator_marginals_track_the_attachment_rule() {
        // k=2 isolates the first collaborator draw; its law must match
        // the quality-filtered attachment probabilities renormalized
        // without the center.
        let pop = RankedPopulation::identity(12).unwrap();
        let p = MicroParams::new(1.0, 1.0, 1.0, 0.25, 1.0, SizeSampler::Fixed(2)).unwrap();
        let center = 0usize;
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let req = AgentRequest::Generate(generate_ctx(center as u64, 2));

        let draws = 10_000usize;
        let mut counts = vec![0u64; pop.len()];
        for _ in 0..draws {
            let AgentDecision::Candidate(c) =
                oracle_decide(&req, &pop, &p, &mut rng).unwrap()
            else {
                panic!("generator must yield a candidate");
            };
            let collaborator = c
                .nodes()
                .iter()
                .find(|n| n.0 as usize != center)
                .expect("size-2 candidate has one collaborator");
            counts[collaborator.0 as usize] += 1;
        }

        let center_mass = selection_probability(&pop, &p, center).unwrap();
        let mut tv = 0.0;
        for i in 0..pop.len() {
            let expected = if i == center {
                0.0
            } else {
                selection_probability(&pop, &p, i).unwrap() / (1.0 - center_mass)
            };
            let observed = counts[i] as f64 / draws as f64;
            tv += (expected - observed).abs();
        }
        tv /= 2.0;
        assert!(tv <= 0.05, "total variation {tv} exceeds 0.05");
    }

    #[test]
    fn generator_weights_follow_center_history() {
        // Rank weights decay as 1/rank, and node 1 has been the center
        // twice, so its pull carries an extra (2 + 1)^theta factor.
        let pop = RankedPopulation::identity(5).unwrap();
        let p = MicroParams::new(0.0, 1.0, 1.0, 0.0, 1.0, SizeSampler::Fixed(2)).unwrap();
        let mut backend = OracleBackend::new(pop, p, 3);
        for _ in 0..2 {
            backend
                .decide(&AgentRequest::Generate(generate_ctx(1, 2)))
                .unwrap();
        }

        let req = AgentRequest::Generate(generate_ctx(0, 2));
        let draws = 10_000usize;
        let mut counts = vec![0u64; 5];
        for _ in 0..draws {
            let AgentDecision::Candidate(c) = backend.decide(&req).unwrap() else {
                panic!("generator must yield a candidate");
            };
            let collaborator =
                c.nodes().iter().find(|n| n.0 != 0).expect("one collaborator");
            counts[collaborator.0 as usize] += 1;
        }
        let observed = counts[1] as f64 / draws as f64;
        let pull = 3f64.powf(CENTER_PULL_EXPONENT);
        let w = |rank: usize| 1.0 / rank as f64;
        let expected = w(2) * pull / (w(2) * pull + w(3) + w(4) + w(5));
        assert!(
            (observed - expected).abs() < 0.02,
            "busy-center frequency {observed} vs {expected}"
        );
    }

    #[test]
    fn reviewer_approves_fresh_eligible_candidate() {
        let pop = RankedPopulation::identity(6).unwrap();
        let p = params(0.0);
        let h = TemporalHypergraph::with_nodes((0..6).map(NodeId));
        let candidate =
            CandidateHyperedge::new([NodeId(0), NodeId(2)], NodeId(0), "").unwrap();
        let req = AgentRequest::Review(ReviewerContext {
            candidate,
            entity_details: "x".into(),
            global_strategy: None,
            hypergraph: &h,
        });
        let AgentDecision::Review(d) = decide_once(&pop, &p, &req, 0) else {
            panic!("reviewer must yield a review");
        };
        assert_eq!(d.verdict, Verdict::Approve);
    }

    #[test]
    fn reviewer_rejects_exact_duplicate() {
        let pop = RankedPopulation::identity(6).unwrap();
        let p = params(0.0);
        let mut h = TemporalHypergraph::with_nodes((0..6).map(NodeId));
        h.add_hyperedge(Hyperedge::new([NodeId(0), NodeId(2)], 0).unwrap());
        let candidate =
            CandidateHyperedge::new([NodeId(2), NodeId(0)], NodeId(0), "").unwrap();
        let req = AgentRequest::Review(ReviewerContext {
            candidate,
            entity_details: "x".into(),
            global_strategy: None,
            hypergraph: &h,
        });
        let AgentDecision::Review(d) = decide_once(&pop, &p, &req, 0) else {
            panic!("reviewer must yield a review");
        };
        assert_eq!(d.verdict, Verdict::Reject);
        assert!(d.reason.contains("duplicate"));
    }

    #[test]
    fn reviewer_accepts_superset_of_existing_edge() {
        let pop = RankedPopulation::identity(6).unwrap();
        let p = params(0.0);
        let mut h = TemporalHypergraph::with_nodes((0..6).map(NodeId));
        h.add_hyperedge(Hyperedge::new([NodeId(0), NodeId(2)], 0).unwrap());
        let candidate =
            CandidateHyperedge::new([NodeId(0), NodeId(2), NodeId(3)], NodeId(0), "")
                .unwrap();
        let req = AgentRequest::Review(ReviewerContext {
            candidate,
            entity_details: "x".into(),
            global_strategy: None,
            hypergraph: &h,
        });
        let AgentDecision::Review(d) = decide_once(&pop, &p, &req, 0) else {
            panic!("reviewer must yield a review");
        };
        assert_eq!(d.verdict, Verdict::Approve);
    }

    #[test]
    fn reviewer_rejects_filtered_and_unknown_members() {
        let pop = RankedPopulation::identity(8).unwrap();
        let p = params(0.5);
        let h = TemporalHypergraph::with_nodes((0..8).map(NodeId));

        // Node 7 has ramp quality 1/8, below the 0.5 threshold.
        let filtered =
            CandidateHyperedge::new([NodeId(0), NodeId(7)], NodeId(0), "").unwrap();
        let req = AgentRequest::Review(ReviewerContext {
            candidate: filtered,
            entity_details: "x".into(),
            global_strategy: None,
            hypergraph: &h,
        });
        let AgentDecision::Review(d) = decide_once(&pop, &p, &req, 0) else {
            panic!("reviewer must yield a review");
        };
        assert_eq!(d.verdict, Verdict::Reject);
        assert!(d.reason.contains("quality filter"));

        let unknown =
            CandidateHyperedge::new([NodeId(0), NodeId(55)], NodeId(0), "").unwrap();
        let req = AgentRequest::Review(ReviewerContext {
            candidate: unknown,
            entity_details: "x".into(),
            global_strategy: None,
            hypergraph: &h,
        });
        let AgentDecision::Review(d) = decide_once(&pop, &p, &req, 0) else {
            panic!("reviewer must yield a review");
        };
        assert_eq!(d.verdict, Verdict::Reject);
        assert!(d.reason.contains("unknown entity 55"));
    }

    #[test]
    fn remover_flags_worst_edges_first_up_to_cap() {
        let pop =
            RankedPopulation::new(vec![1, 2, 3, 4], vec![1.0, 0.8, 0.3, 0.1]).unwrap();
        let p = params(0.6);
        let mut h = TemporalHypergraph::new();
        // Mean qualities: 0.9, 0.2, 0.55.
        h.add_hyperedge(Hyperedge::new([NodeId(0), NodeId(1)], 0).unwrap());
        h.add_hyperedge(Hyperedge::new([NodeId(2), NodeId(3)], 1).unwrap());
        h.add_hyperedge(Hyperedge::new([NodeId(1), NodeId(2)], 2).unwrap());

        let req = AgentRequest::Remove(RemoverContext {
            hypergraph: &h,
            global_strategy: "MAINTAIN".into(),
            max_removals: 1,
        });
        let AgentDecision::Removal(r) = decide_once(&pop, &p, &req, 0) else {
            panic!("remover must yield a removal");
        };
        assert_eq!(r, vec![1]);

        let req = AgentRequest::Remove(RemoverContext {
            hypergraph: &h,
            global_strategy: "MAINTAIN".into(),
            max_removals: 5,
        });
        let AgentDecision::Removal(r) = decide_once(&pop, &p, &req, 0) else {
            panic!("remover must yield a removal");
        };
        assert_eq!(r, vec![1, 2]);
    }

    #[test]
    fn remover_spares_high_quality_networks() {
        let pop = RankedPopulation::new(vec![1, 2], vec![1.0, 1.0]).unwrap();
        let p = params(0.9);
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(Hyperedge::new([NodeId(0), NodeId(1)], 0).unwrap());
        let req = AgentRequest::Remove(RemoverContext {
            hypergraph: &h,
            global_strategy: "MAINTAIN".into(),
            max_removals: 10,
        });
        let AgentDecision::Removal(r) = decide_once(&pop, &p, &req, 0) else {
            panic!("remover must yield a removal");
        };
        assert!(r.is_empty());
    }

    #[test]
    fn optimizer_switches_on_the_density_target() {
        let pop = RankedPopulation::identity(10).unwrap();
        let p = params(0.0);

        let dense = OptimizerContext {
            statistics: "doi=0.8".into(),
            current_doi: Some(0.8),
            diversity_target: 0.2,
            suggestion_count: 3,
        };
        let AgentDecision::Directive(d) =
            decide_once(&pop, &p, &AgentRequest::Optimize(dense), 0)
        else {
            panic!("optimizer must yield a directive");
        };
        assert_eq!(d.kind, DirectiveKind::EnhanceDiversity);
        assert_eq!(d.focus_entities, vec![NodeId(0), NodeId(1), NodeId(2)]);

        let sparse = OptimizerContext {
            statistics: "doi=0.1".into(),
            current_doi: Some(0.1),
            diversity_target: 0.2,
            suggestion_count: 3,
        };
        let AgentDecision::Directive(d) =
            decide_once(&pop, &p, &AgentRequest::Optimize(sparse), 0)
        else {
            panic!("optimizer must yield a directive");
        };
        assert_eq!(d.kind, DirectiveKind::IncreaseConnections);

        let unmeasured = OptimizerContext {
            statistics: "edges=1".into(),
            current_doi: None,
            diversity_target: 0.2,
            suggestion_count: 99,
        };
        let AgentDecision::Directive(d) =
            decide_once(&pop, &p, &AgentRequest::Optimize(unmeasured), 0)
        else {
            panic!("optimizer must yield a directive");
        };
        assert_eq!(d.kind, DirectiveKind::IncreaseConnections);
        assert_eq!(d.focus_entities.len(), 10);
    }

    #[test]
    fn optimizer_focus_skips_filtered_entities() {
        // Ramp quality on 8 nodes with threshold 0.5 leaves 0..=3.
        let pop = RankedPopulation::identity(8).unwrap();
        let p = params(0.5);
        let ctx = OptimizerContext {
            statistics: "doi=0.5".into(),
            current_doi: Some(0.5),
            diversity_target: 0.2,
            suggestion_count: 8,
        };
        let AgentDecision::Directive(d) =
            decide_once(&pop, &p, &AgentRequest::Optimize(ctx), 0)
        else {
            panic!("optimizer must yield a directive");
        };
        assert_eq!(
            d.focus_entities,
            vec![NodeId(0), NodeId(1), NodeId(2), NodeId(3)]
        );
    }

    #[test]
    fn backend_is_deterministic_and_only_generation_draws() {
        let pop = RankedPopulation::identity(10).unwrap();
        let p = params(0.0);
        let gen_req = AgentRequest::Generate(generate_ctx(2, 3));
        let opt_req = AgentRequest::Optimize(OptimizerContext {
            statistics: "doi=0.5".into(),
            current_doi: Some(0.5),
            diversity_target: 0.2,
            suggestion_count: 2,
        });

        let mut direct = OracleBackend::new(pop.clone(), p.clone(), 99);
        let first = direct.decide(&gen_req).unwrap();

        // Interleaving rng-free roles must not disturb the draw stream.
        let mut interleaved = OracleBackend::new(pop, p, 99);
        interleaved.decide(&opt_req).unwrap();
        let second = interleaved.decide(&gen_req).unwrap();

        assert_eq!(first, second);
        assert_eq!(direct.name(), "oracle");
    }
}
