//! Lenient parsing of chat replies into agent decisions.
//!
//! Remote models wrap answers in prose, code fences, or punctuation.
//! Parsers here scan for the strongest recognizable signal: a bracketed
//! integer list, a verdict token, a directive keyword. Only the
//! generator can fail outright; every other role has a safe default so
//! a rambling reply degrades to a conservative decision instead of an
//! error.

use thiserror::Error;

use super::{
    AgentDecision, AgentRequest, CandidateHyperedge, DirectiveKind, ReviewDecision,
    StrategyDirective, Verdict,
};
use crate::hypergraph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("generator reply contains no entity id list")]
    NoNodeList,
    #[error("generator reply names fewer than two distinct entities")]
    TooFewNodes,
}

/// Routes a reply to the parser for the request's role. The decision
/// variant always matches the request variant.
pub fn parse_response(
    request: &AgentRequest<'_>,
    text: &str,
) -> Result<AgentDecision, ParseError> {
    Ok(match request {
        AgentRequest::Generate(ctx) => {
            AgentDecision::Candidate(parse_generator(text, ctx.center)?)
        }
        AgentRequest::Review(_) => AgentDecision::Review(parse_reviewer(text)),
        AgentRequest::Remove(_) => AgentDecision::Removal(parse_remover(text)),
        AgentRequest::Optimize(_) => AgentDecision::Directive(parse_optimizer(text)),
    })
}

/// Takes the first bracketed integer list, falling back to every bare
/// integer in the reply. The center is always included; the full reply
/// becomes the justification.
pub fn parse_generator(text: &str, center: NodeId) -> Result<CandidateHyperedge, ParseError> {
    let ids = match first_bracketed_integers(text) {
        Some(ids) => ids,
        None => extract_integers(text),
    };
    if ids.is_empty() {
        return Err(ParseError::NoNodeList);
    }
    let nodes = ids.into_iter().map(NodeId).chain([center]);
    CandidateHyperedge::new(nodes, center, text.trim())
        .map_err(|_| ParseError::TooFewNodes)
}

/// First APPROVE/REJECT token wins; anything else is a rejection.
/// Inflected forms ("approved", "rejecting") count.
pub fn parse_reviewer(text: &str) -> ReviewDecision {
    let upper = text.to_uppercase();
    let approve = find_token_prefix(&upper, "APPROVE");
    let reject = find_token_prefix(&upper, "REJECT");
    let verdict = match (approve, reject) {
        (Some(a), Some(r)) if a < r => Verdict::Approve,
        (Some(_), None) => Verdict::Approve,
        _ => Verdict::Reject,
    };
    let reason = if approve.is_none() && reject.is_none() {
        "no verdict token in reply".to_string()
    } else {
        text.trim().to_string()
    };
    ReviewDecision { verdict, reason }
}

/// A NONE token means no removals; otherwise every integer in the reply
/// is taken as a hyperedge index, in order of appearance.
pub fn parse_remover(text: &str) -> Vec<usize> {
    let upper = text.to_uppercase();
    if find_token(&upper, "NONE").is_some() {
        return Vec::new();
    }
    extract_integers(text)
        .into_iter()
        .filter_map(|v| usize::try_from(v).ok())
        .collect()
}

/// Earliest directive keyword wins, MAINTAIN when none appears. Focus
/// entities come from the first bracketed list after the keyword, or
/// anywhere in the reply if the keyword has none after it.
pub fn parse_optimizer(text: &str) -> StrategyDirective {
    let upper = text.to_uppercase();
    let mut best: Option<(usize, DirectiveKind)> = None;
    for kind in DirectiveKind::ALL {
        if let Some(pos) = find_directive(&upper, kind.token()) {
            if best.map_or(true, |(b, _)| pos < b) {
                best = Some((pos, kind));
            }
        }
    }
    let (kind, tail_from) = match best {
        Some((pos, kind)) => (kind, pos),
        None => (DirectiveKind::Maintain, 0),
    };
    let focus = first_bracketed_integers(&text[tail_from..])
        .or_else(|| first_bracketed_integers(text))
        .unwrap_or_default()
        .into_iter()
        .map(NodeId)
        .collect();
    StrategyDirective {
        kind,
        focus_entities: focus,
        rationale: text.trim().to_string(),
    }
}

/// Digit runs anywhere in the text, in order. Runs too long for u64 are
/// dropped.
fn extract_integers(text: &str) -> Vec<u64> {
    let mut out = Vec::new();
    let mut run = String::new();
    for c in text.chars().chain([' ']) {
        if c.is_ascii_digit() {
            run.push(c);
        } else if !run.is_empty() {
            if let Ok(v) = run.parse::<u64>() {
                out.push(v);
            }
            run.clear();
        }
    }
    out
}

/// Integers inside the first `[...]` pair that contains any.
fn first_bracketed_integers(text: &str) -> Option<Vec<u64>> {
    let bytes = text.as_bytes();
    let mut start = None;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'[' => start = Some(i),
            b']' => {
                if let Some(s) = start.take() {
                    let ids = extract_integers(&text[s + 1..i]);
                    if !ids.is_empty() {
                        return Some(ids);
                    }
                }
            }
            _ => {}
        }
    }
    None
}

/// Position of `token` in `upper` with non-word characters on both
/// sides. Underscores count as word characters so tokens do not match
/// inside larger identifiers.
fn find_token(upper: &str, token: &str) -> Option<usize> {
    find_word(upper, token, false)
}

/// Like [`find_token`] but any suffix is allowed, so a word merely
/// starting with `token` matches.
fn find_token_prefix(upper: &str, token: &str) -> Option<usize> {
    find_word(upper, token, true)
}

fn find_word(upper: &str, token: &str, allow_suffix: bool) -> Option<usize> {
    let bytes = upper.as_bytes();
    let is_word = |b: u8| b.is_ascii_alphanumeric() || b == b'_';
    let mut from = 0;
    while let Some(rel) = upper[from..].find(token) {
        let pos = from + rel;
        let end = pos + token.len();
        let left_ok = pos == 0 || !is_word(bytes[pos - 1]);
        let right_ok = allow_suffix || end == bytes.len() || !is_word(bytes[end]);
        if left_ok && right_ok {
            return Some(pos);
        }
        from = pos + 1;
    }
    None
}

/// Like [`find_token`] but the token's own underscores also match
/// spaces or hyphens, accepting "INCREASE CONNECTIONS" style replies.
fn find_directive(upper: &str, token: &str) -> Option<usize> {
    if let Some(pos) = find_token(upper, token) {
        return Some(pos);
    }
    if token.contains('_') {
        for sep in [' ', '-'] {
            let variant = token.replace('_', &sep.to_string());
            if let Some(pos) = find_token(upper, &variant) {
                return Some(pos);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    mod generator {
        use super::*;

        #[test]
        fn bracketed_list_wins_over_prose_numbers() {
            let c = parse_generator(
                "Given the 3 criteria above, I propose [4, 9, 15] as the group.",
                NodeId(4),
            )
            .unwrap();
            assert_eq!(c.nodes(), &[NodeId(4), NodeId(9), NodeId(15)]);
            assert_eq!(c.center, NodeId(4));
        }

        #[test]
        fn center_is_always_included() {
            let c = parse_generator("[9, 15]", NodeId(4)).unwrap();
            assert_eq!(c.nodes(), &[NodeId(4), NodeId(9), NodeId(15)]);
        }

        #[test]
        fn bare_integers_without_brackets() {
            let c = parse_generator("I suggest entities 7, 2 and 12.", NodeId(7)).unwrap();
            assert_eq!(c.nodes(), &[NodeId(2), NodeId(7), NodeId(12)]);
        }

        #[test]
        fn code_fenced_json_array() {
            let c = parse_generator(
                "```json\n{\"members\": [3, 8, 21]}\n```",
                NodeId(3),
            )
            .unwrap();
            assert_eq!(c.nodes(), &[NodeId(3), NodeId(8), NodeId(21)]);
        }

        #[test]
        fn empty_brackets_fall_back_to_later_pair() {
            let c = parse_generator("[] then [5, 6]", NodeId(5)).unwrap();
            assert_eq!(c.nodes(), &[NodeId(5), NodeId(6)]);
        }

        #[test]
        fn duplicates_collapse() {
            let c = parse_generator("[8, 8, 8, 2]", NodeId(2)).unwrap();
            assert_eq!(c.nodes(), &[NodeId(2), NodeId(8)]);
        }

        #[test]
        fn no_numbers_is_an_error() {
            assert_eq!(
                parse_generator("I cannot propose a group.", NodeId(1)),
                Err(ParseError::NoNodeList)
            );
        }

        #[test]
        fn only_the_center_is_too_few() {
            assert_eq!(
                parse_generator("[4] alone", NodeId(4)),
                Err(ParseError::TooFewNodes)
            );
        }

        #[test]
        fn justification_keeps_the_reply() {
            let c = parse_generator("  [1, 2] because they fit  ", NodeId(1)).unwrap();
            assert_eq!(c.justification, "[1, 2] because they fit");
        }
    }

    mod reviewer {
        use super::*;

        #[test]
        fn plain_approve() {
            assert_eq!(parse_reviewer("APPROVE").verdict, Verdict::Approve);
        }

        #[test]
        fn lowercase_with_prose() {
            let d = parse_reviewer("I think we should approve this candidate.");
            assert_eq!(d.verdict, Verdict::Approve);
        }

        #[test]
        fn inflected_forms_match() {
            assert_eq!(parse_reviewer("Approved.").verdict, Verdict::Approve);
            assert_eq!(
                parse_reviewer("This must be rejected outright.").verdict,
                Verdict::Reject
            );
        }

        #[test]
        fn first_token_wins() {
            let d = parse_reviewer("REJECT. I would not APPROVE this.");
            assert_eq!(d.verdict, Verdict::Reject);
            let d = parse_reviewer("APPROVE, though some would reject it.");
            assert_eq!(d.verdict, Verdict::Approve);
        }

        #[test]
        fn no_token_rejects() {
            let d = parse_reviewer("The candidate is interesting.");
            assert_eq!(d.verdict, Verdict::Reject);
            assert_eq!(d.reason, "no verdict token in reply");
        }

        #[test]
        fn embedded_token_does_not_match() {
            assert_eq!(
                parse_reviewer("disapprovement_rate is low").verdict,
                Verdict::Reject
            );
        }
    }

    mod remover {
        use super::*;

        #[test]
        fn bracketed_indices() {
            assert_eq!(parse_remover("[0, 4, 7]"), vec![0, 4, 7]);
        }

        #[test]
        fn none_token_wins_even_with_numbers() {
            assert_eq!(parse_remover("NONE of the 12 edges qualify."), Vec::<usize>::new());
        }

        #[test]
        fn lowercase_none() {
            assert_eq!(parse_remover("none"), Vec::<usize>::new());
        }

        #[test]
        fn prose_indices() {
            assert_eq!(
                parse_remover("Remove edges 3 and 5; they duplicate edge 3."),
                vec![3, 5, 3]
            );
        }

        #[test]
        fn empty_reply_removes_nothing() {
            assert_eq!(parse_remover("   "), Vec::<usize>::new());
        }

        #[test]
        fn embedded_none_in_identifier_does_not_match() {
            assert_eq!(parse_remover("nonessential: remove 2"), vec![2]);
        }
    }

    mod optimizer {
        use super::*;

        #[test]
        fn plain_keyword() {
            let d = parse_optimizer("ENHANCE_DIVERSITY");
            assert_eq!(d.kind, DirectiveKind::EnhanceDiversity);
            assert!(d.focus_entities.is_empty());
        }

        #[test]
        fn keyword_with_focus_list() {
            let d = parse_optimizer("INCREASE_CONNECTIONS around [3, 11, 19]");
            assert_eq!(d.kind, DirectiveKind::IncreaseConnections);
            assert_eq!(
                d.focus_entities,
                vec![NodeId(3), NodeId(11), NodeId(19)]
            );
        }

        #[test]
        fn space_separated_variant() {
            let d = parse_optimizer("We should reduce clustering near the hubs.");
            assert_eq!(d.kind, DirectiveKind::ReduceClustering);
        }

        #[test]
        fn earliest_keyword_wins() {
            let d = parse_optimizer("MAINTAIN. Do not INCREASE_CONNECTIONS yet.");
            assert_eq!(d.kind, DirectiveKind::Maintain);
        }

        #[test]
        fn no_keyword_defaults_to_maintain() {
            let d = parse_optimizer("The network looks balanced.");
            assert_eq!(d.kind, DirectiveKind::Maintain);
            assert_eq!(d.rationale, "The network looks balanced.");
        }

        #[test]
        fn maintaining_does_not_trigger_maintain() {
            let d = parse_optimizer("While maintaining cohesion, ENHANCE DIVERSITY.");
            assert_eq!(d.kind, DirectiveKind::EnhanceDiversity);
        }

        #[test]
        fn focus_before_keyword_still_found() {
            let d = parse_optimizer("Entities [2, 4] matter most: INCREASE_CONNECTIONS");
            assert_eq!(d.kind, DirectiveKind::IncreaseConnections);
            assert_eq!(d.focus_entities, vec![NodeId(2), NodeId(4)]);
        }
    }

    #[test]
    fn routing_matches_request_variant() {
        let ctx = super::super::GeneratorContext {
            domain: "d".into(),
            center: NodeId(1),
            attributes: "a".into(),
            local_context: "l".into(),
            size: 2,
            global_strategy: None,
        };
        let decision = parse_response(&AgentRequest::Generate(ctx), "[1, 2]").unwrap();
        assert!(matches!(decision, AgentDecision::Candidate(_)));
    }
}
