//! Structural and temporal pattern statistics over temporal hypergraphs.
//!
//! Eight measurements characterize a hypergraph well enough to compare a
//! generated network against a reference:
//!
//! 1. node degree distribution
//! 2. hyperedge size distribution
//! 3. pairwise hyperedge intersection sizes
//! 4. singular value spectrum of the incidence matrix ([`spectrum`])
//! 5. group degree distribution (co-occurrence counts of node groups)
//! 6. temporal locality against a sliding window of recent hyperedges
//! 7. inter-event gap distribution of repeat participations
//! 8. density of interactions over graph growth
//!
//! Count distributions share [`DistributionHistogram`] and feed the
//! log-binned fitter in [`fit`]; [`report`] bundles all eight into a
//! comparison report.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::hypergraph::{NodeId, TemporalHypergraph};

pub mod fit;
pub mod report;
pub mod spectrum;

pub use fit::{fit_power_law, goodness_of_fit_gamma, FitError, PowerLawFit};
pub use report::{pattern_report, PatternEntry, PatternId, PatternReport, ReportConfig};
pub use spectrum::singular_value_spectrum;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("hypergraph has no nodes or no hyperedges")]
    EmptyHypergraph,
    #[error("needs at least {need} hyperedges, got {have}")]
    TooFewEdges { have: usize, need: usize },
    #[error("checkpoint {checkpoint} is below 2")]
    CheckpointTooSmall { checkpoint: usize },
    #[error("checkpoint {checkpoint} exceeds hyperedge count {len}")]
    CheckpointBeyondEdges { checkpoint: usize, len: usize },
    #[error("checkpoints must be strictly ascending")]
    CheckpointsNotAscending,
}

/// Frequency histogram over non-negative integer values.
///
/// Entries are kept sorted by value; zero-count values are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DistributionHistogram {
    entries: Vec<(u64, u64)>,
}

impl DistributionHistogram {
    pub fn from_counts(counts: BTreeMap<u64, u64>) -> Self {
        Self {
            entries: counts.into_iter().filter(|&(_, c)| c > 0).collect(),
        }
    }

    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Self {
        let mut counts = BTreeMap::new();
        for v in values {
            *counts.entry(v).or_insert(0u64) += 1;
        }
        Self::from_counts(counts)
    }

    /// (value, count) pairs in ascending value order.
    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, value: u64) -> u64 {
        self.entries
            .binary_search_by_key(&value, |e| e.0)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// Total number of observations.
    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn max_value(&self) -> Option<u64> {
        self.entries.last().map(|e| e.0)
    }

    /// Count-weighted mean of the values. None when empty.
    pub fn mean(&self) -> Option<f64> {
        let total = self.total();
        if total == 0 {
            return None;
        }
        let sum: u128 = self
            .entries
            .iter()
            .map(|&(v, c)| v as u128 * c as u128)
            .sum();
        Some(sum as f64 / total as f64)
    }
}

/// Node degree histogram plus the nodes the histogram cannot show.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDistribution {
    /// Histogram over degrees >= 1.
    pub histogram: DistributionHistogram,
    /// Nodes participating in no hyperedge (degree 0 has no place on a
    /// log axis, so they are reported beside the histogram).
    pub zero_degree_nodes: u64,
}

/// Degree histogram of all nodes, with isolated nodes counted apart.
pub fn degree_distribution(h: &TemporalHypergraph) -> DegreeDistribution {
    let mut counts = BTreeMap::new();
    let mut zero = 0u64;
    for node in h.nodes() {
        let d = h.degree(node) as u64;
        if d == 0 {
            zero += 1;
        } else {
            *counts.entry(d).or_insert(0u64) += 1;
        }
    }
    DegreeDistribution {
        histogram: DistributionHistogram::from_counts(counts),
        zero_degree_nodes: zero,
    }
}

/// Histogram of hyperedge cardinalities.
pub fn hyperedge_size_distribution(h: &TemporalHypergraph) -> DistributionHistogram {
    DistributionHistogram::from_values(h.edges().iter().map(|e| e.size() as u64))
}

/// Histogram of |e_i ∩ e_j| over all hyperedge pairs i < j that share at
/// least one node.
///
/// Walks the incidence index instead of all O(m²) pairs: each pair is
/// counted once, with its overlap accumulated per shared node.
pub fn intersection_size_distribution(h: &TemporalHypergraph) -> DistributionHistogram {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut overlap: HashMap<usize, u64> = HashMap::new();
    for (j, edge) in h.edges().iter().enumerate() {
        overlap.clear();
        for &node in edge.nodes() {
            for &i in h.incident_edges(node) {
                if i >= j {
                    break;
                }
                *overlap.entry(i).or_insert(0) += 1;
            }
        }
        for &shared in overlap.values() {
            *counts.entry(shared).or_insert(0) += 1;
        }
    }
    DistributionHistogram::from_counts(counts)
}

/// Histogram of co-occurrence counts over all node groups of the given
/// size that appear together in at least one hyperedge.
///
/// A group's degree is the number of hyperedges containing every member.
/// Groups larger than every hyperedge yield an empty histogram.
pub fn group_degree_distribution(
    h: &TemporalHypergraph,
    group_size: usize,
) -> DistributionHistogram {
    assert!(group_size >= 2, "group size below 2 is not a group");
    let mut counts: HashMap<Vec<NodeId>, u64> = HashMap::new();
    let mut scratch = Vec::with_capacity(group_size);
    for edge in h.edges() {
        if edge.size() < group_size {
            continue;
        }
        for_each_combination(edge.nodes(), group_size, &mut scratch, 0, &mut |group| {
            *counts.entry(group.to_vec()).or_insert(0) += 1;
        });
    }
    DistributionHistogram::from_values(counts.into_values())
}

/// Enumerates size-k combinations of `items` in lexicographic order.
/// `items` must be sorted; groups are emitted sorted as a consequence.
fn for_each_combination(
    items: &[NodeId],
    k: usize,
    scratch: &mut Vec<NodeId>,
    start: usize,
    f: &mut impl FnMut(&[NodeId]),
) {
    if scratch.len() == k {
        f(scratch);
        return;
    }
    let remaining = k - scratch.len();
    for i in start..=items.len().saturating_sub(remaining) {
        scratch.push(items[i]);
        for_each_combination(items, k, scratch, i + 1, f);
        scratch.pop();
    }
}

/// Temporal locality of hyperedge arrivals against a sliding window.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalLocality {
    /// Mean of the per-edge fractions.
    pub mean: f64,
    /// (edge index t >= 1, fraction of e_t's nodes seen in the previous
    /// min(t, window) hyperedges).
    pub per_edge: Vec<(usize, f64)>,
}

/// For each hyperedge after the first, the fraction of its nodes that
/// already appeared within the last `window` hyperedges, and the mean of
/// those fractions. Needs at least two hyperedges.
pub fn temporal_locality(
    h: &TemporalHypergraph,
    window: usize,
) -> Result<TemporalLocality, PatternError> {
    assert!(window >= 1, "window must cover at least one hyperedge");
    let edges = h.edges();
    if edges.len() < 2 {
        return Err(PatternError::TooFewEdges {
            have: edges.len(),
            need: 2,
        });
    }
    let mut per_edge = Vec::with_capacity(edges.len() - 1);
    let mut sum = 0.0;
    let mut recent: BTreeSet<NodeId> = BTreeSet::new();
    for t in 1..edges.len() {
        recent.clear();
        for prev in &edges[t.saturating_sub(window)..t] {
            recent.extend(prev.nodes().iter().copied());
        }
        let hits = edges[t]
            .nodes()
            .iter()
            .filter(|n| recent.contains(n))
            .count();
        let fraction = hits as f64 / edges[t].size() as f64;
        per_edge.push((t, fraction));
        sum += fraction;
    }
    Ok(TemporalLocality {
        mean: sum / per_edge.len() as f64,
        per_edge,
    })
}

/// Which axis inter-event gaps were measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapBasis {
    /// Hyperedge positions; used when timestamps are absent or all equal.
    EdgeIndex,
    Timestamp,
}

/// Distribution of waiting times between a node's repeat participations.
#[derive(Debug, Clone, PartialEq)]
pub struct InterEventGaps {
    pub histogram: DistributionHistogram,
    /// Absent when the gaps do not support a fit (fewer than two
    /// occupied bins, or no node ever repeats).
    pub fit: Option<PowerLawFit>,
    pub basis: GapBasis,
}

/// Gaps between consecutive participations of the same node, pooled over
/// all nodes, with a power-law fit when one is defined.
///
/// Gaps are timestamp differences when the hypergraph carries
/// informative timestamps, hyperedge index differences otherwise. A
/// hypergraph where no node participates twice yields an empty
/// histogram and no fit.
pub fn persistence_interevent_distribution(h: &TemporalHypergraph) -> InterEventGaps {
    let edges = h.edges();
    let informative = h.has_timestamps() && {
        let mut stamps = edges.iter().map(|e| e.timestamp);
        match stamps.next() {
            Some(first) => stamps.any(|t| t != first),
            None => false,
        }
    };
    let basis = if informative {
        GapBasis::Timestamp
    } else {
        GapBasis::EdgeIndex
    };

    let mut gaps = Vec::new();
    for node in h.nodes() {
        let incident = h.incident_edges(node);
        if incident.len() < 2 {
            continue;
        }
        let mut positions: Vec<u64> = incident
            .iter()
            .map(|&i| match basis {
                GapBasis::Timestamp => edges[i].timestamp,
                GapBasis::EdgeIndex => i as u64,
            })
            .collect();
        positions.sort_unstable();
        gaps.extend(positions.windows(2).map(|w| w[1] - w[0]));
    }
    let histogram = DistributionHistogram::from_values(gaps);
    let fit = fit::fit_power_law(&histogram).ok();
    InterEventGaps {
        histogram,
        fit,
        basis,
    }
}

/// Density of interactions sampled while the hypergraph grows.
#[derive(Debug, Clone, PartialEq)]
pub struct DoiSeries {
    /// (prefix length t, intersecting pairs / C(t, 2)), t ascending.
    pub points: Vec<(usize, f64)>,
}

/// Number of intersecting hyperedge pairs within each prefix of the
/// hyperedge sequence. Checkpoints must be ascending, each in [2, m].
///
/// Exposed as exact integers so the derived densities can be checked
/// without float comparisons.
pub fn intersecting_pair_counts(
    h: &TemporalHypergraph,
    checkpoints: &[usize],
) -> Result<Vec<u64>, PatternError> {
    let m = h.edge_count();
    for pair in checkpoints.windows(2) {
        if pair[0] >= pair[1] {
            return Err(PatternError::CheckpointsNotAscending);
        }
    }
    for &t in checkpoints {
        if t < 2 {
            return Err(PatternError::CheckpointTooSmall { checkpoint: t });
        }
        if t > m {
            return Err(PatternError::CheckpointBeyondEdges {
                checkpoint: t,
                len: m,
            });
        }
    }
    let Some(&last) = checkpoints.last() else {
        return Ok(Vec::new());
    };

    let mut counts = Vec::with_capacity(checkpoints.len());
    let mut next = 0usize;
    let mut intersecting = 0u64;
    let mut partners: BTreeSet<usize> = BTreeSet::new();
    for (j, edge) in h.edges().iter().take(last).enumerate() {
        partners.clear();
        for &node in edge.nodes() {
            for &i in h.incident_edges(node) {
                if i >= j {
                    break;
                }
                partners.insert(i);
            }
        }
        intersecting += partners.len() as u64;
        while next < checkpoints.len() && checkpoints[next] == j + 1 {
            counts.push(intersecting);
            next += 1;
        }
    }
    Ok(counts)
}

/// Fraction of hyperedge pairs sharing a node, at each prefix checkpoint.
pub fn density_of_interactions_series(
    h: &TemporalHypergraph,
    checkpoints: &[usize],
) -> Result<DoiSeries, PatternError> {
    let counts = intersecting_pair_counts(h, checkpoints)?;
    let points = checkpoints
        .iter()
        .zip(counts)
        .map(|(&t, c)| {
            let pairs = (t as u64 * (t as u64 - 1) / 2) as f64;
            (t, c as f64 / pairs)
        })
        .collect();
    Ok(DoiSeries { points })
}

/// Evenly spaced prefix checkpoints for a hypergraph of m >= 2 edges:
/// `count` fractions of m, each clamped to [2, m], deduplicated.
pub fn relative_checkpoints(m: usize, count: usize) -> Vec<usize> {
    assert!(m >= 2, "checkpoints need at least two hyperedges");
    let mut ts = BTreeSet::new();
    for i in 1..=count.max(1) {
        let t = (i as f64 / count.max(1) as f64 * m as f64).round() as usize;
        ts.insert(t.clamp(2, m));
    }
    ts.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hyperedge;

    fn graph(edges: &[&[u64]]) -> TemporalHypergraph {
        let mut h = TemporalHypergraph::new();
        for (t, ids) in edges.iter().enumerate() {
            h.add_hyperedge(Hyperedge::from_ids(ids, t as u64).unwrap());
        }
        h
    }

    fn entries(hist: &DistributionHistogram) -> Vec<(u64, u64)> {
        hist.entries().to_vec()
    }

    #[test]
    fn histogram_basics() {
        let hist = DistributionHistogram::from_values([3, 1, 3, 3]);
        assert_eq!(entries(&hist), vec![(1, 1), (3, 3)]);
        assert_eq!(hist.count(3), 3);
        assert_eq!(hist.count(2), 0);
        assert_eq!(hist.total(), 4);
        assert_eq!(hist.max_value(), Some(3));
        assert_eq!(hist.mean(), Some(2.5));
        assert!(DistributionHistogram::from_values([]).is_empty());
        assert_eq!(DistributionHistogram::default().mean(), None);
    }

    #[test]
    fn degree_distribution_counts_isolated_nodes_apart() {
        // {1,2}, {1,3}: node 1 twice, nodes 2 and 3 once.
        let mut h = graph(&[&[1, 2], &[1, 3]]);
        h.add_node(NodeId(99));
        let dd = degree_distribution(&h);
        assert_eq!(entries(&dd.histogram), vec![(1, 2), (2, 1)]);
        assert_eq!(dd.zero_degree_nodes, 1);
    }

    #[test]
    fn degree_distribution_of_empty_graph() {
        let dd = degree_distribution(&TemporalHypergraph::new());
        assert!(dd.histogram.is_empty());
        assert_eq!(dd.zero_degree_nodes, 0);
    }

    #[test]
    fn size_distribution_counts_cardinalities() {
        let h = graph(&[&[1, 2], &[1, 2, 3], &[4, 5]]);
        assert_eq!(entries(&hyperedge_size_distribution(&h)), vec![(2, 2), (3, 1)]);
        assert!(hyperedge_size_distribution(&TemporalHypergraph::new()).is_empty());
    }

    /// O(m²) reference for the intersection histogram.
    fn brute_intersections(h: &TemporalHypergraph) -> DistributionHistogram {
        let edges = h.edges();
        let mut values = Vec::new();
        for j in 1..edges.len() {
            for i in 0..j {
                let shared = edges[i].intersection_size(&edges[j]);
                if shared > 0 {
                    values.push(shared as u64);
                }
            }
        }
        DistributionHistogram::from_values(values)
    }

    #[test]
    fn intersection_distribution_hand_case() {
        // {1,2,3}, {2,3,4}, {3,4,5}: overlaps 2, 1, 2.
        let h = graph(&[&[1, 2, 3], &[2, 3, 4], &[3, 4, 5]]);
        assert_eq!(
            entries(&intersection_size_distribution(&h)),
            vec![(1, 1), (2, 2)]
        );
    }

    #[test]
    fn intersection_distribution_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for _ in 0..30 {
            let mut h = TemporalHypergraph::new();
            let m = rng.gen_range(2..40);
            for t in 0..m {
                let k = rng.gen_range(2..=5);
                let ids: Vec<u64> = (0..k).map(|_| rng.gen_range(0..20)).collect();
                if let Ok(e) = Hyperedge::from_ids(&ids, t) {
                    h.add_hyperedge(e);
                }
            }
            assert_eq!(intersection_size_distribution(&h), brute_intersections(&h));
        }
    }

    #[test]
    fn intersection_distribution_disjoint_edges_is_empty() {
        let h = graph(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert!(intersection_size_distribution(&h).is_empty());
    }

    #[test]
    fn group_degree_pairs_hand_case() {
        // Pair {1,2} co-occurs twice, the four other pairs once each.
        let h = graph(&[&[1, 2, 3], &[1, 2, 4]]);
        assert_eq!(
            entries(&group_degree_distribution(&h, 2)),
            vec![(1, 4), (2, 1)]
        );
    }

    #[test]
    fn group_degree_triples() {
        let h = graph(&[&[1, 2, 3, 4], &[1, 2, 3]]);
        // Triples of the 4-edge: 4 of them; {1,2,3} appears twice.
        assert_eq!(
            entries(&group_degree_distribution(&h, 3)),
            vec![(1, 3), (2, 1)]
        );
    }

    #[test]
    fn group_size_beyond_edges_gives_empty_histogram() {
        let h = graph(&[&[1, 2], &[2, 3]]);
        assert!(group_degree_distribution(&h, 3).is_empty());
    }

    #[test]
    fn temporal_locality_hand_case() {
        // Window 1: e_1={2,3} shares 2 with {1,2} (1/2); e_2={4,5}
        // shares nothing (0). Mean 0.25.
        let h = graph(&[&[1, 2], &[2, 3], &[4, 5]]);
        let tl = temporal_locality(&h, 1).unwrap();
        assert_eq!(tl.per_edge, vec![(1, 0.5), (2, 0.0)]);
        assert!((tl.mean - 0.25).abs() < 1e-15);
    }

    #[test]
    fn temporal_locality_window_covers_prefix() {
        let h = graph(&[&[1, 2], &[3, 4], &[1, 3]]);
        // Window 10 > t: both nodes of e_2 appeared before.
        let tl = temporal_locality(&h, 10).unwrap();
        assert_eq!(tl.per_edge[1], (2, 1.0));
    }

    #[test]
    fn temporal_locality_needs_two_edges() {
        let h = graph(&[&[1, 2]]);
        assert_eq!(
            temporal_locality(&h, 10),
            Err(PatternError::TooFewEdges { have: 1, need: 2 })
        );
    }

    #[test]
    fn interevent_gaps_on_edge_index() {
        // Timestamps all 0: fall back to index. Node 1 in edges 0, 2, 3.
        let mut h = TemporalHypergraph::new();
        for ids in [&[1u64, 2][..], &[3, 4], &[1, 3], &[1, 5]] {
            h.add_hyperedge(Hyperedge::from_ids(ids, 0).unwrap());
        }
        let gaps = persistence_interevent_distribution(&h);
        assert_eq!(gaps.basis, GapBasis::EdgeIndex);
        // Node 1: gaps 2, 1. Node 3: gap 1.
        assert_eq!(entries(&gaps.histogram), vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn interevent_gaps_on_timestamps() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(Hyperedge::from_ids(&[1, 2], 0).unwrap());
        h.add_hyperedge(Hyperedge::from_ids(&[3, 4], 5).unwrap());
        h.add_hyperedge(Hyperedge::from_ids(&[1, 3], 7).unwrap());
        let gaps = persistence_interevent_distribution(&h);
        assert_eq!(gaps.basis, GapBasis::Timestamp);
        // Node 1 at 0 and 7; node 3 at 5 and 7.
        assert_eq!(entries(&gaps.histogram), vec![(2, 1), (7, 1)]);
    }

    #[test]
    fn interevent_gaps_without_repeats() {
        let h = graph(&[&[1, 2], &[3, 4]]);
        let gaps = persistence_interevent_distribution(&h);
        assert!(gaps.histogram.is_empty());
        assert!(gaps.fit.is_none());
    }

    /// O(t²) reference for intersecting pair counts.
    fn brute_pairs(h: &TemporalHypergraph, t: usize) -> u64 {
        let edges = &h.edges()[..t];
        let mut count = 0;
        for j in 1..t {
            for i in 0..j {
                if edges[i].intersection_size(&edges[j]) > 0 {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn doi_hand_case() {
        // First three edges: only {1,2}~{2,3} intersect. 1 of C(3,2)=3.
        let h = graph(&[&[1, 2], &[2, 3], &[4, 5]]);
        let series = density_of_interactions_series(&h, &[3]).unwrap();
        assert_eq!(series.points, vec![(3, 1.0 / 3.0)]);
    }

    #[test]
    fn doi_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(21);
        for _ in 0..20 {
            let mut h = TemporalHypergraph::new();
            let m = rng.gen_range(5..60);
            for t in 0..m {
                let k = rng.gen_range(2..=4);
                let ids: Vec<u64> = (0..k).map(|_| rng.gen_range(0..25)).collect();
                if let Ok(e) = Hyperedge::from_ids(&ids, t) {
                    h.add_hyperedge(e);
                }
            }
            let m = h.edge_count();
            let checkpoints: Vec<usize> = (2..=m).collect();
            let counts = intersecting_pair_counts(&h, &checkpoints).unwrap();
            for (&t, &c) in checkpoints.iter().zip(&counts) {
                assert_eq!(c, brute_pairs(&h, t), "prefix {t}");
            }
        }
    }

    #[test]
    fn doi_checkpoint_validation() {
        let h = graph(&[&[1, 2], &[2, 3], &[3, 4]]);
        assert_eq!(
            density_of_interactions_series(&h, &[1, 2]),
            Err(PatternError::CheckpointTooSmall { checkpoint: 1 })
        );
        assert_eq!(
            density_of_interactions_series(&h, &[2, 9]),
            Err(PatternError::CheckpointBeyondEdges {
                checkpoint: 9,
                len: 3
            })
        );
        assert_eq!(
            density_of_interactions_series(&h, &[3, 2]),
            Err(PatternError::CheckpointsNotAscending)
        );
        assert!(density_of_interactions_series(&h, &[])
            .unwrap()
            .points
            .is_empty());
    }

    #[test]
    fn relative_checkpoint_spacing() {
        assert_eq!(relative_checkpoints(100, 4), vec![25, 50, 75, 100]);
        assert_eq!(relative_checkpoints(2, 10), vec![2]);
        assert_eq!(relative_checkpoints(10, 3), vec![3, 7, 10]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = TemporalHypergraph> {
            prop::collection::vec(
                (prop::collection::btree_set(0u64..15, 2..5), 0u64..30),
                1..25,
            )
            .prop_map(|edges| {
                let mut h = TemporalHypergraph::new();
                for (ids, t) in edges {
                    let ids: Vec<u64> = ids.into_iter().collect();
                    h.add_hyperedge(Hyperedge::from_ids(&ids, t).unwrap());
                }
                h
            })
        }

        proptest! {
            #[test]
            fn degree_histogram_mass_equals_incidences(h in arb_graph()) {
                let dd = degree_distribution(&h);
                let mass: u64 = dd
                    .histogram
                    .entries()
                    .iter()
                    .map(|&(v, c)| v * c)
                    .sum();
                prop_assert_eq!(mass as usize, h.total_incidences());
            }

            #[test]
            fn size_histogram_total_is_edge_count(h in arb_graph()) {
                prop_assert_eq!(
                    hyperedge_size_distribution(&h).total() as usize,
                    h.edge_count()
                );
            }

            #[test]
            fn intersections_agree_with_brute_force(h in arb_graph()) {
                prop_assert_eq!(
                    intersection_size_distribution(&h),
                    brute_intersections(&h)
                );
            }

            #[test]
            fn locality_fractions_lie_in_unit_interval(h in arb_graph()) {
                if let Ok(tl) = temporal_locality(&h, 5) {
                    prop_assert!(tl.mean >= 0.0 && tl.mean <= 1.0);
                    for (_, f) in tl.per_edge {
                        prop_assert!((0.0..=1.0).contains(&f));
                    }
                }
            }

            #[test]
            fn doi_lies_in_unit_interval(h in arb_graph()) {
                let m = h.edge_count();
                if m >= 2 {
                    let series =
                        density_of_interactions_series(&h, &relative_checkpoints(m, 10))
                            .unwrap();
                    for (_, doi) in series.points {
                        prop_assert!((0.0..=1.0).contains(&doi));
                    }
                }
            }

            #[test]
            fn group_degree_pair_mass_counts_pairs(h in arb_graph()) {
                // Σ (group degree) over pair groups = Σ C(|e|, 2).
                let hist = group_degree_distribution(&h, 2);
                let mass: u64 = hist.entries().iter().map(|&(v, c)| v * c).sum();
                let expected: u64 = h
                    .edges()
                    .iter()
                    .map(|e| (e.size() * (e.size() - 1) / 2) as u64)
                    .sum();
                prop_assert_eq!(mass, expected);
            }
        }
    }
}
