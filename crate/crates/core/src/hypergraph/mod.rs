//! Temporal hypergraph data model.
//!
//! A [`TemporalHypergraph`] is an ordered multiset of timestamped
//! hyperedges over a growing set of integer node ids. The edge list keeps
//! insertion order (generation order), duplicate node sets are permitted
//! (real event streams repeat groups), and the node set never shrinks:
//! removing edges leaves isolated nodes in place. An inverted index from
//! node to incident edge positions is maintained alongside the edge list
//! so degree and local-context queries stay cheap.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub mod format;

/// Stable integer node identifier.
///
/// Ids are never renumbered by mutation; a dense relabeling happens only
/// through [`TemporalHypergraph::compact`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for NodeId {
    fn from(id: u64) -> Self {
        NodeId(id)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("hyperedge must contain at least one node")]
    EmptyEdge,
    #[error("edge index {index} out of range (m = {len})")]
    IndexOutOfRange { index: usize, len: usize },
}

/// A timestamped hyperedge: a non-empty node set plus an event time.
///
/// Nodes are stored sorted ascending without duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    nodes: Vec<NodeId>,
    pub timestamp: u64,
}

impl Hyperedge {
    /// Builds an edge from any node collection; input is deduplicated and
    /// sorted. Empty input is rejected.
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        timestamp: u64,
    ) -> Result<Self, HypergraphError> {
        let mut nodes: Vec<NodeId> = nodes.into_iter().collect();
        nodes.sort_unstable();
        nodes.dedup();
        if nodes.is_empty() {
            return Err(HypergraphError::EmptyEdge);
        }
        Ok(Self { nodes, timestamp })
    }

    /// Convenience constructor from raw ids.
    pub fn from_ids(ids: &[u64], timestamp: u64) -> Result<Self, HypergraphError> {
        Self::new(ids.iter().copied().map(NodeId), timestamp)
    }

    /// Member nodes, ascending.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }

    /// Number of shared nodes with `other` (sorted-merge walk).
    pub fn intersection_size(&self, other: &Hyperedge) -> usize {
        let (mut i, mut j, mut shared) = (0, 0, 0);
        while i < self.nodes.len() && j < other.nodes.len() {
            match self.nodes[i].cmp(&other.nodes[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        shared
    }

    /// True when both edges cover exactly the same node set (timestamps
    /// are ignored; duplicates in the event-stream sense).
    pub fn same_nodes(&self, other: &Hyperedge) -> bool {
        self.nodes == other.nodes
    }
}

/// Ordered multiset of timestamped hyperedges over a node set.
#[derive(Debug, Clone)]
pub struct TemporalHypergraph {
    nodes: BTreeSet<NodeId>,
    edges: Vec<Hyperedge>,
    /// Node -> incident edge positions, ascending. Mirrors `edges` exactly.
    incidence: HashMap<NodeId, Vec<usize>>,
    /// False for order-only streams loaded from a `static` file; such
    /// graphs carry insertion indices as placeholder timestamps and the
    /// time-dependent patterns are not applicable to them.
    timestamped: bool,
}

impl Default for TemporalHypergraph {
    fn default() -> Self {
        Self::new()
    }
}

impl PartialEq for TemporalHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.edges == other.edges
            && self.timestamped == other.timestamped
    }
}

impl Eq for TemporalHypergraph {}

impl TemporalHypergraph {
    pub fn new() -> Self {
        Self {
            nodes: BTreeSet::new(),
            edges: Vec::new(),
            incidence: HashMap::new(),
            timestamped: true,
        }
    }

    /// Empty hypergraph with a pre-registered node set (isolated nodes are
    /// representable in memory even though the text format drops them).
    pub fn with_nodes(nodes: impl IntoIterator<Item = NodeId>) -> Self {
        let mut h = Self::new();
        for v in nodes {
            h.add_node(v);
        }
        h
    }

    /// Order of the hypergraph, n = |V|.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Size of the hypergraph, m = |E|.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().copied()
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.nodes.contains(&v)
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> Option<&Hyperedge> {
        self.edges.get(index)
    }

    /// Whether edge timestamps carry event times (as opposed to being
    /// placeholder insertion indices from an order-only source).
    pub fn has_timestamps(&self) -> bool {
        self.timestamped
    }

    pub(crate) fn set_timestamped(&mut self, timestamped: bool) {
        self.timestamped = timestamped;
    }

    /// Registers an isolated node. Returns false if it was already present.
    pub fn add_node(&mut self, v: NodeId) -> bool {
        self.nodes.insert(v)
    }

    /// Appends an edge, registering any new nodes. Returns its position.
    pub fn add_hyperedge(&mut self, edge: Hyperedge) -> usize {
        let index = self.edges.len();
        for &v in edge.nodes() {
            self.nodes.insert(v);
            self.incidence.entry(v).or_default().push(index);
        }
        self.edges.push(edge);
        index
    }

    /// Removes the edges at `indices`. Remaining edges keep their relative
    /// order (and their timestamps); the node set is left untouched, so
    /// nodes orphaned by the removal stay in V. Fails without mutating on
    /// any out-of-range index.
    pub fn remove_hyperedges(
        &mut self,
        indices: &BTreeSet<usize>,
    ) -> Result<usize, HypergraphError> {
        if let Some(&worst) = indices.iter().next_back() {
            if worst >= self.edges.len() {
                return Err(HypergraphError::IndexOutOfRange {
                    index: worst,
                    len: self.edges.len(),
                });
            }
        }
        let mut keep = 0usize;
        let mut cursor = 0usize;
        self.edges.retain(|_| {
            let dropped = indices.contains(&cursor);
            cursor += 1;
            if !dropped {
                keep += 1;
            }
            !dropped
        });
        self.rebuild_incidence();
        Ok(indices.len())
    }

    fn rebuild_incidence(&mut self) {
        self.incidence.clear();
        for (index, edge) in self.edges.iter().enumerate() {
            for &v in edge.nodes() {
                self.incidence.entry(v).or_default().push(index);
            }
        }
    }

    /// Number of edges containing `v`, duplicates included; 0 for unknown
    /// nodes.
    pub fn degree(&self, v: NodeId) -> usize {
        self.incidence.get(&v).map_or(0, Vec::len)
    }

    /// Positions of the edges containing `v`, ascending.
    pub fn incident_edges(&self, v: NodeId) -> &[usize] {
        self.incidence.get(&v).map_or(&[], Vec::as_slice)
    }

    /// Total incidence count Σ_e |e| (also the handshake sum Σ_v deg(v)).
    pub fn total_incidences(&self) -> usize {
        self.edges.iter().map(Hyperedge::size).sum()
    }

    pub fn max_timestamp(&self) -> Option<u64> {
        self.edges.iter().map(|e| e.timestamp).max()
    }

    /// Sparse incidence matrix with rows ordered by ascending node id.
    pub fn incidence_matrix(&self) -> SparseIncidence {
        let node_order: Vec<NodeId> = self.nodes.iter().copied().collect();
        let row_of: HashMap<NodeId, usize> = node_order
            .iter()
            .enumerate()
            .map(|(row, &v)| (v, row))
            .collect();
        let columns = self
            .edges
            .iter()
            .map(|e| e.nodes().iter().map(|v| row_of[v]).collect())
            .collect();
        SparseIncidence { node_order, columns }
    }

    /// The most recent edges containing `v` (highest position first),
    /// truncated to `max_edges`, plus the node's degree.
    pub fn local_context(&self, v: NodeId, max_edges: usize) -> LocalContext<'_> {
        let postings = self.incident_edges(v);
        let recent = postings
            .iter()
            .rev()
            .take(max_edges)
            .map(|&index| (index, &self.edges[index]))
            .collect();
        LocalContext {
            degree: postings.len(),
            recent,
        }
    }

    /// Renumbers nodes densely to 0..n-1 preserving ascending order, and
    /// rewrites all edges. Returns the old-to-new mapping.
    pub fn compact(&mut self) -> BTreeMap<NodeId, NodeId> {
        let mapping: BTreeMap<NodeId, NodeId> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, NodeId(new as u64)))
            .collect();
        self.nodes = mapping.values().copied().collect();
        for edge in &mut self.edges {
            for v in &mut edge.nodes {
                *v = mapping[v];
            }
            // Ascending order is preserved by a monotone relabeling.
        }
        self.rebuild_incidence();
        mapping
    }
}

/// Recency-ordered neighborhood summary used to brief the generator.
#[derive(Debug, Clone)]
pub struct LocalContext<'a> {
    pub degree: usize,
    /// (edge position, edge), most recent first.
    pub recent: Vec<(usize, &'a Hyperedge)>,
}

/// Sparse binary incidence matrix: n rows (nodes, ascending id) by m
/// columns (edges, list order).
#[derive(Debug, Clone)]
pub struct SparseIncidence {
    node_order: Vec<NodeId>,
    /// Per column, the member row indices sorted ascending.
    columns: Vec<Vec<usize>>,
}

impl SparseIncidence {
    pub fn n_rows(&self) -> usize {
        self.node_order.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn node_order(&self) -> &[NodeId] {
        &self.node_order
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        let mut sums = vec![0u64; self.n_rows()];
        for column in &self.columns {
            for &row in column {
                sums[row] += 1;
            }
        }
        sums
    }

    pub fn col_sums(&self) -> Vec<u64> {
        self.columns.iter().map(|c| c.len() as u64).collect()
    }

    /// y = M x (x indexed by column, y by row).
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n_cols());
        debug_assert_eq!(y.len(), self.n_rows());
        y.fill(0.0);
        for (col, column) in self.columns.iter().enumerate() {
            let xc = x[col];
            for &row in column {
                y[row] += xc;
            }
        }
    }

    /// y = Mᵀ x (x indexed by row, y by column).
    pub fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n_rows());
        debug_assert_eq!(y.len(), self.n_cols());
        for (col, column) in self.columns.iter().enumerate() {
            y[col] = column.iter().map(|&row| x[row]).sum();
        }
    }

    /// Dense copy, row-major. Intended for small matrices in tests and
    /// reference computations.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n_cols()]; self.n_rows()];
        for (col, column) in self.columns.iter().enumerate() {
            for &row in column {
                dense[row][col] = 1.0;
            }
        }
        dense
    }
}

/// Attribute card for one entity: the id, an ordered key/value attribute
/// list (unique keys), and an optional free-text persona.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityProfile {
    pub id: NodeId,
    pub attributes: Vec<(String, String)>,
    pub persona: String,
}

impl EntityProfile {
    pub fn new(
        id: NodeId,
        attributes: Vec<(String, String)>,
        persona: impl Into<String>,
    ) -> Result<Self, ProfileError> {
        let mut seen = BTreeSet::new();
        for (key, _) in &attributes {
            if !seen.insert(key.as_str()) {
                return Err(ProfileError::DuplicateKey {
                    id,
                    key: key.clone(),
                });
            }
        }
        Ok(Self {
            id,
            attributes,
            persona: persona.into(),
        })
    }

    /// "key=value; key=value" line used in prompts; "(none)" when empty.
    pub fn attribute_summary(&self) -> String {
        if self.attributes.is_empty() {
            return "(none)".to_owned();
        }
        self.attributes
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProfileError {
    #[error("profile {id}: duplicate attribute key {key:?}")]
    DuplicateKey { id: NodeId, key: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(ids: &[u64], ts: u64) -> Hyperedge {
        Hyperedge::from_ids(ids, ts).unwrap()
    }

    #[test]
    fn hyperedge_normalizes_input() {
        let e = edge(&[2, 1, 1], 0);
        assert_eq!(e.nodes(), &[NodeId(1), NodeId(2)]);
        assert_eq!(e.size(), 2);
    }

    #[test]
    fn empty_hyperedge_rejected() {
        assert_eq!(
            Hyperedge::new(std::iter::empty(), 0),
            Err(HypergraphError::EmptyEdge)
        );
    }

    #[test]
    fn add_returns_successive_indices_and_allows_duplicates() {
        let mut h = TemporalHypergraph::new();
        assert_eq!(h.add_hyperedge(edge(&[1, 2], 0)), 0);
        assert_eq!(h.add_hyperedge(edge(&[1, 2], 1)), 1);
        assert_eq!(h.node_count(), 2);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.degree(NodeId(1)), 2);
    }

    #[test]
    fn degree_counts_multiset_membership() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(edge(&[1, 2], 0));
        h.add_hyperedge(edge(&[1, 3], 1));
        assert_eq!(h.degree(NodeId(1)), 2);
        assert_eq!(h.degree(NodeId(3)), 1);
        assert_eq!(h.degree(NodeId(99)), 0);
    }

    #[test]
    fn removal_keeps_order_and_nodes() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(edge(&[1, 2], 0));
        h.add_hyperedge(edge(&[3, 4], 1));
        h.add_hyperedge(edge(&[5, 6], 2));
        let removed = h
            .remove_hyperedges(&BTreeSet::from([1]))
            .unwrap();
        assert_eq!(removed, 1);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.edges()[0].nodes(), &[NodeId(1), NodeId(2)]);
        assert_eq!(h.edges()[1].nodes(), &[NodeId(5), NodeId(6)]);
        // Orphaned nodes survive.
        assert_eq!(h.node_count(), 6);
        assert_eq!(h.degree(NodeId(3)), 0);
    }

    #[test]
    fn removal_out_of_range_is_atomic() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(edge(&[1, 2], 0));
        let before = h.clone();
        let err = h.remove_hyperedges(&BTreeSet::from([0, 99])).unwrap_err();
        assert_eq!(err, HypergraphError::IndexOutOfRange { index: 99, len: 1 });
        assert_eq!(h, before);
    }

    #[test]
    fn remove_empty_set_is_noop() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(edge(&[1, 2], 0));
        assert_eq!(h.remove_hyperedges(&BTreeSet::new()).unwrap(), 0);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn incidence_matrix_sums() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(edge(&[1, 2], 0));
        h.add_hyperedge(edge(&[2, 3], 1));
        let m = h.incidence_matrix();
        assert_eq!(m.n_rows(), 3);
        assert_eq!(m.n_cols(), 2);
        assert_eq!(m.col_sums(), vec![2, 2]);
        assert_eq!(m.row_sums(), vec![1, 2, 1]);
    }

    #[test]
    fn incidence_matrix_single_and_empty() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(edge(&[1], 0));
        let m = h.incidence_matrix();
        assert_eq!((m.n_rows(), m.n_cols()), (1, 1));
        assert_eq!(m.to_dense(), vec![vec![1.0]]);

        let empty = TemporalHypergraph::new().incidence_matrix();
        assert_eq!((empty.n_rows(), empty.n_cols()), (0, 0));
    }

    #[test]
    fn matvec_agrees_with_dense() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(edge(&[1, 2, 4], 0));
        h.add_hyperedge(edge(&[2, 3], 1));
        h.add_hyperedge(edge(&[1, 4], 2));
        let m = h.incidence_matrix();
        let dense = m.to_dense();
        let x = [0.5, -1.25, 2.0];
        let mut y = vec![0.0; m.n_rows()];
        m.apply(&x, &mut y);
        for (row, dense_row) in dense.iter().enumerate() {
            let want: f64 = dense_row.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!((y[row] - want).abs() < 1e-12);
        }
        let xt = [1.0, 2.0, 3.0, 4.0];
        let mut yt = vec![0.0; m.n_cols()];
        m.apply_transpose(&xt, &mut yt);
        for (col, &got) in yt.iter().enumerate() {
            let want: f64 = dense.iter().zip(&xt).map(|(row, b)| row[col] * b).sum();
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn local_context_is_recency_ordered_and_truncated() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(edge(&[1, 2], 0));
        h.add_hyperedge(edge(&[3, 4], 1));
        h.add_hyperedge(edge(&[5, 6], 2));
        h.add_hyperedge(edge(&[7, 8], 3));
        h.add_hyperedge(edge(&[1, 9], 4));
        let ctx = h.local_context(NodeId(1), 1);
        assert_eq!(ctx.degree, 2);
        assert_eq!(ctx.recent.len(), 1);
        assert_eq!(ctx.recent[0].0, 4);

        let zero = h.local_context(NodeId(1), 0);
        assert_eq!(zero.degree, 2);
        assert!(zero.recent.is_empty());

        let isolated = h.local_context(NodeId(42), 5);
        assert_eq!(isolated.degree, 0);
        assert!(isolated.recent.is_empty());
    }

    #[test]
    fn compact_renumbers_densely() {
        let mut h = TemporalHypergraph::new();
        h.add_hyperedge(edge(&[10, 30], 0));
        h.add_hyperedge(edge(&[30, 700], 1));
        let mapping = h.compact();
        assert_eq!(mapping[&NodeId(10)], NodeId(0));
        assert_eq!(mapping[&NodeId(30)], NodeId(1));
        assert_eq!(mapping[&NodeId(700)], NodeId(2));
        assert_eq!(h.edges()[1].nodes(), &[NodeId(1), NodeId(2)]);
        assert_eq!(h.degree(NodeId(1)), 2);
    }

    #[test]
    fn intersection_size_walk() {
        let a = edge(&[1, 2, 3], 0);
        let b = edge(&[2, 3, 4], 0);
        let c = edge(&[7, 8], 0);
        assert_eq!(a.intersection_size(&b), 2);
        assert_eq!(a.intersection_size(&c), 0);
        assert_eq!(a.intersection_size(&a), 3);
    }

    #[test]
    fn profile_rejects_duplicate_keys() {
        let err = EntityProfile::new(
            NodeId(1),
            vec![
                ("role".into(), "x".into()),
                ("role".into(), "y".into()),
            ],
            "",
        )
        .unwrap_err();
        assert!(matches!(err, ProfileError::DuplicateKey { .. }));
    }

    #[test]
    fn structure_is_send_and_sync() {
        fn check<T: Send + Sync>() {}
        check::<TemporalHypergraph>();
        check::<SparseIncidence>();
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Random edge list over a small id universe; sizes 1..=6.
        fn edge_list() -> impl Strategy<Value = Vec<(u64, Vec<u64>)>> {
            prop::collection::vec(
                (
                    0u64..100,
                    prop::collection::vec(0u64..40, 1..=6),
                ),
                0..60,
            )
        }

        fn build(edges: &[(u64, Vec<u64>)]) -> TemporalHypergraph {
            let mut h = TemporalHypergraph::new();
            for (ts, ids) in edges {
                h.add_hyperedge(Hyperedge::from_ids(ids, *ts).unwrap());
            }
            h
        }

        proptest! {
            #[test]
            fn handshake_identity(edges in edge_list()) {
                let h = build(&edges);
                let by_nodes: usize = h.nodes().map(|v| h.degree(v)).sum();
                prop_assert_eq!(by_nodes, h.total_incidences());
            }

            #[test]
            fn index_matches_dense_row_sums(edges in edge_list()) {
                let h = build(&edges);
                let m = h.incidence_matrix();
                let sums = m.row_sums();
                for (row, &v) in m.node_order().iter().enumerate() {
                    prop_assert_eq!(sums[row] as usize, h.degree(v));
                }
            }

            #[test]
            fn remove_then_readd_restores_multiset(
                edges in edge_list(),
                selector in prop::collection::vec(any::<bool>(), 60),
            ) {
                let mut h = build(&edges);
                let victims: BTreeSet<usize> = (0..h.edge_count())
                    .filter(|&i| selector[i])
                    .collect();
                let removed: Vec<Hyperedge> = victims
                    .iter()
                    .map(|&i| h.edges()[i].clone())
                    .collect();
                h.remove_hyperedges(&victims).unwrap();
                for e in removed {
                    h.add_hyperedge(e);
                }
                let mut got: Vec<Vec<NodeId>> =
                    h.edges().iter().map(|e| e.nodes().to_vec()).collect();
                let mut want: Vec<Vec<NodeId>> =
                    edges.iter().map(|(ts, ids)| {
                        Hyperedge::from_ids(ids, *ts).unwrap().nodes().to_vec()
                    }).collect();
                got.sort();
                want.sort();
                prop_assert_eq!(got, want);
            }
        }
    }
}
