//! Minimum spanning trees over sample subsets and depth-limited BFS on them.
//!
//! Trees are built with Kruskal's algorithm over the complete Euclidean graph.
//! Candidate edges are ordered by `(weight, min endpoint, max endpoint)`, a
//! strict total order, so the resulting tree is unique and reproducible even
//! with duplicate samples or equal distances.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use crate::data::FeatureMatrix;
use crate::error::{Error, Result};
use crate::geometry::{self, Edge};

/// Disjoint-set forest with path compression and union by rank.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Kruskal ordering key.
#[inline]
pub(crate) fn edge_order(x: &Edge, y: &Edge) -> Ordering {
    x.weight
        .total_cmp(&y.weight)
        .then_with(|| x.ordered_endpoints().cmp(&y.ordered_endpoints()))
}

/// A spanning tree over a subset of the rows of a [`FeatureMatrix`].
///
/// Node ids and edge endpoints are row indices of the owning matrix.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    nodes: Vec<usize>,
    edges: Vec<Edge>,
    /// Per node position: incident edge indices, ordered by neighbor id.
    adjacency: Vec<Vec<usize>>,
    position: HashMap<usize, usize>,
}

impl SpanningTree {
    /// Runs Kruskal over `candidates`, which must already be sorted by
    /// [`edge_order`] and only reference ids in `nodes`.
    pub(crate) fn kruskal<'a>(
        nodes: Vec<usize>,
        candidates: impl IntoIterator<Item = &'a Edge>,
    ) -> SpanningTree {
        let position: HashMap<usize, usize> =
            nodes.iter().enumerate().map(|(p, &id)| (id, p)).collect();
        let need = nodes.len().saturating_sub(1);
        let mut sets = DisjointSet::new(nodes.len());
        let mut edges = Vec::with_capacity(need);
        for e in candidates {
            if edges.len() == need {
                break;
            }
            if sets.union(position[&e.a], position[&e.b]) {
                edges.push(*e);
            }
        }
        SpanningTree::from_sorted_edges(nodes, position, edges)
    }

    /// Prim's algorithm on a dense weight function, O(n^2). Uses the same
    /// strict edge order as [`SpanningTree::kruskal`], under which the
    /// minimum spanning tree is unique, so both return the same tree.
    pub(crate) fn prim(nodes: Vec<usize>, weight: impl Fn(usize, usize) -> f64) -> SpanningTree {
        let n = nodes.len();
        let position: HashMap<usize, usize> =
            nodes.iter().enumerate().map(|(p, &id)| (id, p)).collect();
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        if n > 1 {
            let mut in_tree = vec![false; n];
            // cheapest known link of each outside node, as an edge into the tree
            let mut link: Vec<Edge> = (0..n).map(|p| Edge::new(nodes[0], nodes[p], weight(nodes[0], nodes[p]))).collect();
            in_tree[0] = true;
            for _ in 1..n {
                let mut next = usize::MAX;
                for p in 0..n {
                    if !in_tree[p] && (next == usize::MAX || edge_order(&link[p], &link[next]) == Ordering::Less) {
                        next = p;
                    }
                }
                in_tree[next] = true;
                edges.push(link[next]);
                for p in 0..n {
                    if !in_tree[p] {
                        // endpoints in node-list order, as in build_mst
                        let (a, b) = if next < p { (nodes[next], nodes[p]) } else { (nodes[p], nodes[next]) };
                        let e = Edge::new(a, b, weight(a, b));
                        if edge_order(&e, &link[p]) == Ordering::Less {
                            link[p] = e;
                        }
                    }
                }
            }
            edges.sort_unstable_by(edge_order);
        }
        SpanningTree::from_sorted_edges(nodes, position, edges)
    }

    fn from_sorted_edges(nodes: Vec<usize>, position: HashMap<usize, usize>, edges: Vec<Edge>) -> SpanningTree {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for (k, e) in edges.iter().enumerate() {
            adjacency[position[&e.a]].push(k);
            adjacency[position[&e.b]].push(k);
        }
        for (p, list) in adjacency.iter_mut().enumerate() {
            let id = nodes[p];
            list.sort_by_key(|&k| edges[k].other(id));
        }
        SpanningTree {
            nodes,
            edges,
            adjacency,
            position,
        }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.position.contains_key(&node)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    pub fn edge_weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    /// Edges touching `node`, ordered by the id of the opposite endpoint.
    pub fn incident_edges(&self, node: usize) -> impl Iterator<Item = &Edge> + '_ {
        let list = self
            .position
            .get(&node)
            .map(|&p| self.adjacency[p].as_slice())
            .unwrap_or(&[]);
        list.iter().map(move |&k| &self.edges[k])
    }

    /// All nodes within `depth` hops of `seed`, with the tree edges that
    /// reach them. Neighbors are expanded in ascending id order.
    pub fn bfs_from(&self, seed: usize, depth: usize) -> Result<BfsNeighborhood> {
        let start = *self
            .position
            .get(&seed)
            .ok_or_else(|| Error::InvalidInput(format!("node {} is not in the tree", seed)))?;
        let mut hops = vec![usize::MAX; self.nodes.len()];
        hops[start] = 0;
        let mut queue = VecDeque::from([start]);
        let mut nodes = vec![seed];
        let mut edges = Vec::new();
        while let Some(p) = queue.pop_front() {
            if hops[p] >= depth {
                continue;
            }
            let id = self.nodes[p];
            for &k in &self.adjacency[p] {
                let e = self.edges[k];
                let q = self.position[&e.other(id)];
                if hops[q] == usize::MAX {
                    hops[q] = hops[p] + 1;
                    nodes.push(self.nodes[q]);
                    edges.push(e);
                    queue.push_back(q);
                }
            }
        }
        Ok(BfsNeighborhood {
            seed,
            depth,
            nodes,
            edges,
        })
    }

    /// Tree node closest to `x`; ties go to the lowest id.
    pub fn nearest_node(&self, points: &FeatureMatrix, x: &[f64]) -> Result<usize> {
        points.check_sample(x)?;
        let mut best: Option<(f64, usize)> = None;
        for &id in &self.nodes {
            let d = geometry::distance(points.row(id), x);
            let better = match best {
                None => true,
                Some((bd, bid)) => d < bd || (d == bd && id < bid),
            };
            if better {
                best = Some((d, id));
            }
        }
        best.map(|(_, id)| id).ok_or(Error::Empty("spanning tree"))
    }

    /// Smallest edge distance from `x` to the edges incident to `node`, or
    /// the point distance to `node` when it has no edges.
    pub(crate) fn incident_distance(&self, points: &FeatureMatrix, node: usize, x: &[f64]) -> f64 {
        let mut best = f64::INFINITY;
        let mut any = false;
        for e in self.incident_edges(node) {
            any = true;
            best = best.min(geometry::edge_distance(x, points.row(e.a), points.row(e.b)));
        }
        if any {
            best
        } else {
            geometry::distance(x, points.row(node))
        }
    }

    /// True when the edge set connects every node without cycles.
    pub fn is_spanning_tree(&self) -> bool {
        if self.edges.len() + 1 != self.nodes.len() {
            return false;
        }
        let mut sets = DisjointSet::new(self.nodes.len());
        self.edges.iter().all(|e| match (self.position.get(&e.a), self.position.get(&e.b)) {
            (Some(&a), Some(&b)) => sets.union(a, b),
            _ => false,
        })
    }
}

/// Nodes and edges reached by a depth-limited BFS over a [`SpanningTree`].
#[derive(Debug, Clone, PartialEq)]
pub struct BfsNeighborhood {
    pub seed: usize,
    pub depth: usize,
    /// Visited nodes in BFS order, starting with `seed`.
    pub nodes: Vec<usize>,
    /// Tree edges traversed, one per visited node after the seed.
    pub edges: Vec<Edge>,
}

impl BfsNeighborhood {
    pub fn edge_weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }
}

/// Minimum spanning tree of the complete Euclidean graph over `subset`.
pub fn build_mst(points: &FeatureMatrix, subset: &[usize]) -> Result<SpanningTree> {
    if subset.is_empty() {
        return Err(Error::Empty("node subset"));
    }
    let n = points.n_samples();
    if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidInput(format!(
            "node {} out of range for {} samples",
            bad, n
        )));
    }
    let mut seen = std::collections::HashSet::with_capacity(subset.len());
    if let Some(&dup) = subset.iter().find(|&&i| !seen.insert(i)) {
        return Err(Error::InvalidInput(format!("node {} listed twice", dup)));
    }
    let mut candidates = Vec::with_capacity(subset.len() * (subset.len() - 1) / 2);
    for (p, &a) in subset.iter().enumerate() {
        for &b in &subset[p + 1..] {
            candidates.push(Edge::new(a, b, geometry::distance(points.row(a), points.row(b))));
        }
    }
    candidates.sort_unstable_by(edge_order);
    Ok(SpanningTree::kruskal(subset.to_vec(), &candidates))
}
