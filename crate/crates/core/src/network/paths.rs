//! Loop-free k-shortest paths (Yen) over the undirected topology.
//!
//! Paths are ordered by total effective length; equal lengths fall back to
//! the lexicographic order of their node sequences, and the inner Dijkstra
//! applies the same rule so the enumeration order is fully deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use super::{Direction, NodeIdx, Topology};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub nodes: Vec<NodeIdx>,
    pub length_km: f64,
}

impl Path {
    /// (link index, traversal direction) for every hop.
    pub fn hops(&self, topo: &Topology) -> Vec<(usize, Direction)> {
        self.nodes
            .windows(2)
            .map(|w| topo.link_between(w[0], w[1]).expect("path follows topology links"))
            .collect()
    }

    fn key(&self) -> PathKey {
        PathKey(self.length_km, self.nodes.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
struct PathKey(f64, Vec<NodeIdx>);

impl Eq for PathKey {}

impl Ord for PathKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then_with(|| self.1.cmp(&other.1))
    }
}

impl PartialOrd for PathKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn path_length(topo: &Topology, nodes: &[NodeIdx]) -> f64 {
    nodes
        .windows(2)
        .map(|w| {
            let (link, _) = topo.link_between(w[0], w[1]).unwrap();
            topo.effective_length_km(link)
        })
        .sum()
}

/// Shortest path avoiding `banned_nodes` and `banned_edges` (unordered pairs).
fn dijkstra(
    topo: &Topology,
    src: NodeIdx,
    dst: NodeIdx,
    banned_nodes: &[bool],
    banned_edges: &BTreeSet<(NodeIdx, NodeIdx)>,
) -> Option<Vec<NodeIdx>> {
    let n = topo.node_count();
    let mut best: Vec<Option<PathKey>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    let start = PathKey(0.0, vec![src]);
    best[src] = Some(start.clone());
    heap.push(std::cmp::Reverse(start));
    while let Some(std::cmp::Reverse(PathKey(dist, nodes))) = heap.pop() {
        let u = *nodes.last().unwrap();
        if best[u].as_ref().is_some_and(|b| *b < PathKey(dist, nodes.clone())) {
            continue;
        }
        if u == dst {
            return Some(nodes);
        }
        for &(v, link) in topo.neighbors(u) {
            if banned_nodes[v] || nodes.contains(&v) {
                continue;
            }
            if banned_edges.contains(&(u.min(v), u.max(v))) {
                continue;
            }
            let mut next = nodes.clone();
            next.push(v);
            let cand = PathKey(dist + topo.effective_length_km(link), next);
            if best[v].as_ref().is_none_or(|b| cand < *b) {
                best[v] = Some(cand.clone());
                heap.push(std::cmp::Reverse(cand));
            }
        }
    }
    None
}

pub fn k_shortest_paths(topo: &Topology, src: NodeIdx, dst: NodeIdx, k: usize) -> Vec<Path> {
    if src == dst || k == 0 || src >= topo.node_count() || dst >= topo.node_count() {
        return Vec::new();
    }
    let no_nodes = vec![false; topo.node_count()];
    let Some(first) = dijkstra(topo, src, dst, &no_nodes, &BTreeSet::new()) else {
        return Vec::new();
    };
    let mut accepted = vec![Path {
        length_km: path_length(topo, &first),
        nodes: first,
    }];
    let mut candidates: BTreeSet<PathKey> = BTreeSet::new();

    while accepted.len() < k {
        let prev = accepted.last().unwrap().nodes.clone();
        for i in 0..prev.len() - 1 {
            let root = &prev[..=i];
            let spur = prev[i];
            let mut banned_edges = BTreeSet::new();
            for p in &accepted {
                if p.nodes.len() > i + 1 && p.nodes[..=i] == *root {
                    let (a, b) = (p.nodes[i], p.nodes[i + 1]);
                    banned_edges.insert((a.min(b), a.max(b)));
                }
            }
            let mut banned_nodes = vec![false; topo.node_count()];
            for &r in &root[..i] {
                banned_nodes[r] = true;
            }
            if let Some(tail) = dijkstra(topo, spur, dst, &banned_nodes, &banned_edges) {
                let mut nodes = root[..i].to_vec();
                nodes.extend(tail);
                let key = PathKey(path_length(topo, &nodes), nodes);
                if !accepted.iter().any(|p| p.nodes == key.1) {
                    candidates.insert(key);
                }
            }
        }
        let Some(PathKey(length_km, nodes)) = candidates.pop_first() else {
            break;
        };
        accepted.push(Path { nodes, length_km });
    }
    debug_assert!(accepted.windows(2).all(|w| w[0].key() <= w[1].key()));
    accepted
}
