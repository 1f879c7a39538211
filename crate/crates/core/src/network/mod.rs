//! Fiber mesh topology, demand models, and QKD routing over trusted relays.

mod paths;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use paths::{k_shortest_paths, Path};

use crate::error::{Error, Result};

pub type NodeIdx = usize;
pub type LinkIdx = usize;

/// Traversal direction of a bidirectional link; each direction is its own fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// From `Link::a` to `Link::b`.
    Forward,
    Reverse,
}

impl Direction {
    pub fn index(self) -> usize {
        match self {
            Direction::Forward => 0,
            Direction::Reverse => 1,
        }
    }
}

/// Accepted range of the distance scale factor.
pub const LAMBDA_RANGE: (f64, f64) = (1e-3, 1.0);

/// Parsed, not yet validated topology description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologySpec {
    /// (id, name)
    pub nodes: Vec<(u32, String)>,
    /// (node id a, node id b, base length km)
    pub links: Vec<(u32, u32, f64)>,
}

impl TopologySpec {
    /// Seven-city Spanish reference mesh.
    pub fn spain7() -> Self {
        let nodes = [
            (1, "Madrid"),
            (2, "Zaragoza"),
            (3, "Barcelona"),
            (4, "Valencia"),
            (5, "Murcia"),
            (6, "Málaga"),
            (7, "Sevilla"),
        ];
        let links = [
            (3, 4, 303.0),
            (4, 5, 177.0),
            (5, 6, 323.0),
            (6, 7, 158.0),
            (7, 1, 391.0),
            (1, 2, 272.0),
            (2, 3, 257.0),
            (1, 4, 302.0),
        ];
        TopologySpec {
            nodes: nodes.iter().map(|&(i, n)| (i, n.to_string())).collect(),
            links: links.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: u32,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub a: NodeIdx,
    pub b: NodeIdx,
    pub base_length_km: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    nodes: Vec<Node>,
    links: Vec<Link>,
    lambda_scale: f64,
    adjacency: Vec<Vec<(NodeIdx, LinkIdx)>>,
}

pub fn build_topology(spec: &TopologySpec, lambda_scale: f64) -> Result<Topology> {
    if !(lambda_scale >= LAMBDA_RANGE.0 && lambda_scale <= LAMBDA_RANGE.1) {
        return Err(Error::InvalidTopology(format!(
            "lambda_scale {lambda_scale} outside [{}, {}]",
            LAMBDA_RANGE.0, LAMBDA_RANGE.1
        )));
    }
    if spec.nodes.is_empty() {
        return Err(Error::InvalidTopology("no nodes".into()));
    }
    let mut nodes: Vec<Node> = spec
        .nodes
        .iter()
        .map(|(id, name)| Node {
            id: *id,
            name: name.clone(),
        })
        .collect();
    nodes.sort_by_key(|n| n.id);
    for w in nodes.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::InvalidTopology(format!("duplicate node id {}", w[0].id)));
        }
    }
    let mut names = BTreeSet::new();
    for n in &nodes {
        if !names.insert(n.name.as_str()) {
            return Err(Error::InvalidTopology(format!("duplicate node name '{}'", n.name)));
        }
    }
    let index_of = |id: u32| {
        nodes
            .binary_search_by_key(&id, |n| n.id)
            .map_err(|_| Error::InvalidTopology(format!("link references unknown node id {id}")))
    };

    let mut links = Vec::with_capacity(spec.links.len());
    let mut seen = BTreeSet::new();
    for &(ia, ib, len) in &spec.links {
        let (a, b) = (index_of(ia)?, index_of(ib)?);
        if a == b {
            return Err(Error::InvalidTopology(format!("self-loop at node {ia}")));
        }
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::InvalidTopology(format!(
                "link {ia}-{ib} has invalid length {len} km"
            )));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::InvalidTopology(format!("duplicate link {ia}-{ib}")));
        }
        links.push(Link {
            a,
            b,
            base_length_km: len,
        });
    }

    let mut adjacency = vec![Vec::new(); nodes.len()];
    for (i, l) in links.iter().enumerate() {
        adjacency[l.a].push((l.b, i));
        adjacency[l.b].push((l.a, i));
    }
    for adj in &mut adjacency {
        adj.sort();
    }

    let topo = Topology {
        nodes,
        links,
        lambda_scale,
        adjacency,
    };
    if !topo.is_connected() {
        return Err(Error::InvalidTopology("graph is disconnected".into()));
    }
    Ok(topo)
}

impl Topology {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn link_count(&self) -> usize {
        self.links.len()
    }

    pub fn lambda_scale(&self) -> f64 {
        self.lambda_scale
    }

    pub fn effective_length_km(&self, link: LinkIdx) -> f64 {
        self.links[link].base_length_km * self.lambda_scale
    }

    pub fn neighbors(&self, node: NodeIdx) -> &[(NodeIdx, LinkIdx)] {
        &self.adjacency[node]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeIdx> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn link_name(&self, link: LinkIdx) -> String {
        let l = &self.links[link];
        format!("{}-{}", self.nodes[l.a].name, self.nodes[l.b].name)
    }

    pub fn link_between(&self, u: NodeIdx, v: NodeIdx) -> Option<(LinkIdx, Direction)> {
        self.adjacency[u].iter().find(|e| e.0 == v).map(|&(_, link)| {
            let dir = if self.links[link].a == u {
                Direction::Forward
            } else {
                Direction::Reverse
            };
            (link, dir)
        })
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !std::mem::replace(&mut seen[v], true) {
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_spec(&self) -> TopologySpec {
        TopologySpec {
            nodes: self.nodes.iter().map(|n| (n.id, n.name.clone())).collect(),
            links: self
                .links
                .iter()
                .map(|l| (self.nodes[l.a].id, self.nodes[l.b].id, l.base_length_km))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalDemand {
    pub src: NodeIdx,
    pub dst: NodeIdx,
    pub lightpaths_requested: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QkdDemand {
    pub src: NodeIdx,
    pub dst: NodeIdx,
    pub key_rate_bps: f64,
}

impl QkdDemand {
    pub fn validate(&self, topo: &Topology) -> Result<()> {
        if self.src == self.dst || self.src >= topo.node_count() || self.dst >= topo.node_count() {
            return Err(Error::invalid(format!(
                "QKD demand endpoints {}->{} invalid",
                self.src, self.dst
            )));
        }
        if !(self.key_rate_bps > 0.0 && self.key_rate_bps.is_finite()) {
            return Err(Error::invalid(format!(
                "QKD demand rate must be > 0, got {}",
                self.key_rate_bps
            )));
        }
        Ok(())
    }
}

/// Splits `total_bps` evenly over every unordered node pair.
pub fn uniform_qkd_demands(topo: &Topology, total_bps: f64) -> Vec<QkdDemand> {
    let n = topo.node_count();
    let pairs = n * (n - 1) / 2;
    if pairs == 0 || total_bps <= 0.0 {
        return Vec::new();
    }
    let per_pair = total_bps / pairs as f64;
    let mut out = Vec::with_capacity(pairs);
    for src in 0..n {
        for dst in src + 1..n {
            out.push(QkdDemand {
                src,
                dst,
                key_rate_bps: per_pair,
            });
        }
    }
    out
}

/// Per-link QKD load: every hop of a demand's shortest path carries its full rate.
pub fn route_qkd(topo: &Topology, demands: &[QkdDemand]) -> Result<Vec<f64>> {
    let mut load = vec![0.0; topo.link_count()];
    for d in demands {
        d.validate(topo)?;
        let path = k_shortest_paths(topo, d.src, d.dst, 1)
            .into_iter()
            .next()
            .ok_or_else(|| Error::InvalidTopology(format!("no path {}->{}", d.src, d.dst)))?;
        for (link, _) in path.hops(topo) {
            load[link] += d.key_rate_bps;
        }
    }
    Ok(load)
}
