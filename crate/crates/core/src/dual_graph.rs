//! Weighted dual graphs of SNC curve configurations.
//!
//! Nodes are rational curves weighted by self-intersection; edges are transversal
//! intersection points. Blow-ups and blow-downs return new graphs, so a value is never
//! mutated behind a caller's back. This module is the independent oracle for every
//! resolution diagram produced by [`crate::moves`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zigzag::ZigzagType;

pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveNode {
    pub id: NodeId,
    pub weight: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A simple undirected graph of weighted curves.
///
/// Edges are stored as ordered pairs `(min, max)`. Fresh ids are `max id + 1`, so equality
/// depends only on the nodes and edges present.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct DualGraph {
    nodes: BTreeMap<NodeId, CurveNode>,
    edges: BTreeSet<(NodeId, NodeId)>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    nodes: Vec<CurveNode>,
    edges: Vec<[NodeId; 2]>,
}

impl TryFrom<GraphRepr> for DualGraph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        let mut g = DualGraph::new();
        for n in r.nodes {
            if g.nodes.insert(n.id, n.clone()).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate node id {}", n.id)));
            }
        }
        for [a, b] in r.edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }
}

impl From<DualGraph> for GraphRepr {
    fn from(g: DualGraph) -> Self {
        GraphRepr {
            nodes: g.nodes.into_values().collect(),
            edges: g.edges.into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

/// One blow-down performed by [`DualGraph::replay_contraction`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionStep {
    pub node: NodeId,
    pub label: Option<String>,
    pub neighbors: Vec<NodeId>,
}

fn key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
    (a.min(b), a.max(b))
}

fn dec(w: i64) -> Result<i64> {
    w.checked_sub(1).ok_or(Error::Overflow)
}

impl DualGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A path graph with ids `0..n` in order.
    pub fn chain(weights: &[i64]) -> Self {
        let mut g = DualGraph::new();
        let mut prev = None;
        for &w in weights {
            let id = g.add_node(w, None);
            if let Some(p) = prev {
                g.edges.insert(key(p, id));
            }
            prev = Some(id);
        }
        g
    }

    /// A labelled path graph with ids `0..n` in order.
    pub fn labelled_chain(nodes: &[(i64, &str)]) -> Self {
        let mut g = DualGraph::chain(&nodes.iter().map(|n| n.0).collect::<Vec<_>>());
        for (i, (_, l)) in nodes.iter().enumerate() {
            g.set_label(i as NodeId, l).expect("node exists");
        }
        g
    }

    pub fn next_id(&self) -> NodeId {
        self.nodes.keys().next_back().map_or(0, |k| k + 1)
    }

    pub fn add_node(&mut self, weight: i64, label: Option<String>) -> NodeId {
        let id = self.next_id();
        self.nodes.insert(id, CurveNode { id, weight, label });
        id
    }

    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<()> {
        self.node(a)?;
        self.node(b)?;
        if a == b {
            return Err(Error::InvalidGraph(format!("loop at node {a}")));
        }
        if !self.edges.insert(key(a, b)) {
            return Err(Error::InvalidGraph(format!("multi-edge {a}-{b}")));
        }
        Ok(())
    }

    pub fn set_label(&mut self, id: NodeId, label: &str) -> Result<()> {
        self.nodes.get_mut(&id).ok_or(Error::UnknownNode(id))?.label = Some(label.to_string());
        Ok(())
    }

    pub fn node(&self, id: NodeId) -> Result<&CurveNode> {
        self.nodes.get(&id).ok_or(Error::UnknownNode(id))
    }

    pub fn weight(&self, id: NodeId) -> Result<i64> {
        Ok(self.node(id)?.weight)
    }

    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.nodes.get(&id).and_then(|n| n.label.as_deref())
    }

    /// Id of the first node carrying `label`.
    pub fn find(&self, label: &str) -> Option<NodeId> {
        self.nodes
            .values()
            .find(|n| n.label.as_deref() == Some(label))
            .map(|n| n.id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &CurveNode> {
        self.nodes.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> i64 {
        self.nodes.values().map(|n| n.weight).sum()
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.edges.contains(&key(a, b))
    }

    pub fn neighbors(&self, id: NodeId) -> Vec<NodeId> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == id || b == id)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.nodes.keys().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.nodes.len()
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.nodes.len().max(1)
    }

    pub fn is_chain(&self) -> bool {
        self.is_tree() && self.nodes.keys().all(|&v| self.degree(v) <= 2)
    }

    /// Endpoints of a chain, smaller id first; a single node is its own pair.
    pub fn chain_endpoints(&self) -> Result<(NodeId, NodeId)> {
        if !self.is_chain() || self.nodes.is_empty() {
            return Err(Error::NotAChain);
        }
        let ends: Vec<NodeId> = self
            .nodes
            .keys()
            .copied()
            .filter(|&v| self.degree(v) <= 1)
            .collect();
        Ok((ends[0], *ends.last().expect("nonempty")))
    }

    /// Node ids read along a chain starting at the endpoint `from`.
    pub fn chain_order(&self, from: NodeId) -> Result<Vec<NodeId>> {
        self.node(from)?;
        if !self.is_chain() {
            return Err(Error::NotAChain);
        }
        if self.degree(from) > 1 {
            return Err(Error::NotAnEndpoint(from));
        }
        let mut order = vec![from];
        let mut prev = None;
        let mut cur = from;
        loop {
            let next = self.neighbors(cur).into_iter().find(|&n| Some(n) != prev);
            match next {
                Some(n) => {
                    prev = Some(cur);
                    cur = n;
                    order.push(n);
                }
                None => break,
            }
        }
        Ok(order)
    }

    /// Weights read along a chain starting at the endpoint `from`.
    pub fn extract_chain_type(&self, from: NodeId) -> Result<ZigzagType> {
        let w = self
            .chain_order(from)?
            .into_iter()
            .map(|v| self.nodes[&v].weight)
            .collect();
        ZigzagType::new(w)
    }

    /// Blows up a point of `c` lying on no other curve. Returns the graph and the new node.
    pub fn blow_up_free(&self, c: NodeId) -> Result<(DualGraph, NodeId)> {
        let mut g = self.clone();
        let node = g.nodes.get_mut(&c).ok_or(Error::UnknownNode(c))?;
        node.weight = dec(node.weight)?;
        let e = g.add_node(-1, None);
        g.edges.insert(key(c, e));
        Ok((g, e))
    }

    /// Blows up the intersection point of `c` and `d`. Returns the graph and the new node.
    pub fn blow_up_intersection(&self, c: NodeId, d: NodeId) -> Result<(DualGraph, NodeId)> {
        if !self.has_edge(c, d) {
            return Err(Error::NoSuchEdge(c, d));
        }
        let mut g = self.clone();
        for v in [c, d] {
            let node = g.nodes.get_mut(&v).expect("edge endpoints exist");
            node.weight = dec(node.weight)?;
        }
        g.edges.remove(&key(c, d));
        let e = g.add_node(-1, None);
        g.edges.insert(key(c, e));
        g.edges.insert(key(d, e));
        Ok((g, e))
    }

    /// Contracts the (-1)-curve `e`, which must meet at most two other curves.
    pub fn blow_down(&self, e: NodeId) -> Result<DualGraph> {
        let w = self.weight(e)?;
        if w != -1 {
            return Err(Error::BlowDown {
                node: e,
                reason: format!("weight is {w}, not -1"),
            });
        }
        let nb = self.neighbors(e);
        if nb.len() > 2 {
            return Err(Error::BlowDown {
                node: e,
                reason: format!("{} neighbours", nb.len()),
            });
        }
        if nb.len() == 2 && self.has_edge(nb[0], nb[1]) {
            return Err(Error::BlowDown {
                node: e,
                reason: "result would have a multi-edge".into(),
            });
        }
        let mut g = self.clone();
        g.nodes.remove(&e);
        g.edges.retain(|&(a, b)| a != e && b != e);
        for &v in &nb {
            let node = g.nodes.get_mut(&v).expect("neighbour exists");
            node.weight = node.weight.checked_add(1).ok_or(Error::Overflow)?;
        }
        if let [a, b] = nb[..] {
            g.edges.insert(key(a, b));
        }
        Ok(g)
    }

    /// Contracts (-1)-curves outside `keep`, smallest id first, until none remain.
    ///
    /// Fails if a node outside `keep` survives.
    pub fn replay_contraction(
        &self,
        keep: &BTreeSet<NodeId>,
    ) -> Result<(DualGraph, Vec<ContractionStep>)> {
        self.replay_contraction_by(keep, |_| 0)
    }

    /// As [`DualGraph::replay_contraction`], with `pick` choosing among the contractible
    /// candidates (given in id order) at each step.
    pub fn replay_contraction_by(
        &self,
        keep: &BTreeSet<NodeId>,
        mut pick: impl FnMut(&[NodeId]) -> usize,
    ) -> Result<(DualGraph, Vec<ContractionStep>)> {
        for &k in keep {
            self.node(k)?;
        }
        let mut g = self.clone();
        let mut steps = Vec::new();
        loop {
            let candidates: Vec<NodeId> = g
                .nodes
                .values()
                .filter(|n| n.weight == -1 && !keep.contains(&n.id))
                .map(|n| n.id)
                .filter(|&id| g.blow_down(id).is_ok())
                .collect();
            if candidates.is_empty() {
                break;
            }
            let id = candidates[pick(&candidates) % candidates.len()];
            steps.push(ContractionStep {
                node: id,
                label: g.nodes[&id].label.clone(),
                neighbors: g.neighbors(id),
            });
            g = g.blow_down(id)?;
        }
        let stuck: Vec<String> = g
            .nodes
            .values()
            .filter(|n| !keep.contains(&n.id))
            .map(|n| format!("{}({})", n.label.as_deref().unwrap_or("?"), n.weight))
            .collect();
        if !stuck.is_empty() {
            return Err(Error::NotContractible(format!(
                "stuck with {}",
                stuck.join(", ")
            )));
        }
        Ok((g, steps))
    }

    /// Subgraph on `keep`, with its induced edges.
    pub fn induced(&self, keep: &BTreeSet<NodeId>) -> DualGraph {
        DualGraph {
            nodes: self
                .nodes
                .iter()
                .filter(|(k, _)| keep.contains(k))
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|(a, b)| keep.contains(a) && keep.contains(b))
                .collect(),
        }
    }

    /// Graphviz rendering with weights as node labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dual {\n");
        for n in self.nodes.values() {
            let text = match &n.label {
                Some(l) => format!("{l} ({})", n.weight),
                None => format!("{}", n.weight),
            };
            let _ = writeln!(s, "  n{} [label=\"{}\"];", n.id, text);
        }
        for (a, b) in &self.edges {
            let _ = writeln!(s, "  n{a} -- n{b};");
        }
        s.push_str("}\n");
        s
    }
}
