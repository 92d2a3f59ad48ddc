//! The fibration graph: vertices are classes of A¹-fibrations, arrows are classes of
//! reversions, with the bar involution. Also a word-level graph-of-groups scaffold.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub origin: VertexId,
    pub target: VertexId,
    pub bar: ArrowId,
    pub label: String,
}

/// Whether the automorphism group is generated by automorphisms of A¹-fibrations, as read
/// off the graph. `HypothesisFails` means the graph criterion does not apply because no
/// boundary curve has self-intersection at most -3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenerationVerdict {
    Generated,
    NotGenerated,
    HypothesisFails,
}

impl fmt::Display for GenerationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenerationVerdict::Generated => "generated",
            GenerationVerdict::NotGenerated => "not generated",
            GenerationVerdict::HypothesisFails => "hypothesis fails",
        })
    }
}

/// Invariants: `bar(bar(a)) = a` and `origin(bar(a)) = target(a)` for every arrow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr")]
pub struct FibrationGraph {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    /// Some boundary curve has self-intersection at most -3.
    hypothesis: bool,
}

#[derive(Deserialize)]
struct GraphRepr {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    hypothesis: bool,
}

impl TryFrom<GraphRepr> for FibrationGraph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        let g = FibrationGraph {
            vertices: r.vertices,
            arrows: r.arrows,
            hypothesis: r.hypothesis,
        };
        g.validate()?;
        Ok(g)
    }
}

impl FibrationGraph {
    pub fn new(hypothesis: bool) -> Self {
        FibrationGraph {
            vertices: Vec::new(),
            arrows: Vec::new(),
            hypothesis,
        }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> VertexId {
        self.vertices.push(label.into());
        self.vertices.len() - 1
    }

    /// Adds `a: o -> t` and its bar `ā: t -> o`.
    pub fn add_edge(
        &mut self,
        o: VertexId,
        t: VertexId,
        label: &str,
        bar_label: &str,
    ) -> Result<(ArrowId, ArrowId)> {
        self.check_vertex(o)?;
        self.check_vertex(t)?;
        let a = self.arrows.len();
        self.arrows.push(Arrow {
            origin: o,
            target: t,
            bar: a + 1,
            label: label.into(),
        });
        self.arrows.push(Arrow {
            origin: t,
            target: o,
            bar: a,
            label: bar_label.into(),
        });
        Ok((a, a + 1))
    }

    /// Adds a loop at `v` equal to its own bar.
    pub fn add_self_inverse_loop(&mut self, v: VertexId, label: &str) -> Result<ArrowId> {
        self.check_vertex(v)?;
        let a = self.arrows.len();
        self.arrows.push(Arrow {
            origin: v,
            target: v,
            bar: a,
            label: label.into(),
        });
        Ok(a)
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.vertices.len() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(format!("no vertex {v}")))
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.arrows.iter().enumerate() {
            self.check_vertex(a.origin)?;
            self.check_vertex(a.target)?;
            let b = self
                .arrows
                .get(a.bar)
                .ok_or_else(|| Error::InvalidGraph(format!("arrow {i} has no bar")))?;
            if b.bar != i || b.origin != a.target || b.target != a.origin {
                return Err(Error::InvalidGraph(format!(
                    "bar of arrow {i} is inconsistent"
                )));
            }
        }
        Ok(())
    }

    pub fn hypothesis(&self) -> bool {
        self.hypothesis
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_id(&self, label: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == label)
    }

    /// Number of pairs `{a, ā}`; a self-inverse loop counts once.
    pub fn geometric_edge_count(&self) -> usize {
        self.arrows
            .iter()
            .enumerate()
            .filter(|(i, a)| *i <= a.bar)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); self.vertices.len()];
        for a in &self.arrows {
            adj[a.origin].push(a.target);
            adj[a.target].push(a.origin);
        }
        let mut seen = BTreeSet::from([0]);
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// First Betti number: geometric edges − vertices + 1.
    pub fn cycle_rank(&self) -> Result<i64> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.geometric_edge_count() as i64 - self.vertices.len() as i64 + 1)
    }

    pub fn is_tree(&self) -> Result<bool> {
        Ok(self.cycle_rank()? == 0)
    }

    /// The tree criterion, reported only when the hypothesis holds.
    pub fn generation_verdict(&self) -> Result<GenerationVerdict> {
        if !self.hypothesis {
            return Ok(GenerationVerdict::HypothesisFails);
        }
        Ok(if self.is_tree()? {
            GenerationVerdict::Generated
        } else {
            GenerationVerdict::NotGenerated
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph fibrations {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{}\"];", v.replace('"', "\\\""));
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if i <= a.bar {
                let _ = writeln!(
                    s,
                    "  v{} -- v{} [label=\"{}\"];",
                    a.origin,
                    a.target,
                    a.label.replace('"', "\\\"")
                );
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Transitions of a concrete family: from a vertex and a reversion center to the target
/// vertex and the arrow class of that reversion.
pub trait TransitionOracle {
    type Vertex: Clone + Ord + fmt::Display;
    type Center;
    type Key: Clone + Ord + fmt::Debug;

    fn centers(&self, v: &Self::Vertex) -> Vec<Self::Center>;
    fn transition(&self, v: &Self::Vertex, c: &Self::Center) -> Result<(Self::Vertex, Self::Key)>;
    /// Class of the inverse reversions.
    fn bar(&self, key: &Self::Key) -> Self::Key;
    fn arrow_label(&self, key: &Self::Key) -> String;
    /// Some boundary curve has self-intersection at most -3.
    fn hypothesis(&self) -> bool;
}

/// Breadth-first closure of `seeds` under the oracle's transitions. Vertices are sorted by
/// the oracle's order, arrows by key.
pub fn build_graph<O: TransitionOracle>(oracle: &O, seeds: &[O::Vertex]) -> Result<FibrationGraph> {
    let mut seen: BTreeSet<O::Vertex> = seeds.iter().cloned().collect();
    let mut queue: VecDeque<O::Vertex> = seeds.iter().cloned().collect();
    let mut arrows: BTreeMap<O::Key, (O::Vertex, O::Vertex)> = BTreeMap::new();
    while let Some(v) = queue.pop_front() {
        for c in oracle.centers(&v) {
            let (w, key) = oracle.transition(&v, &c)?;
            match arrows.get(&key) {
                Some((o, t)) if *o != v || *t != w => {
                    return Err(Error::OracleInconsistency(format!(
                        "arrow class {key:?} joins {o} -> {t} and {v} -> {w}"
                    )))
                }
                Some(_) => {}
                None => {
                    arrows.insert(key, (v.clone(), w.clone()));
                }
            }
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    let vertices: Vec<O::Vertex> = seen.into_iter().collect();
    let index = |v: &O::Vertex| vertices.binary_search(v).expect("vertex discovered");
    let keys: Vec<&O::Key> = arrows.keys().collect();
    let mut g = FibrationGraph::new(oracle.hypothesis());
    g.vertices = vertices.iter().map(ToString::to_string).collect();
    for key in &keys {
        let (o, t) = &arrows[*key];
        let bar_key = oracle.bar(key);
        let bar = keys.binary_search(&&bar_key).map_err(|_| {
            Error::OracleInconsistency(format!("bar of arrow class {key:?} is missing"))
        })?;
        g.arrows.push(Arrow {
            origin: index(o),
            target: index(t),
            bar,
            label: oracle.arrow_label(key),
        });
    }
    g.validate()
        .map_err(|e| Error::OracleInconsistency(e.to_string()))?;
    Ok(g)
}

/// Group data attached to a fibration graph. Group elements are words of opaque tokens
/// in travel order (first token acts first).
pub trait GroupOracle {
    /// Membership of a token in the vertex group `G_v`.
    fn contains(&self, v: VertexId, token: &str) -> bool;
    /// A normal form of a word in `G_v`; must not lengthen it.
    fn simplify(&self, v: VertexId, word: &[String]) -> Vec<String>;
    /// For `h` in the image of the edge group of `a` inside `G_{t(a)}`, the matching element
    /// of `G_{o(a)}` such that traversing `a` then `h` equals `slide(h)` then `a`.
    fn slide(&self, a: ArrowId, token: &str) -> Option<String>;
    /// For a self-inverse arrow, the token of the square of its chosen reversion in
    /// `G_{o(a)}`; `None` when that square is trivial.
    fn square_token(&self, a: ArrowId) -> Option<String>;
}

/// `groups[0] a_0 groups[1] a_1 ... groups[n]` in travel order, starting at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub start: VertexId,
    pub groups: Vec<Vec<String>>,
    pub arrows: Vec<ArrowId>,
}

impl Path {
    pub fn new(start: VertexId, groups: Vec<Vec<String>>, arrows: Vec<ArrowId>) -> Self {
        Path {
            start,
            groups,
            arrows,
        }
    }

    /// Arrows plus group tokens.
    pub fn len(&self) -> usize {
        self.arrows.len() + self.groups.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn vertices(&self, g: &FibrationGraph) -> Result<Vec<VertexId>> {
        if self.groups.len() != self.arrows.len() + 1 {
            return Err(Error::IllTypedPath(
                "need one group word per vertex visited".into(),
            ));
        }
        g.check_vertex(self.start)
            .map_err(|e| Error::IllTypedPath(e.to_string()))?;
        let mut at = vec![self.start];
        for &a in &self.arrows {
            let arrow = g
                .arrows
                .get(a)
                .ok_or_else(|| Error::IllTypedPath(format!("no arrow {a}")))?;
            let here = *at.last().expect("nonempty");
            if arrow.origin != here {
                return Err(Error::IllTypedPath(format!(
                    "arrow {a} does not start at vertex {here}"
                )));
            }
            at.push(arrow.target);
        }
        Ok(at)
    }
}

/// Applies `a ā = 1` and slides edge-group elements toward the start until nothing changes.
pub fn reduce_path(graph: &FibrationGraph, oracle: &impl GroupOracle, path: &Path) -> Result<Path> {
    let at = path.vertices(graph)?;
    for (v, word) in at.iter().zip(&path.groups) {
        if let Some(t) = word.iter().find(|t| !oracle.contains(*v, t)) {
            return Err(Error::IllTypedPath(format!(
                "{t} is not in the group of vertex {v}"
            )));
        }
    }
    let mut p = path.clone();
    loop {
        let before = p.clone();
        let at = p.vertices(graph)?;
        for (word, v) in p.groups.iter_mut().zip(&at) {
            *word = oracle.simplify(*v, word);
        }
        for i in 0..p.arrows.len() {
            while let Some(first) = p.groups[i + 1].first() {
                let Some(moved) = oracle.slide(p.arrows[i], first) else {
                    break;
                };
                p.groups[i + 1].remove(0);
                p.groups[i].push(moved);
            }
        }
        if let Some(i) = (0..p.arrows.len().saturating_sub(1)).find(|&i| {
            p.groups[i + 1].is_empty() && graph.arrows[p.arrows[i]].bar == p.arrows[i + 1]
        }) {
            let a = p.arrows[i];
            let mut merged = p.groups[i].clone();
            if graph.arrows[a].bar == a {
                merged.extend(oracle.square_token(a));
            }
            merged.extend(p.groups[i + 2].iter().cloned());
            p.arrows.drain(i..i + 2);
            p.groups.splice(i..i + 3, [merged]);
        }
        if p == before {
            return Ok(p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_graph() -> FibrationGraph {
        let mut g = FibrationGraph::new(true);
        let v = g.add_vertex("S");
        g.add_self_inverse_loop(v, "I").unwrap();
        g
    }

    #[test]
    fn ranks() {
        let g = loop_graph();
        assert_eq!(g.cycle_rank().unwrap(), 1);
        assert!(!g.is_tree().unwrap());

        let mut star = FibrationGraph::new(true);
        let c = star.add_vertex("c");
        for i in 0..5 {
            let v = star.add_vertex(format!("v{i}"));
            star.add_edge(c, v, "a", "ā").unwrap();
        }
        assert_eq!(star.cycle_rank().unwrap(), 0);
        assert_eq!(
            star.generation_verdict().unwrap(),
            GenerationVerdict::Generated
        );

        let mut single = FibrationGraph::new(false);
        single.add_vertex("x");
        assert!(single.is_tree().unwrap());
        assert_eq!(
            single.generation_verdict().unwrap(),
            GenerationVerdict::HypothesisFails
        );

        let mut two = FibrationGraph::new(true);
        let (a, b) = (two.add_vertex("a"), two.add_vertex("b"));
        two.add_edge(a, b, "e", "ē").unwrap();
        two.add_edge(a, b, "f", "f̄").unwrap();
        assert_eq!(two.cycle_rank().unwrap(), 1);

        let mut split = FibrationGraph::new(true);
        split.add_vertex("a");
        split.add_vertex("b");
        assert_eq!(split.cycle_rank(), Err(Error::Disconnected));
    }

    #[test]
    fn json_validation() {
        let g = loop_graph();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<FibrationGraph>(&s).unwrap(), g);
        let bad = r#"{"vertices":["a","b"],"arrows":[{"origin":0,"target":1,"bar":0,"label":"x"}],"hypothesis":true}"#;
        assert!(serde_json::from_str::<FibrationGraph>(bad).is_err());
    }

    /// Edge group of arrow 0 is generated by `h`, sliding to `k`; `k` slides back along the bar.
    struct Toy;

    impl GroupOracle for Toy {
        fn contains(&self, _v: VertexId, _t: &str) -> bool {
            true
        }
        fn simplify(&self, _v: VertexId, w: &[String]) -> Vec<String> {
            w.to_vec()
        }
        fn slide(&self, a: ArrowId, t: &str) -> Option<String> {
            match (a, t) {
                (0, "h") => Some("k".into()),
                (1, "k") => Some("h".into()),
                _ => None,
            }
        }
        fn square_token(&self, _a: ArrowId) -> Option<String> {
            Some("r2".into())
        }
    }

    fn edge_graph() -> FibrationGraph {
        let mut g = FibrationGraph::new(true);
        let (a, b) = (g.add_vertex("a"), g.add_vertex("b"));
        g.add_edge(a, b, "e", "ē").unwrap();
        g
    }

    #[test]
    fn path_relations() {
        let g = edge_graph();
        let w = |ts: &[&str]| ts.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let p = Path::new(0, vec![w(&[]), w(&[]), w(&[])], vec![0, 1]);
        assert_eq!(
            reduce_path(&g, &Toy, &p).unwrap(),
            Path::new(0, vec![w(&[])], vec![])
        );

        let p = Path::new(0, vec![w(&["x"]), w(&["h", "y"])], vec![0]);
        assert_eq!(
            reduce_path(&g, &Toy, &p).unwrap(),
            Path::new(0, vec![w(&["x", "k"]), w(&["y"])], vec![0])
        );

        let p = Path::new(0, vec![w(&["x"]), w(&["y"]), w(&["z"])], vec![0, 1]);
        assert_eq!(reduce_path(&g, &Toy, &p).unwrap(), p);

        let bad = Path::new(0, vec![w(&[]), w(&[])], vec![1]);
        assert!(matches!(
            reduce_path(&g, &Toy, &bad),
            Err(Error::IllTypedPath(_))
        ));
    }

    #[test]
    fn self_inverse_square_is_tracked() {
        let g = loop_graph();
        let p = Path::new(0, vec![vec![], vec![], vec![]], vec![0, 0]);
        let r = reduce_path(&g, &Toy, &p).unwrap();
        assert_eq!(r, Path::new(0, vec![vec!["r2".to_string()]], vec![]));
        assert_eq!(reduce_path(&g, &Toy, &r).unwrap(), r);
    }
}
