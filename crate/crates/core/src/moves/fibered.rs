//! Resolution tree of a fibered modification.

use crate::dual_graph::{DualGraph, NodeId};
use crate::error::{Error, Result};

/// The tree `E — C(-d) — M(-2)`, where the middle curve `M` carries two chains of `d - 2`
/// (-2)-curves ending in `F(-1)` and `F'(-1)`.
///
/// `h` and `h_prime` list the hanging chains from `M` outwards; both sides contract onto a
/// 1-standard chain with the input tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberedResolution {
    pub graph: DualGraph,
    pub e: Vec<NodeId>,
    pub c: NodeId,
    pub middle: NodeId,
    pub h: Vec<NodeId>,
    pub h_prime: Vec<NodeId>,
    pub f: NodeId,
    pub f_prime: NodeId,
}

pub fn fibered_resolution(d: i64, tail: &[i64]) -> Result<FiberedResolution> {
    if d < 2 {
        return Err(Error::DegreeTooSmall(d));
    }
    if let Some(e) = tail.iter().find(|&&e| e > -2) {
        return Err(Error::NotOneStandard(format!("tail entry {e} is above -2")));
    }
    let mut g = DualGraph::new();
    let mut e = Vec::with_capacity(tail.len());
    for (i, &w) in tail.iter().enumerate().rev() {
        let id = g.add_node(w, Some(format!("E{}", i + 1)));
        if let Some(&prev) = e.last() {
            g.add_edge(prev, id)?;
        }
        e.push(id);
    }
    e.reverse();
    let c = g.add_node(-d, Some("C".into()));
    if let Some(&e1) = e.first() {
        g.add_edge(e1, c)?;
    }
    let middle = g.add_node(-2, Some("M".into()));
    g.add_edge(c, middle)?;

    let mut hang = |prefix: &str, end: &str| -> Result<(Vec<NodeId>, NodeId)> {
        let mut chain = Vec::new();
        let mut prev = middle;
        for i in 0..d - 2 {
            let id = g.add_node(-2, Some(format!("{prefix}{}", i + 1)));
            g.add_edge(prev, id)?;
            chain.push(id);
            prev = id;
        }
        let tip = g.add_node(-1, Some(end.into()));
        g.add_edge(prev, tip)?;
        Ok((chain, tip))
    };
    let (h, f) = hang("H", "F")?;
    let (h_prime, f_prime) = hang("H'", "F'")?;
    Ok(FiberedResolution {
        graph: g,
        e,
        c,
        middle,
        h,
        h_prime,
        f,
        f_prime,
    })
}
