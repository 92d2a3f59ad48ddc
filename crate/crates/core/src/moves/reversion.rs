//! Reversions: type transform, minimal resolution and decomposition into elementary links.
//!
//! Both constructions run on a [`Universe`]: a chain of curves living on a common
//! resolution, each either visible (a boundary component of the current surface) or
//! contracted. Visible weights are the self-intersections on the current surface.

use std::collections::BTreeSet;

use crate::dual_graph::{DualGraph, NodeId};
use crate::error::{Error, Result};
use crate::moves::{apply_link, ElementaryLink, IvPoint, Side};
use crate::zigzag::{pick_minus_one, MarkedZigzag, ZigzagType};

/// `(0,-1,-n_1,...,-n_r) -> (0,-1,-n_r,...,-n_1)`.
pub fn reversion_transform(t: &ZigzagType) -> Result<ZigzagType> {
    let mut tail = t.tail()?.to_vec();
    tail.reverse();
    Ok(ZigzagType::from_tail(&tail))
}

#[derive(Debug, Clone)]
struct Curve {
    id: usize,
    /// Self-intersection on the resolution.
    zw: i64,
    visible: bool,
    /// Self-intersection on the current surface; meaningful only when visible.
    vw: i64,
    /// Contraction order; larger stamps were contracted later.
    stamp: u64,
}

#[derive(Debug, Clone, Default)]
struct Universe {
    curves: Vec<Curve>,
    clock: u64,
    next_id: usize,
}

fn add(w: i64, by: i64) -> Result<i64> {
    w.checked_add(by).ok_or(Error::Overflow)
}

fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

impl Universe {
    /// All curves visible, resolution equal to the current surface.
    fn visible_chain(weights: &[i64]) -> Self {
        let mut u = Universe::default();
        for &w in weights {
            u.curves.push(Curve {
                id: u.next_id,
                zw: w,
                visible: true,
                vw: w,
                stamp: 0,
            });
            u.next_id += 1;
        }
        u
    }

    /// Resolution chain `zw` (ids are positions) contracted down to `keep`, leftmost
    /// (-1)-curve first.
    fn contracted_to(zw: &[i64], keep: &BTreeSet<usize>) -> Result<Self> {
        let mut u = Universe::visible_chain(zw);
        loop {
            let vis = u.visible_positions();
            let next = vis
                .iter()
                .position(|&p| u.curves[p].vw == -1 && !keep.contains(&u.curves[p].id));
            match next {
                Some(k) => u.contract_at(&vis, k)?,
                None => break,
            }
        }
        if u.visible_positions()
            .iter()
            .any(|&p| !keep.contains(&u.curves[p].id))
        {
            return Err(internal(
                "resolution does not contract onto the kept curves",
            ));
        }
        Ok(u)
    }

    fn visible_positions(&self) -> Vec<usize> {
        (0..self.curves.len())
            .filter(|&p| self.curves[p].visible)
            .collect()
    }

    fn visible_ids(&self) -> BTreeSet<usize> {
        self.curves
            .iter()
            .filter(|c| c.visible)
            .map(|c| c.id)
            .collect()
    }

    fn visible_weights(&self) -> Vec<i64> {
        self.curves
            .iter()
            .filter(|c| c.visible)
            .map(|c| c.vw)
            .collect()
    }

    /// Contracts the `k`-th visible curve, which must have weight -1.
    fn contract_at(&mut self, vis: &[usize], k: usize) -> Result<()> {
        let p = vis[k];
        if self.curves[p].vw != -1 {
            return Err(internal(format!(
                "contracting a curve of weight {}",
                self.curves[p].vw
            )));
        }
        if k > 0 {
            self.curves[vis[k - 1]].vw = add(self.curves[vis[k - 1]].vw, 1)?;
        }
        if k + 1 < vis.len() {
            self.curves[vis[k + 1]].vw = add(self.curves[vis[k + 1]].vw, 1)?;
        }
        self.curves[p].visible = false;
        self.curves[p].stamp = self.clock;
        self.clock += 1;
        Ok(())
    }

    /// Latest-contracted curve among positions in `range`, if any.
    fn last_contracted(&self, range: std::ops::Range<usize>) -> Option<usize> {
        range
            .filter(|&p| !self.curves[p].visible)
            .max_by_key(|&p| self.curves[p].stamp)
    }

    fn insert_fresh(&mut self, pos: usize) -> Result<usize> {
        self.curves.insert(
            pos,
            Curve {
                id: self.next_id,
                zw: -1,
                visible: true,
                vw: -1,
                stamp: 0,
            },
        );
        self.next_id += 1;
        Ok(pos)
    }

    /// Blows up the point shared by the adjacent visible curves `vis[k]` and `vis[k + 1]`.
    /// With `fresh`, no contracted curve may lie over that point. Returns the new curve's id.
    fn blow_up_between(&mut self, vis: &[usize], k: usize, fresh: bool) -> Result<usize> {
        let (a, b) = (vis[k], vis[k + 1]);
        for p in [a, b] {
            self.curves[p].vw = add(self.curves[p].vw, -1)?;
        }
        let p = match self.last_contracted(a + 1..b) {
            Some(_) if fresh => return Err(internal("fresh blow-up over a contracted curve")),
            Some(p) => p,
            None => {
                for p in [a, b] {
                    self.curves[p].zw = add(self.curves[p].zw, -1)?;
                }
                self.insert_fresh(b)?
            }
        };
        self.restore(p)
    }

    /// Blows up a point of the end curve `vis[k]` lying on no other visible curve, on the
    /// given side. With `fresh`, no contracted curve may lie beyond it.
    fn blow_up_end(&mut self, vis: &[usize], k: usize, side: Side, fresh: bool) -> Result<usize> {
        let a = vis[k];
        let range = match side {
            Side::Left => 0..a,
            Side::Right => a + 1..self.curves.len(),
        };
        self.curves[a].vw = add(self.curves[a].vw, -1)?;
        let p = match self.last_contracted(range) {
            Some(_) if fresh => return Err(internal("fresh blow-up over a contracted curve")),
            Some(p) => p,
            None => {
                self.curves[a].zw = add(self.curves[a].zw, -1)?;
                let pos = if side == Side::Left {
                    0
                } else {
                    self.curves.len()
                };
                self.insert_fresh(pos)?
            }
        };
        self.restore(p)
    }

    fn restore(&mut self, p: usize) -> Result<usize> {
        let c = &mut self.curves[p];
        c.visible = true;
        c.vw = -1;
        Ok(c.id)
    }

    fn position_of(&self, id: usize) -> usize {
        self.curves
            .iter()
            .position(|c| c.id == id)
            .expect("curve id present")
    }

    /// Index among visible curves of the unique curve with non-negative weight.
    fn marker(&self, vis: &[usize]) -> Result<usize> {
        let nonneg: Vec<usize> = (0..vis.len())
            .filter(|&k| self.curves[vis[k]].vw >= 0)
            .collect();
        match nonneg[..] {
            [k] => Ok(k),
            _ => Err(internal(format!(
                "expected one non-negative curve in {:?}",
                self.visible_weights()
            ))),
        }
    }

    /// Contracts every resolution (-1)-curve outside `keep`, tracking resolution weights.
    fn minimize(&mut self, keep: &BTreeSet<usize>) -> Result<()> {
        while let Some(p) = (0..self.curves.len())
            .find(|&p| self.curves[p].zw == -1 && !keep.contains(&self.curves[p].id))
        {
            if self.curves[p].visible {
                return Err(internal("minimizing away a visible curve"));
            }
            if p > 0 {
                self.curves[p - 1].zw = add(self.curves[p - 1].zw, 1)?;
            }
            if p + 1 < self.curves.len() {
                self.curves[p + 1].zw = add(self.curves[p + 1].zw, 1)?;
            }
            self.curves.remove(p);
        }
        Ok(())
    }
}

/// Minimal resolution of a reversion, as a chain.
///
/// `left` lists the curves of the source boundary in reversed orientation
/// (E_r, ..., E_1, C, F); `right` lists the target boundary (F', C', E'_1, ..., E'_r).
/// Graph ids follow chain order from the E_r end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversionResolution {
    pub graph: DualGraph,
    pub left: Vec<NodeId>,
    pub right: Vec<NodeId>,
}

/// Runs the blow-up/contraction schedule of a reversion of type `t`, starting from the
/// reversed boundary (E_r, ..., E_1, C, F), on a universe that records every curve.
///
/// Per tail entry `n_i`: `n_i - 2` times blow up the 0-curve and its right neighbour and
/// contract the old 0-curve; then contract the (-1)-curve left of the 0-curve and blow up
/// the resulting (+1)-curve and its right neighbour.
fn run_schedule(t: &ZigzagType) -> Result<(Universe, BTreeSet<usize>, BTreeSet<usize>)> {
    let tail = t.tail()?;
    let start = t.reverse();
    let mut u = Universe::visible_chain(start.weights());
    let initial = u.visible_ids();

    let vis = u.visible_positions();
    let c = vis.len() - 2;
    u.contract_at(&vis, c)?;
    let vis = u.visible_positions();
    u.blow_up_end(&vis, vis.len() - 1, Side::Right, true)?;

    for &e in tail {
        let n = e.checked_neg().ok_or(Error::Overflow)?;
        for _ in 0..n - 2 {
            let vis = u.visible_positions();
            let m = u.marker(&vis)?;
            if m + 1 >= vis.len() {
                return Err(internal("0-curve has no right neighbour"));
            }
            let old = u.curves[vis[m]].id;
            u.blow_up_between(&vis, m, true)?;
            let vis = u.visible_positions();
            let k = vis
                .iter()
                .position(|&p| u.curves[p].id == old)
                .expect("old 0-curve visible");
            u.contract_at(&vis, k)?;
        }
        let vis = u.visible_positions();
        let m = u.marker(&vis)?;
        if m == 0 || u.curves[vis[m - 1]].vw != -1 {
            return Err(internal("no (-1)-curve left of the 0-curve"));
        }
        u.contract_at(&vis, m - 1)?;
        let vis = u.visible_positions();
        let m = u.marker(&vis)?;
        if m + 1 >= vis.len() {
            return Err(internal("(+1)-curve has no right neighbour"));
        }
        u.blow_up_between(&vis, m, true)?;
    }

    let target = reversion_transform(t)?;
    if u.visible_weights() != target.weights() {
        return Err(internal(format!(
            "schedule ended at {:?}, expected {target}",
            u.visible_weights()
        )));
    }
    let fin = u.visible_ids();
    Ok((u, initial, fin))
}

/// The minimal resolution of the reversion of the 1-standard type `t`.
pub fn reversion_resolution(t: &ZigzagType) -> Result<ReversionResolution> {
    let r = t.tail()?.len();
    let (mut u, initial, fin) = run_schedule(t)?;
    let keep: BTreeSet<usize> = initial.union(&fin).copied().collect();
    u.minimize(&keep)?;

    let zw: Vec<i64> = u.curves.iter().map(|c| c.zw).collect();
    let mut graph = DualGraph::chain(&zw);
    let ids: Vec<usize> = u.curves.iter().map(|c| c.id).collect();
    let left: Vec<NodeId> = (0..ids.len())
        .filter(|&p| initial.contains(&ids[p]))
        .map(|p| p as NodeId)
        .collect();
    let right: Vec<NodeId> = (0..ids.len())
        .filter(|&p| fin.contains(&ids[p]))
        .map(|p| p as NodeId)
        .collect();

    let mut labels: Vec<Vec<String>> = vec![Vec::new(); ids.len()];
    for (k, &p) in left.iter().enumerate() {
        labels[p as usize].push(match k {
            k if k < r => format!("E{}", r - k),
            k if k == r => "C".into(),
            _ => "F".into(),
        });
    }
    for (k, &p) in right.iter().enumerate() {
        labels[p as usize].push(match k {
            0 => "F'".into(),
            1 => "C'".into(),
            k => format!("E{}'", k - 1),
        });
    }
    for (p, l) in labels.iter().enumerate() {
        let text = if l.is_empty() {
            "H".to_string()
        } else {
            l.join("=")
        };
        graph.set_label(p as NodeId, &text)?;
    }
    Ok(ReversionResolution { graph, left, right })
}

/// Elementary-link word realizing the reversion of the 1-standard type `t`.
///
/// The word acts on the reversed boundary (E_r, ..., E_1, C, F) with B_m = F and ends at
/// `reversion_transform(t)`. Each step works on the minimal resolution: it contracts the
/// marked (-1)-curve when that curve is not part of the target boundary, and otherwise
/// blows up the unique point of B_m over which target curves were contracted.
pub fn reversion_links(t: &ZigzagType) -> Result<Vec<ElementaryLink>> {
    let res = reversion_resolution(t)?;
    let zw: Vec<i64> = res.graph.nodes().map(|n| n.weight).collect();
    let left: BTreeSet<usize> = res.left.iter().map(|&p| p as usize).collect();
    let target: BTreeSet<usize> = res.right.iter().map(|&p| p as usize).collect();
    let mut u = Universe::contracted_to(&zw, &left)?;

    let start = t.reverse();
    let n = start.len();
    let mut z = MarkedZigzag::new(start.weights().to_vec(), n - 1, Some(n - 2))?;
    if u.visible_weights() != z.weights() {
        return Err(internal(
            "resolution does not contract to the source boundary",
        ));
    }

    let mut links = Vec::new();
    let guard = 4 * (zw.len() + 2);
    while u.visible_ids() != target {
        if links.len() > guard {
            return Err(internal("link decomposition does not terminate"));
        }
        let vis = u.visible_positions();
        let weights = u.visible_weights();
        let m = u.marker(&vis)?;
        let l = pick_minus_one(&weights, m).filter(|&l| l.abs_diff(m) == 1);

        let link = match l {
            Some(l) if !target.contains(&u.curves[vis[l]].id) => {
                u.contract_at(&vis, l)?;
                ElementaryLink::I
            }
            _ => {
                let lo = if m == 0 { 0 } else { vis[m - 1] + 1 };
                let hi = vis.get(m + 1).copied().unwrap_or(u.curves.len());
                let holds_target = |r: std::ops::Range<usize>| {
                    r.into_iter().any(|p| target.contains(&u.curves[p].id))
                };
                let side = match (holds_target(lo..vis[m]), holds_target(vis[m] + 1..hi)) {
                    (true, false) => Side::Left,
                    (false, true) => Side::Right,
                    other => {
                        return Err(internal(format!("ambiguous base point on B_m: {other:?}")))
                    }
                };
                let neighbour = match side {
                    Side::Left => m.checked_sub(1),
                    Side::Right => (m + 1 < vis.len()).then_some(m + 1),
                };
                let old_weight = weights[m];
                let old_id = u.curves[vis[m]].id;
                let link = match neighbour {
                    Some(k) => {
                        let link = match l {
                            Some(l) if l == k => ElementaryLink::II { side },
                            Some(_) => return Err(internal("base point away from the (-1)-curve")),
                            None if m > 0 && m + 1 < vis.len() => ElementaryLink::III { side },
                            None => ElementaryLink::IV {
                                point: IvPoint::Neighbor,
                            },
                        };
                        u.blow_up_between(&vis, m.min(k), false)?;
                        link
                    }
                    None => {
                        if l.is_some() {
                            return Err(internal("free base point while a (-1)-curve is present"));
                        }
                        let expected = if m == 0 && vis.len() > 1 {
                            Side::Left
                        } else {
                            Side::Right
                        };
                        if side != expected {
                            return Err(internal("free base point on the unexpected side"));
                        }
                        let id = u.blow_up_end(&vis, m, side, false)?;
                        ElementaryLink::iv_free(format!("z{id}"))
                    }
                };
                if old_weight == 0 {
                    let vis = u.visible_positions();
                    let p = u.position_of(old_id);
                    let k = vis.iter().position(|&q| q == p).expect("old B_m visible");
                    u.contract_at(&vis, k)?;
                }
                link
            }
        };
        z = apply_link(&z, &link)?.zigzag;
        if z.weights() != u.visible_weights() {
            return Err(internal(format!(
                "link {link} disagrees with the resolution"
            )));
        }
        links.push(link);
    }
    if z.to_type() != reversion_transform(t)? {
        return Err(internal("decomposition ends at the wrong type"));
    }
    Ok(links)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::LinkKind;
    use proptest::prelude::*;

    fn t(tail: &[i64]) -> ZigzagType {
        ZigzagType::from_tail(tail)
    }

    fn chain(res: &ReversionResolution) -> Vec<i64> {
        res.graph.nodes().map(|n| n.weight).collect()
    }

    #[test]
    fn transform_examples() {
        assert_eq!(reversion_transform(&t(&[-2, -3])).unwrap(), t(&[-3, -2]));
        assert_eq!(reversion_transform(&t(&[])).unwrap(), t(&[]));
        assert_eq!(reversion_transform(&t(&[-2, -2])).unwrap(), t(&[-2, -2]));
        assert!(reversion_transform(&ZigzagType::new(vec![0, -2]).unwrap()).is_err());
    }

    #[test]
    fn resolution_fixture_three_three() {
        let res = reversion_resolution(&t(&[-3, -3])).unwrap();
        assert_eq!(chain(&res), vec![-3, -3, -1, -2, -3, -2, -1, -3, -3]);
        let labels: Vec<&str> = res
            .graph
            .nodes()
            .map(|n| n.label.as_deref().unwrap())
            .collect();
        assert_eq!(
            labels,
            ["E2", "E1", "C", "F", "H", "F'", "C'", "E1'", "E2'"]
        );
    }

    #[test]
    fn resolution_two_run_has_single_middle_curve() {
        let res = reversion_resolution(&t(&[-2, -2])).unwrap();
        let shared: Vec<NodeId> = res
            .left
            .iter()
            .filter(|id| res.right.contains(id))
            .copied()
            .collect();
        assert_eq!(shared.len(), 1);
        assert_eq!(res.graph.label(shared[0]), Some("F=F'"));
    }

    #[test]
    fn link_word_for_single_three() {
        let word = reversion_links(&t(&[-3])).unwrap();
        let kinds: Vec<LinkKind> = word.iter().map(ElementaryLink::kind).collect();
        assert_eq!(
            kinds,
            [
                LinkKind::I,
                LinkKind::IV,
                LinkKind::II,
                LinkKind::I,
                LinkKind::IV
            ]
        );
    }

    #[test]
    fn link_word_for_single_two() {
        let word = reversion_links(&t(&[-2])).unwrap();
        let kinds: Vec<LinkKind> = word.iter().map(ElementaryLink::kind).collect();
        assert_eq!(
            kinds,
            [LinkKind::I, LinkKind::I, LinkKind::IV, LinkKind::II]
        );
    }

    #[test]
    fn empty_tail() {
        assert_eq!(reversion_links(&t(&[])).unwrap().len(), 2);
        assert_eq!(
            chain(&reversion_resolution(&t(&[])).unwrap()),
            vec![-1, -1, -1]
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn word_length_formula(tail in prop::collection::vec(-6i64..=-2, 0..5)) {
            let word = reversion_links(&t(&tail)).unwrap();
            let r = tail.len() as i64;
            let expected = 2 * (r + 1) + tail.iter().map(|e| -e - 2).sum::<i64>();
            prop_assert_eq!(word.len() as i64, expected);
            let i_count = word.iter().filter(|l| l.kind() == LinkKind::I).count() as i64;
            prop_assert_eq!(i_count, r + 1);
        }

        #[test]
        fn resolution_contracts_to_both_sides(tail in prop::collection::vec(-6i64..=-2, 0..5)) {
            let ty = t(&tail);
            let res = reversion_resolution(&ty).unwrap();
            prop_assert!(res.graph.is_chain());
            let keep: BTreeSet<NodeId> = res.left.iter().copied().collect();
            let (g, _) = res.graph.replay_contraction(&keep).unwrap();
            prop_assert_eq!(g.extract_chain_type(res.left[0]).unwrap(), ty.reverse());
            let keep: BTreeSet<NodeId> = res.right.iter().copied().collect();
            let (g, _) = res.graph.replay_contraction(&keep).unwrap();
            prop_assert_eq!(g.extract_chain_type(res.right[0]).unwrap(), reversion_transform(&ty).unwrap());
        }
    }
}
