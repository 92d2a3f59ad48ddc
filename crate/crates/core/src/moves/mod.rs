//! Elementary links I–IV, reversions, fibered modifications and the composition of
//! adjacent moves.

mod fibered;
mod reversion;

pub use fibered::{fibered_resolution, FiberedResolution};
pub use reversion::{
    reversion_links, reversion_resolution, reversion_transform, ReversionResolution,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zigzag::{pick_minus_one, MarkedZigzag};

/// Token of the canonical center F∩C shared by all fibered modifications.
pub const FIBERED_CENTER: &str = "FnC";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Where a type IV link blows up: the point shared with the only neighbour, or a point
/// lying on no other boundary curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum IvPoint {
    Neighbor,
    Free { center: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ElementaryLink {
    /// Contract the marked (-1)-curve.
    I,
    /// Blow up B_m ∩ B_l, with B_l on `side` of B_m.
    II { side: Side },
    /// Blow up B_m ∩ B_{m±1}, B_m interior and no (-1)-curve present.
    III { side: Side },
    /// Blow up a point of a boundary B_m when no (-1)-curve is present.
    IV {
        #[serde(flatten)]
        point: IvPoint,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkKind {
    I,
    II,
    III,
    IV,
}

impl ElementaryLink {
    pub fn kind(&self) -> LinkKind {
        match self {
            ElementaryLink::I => LinkKind::I,
            ElementaryLink::II { .. } => LinkKind::II,
            ElementaryLink::III { .. } => LinkKind::III,
            ElementaryLink::IV { .. } => LinkKind::IV,
        }
    }

    pub fn iv_free(center: impl Into<String>) -> Self {
        ElementaryLink::IV {
            point: IvPoint::Free {
                center: center.into(),
            },
        }
    }
}

impl fmt::Display for ElementaryLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementaryLink::I => f.write_str("I"),
            ElementaryLink::II { side } => write!(f, "II({side:?})"),
            ElementaryLink::III { side } => write!(f, "III({side:?})"),
            ElementaryLink::IV {
                point: IvPoint::Neighbor,
            } => f.write_str("IV(neighbor)"),
            ElementaryLink::IV {
                point: IvPoint::Free { center },
            } => write!(f, "IV(free {center})"),
        }
    }
}

/// Result of [`apply_link`]; `almost_standard` flags whether the output satisfies the
/// almost-standard invariants (it may transiently carry two (-1)-curves).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkOutcome {
    pub zigzag: MarkedZigzag,
    pub almost_standard: bool,
}

fn not_applicable(link: &ElementaryLink, z: &MarkedZigzag, why: &str) -> Error {
    Error::LinkNotApplicable(format!("{link} on {z}: {why}"))
}

fn bump(w: i64, by: i64) -> Result<i64> {
    w.checked_add(by).ok_or(Error::Overflow)
}

/// Applies one elementary link.
///
/// Blow-ups happen first; the old B_m is contracted exactly when its weight was 0 before
/// the blow-up, and the marker then moves to the exceptional curve, which has become the
/// 0-curve. The (-1)-marker is recomputed afterwards.
pub fn apply_link(z: &MarkedZigzag, link: &ElementaryLink) -> Result<LinkOutcome> {
    let mut w = z.weights().to_vec();
    let n = w.len();
    let m = z.m();
    let has_minus_one = w.contains(&-1);
    let new_m = match link {
        ElementaryLink::I => {
            let l = z
                .l()
                .filter(|&l| w[l] == -1)
                .ok_or_else(|| not_applicable(link, z, "no (-1)-curve"))?;
            if l > 0 {
                w[l - 1] = bump(w[l - 1], 1)?;
            }
            if l + 1 < n {
                w[l + 1] = bump(w[l + 1], 1)?;
            }
            w.remove(l);
            if w.is_empty() {
                return Err(not_applicable(link, z, "contraction empties the zigzag"));
            }
            if l < m {
                m - 1
            } else {
                m
            }
        }
        ElementaryLink::II { side } | ElementaryLink::III { side } => {
            let other = match side {
                Side::Left => m.checked_sub(1),
                Side::Right => (m + 1 < n).then_some(m + 1),
            }
            .ok_or_else(|| not_applicable(link, z, "no neighbour on that side"))?;
            if matches!(link, ElementaryLink::II { .. }) {
                if w[other] != -1 {
                    return Err(not_applicable(link, z, "neighbour is not a (-1)-curve"));
                }
            } else if has_minus_one {
                return Err(not_applicable(link, z, "a (-1)-curve is present"));
            }
            blow_up_between(&mut w, m, other)?
        }
        ElementaryLink::IV { point } => {
            if has_minus_one {
                return Err(not_applicable(link, z, "a (-1)-curve is present"));
            }
            if m != 0 && m + 1 != n {
                return Err(not_applicable(link, z, "B_m is not a boundary curve"));
            }
            match point {
                IvPoint::Neighbor => {
                    if n == 1 {
                        return Err(not_applicable(link, z, "B_m has no neighbour"));
                    }
                    let other = if m == 0 { 1 } else { m - 1 };
                    blow_up_between(&mut w, m, other)?
                }
                IvPoint::Free { .. } => {
                    let old = w[m];
                    w[m] = bump(old, -1)?;
                    let (new_m, exc) = if m == 0 && n > 1 {
                        w.insert(0, -1);
                        (1, 0)
                    } else {
                        w.push(-1);
                        (m, m + 1)
                    };
                    contract_old_m(&mut w, old, new_m, exc)?
                }
            }
        }
    };
    let l = pick_minus_one(&w, new_m).filter(|&l| l.abs_diff(new_m) == 1);
    let zigzag = MarkedZigzag::new(w, new_m, l)?;
    let almost_standard = zigzag.validate_almost_standard();
    Ok(LinkOutcome {
        zigzag,
        almost_standard,
    })
}

/// Blows up B_m ∩ B_other (adjacent) and applies the contraction rule. Returns the new m.
fn blow_up_between(w: &mut Vec<i64>, m: usize, other: usize) -> Result<usize> {
    let old = w[m];
    w[m] = bump(old, -1)?;
    w[other] = bump(w[other], -1)?;
    let pos = m.max(other);
    w.insert(pos, -1);
    let new_m = if other < m { m + 1 } else { m };
    contract_old_m(w, old, new_m, pos)
}

/// Contracts B_m at `m` when its weight before the blow-up was 0; `exc` is the new curve.
fn contract_old_m(w: &mut Vec<i64>, old: i64, m: usize, exc: usize) -> Result<usize> {
    if old != 0 {
        return Ok(m);
    }
    if m > 0 {
        w[m - 1] = bump(w[m - 1], 1)?;
    }
    if m + 1 < w.len() {
        w[m + 1] = bump(w[m + 1], 1)?;
    }
    w.remove(m);
    Ok(if exc > m { exc - 1 } else { exc })
}

/// Every link applicable to `z`. Type IV free links carry the placeholder center `*`.
pub fn applicable_links(z: &MarkedZigzag) -> Vec<ElementaryLink> {
    let w = z.weights();
    let (n, m) = (w.len(), z.m());
    let mut out = Vec::new();
    if w.contains(&-1) {
        if z.l().is_some_and(|l| w[l] == -1) {
            out.push(ElementaryLink::I);
        }
        if m > 0 && w[m - 1] == -1 {
            out.push(ElementaryLink::II { side: Side::Left });
        }
        if m + 1 < n && w[m + 1] == -1 {
            out.push(ElementaryLink::II { side: Side::Right });
        }
    } else if m > 0 && m + 1 < n {
        out.push(ElementaryLink::III { side: Side::Left });
        out.push(ElementaryLink::III { side: Side::Right });
    } else {
        if n > 1 {
            out.push(ElementaryLink::IV {
                point: IvPoint::Neighbor,
            });
        }
        out.push(ElementaryLink::iv_free("*"));
    }
    out
}

/// One factor of a fibered modification: an opaque token, its degree, and whether it
/// enters inverted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiberedFactor {
    pub token: String,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inverse: bool,
}

impl FiberedFactor {
    fn inverted(&self) -> Self {
        FiberedFactor {
            inverse: !self.inverse,
            ..self.clone()
        }
    }
}

/// A move between 1-standard pairs.
///
/// * `Reversion` carries its center and the center of its inverse.
/// * `Fibered` is a free-group-reduced product of fibered factors, all centered at
///   [`FIBERED_CENTER`]; a product of several factors may be the identity.
/// * `Isomorphism` is a partial relabeling of center tokens; unnamed tokens are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MoveRepr", into = "MoveRepr")]
pub enum Move {
    Reversion {
        center_in: String,
        center_out: String,
    },
    Fibered {
        factors: Vec<FiberedFactor>,
    },
    Isomorphism {
        map: Vec<(String, String)>,
    },
}

#[derive(Serialize, Deserialize)]
struct MoveRepr {
    kind: String,
    #[serde(rename = "in", default, skip_serializing_if = "Option::is_none")]
    center_in: Option<String>,
    #[serde(rename = "out", default, skip_serializing_if = "Option::is_none")]
    center_out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    token: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    factors: Option<Vec<FiberedFactor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    map: Option<Vec<(String, String)>>,
}

impl TryFrom<MoveRepr> for Move {
    type Error = Error;
    fn try_from(r: MoveRepr) -> Result<Self> {
        let mv = match r.kind.as_str() {
            "rev" => Move::Reversion {
                center_in: r
                    .center_in
                    .ok_or_else(|| Error::Parse("rev needs \"in\"".into()))?,
                center_out: r
                    .center_out
                    .ok_or_else(|| Error::Parse("rev needs \"out\"".into()))?,
            },
            "fib" => match (r.factors, r.degree) {
                (Some(factors), None) => Move::Fibered { factors },
                (None, Some(degree)) => Move::Fibered {
                    factors: vec![FiberedFactor {
                        token: r.token.unwrap_or_default(),
                        degree,
                        inverse: false,
                    }],
                },
                _ => {
                    return Err(Error::Parse(
                        "fib needs exactly one of \"degree\" or \"factors\"".into(),
                    ))
                }
            },
            "iso" => Move::Isomorphism {
                map: r.map.unwrap_or_default(),
            },
            other => return Err(Error::Parse(format!("unknown move kind {other:?}"))),
        };
        mv.validate()?;
        Ok(mv)
    }
}

impl From<Move> for MoveRepr {
    fn from(m: Move) -> Self {
        let empty = MoveRepr {
            kind: String::new(),
            center_in: None,
            center_out: None,
            degree: None,
            token: None,
            factors: None,
            map: None,
        };
        match m {
            Move::Reversion {
                center_in,
                center_out,
            } => MoveRepr {
                kind: "rev".into(),
                center_in: Some(center_in),
                center_out: Some(center_out),
                ..empty
            },
            Move::Fibered { factors } => match <[FiberedFactor; 1]>::try_from(factors) {
                Ok([f]) if !f.inverse => MoveRepr {
                    kind: "fib".into(),
                    degree: Some(f.degree),
                    token: Some(f.token),
                    ..empty
                },
                Ok([f]) => MoveRepr {
                    kind: "fib".into(),
                    factors: Some(vec![f]),
                    ..empty
                },
                Err(factors) => MoveRepr {
                    kind: "fib".into(),
                    factors: Some(factors),
                    ..empty
                },
            },
            Move::Isomorphism { map } => MoveRepr {
                kind: "iso".into(),
                map: (!map.is_empty()).then_some(map),
                ..empty
            },
        }
    }
}

impl Move {
    pub fn rev(center_in: impl Into<String>, center_out: impl Into<String>) -> Self {
        Move::Reversion {
            center_in: center_in.into(),
            center_out: center_out.into(),
        }
    }

    pub fn fib(token: impl Into<String>, degree: u32) -> Self {
        Move::Fibered {
            factors: vec![FiberedFactor {
                token: token.into(),
                degree,
                inverse: false,
            }],
        }
    }

    pub fn identity() -> Self {
        Move::Isomorphism { map: Vec::new() }
    }

    /// Checks degrees and that reversion centers avoid the fibered center token.
    pub fn validate(&self) -> Result<()> {
        match self {
            Move::Reversion {
                center_in,
                center_out,
            } => {
                for c in [center_in, center_out] {
                    if c == FIBERED_CENTER || c.is_empty() {
                        return Err(Error::InvalidParameter(format!(
                            "invalid reversion center {c:?}"
                        )));
                    }
                }
            }
            Move::Fibered { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidParameter(
                        "fibered move without factors".into(),
                    ));
                }
                if let Some(f) = factors.iter().find(|f| f.degree < 2) {
                    return Err(Error::DegreeTooSmall(f.degree as i64));
                }
            }
            Move::Isomorphism { .. } => {}
        }
        Ok(())
    }

    pub fn is_reversion(&self) -> bool {
        matches!(self, Move::Reversion { .. })
    }

    pub fn is_isomorphism(&self) -> bool {
        matches!(self, Move::Isomorphism { .. })
    }

    /// Proper base point; `None` for isomorphisms.
    pub fn center_in(&self) -> Option<&str> {
        match self {
            Move::Reversion { center_in, .. } => Some(center_in),
            Move::Fibered { .. } => Some(FIBERED_CENTER),
            Move::Isomorphism { .. } => None,
        }
    }

    /// Proper base point of the inverse; `None` for isomorphisms.
    pub fn center_out(&self) -> Option<&str> {
        match self {
            Move::Reversion { center_out, .. } => Some(center_out),
            Move::Fibered { .. } => Some(FIBERED_CENTER),
            Move::Isomorphism { .. } => None,
        }
    }

    /// Highest factor degree of a fibered move.
    pub fn degree(&self) -> Option<u32> {
        match self {
            Move::Fibered { factors } => factors.iter().map(|f| f.degree).max(),
            _ => None,
        }
    }

    /// True for fibered moves merged from several factors, whose identity status only a
    /// concrete family can decide.
    pub fn possibly_identity(&self) -> bool {
        matches!(self, Move::Fibered { factors } if factors.len() > 1)
    }

    pub fn inverse(&self) -> Move {
        match self {
            Move::Reversion {
                center_in,
                center_out,
            } => Move::rev(center_out.clone(), center_in.clone()),
            Move::Fibered { factors } => Move::Fibered {
                factors: factors.iter().rev().map(FiberedFactor::inverted).collect(),
            },
            Move::Isomorphism { map } => Move::Isomorphism {
                map: map.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            },
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Reversion {
                center_in,
                center_out,
            } => write!(f, "rev({center_in}->{center_out})"),
            Move::Fibered { factors } => {
                let parts: Vec<String> = factors
                    .iter()
                    .map(|x| {
                        format!(
                            "{}[{}]{}",
                            x.token,
                            x.degree,
                            if x.inverse { "^-1" } else { "" }
                        )
                    })
                    .collect();
                write!(f, "fib({})", parts.join("*"))
            }
            Move::Isomorphism { map } => {
                let parts: Vec<String> = map.iter().map(|(a, b)| format!("{a}->{b}")).collect();
                write!(f, "iso({})", parts.join(","))
            }
        }
    }
}

fn relabel(map: &[(String, String)], token: &str) -> String {
    map.iter()
        .find(|(a, _)| a == token)
        .map_or_else(|| token.to_string(), |(_, b)| b.clone())
}

fn unrelabel(map: &[(String, String)], token: &str) -> String {
    map.iter()
        .find(|(_, b)| b == token)
        .map_or_else(|| token.to_string(), |(a, _)| a.clone())
}

fn normalize_map(map: BTreeMap<String, String>) -> Vec<(String, String)> {
    map.into_iter().filter(|(a, b)| a != b).collect()
}

/// Relabeling `second ∘ first`.
fn compose_maps(first: &[(String, String)], second: &[(String, String)]) -> Vec<(String, String)> {
    let mut out = BTreeMap::new();
    for (a, b) in first {
        out.insert(a.clone(), relabel(second, b));
    }
    for (a, b) in second {
        if !out.contains_key(a) && !first.iter().any(|(_, y)| y == a) {
            out.insert(a.clone(), b.clone());
        }
    }
    normalize_map(out)
}

/// Free-group reduction of a product of fibered factors.
fn reduce_factors(factors: impl IntoIterator<Item = FiberedFactor>) -> Vec<FiberedFactor> {
    let mut out: Vec<FiberedFactor> = Vec::new();
    for f in factors {
        if out.last().is_some_and(|g| *g == f.inverted()) {
            out.pop();
        } else {
            out.push(f);
        }
    }
    out
}

/// Whether the distinct-center composition rule for two reversions applies.
pub fn reversions_compose(tail: &[i64]) -> bool {
    tail.iter().all(|&e| e == -2)
}

/// Composite of `m1` followed by `m2` (application order), or `None` when the pair is
/// irreducible.
///
/// * Two reversions through the same center give an isomorphism relabeling
///   `center_in(m1)` to `center_out(m2)`.
/// * Two reversions with distinct centers over an all-(-2) tail give a reversion whose
///   centers are derived tokens `a~c` and `d~b` for `rev(a->b)`, `rev(c->d)`.
/// * Fibered moves merge their factor lists; an empty product is the identity.
/// * Isomorphisms are absorbed into their neighbour.
pub fn compose_adjacent(m1: &Move, m2: &Move, tail: &[i64]) -> Result<Option<Move>> {
    m1.validate()?;
    m2.validate()?;
    Ok(match (m1, m2) {
        (Move::Isomorphism { map: a }, Move::Isomorphism { map: b }) => Some(Move::Isomorphism {
            map: compose_maps(a, b),
        }),
        (
            Move::Isomorphism { map },
            Move::Reversion {
                center_in,
                center_out,
            },
        ) => Some(Move::rev(unrelabel(map, center_in), center_out.clone())),
        (
            Move::Reversion {
                center_in,
                center_out,
            },
            Move::Isomorphism { map },
        ) => Some(Move::rev(center_in.clone(), relabel(map, center_out))),
        (Move::Isomorphism { .. }, f @ Move::Fibered { .. })
        | (f @ Move::Fibered { .. }, Move::Isomorphism { .. }) => Some(f.clone()),
        (Move::Fibered { factors: a }, Move::Fibered { factors: b }) => {
            let merged = reduce_factors(a.iter().chain(b).cloned());
            Some(if merged.is_empty() {
                Move::identity()
            } else {
                Move::Fibered { factors: merged }
            })
        }
        (
            Move::Reversion {
                center_in: a,
                center_out: b,
            },
            Move::Reversion {
                center_in: c,
                center_out: d,
            },
        ) => {
            if b == c {
                let mut map = BTreeMap::new();
                map.insert(a.clone(), d.clone());
                Some(Move::Isomorphism {
                    map: normalize_map(map),
                })
            } else if reversions_compose(tail) {
                Some(Move::rev(format!("{a}~{c}"), format!("{d}~{b}")))
            } else {
                None
            }
        }
        (Move::Reversion { .. }, Move::Fibered { .. })
        | (Move::Fibered { .. }, Move::Reversion { .. }) => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mz(w: &[i64]) -> MarkedZigzag {
        MarkedZigzag::infer(w.to_vec()).unwrap()
    }

    fn apply(w: &[i64], link: ElementaryLink) -> Vec<i64> {
        apply_link(&mz(w), &link).unwrap().zigzag.weights().to_vec()
    }

    #[test]
    fn type_ii_figure() {
        assert_eq!(
            apply(&[-3, 0, -1], ElementaryLink::II { side: Side::Right }),
            vec![-2, 0, -2]
        );
        let out = apply_link(&mz(&[0, -1, -4]), &ElementaryLink::II { side: Side::Right }).unwrap();
        assert_eq!(out.zigzag.weights(), [0, -2, -4]);
        assert_eq!(out.zigzag.m(), 0);
        assert!(out.almost_standard);
    }

    #[test]
    fn type_iii_figure() {
        assert_eq!(
            apply(&[-2, 0, -3], ElementaryLink::III { side: Side::Right }),
            vec![-1, 0, -4]
        );
        assert_eq!(
            apply(&[-2, 2, -3], ElementaryLink::III { side: Side::Right }),
            vec![-2, 1, -1, -4]
        );
        assert_eq!(
            apply(&[-2, 0, -3], ElementaryLink::III { side: Side::Left }),
            vec![-3, 0, -2]
        );
    }

    #[test]
    fn type_iv_and_i() {
        assert_eq!(
            apply(
                &[1, -3],
                ElementaryLink::IV {
                    point: IvPoint::Neighbor
                }
            ),
            vec![0, -1, -4]
        );
        assert_eq!(
            apply(&[-3, 1], ElementaryLink::iv_free("q")),
            vec![-3, 0, -1]
        );
        assert_eq!(apply(&[0, -2], ElementaryLink::iv_free("q")), vec![0, -1]);
        assert_eq!(apply(&[2], ElementaryLink::iv_free("q")), vec![1, -1]);
        assert_eq!(apply(&[-3, -1, 0], ElementaryLink::I), vec![-2, 1]);
    }

    #[test]
    fn inapplicable_links_error() {
        let z = mz(&[0, -1, -3]);
        assert!(apply_link(&z, &ElementaryLink::III { side: Side::Right }).is_err());
        assert!(apply_link(
            &z,
            &ElementaryLink::IV {
                point: IvPoint::Neighbor
            }
        )
        .is_err());
        assert!(apply_link(&mz(&[-2, 0, -3]), &ElementaryLink::I).is_err());
        assert!(apply_link(
            &mz(&[-2, 0, -3]),
            &ElementaryLink::IV {
                point: IvPoint::Neighbor
            }
        )
        .is_err());
    }

    #[test]
    fn applicable_link_lists() {
        assert_eq!(
            applicable_links(&mz(&[0, -1, -3])),
            vec![ElementaryLink::I, ElementaryLink::II { side: Side::Right }]
        );
        assert_eq!(
            applicable_links(&mz(&[-2, 0, -3])),
            vec![
                ElementaryLink::III { side: Side::Left },
                ElementaryLink::III { side: Side::Right }
            ]
        );
        let kinds: Vec<LinkKind> = applicable_links(&mz(&[0, -2]))
            .iter()
            .map(ElementaryLink::kind)
            .collect();
        assert_eq!(kinds, vec![LinkKind::IV, LinkKind::IV]);
    }

    #[test]
    fn link_json() {
        let l: ElementaryLink = serde_json::from_str(r#"{"kind":"III","side":"right"}"#).unwrap();
        assert_eq!(l, ElementaryLink::III { side: Side::Right });
        for l in [
            ElementaryLink::I,
            ElementaryLink::iv_free("z1"),
            ElementaryLink::IV {
                point: IvPoint::Neighbor,
            },
        ] {
            let s = serde_json::to_string(&l).unwrap();
            assert_eq!(serde_json::from_str::<ElementaryLink>(&s).unwrap(), l);
        }
    }

    #[test]
    fn move_json() {
        let m: Move = serde_json::from_str(r#"{"kind":"rev","in":"p0","out":"p1"}"#).unwrap();
        assert_eq!(m, Move::rev("p0", "p1"));
        let f: Move = serde_json::from_str(r#"{"kind":"fib","degree":2,"token":"f0"}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            r#"{"kind":"fib","degree":2,"token":"f0"}"#
        );
        assert!(serde_json::from_str::<Move>(r#"{"kind":"fib","degree":1}"#).is_err());
        assert!(serde_json::from_str::<Move>(r#"{"kind":"rev","in":"FnC","out":"p"}"#).is_err());
        let merged = compose_adjacent(&Move::fib("a", 2), &Move::fib("b", 3), &[])
            .unwrap()
            .unwrap();
        let s = serde_json::to_string(&merged).unwrap();
        assert_eq!(serde_json::from_str::<Move>(&s).unwrap(), merged);
    }

    #[test]
    fn compose_examples() {
        let tail3 = [-3];
        assert_eq!(
            compose_adjacent(&Move::rev("p", "p'"), &Move::rev("p'", "q"), &tail3).unwrap(),
            Some(Move::Isomorphism {
                map: vec![("p".into(), "q".into())]
            })
        );
        assert_eq!(
            compose_adjacent(&Move::rev("p", "p'"), &Move::rev("p'", "p"), &tail3).unwrap(),
            Some(Move::identity())
        );
        let r = compose_adjacent(&Move::rev("a", "b"), &Move::rev("c", "d"), &[-2, -2])
            .unwrap()
            .unwrap();
        assert!(r.is_reversion());
        assert_eq!(
            compose_adjacent(&Move::rev("a", "b"), &Move::rev("c", "d"), &[-2, -3]).unwrap(),
            None
        );
        let f = compose_adjacent(&Move::fib("x", 2), &Move::fib("y", 3), &tail3)
            .unwrap()
            .unwrap();
        assert!(f.possibly_identity());
        assert_eq!(f.degree(), Some(3));
        assert_eq!(
            compose_adjacent(&f, &f.inverse(), &tail3).unwrap(),
            Some(Move::identity())
        );
    }

    #[test]
    fn iso_absorption_relabels() {
        let iso = Move::Isomorphism {
            map: vec![("p".into(), "q".into())],
        };
        assert_eq!(
            compose_adjacent(&iso, &Move::rev("q", "r"), &[-3]).unwrap(),
            Some(Move::rev("p", "r"))
        );
        assert_eq!(
            compose_adjacent(&Move::rev("a", "p"), &iso, &[-3]).unwrap(),
            Some(Move::rev("a", "q"))
        );
    }

    fn arb_move() -> impl Strategy<Value = Move> {
        prop_oneof![
            (0u8..3, 0u8..3).prop_map(|(a, b)| Move::rev(format!("p{a}"), format!("p{b}"))),
            (0u8..2, 2u32..4).prop_map(|(t, d)| Move::fib(format!("f{t}"), d)),
        ]
    }

    proptest! {
        #[test]
        fn composite_of_inverses_is_inverse_of_composite(a in arb_move(), b in arb_move()) {
            let tail = [-2, -2];
            let ab = compose_adjacent(&a, &b, &tail).unwrap();
            let ba = compose_adjacent(&b.inverse(), &a.inverse(), &tail).unwrap();
            prop_assert_eq!(ab.map(|m| m.inverse()), ba);
        }

        #[test]
        fn applicable_links_apply(w in prop::collection::vec(-5i64..-1, 0..5), pos in 0usize..6, a in 0i64..3) {
            let mut w = w;
            let m = pos % (w.len() + 1);
            w.insert(m, a);
            let z = MarkedZigzag::new(w.clone(), m, None).unwrap();
            for link in applicable_links(&z) {
                let out = apply_link(&z, &link).unwrap();
                prop_assert!(out.almost_standard, "{} on {:?}", link, w);
            }
        }
    }
}
