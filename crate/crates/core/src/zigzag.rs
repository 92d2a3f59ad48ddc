//! Zigzag types and almost-standard markings.
//!
//! A zigzag is recorded by its type: the ordered list of self-intersection numbers of
//! its components. Positions are 0-based throughout.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered, nonempty list of self-intersection numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "ZigzagRepr")]
pub struct ZigzagType {
    weights: Vec<i64>,
}

#[derive(Deserialize)]
struct ZigzagRepr {
    weights: Vec<i64>,
}

impl TryFrom<ZigzagRepr> for ZigzagType {
    type Error = Error;
    fn try_from(r: ZigzagRepr) -> Result<Self> {
        ZigzagType::new(r.weights)
    }
}

impl ZigzagType {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyZigzag);
        }
        Ok(ZigzagType { weights })
    }

    /// The 1-standard shape `(0, -1, tail...)`; the tail is not validated.
    pub fn from_tail(tail: &[i64]) -> Self {
        let mut weights = vec![0, -1];
        weights.extend_from_slice(tail);
        ZigzagType { weights }
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn reverse(&self) -> Self {
        let mut weights = self.weights.clone();
        weights.reverse();
        ZigzagType { weights }
    }

    pub fn concat(&self, other: &ZigzagType) -> Self {
        self.extend(&other.weights)
    }

    /// Concatenation with a possibly empty chain.
    pub fn extend(&self, chain: &[i64]) -> Self {
        let mut weights = self.weights.clone();
        weights.extend_from_slice(chain);
        ZigzagType { weights }
    }

    /// True iff the type is `(0, -m, e_1, ..., e_r)` with every `e_i <= -2`.
    pub fn is_m_standard(&self, m: i64) -> bool {
        let w = &self.weights;
        w.len() >= 2
            && w[0] == 0
            && m.checked_neg() == Some(w[1])
            && w[2..].iter().all(|&e| e <= -2)
    }

    pub fn is_one_standard(&self) -> bool {
        self.is_m_standard(1)
    }

    /// The tail `(e_1, ..., e_r)` of a 1-standard type.
    pub fn tail(&self) -> Result<&[i64]> {
        if self.is_one_standard() {
            Ok(&self.weights[2..])
        } else {
            Err(Error::NotOneStandard(self.to_string()))
        }
    }

    pub fn is_palindrome(&self) -> bool {
        self.weights.iter().eq(self.weights.iter().rev())
    }
}

impl fmt::Display for ZigzagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_weights(f, &self.weights)
    }
}

fn write_weights(f: &mut fmt::Formatter<'_>, w: &[i64]) -> fmt::Result {
    for (i, x) in w.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// Parses a comma-separated weight list such as `0,-1,-2,-3`.
pub fn parse_weights(s: &str) -> Result<Vec<i64>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("weight {:?}: {e}", p.trim())))
        })
        .collect()
}

impl FromStr for ZigzagType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ZigzagType::new(parse_weights(s)?)
    }
}

/// A zigzag together with the positions of its positive curve `m` and its (-1)-curve `l`.
///
/// Values may violate the almost-standard invariants; [`MarkedZigzag::validate_almost_standard`]
/// reports whether they hold.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MarkedRepr")]
pub struct MarkedZigzag {
    weights: Vec<i64>,
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<usize>,
}

#[derive(Deserialize)]
struct MarkedRepr {
    weights: Vec<i64>,
    m: Option<usize>,
    l: Option<usize>,
}

impl TryFrom<MarkedRepr> for MarkedZigzag {
    type Error = Error;
    fn try_from(r: MarkedRepr) -> Result<Self> {
        match r.m {
            Some(m) => MarkedZigzag::new(r.weights, m, r.l),
            None => MarkedZigzag::infer(r.weights),
        }
    }
}

impl MarkedZigzag {
    /// Builds a marking; only index bounds are checked.
    pub fn new(weights: Vec<i64>, m: usize, l: Option<usize>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyZigzag);
        }
        let n = weights.len();
        if m >= n || l.is_some_and(|l| l >= n || l == m) {
            return Err(Error::InvalidParameter(format!(
                "marker out of range: m={m}, l={l:?}, length {n}"
            )));
        }
        Ok(MarkedZigzag { weights, m, l })
    }

    /// Infers `m` as the unique non-negative weight and `l` as an adjacent (-1)-curve.
    pub fn infer(weights: Vec<i64>) -> Result<Self> {
        let nonneg: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] >= 0).collect();
        if nonneg.len() != 1 {
            return Err(Error::InvalidParameter(format!(
                "expected exactly one non-negative weight, found {}",
                nonneg.len()
            )));
        }
        let m = nonneg[0];
        let l = pick_minus_one(&weights, m);
        MarkedZigzag::new(weights, m, l)
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> Option<usize> {
        self.l
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_type(&self) -> ZigzagType {
        ZigzagType {
            weights: self.weights.clone(),
        }
    }

    /// Mirror image: weights reversed, markers moved accordingly.
    pub fn reverse(&self) -> Self {
        let n = self.weights.len();
        let mut weights = self.weights.clone();
        weights.reverse();
        MarkedZigzag {
            weights,
            m: n - 1 - self.m,
            l: self.l.map(|l| n - 1 - l),
        }
    }

    /// True iff exactly one weight is non-negative (at `m`), at most one weight is -1,
    /// and a present (-1)-curve sits at `l` with `|l - m| = 1`.
    pub fn validate_almost_standard(&self) -> bool {
        let w = &self.weights;
        let nonneg: Vec<usize> = (0..w.len()).filter(|&i| w[i] >= 0).collect();
        if nonneg != [self.m] {
            return false;
        }
        let minus: Vec<usize> = (0..w.len()).filter(|&i| w[i] == -1).collect();
        match (minus.as_slice(), self.l) {
            ([], None) => true,
            ([i], Some(l)) => *i == l && l.abs_diff(self.m) == 1,
            _ => false,
        }
    }

    pub fn minus_one_count(&self) -> usize {
        self.weights.iter().filter(|&&x| x == -1).count()
    }
}

impl fmt::Display for MarkedZigzag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_weights(f, &self.weights)?;
        write!(f, ") m={}", self.m)?;
        if let Some(l) = self.l {
            write!(f, " l={l}")?;
        }
        Ok(())
    }
}

/// A (-1)-curve adjacent to `m`, preferring the right neighbour; otherwise the first (-1)-curve.
pub(crate) fn pick_minus_one(weights: &[i64], m: usize) -> Option<usize> {
    let adjacent = [m.checked_add(1), m.checked_sub(1)];
    adjacent
        .into_iter()
        .flatten()
        .find(|&i| i < weights.len() && weights[i] == -1)
        .or_else(|| (0..weights.len()).find(|&i| i != m && weights[i] == -1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(w: &[i64]) -> ZigzagType {
        ZigzagType::new(w.to_vec()).unwrap()
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(z(&[0, -1, -2, -3]).reverse(), z(&[-3, -2, -1, 0]));
        assert_eq!(z(&[0, -1, -3, -2]).reverse(), z(&[-2, -3, -1, 0]));
        assert_eq!(z(&[0, 0]).reverse(), z(&[0, 0]));
    }

    #[test]
    fn m_standard_examples() {
        assert!(z(&[0, -1, -2, -3]).is_m_standard(1));
        assert!(z(&[0, -1]).is_m_standard(1));
        assert!(!z(&[0, -1, -1]).is_m_standard(1));
        assert!(z(&[0, -2, -5]).is_m_standard(2));
        assert!(!z(&[0, -1, -2]).is_m_standard(2));
    }

    #[test]
    fn almost_standard_examples() {
        assert!(MarkedZigzag::new(vec![-2, 0, -3], 1, None)
            .unwrap()
            .validate_almost_standard());
        assert!(MarkedZigzag::new(vec![0, -1, -2], 0, Some(1))
            .unwrap()
            .validate_almost_standard());
        assert!(!MarkedZigzag::new(vec![-1, 0, -1], 1, Some(0))
            .unwrap()
            .validate_almost_standard());
        assert!(MarkedZigzag::infer(vec![-1, 0, -1]).is_ok());
    }

    #[test]
    fn concat_examples() {
        assert_eq!(z(&[0]).concat(&z(&[-1, -2])), z(&[0, -1, -2]));
        assert_eq!(z(&[0, -1]).extend(&[]), z(&[0, -1]));
        assert_eq!(
            z(&[-3, -1]).concat(&z(&[-2, -1, -3])),
            z(&[-3, -1, -2, -1, -3])
        );
    }

    #[test]
    fn empty_rejected_at_parse() {
        assert_eq!("".parse::<ZigzagType>(), Err(Error::EmptyZigzag));
        assert!(serde_json::from_str::<ZigzagType>(r#"{"weights":[]}"#).is_err());
        let t: ZigzagType = serde_json::from_str(r#"{"weights":[0,-1,-2,-3]}"#).unwrap();
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"weights":[0,-1,-2,-3]}"#
        );
    }

    #[test]
    fn marked_json_round_trip() {
        let mz: MarkedZigzag =
            serde_json::from_str(r#"{"weights":[0,-1,-2],"m":0,"l":1}"#).unwrap();
        let back: MarkedZigzag =
            serde_json::from_str(&serde_json::to_string(&mz).unwrap()).unwrap();
        assert_eq!(mz, back);
    }

    fn weights() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-8i64..3, 1..9)
    }

    proptest! {
        #[test]
        fn reverse_is_involution(w in weights()) {
            let t = z(&w);
            prop_assert_eq!(t.reverse().reverse(), t);
        }

        #[test]
        fn concat_associative_and_reverses(a in weights(), b in weights(), c in weights()) {
            let (a, b, c) = (z(&a), z(&b), z(&c));
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
            prop_assert_eq!(a.concat(&b).reverse(), b.reverse().concat(&a.reverse()));
        }

        #[test]
        fn one_standard_is_almost_standard(tail in prop::collection::vec(-8i64..=-2, 0..6)) {
            let t = ZigzagType::from_tail(&tail);
            prop_assert!(t.is_m_standard(1));
            let mz = MarkedZigzag::new(t.weights().to_vec(), 0, Some(1)).unwrap();
            prop_assert!(mz.validate_almost_standard());
        }
    }
}
