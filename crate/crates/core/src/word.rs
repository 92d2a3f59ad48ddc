//! Words of moves between 1-standard pairs, read in application order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moves::{compose_adjacent, reversions_compose, Move};
use crate::zigzag::ZigzagType;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WordRepr")]
pub struct MoveWord {
    base: ZigzagType,
    moves: Vec<Move>,
}

#[derive(Deserialize)]
struct WordRepr {
    base: ZigzagType,
    moves: Vec<Move>,
}

impl TryFrom<WordRepr> for MoveWord {
    type Error = Error;
    fn try_from(r: WordRepr) -> Result<Self> {
        MoveWord::new(r.base, r.moves)
    }
}

impl MoveWord {
    pub fn new(base: ZigzagType, moves: Vec<Move>) -> Result<Self> {
        base.tail()?;
        for m in &moves {
            m.validate()?;
        }
        Ok(MoveWord { base, moves })
    }

    pub fn base(&self) -> &ZigzagType {
        &self.base
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    fn tail(&self) -> &[i64] {
        self.base.tail().expect("base is 1-standard")
    }

    pub fn reversion_count(&self) -> usize {
        self.moves.iter().filter(|m| m.is_reversion()).count()
    }

    /// Types after each move: reversions reverse the tail, other moves fix it.
    pub fn type_trace(&self) -> Vec<ZigzagType> {
        let mut tail = self.tail().to_vec();
        self.moves
            .iter()
            .map(|m| {
                if m.is_reversion() {
                    tail.reverse();
                }
                ZigzagType::from_tail(&tail)
            })
            .collect()
    }

    pub fn final_type(&self) -> ZigzagType {
        self.type_trace().pop().unwrap_or_else(|| self.base.clone())
    }

    /// True iff the word is a single isomorphism, or has no isomorphism, no adjacent pair
    /// whose inner centers agree, and no adjacent reversions unless the tail has an entry
    /// at most -3.
    pub fn is_minimal(&self) -> bool {
        if let [m] = &self.moves[..] {
            return m.validate().is_ok();
        }
        if self.moves.iter().any(Move::is_isomorphism) {
            return false;
        }
        let rev_pairs_ok = !reversions_compose(self.tail());
        self.moves.windows(2).all(|p| {
            p[0].center_out() != p[1].center_in()
                && (rev_pairs_ok || !(p[0].is_reversion() && p[1].is_reversion()))
        })
    }

    /// Minimal form by repeated adjacent composition.
    ///
    /// Adjacent mutually inverse moves are cancelled first, as in a free group; this
    /// stage is confluent, so inserting a cancelling pair never changes the result.
    /// Each later round applies the first composition that merges moves through a shared
    /// center (same-center reversions, fibered pairs, isomorphism absorption); only when
    /// none exists does it compose two reversions with distinct centers. An empty result
    /// is the identity isomorphism.
    pub fn reduce(&self) -> MoveWord {
        let tail = self.tail().to_vec();
        let mut moves: Vec<Move> = Vec::with_capacity(self.moves.len());
        for m in &self.moves {
            if moves.last() == Some(&m.inverse()) {
                moves.pop();
            } else {
                moves.push(m.clone());
            }
        }
        loop {
            let step = Self::find_step(&moves, &tail, true)
                .or_else(|| Self::find_step(&moves, &tail, false));
            let Some((i, composite)) = step else { break };
            moves.splice(i..i + 2, [composite]);
        }
        if moves.is_empty() {
            moves.push(Move::identity());
        }
        MoveWord {
            base: self.base.clone(),
            moves,
        }
    }

    fn find_step(moves: &[Move], tail: &[i64], shared_center: bool) -> Option<(usize, Move)> {
        moves.windows(2).enumerate().find_map(|(i, p)| {
            let through_center = p[0].is_isomorphism()
                || p[1].is_isomorphism()
                || p[0].center_out() == p[1].center_in();
            if through_center != shared_center {
                return None;
            }
            compose_adjacent(&p[0], &p[1], tail)
                .ok()
                .flatten()
                .map(|c| (i, c))
        })
    }

    /// Formal inverse: moves reversed and inverted, based at the final type.
    pub fn invert(&self) -> MoveWord {
        MoveWord {
            base: self.final_type(),
            moves: self.moves.iter().rev().map(Move::inverse).collect(),
        }
    }

    /// `self` followed by `other`; `other` must start at the final type of `self`.
    pub fn concat(&self, other: &MoveWord) -> Result<MoveWord> {
        if other.base != self.final_type() {
            return Err(Error::InvalidParameter(format!(
                "word starts at {} but the previous word ends at {}",
                other.base,
                self.final_type()
            )));
        }
        let mut moves = self.moves.clone();
        moves.extend(other.moves.iter().cloned());
        Ok(MoveWord {
            base: self.base.clone(),
            moves,
        })
    }

    /// Inserts `moves` before position `at`, keeping the base.
    pub fn with_inserted(&self, at: usize, moves: &[Move]) -> Result<MoveWord> {
        let mut out = self.moves.clone();
        out.splice(at..at, moves.iter().cloned());
        MoveWord::new(self.base.clone(), out)
    }
}

impl fmt::Display for MoveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.moves.iter().map(Move::to_string).collect();
        write!(f, "({}) [{}]", self.base, parts.join(", "))
    }
}

/// Free-standing form of [`MoveWord::invert`].
pub fn invert_word(w: &MoveWord) -> MoveWord {
    w.invert()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word(tail: &[i64], moves: Vec<Move>) -> MoveWord {
        MoveWord::new(ZigzagType::from_tail(tail), moves).unwrap()
    }

    #[test]
    fn minimality_examples() {
        assert!(word(
            &[-2, -3],
            vec![
                Move::rev("p", "p'"),
                Move::fib("f", 2),
                Move::rev("q", "q'")
            ]
        )
        .is_minimal());
        assert!(!word(&[-2, -3], vec![Move::fib("f", 2), Move::fib("g", 3)]).is_minimal());
        assert!(!word(&[-2, -2], vec![Move::rev("a", "b"), Move::rev("c", "d")]).is_minimal());
        assert!(word(&[-2, -3], vec![Move::rev("a", "b"), Move::rev("c", "d")]).is_minimal());
        assert!(word(&[-3], vec![Move::identity()]).is_minimal());
    }

    #[test]
    fn reduce_examples() {
        let w = word(&[-3], vec![Move::rev("p", "p'"), Move::rev("p'", "q")]).reduce();
        assert_eq!(w.len(), 1);
        assert!(w.moves()[0].is_isomorphism());

        let w = word(&[-3], vec![Move::fib("a", 2), Move::fib("b", 3)]).reduce();
        assert_eq!(w.len(), 1);
        assert!(w.moves()[0].possibly_identity());

        let w = word(
            &[-2, -2],
            vec![
                Move::rev("a", "b"),
                Move::rev("c", "d"),
                Move::rev("e", "f"),
            ],
        )
        .reduce();
        assert_eq!(w.len(), 1);
        assert!(w.moves()[0].is_reversion());
    }

    #[test]
    fn trace_examples() {
        let w = word(
            &[-2, -3],
            vec![Move::rev("p", "q"), Move::fib("f", 2), Move::rev("r", "s")],
        );
        let trace: Vec<String> = w.type_trace().iter().map(ToString::to_string).collect();
        assert_eq!(trace, ["0,-1,-3,-2", "0,-1,-3,-2", "0,-1,-2,-3"]);
        assert_eq!(
            word(&[-3], vec![Move::rev("p", "q")]).type_trace(),
            vec![ZigzagType::from_tail(&[-3])]
        );
    }

    #[test]
    fn inversion() {
        let w = word(&[-2, -3], vec![Move::rev("p", "p'")]);
        let inv = w.invert();
        assert_eq!(inv.moves(), [Move::rev("p'", "p")]);
        assert_eq!(inv.base(), &ZigzagType::from_tail(&[-3, -2]));
        assert_eq!(inv.invert(), w);
        let back = w.concat(&inv).unwrap().reduce();
        assert_eq!(back.moves(), [Move::identity()]);
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"base":{"weights":[0,-1,-2,-3]},"moves":[{"kind":"rev","in":"p0","out":"p1"},{"kind":"fib","degree":2,"token":"f0"},{"kind":"iso"}]}"#;
        let w: MoveWord = serde_json::from_str(s).unwrap();
        assert_eq!(serde_json::to_string(&w).unwrap(), s);
        assert!(
            serde_json::from_str::<MoveWord>(r#"{"base":{"weights":[0,-2]},"moves":[]}"#).is_err()
        );
    }

    fn arb_move() -> impl Strategy<Value = Move> {
        prop_oneof![
            4 => (0u8..4, 0u8..4).prop_map(|(a, b)| Move::rev(format!("p{a}"), format!("p{b}"))),
            2 => (0u8..3, 2u32..5).prop_map(|(t, d)| Move::fib(format!("f{t}"), d)),
            1 => Just(Move::identity()),
        ]
    }

    fn arb_word() -> impl Strategy<Value = MoveWord> {
        (
            prop::collection::vec(-4i64..=-2, 0..4),
            prop::collection::vec(arb_move(), 0..10),
        )
            .prop_map(|(tail, moves)| word(&tail, moves))
    }

    proptest! {
        #[test]
        fn reduce_is_minimal_and_idempotent(w in arb_word()) {
            let r = w.reduce();
            prop_assert!(r.is_minimal(), "{} -> {}", w, r);
            prop_assert_eq!(r.reduce(), r.clone());
            prop_assert!(r.len() <= w.len().max(1));
            prop_assert_eq!(r.final_type(), w.final_type());
        }

        #[test]
        fn cancelling_pair_is_invisible(w in arb_word(), at in 0usize..11, x in 0u8..5, y in 0u8..5) {
            let pair = [Move::rev(format!("p{x}"), format!("p{y}")), Move::rev(format!("p{y}"), format!("p{x}"))];
            let v = w.with_inserted(at % (w.len() + 1), &pair).unwrap();
            prop_assert_eq!(v.reduce().len(), w.reduce().len(), "{} vs {}", v, w);
        }

        #[test]
        fn word_times_inverse_is_identity(w in arb_word()) {
            let r = w.reduce();
            let back = r.concat(&r.invert()).unwrap().reduce();
            prop_assert_eq!(back.moves(), [Move::identity()]);
        }
    }
}
