//! Fixtures shared by the benchmarks. All inputs are deterministic.

use standard_pairs::field::Field;
use standard_pairs::{MPoly, Move, MoveWord, PolyAut, ZigzagType};

/// `(0, -1, -3, -4, ..., -(len + 2))`.
pub fn long_type(len: usize) -> ZigzagType {
    let tail: Vec<i64> = (0..len as i64).map(|i| -(i + 3)).collect();
    ZigzagType::from_tail(&tail)
}

/// `blocks` rounds of `(x, y + 1 + x^deg)` followed by the swap, composed into one map.
pub fn plane_map<F: Field>(field: &F, blocks: usize, deg: usize) -> PolyAut<F> {
    let mut coeffs = vec![field.zero(); deg];
    coeffs.push(field.one());
    coeffs[0] = field.one();
    let p = MPoly::from_coeffs(field, &coeffs);
    let tri = PolyAut::triangular(field, field.one(), field.zero(), field.one(), &p)
        .expect("unit coefficients");
    let swap = PolyAut::swap(field);
    (0..blocks).fold(PolyAut::identity(field), |acc, _| {
        let step = swap.compose(&tri).expect("same field");
        step.compose(&acc).expect("same field")
    })
}

/// A word of `pairs` reversion pairs through shared centers with fibered moves between
/// them; reduction merges every shared-center pair.
pub fn reducible_word(pairs: usize) -> MoveWord {
    let mut moves = Vec::with_capacity(3 * pairs);
    for i in 0..pairs {
        moves.push(Move::rev(format!("a{i}"), format!("b{i}")));
        moves.push(Move::rev(format!("b{i}"), format!("c{i}")));
        moves.push(Move::fib(format!("t{i}"), 2 + (i % 3) as u32));
    }
    MoveWord::new(ZigzagType::from_tail(&[-3, -2]), moves).expect("valid moves")
}

#[cfg(test)]
mod tests {
    use super::*;
    use standard_pairs::field::PrimeField;
    use standard_pairs::plane::{jung_factorize, FactorKind};

    #[test]
    fn plane_map_has_one_triangular_factor_per_round() {
        let f = PrimeField::new(101).unwrap();
        let g = plane_map(&f, 3, 3);
        assert_eq!(g.degree(), 27);
        let factors = jung_factorize(&g).unwrap();
        let kinds: Vec<FactorKind> = factors.iter().map(|f| f.kind).collect();
        use FactorKind::{Affine, Triangular};
        assert_eq!(
            kinds,
            [Triangular, Affine, Triangular, Affine, Triangular, Affine]
        );
    }

    #[test]
    fn reducible_word_shrinks() {
        let w = reducible_word(4);
        let r = w.reduce();
        assert!(r.len() < w.len());
        assert!(r.is_minimal());
    }
}
