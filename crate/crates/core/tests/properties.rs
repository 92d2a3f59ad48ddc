mod common;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use standard_pairs::field::{Field, PrimeField, Rationals};
use standard_pairs::moves::{apply_link, reversion_links, reversion_transform};
use standard_pairs::plane::{compose_factors, jung_factorize};
use standard_pairs::poly::MPoly;
use standard_pairs::uvp::{apply, check_relation, normal_form, SurfaceUvp, UvpGen};
use standard_pairs::{MarkedZigzag, ZigzagType};

fn arb_tail() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-7i64..=-2, 0..=6)
}

proptest! {
    #[test]
    fn reversion_matches_weight_oracle(tail in arb_tail()) {
        let t = ZigzagType::from_tail(&tail);
        let r = reversion_transform(&t).unwrap();
        prop_assert_eq!(&r, &reversed_type_oracle(&t));
        prop_assert_eq!(reversion_transform(&r).unwrap(), t);
    }

    #[test]
    fn reversion_links_replay_on_the_dual_graph(tail in prop::collection::vec(-6i64..=-2, 0..=4)) {
        let t = ZigzagType::from_tail(&tail);
        let start = t.reverse();
        let n = start.len();
        let mut z = MarkedZigzag::new(start.weights().to_vec(), n - 1, Some(n - 2)).unwrap();
        let mut replay = GraphReplay::for_reversion(&t);
        for link in reversion_links(&t).unwrap() {
            z = apply_link(&z, &link).unwrap().zigzag;
            replay.apply(&link).unwrap();
            prop_assert_eq!(replay.weights(), z.weights().to_vec());
        }
        prop_assert_eq!(z.to_type(), reversion_transform(&t).unwrap());
    }

    #[test]
    fn link_counts_follow_the_tail(tail in prop::collection::vec(-6i64..=-2, 0..=4)) {
        let links = reversion_links(&ZigzagType::from_tail(&tail)).unwrap();
        let [i, ii, iii, iv] = count_kinds(&links);
        let want = expected_link_counts(&tail);
        prop_assert_eq!(i, want.i);
        prop_assert_eq!(links.len(), want.total);
        if let Some(split) = want.split {
            prop_assert_eq!((ii, iii, iv), split);
        }
    }

    #[test]
    fn reduced_words_keep_the_final_type(seed in any::<u64>()) {
        let w = random_word(&mut rng(seed));
        let r = w.reduce();
        // A trivial word reduces to a single isomorphism.
        prop_assert!(r.len() <= w.len().max(1));
        prop_assert_eq!(r.final_type(), w.final_type());
        prop_assert_eq!(r.reduce(), r);
    }

    #[test]
    fn plane_composition_agrees_with_pointwise_evaluation(seed in any::<u64>()) {
        let f101 = PrimeField::new(101).unwrap();
        let mut rng = rng(seed);
        let word = random_plane_word(&mut rng, &f101, 5, 4);
        let f = compose_word(&f101, &word);
        for _ in 0..20 {
            let p0 = [f101.from_i64(rng.random_range(0..101)), f101.from_i64(rng.random_range(0..101))];
            let stepwise = word.iter().fold(p0, |p, g| g.eval(&p));
            prop_assert_eq!(f.eval(&p0), stepwise);
        }
    }

    #[test]
    fn jung_factors_recompose_over_q(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let f = compose_word(&Rationals, &random_plane_word(&mut rng, &Rationals, 5, 4));
        let factors = jung_factorize(&f).unwrap();
        prop_assert_eq!(compose_factors(&Rationals, &factors).unwrap(), f);
    }

    #[test]
    fn uvp_words_preserve_the_relation(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = rng(seed);
        let s = random_p(&mut rng, &Rationals, n);
        let w = random_uvp_word(&mut rng, &s, 6, 1);
        let k = check_relation(&w, &s).unwrap();
        prop_assert!(!Rationals.is_zero(&k));
    }
}

#[test]
fn translation_expands_on_the_quadric() {
    let q = Rationals;
    let s = SurfaceUvp::parse(&q, "w^2 - 1").unwrap();
    for c in -3..=3 {
        let t = UvpGen::T0 { a: q.from_i64(c) };
        let got = apply(&[t], &s).unwrap();
        // w -> w + cu, v -> v + ((w + cu)^2 - w^2)/u.
        let want = [
            "u".to_string(),
            format!("v + {} * w + {} * u", 2 * c, c * c),
            format!("w + {c} * u"),
        ]
        .map(|e| MPoly::parse(&q, &["u", "v", "w"], &e).unwrap());
        assert_eq!(got, want, "c = {c}");
    }
}

#[test]
fn swap_conjugates_scaling_to_its_inverse() {
    let q = Rationals;
    let s = SurfaceUvp::parse(&q, "w^3 + w").unwrap();
    for a in [-3, -2, -1, 2, 5] {
        let a = q.from_i64(a);
        let lhs = apply(&[UvpGen::I, UvpGen::H { a: a.clone() }, UvpGen::I], &s).unwrap();
        let rhs = apply(
            &[UvpGen::H {
                a: q.inv(&a).unwrap(),
            }],
            &s,
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn alternating_uvp_words_are_not_the_identity() {
    let q = Rationals;
    let s = SurfaceUvp::parse(&q, "w^2 - 2").unwrap();
    let t = |c: i64| UvpGen::T {
        q: MPoly::from_coeffs(&q, &[q.from_i64(c), q.one()]),
    };
    let mut word = Vec::new();
    for k in 1..=2 {
        word.push(UvpGen::I);
        word.push(t(k));
        let id = [0, 1, 2].map(|i| MPoly::var(&q, 3, i));
        assert_ne!(apply(&word, &s).unwrap(), id, "{} blocks", 2 * k);
        assert!(!normal_form(&word, &s).unwrap().is_identity());
    }
}

#[test]
fn pointwise_oracle_over_q() {
    let mut rng = rng(17);
    for _ in 0..20 {
        let word = random_plane_word(&mut rng, &Rationals, 4, 3);
        let f = compose_word(&Rationals, &word);
        let p0 = [
            Rationals.from_i64(rng.random_range(-5..=5)),
            Rationals.from_i64(rng.random_range(-5..=5)),
        ];
        let stepwise = word.iter().fold(p0.clone(), |p, g| g.eval(&p));
        assert_eq!(f.eval(&p0), stepwise);
    }
}
