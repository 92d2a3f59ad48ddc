//! Independent oracles and seeded generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use standard_pairs::dual_graph::DualGraph;
use standard_pairs::field::Field;
use standard_pairs::moves::{ElementaryLink, IvPoint, LinkKind, Side};
use standard_pairs::plane::PolyAut;
use standard_pairs::poly::MPoly;
use standard_pairs::uvp::{compute_sp, SpGroup, SurfaceUvp, UvpGen};
use standard_pairs::{Move, MoveWord, NodeId, ZigzagType};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_tail(rng: &mut impl Rng, max_len: usize, lo: i64, hi: i64) -> Vec<i64> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| rng.random_range(lo..=hi)).collect()
}

/// Every tail of length at most `max_len` with entries in `lo..=hi`.
pub fn all_tails(max_len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<Vec<i64>> = layer
            .iter()
            .flat_map(|t: &Vec<i64>| (lo..=hi).map(move |e| [t.clone(), vec![e]].concat()))
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `(0,-1,-n_r,...,-n_1)` built directly from the weights.
pub fn reversed_type_oracle(t: &ZigzagType) -> ZigzagType {
    let w = t.weights();
    let mut out = vec![w[0], w[1]];
    let mut i = w.len();
    while i > 2 {
        i -= 1;
        out.push(w[i]);
    }
    ZigzagType::new(out).unwrap()
}

/// Replays elementary links on a dual graph by explicit blow-ups and blow-downs.
///
/// State: the chain, its left end and the marked 0-curve. Returns the chain read from the
/// left end after every link, paired with the marker position.
pub struct GraphReplay {
    pub graph: DualGraph,
    pub left: NodeId,
    pub marker: NodeId,
}

impl GraphReplay {
    /// Starts at `(E_r, ..., E_1, C, F)` with the marker on `F`.
    pub fn for_reversion(t: &ZigzagType) -> Self {
        let w = t.reverse();
        let graph = DualGraph::chain(w.weights());
        GraphReplay {
            graph,
            left: 0,
            marker: (w.len() - 1) as NodeId,
        }
    }

    pub fn order(&self) -> Vec<NodeId> {
        self.graph.chain_order(self.left).unwrap()
    }

    pub fn weights(&self) -> Vec<i64> {
        self.order()
            .iter()
            .map(|&id| self.graph.weight(id).unwrap())
            .collect()
    }

    pub fn marker_position(&self) -> usize {
        self.order()
            .iter()
            .position(|&id| id == self.marker)
            .unwrap()
    }

    fn blow_down(&mut self, e: NodeId) -> Result<(), String> {
        if e == self.left {
            self.left = self.graph.neighbors(e)[0];
        }
        self.graph = self.graph.blow_down(e).map_err(|x| x.to_string())?;
        Ok(())
    }

    pub fn apply(&mut self, link: &ElementaryLink) -> Result<(), String> {
        let m = self.marker;
        let old_weight = self.graph.weight(m).unwrap();
        let minus_ones: Vec<NodeId> = self
            .graph
            .neighbors(m)
            .into_iter()
            .filter(|&v| self.graph.weight(v).unwrap() == -1)
            .collect();
        let order = self.order();
        let pos = self.marker_position();
        let exceptional = match link {
            ElementaryLink::I => {
                let [e] = minus_ones[..] else {
                    return Err(format!(
                        "expected one (-1)-neighbour, found {}",
                        minus_ones.len()
                    ));
                };
                return self.blow_down(e);
            }
            ElementaryLink::II { side } | ElementaryLink::III { side } => {
                let other = match side {
                    Side::Left => pos.checked_sub(1).map(|k| order[k]),
                    Side::Right => order.get(pos + 1).copied(),
                }
                .ok_or("no neighbour on that side")?;
                let is_minus_one = self.graph.weight(other).unwrap() == -1;
                if matches!(link, ElementaryLink::II { .. }) != is_minus_one {
                    return Err("link kind disagrees with the neighbour weight".into());
                }
                let (g, e) = self
                    .graph
                    .blow_up_intersection(m, other)
                    .map_err(|x| x.to_string())?;
                self.graph = g;
                e
            }
            ElementaryLink::IV {
                point: IvPoint::Neighbor,
            } => {
                let nb = self.graph.neighbors(m);
                let [other] = nb[..] else {
                    return Err("B_m is not an end with one neighbour".into());
                };
                let (g, e) = self
                    .graph
                    .blow_up_intersection(m, other)
                    .map_err(|x| x.to_string())?;
                self.graph = g;
                e
            }
            ElementaryLink::IV {
                point: IvPoint::Free { .. },
            } => {
                let (g, e) = self.graph.blow_up_free(m).map_err(|x| x.to_string())?;
                self.graph = g;
                if m == self.left && order.len() > 1 {
                    self.left = e;
                }
                e
            }
        };
        if old_weight == 0 {
            self.blow_down(m)?;
            self.marker = exceptional;
        }
        Ok(())
    }
}

/// Link-kind counts for the reversion word of `tail`. The II/III/IV split is pinned only
/// when every entry is at most -3.
pub struct LinkCounts {
    pub i: usize,
    pub total: usize,
    pub split: Option<(usize, usize, usize)>,
}

pub fn expected_link_counts(tail: &[i64]) -> LinkCounts {
    let r = tail.len();
    let excess: usize = tail.iter().map(|&e| (-e - 2) as usize).sum();
    let split = (r >= 1 && tail.iter().all(|&e| e <= -3)).then(|| {
        let iii: usize = tail.iter().map(|&e| (-e - 3) as usize).sum::<usize>() + (r - 1);
        (r, iii, 2)
    });
    LinkCounts {
        i: r + 1,
        total: 2 * (r + 1) + excess,
        split,
    }
}

pub fn count_kinds(word: &[ElementaryLink]) -> [usize; 4] {
    let mut c = [0; 4];
    for l in word {
        c[match l.kind() {
            LinkKind::I => 0,
            LinkKind::II => 1,
            LinkKind::III => 2,
            LinkKind::IV => 3,
        }] += 1;
    }
    c
}

/// The resolution chain of the reversion of `(0,-1,-n1,-n2)`, from the `E2` end.
pub fn resolution_chain_32(n1: i64, n2: i64) -> Vec<(i64, String)> {
    let mut out: Vec<(i64, String)> = vec![
        (-n2, "E2".into()),
        (-n1, "E1".into()),
        (-1, "C".into()),
        (-2, "F".into()),
    ];
    out.extend((0..n1 - 3).map(|_| (-2, "H".to_string())));
    out.push((-3, "H".into()));
    out.extend((0..n2 - 3).map(|_| (-2, "H".to_string())));
    out.extend([
        (-2, "F'".into()),
        (-1, "C'".into()),
        (-n2, "E1'".into()),
        (-n1, "E2'".into()),
    ]);
    out
}

/// Classes of `F_p ∖ {0,1}` under `a ∼ a⁻¹`, by direct modular arithmetic.
pub fn class_count_oracle(p: u64) -> usize {
    let inv = |a: u64| (1..p).find(|b| a * b % p == 1).unwrap();
    (2..p).filter(|&a| a <= inv(a)).count()
}

/// A random move over tokens `p0..p3` and `f0..f2`.
pub fn random_move(rng: &mut impl Rng) -> Move {
    match rng.random_range(0..7) {
        0..=3 => Move::rev(
            format!("p{}", rng.random_range(0..4)),
            format!("p{}", rng.random_range(0..4)),
        ),
        4 | 5 => Move::fib(
            format!("f{}", rng.random_range(0..3)),
            rng.random_range(2..5),
        ),
        _ => Move::identity(),
    }
}

pub fn random_word(rng: &mut impl Rng) -> MoveWord {
    let tail = random_tail(rng, 3, -4, -2);
    let len = rng.random_range(0..=10);
    let moves = (0..len).map(|_| random_move(rng)).collect();
    MoveWord::new(ZigzagType::from_tail(&tail), moves).unwrap()
}

fn small(rng: &mut impl Rng) -> i64 {
    rng.random_range(-3..=3)
}

fn unit<F: Field>(rng: &mut impl Rng, field: &F) -> F::Elem {
    loop {
        let c = field.from_i64(small(rng));
        if !field.is_zero(&c) {
            return c;
        }
    }
}

/// An invertible affine map; outside `J` when `outside_j`.
pub fn random_affine<F: Field>(rng: &mut impl Rng, field: &F, outside_j: bool) -> PolyAut<F> {
    loop {
        let mut m = [0; 4].map(|_| field.from_i64(small(rng)));
        if outside_j {
            m[1] = unit(rng, field);
        }
        let t = [0; 2].map(|_| field.from_i64(small(rng)));
        let [a, b, c, d] = m;
        if let Ok(f) = PolyAut::affine(field, [[a, b], [c, d]], t) {
            return f;
        }
    }
}

/// `(ax + b, cy + P(x))` with `deg P` in `min_deg..=max_deg`.
pub fn random_triangular<F: Field>(
    rng: &mut impl Rng,
    field: &F,
    min_deg: usize,
    max_deg: usize,
) -> PolyAut<F> {
    let d = rng.random_range(min_deg..=max_deg);
    let mut coeffs: Vec<F::Elem> = (0..d).map(|_| field.from_i64(small(rng))).collect();
    coeffs.push(unit(rng, field));
    let p = MPoly::from_coeffs(field, &coeffs);
    let (a, b, c) = (
        unit(rng, field),
        field.from_i64(small(rng)),
        unit(rng, field),
    );
    PolyAut::triangular(field, a, b, c, &p).unwrap()
}

/// A word of affine maps, triangular maps and swaps, in application order.
pub fn random_plane_word<F: Field>(
    rng: &mut impl Rng,
    field: &F,
    max_len: usize,
    max_deg: usize,
) -> Vec<PolyAut<F>> {
    let len = rng.random_range(1..=max_len);
    (0..len)
        .map(|_| match rng.random_range(0..3) {
            0 => random_affine(rng, field, false),
            1 => random_triangular(rng, field, 0, max_deg),
            _ => PolyAut::swap(field),
        })
        .collect()
}

/// Strictly alternating between `A ∖ J` and `J ∖ A`.
pub fn random_alternating_word<F: Field>(
    rng: &mut impl Rng,
    field: &F,
    len: usize,
    max_deg: usize,
) -> Vec<PolyAut<F>> {
    let start = rng.random_bool(0.5);
    (0..len)
        .map(|i| {
            if (i % 2 == 0) == start {
                random_affine(rng, field, true)
            } else {
                random_triangular(rng, field, 2, max_deg)
            }
        })
        .collect()
}

pub fn compose_word<F: Field>(field: &F, word: &[PolyAut<F>]) -> PolyAut<F> {
    word.iter()
        .fold(PolyAut::identity(field), |acc, g| g.compose(&acc).unwrap())
}

/// Generators of `uv = P(w)` with valid parameters; `Sp` elements come from `compute_sp`.
pub fn uvp_generators<F: Field>(
    rng: &mut impl Rng,
    s: &SurfaceUvp<F>,
    count: usize,
) -> Vec<UvpGen<F>> {
    let sp = compute_sp(s).unwrap();
    (0..count).map(|_| random_uvp_gen(rng, s, &sp)).collect()
}

fn random_uvp_gen<F: Field>(rng: &mut impl Rng, s: &SurfaceUvp<F>, sp: &SpGroup<F>) -> UvpGen<F> {
    let f = s.field();
    match rng.random_range(0..5) {
        0 => UvpGen::H { a: unit(rng, f) },
        1 => UvpGen::I,
        2 => {
            let coeffs: Vec<F::Elem> = (0..rng.random_range(1..=2))
                .map(|_| f.from_i64(small(rng)))
                .collect();
            UvpGen::T {
                q: MPoly::from_coeffs(f, &coeffs),
            }
        }
        3 => UvpGen::T0 {
            a: f.from_i64(small(rng)),
        },
        _ => match sp {
            SpGroup::Finite(xs) => {
                let (a, b, c) = xs[rng.random_range(0..xs.len())].clone();
                UvpGen::Sp { a, b, c }
            }
            one => {
                let (a, b, c) = one.member(f, &unit(rng, f)).unwrap();
                UvpGen::Sp { a, b, c }
            }
        },
    }
}

/// A random word of length at most `max_len` with at most `max_t` nontrivial translations.
pub fn random_uvp_word<F: Field>(
    rng: &mut impl Rng,
    s: &SurfaceUvp<F>,
    max_len: usize,
    max_t: usize,
) -> Vec<UvpGen<F>> {
    let len = rng.random_range(1..=max_len);
    let mut out = Vec::with_capacity(len);
    let mut t_count = 0;
    let sp = compute_sp(s).unwrap();
    while out.len() < len {
        let g = random_uvp_gen(rng, s, &sp);
        let translation = match &g {
            UvpGen::T { .. } => true,
            UvpGen::T0 { a } => !s.field().is_zero(a),
            _ => false,
        };
        if translation {
            if t_count == max_t {
                continue;
            }
            t_count += 1;
        }
        out.push(g);
    }
    out
}

/// `P` of degree `n` with coefficients in `-2..=2` and a nonzero leading coefficient.
pub fn random_p<F: Field>(rng: &mut impl Rng, field: &F, n: usize) -> SurfaceUvp<F> {
    let mut coeffs: Vec<F::Elem> = (0..n)
        .map(|_| field.from_i64(rng.random_range(-2..=2)))
        .collect();
    coeffs.push(loop {
        let c = field.from_i64(rng.random_range(-2..=2));
        if !field.is_zero(&c) {
            break c;
        }
    });
    SurfaceUvp::from_coeffs(field, &coeffs).unwrap()
}
