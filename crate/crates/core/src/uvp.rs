//! The surfaces `uv = P(w)` with `deg P = n ≥ 2`, boundary type `(0,-1,-n)`.
//!
//! Automorphisms are words over `H(a)`, `I`, `T(q)`, `T0(a)` and `Sp(a,b,c)`, read in
//! application order. Coordinates are `(u, v, w)`. `J` is the stabilizer of the fibration
//! `u`, generated by `H`, `Sp` and `T`; `A` is generated by `I`, `H`, `Sp` and `T0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibration_graph::FibrationGraph;
use crate::field::{Field, FieldSpec};
use crate::moves::Move;
use crate::poly::MPoly;
use crate::word::MoveWord;
use crate::zigzag::ZigzagType;

const NAMES: [&str; 3] = ["u", "v", "w"];

/// Coordinate images `(u', v', w')`.
pub type Coords<F> = [MPoly<F>; 3];

/// `uv = P(w)` with `P` univariate of degree at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceUvp<F: Field> {
    p: MPoly<F>,
}

impl<F: Field> SurfaceUvp<F> {
    pub fn new(p: MPoly<F>) -> Result<Self> {
        if p.nvars() != 1 {
            return Err(Error::InvalidParameter("P must be univariate".into()));
        }
        match p.degree_in(0) {
            Some(n) if n >= 2 => Ok(SurfaceUvp { p }),
            d => Err(Error::InvalidParameter(format!(
                "P must have degree at least 2, got {d:?}"
            ))),
        }
    }

    pub fn parse(field: &F, s: &str) -> Result<Self> {
        Self::new(MPoly::parse(field, &["w"], s)?)
    }

    /// Coefficients in increasing degree.
    pub fn from_coeffs(field: &F, coeffs: &[F::Elem]) -> Result<Self> {
        Self::new(MPoly::from_coeffs(field, coeffs))
    }

    pub fn field(&self) -> &F {
        self.p.field()
    }

    pub fn p(&self) -> &MPoly<F> {
        &self.p
    }

    pub fn degree(&self) -> u32 {
        self.p.degree_in(0).expect("P is nonzero")
    }

    /// The boundary has a curve of self-intersection at most -3.
    pub fn hypothesis(&self) -> bool {
        self.degree() >= 3
    }

    pub fn boundary_type(&self) -> ZigzagType {
        ZigzagType::from_tail(&[-i64::from(self.degree())])
    }

    /// `P(w)` in the ring of `(u, v, w)`.
    fn p3(&self) -> MPoly<F> {
        self.p.embed(3, &[2])
    }

    /// Whether `P(aw + b) = c·P(w)`.
    pub fn is_sp(&self, a: &F::Elem, b: &F::Elem, c: &F::Elem) -> bool {
        let f = self.field();
        let lin = MPoly::from_coeffs(f, &[b.clone(), a.clone()]);
        !f.is_zero(a) && !f.is_zero(c) && self.p.compose(&[lin]) == self.p.scale(c)
    }

    pub fn to_json(&self) -> SurfaceJson {
        SurfaceJson {
            field: spec_of(self.field()),
            p: self.p.coeffs().iter().map(Scalar::from_elem).collect(),
        }
    }

    pub fn from_json(field: &F, j: &SurfaceJson) -> Result<Self> {
        check_field(field, &j.field)?;
        Self::from_coeffs(field, &Scalar::parse_all(field, &j.p)?)
    }
}

impl<F: Field> fmt::Display for SurfaceUvp<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "uv = {}", self.p.fmt_with(&["w"]))
    }
}

fn spec_of<F: Field>(field: &F) -> FieldSpec {
    FieldSpec::from_str(&field.name()).expect("field names parse as specs")
}

fn check_field<F: Field>(field: &F, spec: &FieldSpec) -> Result<()> {
    if spec.to_string() == field.name() {
        Ok(())
    } else {
        Err(Error::FieldMismatch(spec.to_string(), field.name()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UvpGen<F: Field> {
    /// `(au, a⁻¹v, w)`.
    H { a: F::Elem },
    /// `(v, u, w)`.
    I,
    /// `(u, v + (P(w + uq(u)) − P(w))/u, w + uq(u))` with `q` univariate in `u`.
    T { q: MPoly<F> },
    /// `T` with constant `q = a`.
    T0 { a: F::Elem },
    /// `(u, cv, aw + b)`, valid iff `P(aw + b) = c·P(w)`.
    Sp { a: F::Elem, b: F::Elem, c: F::Elem },
}

impl<F: Field> UvpGen<F> {
    /// In `A ∩ J`.
    pub fn is_shared(&self) -> bool {
        match self {
            UvpGen::I => false,
            UvpGen::T { q } => q.total_degree().unwrap_or(0) == 0,
            _ => true,
        }
    }

    /// The constant-`q` generators as `T0`, so that `T` always has `deg q ≥ 1`.
    fn canonical(self) -> Self {
        match self {
            UvpGen::T { q } if q.total_degree().unwrap_or(0) == 0 => UvpGen::T0 {
                a: q.constant_term(),
            },
            g => g,
        }
    }

    fn is_identity(&self, field: &F) -> bool {
        match self {
            UvpGen::H { a } => *a == field.one(),
            UvpGen::I => false,
            UvpGen::T { q } => q.is_zero(),
            UvpGen::T0 { a } => field.is_zero(a),
            UvpGen::Sp { a, b, c } => *a == field.one() && field.is_zero(b) && *c == field.one(),
        }
    }

    /// The generator whose map is `other ∘ self`, when the pair collapses to one.
    fn merge(&self, other: &Self, s: &SurfaceUvp<F>) -> Option<Self> {
        let f = s.field();
        let tq = |g: &Self| match g {
            UvpGen::T { q } => Some(q.clone()),
            UvpGen::T0 { a } => Some(MPoly::constant(f, 1, a.clone())),
            _ => None,
        };
        match (self, other) {
            (UvpGen::H { a }, UvpGen::H { a: b }) => Some(UvpGen::H { a: f.mul(a, b) }),
            (
                UvpGen::Sp { a, b, c },
                UvpGen::Sp {
                    a: a2,
                    b: b2,
                    c: c2,
                },
            ) => {
                // w ↦ a2(aw + b) + b2, v ↦ c2·c·v.
                Some(UvpGen::Sp {
                    a: f.mul(a2, a),
                    b: f.add(&f.mul(a2, b), b2),
                    c: f.mul(c2, c),
                })
            }
            _ => match (tq(self), tq(other)) {
                (Some(q1), Some(q2)) => Some(UvpGen::T { q: &q1 + &q2 }.canonical()),
                _ => None,
            },
        }
    }

    pub fn to_json(&self) -> GenJson {
        let e = Scalar::from_elem;
        match self {
            UvpGen::H { a } => GenJson::H { a: e(a) },
            UvpGen::I => GenJson::I,
            UvpGen::T { q } => GenJson::T {
                q: q.coeffs().iter().map(e).collect(),
            },
            UvpGen::T0 { a } => GenJson::T0 { a: e(a) },
            UvpGen::Sp { a, b, c } => GenJson::Sp {
                a: e(a),
                b: e(b),
                c: e(c),
            },
        }
    }

    pub fn from_json(field: &F, j: &GenJson) -> Result<Self> {
        Ok(match j {
            GenJson::H { a } => UvpGen::H { a: a.parse(field)? },
            GenJson::I => UvpGen::I,
            GenJson::T { q } => UvpGen::T {
                q: MPoly::from_coeffs(field, &Scalar::parse_all(field, q)?),
            },
            GenJson::T0 { a } => UvpGen::T0 { a: a.parse(field)? },
            GenJson::Sp { a, b, c } => UvpGen::Sp {
                a: a.parse(field)?,
                b: b.parse(field)?,
                c: c.parse(field)?,
            },
        })
    }
}

impl<F: Field> fmt::Display for UvpGen<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UvpGen::H { a } => write!(f, "H({a})"),
            UvpGen::I => f.write_str("I"),
            UvpGen::T { q } => write!(f, "T({})", q.fmt_with(&["u"])),
            UvpGen::T0 { a } => write!(f, "T0({a})"),
            UvpGen::Sp { a, b, c } => write!(f, "Sp({a},{b},{c})"),
        }
    }
}

/// A field element in JSON: integers as numbers, anything else as a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn from_elem<E: fmt::Display>(e: &E) -> Scalar {
        let s = e.to_string();
        s.parse().map_or(Scalar::Text(s), Scalar::Int)
    }

    fn parse<F: Field>(&self, field: &F) -> Result<F::Elem> {
        match self {
            Scalar::Int(n) => Ok(field.from_i64(*n)),
            Scalar::Text(s) => field.parse_elem(s),
        }
    }

    fn parse_all<F: Field>(field: &F, xs: &[Scalar]) -> Result<Vec<F::Elem>> {
        xs.iter().map(|x| x.parse(field)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "gen")]
pub enum GenJson {
    H { a: Scalar },
    I,
    T { q: Vec<Scalar> },
    T0 { a: Scalar },
    Sp { a: Scalar, b: Scalar, c: Scalar },
}

/// `{"field": "Q", "p": [-1, 0, 1]}` with coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub field: FieldSpec,
    pub p: Vec<Scalar>,
}

pub fn identity_coords<F: Field>(field: &F) -> Coords<F> {
    [0, 1, 2].map(|i| MPoly::var(field, 3, i))
}

/// `outer ∘ inner`.
pub fn compose_coords<F: Field>(outer: &Coords<F>, inner: &Coords<F>) -> Coords<F> {
    [0, 1, 2].map(|i| outer[i].compose(inner))
}

/// Coordinate images of a single generator.
pub fn apply_gen<F: Field>(g: &UvpGen<F>, s: &SurfaceUvp<F>) -> Result<Coords<F>> {
    let f = s.field();
    let [u, v, w] = identity_coords(f);
    let unit = |a: &F::Elem| {
        f.inv(a)
            .ok_or_else(|| Error::InvalidParameter(format!("{a} is not a unit")))
    };
    Ok(match g {
        UvpGen::H { a } => [u.scale(a), v.scale(&unit(a)?), w],
        UvpGen::I => [v, u, w],
        UvpGen::T { q } => {
            if q.nvars() != 1 || q.field() != f {
                return Err(Error::InvalidParameter(
                    "q must be univariate over the surface field".into(),
                ));
            }
            let w2 = &w + &(&u * &q.embed(3, &[0]));
            let dp = &s.p.compose(std::slice::from_ref(&w2)) - &s.p3();
            let v2 = &v + &dp.div_by_var(0)?;
            [u, v2, w2]
        }
        UvpGen::T0 { a } => {
            return apply_gen(
                &UvpGen::T {
                    q: MPoly::constant(f, 1, a.clone()),
                },
                s,
            )
        }
        UvpGen::Sp { a, b, c } => {
            if !s.is_sp(a, b, c) {
                return Err(Error::InvalidParameter(format!(
                    "P(({a})w + {b}) is not ({c})·P(w)"
                )));
            }
            [
                u,
                v.scale(c),
                &w.scale(a) + &MPoly::constant(f, 3, b.clone()),
            ]
        }
    })
}

/// Coordinate images of a word, generators applied left to right.
pub fn apply<F: Field>(word: &[UvpGen<F>], s: &SurfaceUvp<F>) -> Result<Coords<F>> {
    word.iter().try_fold(identity_coords(s.field()), |acc, g| {
        Ok(compose_coords(&apply_gen(g, s)?, &acc))
    })
}

/// The constant `κ` with `u'v' − P(w') = κ·(uv − P(w))`.
pub fn check_relation_coords<F: Field>(c: &Coords<F>, s: &SurfaceUvp<F>) -> Result<F::Elem> {
    let f = s.field();
    let [u, v, _] = identity_coords(f);
    let rel = &(&u * &v) - &s.p3();
    let image = &(&c[0] * &c[1]) - &s.p.compose(std::slice::from_ref(&c[2]));
    let (e, top) = image
        .terms()
        .next()
        .ok_or_else(|| Error::RelationFailed("image relation is zero".into()))?;
    let kappa = f
        .div(top, &rel.coeff(e))
        .map_err(|_| Error::RelationFailed("image is not a multiple".into()))?;
    if image == rel.scale(&kappa) {
        Ok(kappa)
    } else {
        Err(Error::RelationFailed(format!(
            "u'v' - P(w') = {} is not a multiple of uv - P(w)",
            image.fmt_with(&NAMES)
        )))
    }
}

pub fn check_relation<F: Field>(word: &[UvpGen<F>], s: &SurfaceUvp<F>) -> Result<F::Elem> {
    check_relation_coords(&apply(word, s)?, s)
}

/// The solutions `(a, b, c)` of `P(aw + b) = c·P(w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpGroup<F: Field> {
    Finite(Vec<(F::Elem, F::Elem, F::Elem)>),
    /// `P = λ(w − μ)^n`: all `(a, μ(1 − a), a^n)` with `a` a unit.
    OneParameter {
        mu: F::Elem,
        n: u32,
    },
}

impl<F: Field> SpGroup<F> {
    pub fn is_finite(&self) -> bool {
        matches!(self, SpGroup::Finite(_))
    }

    /// The element with parameter `a` of a one-parameter family.
    pub fn member(&self, field: &F, a: &F::Elem) -> Option<(F::Elem, F::Elem, F::Elem)> {
        match self {
            SpGroup::Finite(xs) => xs.iter().find(|x| x.0 == *a).cloned(),
            SpGroup::OneParameter { mu, n } => (!field.is_zero(a)).then(|| {
                (
                    a.clone(),
                    field.mul(mu, &field.sub(&field.one(), a)),
                    field.pow(a, u64::from(*n)),
                )
            }),
        }
    }

    pub fn to_json(&self) -> SpJson {
        let e = Scalar::from_elem;
        match self {
            SpGroup::Finite(xs) => SpJson::Finite {
                order: xs.len(),
                elements: xs
                    .iter()
                    .map(|(a, b, c)| SpElemJson {
                        a: e(a),
                        b: e(b),
                        c: e(c),
                    })
                    .collect(),
            },
            SpGroup::OneParameter { mu, n } => SpJson::OneParameter { mu: e(mu), n: *n },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpElemJson {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpJson {
    Finite {
        order: usize,
        elements: Vec<SpElemJson>,
    },
    OneParameter {
        mu: Scalar,
        n: u32,
    },
}

/// `(s, Q)` with `Q(z) = P(z − s)` free of `z^{n-1}`, when the characteristic allows it.
fn depress<F: Field>(p: &MPoly<F>) -> Option<(F::Elem, MPoly<F>)> {
    let f = p.field();
    let n = p.degree_in(0)?;
    let nn = f.from_i64(i64::from(n));
    if f.is_zero(&nn) {
        return None;
    }
    let s = f
        .div(&p.coeff(&[n - 1]), &f.mul(&nn, &p.coeff(&[n])))
        .ok()?;
    let shift = MPoly::from_coeffs(f, &[f.neg(&s), f.one()]);
    Some((s, p.compose(&[shift])))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact coefficient matching after depressing `P`; brute force over a finite field when the
/// characteristic divides `n`. Every returned element satisfies the defining identity.
pub fn compute_sp<F: Field>(s: &SurfaceUvp<F>) -> Result<SpGroup<F>> {
    let f = s.field();
    let n = s.degree();
    let mut out = Vec::new();
    match depress(&s.p) {
        Some((sh, q)) => {
            let g = q
                .terms()
                .map(|(e, _)| n - e[0])
                .filter(|&k| k > 0)
                .fold(0, gcd);
            if g == 0 {
                return Ok(SpGroup::OneParameter { mu: f.neg(&sh), n });
            }
            for a in f.nth_roots(&f.one(), g)? {
                let b = f.mul(&f.sub(&a, &f.one()), &sh);
                out.push((a.clone(), b, f.pow(&a, u64::from(n))));
            }
        }
        None => {
            let elems = f.elements().ok_or_else(|| {
                Error::Unsupported("characteristic divides deg P over an infinite field".into())
            })?;
            for a in elems.iter().filter(|a| !f.is_zero(a)) {
                let c = f.pow(a, u64::from(n));
                out.extend(elems.iter().map(|b| (a.clone(), b.clone(), c.clone())));
            }
        }
    }
    out.retain(|(a, b, c)| s.is_sp(a, b, c));
    out.sort();
    if out.is_empty() {
        return Err(Error::Internal("identity missing from Sp".into()));
    }
    Ok(SpGroup::Finite(out))
}

/// Whether `P2(w) = μ·P1(αw + β)` for some units `α, μ` and some `β`.
pub fn classify<F: Field>(s1: &SurfaceUvp<F>, s2: &SurfaceUvp<F>) -> Result<bool> {
    if s1.field() != s2.field() {
        return Err(Error::FieldMismatch(s1.field().name(), s2.field().name()));
    }
    let f = s1.field();
    let n = s1.degree();
    if n != s2.degree() {
        return Ok(false);
    }
    let monic = |p: &MPoly<F>| {
        p.scale(
            &f.inv(&p.coeff(&[n]))
                .expect("leading coefficient is nonzero"),
        )
    };
    let (Some((_, q1)), Some((_, q2))) = (depress(&s1.p), depress(&s2.p)) else {
        return classify_by_search(s1, s2);
    };
    let (r1, r2) = (monic(&q1), monic(&q2));
    let support = |r: &MPoly<F>| r.terms().map(|(e, _)| e[0]).collect::<Vec<u32>>();
    if support(&r1) != support(&r2) {
        return Ok(false);
    }
    // r2_i = α^(i−n)·r1_i for every i, so α^(n−i) = r1_i / r2_i.
    let Some(i) = support(&r1).into_iter().find(|&i| i < n) else {
        return Ok(true);
    };
    let ratio = f.div(&r1.coeff(&[i]), &r2.coeff(&[i]))?;
    for alpha in f.nth_roots(&ratio, n - i)? {
        let lin = MPoly::from_coeffs(f, &[f.zero(), alpha]);
        if monic(&r1.compose(&[lin])) == r2 {
            return Ok(true);
        }
    }
    Ok(false)
}

fn classify_by_search<F: Field>(s1: &SurfaceUvp<F>, s2: &SurfaceUvp<F>) -> Result<bool> {
    let f = s1.field();
    let elems = f.elements().ok_or_else(|| {
        Error::Unsupported("characteristic divides deg P over an infinite field".into())
    })?;
    let n = s1.degree();
    let lead2 = s2.p.coeff(&[n]);
    for alpha in elems.iter().filter(|a| !f.is_zero(a)) {
        for beta in &elems {
            let lin = MPoly::from_coeffs(f, &[beta.clone(), alpha.clone()]);
            let img = s1.p.compose(&[lin]);
            let mu = f.div(&lead2, &img.coeff(&[n]))?;
            if img.scale(&mu) == s2.p {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    /// In `A ∖ J`.
    A,
    /// In `J ∖ A`.
    J,
    /// In `A ∩ J`; only occurs as the sole block.
    Shared,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block<F: Field> {
    pub kind: BlockKind,
    pub word: Vec<UvpGen<F>>,
    pub map: Coords<F>,
}

/// Alternating amalgam form. Empty `blocks` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm<F: Field> {
    pub blocks: Vec<Block<F>>,
    /// `n = 2`: the form is reduced but not claimed unique.
    pub uniqueness_hypothesis_fails: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub kind: BlockKind,
    pub word: Vec<GenJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormJson {
    pub identity: bool,
    pub length: usize,
    pub uniqueness_hypothesis_fails: bool,
    pub blocks: Vec<BlockJson>,
}

impl<F: Field> NormalForm<F> {
    pub fn is_identity(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of blocks outside `A ∩ J`.
    pub fn len(&self) -> usize {
        self.blocks
            .iter()
            .filter(|b| b.kind != BlockKind::Shared)
            .count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reversions for `A ∖ J` blocks, fibered modifications of degree `deg q + 1` for `J ∖ A`.
    pub fn to_move_word(&self, s: &SurfaceUvp<F>) -> Result<MoveWord> {
        let mut moves = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            match b.kind {
                BlockKind::A => moves.push(Move::rev(format!("p{i}"), format!("q{i}"))),
                BlockKind::J => {
                    // w' = a(w + uq(u)) + b has u-degree deg q + 1.
                    let d = b.map[2].degree_in(0).unwrap_or(2).max(2);
                    moves.push(Move::fib(format!("t{i}"), d));
                }
                BlockKind::Shared => {}
            }
        }
        MoveWord::new(s.boundary_type(), moves)
    }

    pub fn to_json(&self) -> NormalFormJson {
        NormalFormJson {
            identity: self.is_identity(),
            length: self.len(),
            uniqueness_hypothesis_fails: self.uniqueness_hypothesis_fails,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockJson {
                    kind: b.kind,
                    word: b.word.iter().map(UvpGen::to_json).collect(),
                })
                .collect(),
        }
    }
}

/// `u' = λu`.
fn preserves_u<F: Field>(c: &Coords<F>) -> bool {
    c[0].terms().all(|(e, _)| *e == vec![1, 0, 0])
}

/// Membership of a `J`-element in `A`: `w'` has degree at most 1 in `u`.
fn j_in_a<F: Field>(c: &Coords<F>) -> bool {
    c[2].degree_in(0).unwrap_or(0) <= 1
}

fn simplify_word<F: Field>(word: Vec<UvpGen<F>>, s: &SurfaceUvp<F>) -> Vec<UvpGen<F>> {
    let f = s.field();
    let mut out: Vec<UvpGen<F>> = Vec::with_capacity(word.len());
    for g in word.into_iter().map(UvpGen::canonical) {
        let merged = match out.last() {
            Some(UvpGen::I) if g == UvpGen::I => {
                out.pop();
                continue;
            }
            Some(prev) => prev.merge(&g, s),
            None => None,
        };
        match merged {
            Some(m) => {
                out.pop();
                if !m.is_identity(f) {
                    out.push(m);
                }
            }
            None if g.is_identity(f) => {}
            None => out.push(g),
        }
    }
    out
}

/// Rewrites `word` as alternating blocks from `A ∖ J` and `J ∖ A`.
///
/// Generators in `A ∩ J` are absorbed into a neighbouring block; a block is reclassified
/// from its composed map (an `A`-block fixing the fibration `u` lies in `J`, a `J`-block
/// whose `w'` is affine in `u` lies in `A`) and identity blocks vanish.
pub fn normal_form<F: Field>(word: &[UvpGen<F>], s: &SurfaceUvp<F>) -> Result<NormalForm<F>> {
    let f = s.field();
    let mut blocks: Vec<Block<F>> = Vec::with_capacity(word.len());
    for g in word {
        let kind = match g {
            UvpGen::I => BlockKind::A,
            g if g.is_shared() => BlockKind::Shared,
            _ => BlockKind::J,
        };
        blocks.push(Block {
            kind,
            word: vec![g.clone()],
            map: apply_gen(g, s)?,
        });
    }
    let id = identity_coords(f);
    loop {
        blocks.retain(|b| b.map != id);
        for b in &mut blocks {
            b.kind = match b.kind {
                BlockKind::A if preserves_u(&b.map) => BlockKind::Shared,
                BlockKind::J if j_in_a(&b.map) => BlockKind::Shared,
                k => k,
            };
        }
        let merge_at = blocks.windows(2).position(|p| {
            p[0].kind == p[1].kind
                || p[0].kind == BlockKind::Shared
                || p[1].kind == BlockKind::Shared
        });
        let Some(i) = merge_at else { break };
        let (first, second) = (&blocks[i], &blocks[i + 1]);
        let kind = if first.kind == BlockKind::Shared {
            second.kind
        } else {
            first.kind
        };
        let map = compose_coords(&second.map, &first.map);
        let word = simplify_word(first.word.iter().chain(&second.word).cloned().collect(), s);
        blocks.splice(i..i + 2, [Block { kind, word, map }]);
    }
    Ok(NormalForm {
        blocks,
        uniqueness_hypothesis_fails: !s.hypothesis(),
    })
}

/// One vertex with the self-inverse loop `I`; the hypothesis holds iff `n ≥ 3`.
pub fn uvp_graph<F: Field>(s: &SurfaceUvp<F>) -> Result<FibrationGraph> {
    let mut g = FibrationGraph::new(s.hypothesis());
    let v = g.add_vertex(s.boundary_type().to_string());
    g.add_self_inverse_loop(v, "I")?;
    Ok(g)
}

pub fn coords_to_strings<F: Field>(c: &Coords<F>) -> [String; 3] {
    [0, 1, 2].map(|i| c[i].fmt_with(&NAMES))
}
