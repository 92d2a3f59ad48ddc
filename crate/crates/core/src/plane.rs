//! Polynomial automorphisms of the affine plane and their Jung factorization.
//!
//! Coordinates are `(x, y)`. The triangular subgroup is
//! `J = {(ax + b, cy + P(x))}`, which preserves the fibration `x`; `A` is the affine group.
//! Factor lists are in application order: `[g1, g2]` means `g2 ∘ g1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibration_graph::{FibrationGraph, GenerationVerdict};
use crate::field::{Field, FieldSpec};
use crate::moves::Move;
use crate::poly::MPoly;
use crate::word::MoveWord;
use crate::zigzag::ZigzagType;

const NAMES: [&str; 2] = ["x", "y"];

/// A pair `(f1, f2)` of polynomials in `x, y`, read as `(x, y) ↦ (f1, f2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyAut<F: Field> {
    f1: MPoly<F>,
    f2: MPoly<F>,
}

/// Sparse JSON form: each coordinate is a list of `[[ex, ey], "coeff"]` terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyAutJson {
    pub field: FieldSpec,
    pub f1: Vec<(Vec<u32>, String)>,
    pub f2: Vec<(Vec<u32>, String)>,
}

impl<F: Field> PolyAut<F> {
    /// Validity as an automorphism is deferred to [`jung_factorize`].
    pub fn new(f1: MPoly<F>, f2: MPoly<F>) -> Result<Self> {
        f1.compatible(&f2)?;
        if f1.nvars() != 2 {
            return Err(Error::InvalidParameter(format!(
                "plane maps need 2 variables, got {}",
                f1.nvars()
            )));
        }
        Ok(PolyAut { f1, f2 })
    }

    pub fn parse(field: &F, f1: &str, f2: &str) -> Result<Self> {
        Self::new(
            MPoly::parse(field, &NAMES, f1)?,
            MPoly::parse(field, &NAMES, f2)?,
        )
    }

    pub fn identity(field: &F) -> Self {
        PolyAut {
            f1: MPoly::var(field, 2, 0),
            f2: MPoly::var(field, 2, 1),
        }
    }

    /// The reversion `(x, y) ↦ (y, x)`.
    pub fn swap(field: &F) -> Self {
        PolyAut {
            f1: MPoly::var(field, 2, 1),
            f2: MPoly::var(field, 2, 0),
        }
    }

    /// `(x, y) ↦ (m00 x + m01 y + t0, m10 x + m11 y + t1)`; the linear part must be invertible.
    pub fn affine(field: &F, m: [[F::Elem; 2]; 2], t: [F::Elem; 2]) -> Result<Self> {
        let det = field.sub(
            &field.mul(&m[0][0], &m[1][1]),
            &field.mul(&m[0][1], &m[1][0]),
        );
        if field.is_zero(&det) {
            return Err(Error::NotAnAutomorphism("singular linear part".into()));
        }
        let row = |r: &[F::Elem; 2], c: &F::Elem| {
            MPoly::from_terms(
                field,
                2,
                [
                    (vec![1, 0], r[0].clone()),
                    (vec![0, 1], r[1].clone()),
                    (vec![0, 0], c.clone()),
                ],
            )
        };
        Ok(PolyAut {
            f1: row(&m[0], &t[0]),
            f2: row(&m[1], &t[1]),
        })
    }

    /// `(x, y) ↦ (ax + b, cy + P(x))` with `p` univariate; `a` and `c` must be units.
    pub fn triangular(field: &F, a: F::Elem, b: F::Elem, c: F::Elem, p: &MPoly<F>) -> Result<Self> {
        if field.is_zero(&a) || field.is_zero(&c) {
            return Err(Error::NotAnAutomorphism(
                "triangular map needs unit scalars".into(),
            ));
        }
        if p.nvars() != 1 || p.field() != field {
            return Err(Error::InvalidParameter(
                "P must be univariate over the same field".into(),
            ));
        }
        let f1 = MPoly::from_terms(field, 2, [(vec![1, 0], a), (vec![0, 0], b)]);
        let f2 = &MPoly::monomial(field, 2, vec![0, 1], c) + &p.embed(2, &[0]);
        Ok(PolyAut { f1, f2 })
    }

    pub fn field(&self) -> &F {
        self.f1.field()
    }

    pub fn f1(&self) -> &MPoly<F> {
        &self.f1
    }

    pub fn f2(&self) -> &MPoly<F> {
        &self.f2
    }

    fn coords(&self) -> [MPoly<F>; 2] {
        [self.f1.clone(), self.f2.clone()]
    }

    /// Total degree; 0 for constant maps.
    pub fn degree(&self) -> u32 {
        self.f1
            .total_degree()
            .unwrap_or(0)
            .max(self.f2.total_degree().unwrap_or(0))
    }

    pub fn is_affine(&self) -> bool {
        self.degree() <= 1
    }

    /// Membership in `J`: `f1 = ax + b` and `f2 = cy + P(x)` with `a, c` nonzero.
    pub fn is_triangular(&self) -> bool {
        let f = self.field();
        let f1_ok = self.f1.degree_in(1).is_none_or(|d| d == 0)
            && self.f1.total_degree() == Some(1)
            && !f.is_zero(&self.f1.coeff(&[1, 0]));
        let f2_ok = self.f2.terms().all(|(e, _)| e[1] == 0 || *e == vec![0, 1])
            && !f.is_zero(&self.f2.coeff(&[0, 1]));
        f1_ok && f2_ok
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PolyAut<F>) -> Result<PolyAut<F>> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(
                self.field().name(),
                other.field().name(),
            ));
        }
        let subs = other.coords();
        Ok(PolyAut {
            f1: self.f1.compose(&subs),
            f2: self.f2.compose(&subs),
        })
    }

    pub fn eval(&self, point: &[F::Elem; 2]) -> [F::Elem; 2] {
        [self.f1.eval(point), self.f2.eval(point)]
    }

    pub fn jacobian(&self) -> MPoly<F> {
        &(&self.f1.derivative(0) * &self.f2.derivative(1))
            - &(&self.f1.derivative(1) * &self.f2.derivative(0))
    }

    pub fn to_json(&self) -> PolyAutJson {
        let field = FieldSpec::from_str(&self.field().name()).expect("field names parse as specs");
        PolyAutJson {
            field,
            f1: self.f1.to_terms(),
            f2: self.f2.to_terms(),
        }
    }

    pub fn from_json(field: &F, j: &PolyAutJson) -> Result<Self> {
        if j.field.to_string() != field.name() {
            return Err(Error::FieldMismatch(j.field.to_string(), field.name()));
        }
        Self::new(
            MPoly::from_term_strings(field, 2, &j.f1)?,
            MPoly::from_term_strings(field, 2, &j.f2)?,
        )
    }
}

impl<F: Field> fmt::Display for PolyAut<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {})",
            self.f1.fmt_with(&NAMES),
            self.f2.fmt_with(&NAMES)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    Affine,
    Triangular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor<F: Field> {
    pub kind: FactorKind,
    pub map: PolyAut<F>,
}

impl<F: Field> Factor<F> {
    fn new(kind: FactorKind, map: PolyAut<F>) -> Self {
        Factor { kind, map }
    }

    /// In `A ∩ J`.
    pub fn is_shared(&self) -> bool {
        self.map.is_affine() && self.map.is_triangular()
    }
}

/// Composition of a factor list given in application order.
pub fn compose_factors<F: Field>(field: &F, factors: &[Factor<F>]) -> Result<PolyAut<F>> {
    factors
        .iter()
        .try_fold(PolyAut::identity(field), |acc, g| g.map.compose(&acc))
}

/// Writes `f` as alternating affine and triangular factors, in application order.
///
/// Triangular factors lie in `J` with degree at least 2; affine factors lie outside `J`
/// unless `f` itself is affine. The degree-reduction loop peels `(x, y + c x^k)` or
/// `(x + c y^k, y)` off the left until both coordinates are affine.
pub fn jung_factorize<F: Field>(f: &PolyAut<F>) -> Result<Vec<Factor<F>>> {
    let field = f.field().clone();
    let jac = f.jacobian();
    match jac.as_constant() {
        Some(c) if !field.is_zero(&c) => {}
        _ => {
            return Err(Error::NotAnAutomorphism(
                "Jacobian determinant is not a nonzero constant".into(),
            ))
        }
    }
    let mut cur = f.clone();
    // Outer factors, outermost first.
    let mut outer: Vec<Vec<Factor<F>>> = Vec::new();
    while !cur.is_affine() {
        let (d1, d2) = (
            cur.f1.total_degree().unwrap_or(0),
            cur.f2.total_degree().unwrap_or(0),
        );
        if d1 == 0 || d2 == 0 {
            return Err(Error::NotAnAutomorphism("a coordinate is constant".into()));
        }
        let reduce_second = d2 >= d1;
        let (hi, lo) = if reduce_second {
            (&cur.f2, &cur.f1)
        } else {
            (&cur.f1, &cur.f2)
        };
        let (dh, dl) = if reduce_second { (d2, d1) } else { (d1, d2) };
        if dh % dl != 0 {
            return Err(Error::NotAnAutomorphism(format!(
                "degree {dh} is not a multiple of {dl}"
            )));
        }
        let k = dh / dl;
        let c = leading_ratio(&hi.leading_form(), &lo.leading_form().pow(k))
            .ok_or_else(|| Error::NotAnAutomorphism("leading forms are independent".into()))?;
        let reduced = hi - &lo.pow(k).scale(&c);
        let mono = MPoly::monomial(&field, 1, vec![k], c);
        let tri = PolyAut::triangular(&field, field.one(), field.zero(), field.one(), &mono)?;
        if reduce_second {
            cur.f2 = reduced;
            outer.push(vec![Factor::new(FactorKind::Triangular, tri)]);
        } else {
            cur.f1 = reduced;
            let s = PolyAut::swap(&field);
            outer.push(vec![
                Factor::new(FactorKind::Affine, s.clone()),
                Factor::new(FactorKind::Triangular, tri),
                Factor::new(FactorKind::Affine, s),
            ]);
        }
    }
    let mut atoms = vec![Factor::new(FactorKind::Affine, cur)];
    atoms.extend(outer.into_iter().rev().flatten());
    let out = normalize(&field, atoms)?;
    debug_assert_eq!(compose_factors(&field, &out).ok().as_ref(), Some(f));
    Ok(out)
}

/// `c` with `a = c·b`, if it exists.
fn leading_ratio<F: Field>(a: &MPoly<F>, b: &MPoly<F>) -> Option<F::Elem> {
    let field = a.field();
    let (e, ca) = a.terms().next()?;
    let c = field.div(ca, &b.coeff(e)).ok()?;
    (*a == b.scale(&c)).then_some(c)
}

fn normalize<F: Field>(field: &F, mut atoms: Vec<Factor<F>>) -> Result<Vec<Factor<F>>> {
    loop {
        atoms.retain(|a| !a.map.is_identity());
        for a in &mut atoms {
            if a.kind == FactorKind::Triangular && a.map.is_affine() {
                a.kind = FactorKind::Affine;
            }
        }
        let absorbable = |g: &Factor<F>| g.kind == FactorKind::Affine && g.is_shared();
        let merge_at = atoms.windows(2).position(|p| {
            p[0].kind == p[1].kind
                || (absorbable(&p[0]) && p[1].kind == FactorKind::Triangular)
                || (p[0].kind == FactorKind::Triangular && absorbable(&p[1]))
        });
        let Some(i) = merge_at else { break };
        let kind = if atoms[i].kind == atoms[i + 1].kind {
            atoms[i].kind
        } else {
            FactorKind::Triangular
        };
        let map = atoms[i + 1].map.compose(&atoms[i].map)?;
        atoms.splice(i..i + 2, [Factor::new(kind, map)]);
    }
    if atoms.is_empty() {
        atoms.push(Factor::new(FactorKind::Affine, PolyAut::identity(field)));
    }
    Ok(atoms)
}

/// The move word over `(0,-1)`: triangular factors become fibered modifications of degree
/// `deg P`, affine factors outside `J` become reversions, and `A ∩ J` factors vanish.
pub fn to_move_word<F: Field>(factors: &[Factor<F>]) -> Result<MoveWord> {
    let mut moves = Vec::new();
    for (i, g) in factors.iter().enumerate() {
        match g.kind {
            FactorKind::Triangular => {
                let d = g.map.f2.degree_in(0).unwrap_or(0);
                if d >= 2 {
                    moves.push(Move::fib(format!("t{i}"), d));
                }
            }
            FactorKind::Affine if !g.map.is_triangular() => {
                moves.push(Move::rev(format!("p{i}"), format!("q{i}")))
            }
            FactorKind::Affine => {}
        }
    }
    MoveWord::new(ZigzagType::from_tail(&[]), moves)
}

/// The fibration graph of the plane: all A¹-fibrations are equivalent and there is no
/// boundary curve of self-intersection at most -3.
pub fn plane_graph() -> FibrationGraph {
    let mut g = FibrationGraph::new(false);
    g.add_vertex("(0,-1)");
    g
}

/// Generation by fibration automorphisms, decided by checking its certificate: the swap
/// is an involution preserving `x + y`, triangular maps preserve the fibration `x`, and
/// Jung factorization shows `A` and `J` generate.
pub fn plane_generation_verdict<F: Field>(field: &F) -> Result<GenerationVerdict> {
    let s = PolyAut::swap(field);
    if !s.compose(&s)?.is_identity() {
        return Err(Error::Internal("swap is not an involution".into()));
    }
    let x_plus_y = MPoly::parse(field, &NAMES, "x + y")?;
    if x_plus_y.compose(&s.coords()) != x_plus_y {
        return Err(Error::Internal("swap does not preserve x + y".into()));
    }
    let p = MPoly::parse(field, &["x"], "x^3 - x + 1")?;
    let t = PolyAut::triangular(field, field.from_i64(2), field.one(), field.one(), &p)?;
    if t.f1.degree_in(1).is_some_and(|d| d > 0) {
        return Err(Error::Internal(
            "triangular map moves the fibration x".into(),
        ));
    }
    Ok(GenerationVerdict::Generated)
}
