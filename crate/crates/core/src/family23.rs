//! Pairs of boundary type `(0,-1,-2,-3)` or `(0,-1,-3,-2)`: the families I, II(a), III(a)
//! and IV, their reversion transitions and their fibration graph.
//!
//! A reversion center is the point of `F ∖ C` with coordinate `λ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibration_graph::{build_graph, FibrationGraph, TransitionOracle};
use crate::field::{Field, FieldSpec};
use crate::zigzag::ZigzagType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family23 {
    I,
    II,
    III,
    IV,
}

impl Family23 {
    pub fn has_parameter(self) -> bool {
        matches!(self, Family23::II | Family23::III)
    }

    /// I and III are `(0,-1,-2,-3)`; II and IV are `(0,-1,-3,-2)`.
    pub fn boundary_type(self) -> ZigzagType {
        match self {
            Family23::I | Family23::III => ZigzagType::from_tail(&[-2, -3]),
            Family23::II | Family23::IV => ZigzagType::from_tail(&[-3, -2]),
        }
    }
}

impl fmt::Display for Family23 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for Family23 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(Family23::I),
            "II" => Ok(Family23::II),
            "III" => Ok(Family23::III),
            "IV" => Ok(Family23::IV),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Invariant: `a` is present iff the family is II or III, and then `a ∉ {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair23<F: Field> {
    family: Family23,
    a: Option<F::Elem>,
}

/// `{"family": "II", "a": "3", "field": "F5"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair23Json {
    pub family: Family23,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    pub field: FieldSpec,
}

impl<F: Field> Pair23<F> {
    pub fn new(field: &F, family: Family23, a: Option<F::Elem>) -> Result<Self> {
        match (&a, family.has_parameter()) {
            (None, false) => {}
            (Some(x), true) if !field.is_zero(x) && *x != field.one() => {}
            (Some(x), true) => {
                return Err(Error::InvalidParameter(format!(
                    "parameter {x} must avoid 0 and 1"
                )))
            }
            (None, true) => {
                return Err(Error::InvalidParameter(format!(
                    "family {family} needs a parameter"
                )))
            }
            (Some(_), false) => {
                return Err(Error::InvalidParameter(format!(
                    "family {family} takes no parameter"
                )))
            }
        }
        Ok(Pair23 { family, a })
    }

    pub fn family(&self) -> Family23 {
        self.family
    }

    pub fn a(&self) -> Option<&F::Elem> {
        self.a.as_ref()
    }

    pub fn boundary_type(&self) -> ZigzagType {
        self.family.boundary_type()
    }

    pub fn to_json(&self, field: &F) -> Pair23Json {
        Pair23Json {
            family: self.family,
            a: self.a.as_ref().map(ToString::to_string),
            field: FieldSpec::from_str(&field.name()).expect("field names parse as specs"),
        }
    }

    pub fn from_json(field: &F, j: &Pair23Json) -> Result<Self> {
        if j.field.to_string() != field.name() {
            return Err(Error::FieldMismatch(j.field.to_string(), field.name()));
        }
        let a = j.a.as_deref().map(|s| field.parse_elem(s)).transpose()?;
        Self::new(field, j.family, a)
    }
}

impl<F: Field> fmt::Display for Pair23<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.a {
            Some(a) => write!(f, "{}({a})", self.family),
            None => write!(f, "{}", self.family),
        }
    }
}

/// The range of the center `λ'` of the inverse reversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaConstraint<E> {
    NonZero,
    Any,
    Exactly(E),
    OneOf(Vec<E>),
}

impl<E: Clone + Eq + fmt::Display> LambdaConstraint<E> {
    pub fn admits(&self, zero: &E, x: &E) -> bool {
        match self {
            LambdaConstraint::NonZero => x != zero,
            LambdaConstraint::Any => true,
            LambdaConstraint::Exactly(e) => x == e,
            LambdaConstraint::OneOf(es) => es.contains(x),
        }
    }

    pub fn to_json(&self) -> LambdaJson {
        match self {
            LambdaConstraint::NonZero => LambdaJson::NonZero,
            LambdaConstraint::Any => LambdaJson::Any,
            LambdaConstraint::Exactly(e) => LambdaJson::Exactly {
                value: e.to_string(),
            },
            LambdaConstraint::OneOf(es) => LambdaJson::OneOf {
                values: es.iter().map(ToString::to_string).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaJson {
    NonZero,
    Any,
    Exactly { value: String },
    OneOf { values: Vec<String> },
}

/// The reversion of `p` centered at `λ`, with the range of the inverse center.
///
/// I at `λ ∉ {0,1}` goes to II(1 − 1/λ) and I at `λ ∈ {0,1}` to IV; II(a) at `λ = 0` goes
/// to III(a). The remaining cases are the inverse transitions.
pub fn revert<F: Field>(
    field: &F,
    p: &Pair23<F>,
    lambda: &F::Elem,
) -> Result<(Pair23<F>, LambdaConstraint<F::Elem>)> {
    let (zero, one) = (field.zero(), field.one());
    let special = *lambda == zero || *lambda == one;
    match (p.family, &p.a) {
        (Family23::I, None) if !special => {
            let a = field.sub(&one, &field.inv(lambda).expect("λ is nonzero"));
            Ok((
                Pair23::new(field, Family23::II, Some(a))?,
                LambdaConstraint::NonZero,
            ))
        }
        (Family23::I, None) => Ok((
            Pair23::new(field, Family23::IV, None)?,
            LambdaConstraint::Any,
        )),
        (Family23::II, Some(a)) if *lambda == zero => Ok((
            Pair23::new(field, Family23::III, Some(a.clone()))?,
            LambdaConstraint::Any,
        )),
        (Family23::II, Some(a)) => {
            let back = field.inv(&field.sub(&one, a)).expect("a is not 1");
            Ok((
                Pair23::new(field, Family23::I, None)?,
                LambdaConstraint::Exactly(back),
            ))
        }
        (Family23::IV, None) => Ok((
            Pair23::new(field, Family23::I, None)?,
            LambdaConstraint::OneOf(vec![zero, one]),
        )),
        (Family23::III, Some(a)) => Ok((
            Pair23::new(field, Family23::II, Some(a.clone()))?,
            LambdaConstraint::Exactly(zero),
        )),
        _ => Err(Error::Uncovered(format!("{p} at λ = {lambda}"))),
    }
}

/// Isomorphism class: the family and the orbit `{a, a⁻¹}`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IsoClass<E> {
    pub family: Family23,
    pub orbit: Vec<E>,
}

impl<E: fmt::Display> fmt::Display for IsoClass<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orbit.is_empty() {
            return write!(f, "{}", self.family);
        }
        let parts: Vec<String> = self.orbit.iter().map(ToString::to_string).collect();
        write!(f, "{}({{{}}})", self.family, parts.join(","))
    }
}

impl<E: Clone> IsoClass<E> {
    /// The smallest member of the orbit.
    pub fn representative(&self) -> Option<&E> {
        self.orbit.first()
    }
}

pub fn iso_class<F: Field>(field: &F, p: &Pair23<F>) -> IsoClass<F::Elem> {
    let mut orbit: Vec<F::Elem> = match &p.a {
        Some(a) => vec![a.clone(), field.inv(a).expect("a is nonzero")],
        None => Vec::new(),
    };
    orbit.sort();
    orbit.dedup();
    IsoClass {
        family: p.family,
        orbit,
    }
}

/// Transition oracle over a finite set of centers.
struct Oracle23<'a, F: Field> {
    field: &'a F,
    centers: Vec<F::Elem>,
}

impl<F: Field> Oracle23<'_, F> {
    fn pair(&self, c: &IsoClass<F::Elem>) -> Pair23<F> {
        Pair23 {
            family: c.family,
            a: c.representative().cloned(),
        }
    }
}

impl<F: Field> TransitionOracle for Oracle23<'_, F> {
    type Vertex = IsoClass<F::Elem>;
    type Center = F::Elem;
    type Key = (IsoClass<F::Elem>, IsoClass<F::Elem>);

    fn centers(&self, _v: &Self::Vertex) -> Vec<F::Elem> {
        self.centers.clone()
    }

    fn transition(&self, v: &Self::Vertex, c: &F::Elem) -> Result<(Self::Vertex, Self::Key)> {
        let (q, _) = revert(self.field, &self.pair(v), c)?;
        let w = iso_class(self.field, &q);
        Ok((w.clone(), (v.clone(), w)))
    }

    fn bar(&self, key: &Self::Key) -> Self::Key {
        (key.1.clone(), key.0.clone())
    }

    fn arrow_label(&self, key: &Self::Key) -> String {
        format!("{}->{}", key.0, key.1)
    }

    fn hypothesis(&self) -> bool {
        true
    }
}

/// The fibration graph, exhaustive over a finite field or restricted to the parameters
/// `params` (values of `a`) otherwise.
pub fn build_graph23<F: Field>(field: &F, params: Option<&[F::Elem]>) -> Result<FibrationGraph> {
    let (zero, one) = (field.zero(), field.one());
    let centers = match (params, field.elements()) {
        (Some(ps), _) => {
            let mut cs = vec![zero.clone(), one.clone()];
            for a in ps {
                if *a == zero || *a == one {
                    return Err(Error::InvalidParameter(format!(
                        "parameter {a} must avoid 0 and 1"
                    )));
                }
                // I at λ = 1/(1 − a) reverts to II(a).
                cs.push(field.inv(&field.sub(&one, a)).expect("a is not 1"));
            }
            cs.sort();
            cs.dedup();
            cs
        }
        (None, Some(all)) if all.len() >= 3 => all,
        (None, Some(_)) => {
            return Err(Error::InvalidParameter(
                "the field needs at least 3 elements".into(),
            ))
        }
        (None, None) => {
            return Err(Error::InvalidParameter(
                "an infinite field needs a parameter list".into(),
            ))
        }
    };
    let oracle = Oracle23 { field, centers };
    build_graph(
        &oracle,
        &[IsoClass {
            family: Family23::I,
            orbit: Vec::new(),
        }],
    )
}

/// Number of classes of `k ∖ {0, 1}` under `a ∼ a⁻¹` for a finite field.
pub fn parameter_class_count<F: Field>(field: &F) -> Option<usize> {
    let all = field.elements()?;
    let (zero, one) = (field.zero(), field.one());
    let mut orbits: Vec<Vec<F::Elem>> = all
        .into_iter()
        .filter(|a| *a != zero && *a != one)
        .map(|a| {
            iso_class(
                field,
                &Pair23 {
                    family: Family23::II,
                    a: Some(a),
                },
            )
            .orbit
        })
        .collect();
    orbits.sort();
    orbits.dedup();
    Some(orbits.len())
}
