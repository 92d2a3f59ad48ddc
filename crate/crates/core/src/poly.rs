//! Sparse multivariate polynomials over an exact [`Field`].
//!
//! Univariate polynomials are `MPoly` values with one variable.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Field;

/// A polynomial stored as exponent vector -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F::Elem>,
}

impl<F: Field> MPoly<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        MPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::monomial(field, nvars, vec![0; nvars], c)
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn from_i64(field: &F, nvars: usize, c: i64) -> Self {
        Self::constant(field, nvars, field.from_i64(c))
    }

    /// The variable `x_i`.
    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, nvars, e, field.one())
    }

    pub fn monomial(field: &F, nvars: usize, exps: Vec<u32>, c: F::Elem) -> Self {
        assert_eq!(exps.len(), nvars, "exponent vector length");
        let mut p = Self::zero(field, nvars);
        if !field.is_zero(&c) {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Univariate polynomial from coefficients in increasing degree.
    pub fn from_coeffs(field: &F, coeffs: &[F::Elem]) -> Self {
        let mut p = Self::zero(field, 1);
        for (i, c) in coeffs.iter().enumerate() {
            if !field.is_zero(c) {
                p.terms.insert(vec![i as u32], c.clone());
            }
        }
        p
    }

    /// Coefficients in increasing degree of a univariate polynomial; empty for zero.
    pub fn coeffs(&self) -> Vec<F::Elem> {
        assert_eq!(self.nvars, 1, "coeffs() needs a univariate polynomial");
        let Some(d) = self.degree_in(0) else {
            return Vec::new();
        };
        (0..=d).map(|i| self.coeff(&[i])).collect()
    }

    pub fn from_terms(
        field: &F,
        nvars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, F::Elem)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> F::Elem {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn constant_term(&self) -> F::Elem {
        self.coeff(&vec![0; self.nvars])
    }

    /// The value if the polynomial is constant (zero included).
    pub fn as_constant(&self) -> Option<F::Elem> {
        match self.total_degree() {
            None => Some(self.field.zero()),
            Some(0) => Some(self.constant_term()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.iter().sum::<u32>() == d);
        Self::from_terms(
            &self.field,
            self.nvars,
            terms.map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// Top-degree homogeneous part; zero for zero.
    pub fn leading_form(&self) -> Self {
        match self.total_degree() {
            Some(d) => self.homogeneous_part(d),
            None => self.clone(),
        }
    }

    fn check(&self, other: &Self) {
        assert!(
            self.field == other.field && self.nvars == other.nvars,
            "polynomial ring mismatch: {}[{}] vs {}[{}]",
            self.field.name(),
            self.nvars,
            other.field.name(),
            other.nvars
        );
    }

    /// Errors unless both polynomials live in the same ring.
    pub fn compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.name(), other.field.name()));
        }
        if self.nvars != other.nvars {
            return Err(Error::InvalidParameter(format!(
                "variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, a)| (e.clone(), self.field.mul(a, c)))
            .collect();
        MPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `subs[i]` for `x_i`. All substitutes must share a ring.
    pub fn compose(&self, subs: &[MPoly<F>]) -> Self {
        assert_eq!(subs.len(), self.nvars, "one substitute per variable");
        let target = subs.first().map_or(0, |s| s.nvars);
        for s in subs {
            assert!(
                s.field == self.field && s.nvars == target,
                "substitutes must share a ring"
            );
        }
        let mut cache: Vec<Vec<MPoly<F>>> = subs
            .iter()
            .map(|s| vec![Self::one(&self.field, target), s.clone()])
            .collect();
        let mut out = Self::zero(&self.field, target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(&self.field, target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = &cache[i][cache[i].len() - 1] * &subs[i];
                    cache[i].push(next);
                }
                term = &term * &cache[i][k as usize];
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        out
    }

    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.nvars, "one value per variable");
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t = f.mul(&t, &f.pow(x, k as u64));
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let f = &self.field;
        let terms = self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[i] -= 1;
            (e2, f.mul(c, &f.from_i64(e[i] as i64)))
        });
        Self::from_terms(f, self.nvars, terms)
    }

    /// Exact division by `x_i`.
    pub fn div_by_var(&self, i: usize) -> Result<Self> {
        if self.terms.keys().any(|e| e[i] == 0) {
            return Err(Error::Internal(format!(
                "polynomial not divisible by variable {i}"
            )));
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = e.clone();
            e2[i] -= 1;
            (e2, c.clone())
        });
        Ok(Self::from_terms(&self.field, self.nvars, terms))
    }

    /// Embeds into a ring with more variables; `map[i]` is the new index of `x_i`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                e2[map[i]] += k;
            }
            (e2, c.clone())
        });
        Self::from_terms(&self.field, nvars, terms)
    }

    /// Human-readable form, highest total degree first.
    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut s = String::new();
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], k)
                    }
                })
                .collect();
            let text = c.to_string();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            let mag_is_one = mag == "1";
            let body = if mono.is_empty() {
                mag
            } else if mag_is_one {
                mono.join("*")
            } else if mag.contains('/') {
                format!("({mag})*{}", mono.join("*"))
            } else {
                format!("{mag}*{}", mono.join("*"))
            };
            match (n, neg) {
                (0, false) => s.push_str(&body),
                (0, true) => s.push_str(&format!("-{body}")),
                (_, false) => s.push_str(&format!(" + {body}")),
                (_, true) => s.push_str(&format!(" - {body}")),
            }
        }
        s
    }

    /// Parses `+ - * ^`, parentheses, implicit multiplication and `a/b` literals.
    pub fn parse(field: &F, names: &[&str], s: &str) -> Result<Self> {
        let mut p = Parser {
            field,
            names,
            src: s,
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }

    /// Terms as (exponents, coefficient string) pairs, in exponent order.
    pub fn to_terms(&self) -> Vec<(Vec<u32>, String)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.to_string()))
            .collect()
    }

    pub fn from_term_strings(
        field: &F,
        nvars: usize,
        terms: &[(Vec<u32>, String)],
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Parse(format!(
                    "exponent vector {e:?} needs {nvars} entries"
                )));
            }
            out.push((e.clone(), field.parse_elem(c)?));
        }
        Ok(Self::from_terms(field, nvars, out))
    }
}

impl<F: Field> Add for &MPoly<F> {
    type Output = MPoly<F>;
    fn add(self, other: &MPoly<F>) -> MPoly<F> {
        self.check(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<F: Field> Sub for &MPoly<F> {
    type Output = MPoly<F>;
    fn sub(self, other: &MPoly<F>) -> MPoly<F> {
        self.check(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), self.field.neg(c));
        }
        out
    }
}

impl<F: Field> Neg for &MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        self.scale(&self.field.neg(&self.field.one()))
    }
}

impl<F: Field> Mul for &MPoly<F> {
    type Output = MPoly<F>;
    fn mul(self, other: &MPoly<F>) -> MPoly<F> {
        self.check(other);
        let f = &self.field;
        let mut acc: BTreeMap<Vec<u32>, F::Elem> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = f.mul(ca, cb);
                match acc.get_mut(&e) {
                    Some(v) => *v = f.add(v, &c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !f.is_zero(c));
        MPoly {
            field: f.clone(),
            nvars: self.nvars,
            terms: acc,
        }
    }
}

struct Parser<'a, F: Field> {
    field: &'a F,
    names: &'a [&'a str],
    src: &'a str,
    pos: usize,
}

impl<F: Field> Parser<'_, F> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..]
                .chars()
                .next()
                .map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<MPoly<F>> {
        let mut acc = if self.eat('-') {
            -&self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly<F>> {
        let mut acc = self.factor()?;
        loop {
            // Juxtaposition such as `2x` or `x(y + 1)` multiplies.
            let implicit = matches!(self.peek(), Some(c) if c == '(' || c.is_ascii_alphanumeric());
            if !(self.eat('*') || implicit) {
                return Ok(acc);
            }
            acc = &acc * &self.factor()?;
        }
    }

    fn factor(&mut self) -> Result<MPoly<F>> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let digits = self.digits();
            let e: u32 = digits.parse().map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<MPoly<F>> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut lit = self.digits().to_string();
                let save = self.pos;
                if self.eat('/') {
                    self.skip_ws();
                    let d = self.digits().to_string();
                    if d.is_empty() {
                        self.pos = save;
                    } else {
                        lit = format!("{lit}/{d}");
                    }
                }
                let c = self.field.parse_elem(&lit)?;
                Ok(MPoly::constant(self.field, self.nvars(), c))
            }
            Some(_) => {
                let rest = &self.src[self.pos..];
                let best = (0..self.names.len())
                    .filter(|&i| rest.starts_with(self.names[i]))
                    .max_by_key(|&i| self.names[i].len());
                match best {
                    Some(i) => {
                        self.pos += self.names[i].len();
                        Ok(MPoly::var(self.field, self.nvars(), i))
                    }
                    None => Err(self.err(&format!(
                        "unknown symbol (variables are {})",
                        self.names.join(", ")
                    ))),
                }
            }
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    const XY: [&str; 2] = ["x", "y"];

    fn q(s: &str) -> MPoly<Rationals> {
        MPoly::parse(&Rationals, &XY, s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(q("y+x^2").fmt_with(&XY), "x^2 + y");
        assert_eq!(q("2xy - (x+1)^2").fmt_with(&XY), "-x^2 + 2*x*y - 2*x - 1");
        assert_eq!(q("1/2 x").fmt_with(&XY), "(1/2)*x");
        assert_eq!(
            q("(1/2)x"),
            q("x").scale(&Rationals.parse_elem("1/2").unwrap())
        );
        assert!(MPoly::parse(&Rationals, &XY, "x + z").is_err());
        assert!(MPoly::parse(&Rationals, &XY, "(x").is_err());
        assert_eq!(q("-x*-y"), q("x*y"));
    }

    #[test]
    fn compose_and_derivative() {
        let f = q("x^2 + y");
        let g = f.compose(&[q("x+y"), q("x")]);
        assert_eq!(g, q("x^2 + 2xy + y^2 + x"));
        assert_eq!(g.derivative(0), q("2x + 2y + 1"));
        assert_eq!(q("x^2 y + x").div_by_var(0).unwrap(), q("xy + 1"));
        assert!(q("x + y").div_by_var(0).is_err());
    }

    #[test]
    fn prime_field_parse() {
        let f = PrimeField::new(5).unwrap();
        let p = MPoly::parse(&f, &["w"], "w^2 - 1").unwrap();
        assert_eq!(p.coeffs(), vec![4, 0, 1]);
        assert_eq!(p.fmt_with(&["w"]), "w^2 + 4");
    }

    #[test]
    fn term_strings_round_trip() {
        let p = q("3/4 x^3 y - 2");
        assert_eq!(
            MPoly::from_term_strings(&Rationals, 2, &p.to_terms()).unwrap(),
            p
        );
    }

    fn arb_poly() -> impl Strategy<Value = MPoly<PrimeField>> {
        prop::collection::vec(((0u32..4, 0u32..4), 0u64..7), 0..6).prop_map(|ts| {
            let f = PrimeField::new(7).unwrap();
            MPoly::from_terms(&f, 2, ts.into_iter().map(|((a, b), c)| (vec![a, b], c)))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn compose_matches_eval(a in arb_poly(), s in arb_poly(), t in arb_poly(), x in 0u64..7, y in 0u64..7) {
            let composed = a.compose(&[s.clone(), t.clone()]);
            let pt = [x, y];
            prop_assert_eq!(composed.eval(&pt), a.eval(&[s.eval(&pt), t.eval(&pt)]));
        }

        #[test]
        fn print_parse_round_trip(a in arb_poly()) {
            let f = PrimeField::new(7).unwrap();
            prop_assert_eq!(MPoly::parse(&f, &XY, &a.fmt_with(&XY)).unwrap(), a);
        }
    }
}
