//! Exact coefficient fields: the rationals and prime fields.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact field arithmetic. Implementors are small descriptor values; elements carry no
/// reference to their field, so mixing fields is a caller error caught by [`Field::name`]
/// comparisons where it matters.
pub trait Field: Clone + fmt::Debug + PartialEq + Eq {
    type Elem: Clone + fmt::Debug + fmt::Display + PartialEq + Eq + Hash + Ord;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// All elements, when the field is finite.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    /// All `x` with `x^n = a`, sorted.
    fn nth_roots(&self, a: &Self::Elem, n: u32) -> Result<Vec<Self::Elem>>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let inv = self
            .inv(b)
            .ok_or_else(|| Error::InvalidParameter("division by zero".into()))?;
        Ok(self.mul(a, &inv))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` for possibly negative `e`; `None` for a zero base with `e < 0`.
    fn powi(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(&self.pow(a, e.unsigned_abs()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn name(&self) -> String {
        "Q".into()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }
    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
    fn nth_roots(&self, a: &BigRational, n: u32) -> Result<Vec<BigRational>> {
        if n == 0 {
            return Err(Error::InvalidParameter("0th root".into()));
        }
        if a.is_zero() {
            return Ok(vec![self.zero()]);
        }
        if a.is_negative() && n.is_multiple_of(2) {
            return Ok(vec![]);
        }
        let root = |x: &BigInt| -> Option<BigInt> {
            let r = x.abs().nth_root(n);
            (num_traits::pow(r.clone(), n as usize) == x.abs()).then_some(r)
        };
        let (Some(p), Some(q)) = (root(a.numer()), root(a.denom())) else {
            return Ok(vec![]);
        };
        let r = BigRational::new(if a.is_negative() { -p } else { p }, q);
        let mut out = if n.is_multiple_of(2) {
            vec![-r.clone(), r]
        } else {
            vec![r]
        };
        out.sort();
        Ok(out)
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// The prime field F_p with `p < 2^63`; elements are canonical residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

const ENUMERATION_LIMIT: u64 = 1 << 22;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::InvalidParameter(format!(
                "{p} is not a supported prime"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // Deterministic Miller-Rabin witnesses for all 64-bit integers.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn name(&self) -> String {
        format!("F{}", self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(a, self.p - 2))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }
    fn parse_elem(&self, s: &str) -> Result<u64> {
        let q = parse_rational(s)?;
        let reduce = |x: &BigInt| -> u64 {
            x.mod_floor(&BigInt::from(self.p))
                .to_u64()
                .expect("residue fits in u64")
        };
        let (n, d) = (reduce(q.numer()), reduce(q.denom()));
        let dinv = self
            .inv(&d)
            .ok_or_else(|| Error::Parse(format!("{s:?}: denominator vanishes mod {}", self.p)))?;
        Ok(self.mul(&n, &dinv))
    }
    fn nth_roots(&self, a: &u64, n: u32) -> Result<Vec<u64>> {
        if n == 0 {
            return Err(Error::InvalidParameter("0th root".into()));
        }
        let a = a % self.p;
        if a == 0 {
            return Ok(vec![0]);
        }
        let order = self.p - 1;
        let g = (n as u64).gcd(&order);
        if g == 1 {
            // x -> x^n is a bijection on F_p^*; invert the exponent modulo p-1.
            let e = mod_inverse(n as u64 % order, order).expect("coprime exponent");
            return Ok(vec![self.pow(&a, e)]);
        }
        if self.p < ENUMERATION_LIMIT {
            return Ok((1..self.p).filter(|x| self.pow(x, n as u64) == a).collect());
        }
        Err(Error::Unsupported(format!(
            "{n}-th roots in F{} with gcd(n, p-1) = {g}",
            self.p
        )))
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// A field named on the command line or in JSON: `Q` or `F<p>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

impl FromStr for FieldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Q);
        }
        let p = s
            .strip_prefix('F')
            .and_then(|p| p.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("field must be Q or F<p>, got {s:?}")))?;
        PrimeField::new(p)?;
        Ok(FieldSpec::Fp(p))
    }
}

impl TryFrom<String> for FieldSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FieldSpec> for String {
    fn from(f: FieldSpec) -> String {
        f.to_string()
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Q => f.write_str("Q"),
            FieldSpec::Fp(p) => write!(f, "F{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.inv(&3), Some(2));
        assert_eq!(f.from_i64(-1), 4);
        assert_eq!(f.parse_elem("1/2").unwrap(), 3);
        assert_eq!(f.nth_roots(&1, 2).unwrap(), vec![1, 4]);
        assert_eq!(f.nth_roots(&2, 2).unwrap(), Vec::<u64>::new());
        assert_eq!(f.nth_roots(&2, 3).unwrap(), vec![3]);
        assert!(f.parse_elem("1/5").is_err());
    }

    #[test]
    fn rational_roots() {
        let q = Rationals;
        let r = |s: &str| q.parse_elem(s).unwrap();
        assert_eq!(
            q.nth_roots(&r("4/9"), 2).unwrap(),
            vec![r("-2/3"), r("2/3")]
        );
        assert_eq!(q.nth_roots(&r("-8"), 3).unwrap(), vec![r("-2")]);
        assert!(q.nth_roots(&r("2"), 2).unwrap().is_empty());
        assert!(q.nth_roots(&r("-4"), 2).unwrap().is_empty());
    }

    #[test]
    fn field_spec_parse() {
        assert_eq!("Q".parse::<FieldSpec>().unwrap(), FieldSpec::Q);
        assert_eq!("F101".parse::<FieldSpec>().unwrap(), FieldSpec::Fp(101));
        assert!("F100".parse::<FieldSpec>().is_err());
        assert!("R".parse::<FieldSpec>().is_err());
    }

    proptest! {
        #[test]
        fn large_prime_roots_are_roots(a in 1u64..1_000_000_006, n in 1u32..9) {
            let f = PrimeField::new(1_000_000_007).unwrap();
            match f.nth_roots(&a, n) {
                Ok(rs) => for r in rs { prop_assert_eq!(f.pow(&r, n as u64), a); },
                Err(Error::Unsupported(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }

        #[test]
        fn small_prime_field_axioms(a in 0u64..101, b in 1u64..101) {
            let f = PrimeField::new(101).unwrap();
            prop_assert_eq!(f.mul(&f.div(&a, &b).unwrap(), &b), a);
            prop_assert_eq!(f.add(&f.sub(&a, &b), &b), a);
        }
    }
}
