//! Exact coefficient arithmetic: the rationals and odd prime fields.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound (exclusive) on supported prime moduli; residues multiply in `u64`.
pub const MAX_PRIME: u32 = 1 << 31;

/// Which coefficient domain to compute in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rational,
    Prime(u32),
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `rational` / `q` / `Q`, or `p<prime>` such as `p7`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "rational" | "q" | "Q" => Ok(FieldSpec::Rational),
            _ => {
                let digits = s
                    .strip_prefix('p')
                    .or_else(|| s.strip_prefix("GF("))
                    .map(|d| d.trim_end_matches(')'))
                    .ok_or_else(|| Error::Parse(format!("bad field spec {s:?}")))?;
                let p: u32 = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad field spec {s:?}")))?;
                Ok(FieldSpec::Prime(p))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "p{p}"),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A scalar value. Its meaning depends on the [`Field`] it is used with.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u32),
}

/// A validated coefficient field.
///
/// The handle is `Copy`; all arithmetic goes through it so that scalars can
/// stay plain values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    spec: FieldSpec,
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Validates a field spec. Characteristic 2 is rejected.
pub fn make_field(spec: FieldSpec) -> Result<Field> {
    if let FieldSpec::Prime(p) = spec {
        if p == 2 {
            return Err(Error::Characteristic("char 2 forbidden".into()));
        }
        if !is_prime(p) {
            return Err(Error::Characteristic(format!("{p} is not prime")));
        }
        if p >= MAX_PRIME {
            return Err(Error::Characteristic(format!("{p} exceeds 2^31")));
        }
    }
    Ok(Field { spec })
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    // extended Euclid on i64
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i64) as u32
}

impl Field {
    pub fn rational() -> Field {
        Field { spec: FieldSpec::Rational }
    }

    /// Shorthand for `make_field(FieldSpec::Prime(p))`.
    pub fn prime(p: u32) -> Result<Field> {
        make_field(FieldSpec::Prime(p))
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// Number of elements for a prime field, `None` over the rationals.
    pub fn order(&self) -> Option<u32> {
        match self.spec {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) => Some(p),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.order().unwrap_or(0)
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn zero(&self) -> Scalar {
        match self.spec {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self.spec {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Residue(v.rem_euclid(p as i64) as u32),
        }
    }

    /// Builds `num/den`; fails on a zero denominator or one divisible by `p`.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self.spec {
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            FieldSpec::Prime(p) => {
                let reduce = |x: &BigInt| -> u32 {
                    let m = BigInt::from(p);
                    let r = ((x % &m) + &m) % &m;
                    r.to_u32().expect("residue fits")
                };
                let d = reduce(den);
                if d == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar::Residue(
                    ((reduce(num) as u64 * mod_inverse(d, p) as u64) % p as u64) as u32,
                ))
            }
        }
    }

    /// Reduces a scalar into the canonical form of this field.
    ///
    /// Rationals are kept reduced by construction; residues are taken mod `p`.
    /// Fails if a rational must be reduced mod `p` and its denominator vanishes.
    pub fn canonical(&self, x: &Scalar) -> Result<Scalar> {
        match (self.spec, x) {
            (FieldSpec::Rational, Scalar::Rational(r)) => {
                Ok(Scalar::Rational(BigRational::new(r.numer().clone(), r.denom().clone())))
            }
            (FieldSpec::Prime(p), Scalar::Residue(v)) => Ok(Scalar::Residue(v % p)),
            (FieldSpec::Prime(_), Scalar::Rational(r)) => self.from_fraction(r.numer(), r.denom()),
            (FieldSpec::Rational, Scalar::Residue(v)) => Ok(self.from_i64(*v as i64)),
        }
    }

    fn res(&self, x: &Scalar) -> u64 {
        match x {
            Scalar::Residue(v) => *v as u64,
            Scalar::Rational(_) => panic!("rational scalar used with {}", self.spec),
        }
    }

    fn rat<'a>(&self, x: &'a Scalar) -> &'a BigRational {
        match x {
            Scalar::Rational(r) => r,
            Scalar::Residue(_) => panic!("residue scalar used with {}", self.spec),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.spec {
            FieldSpec::Rational => Scalar::Rational(self.rat(a) + self.rat(b)),
            FieldSpec::Prime(p) => Scalar::Residue(((self.res(a) + self.res(b)) % p as u64) as u32),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.spec {
            FieldSpec::Rational => Scalar::Rational(self.rat(a) - self.rat(b)),
            FieldSpec::Prime(p) => {
                let p = p as u64;
                Scalar::Residue(((self.res(a) + p - self.res(b)) % p) as u32)
            }
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.spec {
            FieldSpec::Rational => Scalar::Rational(self.rat(a) * self.rat(b)),
            FieldSpec::Prime(p) => Scalar::Residue(((self.res(a) * self.res(b)) % p as u64) as u32),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self.spec {
            FieldSpec::Rational => Scalar::Rational(-self.rat(a)),
            FieldSpec::Prime(p) => {
                let v = self.res(a);
                Scalar::Residue(if v == 0 { 0 } else { (p as u64 - v) as u32 })
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue(v) => *v == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue(v) => *v == 1,
        }
    }

    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        a == b
    }

    /// Multiplicative inverse.
    pub fn invert(&self, x: &Scalar) -> Result<Scalar> {
        if self.is_zero(x) {
            return Err(Error::DivisionByZero);
        }
        Ok(match self.spec {
            FieldSpec::Rational => Scalar::Rational(self.rat(x).recip()),
            FieldSpec::Prime(p) => Scalar::Residue(mod_inverse(self.res(x) as u32, p)),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.invert(b)?))
    }

    pub fn pow(&self, a: &Scalar, e: u32) -> Scalar {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Whether the scalar is a negative rational, or a residue above `p/2`.
    /// Used only for sign-aware rendering.
    pub fn looks_negative(&self, a: &Scalar) -> bool {
        match (self.spec, a) {
            (FieldSpec::Rational, Scalar::Rational(r)) => r.is_negative(),
            (FieldSpec::Prime(p), Scalar::Residue(v)) => *v > p / 2,
            _ => false,
        }
    }

    /// Residue representative of a prime-field scalar.
    pub fn residue(&self, a: &Scalar) -> u32 {
        self.res(a) as u32
    }

    /// All field elements, for prime fields only.
    pub fn elements(&self) -> Option<impl Iterator<Item = Scalar>> {
        self.order().map(|p| (0..p).map(Scalar::Residue))
    }

    /// Parses `-3/2`, `7`, `+1`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num
            .trim_start_matches('+')
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar {text:?}")))?;
        let den: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad scalar {text:?}")))?;
        self.from_fraction(&num, &den)
    }

    /// Text form: `-3/2` over the rationals, the residue in `[0, p)` otherwise.
    pub fn render(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue(v) => v.to_string(),
        }
    }

    /// Signed text form: residues above `p/2` print as negatives.
    pub fn render_signed(&self, a: &Scalar) -> String {
        match (self.spec, a) {
            (FieldSpec::Prime(p), Scalar::Residue(v)) if *v > p / 2 => format!("-{}", p - v),
            _ => self.render(a),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn field_construction() {
        assert_eq!(Field::prime(5).unwrap().order(), Some(5));
        let e = make_field(FieldSpec::Prime(2)).unwrap_err();
        assert!(e.to_string().contains("char 2 forbidden"));
        let e = make_field(FieldSpec::Prime(9)).unwrap_err();
        assert!(e.to_string().contains("not prime"));
        assert!(make_field(FieldSpec::Prime(1)).is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("p7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert!("x7".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(13).to_string(), "p13");
    }

    #[test]
    fn inverses() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.invert(&Scalar::Residue(3)).unwrap(), Scalar::Residue(5));
        assert_eq!(f7.invert(&f7.one()).unwrap(), f7.one());
        assert_eq!(f7.invert(&f7.zero()), Err(Error::DivisionByZero));

        let q = Field::rational();
        let x = q.parse_scalar("-2/3").unwrap();
        assert_eq!(q.invert(&x).unwrap(), q.parse_scalar("-3/2").unwrap());
        assert_eq!(q.invert(&q.one()).unwrap(), q.one());
        assert_eq!(q.invert(&q.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_forms() {
        let q = Field::rational();
        let x = q.parse_scalar("6/-4").unwrap();
        assert_eq!(q.render(&x), "-3/2");
        assert_eq!(q.canonical(&q.canonical(&x).unwrap()).unwrap(), x);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.canonical(&Scalar::Residue(12)).unwrap(), Scalar::Residue(2));
        assert_eq!(f5.parse_scalar("1/2").unwrap(), Scalar::Residue(3));
        assert_eq!(f5.render_signed(&Scalar::Residue(4)), "-1");
    }

    fn axioms(field: Field, a: Scalar, b: Scalar, c: Scalar) {
        let f = field;
        assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        assert_eq!(f.add(&a, &b), f.add(&b, &a));
        assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
        assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        assert_eq!(f.sub(&a, &b), f.add(&a, &f.neg(&b)));
        if !f.is_zero(&a) {
            assert!(f.is_one(&f.mul(&a, &f.invert(&a).unwrap())));
        }
        assert_eq!(f.canonical(&f.canonical(&a).unwrap()).unwrap(), a);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn prime_field_axioms(p in prop::sample::select(vec![3u32, 5, 7, 11, 13, 2147483647]),
                              a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
            let f = Field::prime(p).unwrap();
            axioms(f, Scalar::Residue(a % p), Scalar::Residue(b % p), Scalar::Residue(c % p));
        }

        #[test]
        fn rational_axioms(an in -50i64..50, ad in 1i64..20, bn in -50i64..50, bd in 1i64..20,
                           cn in -50i64..50, cd in 1i64..20) {
            let f = Field::rational();
            let mk = |n: i64, d: i64| f.from_fraction(&BigInt::from(n), &BigInt::from(d)).unwrap();
            axioms(f, mk(an, ad), mk(bn, bd), mk(cn, cd));
        }
    }
}
