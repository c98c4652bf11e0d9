//! Sparse multivariate polynomials over a [`Field`].
//!
//! Terms live in a `BTreeMap` keyed by graded-lexicographic monomials, so two
//! polynomials are equal exactly when their maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{structural, Error, Result};
use crate::scalars::{Field, Scalar};

/// Exponent vector of length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic with `x1 > x2 > ... > xn`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(n: usize, field: Field) -> Self {
        Polynomial { n, field, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, field: Field, c: Scalar) -> Self {
        let mut p = Self::zero(n, field);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn one(n: usize, field: Field) -> Self {
        Self::constant(n, field, field.one())
    }

    /// The variable `x_{j+1}` (0-based `j`).
    pub fn var(n: usize, field: Field, j: usize) -> Self {
        assert!(j < n, "variable index {j} out of range for n = {n}");
        let mut p = Self::zero(n, field);
        p.add_term(Monomial::var(n, j), field.one());
        p
    }

    /// `sum coeffs[j] * x_j`.
    pub fn linear(n: usize, field: Field, coeffs: &[Scalar]) -> Self {
        let mut p = Self::zero(n, field);
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, j), c.clone());
        }
        p
    }

    pub fn from_terms(n: usize, field: Field, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Result<Self> {
        let mut p = Self::zero(n, field);
        for (m, c) in terms {
            if m.0.len() != n {
                return Err(structural(format!("monomial of length {} in ring of {n} variables", m.0.len())));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Constant term.
    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.n))
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        let f = self.field;
        if f.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = f.add(existing, &c);
                if f.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.n != other.n || self.field != other.field {
            return Err(structural(format!(
                "ring mismatch: ({} vars, {}) vs ({} vars, {})",
                self.n, self.field, other.n, other.field
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    /// Product in `S`. Fails if the two operands live in different rings.
    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let f = self.field;
        let mut out = Polynomial::zero(self.n, f);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.checked_add(other).expect("polynomial ring mismatch")
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.checked_sub(other).expect("polynomial ring mismatch")
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.checked_mul(other).expect("polynomial ring mismatch")
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.field;
        Polynomial {
            n: self.n,
            field: f,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let f = self.field;
        if f.is_zero(c) {
            return Polynomial::zero(self.n, f);
        }
        Polynomial {
            n: self.n,
            field: f,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, c))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.n, self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales so the leading coefficient is 1; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&self.field.invert(c).expect("nonzero leading coefficient")),
        }
    }

    /// Evaluates at a point of `field^n`.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.n {
            return Err(structural(format!("point of length {} for {} variables", point.len(), self.n)));
        }
        let f = self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e as u32));
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Exact quotient `self / divisor`; errors unless the division is exact.
    pub fn divide_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(divisor)?;
        let f = self.field;
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = f.invert(lc)?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.n, f);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lm).ok_or(Error::NotDivisible)?;
            let qc = f.mul(c, &lc_inv);
            let mut t = Polynomial::zero(self.n, f);
            t.add_term(qm, qc);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Ok(quot)
    }

    /// Common total degree of all terms; `None` for the zero polynomial or a mixed-degree one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Ring map `x_j -> images[j]`; the images fix the target ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.n {
            return Err(structural("substitution needs one image per variable"));
        }
        let (tn, tf) = match images.first() {
            Some(p) => (p.n, p.field),
            None => (0, self.field),
        };
        let mut out = Polynomial::zero(tn, tf);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(tn, tf, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    t = t.checked_mul(&img.pow(e as u32))?;
                }
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Reinterprets the coefficients in another field (e.g. reduction mod p).
    pub fn change_field(&self, target: Field) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.n, target);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), target.canonical(c)?);
        }
        Ok(out)
    }

    /// Parses text such as `x1x4 + x2x5 - x7^2`, `3*x_1^2`, `(x1+x2)(x1-x2)`.
    pub fn parse(text: &str, n: usize, field: Field) -> Result<Polynomial> {
        let mut p = PolyParser { s: text.as_bytes(), pos: 0, n, field };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("trailing input in {text:?} at byte {}", p.pos)));
        }
        Ok(out)
    }

    /// Compiles to a residue evaluator. Only valid over a prime field.
    pub fn residue_evaluator(&self) -> ResidueEval {
        let p = self.field.order().expect("residue evaluator needs a prime field");
        ResidueEval {
            p: p as u64,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let vars = m
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(j, &e)| (j as u8, e as u8))
                        .collect();
                    (self.field.residue(c) as u64, vars)
                })
                .collect(),
        }
    }
}

/// A polynomial flattened for fast evaluation at residue points.
#[derive(Debug, Clone)]
pub struct ResidueEval {
    p: u64,
    terms: Vec<(u64, Vec<(u8, u8)>)>,
}

impl ResidueEval {
    pub fn eval(&self, point: &[u32]) -> u32 {
        let p = self.p;
        let mut acc = 0u64;
        for (c, vars) in &self.terms {
            let mut t = *c;
            for &(j, e) in vars {
                let x = point[j as usize] as u64;
                for _ in 0..e {
                    t = t * x % p;
                }
                if t == 0 {
                    break;
                }
            }
            acc += t;
        }
        (acc % p) as u32
    }

    pub fn is_zero_polynomial(&self) -> bool {
        self.terms.is_empty()
    }
}

struct PolyParser<'a> {
    s: &'a [u8],
    pos: usize,
    n: usize,
    field: Field,
}

impl PolyParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!(
            "{what} at byte {} of {:?}",
            self.pos,
            String::from_utf8_lossy(self.s)
        ))
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.n, self.field);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c == b'x' || c == b'(' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            let e: u32 = digits
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| self.err("expected exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'x') => {
                self.pos += 1;
                let braced = if self.s.get(self.pos) == Some(&b'_') {
                    self.pos += 1;
                    if self.s.get(self.pos) == Some(&b'{') {
                        self.pos += 1;
                        true
                    } else {
                        false
                    }
                } else {
                    false
                };
                let digits = self.digits();
                let idx: usize = digits
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| self.err("expected variable index"))?;
                if braced {
                    if self.s.get(self.pos) != Some(&b'}') {
                        return Err(self.err("expected '}'"));
                    }
                    self.pos += 1;
                }
                if idx == 0 || idx > self.n {
                    return Err(self.err(&format!("variable x{idx} outside 1..={}", self.n)));
                }
                Ok(Polynomial::var(self.n, self.field, idx - 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits().unwrap();
                let text = if self.s.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let den = self.digits().ok_or_else(|| self.err("expected denominator"))?;
                    format!("{num}/{den}")
                } else {
                    num
                };
                let c = self.field.parse_scalar(&text)?;
                Ok(Polynomial::constant(self.n, self.field, c))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

impl fmt::Display for Polynomial {
    /// Terms in decreasing graded-lex order, e.g. `x1^2 - 2*x1*x5 + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field;
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = field.looks_negative(c);
            let mag = if neg { field.neg(c) } else { c.clone() };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("x{}", j + 1) } else { format!("x{}^{e}", j + 1) })
                .collect();
            let unit = field.is_one(&mag);
            match (vars.is_empty(), unit) {
                (true, _) => write!(f, "{}", field.render(&mag))?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{}*{}", field.render(&mag), vars.join("*"))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::rational()
    }

    fn p(text: &str, n: usize) -> Polynomial {
        Polynomial::parse(text, n, q()).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let f = p("x1 + x2", 2);
        let g = p("x1 - x2", 2);
        assert_eq!(f.mul(&g), p("x1^2 - x2^2", 2));
        assert!(f.mul(&Polynomial::zero(2, q())).is_zero());
        assert_eq!(p("x5", 5).mul(&p("x5", 5)), p("x5^2", 5));
    }

    #[test]
    fn ring_mismatch_is_structural() {
        let f = p("x1", 2);
        let g = p("x1", 3);
        assert!(matches!(f.checked_mul(&g), Err(Error::Structural(_))));
        let g5 = Polynomial::parse("x1", 2, Field::prime(5).unwrap()).unwrap();
        assert!(matches!(f.checked_mul(&g5), Err(Error::Structural(_))));
    }

    #[test]
    fn evaluation() {
        let f = p("x1x4 + x2x5 + x3x6 - x7^2", 7);
        let a: Vec<Scalar> = [1, 0, 0, 1, 0, 0, 0].iter().map(|&v| q().from_i64(v)).collect();
        assert_eq!(f.eval(&a).unwrap(), q().one());
        let g = p("3*x1^2 + x2 + 7", 2);
        assert_eq!(g.eval(&[q().zero(), q().zero()]).unwrap(), q().from_i64(7));
        let h = p("x5", 5);
        let e1: Vec<Scalar> = [1, 0, 0, 0, 0].iter().map(|&v| q().from_i64(v)).collect();
        assert_eq!(h.eval(&e1).unwrap(), q().zero());
        assert!(matches!(h.eval(&e1[..3]), Err(Error::Structural(_))));
    }

    #[test]
    fn exact_division() {
        let f = p("x5^4", 5);
        assert_eq!(f.divide_exact(&p("x5^2", 5)).unwrap(), p("x5^2", 5));
        let g = p("x1^2 - x2^2 + 3*x1x3", 3);
        assert_eq!(g.divide_exact(&Polynomial::one(3, q())).unwrap(), g);
        assert_eq!(p("x1x2", 3).divide_exact(&p("x3", 3)), Err(Error::NotDivisible));
        assert_eq!(p("x1", 3).divide_exact(&Polynomial::zero(3, q())), Err(Error::DivisionByZero));
        assert_eq!(p("x1^2 + x1", 2).divide_exact(&p("x1 + x2", 2)), Err(Error::NotDivisible));
    }

    #[test]
    fn degrees() {
        assert_eq!(p("x1x4 + x2x5 + x3x6 - x7^2", 7).homogeneous_degree(), Some(2));
        assert_eq!(p("x1 + x2^2", 2).homogeneous_degree(), None);
        assert_eq!(p("5", 2).homogeneous_degree(), Some(0));
        assert_eq!(Polynomial::zero(2, q()).homogeneous_degree(), None);
    }

    #[test]
    fn rendering() {
        assert_eq!(p("x2 - x1^2 + 3*x1x5", 5).to_string(), "-x1^2 + 3*x1*x5 + x2");
        assert_eq!(p("-1/2*x3 + 2", 3).to_string(), "-1/2*x3 + 2");
        let f5 = Field::prime(5).unwrap();
        assert_eq!(Polynomial::parse("x_1^2 - x_{2}", 2, f5).unwrap().to_string(), "x1^2 - x2");
        assert_eq!(Polynomial::zero(1, f5).to_string(), "0");
        let f = p("(x1+x2)(x1-x2)", 2);
        assert_eq!(Polynomial::parse(&f.to_string(), 2, q()).unwrap(), f);
    }

    #[test]
    fn parse_errors() {
        assert!(Polynomial::parse("x9", 3, q()).is_err());
        assert!(Polynomial::parse("x1 +", 3, q()).is_err());
        assert!(Polynomial::parse("x1 ) ", 3, q()).is_err());
    }

    #[test]
    fn residue_evaluator_agrees() {
        let f5 = Field::prime(5).unwrap();
        let f = Polynomial::parse("x1x4 + x2x5 + x3x6 - x7^2 + 3", 7, f5).unwrap();
        let pt = [1u32, 2, 3, 4, 0, 1, 2];
        let sc: Vec<Scalar> = pt.iter().map(|&v| Scalar::Residue(v)).collect();
        assert_eq!(Scalar::Residue(f.residue_evaluator().eval(&pt)), f.eval(&sc).unwrap());
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::collection::vec(0u16..3, n), -5i64..6), 0..6).prop_map(move |ts| {
            let f = Field::rational();
            Polynomial::from_terms(n, f, ts.into_iter().map(|(e, c)| (Monomial(e), f.from_i64(c)))).unwrap()
        })
    }

    fn arb_point(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
        prop::collection::vec(-4i64..5, n).prop_map(|v| v.into_iter().map(|x| Field::rational().from_i64(x)).collect())
    }

    proptest! {
        #[test]
        fn evaluation_is_a_ring_homomorphism(f in arb_poly(3), g in arb_poly(3), a in arb_point(3)) {
            let fl = Field::rational();
            let (fa, ga) = (f.eval(&a).unwrap(), g.eval(&a).unwrap());
            prop_assert_eq!(f.add(&g).eval(&a).unwrap(), fl.add(&fa, &ga));
            prop_assert_eq!(f.mul(&g).eval(&a).unwrap(), fl.mul(&fa, &ga));
        }

        #[test]
        fn multiplication_laws(f in arb_poly(3), g in arb_poly(3), h in arb_poly(3)) {
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        }

        #[test]
        fn division_by_monomial_roundtrips(f in arb_poly(3), e in prop::collection::vec(0u16..3, 3), c in 1i64..5) {
            let fl = Field::rational();
            let g = Polynomial::from_terms(3, fl, [(Monomial(e), fl.from_i64(c))]).unwrap();
            prop_assert_eq!(f.mul(&g).divide_exact(&g).unwrap(), f);
        }
    }
}
