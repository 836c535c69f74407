//! Sparse multivariate polynomials over a [`FieldCtx`].
//!
//! Terms are keyed by exponent vectors in a BTreeMap under graded-lex order;
//! stored coefficients are never zero, so structural equality is polynomial
//! equality. Canonical printing walks terms in descending graded-lex order
//! and round-trips through the parser.
//!
//! Grammar (CLI and file input): variables Z0..Z9 (multi-digit indices are
//! accepted and range-checked), operators + - * ^, integer coefficients
//! reduced mod p, extension coefficients in the bracket syntax of [`gf`],
//! insignificant whitespace.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Embedding, FieldCtx, Scalar};

/// Exponent vector of one term, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse multivariate polynomial with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldCtx,
    num_vars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: &FieldCtx, num_vars: usize) -> MultiPoly {
        MultiPoly { field: field.clone(), num_vars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &FieldCtx, num_vars: usize, c: Scalar) -> MultiPoly {
        let mut p = Self::zero(field, num_vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; num_vars]), c);
        }
        p
    }

    /// The single variable Z_i.
    pub fn variable(field: &FieldCtx, num_vars: usize, i: usize) -> Result<MultiPoly> {
        if i >= num_vars {
            return Err(Error::VarOutOfRange { index: i, num_vars });
        }
        let mut exps = vec![0u16; num_vars];
        exps[i] = 1;
        let mut p = Self::zero(field, num_vars);
        p.terms.insert(Monomial(exps), field.one());
        Ok(p)
    }

    pub fn from_terms(
        field: &FieldCtx,
        num_vars: usize,
        terms: impl IntoIterator<Item = (Vec<u16>, Scalar)>,
    ) -> Result<MultiPoly> {
        let mut p = Self::zero(field, num_vars);
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(Error::LengthMismatch { expected: num_vars, got: exps.len() });
            }
            field.check(&c)?;
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).copied().unwrap_or_else(|| self.field.zero())
    }

    /// Reinterpret in a larger variable ring; new variables do not occur.
    pub fn pad_vars(&self, new_num_vars: usize) -> Result<MultiPoly> {
        if new_num_vars < self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, got: new_num_vars });
        }
        let mut out = Self::zero(&self.field, new_num_vars);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps.resize(new_num_vars, 0);
            out.terms.insert(Monomial(exps), *c);
        }
        Ok(out)
    }

    fn compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field || self.num_vars != other.num_vars {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), *c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        let mut out = Self::zero(&self.field, self.num_vars);
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.field.mul(c, s));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(other)?;
        let mut out = Self::zero(&self.field, self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps: Vec<u16> = ma.0.iter().zip(&mb.0).map(|(&a, &b)| a + b).collect();
                out.add_term(Monomial(exps), self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = Self::constant(&self.field, self.num_vars, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same context");
        }
        acc
    }

    /// Multiply by the variable Z_i.
    pub fn mul_by_var(&self, i: usize) -> Result<MultiPoly> {
        if i >= self.num_vars {
            return Err(Error::VarOutOfRange { index: i, num_vars: self.num_vars });
        }
        let mut out = Self::zero(&self.field, self.num_vars);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            exps[i] += 1;
            out.terms.insert(Monomial(exps), *c);
        }
        Ok(out)
    }

    /// Exact evaluation; variable powers are computed once per call.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.num_vars {
            return Err(Error::LengthMismatch { expected: self.num_vars, got: point.len() });
        }
        for s in point {
            self.field.check(s)?;
        }
        let mut max_exp = vec![0u16; self.num_vars];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let powers: Vec<Vec<Scalar>> = point
            .iter()
            .zip(&max_exp)
            .map(|(v, &me)| {
                let mut ps = Vec::with_capacity(me as usize + 1);
                ps.push(self.field.one());
                for e in 1..=me as usize {
                    let last = ps[e - 1];
                    ps.push(self.field.mul(&last, v));
                }
                ps
            })
            .collect();
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = *c;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = self.field.mul(&t, &powers[i][e as usize]);
                }
            }
            acc = self.field.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Formal partial derivative; exponents reduced mod p may kill terms.
    pub fn partial_derivative(&self, i: usize) -> Result<MultiPoly> {
        if i >= self.num_vars {
            return Err(Error::VarOutOfRange { index: i, num_vars: self.num_vars });
        }
        let mut out = Self::zero(&self.field, self.num_vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let factor = self.field.from_int(e as i64);
            let c2 = self.field.mul(c, &factor);
            if c2.is_zero() {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c2);
        }
        Ok(out)
    }

    /// All N+1 partial derivatives in variable order.
    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.num_vars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    /// Compose with a linear change of variables: Z_i -> sum_j map[i][j] W_j.
    ///
    /// `map` has one row per current variable; every row has the new
    /// variable count. The result is expanded to canonical sparse form.
    pub fn substitute_linear(&self, map: &[Vec<Scalar>]) -> Result<MultiPoly> {
        if map.len() != self.num_vars {
            return Err(Error::DimensionMismatch { expected: self.num_vars, got: map.len() });
        }
        let new_vars = map.first().map_or(0, Vec::len);
        if new_vars == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        for row in map {
            if row.len() != new_vars {
                return Err(Error::DimensionMismatch { expected: new_vars, got: row.len() });
            }
            for s in row {
                self.field.check(s)?;
            }
        }
        let images: Vec<MultiPoly> = map
            .iter()
            .map(|row| {
                let mut lin = Self::zero(&self.field, new_vars);
                for (j, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        let mut exps = vec![0u16; new_vars];
                        exps[j] = 1;
                        lin.add_term(Monomial(exps), *c);
                    }
                }
                lin
            })
            .collect();
        let mut out = Self::zero(&self.field, new_vars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(&self.field, new_vars, *c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e as u32))?;
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Check sum_i Z_i df/dZ_i = (d mod p) f, which holds for every
    /// homogeneous f of degree d; the residual is returned for diagnostics.
    pub fn euler_identity_check(&self) -> Result<(bool, MultiPoly)> {
        if !self.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        let d = self.degree();
        let mut sum = Self::zero(&self.field, self.num_vars);
        for i in 0..self.num_vars {
            sum = sum.add(&self.partial_derivative(i)?.mul_by_var(i)?)?;
        }
        let scaled = self.scale(&self.field.from_int(d as i64));
        let residual = sum.sub(&scaled)?;
        Ok((residual.is_zero(), residual))
    }

    /// Move the polynomial up a field tower, coefficient by coefficient.
    pub fn lift(&self, emb: &Embedding) -> Result<MultiPoly> {
        if *emb.source() != self.field {
            return Err(Error::ContextMismatch);
        }
        let mut out = Self::zero(emb.target(), self.num_vars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), emb.map(c)?);
        }
        Ok(out)
    }

    /// Parse the polynomial grammar; see the module docs.
    pub fn parse(field: &FieldCtx, num_vars: usize, text: &str) -> Result<MultiPoly> {
        Parser { field, num_vars, bytes: text.as_bytes(), pos: 0 }.parse()
    }

    /// Parse and insist the result is homogeneous.
    pub fn parse_homogeneous(field: &FieldCtx, num_vars: usize, text: &str) -> Result<MultiPoly> {
        let p = Self::parse(field, num_vars, text)?;
        if !p.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut wrote_factor = false;
            if !c.is_one() || m.degree() == 0 {
                write!(f, "{c}")?;
                wrote_factor = true;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote_factor {
                    write!(f, "*")?;
                }
                wrote_factor = true;
                write!(f, "Z{i}")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {:?}", self.field)
    }
}

struct Parser<'a> {
    field: &'a FieldCtx,
    num_vars: usize,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<MultiPoly> {
        let poly = self.expr()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return self.err(format!("unexpected {:?}", self.bytes[self.pos] as char));
        }
        Ok(poly)
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            if e < 0 {
                return self.err("negative exponent");
            }
            if e > u16::MAX as i64 {
                return self.err("exponent too large");
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'Z') => {
                self.pos += 1;
                let idx = self.integer()?;
                if idx < 0 || idx as usize >= self.num_vars {
                    return Err(Error::VarOutOfRange {
                        index: idx.max(0) as usize,
                        num_vars: self.num_vars,
                    });
                }
                MultiPoly::variable(self.field, self.num_vars, idx as usize)
            }
            Some(b'[') => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b']' {
                    self.pos += 1;
                }
                if self.pos == self.bytes.len() {
                    return self.err("unterminated '['");
                }
                self.pos += 1;
                let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
                let c = self.field.parse_scalar(text)?;
                Ok(MultiPoly::constant(self.field, self.num_vars, c))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(MultiPoly::constant(self.field, self.num_vars, self.field.from_int(v)))
            }
            Some(c) => self.err(format!("unexpected {:?}", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let mut negate = false;
        if self.bytes.get(self.pos) == Some(&b'-') {
            negate = true;
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        let v: i64 = match text.parse() {
            Ok(v) => v,
            Err(_) => return self.err("number out of range"),
        };
        Ok(if negate { -v } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldCtx;
    use proptest::prelude::*;

    fn gf(p: u64, k: u32) -> FieldCtx {
        FieldCtx::new(p, k).unwrap()
    }

    fn ex_threefold(f3: &FieldCtx) -> MultiPoly {
        MultiPoly::parse(f3, 5, "Z1^6 + Z2^6 + Z3*Z4*Z0^4").unwrap()
    }

    fn ex_quintic(f: &FieldCtx) -> MultiPoly {
        MultiPoly::parse(f, 4, "Z0^5 + Z1^5 - Z2^3*Z3^2").unwrap()
    }

    fn lift_vars(p: &MultiPoly, new_vars: usize) -> MultiPoly {
        MultiPoly::from_terms(
            p.field(),
            new_vars,
            p.terms().map(|(m, c)| {
                let mut e = m.0.clone();
                e.resize(new_vars, 0);
                (e, *c)
            }),
        )
        .unwrap()
    }

    #[test]
    fn parse_degree_six_threefold() {
        let f3 = gf(3, 1);
        let f = ex_threefold(&f3);
        assert_eq!(f.degree(), 6);
        assert_eq!(f.num_terms(), 3);
        assert!(f.is_homogeneous());
    }

    #[test]
    fn parse_cancellation_and_char_reduction() {
        let f3 = gf(3, 1);
        assert!(MultiPoly::parse(&f3, 2, "Z0 - Z0").unwrap().is_zero());
        assert!(MultiPoly::parse(&f3, 1, "3*Z0^2").unwrap().is_zero());
    }

    #[test]
    fn parse_reports_position() {
        let f3 = gf(3, 1);
        match MultiPoly::parse(&f3, 3, "Z0 + @Z1") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            MultiPoly::parse(&f3, 3, "Z7"),
            Err(Error::VarOutOfRange { index: 7, num_vars: 3 })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let f3 = gf(3, 1);
        let f = ex_threefold(&f3);
        let one = f3.one();
        // 1 + 1 + 1 = 0 mod 3, checked term by term by hand.
        assert!(f.evaluate(&vec![one; 5]).unwrap().is_zero());
        let zero_pt = vec![f3.zero(); 5];
        assert!(f.evaluate(&zero_pt).unwrap().is_zero());
        assert!(matches!(
            f.evaluate(&vec![one; 4]),
            Err(Error::LengthMismatch { expected: 5, got: 4 })
        ));

        // Direct substitution oracle over GF(9): f(1,1,b,c) = 2 - b^3 c^2.
        let f9 = gf(3, 2);
        let g = ex_quintic(&f9);
        let b = f9.from_coeffs(&[1, 1]).unwrap();
        let c = f9.from_coeffs(&[2, 1]).unwrap();
        let got = g.evaluate(&[f9.one(), f9.one(), b, c]).unwrap();
        let b3c2 = f9.mul(&f9.pow_u(&b, 3), &f9.pow_u(&c, 2));
        assert_eq!(got, f9.sub(&f9.from_int(2), &b3c2));
    }

    #[test]
    fn derivative_kills_sixth_powers_in_char_three() {
        let f3 = gf(3, 1);
        let f = ex_threefold(&f3);
        assert!(f.partial_derivative(1).unwrap().is_zero());
        assert!(f.partial_derivative(2).unwrap().is_zero());
        let d0 = f.partial_derivative(0).unwrap();
        assert_eq!(d0, MultiPoly::parse(&f3, 5, "Z3*Z4*Z0^3").unwrap());
        let g = ex_quintic(&f3);
        let d3 = g.partial_derivative(3).unwrap();
        assert_eq!(d3, MultiPoly::parse(&f3, 4, "Z2^3*Z3").unwrap());
        assert!(matches!(f.partial_derivative(9), Err(Error::VarOutOfRange { .. })));
    }

    #[test]
    fn substitute_identity_is_noop() {
        let f3 = gf(3, 1);
        let f = ex_threefold(&f3);
        let id: Vec<Vec<Scalar>> = (0..5)
            .map(|i| (0..5).map(|j| if i == j { f3.one() } else { f3.zero() }).collect())
            .collect();
        assert_eq!(f.substitute_linear(&id).unwrap(), f);
    }

    #[test]
    fn substitute_detects_cone_direction() {
        // f = Z1^2 - Z2*Z3 is free of Z0: translating along e0 fixes it.
        let f3 = gf(3, 1);
        let f = MultiPoly::parse(&f3, 4, "Z1^2 - Z2*Z3").unwrap();
        let mut map: Vec<Vec<Scalar>> = (0..4)
            .map(|i| (0..5).map(|j| if i == j { f3.one() } else { f3.zero() }).collect())
            .collect();
        map[0][4] = f3.one(); // Z0 -> Z0 + t
        let g = f.substitute_linear(&map).unwrap();
        assert_eq!(g, lift_vars(&f, 5));
    }

    #[test]
    fn substitute_translation_along_noncone_direction() {
        // Oracle: (Z2+t)^3 = Z2^3 + t^3 in char 3, so the difference is -t^3*Z3^2.
        let f3 = gf(3, 1);
        let f = ex_quintic(&f3);
        let mut map: Vec<Vec<Scalar>> = (0..4)
            .map(|i| (0..5).map(|j| if i == j { f3.one() } else { f3.zero() }).collect())
            .collect();
        map[2][4] = f3.one(); // Z2 -> Z2 + t with t the new last variable
        let g = f.substitute_linear(&map).unwrap();
        let diff = g.sub(&lift_vars(&f, 5)).unwrap();
        assert!(!diff.is_zero());
        assert_eq!(diff, MultiPoly::parse(&f3, 5, "-Z3^2*Z4^3").unwrap());
        assert!(diff.terms().all(|(m, _)| m.0[4] >= 1), "difference divisible by t");
    }

    #[test]
    fn euler_identity_examples() {
        let f3 = gf(3, 1);
        let (ok, residual) = ex_threefold(&f3).euler_identity_check().unwrap();
        assert!(ok);
        assert!(residual.is_zero());
        let (ok, _) = ex_quintic(&f3).euler_identity_check().unwrap();
        assert!(ok, "degree 5 = 2 mod 3 case");
        let f7 = gf(7, 1);
        let q = MultiPoly::parse(&f7, 2, "Z0^2 + Z1^2").unwrap();
        let (ok, _) = q.euler_identity_check().unwrap();
        assert!(ok);
        let nonhom = MultiPoly::parse(&f7, 2, "Z0^2 + Z1").unwrap();
        assert!(matches!(nonhom.euler_identity_check(), Err(Error::NonHomogeneous)));
    }

    #[test]
    fn lift_preserves_evaluation() {
        let f3 = gf(3, 1);
        let f81 = gf(3, 4);
        let emb = Embedding::new(&f3, &f81).unwrap();
        let f = ex_threefold(&f3);
        let lifted = f.lift(&emb).unwrap();
        let pt3: Vec<Scalar> = (0..5).map(|i| f3.from_int(i)).collect();
        let pt81: Vec<Scalar> = pt3.iter().map(|s| emb.map(s).unwrap()).collect();
        assert_eq!(
            emb.map(&f.evaluate(&pt3).unwrap()).unwrap(),
            lifted.evaluate(&pt81).unwrap()
        );
    }

    // ---- randomized invariants ----

    fn arb_poly(p: u64, num_vars: usize, degree: u16) -> impl Strategy<Value = MultiPoly> {
        let field = gf(p, 1);
        prop::collection::vec(
            (prop::collection::vec(0..=degree as u32, num_vars), 0..p as i64),
            0..6,
        )
        .prop_map(move |raw| {
            let terms = raw.into_iter().filter_map(|(exps, c)| {
                let total: u32 = exps.iter().sum();
                if total > degree as u32 {
                    return None;
                }
                Some((exps.iter().map(|&e| e as u16).collect::<Vec<u16>>(), field.from_int(c)))
            });
            MultiPoly::from_terms(&field, num_vars, terms).unwrap()
        })
    }

    fn arb_homogeneous(p: u64, num_vars: usize, degree: u16) -> impl Strategy<Value = MultiPoly> {
        let field = gf(p, 1);
        prop::collection::vec(
            (prop::collection::vec(0..=degree as u32, num_vars - 1), 1..p as i64),
            1..6,
        )
        .prop_map(move |raw| {
            let terms = raw.into_iter().filter_map(|(mut exps, c)| {
                let total: u32 = exps.iter().sum();
                if total > degree as u32 {
                    return None;
                }
                exps.push(degree as u32 - total);
                Some((exps.iter().map(|&e| e as u16).collect::<Vec<u16>>(), field.from_int(c)))
            });
            MultiPoly::from_terms(&field, num_vars, terms).unwrap()
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_poly(5, 4, 6)) {
            let text = f.to_string();
            let reparsed = MultiPoly::parse(f.field(), 4, &text).unwrap();
            prop_assert_eq!(reparsed, f);
        }

        #[test]
        fn derivative_is_linear(f in arb_poly(3, 3, 5), g in arb_poly(3, 3, 5), i in 0usize..3) {
            let lhs = f.add(&g).unwrap().partial_derivative(i).unwrap();
            let rhs = f.partial_derivative(i).unwrap()
                .add(&g.partial_derivative(i).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn derivative_product_rule(f in arb_poly(5, 3, 4), g in arb_poly(5, 3, 4), i in 0usize..3) {
            let lhs = f.mul(&g).unwrap().partial_derivative(i).unwrap();
            let rhs = f.partial_derivative(i).unwrap().mul(&g).unwrap()
                .add(&f.mul(&g.partial_derivative(i).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn euler_identity_always_holds(f in prop::sample::select(vec![3u64, 5, 7])
                                          .prop_flat_map(|p| arb_homogeneous(p, 4, 5))) {
            prop_assume!(!f.is_zero());
            let (ok, residual) = f.euler_identity_check().unwrap();
            prop_assert!(ok, "residual {}", residual);
        }

        #[test]
        fn substitution_respects_composition(f in arb_homogeneous(3, 3, 4),
                                             a_raw in prop::collection::vec(0i64..3, 9),
                                             b_raw in prop::collection::vec(0i64..3, 9)) {
            let field = f.field().clone();
            let to_mat = |raw: &[i64]| -> Vec<Vec<Scalar>> {
                raw.chunks(3).map(|row| row.iter().map(|&v| field.from_int(v)).collect()).collect()
            };
            let a = to_mat(&a_raw);
            let b = to_mat(&b_raw);
            // f(A W), then W -> B U  ==  f((A B) U)
            let step = f.substitute_linear(&a).unwrap().substitute_linear(&b).unwrap();
            let ab: Vec<Vec<Scalar>> = (0..3).map(|i| (0..3).map(|j| {
                let mut acc = field.zero();
                for (l, brow) in b.iter().enumerate() {
                    acc = field.add(&acc, &field.mul(&a[i][l], &brow[j]));
                }
                acc
            }).collect()).collect();
            let direct = f.substitute_linear(&ab).unwrap();
            prop_assert_eq!(step, direct);
        }
    }
}
