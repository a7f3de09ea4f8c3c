//! Exact scalar arithmetic: arbitrary-precision rationals and the ring of
//! exponential polynomials on a coordinate chart.
//!
//! An [`ExpPoly`] is a finite sum of terms `c * q^alpha * exp(l . q)` where
//! `c` is rational, `alpha` is a monomial exponent vector and `l` is a vector
//! of rational linear-form coefficients. Distinct exponentials of rational
//! linear forms are linearly independent over polynomials, so the canonical
//! form (terms keyed by `(l, alpha)`, zero coefficients dropped) decides
//! functional equality. The ring is closed under addition, multiplication
//! and partial differentiation, which is all the calculus layer needs.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer part of the scalar type.
pub type Integer = num_bigint::BigInt;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RingError {
    #[error("chart dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("coordinate index {0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Key of a canonical term: exponential linear form first, monomial second.
///
/// The derived lexicographic order on `(lin, mono)` is the canonical term
/// order of the ring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct TermKey {
    lin: Vec<Rational>,
    mono: Vec<u32>,
}

/// Exponential polynomial `sum c * q^alpha * exp(l . q)` on a chart of fixed
/// dimension.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpPoly {
    dim: usize,
    terms: BTreeMap<TermKey, Rational>,
}

/// Exact evaluation result: a finite sum `sum_r c_r * e^r` keyed by the
/// rational exponent `r`. Zero iff the map is empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EvalValue {
    terms: BTreeMap<Rational, Rational>,
}

impl EvalValue {
    pub fn zero() -> Self {
        EvalValue::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Rational)>) -> Self {
        let mut out = EvalValue::default();
        for (exp, coeff) in terms {
            out.insert(exp, coeff);
        }
        out
    }

    fn insert(&mut self, exp: Rational, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn add(&self, other: &EvalValue) -> EvalValue {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    /// Product of two values; exponent keys add.
    pub fn mul(&self, other: &EvalValue) -> EvalValue {
        let mut out = EvalValue::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.insert(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(Integer::from(n), Integer::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

impl ExpPoly {
    pub fn zero(dim: usize) -> Self {
        ExpPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(c, vec![0; dim], vec![Rational::zero(); dim]);
        p
    }

    /// The coordinate function `q_i`, 1-based.
    pub fn coord(dim: usize, i: usize) -> Result<Self, RingError> {
        if i == 0 || i > dim {
            return Err(RingError::IndexOutOfRange(i, dim));
        }
        let mut mono = vec![0; dim];
        mono[i - 1] = 1;
        let mut p = Self::zero(dim);
        p.add_term(Rational::one(), mono, vec![Rational::zero(); dim]);
        Ok(p)
    }

    /// `exp(l . q)` for a rational linear form `l`.
    pub fn exp_linear(dim: usize, lin: Vec<Rational>) -> Result<Self, RingError> {
        if lin.len() != dim {
            return Err(RingError::DimMismatch(lin.len(), dim));
        }
        let mut p = Self::zero(dim);
        p.add_term(Rational::one(), vec![0; dim], lin);
        Ok(p)
    }

    /// Canonicalize a list of raw `(coefficient, monomial, exponent form)`
    /// triples into an `ExpPoly`. Like terms collect, zero terms vanish.
    pub fn from_terms(
        dim: usize,
        raw: impl IntoIterator<Item = (Rational, Vec<u32>, Vec<Rational>)>,
    ) -> Result<Self, RingError> {
        let mut p = Self::zero(dim);
        for (c, mono, lin) in raw {
            if mono.len() != dim {
                return Err(RingError::DimMismatch(mono.len(), dim));
            }
            if lin.len() != dim {
                return Err(RingError::DimMismatch(lin.len(), dim));
            }
            p.add_term(c, mono, lin);
        }
        Ok(p)
    }

    fn add_term(&mut self, c: Rational, mono: Vec<u32>, lin: Vec<Rational>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(TermKey { lin, mono }) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when no term carries an exponential factor.
    pub fn is_polynomial(&self) -> bool {
        self.terms
            .keys()
            .all(|k| k.lin.iter().all(|r| r.is_zero()))
    }

    /// Iterate canonical terms as `(exponent form, monomial, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&[Rational], &[u32], &Rational)> {
        self.terms
            .iter()
            .map(|(k, c)| (k.lin.as_slice(), k.mono.as_slice(), c))
    }

    /// The rational value of a constant `ExpPoly`, if it is one.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next().unwrap();
        let trivial = k.mono.iter().all(|&e| e == 0) && k.lin.iter().all(|r| r.is_zero());
        trivial.then(|| c.clone())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, RingError> {
        if self.dim != other.dim {
            return Err(RingError::DimMismatch(self.dim, other.dim));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(c.clone(), k.mono.clone(), k.lin.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, RingError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, RingError> {
        if self.dim != other.dim {
            return Err(RingError::DimMismatch(self.dim, other.dim));
        }
        let mut out = Self::zero(self.dim);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mono: Vec<u32> = k1
                    .mono
                    .iter()
                    .zip(&k2.mono)
                    .map(|(a, b)| a + b)
                    .collect();
                let lin: Vec<Rational> = k1.lin.iter().zip(&k2.lin).map(|(a, b)| a + b).collect();
                out.add_term(c1 * c2, mono, lin);
            }
        }
        Ok(out)
    }

    /// Exact partial derivative with respect to `q_i`, 1-based.
    ///
    /// Product rule on `q^alpha * exp(l . q)`:
    /// `d_i = alpha_i q^(alpha - e_i) exp(..) + l_i q^alpha exp(..)`.
    pub fn partial(&self, i: usize) -> Result<Self, RingError> {
        if i == 0 || i > self.dim {
            return Err(RingError::IndexOutOfRange(i, self.dim));
        }
        let idx = i - 1;
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.terms {
            if k.mono[idx] > 0 {
                let mut mono = k.mono.clone();
                mono[idx] -= 1;
                out.add_term(
                    c * Rational::from_integer(Integer::from(k.mono[idx])),
                    mono,
                    k.lin.clone(),
                );
            }
            if !k.lin[idx].is_zero() {
                out.add_term(c * &k.lin[idx], k.mono.clone(), k.lin.clone());
            }
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point, grouped by exponential exponent.
    pub fn evaluate(&self, point: &[Rational]) -> Result<EvalValue, RingError> {
        if point.len() != self.dim {
            return Err(RingError::DimMismatch(point.len(), self.dim));
        }
        let mut out = EvalValue::default();
        for (k, c) in &self.terms {
            let mut coeff = c.clone();
            for (idx, &e) in k.mono.iter().enumerate() {
                for _ in 0..e {
                    coeff *= &point[idx];
                }
            }
            let exponent: Rational = k
                .lin
                .iter()
                .zip(point)
                .map(|(l, p)| l * p)
                .fold(Rational::zero(), |acc, x| acc + x);
            out.insert(exponent, coeff);
        }
        Ok(out)
    }

    /// Parse an expression in the chart grammar, e.g.
    /// `-1/2*q1^2*exp(-3*q2) + q3`.
    pub fn parse(input: &str, dim: usize) -> Result<Self, RingError> {
        parse::expr(input, dim)
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let mut factors: Vec<String> = Vec::new();
            for (idx, &e) in k.mono.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("q{}", idx + 1)),
                    _ => factors.push(format!("q{}^{}", idx + 1, e)),
                }
            }
            if k.lin.iter().any(|r| !r.is_zero()) {
                factors.push(format!("exp({})", fmt_linform(&k.lin)));
            }
            let abs = c.abs();
            let coeff_str = if abs.is_one() && !factors.is_empty() {
                None
            } else {
                Some(abs.to_string())
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let mut parts: Vec<String> = Vec::new();
            if let Some(cs) = coeff_str {
                parts.push(cs);
            }
            parts.extend(factors);
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

fn fmt_linform(lin: &[Rational]) -> String {
    let mut out = String::new();
    let mut first = true;
    for (idx, r) in lin.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        let abs = r.abs();
        if first {
            if r.is_negative() {
                out.push('-');
            }
            first = false;
        } else if r.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if abs.is_one() {
            out.push_str(&format!("q{}", idx + 1));
        } else {
            out.push_str(&format!("{}*q{}", abs, idx + 1));
        }
    }
    out
}

/// Recursive-descent parser for the expression grammar shared by all
/// definition files. Whitespace is insignificant.
pub(crate) mod parse {
    use super::*;

    pub(crate) struct Cursor<'a> {
        input: &'a [u8],
        pub pos: usize,
    }

    impl<'a> Cursor<'a> {
        pub fn new(input: &'a str) -> Self {
            Cursor {
                input: input.as_bytes(),
                pos: 0,
            }
        }

        pub fn skip_ws(&mut self) {
            while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        pub fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.input.get(self.pos).copied()
        }

        pub fn bump(&mut self) -> Option<u8> {
            let c = self.peek()?;
            self.pos += 1;
            Some(c)
        }

        pub fn eat(&mut self, c: u8) -> bool {
            if self.peek() == Some(c) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        pub fn expect(&mut self, c: u8) -> Result<(), RingError> {
            if self.eat(c) {
                Ok(())
            } else {
                Err(self.error(&format!("expected '{}'", c as char)))
            }
        }

        pub fn error(&self, msg: &str) -> RingError {
            RingError::Parse {
                pos: self.pos,
                msg: msg.to_string(),
            }
        }

        pub fn at_end(&mut self) -> bool {
            self.peek().is_none()
        }

        pub fn integer(&mut self) -> Result<Integer, RingError> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected integer"));
            }
            let s = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
            Integer::from_str(s).map_err(|e| self.error(&e.to_string()))
        }

        /// `INT ('/' INT)?`
        pub fn rational(&mut self) -> Result<Rational, RingError> {
            let num = self.integer()?;
            if self.eat(b'/') {
                let den = self.integer()?;
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                Ok(Rational::new(num, den))
            } else {
                Ok(Rational::from_integer(num))
            }
        }

        /// `'q' INT` returning the 1-based index.
        pub fn coord_index(&mut self, dim: usize) -> Result<usize, RingError> {
            self.expect(b'q')?;
            let n = self.integer()?;
            let idx: usize = n
                .to_string()
                .parse()
                .map_err(|_| self.error("coordinate index too large"))?;
            if idx == 0 || idx > dim {
                return Err(self.error(&format!("coordinate q{} out of range 1..={}", idx, dim)));
            }
            Ok(idx)
        }

        pub fn starts_ident(&mut self, word: &str) -> bool {
            self.skip_ws();
            self.input[self.pos..].starts_with(word.as_bytes())
        }
    }

    /// One multiplicative factor applied onto `(coefficient, mono, lin)`.
    fn factor(
        cur: &mut Cursor,
        dim: usize,
        coeff: &mut Rational,
        mono: &mut [u32],
        lin: &mut [Rational],
    ) -> Result<(), RingError> {
        if cur.starts_ident("exp") {
            cur.pos += 3;
            cur.expect(b'(')?;
            linform(cur, dim, lin)?;
            cur.expect(b')')?;
            return Ok(());
        }
        match cur.peek() {
            Some(b'q') => {
                let idx = cur.coord_index(dim)?;
                let power = if cur.eat(b'^') {
                    let n = cur.integer()?;
                    n.to_string()
                        .parse::<u32>()
                        .map_err(|_| cur.error("exponent too large"))?
                } else {
                    1
                };
                mono[idx - 1] += power;
                Ok(())
            }
            Some(c) if c.is_ascii_digit() => {
                let r = cur.rational()?;
                *coeff *= r;
                Ok(())
            }
            _ => Err(cur.error("expected factor (rational, qN or exp(..))")),
        }
    }

    /// `linform := [sign] [rational '*'?] qN (('+'|'-') [rational '*'?] qN)*`
    fn linform(cur: &mut Cursor, dim: usize, lin: &mut [Rational]) -> Result<(), RingError> {
        loop {
            let mut sign = Rational::one();
            loop {
                match cur.peek() {
                    Some(b'-') => {
                        cur.bump();
                        sign = -sign;
                    }
                    Some(b'+') => {
                        cur.bump();
                    }
                    _ => break,
                }
            }
            let mut c = sign;
            if matches!(cur.peek(), Some(d) if d.is_ascii_digit()) {
                c *= cur.rational()?;
                cur.eat(b'*');
            }
            let idx = cur.coord_index(dim)?;
            lin[idx - 1] += c;
            match cur.peek() {
                Some(b'+') | Some(b'-') => continue,
                _ => return Ok(()),
            }
        }
    }

    /// A raw term triple `(coefficient, monomial, exponent form)`.
    pub(crate) type RawTerm = (Rational, Vec<u32>, Vec<Rational>);

    /// One product term `rational ('*' factor)* | factor ('*' factor)*`,
    /// with an optional leading sign handled by the caller.
    fn term(cur: &mut Cursor, dim: usize) -> Result<RawTerm, RingError> {
        let mut coeff = Rational::one();
        let mut mono = vec![0u32; dim];
        let mut lin = vec![Rational::zero(); dim];
        factor(cur, dim, &mut coeff, &mut mono, &mut lin)?;
        while cur.eat(b'*') {
            factor(cur, dim, &mut coeff, &mut mono, &mut lin)?;
        }
        Ok((coeff, mono, lin))
    }

    pub(crate) fn expr_terms(cur: &mut Cursor, dim: usize) -> Result<Vec<RawTerm>, RingError> {
        let mut terms = Vec::new();
        let mut sign = Rational::one();
        loop {
            match cur.peek() {
                Some(b'-') => {
                    cur.bump();
                    sign = -sign;
                    continue;
                }
                Some(b'+') => {
                    cur.bump();
                    continue;
                }
                Some(_) => {}
                None => return Err(cur.error("unexpected end of input")),
            }
            let (c, mono, lin) = term(cur, dim)?;
            terms.push((c * &sign, mono, lin));
            sign = Rational::one();
            match cur.peek() {
                Some(b'+') | Some(b'-') => continue,
                _ => return Ok(terms),
            }
        }
    }

    pub(crate) fn expr(input: &str, dim: usize) -> Result<ExpPoly, RingError> {
        let mut cur = Cursor::new(input);
        let terms = expr_terms(&mut cur, dim)?;
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        ExpPoly::from_terms(dim, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, dim: usize) -> ExpPoly {
        ExpPoly::parse(s, dim).unwrap()
    }

    #[test]
    fn like_terms_collect() {
        let sum = p("q1 + q1", 2);
        assert_eq!(sum, p("2*q1", 2));
    }

    #[test]
    fn cancellation_is_exact() {
        let a = p("q1*exp(q2)", 2);
        assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn distinct_exponentials_stay_separate() {
        let s = p("exp(q1) + exp(2*q1)", 1);
        assert_eq!(s.terms().count(), 2);
    }

    #[test]
    fn multiply_distributes() {
        let a = p("q1 + exp(q2)", 2);
        let b = p("q1", 2);
        assert_eq!(a.mul(&b).unwrap(), p("q1^2 + q1*exp(q2)", 2));
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let a = p("-1/2*q1^2*exp(-3*q2) + q3", 3);
        assert_eq!(a.mul(&ExpPoly::one(3)).unwrap(), a);
    }

    #[test]
    fn exponentials_cancel_multiplicatively() {
        let a = p("exp(q1)", 1);
        let b = p("exp(-q1)", 1);
        assert_eq!(a.mul(&b).unwrap(), ExpPoly::one(1));
    }

    #[test]
    fn partial_derivative_product_rule() {
        // d/dq1 (q1^2 exp(3 q1)) = (2 q1 + 3 q1^2) exp(3 q1)
        let a = p("q1^2*exp(3*q1)", 1);
        assert_eq!(a.partial(1).unwrap(), p("2*q1*exp(3*q1) + 3*q1^2*exp(3*q1)", 1));
    }

    #[test]
    fn partial_of_unrelated_coordinate() {
        assert!(p("q1", 2).partial(2).unwrap().is_zero());
    }

    #[test]
    fn partial_of_exponential() {
        let a = p("exp(-q1)", 1);
        assert_eq!(a.partial(1).unwrap(), a.neg());
    }

    #[test]
    fn partial_out_of_range_errors() {
        assert_eq!(
            p("q1", 1).partial(2),
            Err(RingError::IndexOutOfRange(2, 1))
        );
    }

    #[test]
    fn evaluate_groups_by_exponent() {
        let a = p("q1 + exp(q2)", 2);
        let v = a.evaluate(&[int(1), int(0)]).unwrap();
        assert_eq!(v, EvalValue::from_terms([(int(0), int(2))]));
    }

    #[test]
    fn evaluate_zero_is_empty() {
        let a = p("exp(q1)", 1).sub(&p("exp(q1)", 1)).unwrap();
        assert!(a.evaluate(&[int(7)]).unwrap().is_zero());
    }

    #[test]
    fn evaluate_substitution_oracle() {
        // q1*exp(q2) at (2, 1): substitution gives 2 * e^1.
        let a = p("q1*exp(q2)", 2);
        let v = a.evaluate(&[int(2), int(1)]).unwrap();
        let oracle = {
            let q1 = p("q1", 2).evaluate(&[int(2), int(1)]).unwrap();
            let e = p("exp(q2)", 2).evaluate(&[int(2), int(1)]).unwrap();
            q1.mul(&e)
        };
        assert_eq!(v, oracle);
        assert_eq!(v, EvalValue::from_terms([(int(1), int(2))]));
    }

    #[test]
    fn dim_mismatch_rejected() {
        let a = p("q1", 1);
        let b = p("q1", 2);
        assert!(a.add(&b).is_err());
        assert!(a.evaluate(&[int(1), int(2)]).is_err());
    }

    #[test]
    fn grammar_example_round_trips() {
        let s = "-1/2*q1^2*exp(-3*q2) + q3";
        let a = p(s, 3);
        assert_eq!(p(&a.to_string(), 3), a);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(ExpPoly::parse("q1 +", 1).is_err());
        assert!(ExpPoly::parse("q9", 2).is_err());
        assert!(ExpPoly::parse("exp(q1", 1).is_err());
        assert!(ExpPoly::parse("1/0", 1).is_err());
    }

    /// Deterministic small sampler for the counted ring-law suites.
    fn sample(rng: &mut crate::calculus::SplitMix64, dim: usize) -> ExpPoly {
        let mut out = ExpPoly::zero(dim);
        let nterms = 1 + (rng.next_u64() % 2) as usize;
        for _ in 0..nterms {
            let c = int((rng.next_u64() % 5) as i64 - 2);
            let mut mono = vec![0u32; dim];
            mono[(rng.next_u64() % dim as u64) as usize] = (rng.next_u64() % 3) as u32;
            let mut lin = vec![Rational::zero(); dim];
            if rng.next_u64() % 2 == 0 {
                lin[(rng.next_u64() % dim as u64) as usize] = int((rng.next_u64() % 5) as i64 - 2);
            }
            out = out.add(&ExpPoly::from_terms(dim, [(c, mono, lin)]).unwrap()).unwrap();
        }
        out
    }

    #[test]
    fn ring_axioms_on_seeded_triples() {
        let mut rng = crate::calculus::SplitMix64::new(0xA11CE);
        for _ in 0..200 {
            let a = sample(&mut rng, 3);
            let b = sample(&mut rng, 3);
            let c = sample(&mut rng, 3);
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc, "associativity");
            let left = a.mul(&b.add(&c).unwrap()).unwrap();
            let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            assert_eq!(left, right, "distributivity");
            assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap(), "commutativity");
        }
    }

    #[test]
    fn partials_commute() {
        let mut rng = crate::calculus::SplitMix64::new(0xBEEF);
        for _ in 0..50 {
            let a = sample(&mut rng, 3);
            for i in 1..=3 {
                for j in 1..=3 {
                    assert_eq!(
                        a.partial(i).unwrap().partial(j).unwrap(),
                        a.partial(j).unwrap().partial(i).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn evaluate_is_multiplicative() {
        let mut rng = crate::calculus::SplitMix64::new(0xCAFE);
        let pt = [int(2), rat(1, 2), int(-1)];
        for _ in 0..100 {
            let a = sample(&mut rng, 3);
            let b = sample(&mut rng, 3);
            let lhs = a.mul(&b).unwrap().evaluate(&pt).unwrap();
            let rhs = a.evaluate(&pt).unwrap().mul(&b.evaluate(&pt).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_exppoly(dim: usize) -> impl Strategy<Value = ExpPoly> {
            let term = (
                -3i64..=3,
                proptest::collection::vec(0u32..3, dim),
                proptest::collection::vec(-2i64..=2, dim),
            );
            proptest::collection::vec(term, 0..4).prop_map(move |terms| {
                ExpPoly::from_terms(
                    dim,
                    terms.into_iter().map(|(c, mono, lin)| {
                        (int(c), mono, lin.into_iter().map(int).collect())
                    }),
                )
                .unwrap()
            })
        }

        proptest! {
            #[test]
            fn normalize_idempotent(a in arb_exppoly(3)) {
                let renorm = ExpPoly::from_terms(
                    3,
                    a.terms().map(|(l, m, c)| (c.clone(), m.to_vec(), l.to_vec())),
                ).unwrap();
                prop_assert_eq!(renorm, a);
            }

            #[test]
            fn display_parse_round_trip(a in arb_exppoly(3)) {
                prop_assert_eq!(ExpPoly::parse(&a.to_string(), 3).unwrap(), a);
            }
        }
    }
}
