//! Ordinals below ε₀ in Cantor normal form.
//!
//! An [`Ordinal`] is a finite sum `ω^e₁·c₁ + … + ω^eₖ·cₖ` with strictly
//! decreasing exponents `e₁ > … > eₖ` (themselves ordinals) and positive
//! natural coefficients. The representation is canonical, so structural
//! equality is ordinal equality.
//!
//! Text syntax: `0`, `7`, `w`, `w*3`, `w^2*3+w+4`, `w^w`, `w^(w+1)*2`.
//! `w^1` and `*1` are accepted on input; everything else that is not in
//! normal form is rejected.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdinalKind {
    Zero,
    Successor,
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(Self::zero(), n)],
            }
        }
    }

    /// ω
    pub fn omega() -> Self {
        Self::omega_pow(Self::nat(1))
    }

    /// ω^e
    pub fn omega_pow(e: Ordinal) -> Self {
        Ordinal {
            terms: vec![(e, 1)],
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` terms, checking the
    /// normal-form invariants.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self> {
        for (i, (e, c)) in terms.iter().enumerate() {
            if *c == 0 {
                return Err(Error::parse("zero coefficient in normal form"));
            }
            if i > 0 && terms[i - 1].0 <= *e {
                return Err(Error::parse("exponents must be strictly decreasing"));
            }
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn succ(&self) -> Self {
        self.add(&Self::nat(1))
    }

    /// Ordinal sum `self + rhs`: terms of `self` below the leading exponent
    /// of `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some((lead, lead_coeff)) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let mut carry = 0;
        for (e, c) in &self.terms {
            match e.cmp(lead) {
                Ordering::Greater => terms.push((e.clone(), *c)),
                Ordering::Equal => carry = *c,
                Ordering::Less => break,
            }
        }
        terms.push((lead.clone(), lead_coeff + carry));
        terms.extend(rhs.terms[1..].iter().cloned());
        Ordinal { terms }
    }

    /// Trailing natural part `n` in `self = prefix + n` with `prefix` zero or
    /// a limit.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some((e, c)) if e.is_zero() => *c,
            _ => 0,
        }
    }

    pub fn parity(&self) -> Parity {
        if self.finite_part().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == Parity::Odd
    }

    pub fn kind(&self) -> OrdinalKind {
        match self.terms.last() {
            None => OrdinalKind::Zero,
            Some((e, _)) if e.is_zero() => OrdinalKind::Successor,
            Some(_) => OrdinalKind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        self.kind() == OrdinalKind::Limit
    }
}

/// Free-function spellings of the ordinal operations.
pub fn ord_compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

pub fn ord_add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.add(b)
}

pub fn ord_parity(a: &Ordinal) -> Parity {
    a.parity()
}

pub fn ord_classify(a: &Ordinal) -> OrdinalKind {
    a.kind()
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for ((e1, c1), (e2, c2)) in self.terms.iter().zip(&other.terms) {
            match e1.cmp(e2).then(c1.cmp(c2)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            write!(f, "w")?;
            match e.as_nat() {
                Some(1) => {}
                Some(n) => write!(f, "^{n}")?,
                None if *e == Ordinal::omega() => write!(f, "^w")?,
                None => write!(f, "^({e})")?,
            }
            if *c != 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = OrdParser {
            src: s.trim().as_bytes(),
            pos: 0,
        };
        let o = p.ordinal()?;
        if p.pos != p.src.len() {
            return Err(Error::parse(format!("trailing input in ordinal `{s}`")));
        }
        Ok(o)
    }
}

struct OrdParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl OrdParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(format!("expected a number at offset {start}")));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if digits.len() > 1 && digits.starts_with('0') {
            return Err(Error::parse(format!("leading zero in `{digits}`")));
        }
        digits
            .parse()
            .map_err(|_| Error::parse(format!("number `{digits}` out of range")))
    }

    fn ordinal(&mut self) -> Result<Ordinal> {
        let mut terms = Vec::new();
        loop {
            let term = self.term()?;
            terms.push(term);
            if !self.eat(b'+') {
                break;
            }
        }
        if terms.len() == 1 && terms[0] == (Ordinal::zero(), 0) {
            return Ok(Ordinal::zero());
        }
        Ordinal::from_terms(terms)
    }

    fn term(&mut self) -> Result<(Ordinal, u64)> {
        if self.eat(b'w') {
            let exp = if self.eat(b'^') {
                if self.eat(b'(') {
                    let e = self.ordinal()?;
                    if !self.eat(b')') {
                        return Err(Error::parse("unclosed parenthesis in exponent"));
                    }
                    e
                } else if self.eat(b'w') {
                    Ordinal::omega()
                } else {
                    Ordinal::nat(self.nat()?)
                }
            } else {
                Ordinal::nat(1)
            };
            if exp.is_zero() {
                return Err(Error::parse("w^0 is not in normal form; write a natural"));
            }
            let coeff = if self.eat(b'*') { self.nat()? } else { 1 };
            Ok((exp, coeff))
        } else {
            Ok((Ordinal::zero(), self.nat()?))
        }
    }
}
