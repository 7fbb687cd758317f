//! Divisors `a*H + sum m_i P_i` on a plane curve, and the textual
//! mini-language used to write them down:
//!
//! ```text
//! divisor := ["-"] term (("+" | "-") term)*
//! term    := [int "*"] atom | atom ["*" int]
//! atom    := "H" | "K" | "0" | "P(" int "," int "," int ")" ["^" int] ["@" int]
//! ```
//!
//! `H` is the hyperplane class, `K` the canonical class `(d-3) H`, and point
//! coordinates are packed field elements (negative integers allowed over
//! prime fields). `@k` states the field degree of a point explicitly.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{CurveError, CurvePoint, PlaneCurve};

/// `twist * H + sum(mult * point)`, with a canonical sorted support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Divisor {
    twist: i64,
    support: Vec<(CurvePoint, i64)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisorSpecError {
    #[error("malformed divisor spec at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn hyperplane(a: i64) -> Divisor {
        Divisor { twist: a, support: Vec::new() }
    }

    /// `K = (d - 3) H` by adjunction.
    pub fn canonical(curve: &PlaneCurve) -> Divisor {
        Divisor::hyperplane(curve.degree() as i64 - 3)
    }

    pub fn point(p: CurvePoint, mult: i64) -> Divisor {
        Divisor::new(0, vec![(p, mult)])
    }

    /// Sum of distinct points, each with multiplicity one.
    pub fn reduced(points: &[CurvePoint]) -> Divisor {
        Divisor::new(0, points.iter().map(|&p| (p, 1)).collect())
    }

    /// Merges repeated points and drops zero multiplicities.
    pub fn new(twist: i64, support: Vec<(CurvePoint, i64)>) -> Divisor {
        let mut merged: BTreeMap<CurvePoint, i64> = BTreeMap::new();
        for (p, m) in support {
            *merged.entry(p).or_insert(0) += m;
        }
        Divisor { twist, support: merged.into_iter().filter(|&(_, m)| m != 0).collect() }
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn support(&self) -> &[(CurvePoint, i64)] {
        &self.support
    }

    pub fn multiplicity(&self, p: &CurvePoint) -> i64 {
        self.support.iter().find(|(q, _)| q == p).map_or(0, |&(_, m)| m)
    }

    pub fn degree(&self, curve_degree: u32) -> i64 {
        self.twist * curve_degree as i64 + self.support.iter().map(|&(_, m)| m).sum::<i64>()
    }

    /// Degree of the point part alone.
    pub fn support_degree(&self) -> i64 {
        self.support.iter().map(|&(_, m)| m).sum()
    }

    pub fn positive_part(&self) -> Vec<(CurvePoint, i64)> {
        self.support.iter().copied().filter(|&(_, m)| m > 0).collect()
    }

    /// Points with negative multiplicity, returned with positive multiplicity.
    pub fn negative_part(&self) -> Vec<(CurvePoint, i64)> {
        self.support.iter().filter(|&&(_, m)| m < 0).map(|&(p, m)| (p, -m)).collect()
    }

    pub fn is_effective_formally(&self) -> bool {
        self.twist >= 0 && self.support.iter().all(|&(_, m)| m > 0)
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut support = self.support.clone();
        support.extend_from_slice(&other.support);
        Divisor::new(self.twist + other.twist, support)
    }

    pub fn neg(&self) -> Divisor {
        Divisor { twist: -self.twist, support: self.support.iter().map(|&(p, m)| (p, -m)).collect() }
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::new(self.twist * k, self.support.iter().map(|&(p, m)| (p, m * k)).collect())
    }

    /// Parses the mini-language, validating every point against `curve`.
    pub fn parse(curve: &PlaneCurve, text: &str) -> Result<Divisor, DivisorSpecError> {
        Parser { curve, s: text.as_bytes(), pos: 0 }.divisor()
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(bool, String)> = Vec::new();
        if self.twist != 0 {
            let a = self.twist.unsigned_abs();
            terms.push((self.twist < 0, if a == 1 { "H".into() } else { format!("{a}*H") }));
        }
        for &(p, m) in &self.support {
            let mut t = format!("P({},{},{})", p.coords[0], p.coords[1], p.coords[2]);
            if m.unsigned_abs() != 1 {
                t.push_str(&format!("^{}", m.unsigned_abs()));
            }
            if p.field_degree > 1 {
                t.push_str(&format!("@{}", p.field_degree));
            }
            terms.push((m < 0, t));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (neg, t)) in terms.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{t}")?,
                (0, false) => write!(f, "{t}")?,
                (_, true) => write!(f, " - {t}")?,
                (_, false) => write!(f, " + {t}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    curve: &'a PlaneCurve,
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DivisorSpecError> {
        Err(DivisorSpecError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), DivisorSpecError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn int(&mut self) -> Result<i64, DivisorSpecError> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match text.parse::<i64>() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err("expected an integer")
            }
        }
    }

    fn divisor(&mut self) -> Result<Divisor, DivisorSpecError> {
        let mut acc = Divisor::zero();
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        loop {
            acc = acc.add(&self.term()?.scale(sign));
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(c) => return self.err(format!("unexpected '{}'", c as char)),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Divisor, DivisorSpecError> {
        let lead = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let k = self.int()?;
                if self.eat(b'*') {
                    Some(k)
                } else if k == 0 {
                    return Ok(Divisor::zero());
                } else {
                    return self.err("bare integers other than 0 are not divisors");
                }
            }
            _ => None,
        };
        let atom = self.atom()?;
        let k = match lead {
            Some(k) => k,
            None if self.eat(b'*') => self.int()?,
            None => 1,
        };
        Ok(atom.scale(k))
    }

    fn atom(&mut self) -> Result<Divisor, DivisorSpecError> {
        match self.peek() {
            Some(b'H') => {
                self.pos += 1;
                Ok(Divisor::hyperplane(1))
            }
            Some(b'K') => {
                self.pos += 1;
                Ok(Divisor::canonical(self.curve))
            }
            Some(b'P') => {
                self.pos += 1;
                self.expect(b'(')?;
                let mut raw = [0i64; 3];
                for (i, slot) in raw.iter_mut().enumerate() {
                    if i > 0 {
                        self.expect(b',')?;
                    }
                    *slot = self.int()?;
                }
                self.expect(b')')?;
                let mut mult = 1;
                let mut degree = None;
                loop {
                    if self.eat(b'^') {
                        mult = self.int()?;
                    } else if self.eat(b'@') {
                        degree = Some(self.int()?);
                    } else {
                        break;
                    }
                }
                let field = self.curve.field();
                if let Some(k) = degree {
                    if k != field.degree() as i64 {
                        return self.err(format!(
                            "point of degree {k} on a curve over GF({}); base-change the curve first",
                            field.order()
                        ));
                    }
                }
                let coords = if field.is_prime_field() {
                    raw.map(|c| field.from_i64(c))
                } else {
                    if raw.iter().any(|&c| c < 0) {
                        return self.err("negative coordinates need a prime field");
                    }
                    raw.map(|c| c as u64)
                };
                let pt = self.curve.point(coords)?;
                Ok(Divisor::point(pt, mult))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}
