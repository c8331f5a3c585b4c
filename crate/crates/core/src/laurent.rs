//! Exact arithmetic in `Z[q, q^-1]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Laurent polynomial with arbitrary precision integer coefficients.
/// Zero coefficients are never stored; the zero polynomial has no terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    /// `q`
    pub fn q() -> Self {
        LaurentPoly::monomial(1, 1)
    }

    /// `q + q^-1`, the value of a closed loop.
    pub fn loop_value() -> Self {
        LaurentPoly::q() + LaurentPoly::monomial(1, -1)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let c = coeff.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = LaurentPoly::zero();
        for (e, c) in iter {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// True for zero and for single-term polynomials.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() <= 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficient of `q^0`.
    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = LaurentPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Substitutes `q := x`.
    pub fn eval_rational(&self, x: &BigRational) -> Result<BigRational> {
        if x.is_zero() {
            return Err(Error::EvalAtZero);
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let power = if *e >= 0 {
                pow_rat(x, *e as u64)
            } else {
                pow_rat(&x.recip(), e.unsigned_abs())
            };
            acc += power * BigRational::from_integer(c.clone());
        }
        Ok(acc)
    }

    /// Evaluation at `q = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `q -> q^-1`
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }
}

fn pow_rat(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::monomial(c, 0)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending exponents: `q^-1 + 2 + q`, `1 - 3q^2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match *e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if *e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) format back.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        // Split into signed terms; a '-' directly after '^' belongs to the exponent.
        let mut pieces = Vec::new();
        let mut cur = String::new();
        let mut prev = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') && !cur.is_empty() {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        pieces.push(cur);

        let mut p = LaurentPoly::zero();
        for piece in pieces {
            let (negative, body) = match piece.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            let bad = || Error::Parse(format!("malformed term {piece:?}"));
            let (coeff, exp) = match body.find('q') {
                None => (body.parse::<BigInt>().map_err(|_| bad())?, 0),
                Some(idx) => {
                    let head = &body[..idx];
                    let tail = &body[idx + 1..];
                    let coeff = if head.is_empty() {
                        BigInt::one()
                    } else {
                        head.parse::<BigInt>().map_err(|_| bad())?
                    };
                    let exp = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse::<i64>()
                            .map_err(|_| bad())?
                    };
                    (coeff, exp)
                }
            };
            p.add_term(exp, if negative { -coeff } else { coeff });
        }
        Ok(p)
    }
}

/// One entry of the JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: i64,
    pub coeff: CoeffJson,
}

/// Coefficients are JSON integers when they fit in 64 bits and decimal strings otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Small(i64),
    Big(String),
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(e, c)| TermJson {
                exp: *e,
                coeff: match c.to_i64() {
                    Some(v) => CoeffJson::Small(v),
                    None => CoeffJson::Big(c.to_string()),
                },
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(deserializer)?;
        let mut p = LaurentPoly::zero();
        for t in terms {
            let c = match t.coeff {
                CoeffJson::Small(v) => BigInt::from(v),
                CoeffJson::Big(s) => s.parse::<BigInt>().map_err(serde::de::Error::custom)?,
            };
            p.add_term(t.exp, c);
        }
        Ok(p)
    }
}
