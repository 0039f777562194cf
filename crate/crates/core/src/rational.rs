//! Exact rational helpers shared by every module: parsing and printing of
//! `p/q` strings, an extended slope value with `+∞`, and arithmetic in
//! `Q(√d)` for sign decisions at irrational wall endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

/// Arbitrary-precision exact rational.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses an integer or `p/q` (optional leading sign, surrounding whitespace
/// ignored). The result is always reduced.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let t = s.trim();
    let bad = || ParseError::Rational(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |x: &str, signed: bool| {
        let digits = if signed {
            x.strip_prefix(['-', '+']).unwrap_or(x)
        } else {
            x
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(bad());
    }
    let n: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(ParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Canonical text form: `p` for integers, otherwise `p/q` in lowest terms.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, ParseError> {
    s.split(',').map(parse_rational).collect()
}

/// Returns `Some(r)` with `r ≥ 0` and `r² = x` when `x` is the square of a
/// rational.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = exact_isqrt(x.numer())?;
    let d = exact_isqrt(x.denom())?;
    Some(Rational::new(n, d))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Floor of a rational as a `BigInt`.
pub fn floor_int(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Ceiling of a rational as a `BigInt`.
pub fn ceil_int(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_str {
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for an optional rational stored as a string or null.
pub mod serde_str_opt {
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&fmt_rational(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Serde adapter for a list of rationals stored as strings.
pub mod serde_str_vec {
    use super::{fmt_rational, parse_rational, Rational};
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&fmt_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A slope value: an exact rational or `+∞`. `+∞` compares above every
/// finite value and equal to itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite(Rational),
    PosInfinity,
}

impl Slope {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Slope::PosInfinity)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Slope::Finite(x) => Some(x),
            Slope::PosInfinity => None,
        }
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::Finite(a), Slope::Finite(b)) => a.cmp(b),
            (Slope::Finite(_), Slope::PosInfinity) => Ordering::Less,
            (Slope::PosInfinity, Slope::Finite(_)) => Ordering::Greater,
            (Slope::PosInfinity, Slope::PosInfinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(x) => f.write_str(&fmt_rational(x)),
            Slope::PosInfinity => f.write_str("+inf"),
        }
    }
}

/// `a + b·√d` with rational `a`, `b` and a fixed rational `d ≥ 0`.
///
/// Only the operations needed for exact endpoint analysis are provided.
/// Mixing values with different radicands panics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub a: Rational,
    pub b: Rational,
    pub d: Rational,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Self {
        assert!(!d.is_negative(), "radicand must be non-negative");
        Surd { a, b, d }
    }

    pub fn rational(a: Rational, d: Rational) -> Self {
        Surd::new(a, Rational::zero(), d)
    }

    fn same_field(&self, other: &Surd) {
        assert_eq!(self.d, other.d, "surds over different radicands");
    }

    /// Exact sign, decided by squaring when the two parts disagree.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = if self.d.is_zero() {
            Ordering::Equal
        } else {
            self.b.cmp(&Rational::zero())
        };
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // a and b·√d have opposite signs; the larger square wins.
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * &self.d;
                match a2.cmp(&b2d) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        Surd::new(&self.a - x, self.b.clone(), self.d.clone()).signum()
    }

    pub fn add(&self, other: &Surd) -> Surd {
        self.same_field(other);
        Surd::new(&self.a + &other.a, &self.b + &other.b, self.d.clone())
    }

    pub fn neg(&self) -> Surd {
        Surd::new(-&self.a, -&self.b, self.d.clone())
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        self.same_field(other);
        Surd::new(
            &self.a * &other.a + &self.b * &other.b * &self.d,
            &self.a * &other.b + &self.b * &other.a,
            self.d.clone(),
        )
    }

    /// Division; `None` when the divisor is zero.
    pub fn div(&self, other: &Surd) -> Option<Surd> {
        self.same_field(other);
        if other.signum() == Ordering::Equal {
            return None;
        }
        let norm = &other.a * &other.a - &other.b * &other.b * &other.d;
        if norm.is_zero() {
            // √d is rational and the divisor collapses to a rational value.
            let root = rational_sqrt(&other.d).expect("zero norm forces a square radicand");
            let den = &other.a + &other.b * &root;
            let num = &self.a + &self.b * &root;
            return Some(Surd::rational(num / den, self.d.clone()));
        }
        let conj = Surd::new(other.a.clone(), -&other.b, other.d.clone());
        let top = self.mul(&conj);
        Some(Surd::new(top.a / &norm, top.b / norm, self.d.clone()))
    }

    /// Largest integer `n` with `n ≤ self`.
    pub fn floor(&self) -> BigInt {
        let mut n = floor_int(&self.a) + self.irrational_part_floor();
        // The estimate is within one of the true floor; settle exactly.
        while self.cmp_rational(&Rational::from_integer(n.clone())) == Ordering::Less {
            n -= 1;
        }
        while self.cmp_rational(&Rational::from_integer(&n + 1)) != Ordering::Less {
            n += 1;
        }
        n
    }

    /// Smallest integer `n` with `n ≥ self`.
    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    fn irrational_part_floor(&self) -> BigInt {
        // floor(b·√d) = ±floor(√(b²d)) up to one unit, via integer square roots.
        let t = &self.b * &self.b * &self.d;
        let scaled = t.numer() * t.denom();
        let root = scaled.sqrt() / t.denom();
        match self.b.numer().sign() {
            Sign::Minus => -root - BigInt::one(),
            _ => root,
        }
    }
}

impl fmt::Display for Surd {
    /// `a`, or `a + b*sqrt(d)` with the square root taken exactly when `d`
    /// is a rational square.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() || self.d.is_zero() {
            return f.write_str(&fmt_rational(&self.a));
        }
        if let Some(root) = rational_sqrt(&self.d) {
            return f.write_str(&fmt_rational(&(&self.a + &self.b * root)));
        }
        let (sign, b) = if self.b.is_negative() { ("-", -&self.b) } else { ("+", self.b.clone()) };
        let tail = if b.is_one() {
            format!("sqrt({})", fmt_rational(&self.d))
        } else {
            format!("{}*sqrt({})", fmt_rational(&b), fmt_rational(&self.d))
        };
        if self.a.is_zero() {
            if sign == "-" {
                write!(f, "-{tail}")
            } else {
                f.write_str(&tail)
            }
        } else {
            write!(f, "{} {sign} {tail}", fmt_rational(&self.a))
        }
    }
}
