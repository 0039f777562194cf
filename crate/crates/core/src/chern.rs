//! Chern characters on P³.
//!
//! A character is stored as four exact rationals `(ch0, ch1, ch2, ch3)` in
//! units of `1, H, H², H³` with `H³ = 1`. Nothing here is restricted to
//! lattice points; [`ChernCharacter::is_integral`] decides membership in the
//! image of `K(P³)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseError;
use crate::rational::{fmt_rational, parse_rational_list, q, qi, Rational, Slope};

/// Full Chern character `(ch0, ch1, ch2, ch3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChernCharacter {
    pub ch0: Rational,
    pub ch1: Rational,
    pub ch2: Rational,
    pub ch3: Rational,
}

/// Chern character truncated at degree two.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedCharacter {
    pub ch0: Rational,
    pub ch1: Rational,
    pub ch2: Rational,
}

/// The integral Chern classes `(c1, c2, c3)` of a character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernClasses {
    pub c1: Rational,
    pub c2: Rational,
    pub c3: Rational,
}

impl ChernCharacter {
    pub fn new(ch0: Rational, ch1: Rational, ch2: Rational, ch3: Rational) -> Self {
        ChernCharacter { ch0, ch1, ch2, ch3 }
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fracs(c: [(i64, i64); 4]) -> Self {
        ChernCharacter::new(
            q(c[0].0, c[0].1),
            q(c[1].0, c[1].1),
            q(c[2].0, c[2].1),
            q(c[3].0, c[3].1),
        )
    }

    pub fn zero() -> Self {
        ChernCharacter::new(Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// `ch(O(n)) = (1, n, n²/2, n³/6)`.
    pub fn line_bundle(n: i64) -> Self {
        ChernCharacter::new(qi(1), qi(n), q(n * n, 2), q(n * n * n, 6))
    }

    /// The skyscraper class `(0, 0, 0, 1)`.
    pub fn point() -> Self {
        ChernCharacter::new(Rational::zero(), Rational::zero(), Rational::zero(), Rational::one())
    }

    pub fn components(&self) -> [&Rational; 4] {
        [&self.ch0, &self.ch1, &self.ch2, &self.ch3]
    }

    pub fn truncate(&self) -> TruncatedCharacter {
        TruncatedCharacter::new(self.ch0.clone(), self.ch1.clone(), self.ch2.clone())
    }

    /// `ch^β = e^{-βH}·ch`.
    pub fn twist(&self, beta: &Rational) -> Self {
        let b2 = beta * beta;
        let b3 = &b2 * beta;
        ChernCharacter::new(
            self.ch0.clone(),
            &self.ch1 - beta * &self.ch0,
            &self.ch2 - beta * &self.ch1 + &b2 * &self.ch0 / qi(2),
            &self.ch3 - beta * &self.ch2 + &b2 * &self.ch1 / qi(2) - &b3 * &self.ch0 / qi(6),
        )
    }

    /// Character of the derived dual: `(c0, -c1, c2, -c3)`.
    pub fn dual(&self) -> Self {
        ChernCharacter::new(
            self.ch0.clone(),
            -&self.ch1,
            self.ch2.clone(),
            -&self.ch3,
        )
    }

    /// Product in `H*(P³, Q)`, truncated above degree three.
    pub fn mul(&self, other: &ChernCharacter) -> Self {
        let a = self.components();
        let b = other.components();
        let mut out: [Rational; 4] = Default::default();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate().take(4 - i) {
                out[i + j] += *ai * *bj;
            }
        }
        let [c0, c1, c2, c3] = out;
        ChernCharacter::new(c0, c1, c2, c3)
    }

    pub fn scale(&self, t: &Rational) -> Self {
        ChernCharacter::new(t * &self.ch0, t * &self.ch1, t * &self.ch2, t * &self.ch3)
    }

    /// μ_H-slope `ch1/ch0`, `+∞` in rank zero.
    pub fn mu_slope(&self) -> Slope {
        self.truncate().mu_slope()
    }

    /// `Δ_H = ch1² − 2·ch0·ch2`.
    pub fn discriminant(&self) -> Rational {
        self.truncate().discriminant()
    }

    /// Chern classes from the character:
    /// `c1 = ch1`, `c2 = ch1²/2 − ch2`, `c3 = 2·ch3 − ch1³/3 + c1·c2`.
    pub fn chern_classes(&self) -> ChernClasses {
        let c1 = self.ch1.clone();
        let c2 = &c1 * &c1 / qi(2) - &self.ch2;
        let c3 = qi(2) * &self.ch3 - &c1 * &c1 * &c1 / qi(3) + &c1 * &c2;
        ChernClasses { c1, c2, c3 }
    }

    /// True iff the character lies in the image of `K(P³)`.
    ///
    /// `K(P³)` is spanned by `1, h, h², h³` with `h = 1 − [O(−1)]`, whose
    /// characters are `(1,0,0,0)`, `(0,1,−1/2,1/6)`, `(0,0,1,−1)`, `(0,0,0,1)`.
    /// Solving for the coordinates gives the three conditions checked here.
    /// Integral characters always have integral Chern classes, but not
    /// conversely (`(0,0,0,1/2)` has `c3 = 1`).
    pub fn is_integral(&self) -> bool {
        let half = q(1, 2);
        let third = q(1, 3);
        self.ch0.is_integer()
            && self.ch1.is_integer()
            && (&self.ch2 + &half * &self.ch1).is_integer()
            && (&self.ch3 + &self.ch2 + &third * &self.ch1).is_integer()
    }
}

impl TruncatedCharacter {
    pub fn new(ch0: Rational, ch1: Rational, ch2: Rational) -> Self {
        TruncatedCharacter { ch0, ch1, ch2 }
    }

    pub fn from_fracs(c: [(i64, i64); 3]) -> Self {
        TruncatedCharacter::new(q(c[0].0, c[0].1), q(c[1].0, c[1].1), q(c[2].0, c[2].1))
    }

    /// Extends to a full character with the given `ch3`.
    pub fn with_ch3(&self, ch3: Rational) -> ChernCharacter {
        ChernCharacter::new(self.ch0.clone(), self.ch1.clone(), self.ch2.clone(), ch3)
    }

    pub fn twist(&self, beta: &Rational) -> Self {
        self.with_ch3(Rational::zero()).twist(beta).truncate()
    }

    pub fn mu_slope(&self) -> Slope {
        if self.ch0.is_zero() {
            Slope::PosInfinity
        } else {
            Slope::Finite(&self.ch1 / &self.ch0)
        }
    }

    pub fn discriminant(&self) -> Rational {
        &self.ch1 * &self.ch1 - qi(2) * &self.ch0 * &self.ch2
    }

    /// Lattice test in degrees ≤ 2: `ch0, ch1 ∈ Z` and `c2 ∈ Z`.
    pub fn is_integral(&self) -> bool {
        self.ch0.is_integer()
            && self.ch1.is_integer()
            && (&self.ch2 + q(1, 2) * &self.ch1).is_integer()
    }

    /// True when one character is a rational multiple of the other.
    pub fn is_proportional(&self, other: &TruncatedCharacter) -> bool {
        let a = [&self.ch0, &self.ch1, &self.ch2];
        let b = [&other.ch0, &other.ch1, &other.ch2];
        (0..3).all(|i| (i + 1..3).all(|j| a[i] * b[j] == a[j] * b[i]))
    }
}

impl From<&ChernCharacter> for TruncatedCharacter {
    fn from(v: &ChernCharacter) -> Self {
        v.truncate()
    }
}

impl From<ChernCharacter> for TruncatedCharacter {
    fn from(v: ChernCharacter) -> Self {
        v.truncate()
    }
}

impl From<&TruncatedCharacter> for TruncatedCharacter {
    fn from(v: &TruncatedCharacter) -> Self {
        v.clone()
    }
}

impl Add for &ChernCharacter {
    type Output = ChernCharacter;
    fn add(self, o: &ChernCharacter) -> ChernCharacter {
        ChernCharacter::new(
            &self.ch0 + &o.ch0,
            &self.ch1 + &o.ch1,
            &self.ch2 + &o.ch2,
            &self.ch3 + &o.ch3,
        )
    }
}

impl Sub for &ChernCharacter {
    type Output = ChernCharacter;
    fn sub(self, o: &ChernCharacter) -> ChernCharacter {
        ChernCharacter::new(
            &self.ch0 - &o.ch0,
            &self.ch1 - &o.ch1,
            &self.ch2 - &o.ch2,
            &self.ch3 - &o.ch3,
        )
    }
}

impl Neg for &ChernCharacter {
    type Output = ChernCharacter;
    fn neg(self) -> ChernCharacter {
        ChernCharacter::new(-&self.ch0, -&self.ch1, -&self.ch2, -&self.ch3)
    }
}

impl Add for &TruncatedCharacter {
    type Output = TruncatedCharacter;
    fn add(self, o: &TruncatedCharacter) -> TruncatedCharacter {
        TruncatedCharacter::new(&self.ch0 + &o.ch0, &self.ch1 + &o.ch1, &self.ch2 + &o.ch2)
    }
}

impl Sub for &TruncatedCharacter {
    type Output = TruncatedCharacter;
    fn sub(self, o: &TruncatedCharacter) -> TruncatedCharacter {
        TruncatedCharacter::new(&self.ch0 - &o.ch0, &self.ch1 - &o.ch1, &self.ch2 - &o.ch2)
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            fmt_rational(&self.ch0),
            fmt_rational(&self.ch1),
            fmt_rational(&self.ch2),
            fmt_rational(&self.ch3)
        )
    }
}

impl fmt::Display for TruncatedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            fmt_rational(&self.ch0),
            fmt_rational(&self.ch1),
            fmt_rational(&self.ch2)
        )
    }
}

fn split_components(s: &str, expected: usize) -> Result<Vec<Rational>, ParseError> {
    let parts = parse_rational_list(s)?;
    if parts.len() != expected {
        return Err(ParseError::Arity {
            expected,
            got: parts.len(),
            input: s.to_string(),
        });
    }
    Ok(parts)
}

impl FromStr for ChernCharacter {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = split_components(s, 4)?.into_iter();
        let mut next = || p.next().expect("arity checked");
        Ok(ChernCharacter::new(next(), next(), next(), next()))
    }
}

impl FromStr for TruncatedCharacter {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = split_components(s, 3)?.into_iter();
        let mut next = || p.next().expect("arity checked");
        Ok(TruncatedCharacter::new(next(), next(), next()))
    }
}

macro_rules! string_serde {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(ChernCharacter);
string_serde!(TruncatedCharacter);
