//! The BMT quadratic form, its restriction to walls, admissible `ch3`
//! ranges, and the Bridgeland slope `λ_{α,β,s}`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{ChernCharacter, TruncatedCharacter};
use crate::error::WallError;
use crate::rational::{fmt_rational, q, qi, rational_sqrt, Rational, Slope, Surd};
use crate::tilt::{HalfPlanePoint, WallLocus};

/// Coefficients of `Q = Δ/2·(α²+β²) + B·β + C` for a fixed character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCoefficients {
    pub discriminant: Rational,
    pub linear: Rational,
    pub constant: Rational,
}

pub fn q_coefficients(v: &ChernCharacter) -> QCoefficients {
    let (c0, c1, c2, c3) = (&v.ch0, &v.ch1, &v.ch2, &v.ch3);
    QCoefficients {
        discriminant: v.discriminant(),
        linear: qi(3) * c0 * c3 - c1 * c2,
        constant: qi(2) * c2 * c2 - qi(3) * c1 * c3,
    }
}

/// `Q_{α,β}(v)`.
pub fn q_form(v: &ChernCharacter, p: &HalfPlanePoint) -> Rational {
    let k = q_coefficients(v);
    let b = &p.beta;
    &k.discriminant * (&p.alpha_sq + b * b) / qi(2) + &k.linear * b + k.constant
}

/// The locus `Q_{α,β}(v) = 0`.
///
/// When `Δ(v) = 0` the form is affine in `β`: a nonzero linear term gives a
/// vertical line, otherwise the locus is reported as `Empty` (this covers
/// line bundles, for which `Q` vanishes identically).
pub fn q_null_locus(v: &ChernCharacter) -> WallLocus {
    let k = q_coefficients(v);
    if k.discriminant.is_zero() {
        return if k.linear.is_zero() {
            WallLocus::Empty
        } else {
            WallLocus::Vertical {
                beta: -k.constant / k.linear,
            }
        };
    }
    let c = -&k.linear / &k.discriminant;
    let r2 = &c * &c - qi(2) * &k.constant / &k.discriminant;
    WallLocus::semicircle(c, r2)
}

/// Sign of an affine function on a closed interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignReport {
    NonnegEverywhere,
    NegativeEverywhere,
    Mixed,
}

impl fmt::Display for SignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignReport::NonnegEverywhere => "nonneg_everywhere",
            SignReport::NegativeEverywhere => "negative_everywhere",
            SignReport::Mixed => "mixed",
        })
    }
}

/// `Q_{α,β}(v)` restricted to a semicircular wall: `slope·β + intercept`
/// for `β` in the closed diameter.
///
/// `beta_min`/`beta_max` are exact when the radius is rational
/// (`endpoints_exact`); otherwise they bracket the true diameter from
/// outside, rounded to a multiple of `10⁻⁶`. The sign is always decided
/// exactly from `center` and `radius_sq`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BmtRestriction {
    #[serde(with = "crate::rational::serde_str")]
    pub slope: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub intercept: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub beta_min: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub beta_max: Rational,
    pub sign: SignReport,
    pub endpoints_exact: bool,
    #[serde(with = "crate::rational::serde_str")]
    pub center: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub radius_sq: Rational,
}

impl BmtRestriction {
    pub fn eval(&self, beta: &Rational) -> Rational {
        &self.slope * beta + &self.intercept
    }

    /// Exact minimum over the closed diameter, as `a + b√radius_sq`.
    pub fn min_value(&self) -> Surd {
        let mid = self.eval(&self.center);
        Surd::new(mid, -self.slope.abs(), self.radius_sq.clone())
    }

    /// Exact maximum over the closed diameter.
    pub fn max_value(&self) -> Surd {
        let mid = self.eval(&self.center);
        Surd::new(mid, self.slope.abs(), self.radius_sq.clone())
    }
}

/// Rational bracket `lo ≤ √x ≤ hi` with `hi − lo ≤ 10⁻⁶`; exact when `x`
/// is a rational square.
pub fn sqrt_bracket(x: &Rational) -> (Rational, Rational) {
    if let Some(r) = rational_sqrt(x) {
        return (r.clone(), r);
    }
    let scale = BigInt::from(1_000_000u32);
    let scaled = x * Rational::from_integer(&scale * &scale);
    let lo = (scaled.numer() / scaled.denom()).sqrt();
    let lo = Rational::new(lo, scale.clone());
    let hi = &lo + Rational::new(BigInt::from(1), scale);
    (lo, hi)
}

fn affine_on_wall(k: &QCoefficients, center: &Rational, radius_sq: &Rational) -> (Rational, Rational) {
    // On the wall α² + β² = r² − c² + 2cβ.
    let slope = &k.discriminant * center + &k.linear;
    let intercept = &k.discriminant * (radius_sq - center * center) / qi(2) + &k.constant;
    (slope, intercept)
}

/// Restricts `Q_{α,β}(v)` to the semicircle `w`.
pub fn q_on_wall(v: &ChernCharacter, w: &WallLocus) -> Result<BmtRestriction, WallError> {
    let (c, r2) = w.as_semicircle()?;
    let (slope, intercept) = affine_on_wall(&q_coefficients(v), c, r2);
    let (lo, hi) = sqrt_bracket(r2);
    let exact = lo == hi;
    let mut out = BmtRestriction {
        slope,
        intercept,
        beta_min: c - hi,
        beta_max: c + lo.clone(),
        sign: SignReport::Mixed,
        endpoints_exact: exact,
        center: c.clone(),
        radius_sq: r2.clone(),
    };
    if !exact {
        // Outer bracket: push the upper end out as well.
        out.beta_max = &out.center + sqrt_bracket(r2).1;
    }
    out.sign = if out.min_value().signum() != Ordering::Less {
        SignReport::NonnegEverywhere
    } else if out.max_value().signum() == Ordering::Less {
        SignReport::NegativeEverywhere
    } else {
        SignReport::Mixed
    };
    Ok(out)
}

/// Closed interval of `ch3(A) = e` allowed by BMT for both factors, with
/// endpoints in `Q(√radius_sq)`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Ch3Interval {
    Bounded { lower: Surd, upper: Surd },
    Infeasible,
}

/// One constraint `k·e + g ≥ 0`.
struct LinearConstraint {
    k: Surd,
    g: Surd,
}

/// BMT for `(t0, t1, t2, sign·e + offset)` at the two diameter endpoints,
/// expressed as constraints on `e`.
fn endpoint_constraints(
    t: &TruncatedCharacter,
    sign: i64,
    offset: &Rational,
    center: &Rational,
    radius_sq: &Rational,
) -> Vec<LinearConstraint> {
    // Q = Δ/2(α²+β²) + β(3t0·ch3 − t1t2) + 2t2² − 3t1·ch3 with ch3 = σe + o.
    let base = t.with_ch3(offset.clone());
    let (slope0, intercept0) = affine_on_wall(&q_coefficients(&base), center, radius_sq);
    let s = qi(sign);
    let k_slope = qi(3) * &t.ch0 * &s;
    let k_const = -qi(3) * &t.ch1 * &s;
    [-1i64, 1]
        .iter()
        .map(|pm| {
            let beta = Surd::new(center.clone(), qi(*pm), radius_sq.clone());
            let lin = |a: &Rational, b: &Rational| {
                Surd::rational(a.clone(), radius_sq.clone())
                    .mul(&beta)
                    .add(&Surd::rational(b.clone(), radius_sq.clone()))
            };
            LinearConstraint {
                k: lin(&k_slope, &k_const),
                g: lin(&slope0, &intercept0),
            }
        })
        .collect()
}

/// Interval of `e` such that `Q(A) ≥ 0` and `Q(B) ≥ 0` on the closed wall,
/// where `A = (vA, e)` and `B = vE − A`.
pub fn ch3_interval(
    v_a: &TruncatedCharacter,
    v_e: &ChernCharacter,
    w: &WallLocus,
) -> Result<Ch3Interval, WallError> {
    let (c, r2) = w.as_semicircle()?;
    let v_b = &v_e.truncate() - v_a;
    if v_a.discriminant().is_negative() {
        return Err(WallError::NegativeFactorDiscriminant("subobject"));
    }
    if v_b.discriminant().is_negative() {
        return Err(WallError::NegativeFactorDiscriminant("quotient"));
    }
    let mut cons = endpoint_constraints(v_a, 1, &Rational::zero(), c, r2);
    cons.extend(endpoint_constraints(&v_b, -1, &v_e.ch3, c, r2));

    let mut lower: Option<Surd> = None;
    let mut upper: Option<Surd> = None;
    for LinearConstraint { k, g } in cons {
        match k.signum() {
            Ordering::Equal => {
                if g.signum() == Ordering::Less {
                    return Ok(Ch3Interval::Infeasible);
                }
            }
            sk => {
                let bound = g.neg().div(&k).expect("nonzero divisor");
                if sk == Ordering::Greater {
                    if lower.as_ref().is_none_or(|l| bound.add(&l.neg()).signum() == Ordering::Greater) {
                        lower = Some(bound);
                    }
                } else if upper.as_ref().is_none_or(|u| bound.add(&u.neg()).signum() == Ordering::Less) {
                    upper = Some(bound);
                }
            }
        }
    }
    let lower = lower.ok_or(WallError::UnboundedCh3("below"))?;
    let upper = upper.ok_or(WallError::UnboundedCh3("above"))?;
    if upper.add(&lower.neg()).signum() == Ordering::Less {
        return Ok(Ch3Interval::Infeasible);
    }
    Ok(Ch3Interval::Bounded { lower, upper })
}

/// All `e` making `A = (vA, e)` and `B = vE − A` integral and satisfying
/// BMT on the closed wall. Sorted ascending.
///
/// These are necessary conditions only; the list can be a strict superset
/// of the values realized by actual objects.
pub fn ch3_admissible(
    v_a: &TruncatedCharacter,
    v_e: &ChernCharacter,
    w: &WallLocus,
) -> Result<Vec<Rational>, WallError> {
    let (lower, upper) = match ch3_interval(v_a, v_e, w)? {
        Ch3Interval::Infeasible => return Ok(Vec::new()),
        Ch3Interval::Bounded { lower, upper } => (lower, upper),
    };
    if !v_a.is_integral() || !v_e.is_integral() {
        return Ok(Vec::new());
    }
    // Integrality of A pins e modulo 1: e + ch2 + ch1/3 ∈ Z.
    let offset = -(&v_a.ch2 + &v_a.ch1 / qi(3));
    let shift = |s: &Surd| Surd::new(&s.a - &offset, s.b.clone(), s.d.clone());
    let lo = shift(&lower).ceil();
    let hi = shift(&upper).floor();
    let mut out = Vec::new();
    let mut n = lo;
    while n <= hi {
        let e = Rational::from_integer(n.clone()) + &offset;
        let a = v_a.with_ch3(e.clone());
        if a.is_integral() && (v_e - &a).is_integral() {
            out.push(e);
        }
        n += 1;
    }
    Ok(out)
}

/// The parameter `s > 0` of the second tilt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgelandParams {
    s: Rational,
}

impl BridgelandParams {
    pub fn new(s: Rational) -> Result<Self, WallError> {
        if !s.is_positive() {
            return Err(WallError::NonPositiveS(fmt_rational(&s)));
        }
        Ok(BridgelandParams { s })
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }
}

/// `λ_{α,β,s}(v) = −Re Z / Im Z`, `+∞` when `Im Z = 0`.
pub fn bridgeland_slope(v: &ChernCharacter, p: &HalfPlanePoint, params: &BridgelandParams) -> Slope {
    let t = v.twist(&p.beta);
    let im = &t.ch2 - &p.alpha_sq * &t.ch0 / qi(2);
    if im.is_zero() {
        return Slope::PosInfinity;
    }
    let re = -&t.ch3 + (&params.s + q(1, 6)) * &p.alpha_sq * &t.ch1;
    Slope::Finite(-re / im)
}

/// Sign of `λ(v) − λ(w)` at `p`, with `+∞` as the largest value.
pub fn bridgeland_wall_sign(
    v: &ChernCharacter,
    w: &ChernCharacter,
    p: &HalfPlanePoint,
    params: &BridgelandParams,
) -> Ordering {
    bridgeland_slope(v, p, params).cmp(&bridgeland_slope(w, p, params))
}
