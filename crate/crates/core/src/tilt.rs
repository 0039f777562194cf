//! Tilt slope and the geometry of numerical walls in the `(β, α²)` plane.
//!
//! Every predicate works with `α²` rather than `α` so that walls with
//! irrational radius (such as `√41/2`) are handled with rational arithmetic
//! only.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{ChernCharacter, TruncatedCharacter};
use crate::error::WallError;
use crate::rational::{fmt_rational, q, qi, rational_sqrt, Rational, Slope};

/// A point of the upper half plane in `(β, α²)` coordinates, `α² > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    #[serde(with = "crate::rational::serde_str")]
    pub beta: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub alpha_sq: Rational,
}

impl HalfPlanePoint {
    pub fn new(beta: Rational, alpha_sq: Rational) -> Result<Self, WallError> {
        if !alpha_sq.is_positive() {
            return Err(WallError::NonPositiveAlphaSq(fmt_rational(&alpha_sq)));
        }
        Ok(HalfPlanePoint { beta, alpha_sq })
    }

    /// Boundary point on the β-axis (`α = 0`). Only meaningful as a limit.
    pub fn boundary(beta: Rational) -> Self {
        HalfPlanePoint {
            beta,
            alpha_sq: Rational::zero(),
        }
    }

    pub fn is_boundary(&self) -> bool {
        self.alpha_sq.is_zero()
    }
}

/// A numerical wall.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WallLocus {
    /// `(β − center)² + α² = radius_sq`, `radius_sq > 0`.
    Semicircle {
        #[serde(with = "crate::rational::serde_str")]
        center: Rational,
        #[serde(with = "crate::rational::serde_str")]
        radius_sq: Rational,
    },
    Vertical {
        #[serde(with = "crate::rational::serde_str")]
        beta: Rational,
    },
    Everywhere,
    Empty,
}

impl WallLocus {
    /// Semicircle constructor; collapses to `Empty` when `radius_sq ≤ 0`.
    pub fn semicircle(center: Rational, radius_sq: Rational) -> Self {
        if radius_sq.is_positive() {
            WallLocus::Semicircle { center, radius_sq }
        } else {
            WallLocus::Empty
        }
    }

    pub fn as_semicircle(&self) -> Result<(&Rational, &Rational), WallError> {
        match self {
            WallLocus::Semicircle { center, radius_sq } => Ok((center, radius_sq)),
            other => Err(WallError::NotSemicircle(other.to_string())),
        }
    }

    pub fn is_semicircle(&self) -> bool {
        matches!(self, WallLocus::Semicircle { .. })
    }

    /// Same wall translated by `shift` along the β-axis.
    pub fn shifted(&self, shift: &Rational) -> Self {
        match self {
            WallLocus::Semicircle { center, radius_sq } => WallLocus::Semicircle {
                center: center + shift,
                radius_sq: radius_sq.clone(),
            },
            WallLocus::Vertical { beta } => WallLocus::Vertical { beta: beta + shift },
            other => other.clone(),
        }
    }

    /// Human-readable form using `W(center, radius)`. Irrational radii are
    /// printed as `sqrt(p/q)`.
    pub fn notation(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for WallLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WallLocus::Semicircle { center, radius_sq } => {
                let r = match rational_sqrt(radius_sq) {
                    Some(r) => fmt_rational(&r),
                    None => format!("sqrt({})", fmt_rational(radius_sq)),
                };
                write!(f, "W({}, {})", fmt_rational(center), r)
            }
            WallLocus::Vertical { beta } => write!(f, "beta = {}", fmt_rational(beta)),
            WallLocus::Everywhere => f.write_str("everywhere"),
            WallLocus::Empty => f.write_str("empty"),
        }
    }
}

/// Position of a point relative to a wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Inside,
    On,
    Outside,
}

/// Which side of the vertical wall `β = μ_H(v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// The locus `μ_{α,β}(v) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Hyperbola {
    /// `ch2 − β·ch1 + (β² − α²)·ch0/2 = 0`, equivalently
    /// `(β − center)² − α² = rhs` with `center = ch1/ch0`, `rhs = Δ/ch0²`.
    Branch {
        #[serde(with = "crate::rational::serde_str")]
        ch0: Rational,
        #[serde(with = "crate::rational::serde_str")]
        ch1: Rational,
        #[serde(with = "crate::rational::serde_str")]
        ch2: Rational,
    },
    VerticalLine {
        #[serde(with = "crate::rational::serde_str")]
        beta: Rational,
    },
}

impl Hyperbola {
    /// Left-hand side of the defining equation at `p`; zero exactly on the
    /// locus. For branches this is `ch2^β − α²·ch0/2`, the imaginary part of
    /// the tilt central charge, and serves as a signed distance proxy.
    pub fn residual(&self, p: &HalfPlanePoint) -> Rational {
        match self {
            Hyperbola::Branch { ch0, ch1, ch2 } => {
                let b = &p.beta;
                ch2 - b * ch1 + (b * b - &p.alpha_sq) * ch0 / qi(2)
            }
            Hyperbola::VerticalLine { beta } => &p.beta - beta,
        }
    }

    pub fn contains(&self, p: &HalfPlanePoint) -> bool {
        self.residual(p).is_zero()
    }

    /// `(center, rhs)` of `(β − center)² − α² = rhs` for a branch.
    pub fn normal_form(&self) -> Option<(Rational, Rational)> {
        match self {
            Hyperbola::Branch { ch0, ch1, ch2 } => {
                let center = ch1 / ch0;
                let disc = ch1 * ch1 - qi(2) * ch0 * ch2;
                Some((center, disc / (ch0 * ch0)))
            }
            Hyperbola::VerticalLine { .. } => None,
        }
    }

    /// `α²` of the hyperbola above `beta`, if positive.
    pub fn alpha_sq_at(&self, beta: &Rational) -> Option<Rational> {
        let (c, rhs) = self.normal_form()?;
        let d = beta - c;
        let a2 = &d * &d - rhs;
        a2.is_positive().then_some(a2)
    }
}

impl fmt::Display for Hyperbola {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyperbola::Branch { .. } => {
                let (c, rhs) = self.normal_form().expect("branch");
                if c.is_zero() {
                    write!(f, "beta^2 - alpha^2 = {}", fmt_rational(&rhs))
                } else {
                    write!(f, "(beta - {})^2 - alpha^2 = {}", fmt_rational(&c), fmt_rational(&rhs))
                }
            }
            Hyperbola::VerticalLine { beta } => write!(f, "beta = {}", fmt_rational(beta)),
        }
    }
}

/// Tilt slope `μ_{α,β} = −(α²·ch0^β/2 − ch2^β)/ch1^β`, `+∞` when `ch1^β = 0`.
pub fn tilt_slope(v: impl Into<TruncatedCharacter>, p: &HalfPlanePoint) -> Slope {
    let t = v.into().twist(&p.beta);
    if t.ch1.is_zero() {
        return Slope::PosInfinity;
    }
    Slope::Finite(-(&p.alpha_sq * &t.ch0 / qi(2) - &t.ch2) / &t.ch1)
}

/// The coefficients `(K1, K2, K3)` of `K1(α²+β²)/2 + K2·β + K3 = 0`.
pub fn wall_coefficients(
    v: &TruncatedCharacter,
    w: &TruncatedCharacter,
) -> (Rational, Rational, Rational) {
    let k1 = &v.ch0 * &w.ch1 - &w.ch0 * &v.ch1;
    let k2 = &w.ch0 * &v.ch2 - &v.ch0 * &w.ch2;
    let k3 = &v.ch1 * &w.ch2 - &w.ch1 * &v.ch2;
    (k1, k2, k3)
}

/// The numerical wall `W(v, w) = {μ_{α,β}(v) = μ_{α,β}(w)}`.
pub fn numerical_wall(v: impl Into<TruncatedCharacter>, w: impl Into<TruncatedCharacter>) -> WallLocus {
    let (v, w) = (v.into(), w.into());
    let (k1, k2, k3) = wall_coefficients(&v, &w);
    if !k1.is_zero() {
        let c = -&k2 / &k1;
        let r2 = &c * &c - qi(2) * &k3 / &k1;
        WallLocus::semicircle(c, r2)
    } else if !k2.is_zero() {
        WallLocus::Vertical { beta: -k3 / k2 }
    } else if k3.is_zero() {
        WallLocus::Everywhere
    } else {
        WallLocus::Empty
    }
}

/// The hyperbola `μ_{α,β}(v) = 0` (or its vertical degeneration in rank 0).
pub fn hyperbola_of(v: impl Into<TruncatedCharacter>) -> Result<Hyperbola, WallError> {
    let v = v.into();
    if !v.ch0.is_zero() {
        Ok(Hyperbola::Branch {
            ch0: v.ch0,
            ch1: v.ch1,
            ch2: v.ch2,
        })
    } else if !v.ch1.is_zero() {
        Ok(Hyperbola::VerticalLine { beta: v.ch2 / v.ch1 })
    } else {
        Err(WallError::DegenerateHyperbola(v.to_string()))
    }
}

/// Top point of a semicircular wall.
pub fn apex(w: &WallLocus) -> Result<HalfPlanePoint, WallError> {
    let (c, r2) = w.as_semicircle()?;
    Ok(HalfPlanePoint {
        beta: c.clone(),
        alpha_sq: r2.clone(),
    })
}

/// Where `p` lies relative to `w`. Vertical walls report `On` or `Outside`.
pub fn wall_interior(w: &WallLocus, p: &HalfPlanePoint) -> Position {
    match w {
        WallLocus::Semicircle { center, radius_sq } => {
            let d = &p.beta - center;
            match (&d * &d + &p.alpha_sq).cmp(radius_sq) {
                Ordering::Less => Position::Inside,
                Ordering::Equal => Position::On,
                Ordering::Greater => Position::Outside,
            }
        }
        WallLocus::Vertical { beta } if *beta == p.beta => Position::On,
        WallLocus::Vertical { .. } | WallLocus::Empty => Position::Outside,
        WallLocus::Everywhere => Position::On,
    }
}

pub fn wall_contains(w: &WallLocus, p: &HalfPlanePoint) -> bool {
    wall_interior(w, p) == Position::On
}

/// `α²` where the wall meets the vertical line `β = beta0`, if positive.
pub fn intersect_beta_line(w: &WallLocus, beta0: &Rational) -> Option<Rational> {
    let (c, r2) = w.as_semicircle().ok()?;
    let d = beta0 - c;
    let a2 = r2 - &d * &d;
    a2.is_positive().then_some(a2)
}

/// True when one semicircle lies inside the closed region of the other.
/// Exact even for irrational radii: `|c1 − c2| ≤ |r1 − r2|` is squared twice.
pub fn nested(a: &WallLocus, b: &WallLocus) -> bool {
    let (Ok((c1, r1)), Ok((c2, r2))) = (a.as_semicircle(), b.as_semicircle()) else {
        return false;
    };
    let dc = c1 - c2;
    // (c1-c2)² ≤ r1² + r2² − 2 r1 r2  ⇔  2 r1 r2 ≤ r1² + r2² − (c1-c2)²
    let rhs = r1 + r2 - &dc * &dc;
    if rhs.is_negative() {
        return false;
    }
    qi(4) * r1 * r2 <= &rhs * &rhs
}

/// Semicircles on one side of the vertical wall `β = vertical_beta`, sorted
/// by `radius_sq` descending (outermost first) and deduplicated. With no
/// vertical wall (rank-zero classes) every semicircle is kept.
pub fn order_walls(walls: &[WallLocus], side: Side, vertical_beta: Option<&Rational>) -> Vec<WallLocus> {
    let mut out: Vec<WallLocus> = walls
        .iter()
        .filter(|w| match (w, vertical_beta) {
            (WallLocus::Semicircle { center, .. }, Some(vb)) => match side {
                Side::Left => center < vb,
                Side::Right => center > vb,
            },
            (WallLocus::Semicircle { .. }, None) => true,
            _ => false,
        })
        .cloned()
        .collect();
    out.sort_by(|a, b| {
        let (ca, ra) = a.as_semicircle().expect("filtered");
        let (cb, rb) = b.as_semicircle().expect("filtered");
        rb.cmp(ra).then_with(|| ca.cmp(cb))
    });
    out.dedup();
    out
}

/// The β-coordinate of the unique vertical wall of `v`, if `ch0 ≠ 0`.
pub fn vertical_wall(v: &ChernCharacter) -> Option<Rational> {
    v.mu_slope().finite().cloned()
}

/// Midpoint helper used by diagrams and tests: `(center ± radius)` bounds of
/// a semicircle as rationals when the radius is rational.
pub fn rational_diameter(w: &WallLocus) -> Option<(Rational, Rational)> {
    let (c, r2) = w.as_semicircle().ok()?;
    let r = rational_sqrt(r2)?;
    Some((c - &r, c + r))
}

#[allow(dead_code)]
fn half() -> Rational {
    q(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TruncatedCharacter {
        s.parse().unwrap()
    }

    fn ch(s: &str) -> ChernCharacter {
        s.parse().unwrap()
    }

    fn pt(b: Rational, a2: Rational) -> HalfPlanePoint {
        HalfPlanePoint::new(b, a2).unwrap()
    }

    fn semi(c: Rational, r2: Rational) -> WallLocus {
        WallLocus::semicircle(c, r2)
    }

    #[test]
    fn tilt_slope_examples() {
        let v = ch("1,0,-5,11");
        assert_eq!(tilt_slope(&v, &pt(qi(-4), qi(6))), Slope::Finite(qi(0)));
        let b = ch("0,2,-7,37/3");
        assert_eq!(tilt_slope(&b, &pt(qi(-3), qi(1))), Slope::Finite(q(-1, 2)));
        let o = ChernCharacter::line_bundle(0);
        assert_eq!(tilt_slope(&o, &pt(qi(-1), qi(1))), Slope::Finite(qi(0)));
        assert_eq!(tilt_slope(ChernCharacter::point(), &pt(qi(0), qi(1))), Slope::PosInfinity);
    }

    #[test]
    fn half_plane_point_rejects_boundary() {
        assert!(HalfPlanePoint::new(qi(0), qi(0)).is_err());
        assert!(HalfPlanePoint::new(qi(0), qi(-1)).is_err());
        assert!(HalfPlanePoint::boundary(qi(-2)).is_boundary());
    }

    #[test]
    fn numerical_wall_examples() {
        let v = t("1,0,-5");
        assert_eq!(numerical_wall(&v, t("1,-2,2")), semi(q(-7, 2), q(9, 4)));
        assert_eq!(numerical_wall(&v, t("1,-1,-1/2")), semi(q(-9, 2), q(41, 4)));
        assert_eq!(numerical_wall(&v, &v), WallLocus::Everywhere);
        assert_eq!(numerical_wall(&v, t("2,0,-7")), WallLocus::Vertical { beta: qi(0) });
        assert_eq!(numerical_wall(&v, t("2,-4,3")), semi(q(-13, 4), q(9, 16)));
    }

    #[test]
    fn numerical_wall_degenerate_cases() {
        // K1 = K2 = 0, K3 ≠ 0: no solutions at all.
        let v = t("0,0,1");
        let w = t("0,0,2");
        assert_eq!(numerical_wall(&v, &w), WallLocus::Everywhere);
        // radius_sq ≤ 0 collapses to empty
        assert_eq!(WallLocus::semicircle(qi(0), qi(0)), WallLocus::Empty);
        assert_eq!(WallLocus::semicircle(qi(0), qi(-3)), WallLocus::Empty);
    }

    #[test]
    fn hyperbola_examples() {
        let h = hyperbola_of(ch("1,0,-5,11")).unwrap();
        assert_eq!(h.normal_form(), Some((qi(0), qi(10))));
        assert_eq!(h.to_string(), "beta^2 - alpha^2 = 10");
        assert!(h.contains(&pt(qi(-4), qi(6))));
        assert_eq!(hyperbola_of(t("0,1,-9/2")).unwrap(), Hyperbola::VerticalLine { beta: q(-9, 2) });
        let o = hyperbola_of(ChernCharacter::line_bundle(0)).unwrap();
        assert_eq!(o.normal_form(), Some((qi(0), qi(0))));
        assert!(hyperbola_of(t("0,0,1")).is_err());
        assert_eq!(h.alpha_sq_at(&qi(-4)), Some(qi(6)));
        assert_eq!(h.alpha_sq_at(&qi(-3)), None);
    }

    #[test]
    fn apex_examples_lie_on_gamma() {
        let h = hyperbola_of(ch("1,0,-5,11")).unwrap();
        for (c, r2) in [(q(-7, 2), q(9, 4)), (q(-9, 2), q(41, 4)), (q(-11, 2), q(81, 4))] {
            let a = apex(&semi(c.clone(), r2.clone())).unwrap();
            assert_eq!((a.beta.clone(), a.alpha_sq.clone()), (c, r2));
            assert!(h.contains(&a));
        }
        assert!(apex(&WallLocus::Vertical { beta: qi(0) }).is_err());
    }

    #[test]
    fn interior_examples() {
        let w = semi(q(-7, 2), q(9, 4));
        assert_eq!(wall_interior(&w, &pt(q(-7, 2), q(9, 4))), Position::On);
        assert!(wall_contains(&w, &pt(q(-7, 2), q(9, 4))));
        assert_eq!(wall_interior(&w, &pt(qi(-3), q(1, 4))), Position::Inside);
        assert_eq!(wall_interior(&w, &pt(qi(-3), qi(4))), Position::Outside);
        // closure point on the axis
        assert_eq!(wall_interior(&w, &HalfPlanePoint::boundary(qi(-2))), Position::On);
    }

    #[test]
    fn beta_line_intersections() {
        // 41/4 − (5/2)² = 4
        assert_eq!(intersect_beta_line(&semi(q(-9, 2), q(41, 4)), &qi(-2)), Some(qi(4)));
        assert_eq!(intersect_beta_line(&semi(q(-11, 2), q(81, 4)), &qi(-2)), Some(qi(8)));
        assert_eq!(intersect_beta_line(&semi(q(-7, 2), q(9, 4)), &qi(-7)), None);
        assert_eq!(intersect_beta_line(&WallLocus::Vertical { beta: qi(0) }, &qi(0)), None);
    }

    #[test]
    fn ordering_and_nesting() {
        let w1 = semi(q(-7, 2), q(9, 4));
        let w2 = semi(q(-9, 2), q(41, 4));
        let w3 = semi(q(-11, 2), q(81, 4));
        let sorted = order_walls(&[w1.clone(), w3.clone(), w2.clone(), w1.clone()], Side::Left, Some(&qi(0)));
        assert_eq!(sorted, vec![w3.clone(), w2.clone(), w1.clone()]);
        assert_eq!(order_walls(std::slice::from_ref(&w1), Side::Left, Some(&qi(0))), vec![w1.clone()]);
        assert!(order_walls(std::slice::from_ref(&w1), Side::Right, Some(&qi(0))).is_empty());
        assert!(nested(&w1, &w2) && nested(&w2, &w3) && nested(&w1, &w3));
        assert!(!nested(&semi(qi(0), qi(1)), &semi(qi(1), qi(1))));
        // on a shared β-line the smaller wall is lower
        for beta in [qi(-3), q(-5, 2), q(-7, 2)] {
            let a1 = intersect_beta_line(&w1, &beta).unwrap();
            let a2 = intersect_beta_line(&w2, &beta).unwrap();
            let a3 = intersect_beta_line(&w3, &beta).unwrap();
            assert!(a1 < a2 && a2 < a3);
        }
    }

    #[test]
    fn wall_json_format() {
        let w = semi(q(-7, 2), q(9, 4));
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"type":"semicircle","center":"-7/2","radius_sq":"9/4"}"#);
        let back: WallLocus = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        assert_eq!(serde_json::to_string(&WallLocus::Empty).unwrap(), r#"{"type":"empty"}"#);
        assert_eq!(w.to_string(), "W(-7/2, 3/2)");
        assert_eq!(semi(q(-9, 2), q(41, 4)).to_string(), "W(-9/2, sqrt(41/4))");
    }
}
