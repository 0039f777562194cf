//! Enumeration of candidate destabilizing subcharacters along an integer
//! vertical line `β = β₀`.
//!
//! After twisting by `β₀` the target becomes `(r, d, X/2)` with integers
//! `r, d, X`, and a subobject is an integer triple `(a, b, c)` standing for
//! `(a, b, c/2)`. The search keeps triples with
//!
//! * `0 < b < d` (both factors have positive twisted degree),
//! * `0 ≤ Δ(sub), Δ(quot) ≤ Δ(v)`,
//! * a positive solution `α² = (bX − dc)/(br − da)` of the slope equality,
//! * both factors integral,
//! * optionally, some integral `ch3` for which both factors satisfy the BMT
//!   inequality on the whole closed wall.
//!
//! A pair is unordered; the member of larger rank is reported as `sub`
//! (ties broken lexicographically on twisted coordinates).

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bmt::{ch3_admissible, q_form};
use crate::chern::{ChernCharacter, TruncatedCharacter};
use crate::error::WallError;
use crate::rational::{q, qi, rational_sqrt, Rational};
use crate::tilt::{intersect_beta_line, numerical_wall, HalfPlanePoint, WallLocus};

/// Search options.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinderOptions {
    /// Largest subobject rank examined; hitting it produces a warning.
    pub a_max: u64,
    /// Attach the admissible `ch3` values to each pair.
    pub want_ch3: bool,
    /// Drop pairs admitting no integral `ch3` compatible with BMT.
    pub bmt_filter: bool,
}

impl Default for FinderOptions {
    fn default() -> Self {
        FinderOptions {
            a_max: 64,
            want_ch3: false,
            bmt_filter: true,
        }
    }
}

/// Verdicts of the individual filters for a reported pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterVerdicts {
    pub delta_sub: bool,
    pub delta_quot: bool,
    pub heart_bound: bool,
    pub slope_solvable: bool,
    pub integral_sub: bool,
    pub integral_quot: bool,
    pub bmt_wall: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePair {
    pub sub: TruncatedCharacter,
    pub quot: TruncatedCharacter,
    /// `α²` where the wall meets `β = β₀`.
    #[serde(with = "crate::rational::serde_str")]
    pub alpha_sq: Rational,
    #[serde(with = "crate::rational::serde_str_vec")]
    pub ch3_candidates: Vec<Rational>,
    pub filters: FilterVerdicts,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateWall {
    pub wall: WallLocus,
    pub pairs: Vec<CandidatePair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FinderWarning {
    /// For this `b` the rank bound exceeded `a_max`; ranks above the cap
    /// were not examined.
    RankCap { b: i64, required: String, a_max: u64 },
    /// BMT did not bound `ch3` for this pair; it was kept unpruned.
    UnboundedCh3 { sub: TruncatedCharacter },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinderReport {
    pub character: ChernCharacter,
    pub beta0: i64,
    pub walls: Vec<CandidateWall>,
    pub warnings: Vec<FinderWarning>,
}

/// Twisted integer data of the target.
#[derive(Clone, Copy, Debug)]
struct Twisted {
    r: i128,
    d: i128,
    x: i128,
    delta: i128,
}

fn to_i128(x: &Rational, v: &ChernCharacter) -> Result<i128, WallError> {
    x.to_integer()
        .to_i64()
        .map(i128::from)
        .ok_or_else(|| WallError::TooLarge(v.to_string()))
}

fn validate(v: &ChernCharacter, beta0: i64, opts: &FinderOptions) -> Result<Twisted, WallError> {
    if opts.a_max == 0 {
        return Err(WallError::BadCap);
    }
    if !v.is_integral() {
        return Err(WallError::NonIntegral(v.to_string()));
    }
    if v.discriminant().is_negative() {
        return Err(WallError::NegativeDiscriminant(v.to_string()));
    }
    let t = v.twist(&qi(beta0));
    if !t.ch1.is_positive() {
        return Err(WallError::NonPositiveTwistedDegree(crate::rational::fmt_rational(&t.ch1)));
    }
    let r = to_i128(&t.ch0, v)?;
    let d = to_i128(&t.ch1, v)?;
    let x = to_i128(&(qi(2) * &t.ch2), v)?;
    Ok(Twisted {
        r,
        d,
        x,
        delta: d * d - r * x,
    })
}

/// Upper bound on the subobject rank for a given `b`.
///
/// Past `max(b², Δ − b²)` the discriminant window forces `c = 0`; then
/// `α² = bX/(br − da)` is non-positive once `a > br/d` unless `X < 0`, and
/// for `X < 0` the quotient discriminant `(d−b)² − (r−a)X` turns negative
/// once `a > r + (d−b)²/(−X)`.
fn rank_bound(t: &Twisted, b: i128) -> i128 {
    let mut bound = (b * b).max(t.delta - b * b).max(Integer::div_floor(&(b * t.r), &t.d));
    if t.x < 0 {
        let s = (t.d - b) * (t.d - b);
        bound = bound.max(t.r + Integer::div_floor(&s, &(-t.x)));
    }
    bound
}

/// Integer range of `c` allowed by the discriminant windows.
fn c_range(t: &Twisted, a: i128, b: i128) -> Option<(i128, i128)> {
    let b2 = b * b;
    if a > 0 {
        Some((Integer::div_ceil(&(b2 - t.delta), &a), Integer::div_floor(&b2, &a)))
    } else if a < 0 {
        Some((Integer::div_ceil(&b2, &a), Integer::div_floor(&(b2 - t.delta), &a)))
    } else {
        // Rank-zero subobject: c is pinned by the quotient window.
        let rq = t.r;
        if b2 > t.delta || rq == 0 {
            return None;
        }
        // Δ(quot) = (d−b)² − r(X − c) ∈ [0, Δ]  ⇔  r·c ∈ [lo, hi].
        let s = (t.d - b) * (t.d - b);
        let lo = rq * t.x - s;
        let hi = t.delta + rq * t.x - s;
        if rq > 0 {
            Some((Integer::div_ceil(&lo, &rq), Integer::div_floor(&hi, &rq)))
        } else {
            Some((Integer::div_ceil(&hi, &rq), Integer::div_floor(&lo, &rq)))
        }
    }
}

/// Integer-level predicates; returns `α²` on success.
fn accept_triple(t: &Twisted, a: i128, b: i128, c: i128) -> Option<Rational> {
    let (qa, qb, qc) = (t.r - a, t.d - b, t.x - c);
    // canonical orientation
    match a.cmp(&qa) {
        Ordering::Less => return None,
        Ordering::Equal if (b, c) < (qb, qc) => return None,
        _ => {}
    }
    // integrality: c/2 + b/2 ∈ Z, and the same for the quotient
    if (c - b).rem_euclid(2) != 0 || (qc - qb).rem_euclid(2) != 0 {
        return None;
    }
    let ds = b * b - a * c;
    let dq = qb * qb - qa * qc;
    if !(0..=t.delta).contains(&ds) || !(0..=t.delta).contains(&dq) {
        return None;
    }
    let num = b * t.x - t.d * c;
    let den = b * t.r - t.d * a;
    if den == 0 || num == 0 || (num > 0) != (den > 0) {
        return None;
    }
    Some(Rational::new(num.into(), den.into()))
}

struct Found {
    wall: WallLocus,
    pair: CandidatePair,
}

fn build_pair(
    v: &ChernCharacter,
    beta0: i64,
    (a, b, c): (i128, i128, i128),
    alpha_sq: Rational,
    opts: &FinderOptions,
    warnings: &mut Vec<FinderWarning>,
) -> Option<Found> {
    let sub_tw = TruncatedCharacter::new(qi(a as i64), qi(b as i64), q(c as i64, 2));
    let sub = sub_tw.twist(&qi(-beta0));
    let quot = &v.truncate() - &sub;
    let wall = numerical_wall(v, &sub);
    if !wall.is_semicircle() {
        return None;
    }
    let (bmt_ok, list) = match ch3_admissible(&sub, v, &wall) {
        Ok(list) => (!list.is_empty(), list),
        Err(WallError::UnboundedCh3(_)) => {
            warnings.push(FinderWarning::UnboundedCh3 { sub: sub.clone() });
            (true, Vec::new())
        }
        Err(_) => (false, Vec::new()),
    };
    if opts.bmt_filter && !bmt_ok {
        return None;
    }
    let filters = FilterVerdicts {
        delta_sub: true,
        delta_quot: true,
        heart_bound: true,
        slope_solvable: true,
        integral_sub: sub.is_integral(),
        integral_quot: quot.is_integral(),
        bmt_wall: bmt_ok,
    };
    Some(Found {
        wall,
        pair: CandidatePair {
            sub,
            quot,
            alpha_sq,
            ch3_candidates: if opts.want_ch3 { list } else { Vec::new() },
            filters,
        },
    })
}

/// Searches the slice `b ∈ [b_lo, b_hi]` (clamped to `0 < b < d`).
/// Slices can run independently and be combined with [`merge_reports`].
pub fn find_in_b_slice(
    v: &ChernCharacter,
    beta0: i64,
    opts: &FinderOptions,
    b_lo: i64,
    b_hi: i64,
) -> Result<FinderReport, WallError> {
    let t = validate(v, beta0, opts)?;
    let mut found = Vec::new();
    let mut warnings = Vec::new();
    let a_lo = Integer::div_ceil(&t.r, &2);
    for b in i128::from(b_lo).max(1)..=i128::from(b_hi).min(t.d - 1) {
        let bound = rank_bound(&t, b);
        let cap = i128::from(opts.a_max);
        let a_hi = if bound > cap {
            warnings.push(FinderWarning::RankCap {
                b: b as i64,
                required: bound.to_string(),
                a_max: opts.a_max,
            });
            cap
        } else {
            bound
        };
        for a in a_lo..=a_hi {
            let Some((c_lo, c_hi)) = c_range(&t, a, b) else { continue };
            for c in c_lo..=c_hi {
                if let Some(alpha_sq) = accept_triple(&t, a, b, c) {
                    found.extend(build_pair(v, beta0, (a, b, c), alpha_sq, opts, &mut warnings));
                }
            }
        }
    }
    Ok(assemble(v, beta0, found, warnings))
}

fn assemble(v: &ChernCharacter, beta0: i64, found: Vec<Found>, warnings: Vec<FinderWarning>) -> FinderReport {
    let mut by_wall: BTreeMap<(Reverse<Rational>, Rational), Vec<CandidatePair>> = BTreeMap::new();
    for f in found {
        let (c, r2) = f.wall.as_semicircle().expect("semicircle");
        by_wall.entry((Reverse(r2.clone()), c.clone())).or_default().push(f.pair);
    }
    let walls = by_wall
        .into_iter()
        .map(|((Reverse(radius_sq), center), mut pairs)| {
            pairs.sort_by(|x, y| y.sub.cmp(&x.sub));
            pairs.dedup_by(|x, y| x.sub == y.sub);
            CandidateWall {
                wall: WallLocus::Semicircle { center, radius_sq },
                pairs,
            }
        })
        .collect();
    FinderReport {
        character: v.clone(),
        beta0,
        walls,
        warnings,
    }
}

/// Combines slice reports for the same `(v, β₀)`. The result does not
/// depend on the order of the inputs.
pub fn merge_reports(reports: Vec<FinderReport>) -> Option<FinderReport> {
    let first = reports.first()?;
    let (v, beta0) = (first.character.clone(), first.beta0);
    let mut found = Vec::new();
    let mut warnings = Vec::new();
    for r in reports {
        for w in r.walls {
            for p in w.pairs {
                found.push(Found {
                    wall: w.wall.clone(),
                    pair: p,
                });
            }
        }
        warnings.extend(r.warnings);
    }
    warnings.sort_by_key(|w| serde_json::to_string(w).unwrap_or_default());
    warnings.dedup();
    Some(assemble(&v, beta0, found, warnings))
}

/// All candidate walls of `v` crossing `β = β₀`, outermost first.
pub fn find_candidate_walls(v: &ChernCharacter, beta0: i64, opts: &FinderOptions) -> Result<FinderReport, WallError> {
    let t = validate(v, beta0, opts)?;
    let mut rep = find_in_b_slice(v, beta0, opts, 1, (t.d - 1).min(i128::from(i64::MAX)) as i64)?;
    rep.warnings.sort_by_key(|w| serde_json::to_string(w).unwrap_or_default());
    rep.warnings.dedup();
    Ok(rep)
}

/// Same result as [`find_candidate_walls`], with `b`-slices searched on
/// `threads` scoped threads.
pub fn find_candidate_walls_parallel(
    v: &ChernCharacter,
    beta0: i64,
    opts: &FinderOptions,
    threads: usize,
) -> Result<FinderReport, WallError> {
    let t = validate(v, beta0, opts)?;
    let d = (t.d - 1) as i64;
    let threads = threads.max(1) as i64;
    let step = (d + threads - 1) / threads;
    let results: Vec<Result<FinderReport, WallError>> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|i| {
                let lo = 1 + i * step;
                let hi = (lo + step - 1).min(d);
                s.spawn(move || find_in_b_slice(v, beta0, opts, lo, hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let reports = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(merge_reports(reports).expect("at least one slice"))
}

/// Box searched by [`brute_force_oracle`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBox {
    /// `|a|, |b|, |c| ≤ bound` in twisted coordinates `(a, b, c/2)`.
    pub bound: i64,
    /// `ch3` values `k/6` with `|k/6| ≤ e_window` are tried for BMT.
    pub e_window: i64,
    pub bmt_filter: bool,
}

impl Default for OracleBox {
    fn default() -> Self {
        OracleBox {
            bound: 20,
            e_window: 256,
            bmt_filter: true,
        }
    }
}

/// Exhaustive search over a box with the predicates evaluated directly on
/// untwisted rational characters. Intended as a test oracle.
pub fn brute_force_oracle(v: &ChernCharacter, beta0: i64, bx: &OracleBox) -> Vec<CandidateWall> {
    let beta = qi(beta0);
    let vt = v.truncate();
    let v_tw = vt.twist(&beta);
    let delta = v.discriminant();
    let mut found = Vec::new();
    // Integer images of the twisted target, used only to skip hopeless
    // triples cheaply; every predicate is re-evaluated exactly below.
    let two_x = qi(2) * &v_tw.ch2;
    let ints = [&v_tw.ch0, &v_tw.ch1, &two_x, &delta].map(|x| x.to_integer().to_i64());
    let quick = match ints {
        [Some(r), Some(d), Some(x), Some(dl)] => Some((r, d, x, dl)),
        _ => None,
    };
    let n = bx.bound;
    for a in -n..=n {
        for b in -n..=n {
            for c in -n..=n {
                if let Some((r, d, x, dl)) = quick {
                    let (qa, qb, qc) = (r - a, d - b, x - c);
                    let ds = b * b - a * c;
                    let dq = qb * qb - qa * qc;
                    if b <= 0 || qb <= 0 || !(0..=dl).contains(&ds) || !(0..=dl).contains(&dq) {
                        continue;
                    }
                }
                let sub_tw = TruncatedCharacter::new(qi(a), qi(b), q(c, 2));
                let quot_tw = &v_tw - &sub_tw;
                if sub_tw < quot_tw {
                    continue;
                }
                if !(sub_tw.ch1.is_positive() && quot_tw.ch1.is_positive()) {
                    continue;
                }
                let in_window = |x: &TruncatedCharacter| {
                    let dx = x.discriminant();
                    !dx.is_negative() && dx <= delta
                };
                if !in_window(&sub_tw) || !in_window(&quot_tw) {
                    continue;
                }
                let sub = sub_tw.twist(&-&beta);
                let quot = &vt - &sub;
                if !sub.is_integral() || !quot.is_integral() {
                    continue;
                }
                let wall = numerical_wall(v, &sub);
                let Some(alpha_sq) = intersect_beta_line(&wall, &beta) else { continue };
                let bmt_ok = oracle_bmt(&sub, v, &wall, bx.e_window);
                if bx.bmt_filter && !bmt_ok {
                    continue;
                }
                let filters = FilterVerdicts {
                    delta_sub: true,
                    delta_quot: true,
                    heart_bound: true,
                    slope_solvable: true,
                    integral_sub: true,
                    integral_quot: true,
                    bmt_wall: bmt_ok,
                };
                found.push(Found {
                    wall,
                    pair: CandidatePair {
                        sub,
                        quot,
                        alpha_sq,
                        ch3_candidates: Vec::new(),
                        filters,
                    },
                });
            }
        }
    }
    assemble(v, beta0, found, Vec::new()).walls
}

/// Rational bracket `lo ≤ √r2 ≤ hi` found by bisection.
#[derive(Clone)]
struct RootBracket {
    r2: Rational,
    lo: Rational,
    hi: Rational,
}

impl RootBracket {
    fn new(r2: &Rational) -> Self {
        if let Some(r) = rational_sqrt(r2) {
            return RootBracket { r2: r2.clone(), lo: r.clone(), hi: r };
        }
        let mut b = RootBracket {
            r2: r2.clone(),
            lo: Rational::zero(),
            hi: r2 + qi(1),
        };
        for _ in 0..48 {
            b.halve();
        }
        b
    }

    fn halve(&mut self) {
        let mid = (&self.lo + &self.hi) / qi(2);
        if &mid * &mid < self.r2 {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Sign of `slope·(center + side·√r2) + intercept`. For an irrational
    /// root this is never zero unless the function vanishes identically.
    fn sign(&self, slope: &Rational, intercept: &Rational, center: &Rational, side: i64) -> Ordering {
        let f = |rho: &Rational| (slope * (center + qi(side) * rho) + intercept).cmp(&Rational::zero());
        if self.lo == self.hi || slope.is_zero() {
            return f(&self.lo);
        }
        let mut b = self.clone();
        loop {
            let (fl, fh) = (f(&b.lo), f(&b.hi));
            if fl == fh && fl != Ordering::Equal {
                return fl;
            }
            b.halve();
        }
    }
}

/// `Q` of `x` along the wall, as `(slope, intercept)` in `β`, recovered by
/// sampling two interior points.
fn sampled_restriction(x: &ChernCharacter, center: &Rational, r2: &Rational) -> (Rational, Rational) {
    let point = |beta: Rational| {
        let d = &beta - center;
        let a2 = r2 - &d * &d;
        HalfPlanePoint::new(beta, a2).expect("interior point")
    };
    let step = if *r2 < qi(1) { r2 / qi(2) } else { q(1, 2) };
    let (b1, b2) = (center.clone(), center + &step);
    let (f1, f2) = (q_form(x, &point(b1.clone())), q_form(x, &point(b2.clone())));
    let slope = (&f2 - &f1) / (&b2 - &b1);
    let intercept = f1 - &slope * b1;
    (slope, intercept)
}

fn oracle_bmt(sub: &TruncatedCharacter, v: &ChernCharacter, wall: &WallLocus, e_window: i64) -> bool {
    let (center, r2) = wall.as_semicircle().expect("semicircle");
    let root = RootBracket::new(r2);
    // Q is affine in ch3, so two samples in e determine every restriction.
    let restriction = |e: Rational| {
        let a = sub.with_ch3(e);
        let b = v - &a;
        (sampled_restriction(&a, center, r2), sampled_restriction(&b, center, r2))
    };
    let (a0, b0) = restriction(Rational::zero());
    let (a1, b1) = restriction(qi(1));
    let at = |base: &(Rational, Rational), unit: &(Rational, Rational), e: &Rational| {
        (&base.0 + e * (&unit.0 - &base.0), &base.1 + e * (&unit.1 - &base.1))
    };
    let nonneg = |(s, t): (Rational, Rational)| {
        [-1, 1].iter().all(|side| root.sign(&s, &t, center, *side) != Ordering::Less)
    };
    // A(k/6) is integral iff k + 6·(ch2 + ch1/3) ≡ 0 mod 6; test the
    // residue on integers and confirm with the full lattice check.
    let shift = qi(6) * (&sub.ch2 + &sub.ch1 / qi(3));
    if !sub.is_integral() || !shift.is_integer() {
        return false;
    }
    let shift = shift.to_integer().to_i64().unwrap_or(0).rem_euclid(6);
    (-6 * e_window..=6 * e_window).filter(|k| (k + shift) % 6 == 0).any(|k| {
        let e = q(k, 6);
        let a = sub.with_ch3(e.clone());
        a.is_integral()
            && (v - &a).is_integral()
            && nonneg(at(&a0, &a1, &e))
            && nonneg(at(&b0, &b1, &e))
    })
}
