//! SVG wall diagrams in the `(β, α)` half plane.
//!
//! Geometry comes from exact data; only the final screen coordinates are
//! computed in floating point and printed with six decimals.

use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};

use crate::bmt::q_null_locus;
use crate::chern::ChernCharacter;
use crate::error::{ParseError, WallError};
use crate::rational::{ceil_int, floor_int, fmt_rational, parse_rational_list, qi, Rational};
use crate::tilt::{hyperbola_of, HalfPlanePoint, Hyperbola, WallLocus};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 50.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 40.0;
const SAMPLES: usize = 400;

/// Visible region: `beta_min ≤ β ≤ beta_max`, `0 ≤ α ≤ alpha_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramWindow {
    pub beta_min: Rational,
    pub beta_max: Rational,
    pub alpha_max: Rational,
}

impl DiagramWindow {
    pub fn new(beta_min: Rational, beta_max: Rational, alpha_max: Rational) -> Result<Self, WallError> {
        if beta_min >= beta_max || !alpha_max.is_positive() {
            return Err(WallError::DegenerateWindow(format!(
                "{},{},{}",
                fmt_rational(&beta_min),
                fmt_rational(&beta_max),
                fmt_rational(&alpha_max)
            )));
        }
        Ok(DiagramWindow {
            beta_min,
            beta_max,
            alpha_max,
        })
    }

    /// Integer window holding every semicircle, with one spare unit on the
    /// left and above. Falls back to `[-1, 1] × [0, 1]`.
    pub fn around(walls: &[WallLocus]) -> Self {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        let mut top = qi(0);
        for w in walls {
            if let Ok((c, r2)) = w.as_semicircle() {
                // integer upper bound on the radius
                let r = Rational::from_integer(ceil_int(r2).sqrt() + 1);
                let (a, b) = (c - &r, c + &r);
                lo = Some(lo.map_or(a.clone(), |x| x.min(a)));
                hi = Some(hi.map_or(b.clone(), |x| x.max(b)));
                top = top.max(r);
            }
        }
        match (lo, hi) {
            (Some(lo), Some(hi)) => DiagramWindow {
                beta_min: Rational::from_integer(floor_int(&lo)) - qi(1),
                beta_max: Rational::from_integer(ceil_int(&hi)),
                alpha_max: top + qi(1),
            },
            _ => DiagramWindow {
                beta_min: qi(-1),
                beta_max: qi(1),
                alpha_max: qi(1),
            },
        }
    }
}

impl FromStr for DiagramWindow {
    type Err = WallError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let xs = parse_rational_list(s).map_err(|e: ParseError| WallError::DegenerateWindow(e.to_string()))?;
        if xs.len() != 3 {
            return Err(WallError::DegenerateWindow(format!(
                "expected beta_min,beta_max,alpha_max, got {s:?}"
            )));
        }
        let [a, b, c]: [Rational; 3] = xs.try_into().expect("length checked");
        DiagramWindow::new(a, b, c)
    }
}

/// What to draw on top of the axis and the hyperbola.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Overlays {
    pub walls: Vec<WallLocus>,
    /// Draw the null locus of the BMT form as a dashed arc.
    pub bmt: bool,
    /// A path through the half plane, as `(β, α²)` points.
    pub path: Vec<HalfPlanePoint>,
}

fn f(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

struct Map {
    b0: f64,
    sx: f64,
    sy: f64,
}

impl Map {
    fn x(&self, beta: f64) -> f64 {
        LEFT + (beta - self.b0) * self.sx
    }

    fn y(&self, alpha: f64) -> f64 {
        HEIGHT - BOTTOM - alpha * self.sy
    }
}

/// Renders `v`'s hyperbola, the β-axis and the overlays as a standalone SVG
/// document with an `800×500` viewport. Semicircles entirely outside the
/// window are omitted.
pub fn render_wall_diagram(v: &ChernCharacter, window: &DiagramWindow, overlays: &Overlays) -> Result<String, WallError> {
    let window = DiagramWindow::new(
        window.beta_min.clone(),
        window.beta_max.clone(),
        window.alpha_max.clone(),
    )?;
    let (b0, b1, amax) = (f(&window.beta_min), f(&window.beta_max), f(&window.alpha_max));
    let m = Map {
        b0,
        sx: (WIDTH - LEFT - RIGHT) / (b1 - b0),
        sy: (HEIGHT - TOP - BOTTOM) / amax,
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="500" viewBox="0 0 800 500">"#
    );
    let _ = writeln!(
        svg,
        "<!-- map: x = {} + (beta - ({})) * {}, y = {} - alpha * {}; window beta in [{}, {}], alpha in [0, {}] -->",
        num(LEFT),
        fmt_rational(&window.beta_min),
        num(m.sx),
        num(HEIGHT - BOTTOM),
        num(m.sy),
        fmt_rational(&window.beta_min),
        fmt_rational(&window.beta_max),
        fmt_rational(&window.alpha_max)
    );
    let _ = writeln!(
        svg,
        r#"<defs><clipPath id="plot"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#,
        num(LEFT),
        num(TOP),
        num(WIDTH - LEFT - RIGHT),
        num(HEIGHT - TOP - BOTTOM)
    );
    let _ = writeln!(svg, r#"<rect width="800" height="500" fill="white"/>"#);

    // β-axis with integer ticks
    let _ = writeln!(
        svg,
        r#"<line class="axis" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        num(m.x(b0)),
        num(m.y(0.0)),
        num(m.x(b1)),
        num(m.y(0.0))
    );
    let mut t = ceil_int(&window.beta_min);
    let t_end = floor_int(&window.beta_max);
    while t <= t_end {
        let x = m.x(t.to_f64().unwrap_or(0.0));
        let _ = writeln!(
            svg,
            r#"<line class="tick" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/><text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
            num(x),
            num(m.y(0.0)),
            num(x),
            num(m.y(0.0) + 5.0),
            num(x),
            num(m.y(0.0) + 18.0),
            t
        );
        t += 1;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="12">beta</text>"#,
        num(WIDTH - RIGHT - 30.0),
        num(HEIGHT - 5.0)
    );

    let _ = writeln!(svg, r#"<g clip-path="url(#plot)">"#);
    if let Ok(h) = hyperbola_of(v) {
        for line in hyperbola_polylines(&h, &window, &m) {
            let _ = writeln!(
                svg,
                r#"<polyline class="hyperbola" fill="none" stroke="black" stroke-width="1.5" points="{line}"/>"#
            );
        }
    }
    if overlays.bmt {
        if let Some(d) = arc(&q_null_locus(v), &window, &m) {
            let _ = writeln!(
                svg,
                r#"<path class="bmt" d="{d}" fill="none" stroke="gray" stroke-dasharray="6 4"/>"#
            );
        }
    }
    for w in &overlays.walls {
        if let Some(d) = arc(w, &window, &m) {
            let _ = writeln!(
                svg,
                r#"<path class="wall" d="{d}" fill="none" stroke="steelblue" stroke-width="1.5"><title>{w}</title></path>"#
            );
        }
    }
    if overlays.path.len() >= 2 {
        let pts: Vec<String> = overlays
            .path
            .iter()
            .map(|p| format!("{},{}", num(m.x(f(&p.beta))), num(m.y(f(&p.alpha_sq).sqrt()))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="path" fill="none" stroke="firebrick" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Semicircle as an SVG elliptical arc, or `None` if it misses the window.
fn arc(w: &WallLocus, win: &DiagramWindow, m: &Map) -> Option<String> {
    let (c, r2) = w.as_semicircle().ok()?;
    // Exact visibility test: the diameter [c − r, c + r] meets the window.
    let left_gap = &win.beta_min - c;
    let right_gap = c - &win.beta_max;
    let outside = |gap: &Rational| gap.is_positive() && gap * gap >= *r2;
    if outside(&left_gap) || outside(&right_gap) {
        return None;
    }
    let (cf, r) = (f(c), f(r2).sqrt());
    Some(format!(
        "M {} {} A {} {} 0 0 1 {} {}",
        num(m.x(cf - r)),
        num(m.y(0.0)),
        num(r * m.sx),
        num(r * m.sy),
        num(m.x(cf + r)),
        num(m.y(0.0))
    ))
}

fn hyperbola_polylines(h: &Hyperbola, win: &DiagramWindow, m: &Map) -> Vec<String> {
    let (b0, b1, amax) = (f(&win.beta_min), f(&win.beta_max), f(&win.alpha_max));
    match h {
        Hyperbola::VerticalLine { beta } => {
            if *beta < win.beta_min || *beta > win.beta_max {
                return Vec::new();
            }
            let x = m.x(f(beta));
            vec![format!("{},{} {},{}", num(x), num(m.y(0.0)), num(x), num(m.y(amax)))]
        }
        Hyperbola::Branch { .. } => {
            let (c, rhs) = h.normal_form().expect("branch");
            let (c, rhs) = (f(&c), f(&rhs));
            let mut runs: Vec<Vec<(f64, f64)>> = Vec::new();
            let mut cur: Vec<(f64, f64)> = Vec::new();
            for i in 0..=SAMPLES {
                let beta = b0 + (b1 - b0) * (i as f64) / (SAMPLES as f64);
                let a2 = (beta - c) * (beta - c) - rhs;
                if a2 > 0.0 && a2.sqrt() <= amax {
                    cur.push((beta, a2.sqrt()));
                } else if !cur.is_empty() {
                    runs.push(std::mem::take(&mut cur));
                }
            }
            if !cur.is_empty() {
                runs.push(cur);
            }
            runs.into_iter()
                .filter(|r| r.len() >= 2)
                .map(|r| {
                    r.iter()
                        .map(|(b, a)| format!("{},{}", num(m.x(*b)), num(m.y(*a))))
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn v() -> ChernCharacter {
        "1,0,-5,11".parse().unwrap()
    }

    fn walls() -> Vec<WallLocus> {
        vec![
            WallLocus::semicircle(q(-7, 2), q(9, 4)),
            WallLocus::semicircle(q(-9, 2), q(41, 4)),
            WallLocus::semicircle(q(-11, 2), q(81, 4)),
        ]
    }

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!("class=\"{class}\"")).count()
    }

    #[test]
    fn quintic_diagram_elements() {
        let win: DiagramWindow = "-12,0,6".parse().unwrap();
        let o = Overlays {
            walls: walls(),
            bmt: true,
            path: Vec::new(),
        };
        let svg = render_wall_diagram(&v(), &win, &o).unwrap();
        assert_eq!(count(&svg, "wall"), 3);
        assert_eq!(count(&svg, "bmt"), 1);
        assert_eq!(count(&svg, "hyperbola"), 1);
        assert!(svg.contains("<!-- map:"));
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg, render_wall_diagram(&v(), &win, &o).unwrap());
    }

    #[test]
    fn bare_diagram_and_offscreen_walls() {
        let win: DiagramWindow = "-12,0,6".parse().unwrap();
        let svg = render_wall_diagram(&v(), &win, &Overlays::default()).unwrap();
        assert_eq!(count(&svg, "wall") + count(&svg, "bmt") + count(&svg, "path"), 0);
        assert_eq!(count(&svg, "hyperbola"), 1);
        let far = Overlays {
            walls: vec![WallLocus::semicircle(qi(20), qi(4))],
            ..Overlays::default()
        };
        let svg = render_wall_diagram(&v(), &win, &far).unwrap();
        assert_eq!(count(&svg, "wall"), 0);
    }

    #[test]
    fn path_overlay() {
        let win: DiagramWindow = "-12,0,6".parse().unwrap();
        let o = Overlays {
            path: vec![
                HalfPlanePoint::new(qi(-7), qi(30)).unwrap(),
                HalfPlanePoint::new(qi(-4), q(1, 100)).unwrap(),
            ],
            ..Overlays::default()
        };
        let svg = render_wall_diagram(&v(), &win, &o).unwrap();
        assert_eq!(count(&svg, "path"), 1);
    }

    #[test]
    fn degenerate_windows_rejected() {
        assert!("0,0,1".parse::<DiagramWindow>().is_err());
        assert!("0,1,0".parse::<DiagramWindow>().is_err());
        assert!("0,1".parse::<DiagramWindow>().is_err());
    }

    #[test]
    fn default_window_covers_walls() {
        let w = DiagramWindow::around(&walls());
        assert_eq!(w, DiagramWindow::new(qi(-12), qi(0), qi(6)).unwrap());
    }
}
