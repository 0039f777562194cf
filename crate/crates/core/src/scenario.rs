//! Scenario files: destabilizing pairs with their `Ext¹` data, the moduli
//! components built from them, and deterministic reports.
//!
//! `Ext` dimensions and base dimensions are input data. Loading checks what
//! can be checked from characters alone: each wall is recomputed from its
//! subobject, characters must add up, and full `Ext` tables must agree with
//! the Euler pairing.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chern::ChernCharacter;
use crate::diagram::{render_wall_diagram, DiagramWindow, Overlays};
use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::riemann_roch::{euler_pairing, ext_table_consistent, ExtTable};
use crate::tilt::{hyperbola_of, intersect_beta_line, numerical_wall, HalfPlanePoint, WallLocus};

/// The shipped scenario for `v = (1, 0, −5, 11)`.
pub const QUINTIC_G2: &str = include_str!("../scenarios/quintic_g2.toml");

/// Looks up a built-in scenario by name.
pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "quintic_g2" => Some(QUINTIC_G2),
        _ => None,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario at {location}: {message}")]
    Invalid { location: String, message: String },
}

fn invalid(location: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Invalid {
        location: location.into(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub character: ChernCharacter,
    pub beta_line: i64,
    #[serde(default)]
    pub walls: Vec<WallSpec>,
    #[serde(default)]
    pub components: Vec<ComponentSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagram: Option<DiagramSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallSpec {
    pub wall: WallLocus,
    #[serde(default)]
    pub pairs: Vec<PairSpec>,
}

/// A destabilizing pair `⟨sub, quot⟩` with `dim Ext¹(quot, sub)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairSpec {
    pub sub_label: String,
    pub quot_label: String,
    pub sub_ch: ChernCharacter,
    pub quot_ch: ChernCharacter,
    /// Generic value of `dim Ext¹(quot, sub)`.
    pub ext1_quot_sub: u64,
    /// Values of `dim Ext¹(quot, sub)` on special loci, selectable by
    /// components.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ext1_cases: Vec<Ext1Case>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub full_ext_tables: Vec<ExtTable>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ext1Case {
    pub label: String,
    pub ext1: u64,
    #[serde(default)]
    pub condition: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub name: String,
    /// Index into the pairs of all walls, in file order.
    pub pair_ref: usize,
    /// Label of an entry in the pair's `ext1_cases`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    pub base_label: String,
    pub base_dim: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_total_dim: Option<u64>,
    #[serde(default)]
    pub generic_description: String,
}

/// Optional diagram settings; rationals as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    /// `"beta_min,beta_max,alpha_max"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    /// Points `"beta,alpha_sq"` of a path to overlay.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<String>,
}

impl ScenarioConfig {
    /// All pairs in file order, with their wall.
    pub fn pairs(&self) -> impl Iterator<Item = (&WallLocus, &PairSpec)> {
        self.walls.iter().flat_map(|w| w.pairs.iter().map(move |p| (&w.wall, p)))
    }

    /// `Ext¹` value a component uses.
    pub fn component_ext1(&self, c: &ComponentSpec) -> Option<u64> {
        let (_, p) = self.pairs().nth(c.pair_ref)?;
        match &c.case {
            None => Some(p.ext1_quot_sub),
            Some(label) => p.ext1_cases.iter().find(|k| &k.label == label).map(|k| k.ext1),
        }
    }

    /// Runs every cross-check.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let v = &self.character;
        let gamma = hyperbola_of(v).ok();
        for (i, w) in self.walls.iter().enumerate() {
            let loc = format!("walls[{i}]");
            if w.pairs.is_empty() {
                return Err(invalid(&loc, "wall has no pairs to recompute it from"));
            }
            for (j, p) in w.pairs.iter().enumerate() {
                let loc = format!("walls[{i}].pairs[{j}]");
                if &(&p.sub_ch + &p.quot_ch) != v {
                    return Err(invalid(
                        &loc,
                        format!("sum mismatch: {} + {} != {}", p.sub_ch, p.quot_ch, v),
                    ));
                }
                let recomputed = numerical_wall(v, &p.sub_ch);
                if recomputed != w.wall {
                    return Err(invalid(
                        &loc,
                        format!("wall mismatch: recorded {}, recomputed {}", w.wall, recomputed),
                    ));
                }
                for (k, t) in p.full_ext_tables.iter().enumerate() {
                    let loc = format!("{loc}.full_ext_tables[{k}]");
                    let resolve = |label: &str| {
                        if label == p.sub_label {
                            Ok(&p.sub_ch)
                        } else if label == p.quot_label {
                            Ok(&p.quot_ch)
                        } else {
                            Err(invalid(&loc, format!("unknown label {label:?}")))
                        }
                    };
                    let (s, tg) = (resolve(&t.source_label)?, resolve(&t.target_label)?);
                    if !ext_table_consistent(t, s, tg) {
                        return Err(invalid(
                            &loc,
                            format!(
                                "ext table inconsistent: alternating sum {} != chi = {}",
                                t.alternating_sum(),
                                fmt_rational(&euler_pairing(s, tg))
                            ),
                        ));
                    }
                }
            }
            if let (Some(g), Ok((c, r2))) = (&gamma, w.wall.as_semicircle()) {
                let apex = HalfPlanePoint {
                    beta: c.clone(),
                    alpha_sq: r2.clone(),
                };
                if !g.contains(&apex) {
                    return Err(invalid(format!("walls[{i}]"), format!("apex of {} is not on the hyperbola of v", w.wall)));
                }
            }
        }
        let n_pairs = self.pairs().count();
        for (i, c) in self.components.iter().enumerate() {
            let loc = format!("components[{i}]");
            if c.pair_ref >= n_pairs {
                return Err(invalid(&loc, format!("pair_ref {} out of range", c.pair_ref)));
            }
            if self.component_ext1(c).is_none() {
                return Err(invalid(&loc, format!("unknown case {:?}", c.case.as_deref().unwrap_or(""))));
            }
        }
        if let Some(d) = &self.diagram {
            self.diagram_inputs_from(d).map_err(|m| invalid("diagram", m))?;
        }
        Ok(())
    }

    fn diagram_inputs_from(&self, d: &DiagramSpec) -> Result<(Option<DiagramWindow>, Vec<HalfPlanePoint>), String> {
        let window = d
            .window
            .as_deref()
            .map(|s| s.parse::<DiagramWindow>().map_err(|e| e.to_string()))
            .transpose()?;
        let path = d
            .path
            .iter()
            .map(|s| {
                let parts: Vec<&str> = s.split(',').collect();
                if parts.len() != 2 {
                    return Err(format!("path point {s:?} is not \"beta,alpha_sq\""));
                }
                let b = parse_rational(parts[0]).map_err(|e| e.to_string())?;
                let a = parse_rational(parts[1]).map_err(|e| e.to_string())?;
                HalfPlanePoint::new(b, a).map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((window, path))
    }
}

fn toml_location(text: &str, err: &toml::de::Error) -> (usize, usize) {
    match err.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        }
        None => (0, 0),
    }
}

/// Parses and validates a TOML scenario.
pub fn load_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = toml_location(text, &e);
        ScenarioError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reloads the scenario embedded in a JSON report.
pub fn load_scenario_from_report(json: &str) -> Result<ScenarioConfig, ScenarioError> {
    #[derive(Deserialize)]
    struct Envelope {
        scenario: ScenarioConfig,
    }
    let env: Envelope = serde_json::from_str(json).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    env.scenario.validate()?;
    Ok(env.scenario)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDimension {
    pub name: String,
    pub ext1: u64,
    /// `ext1 − 1`; `None` when the extension space is zero.
    pub fiber_dim: Option<u64>,
    pub base_dim: u64,
    pub total: Option<u64>,
    pub expected_total_dim: Option<u64>,
    /// `Some(false)` when an expected total is given and differs.
    pub matches_expected: Option<bool>,
}

/// `fiber = ext1 − 1` (projectivized extensions), `total = fiber + base`.
pub fn component_dimensions(cfg: &ScenarioConfig) -> Vec<ComponentDimension> {
    cfg.components
        .iter()
        .map(|c| {
            let ext1 = cfg.component_ext1(c).unwrap_or(0);
            let fiber = ext1.checked_sub(1);
            let total = fiber.map(|f| f + c.base_dim);
            ComponentDimension {
                name: c.name.clone(),
                ext1,
                fiber_dim: fiber,
                base_dim: c.base_dim,
                total,
                expected_total_dim: c.expected_total_dim,
                matches_expected: c.expected_total_dim.map(|e| total == Some(e)),
            }
        })
        .collect()
}

/// Report rendering options.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReportOptions {
    /// Replace non-ASCII characters in labels.
    pub ascii: bool,
}

/// The rendered report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub markdown: String,
    pub json: String,
}

/// Best-effort ASCII rendering of labels such as `𝒦₄(2,2)` or `M₃″`.
pub fn ascii_label(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        let rep: &str = match ch {
            c if c.is_ascii() => {
                out.push(c);
                continue;
            }
            '₀' => "0",
            '₁' => "1",
            '₂' => "2",
            '₃' => "3",
            '₄' => "4",
            '₅' => "5",
            '²' => "2",
            '³' => "3",
            '′' => "'",
            '″' => "''",
            '‴' => "'''",
            '𝒦' => "K",
            '𝔉' => "F",
            '𝒰' => "U",
            '∨' => "v",
            '×' => "x",
            '⊂' => "<",
            '−' => "-",
            '⟨' => "<",
            '⟩' => ">",
            '→' => "->",
            'ℓ' => "l",
            'ℙ' => "P",
            _ => "?",
        };
        out.push_str(rep);
    }
    out
}

#[derive(Serialize)]
struct WallRow {
    wall: WallLocus,
    notation: String,
    #[serde(with = "crate::rational::serde_str_opt")]
    alpha_sq_on_beta_line: Option<Rational>,
    pairs: usize,
}

#[derive(Serialize)]
struct PairRow {
    wall: String,
    sub_label: String,
    quot_label: String,
    sub_ch: ChernCharacter,
    quot_ch: ChernCharacter,
    ext1_quot_sub: u64,
    #[serde(with = "crate::rational::serde_str")]
    chi_quot_sub: Rational,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    scenario: &'a ScenarioConfig,
    tilt_walls: Vec<WallRow>,
    pairs: Vec<PairRow>,
    components: Vec<ComponentDimension>,
}

fn opt_num(x: Option<u64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// Markdown and JSON reports. Output depends only on `cfg` and `opts`.
pub fn emit_report(cfg: &ScenarioConfig, opts: ReportOptions) -> Report {
    let label = |s: &str| if opts.ascii { ascii_label(s) } else { s.to_string() };
    let beta = Rational::from_integer(cfg.beta_line.into());
    let walls: Vec<WallRow> = cfg
        .walls
        .iter()
        .map(|w| WallRow {
            wall: w.wall.clone(),
            notation: w.wall.to_string(),
            alpha_sq_on_beta_line: intersect_beta_line(&w.wall, &beta),
            pairs: w.pairs.len(),
        })
        .collect();
    let pairs: Vec<PairRow> = cfg
        .pairs()
        .map(|(w, p)| PairRow {
            wall: w.to_string(),
            sub_label: label(&p.sub_label),
            quot_label: label(&p.quot_label),
            sub_ch: p.sub_ch.clone(),
            quot_ch: p.quot_ch.clone(),
            ext1_quot_sub: p.ext1_quot_sub,
            chi_quot_sub: euler_pairing(&p.quot_ch, &p.sub_ch),
        })
        .collect();
    let comps = component_dimensions(cfg);

    let mut md = String::new();
    let _ = writeln!(md, "# Scenario {}\n", label(&cfg.name));
    if !cfg.description.is_empty() {
        let _ = writeln!(md, "{}\n", label(cfg.description.trim()));
    }
    let _ = writeln!(md, "Character: ({})  ", cfg.character);
    let _ = writeln!(md, "Beta line: {}\n", cfg.beta_line);

    let _ = writeln!(md, "## Tilt walls\n");
    let _ = writeln!(md, "| # | wall | center | radius^2 | alpha^2 at beta line | pairs |");
    let _ = writeln!(md, "|---|------|--------|----------|----------------------|-------|");
    for (i, w) in walls.iter().enumerate() {
        let (c, r2) = match &w.wall {
            WallLocus::Semicircle { center, radius_sq } => (fmt_rational(center), fmt_rational(radius_sq)),
            _ => ("-".into(), "-".into()),
        };
        let a2 = w.alpha_sq_on_beta_line.as_ref().map_or("-".into(), fmt_rational);
        let _ = writeln!(md, "| {} | {} | {} | {} | {} | {} |", i + 1, w.notation, c, r2, a2, w.pairs);
    }

    let _ = writeln!(md, "\n## Destabilizing pairs\n");
    let _ = writeln!(md, "| # | wall | sub | ch(sub) | quotient | ch(quotient) | ext1(quot, sub) | chi(quot, sub) |");
    let _ = writeln!(md, "|---|------|-----|---------|----------|--------------|-----------------|----------------|");
    for (i, p) in pairs.iter().enumerate() {
        let _ = writeln!(
            md,
            "| {} | {} | {} | ({}) | {} | ({}) | {} | {} |",
            i,
            p.wall,
            p.sub_label,
            p.sub_ch,
            p.quot_label,
            p.quot_ch,
            p.ext1_quot_sub,
            fmt_rational(&p.chi_quot_sub)
        );
    }

    let _ = writeln!(md, "\n## Components\n");
    let _ = writeln!(md, "| name | pair | ext1 | fiber | base | base dim | total | expected | check |");
    let _ = writeln!(md, "|------|------|------|-------|------|----------|-------|----------|-------|");
    for (c, d) in cfg.components.iter().zip(&comps) {
        let check = match d.matches_expected {
            Some(true) => "ok",
            Some(false) => "MISMATCH",
            None if d.total.is_none() => "empty",
            None => "-",
        };
        let pair = match &c.case {
            Some(k) => format!("{} ({})", c.pair_ref, label(k)),
            None => c.pair_ref.to_string(),
        };
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            label(&d.name),
            pair,
            d.ext1,
            opt_num(d.fiber_dim),
            label(&c.base_label),
            d.base_dim,
            opt_num(d.total),
            opt_num(d.expected_total_dim),
            check
        );
    }

    let json = serde_json::to_string_pretty(&JsonReport {
        scenario: cfg,
        tilt_walls: walls,
        pairs,
        components: comps,
    })
    .expect("report serializes");
    Report { markdown: md, json }
}

/// Wall diagram of the scenario: its walls, the BMT null locus of its
/// character and the optional path.
pub fn scenario_diagram(cfg: &ScenarioConfig) -> Result<String, crate::error::WallError> {
    let (window, path) = match &cfg.diagram {
        Some(d) => cfg
            .diagram_inputs_from(d)
            .expect("validated at load"),
        None => (None, Vec::new()),
    };
    let walls: Vec<WallLocus> = cfg.walls.iter().map(|w| w.wall.clone()).collect();
    let window = window.unwrap_or_else(|| DiagramWindow::around(&walls));
    let overlays = Overlays {
        walls,
        bmt: true,
        path,
    };
    render_wall_diagram(&cfg.character, &window, &overlays)
}
