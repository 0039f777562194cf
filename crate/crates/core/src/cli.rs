//! The `p3walls` command line.
//!
//! Exit codes: `0` on success, `1` on domain errors (the error name is
//! printed on stderr), `2` on usage errors. Output is deterministic. Set
//! `P3WALLS_ASCII` to a non-empty value other than `0` to force ASCII labels.

use std::ffi::OsString;
use std::fmt::Debug;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use crate::bmt::{ch3_admissible, ch3_interval, q_coefficients, q_form, q_null_locus, q_on_wall, Ch3Interval};
use crate::chern::{ChernCharacter, TruncatedCharacter};
use crate::diagram::{render_wall_diagram, DiagramWindow, Overlays};
use crate::rational::{fmt_rational, parse_rational, parse_rational_list, Rational};
use crate::riemann_roch::{bott_h, chi, euler_pairing};
use crate::scenario::{builtin, emit_report, load_scenario, scenario_diagram, ReportOptions};
use crate::tilt::{hyperbola_of, numerical_wall, HalfPlanePoint, WallLocus};
use crate::wall_finder::{find_candidate_walls_parallel, FinderOptions, FinderReport, FinderWarning};

/// Environment variable forcing ASCII output.
pub const ASCII_ENV: &str = "P3WALLS_ASCII";

#[derive(Debug, Parser)]
#[command(name = "p3walls", version, about = "Walls for tilt and Bridgeland stability on P3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Candidate tilt walls of v crossing the vertical line beta = BETA.
    Walls(WallsArgs),
    /// Numerical wall where v and w have equal tilt slope.
    WallBetween(WallBetweenArgs),
    /// Null locus of the BMT form of v.
    BmtNull(CharArgs),
    /// BMT form of v at a point or along a semicircular wall.
    Q(QArgs),
    /// Admissible ch3 values of a subobject along a wall.
    Ch3(Ch3Args),
    /// Euler characteristic chi(v) or pairing chi(v, w).
    Chi(ChiArgs),
    /// Cohomology of O(d) on P^n.
    Bott(BottArgs),
    /// Hyperbola where the tilt slope of v vanishes.
    Hyperbola(CharArgs),
    /// Scenario reports.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
    /// SVG wall diagram.
    Diagram(DiagramArgs),
}

#[derive(Debug, Args)]
struct WallsArgs {
    /// Chern character "c0,c1,c2,c3".
    #[arg(long, value_parser = parse_char)]
    v: ChernCharacter,
    /// Integer beta of the vertical line.
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    /// Largest subobject rank examined.
    #[arg(long, default_value_t = 64)]
    amax: u64,
    /// Attach admissible ch3 values.
    #[arg(long)]
    ch3: bool,
    /// Keep pairs that admit no ch3 compatible with BMT.
    #[arg(long)]
    no_bmt_filter: bool,
    /// Worker threads for the enumeration.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct WallBetweenArgs {
    /// Character "c0,c1,c2[,c3]".
    #[arg(long, value_parser = parse_truncated)]
    v: TruncatedCharacter,
    /// Character "c0,c1,c2[,c3]".
    #[arg(long, value_parser = parse_truncated)]
    w: TruncatedCharacter,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CharArgs {
    #[arg(long, value_parser = parse_char)]
    v: ChernCharacter,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("where").required(true).args(["wall", "point"]))]
struct QArgs {
    #[arg(long, value_parser = parse_char)]
    v: ChernCharacter,
    /// Semicircle "center,radius_sq".
    #[arg(long, value_parser = parse_wall, allow_hyphen_values = true)]
    wall: Option<WallLocus>,
    /// Point "beta,alpha_sq".
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Option<HalfPlanePoint>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct Ch3Args {
    /// Total character "c0,c1,c2,c3".
    #[arg(long, value_parser = parse_char)]
    v: ChernCharacter,
    /// Truncated subobject character "c0,c1,c2".
    #[arg(long, value_parser = parse_truncated)]
    sub: TruncatedCharacter,
    /// Semicircle "center,radius_sq".
    #[arg(long, value_parser = parse_wall, allow_hyphen_values = true)]
    wall: WallLocus,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ChiArgs {
    #[arg(long, value_parser = parse_char)]
    v: ChernCharacter,
    #[arg(long, value_parser = parse_char)]
    w: Option<ChernCharacter>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct BottArgs {
    #[arg(long, default_value_t = 3)]
    n: u32,
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum ScenarioCommand {
    /// Validate a scenario and emit its report.
    Run(ScenarioRunArgs),
}

#[derive(Debug, Args)]
struct ScenarioRunArgs {
    /// Scenario file, or the name of a built-in scenario.
    source: String,
    /// Write the markdown report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the JSON report, to PATH or to stdout.
    #[arg(long, num_args = 0..=1, value_name = "PATH")]
    json: Option<Option<PathBuf>>,
    /// Write the wall diagram here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DiagramArgs {
    #[arg(long, value_parser = parse_char)]
    v: ChernCharacter,
    /// "beta_min,beta_max,alpha_max"; defaults to a window around the walls.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Overlay the candidate walls crossing this integer beta.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Omit the BMT null locus.
    #[arg(long)]
    no_bmt: bool,
    /// Write the SVG here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn parse_char(s: &str) -> Result<ChernCharacter, String> {
    s.parse().map_err(|e: crate::error::ParseError| e.to_string())
}

fn parse_truncated(s: &str) -> Result<TruncatedCharacter, String> {
    let xs = parse_rational_list(s).map_err(|e| e.to_string())?;
    match xs.len() {
        3 | 4 => {
            let mut it = xs.into_iter();
            let mut next = || it.next().expect("length checked");
            Ok(TruncatedCharacter::new(next(), next(), next()))
        }
        n => Err(format!("expected 3 or 4 components, got {n}")),
    }
}

fn parse_pair(s: &str) -> Result<(Rational, Rational), String> {
    let xs = parse_rational_list(s).map_err(|e| e.to_string())?;
    let [a, b]: [Rational; 2] = xs.try_into().map_err(|v: Vec<_>| format!("expected 2 components, got {}", v.len()))?;
    Ok((a, b))
}

fn parse_wall(s: &str) -> Result<WallLocus, String> {
    let (c, r2) = parse_pair(s)?;
    Ok(WallLocus::semicircle(c, r2))
}

fn parse_point(s: &str) -> Result<HalfPlanePoint, String> {
    let (b, a2) = parse_pair(s)?;
    HalfPlanePoint::new(b, a2).map_err(|e| e.to_string())
}

/// Failure of a subcommand.
#[derive(Debug)]
enum Failure {
    /// Exit 2.
    Usage(String),
    /// Exit 1, with the error's name.
    Domain { name: String, message: String },
}

impl Failure {
    fn domain<E: Debug + std::fmt::Display>(e: E) -> Self {
        let dbg = format!("{e:?}");
        let name: String = dbg.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
        Failure::Domain {
            name,
            message: e.to_string(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Domain {
            name: "Io".into(),
            message: format!("{}: {e}", path.display()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Whether the environment asks for ASCII output.
pub fn ascii_from_env() -> bool {
    std::env::var_os(ASCII_ENV).is_some_and(|v| !v.is_empty() && v != "0")
}

/// Runs one invocation; returns the exit code. Reads `P3WALLS_ASCII`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, ascii_from_env(), out, err)
}

/// Like [`run`], with the ASCII setting passed explicitly.
pub fn run_with<I, T>(args: I, ascii: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let result = match cli.command {
        Command::Walls(a) => walls(a, out),
        Command::WallBetween(a) => wall_between(a, out),
        Command::BmtNull(a) => bmt_null(a, out),
        Command::Q(a) => q_cmd(a, out),
        Command::Ch3(a) => ch3_cmd(a, out),
        Command::Chi(a) => chi_cmd(a, out),
        Command::Bott(a) => bott(a, out),
        Command::Hyperbola(a) => hyperbola(a, out),
        Command::Scenario(ScenarioCommand::Run(a)) => scenario_run(a, ascii, out),
        Command::Diagram(a) => diagram(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Domain { name, message }) => {
            let _ = writeln!(err, "error: {name}: {message}");
            1
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::io(Path::new("<stdout>"), e))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    emit(out, &s)
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn integer_beta(s: &str) -> Result<i64, Failure> {
    let b = parse_rational(s).map_err(|e| Failure::Usage(format!("invalid beta: {e}")))?;
    if !b.is_integer() {
        return Err(Failure::Usage(format!("beta must be an integer, got {s}")));
    }
    b.to_integer()
        .try_into()
        .map_err(|_| Failure::Usage(format!("beta out of range: {s}")))
}

fn run_finder(v: &ChernCharacter, beta: i64, opts: FinderOptions, threads: usize) -> Result<FinderReport, Failure> {
    find_candidate_walls_parallel(v, beta, &opts, threads.max(1)).map_err(Failure::domain)
}

fn walls(a: WallsArgs, out: &mut dyn Write) -> Outcome {
    let beta = integer_beta(&a.beta)?;
    let opts = FinderOptions {
        a_max: a.amax,
        want_ch3: a.ch3,
        bmt_filter: !a.no_bmt_filter,
    };
    let report = run_finder(&a.v, beta, opts, a.threads)?;
    if a.json {
        return emit_json(out, &report);
    }
    let mut s = format!("v = ({}), beta = {}\n", report.character, report.beta0);
    s += &format!("{} candidate wall(s)\n", report.walls.len());
    for w in &report.walls {
        s += &format!("\n{}\n", w.wall);
        for p in &w.pairs {
            s += &format!(
                "  sub ({})  quot ({})  alpha^2 = {}",
                p.sub,
                p.quot,
                fmt_rational(&p.alpha_sq)
            );
            if a.ch3 {
                let e: Vec<String> = p.ch3_candidates.iter().map(fmt_rational).collect();
                s += &format!("  ch3 in {{{}}}", e.join(", "));
            }
            if !p.filters.bmt_wall {
                s += "  [fails BMT]";
            }
            s.push('\n');
        }
    }
    for w in &report.warnings {
        s += &match w {
            FinderWarning::RankCap { b, required, a_max } => {
                format!("warning: rank cap {a_max} hit at b = {b} (bound {required})\n")
            }
            FinderWarning::UnboundedCh3 { sub } => format!("warning: ch3 unbounded for sub ({sub})\n"),
        };
    }
    emit(out, &s)
}

fn wall_between(a: WallBetweenArgs, out: &mut dyn Write) -> Outcome {
    let w = numerical_wall(&a.v, &a.w);
    if a.json {
        return emit_json(out, &json!({ "wall": w, "notation": w.to_string() }));
    }
    emit(out, &format!("{w}\n"))
}

fn bmt_null(a: CharArgs, out: &mut dyn Write) -> Outcome {
    let locus = q_null_locus(&a.v);
    let delta = a.v.discriminant();
    if a.json {
        let c = q_coefficients(&a.v);
        return emit_json(
            out,
            &json!({
                "locus": locus,
                "notation": locus.to_string(),
                "discriminant": fmt_rational(&delta),
                "linear": fmt_rational(&c.linear),
                "constant": fmt_rational(&c.constant),
            }),
        );
    }
    emit(out, &format!("{locus}\n"))
}

fn q_cmd(a: QArgs, out: &mut dyn Write) -> Outcome {
    if let Some(p) = a.point {
        let value = q_form(&a.v, &p);
        if a.json {
            return emit_json(out, &json!({ "value": fmt_rational(&value) }));
        }
        return emit(out, &format!("{}\n", fmt_rational(&value)));
    }
    let w = a.wall.expect("group requires wall or point");
    let r = q_on_wall(&a.v, &w).map_err(Failure::domain)?;
    if a.json {
        return emit_json(out, &r);
    }
    emit(
        out,
        &format!(
            "Q = {}*beta + {} on [{}, {}]{}: {}\n",
            fmt_rational(&r.slope),
            fmt_rational(&r.intercept),
            fmt_rational(&r.beta_min),
            fmt_rational(&r.beta_max),
            if r.endpoints_exact { "" } else { " (bracketed)" },
            r.sign
        ),
    )
}

fn ch3_cmd(a: Ch3Args, out: &mut dyn Write) -> Outcome {
    let interval = ch3_interval(&a.sub, &a.v, &a.wall).map_err(Failure::domain)?;
    let values = ch3_admissible(&a.sub, &a.v, &a.wall).map_err(Failure::domain)?;
    let vals: Vec<String> = values.iter().map(fmt_rational).collect();
    let (lower, upper) = match &interval {
        Ch3Interval::Bounded { lower, upper } => (Some(lower.to_string()), Some(upper.to_string())),
        Ch3Interval::Infeasible => (None, None),
    };
    if a.json {
        return emit_json(
            out,
            &json!({
                "feasible": lower.is_some(),
                "lower": lower,
                "upper": upper,
                "values": vals,
            }),
        );
    }
    let head = match (lower, upper) {
        (Some(l), Some(u)) => format!("{l} <= ch3 <= {u}"),
        _ => "infeasible".to_string(),
    };
    emit(out, &format!("{head}\nintegral: {{{}}}\n", vals.join(", ")))
}

fn chi_cmd(a: ChiArgs, out: &mut dyn Write) -> Outcome {
    let value = match &a.w {
        Some(w) => euler_pairing(&a.v, w),
        None => chi(&a.v),
    };
    if a.json {
        return emit_json(out, &json!({ "chi": fmt_rational(&value) }));
    }
    emit(out, &format!("{}\n", fmt_rational(&value)))
}

fn bott(a: BottArgs, out: &mut dyn Write) -> Outcome {
    let h: Vec<BigInt> = (0..=a.n)
        .map(|i| bott_h(a.n, a.d, i))
        .collect::<Result<_, _>>()
        .map_err(Failure::domain)?;
    if a.json {
        let hs: Vec<String> = h.iter().map(ToString::to_string).collect();
        return emit_json(out, &json!({ "n": a.n, "d": a.d, "h": hs }));
    }
    let s: String = h
        .iter()
        .enumerate()
        .map(|(i, x)| format!("h^{i}(P^{}, O({})) = {x}\n", a.n, a.d))
        .collect();
    emit(out, &s)
}

fn hyperbola(a: CharArgs, out: &mut dyn Write) -> Outcome {
    let h = hyperbola_of(&a.v).map_err(Failure::domain)?;
    if a.json {
        return emit_json(out, &json!({ "hyperbola": h, "notation": h.to_string() }));
    }
    emit(out, &format!("{h}\n"))
}

fn scenario_run(a: ScenarioRunArgs, ascii: bool, out: &mut dyn Write) -> Outcome {
    let text = match builtin(&a.source) {
        Some(t) if !Path::new(&a.source).exists() => t.to_string(),
        _ => fs::read_to_string(&a.source).map_err(|e| Failure::io(Path::new(&a.source), e))?,
    };
    let cfg = load_scenario(&text).map_err(Failure::domain)?;
    let report = emit_report(&cfg, ReportOptions { ascii });
    if let Some(svg_path) = &a.svg {
        let svg = scenario_diagram(&cfg).map_err(Failure::domain)?;
        write_file(svg_path, &svg)?;
    }
    let json_to_stdout = matches!(a.json, Some(None));
    if let Some(Some(p)) = &a.json {
        write_file(p, &format!("{}\n", report.json))?;
    }
    match &a.out {
        Some(p) => write_file(p, &report.markdown)?,
        None if !json_to_stdout => emit(out, &report.markdown)?,
        None => {}
    }
    if json_to_stdout {
        emit(out, &format!("{}\n", report.json))?;
    }
    Ok(())
}

fn diagram(a: DiagramArgs, out: &mut dyn Write) -> Outcome {
    let walls: Vec<WallLocus> = match &a.beta {
        Some(b) => {
            let beta = integer_beta(b)?;
            run_finder(&a.v, beta, FinderOptions::default(), 1)?
                .walls
                .into_iter()
                .map(|w| w.wall)
                .collect()
        }
        None => Vec::new(),
    };
    let window = match &a.window {
        Some(s) => s
            .parse::<DiagramWindow>()
            .map_err(|e| Failure::Usage(format!("invalid window: {e}")))?,
        None => DiagramWindow::around(&walls),
    };
    let overlays = Overlays {
        walls,
        bmt: !a.no_bmt,
        path: Vec::new(),
    };
    let svg = render_wall_diagram(&a.v, &window, &overlays).map_err(Failure::domain)?;
    match (&a.out, a.json) {
        (Some(p), json) => {
            write_file(p, &svg)?;
            if json {
                emit_json(out, &json!({ "out": p.display().to_string(), "bytes": svg.len() }))?;
            }
            Ok(())
        }
        (None, true) => emit_json(out, &json!({ "svg": svg })),
        (None, false) => emit(out, &svg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("p3walls").chain(args.iter().copied());
        let code = run_with(argv, false, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn chi_of_v_with_itself() {
        let (code, out, _) = call(&["chi", "--v", "1,0,-5,11", "--w", "1,0,-5,11"]);
        assert_eq!((code, out.as_str()), (0, "-19\n"));
    }

    #[test]
    fn fractional_beta_is_usage_error() {
        let (code, _, err) = call(&["walls", "--v", "1,0,-5,11", "--beta", "1/2"]);
        assert_eq!(code, 2);
        assert!(err.contains("beta must be an integer"), "{err}");
    }

    #[test]
    fn non_integral_character_is_domain_error() {
        let (code, _, err) = call(&["walls", "--v", "1,0,1/2,0", "--beta", "0"]);
        assert_eq!(code, 1);
        assert!(err.contains("NonIntegral"), "{err}");
    }

    #[test]
    fn unknown_flag_rejected() {
        let (code, _, _) = call(&["chi", "--v", "1,0,0,0", "--bogus"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn bott_output() {
        let (code, out, _) = call(&["bott", "--n", "3", "--d", "-4", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["h"], json!(["0", "0", "0", "1"]));
    }
}
