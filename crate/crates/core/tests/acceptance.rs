//! Acceptance suite for the class `v = (1, 0, −5, 11)`: one PASS/FAIL line
//! per criterion, non-zero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use p3walls::bmt::{ch3_admissible, ch3_interval, q_null_locus, q_on_wall, Ch3Interval, SignReport};
use p3walls::chern::{ChernCharacter, TruncatedCharacter};
use p3walls::cli::run_with;
use p3walls::rational::{q, qi, Rational};
use p3walls::riemann_roch::{euler_pairing, fat_point_h0, ideal_points_h0};
use p3walls::scenario::{component_dimensions, load_scenario, QUINTIC_G2};
use p3walls::tilt::{apex, hyperbola_of, wall_interior, Position, WallLocus};
use p3walls::wall_finder::{brute_force_oracle, find_candidate_walls, FinderOptions, OracleBox};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn v() -> ChernCharacter {
    "1,0,-5,11".parse().unwrap()
}

fn t(s: &str) -> TruncatedCharacter {
    s.parse().unwrap()
}

fn cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("p3walls").chain(args.iter().copied());
    match run_with(argv, false, &mut out, &mut err) {
        0 => Ok(String::from_utf8(out).unwrap()),
        code => Err(format!("exit {code}: {}", String::from_utf8_lossy(&err))),
    }
}

fn semicircle(c: Rational, r2: Rational) -> WallLocus {
    WallLocus::semicircle(c, r2)
}

/// The three walls crossing `β = −3`, with their subobjects.
fn wall_list() -> Check {
    let out = cli(&["walls", "--v", "1,0,-5,11", "--beta", "-3", "--json"])?;
    let json: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let report: p3walls::wall_finder::FinderReport = serde_json::from_value(json).map_err(|e| e.to_string())?;
    let mut got: Vec<(WallLocus, Vec<TruncatedCharacter>)> = report
        .walls
        .iter()
        .map(|w| {
            let mut subs: Vec<_> = w.pairs.iter().map(|p| p.sub.clone()).collect();
            subs.sort();
            (w.wall.clone(), subs)
        })
        .collect();
    got.sort_by_key(|a| a.0.notation());
    let mut want = vec![
        (semicircle(q(-7, 2), q(9, 4)), vec![t("1,-2,2"), t("1,-1,-3/2")]),
        (semicircle(q(-9, 2), q(41, 4)), vec![t("1,-1,-1/2")]),
        (semicircle(q(-11, 2), q(81, 4)), vec![t("1,-1,1/2")]),
    ];
    for w in &mut want {
        w.1.sort();
    }
    want.sort_by_key(|a| a.0.notation());
    ensure(got == want, || format!("got {got:?}"))
}

/// `Q`-null locus is `W(−33/10, √(89/100))`, strictly inside the first wall.
fn bmt_semicircle() -> Check {
    let locus = q_null_locus(&v());
    ensure(locus == semicircle(q(-33, 10), q(89, 100)), || format!("locus {locus}"))?;
    let wall = semicircle(q(-7, 2), q(9, 4));
    let (c1, r1) = locus.as_semicircle().unwrap();
    let (c2, r2) = wall.as_semicircle().unwrap();
    // strict containment: |c1 − c2| < r2 − r1, i.e. (r2 − r1)² > (c1 − c2)²
    // with r1 < r2; squared once more to clear the radicals
    let dc2 = (c1 - c2) * (c1 - c2);
    let s = r1 + r2 - &dc2;
    let strict = r1 < r2 && s.is_positive() && &s * &s > qi(4) * r1 * r2;
    ensure(strict, || "BMT semicircle not strictly inside W(-7/2, 3/2)".into())?;
    ensure(wall_interior(&wall, &apex(&locus).unwrap()) == Position::Inside, || {
        "apex of BMT semicircle not inside".into()
    })
}

fn euler_pairing_of_v() -> Check {
    let x = euler_pairing(&v(), &v());
    ensure(x == qi(-19), || format!("chi(v, v) = {x}"))
}

/// Admissible `ch3` lists contain the values realized by actual objects.
fn ch3_containment() -> Check {
    let cases: [(&str, WallLocus, Vec<Rational>); 3] = [
        ("1,-2,2", semicircle(q(-7, 2), q(9, 4)), vec![q(-4, 3)]),
        ("1,-1,-1/2", semicircle(q(-9, 2), q(41, 4)), vec![q(5, 6), q(11, 6)]),
        (
            "1,-1,1/2",
            semicircle(q(-11, 2), q(81, 4)),
            [-1, -7, -13, -19, -25].iter().map(|&n| q(n, 6)).collect(),
        ),
    ];
    for (sub, wall, want) in &cases {
        let got = ch3_admissible(&t(sub), &v(), wall).map_err(|e| e.to_string())?;
        ensure(want.iter().all(|e| got.contains(e)), || format!("{sub}: {got:?} misses {want:?}"))?;
    }
    match ch3_interval(&t("1,-2,2"), &v(), &cases[0].1).map_err(|e| e.to_string())? {
        Ch3Interval::Bounded { lower, .. } => ensure(lower.cmp_rational(&qi(-2)).is_ge(), || format!("lower bound {lower}")),
        Ch3Interval::Infeasible => Err("wall 1 infeasible".into()),
    }
}

/// `(2, −4, 3, 1/3)` fails BMT along `W(−13/4, 3/4)`.
fn bmt_exclusion() -> Check {
    let x: ChernCharacter = "2,-4,3,1/3".parse().unwrap();
    let r = q_on_wall(&x, &semicircle(q(-13, 4), q(9, 16))).map_err(|e| e.to_string())?;
    let got = (&r.slope, &r.intercept, &r.beta_min, &r.beta_max, r.sign);
    let want = (&qi(1), &qi(2), &qi(-4), &q(-5, 2), SignReport::NegativeEverywhere);
    ensure(got == want, || format!("got {got:?}"))
}

fn component_dimensions_match() -> Check {
    let cfg = load_scenario(QUINTIC_G2).map_err(|e| e.to_string())?;
    let dims = component_dimensions(&cfg);
    let ext1: Vec<u64> = dims.iter().map(|d| d.ext1).collect();
    let base: Vec<u64> = dims.iter().map(|d| d.base_dim).collect();
    let total: Vec<Option<u64>> = dims.iter().map(|d| d.total).collect();
    ensure(ext1 == [12, 13, 15, 14, 15, 17], || format!("ext1 {ext1:?}"))?;
    ensure(base == [9, 9, 7, 8, 6, 11], || format!("base {base:?}"))?;
    ensure(total == [20, 21, 21, 21, 20, 27].map(Some), || format!("totals {total:?}"))?;
    ensure(dims.iter().all(|d| d.matches_expected == Some(true)), || "expected totals differ".into())
}

fn chi_consistency() -> Check {
    let b: ChernCharacter = "0,2,-7,37/3".parse().unwrap();
    let o = ChernCharacter::line_bundle(-2);
    let (x, y) = (euler_pairing(&b, &o), euler_pairing(&o, &b));
    ensure(x == qi(-12) && y == qi(0), || format!("chi(B, O(-2)) = {x}, chi(O(-2), B) = {y}"))
}

fn appendix_formulas() -> Check {
    let got = (ideal_points_h0(4, 5), ideal_points_h0(1, 4), fat_point_h0(4));
    ensure(got == (Ok(17), Ok(14), Ok((14, 12))), || format!("got {got:?}"))
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // twist action and discriminant invariance
    for _ in 0..100 {
        let x = common::random_integral(&mut rng);
        let a = q(rand::Rng::gen_range(&mut rng, -20..=20), rand::Rng::gen_range(&mut rng, 1..=5));
        let b = q(rand::Rng::gen_range(&mut rng, -20..=20), rand::Rng::gen_range(&mut rng, 1..=5));
        ensure(x.twist(&a).twist(&b) == x.twist(&(&a + &b)), || format!("twist action fails on {x}"))?;
        ensure(x.twist(&a).discriminant() == x.discriminant(), || format!("discriminant not invariant on {x}"))?;
    }
    // Serre duality χ(v, w) = −χ(w, v ⊗ ω), ω = O(−4)
    let omega = ChernCharacter::line_bundle(-4);
    for _ in 0..100 {
        let (x, y) = (common::random_integral(&mut rng), common::random_integral(&mut rng));
        ensure(euler_pairing(&x, &y) == -euler_pairing(&y, &x.mul(&omega)), || format!("Serre fails on {x}, {y}"))?;
    }
    // apex on the hyperbola, and oracle equivalence on a 41³ box
    let mut inputs = vec![(v(), -3)];
    for _ in 0..10 {
        inputs.push(common::random_finder_input(&mut rng));
    }
    // |ch3| ≤ 64 is far wider than any BMT interval for these small
    // characters; a feasible value outside it would surface as a mismatch.
    let bx = OracleBox { e_window: 64, ..OracleBox::default() };
    let mut pairs_seen = 0;
    for (x, beta0) in &inputs {
        let main = find_candidate_walls(x, *beta0, &FinderOptions::default()).map_err(|e| format!("{x}: {e}"))?;
        if !x.ch0.is_zero() {
            let h = hyperbola_of(x).map_err(|e| e.to_string())?;
            for w in &main.walls {
                ensure(h.contains(&apex(&w.wall).unwrap()), || format!("apex of {} off hyperbola of {x}", w.wall))?;
            }
        }
        let restricted = common::restrict_to_box(&main.walls, *beta0, bx.bound);
        let oracle = brute_force_oracle(x, *beta0, &bx);
        ensure(restricted == oracle, || format!("oracle differs for {x} at beta {beta0}"))?;
        pairs_seen += oracle.iter().map(|w| w.pairs.len()).sum::<usize>();
    }
    ensure(pairs_seen > 4, || format!("only {pairs_seen} pairs compared"))
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("p3walls-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let run = |tag: &str| -> Result<Vec<Vec<u8>>, String> {
        let paths = ["md", "json", "svg"].map(|ext| dir.join(format!("{tag}.{ext}")));
        let [md, js, svg] = paths.each_ref().map(|p| p.to_str().unwrap().to_string());
        cli(&["scenario", "run", "quintic_g2", "--out", &md, "--json", &js, "--svg", &svg])?;
        paths.iter().map(|p| std::fs::read(p).map_err(|e| e.to_string())).collect()
    };
    let (a, b) = (run("first")?, run("second")?);
    let _ = std::fs::remove_dir_all(&dir);
    ensure(a == b, || "reports differ between runs".into())?;
    ensure(a.iter().all(|x| !x.is_empty()), || "empty report".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("wall list for v = (1,0,-5,11) at beta = -3", wall_list),
        ("BMT semicircle W(-33/10, sqrt(89/100)) inside the first wall", bmt_semicircle),
        ("euler_pairing(v, v) = -19", euler_pairing_of_v),
        ("ch3 containment on walls 1-3", ch3_containment),
        ("BMT exclusion of (2,-4,3,1/3)", bmt_exclusion),
        ("component dimensions 6/6", component_dimensions_match),
        ("chi-consistency of the B / O(-2) tables", chi_consistency),
        ("h0 formulas for points in the plane", appendix_formulas),
        ("property suites", property_suites),
        ("deterministic scenario reports", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let ms = start.elapsed().as_millis();
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
