//! Helpers shared by the integration suites.
#![allow(dead_code)]

use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use p3walls::chern::ChernCharacter;
use p3walls::rational::{q, qi, Rational};
use p3walls::wall_finder::CandidateWall;

/// Character with Chern classes `(r, c1, c2, c3)`, computed from the
/// Newton identities rather than from the library. Classes of coherent
/// sheaves on P³ also satisfy `c3 ≡ c1·c2 (mod 2)`; see [`from_classes`].
pub fn from_chern_classes(r: i64, c1: i64, c2: i64, c3: i64) -> ChernCharacter {
    ChernCharacter::new(
        qi(r),
        qi(c1),
        q(c1 * c1 - 2 * c2, 2),
        q(c1 * c1 * c1 - 3 * c1 * c2 + 3 * c3, 6),
    )
}

/// Character with Chern classes `(r, c1, c2, c1·c2 + 2k)`, always in the
/// image of the Grothendieck group.
pub fn from_classes(r: i64, c1: i64, c2: i64, k: i64) -> ChernCharacter {
    from_chern_classes(r, c1, c2, c1 * c2 + 2 * k)
}

/// Random integral character with small entries.
pub fn random_integral(rng: &mut ChaCha8Rng) -> ChernCharacter {
    from_classes(
        rng.gen_range(-4..=4),
        rng.gen_range(-6..=6),
        rng.gen_range(-8..=8),
        rng.gen_range(-5..=5),
    )
}

/// Random integral character with `0 ≤ Δ ≤ 50` and an integer `β₀` with
/// `ch1^β₀ > 0`.
pub fn random_finder_input(rng: &mut ChaCha8Rng) -> (ChernCharacter, i64) {
    loop {
        let r = rng.gen_range(0..=3);
        let c1 = rng.gen_range(-4..=4);
        let c2 = rng.gen_range(-6..=10);
        let k = rng.gen_range(-6..=6);
        let v = from_classes(r, c1, c2, k);
        let delta = v.discriminant();
        if delta < qi(0) || delta > qi(50) {
            continue;
        }
        let beta0 = if r == 0 {
            if c1 <= 0 {
                continue;
            }
            rng.gen_range(-3..=3)
        } else {
            // largest integer strictly below μ = c1/r, minus a random step
            let mu = q(c1, r);
            let below = (mu - q(1, 1_000_000)).floor().to_integer().to_i64().unwrap();
            below - rng.gen_range(0..=2)
        };
        return (v, beta0);
    }
}

/// The walls of `main` whose subobject, twisted by `β₀`, has coordinates
/// `(a, b, c/2)` with `|a|, |b|, |c| ≤ bound`.
pub fn restrict_to_box(main: &[CandidateWall], beta0: i64, bound: i64) -> Vec<CandidateWall> {
    let beta = qi(beta0);
    let lim = Rational::from_integer(bound.into());
    main.iter()
        .filter_map(|w| {
            let pairs: Vec<_> = w
                .pairs
                .iter()
                .filter(|p| {
                    let t = p.sub.twist(&beta);
                    let c = &t.ch2 * qi(2);
                    [t.ch0, t.ch1, c].iter().all(|x| x.abs() <= lim)
                })
                .cloned()
                .collect();
            (!pairs.is_empty()).then(|| CandidateWall {
                wall: w.wall.clone(),
                pairs,
            })
        })
        .collect()
}
