//! Exact wall-and-chamber computations for tilt and Bridgeland stability on
//! projective 3-space.
//!
//! Chern characters are [`chern::ChernCharacter`] values with exact rational
//! components. [`tilt`] describes numerical walls in the `(β, α)` half plane,
//! [`bmt`] adds the third Chern character through the BMT form, and
//! [`wall_finder`] enumerates the candidate walls of a class along a vertical
//! line. [`riemann_roch`] provides Euler characteristics and the Euler
//! pairing, and [`scenario`] checks sheaf-theoretic input against all of
//! the above.
//!
//! ```
//! use p3walls::chern::ChernCharacter;
//! use p3walls::wall_finder::{find_candidate_walls, FinderOptions};
//!
//! let v: ChernCharacter = "1,0,-5,11".parse().unwrap();
//! let report = find_candidate_walls(&v, -3, &FinderOptions::default()).unwrap();
//! assert_eq!(report.walls.len(), 3);
//! ```
//!
//! The guide in `book/` walks through each module. Its snippets run as
//! doc-tests of this crate.

pub mod bmt;
pub mod chern;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod rational;
pub mod riemann_roch;
pub mod scenario;
pub mod tilt;
pub mod wall_finder;

// mdBook cannot run snippets against this crate, so each chapter is pulled in
// as a module doc and run by `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/characters.md")]
    mod characters {}
    #[doc = include_str!("../../../book/src/tilt.md")]
    mod tilt {}
    #[doc = include_str!("../../../book/src/bmt.md")]
    mod bmt {}
    #[doc = include_str!("../../../book/src/wall_finder.md")]
    mod wall_finder {}
    #[doc = include_str!("../../../book/src/riemann_roch.md")]
    mod riemann_roch {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/diagrams.md")]
    mod diagrams {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
