//! Exact cops-and-robbers engine for generalised Petersen graphs.
//!
//! `GP(n, k)` is the cubic graph on outer vertices `a_0..a_{n-1}` and inner
//! vertices `b_0..b_{n-1}` with outer-cycle edges `{a_i, a_{i+1}}`, spokes
//! `{a_i, b_i}` and inner-step edges `{b_i, b_{i+k}}`, indices mod `n`.
//!
//! The crate has four pillars:
//!
//! * [`graph`]: construction, distances, girth, the `n = 7k/i` family test,
//!   distance-4 neighbourhood trees and the dihedral automorphisms;
//! * [`game`]: game states, legal moves, capture and the trapped predicate;
//! * [`strategy`]: the constructive robber side, with case classification,
//!   safe-move selection, the initial placement rule and the verification
//!   sweeps backing them;
//! * [`solver`]: exact retrograde analysis of the c-cop game with ranked
//!   state encoding, dihedral symmetry reduction and bit-packed win tables.

pub mod game;
pub mod graph;
pub mod solver;
pub mod strategy;

pub use game::{GameState, Side};
pub use graph::{FamilyParams, GPGraph, Ring, Vertex};
pub use solver::{SolveOptions, Symmetry, WinTable};

/// Crate-wide error type. Variants mirror the failure modes of the public
/// operations; the CLI maps them onto process exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid graph or game parameters.
    #[error("invalid parameters: {0}")]
    Param(String),
    /// The operation requires a graph from the `n = 7k/i` family.
    #[error(
        "GP({n},{k}) is not in the n=7k/i family (need n >= 42 or one of (28,8),(35,10),(35,15))"
    )]
    Family { n: u32, k: u32 },
    /// The wrong side is to move for this operation.
    #[error("wrong side to move: expected {expected:?}")]
    Turn { expected: Side },
    /// A non-trapped state classified as Case 3. That contradicts the
    /// structure the safe-move rule relies on, so it is surfaced rather
    /// than patched.
    #[error("no safe move: state classified Case 3 but not trapped: {0}")]
    Strategy(String),
    /// The robber is trapped; no safe move exists.
    #[error("robber is trapped; no safe move exists")]
    Trapped,
    /// The state space exceeds the configured memory budget.
    #[error("state space needs ~{required} bytes, budget is {budget}")]
    Budget { required: u64, budget: u64 },
    /// No cop count up to the allowed maximum wins the placement game.
    #[error("no cop count <= {max} wins the placement game")]
    ExceedsMax { max: u32 },
    /// Cache file I/O failure.
    #[error("table cache: {0}")]
    Io(#[from] std::io::Error),
    /// Cache file malformed or mismatched.
    #[error("table cache format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
