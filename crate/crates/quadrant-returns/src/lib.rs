//! Exact finite-`n` joint laws of axis-return counts for nearest-neighbour
//! random walks in the quarter plane, together with their limit
//! distributions and tooling to compare the two.
//!
//! A walk starts at the origin and at each step moves east, west, north or
//! south with probabilities `p1, q1, p2, q2` (all strictly positive, summing
//! to one). Two statistics are tracked over the first `n` steps:
//!
//! * `N¹_n` — the number of *strict returns* of the horizontal coordinate to
//!   zero (steps `k` with `S¹_k = 0` and `S¹_{k−1} ≠ 0`), i.e. landings on
//!   the vertical axis;
//! * `N²_n` — the same for the vertical coordinate.
//!
//! The joint law of `(N¹_n, N²_n)` is computed under four conditionings:
//! unconditioned, bridge (`S_n = 0`), meander (the walk stays in the
//! quadrant), and non-negative bridge (both at once). Projecting each axis
//! onto the steps that move it yields two one-dimensional walks that are
//! independent *given* the number of horizontal steps, which is
//! binomially distributed; every two-dimensional law here is assembled from
//! one-dimensional tables through that binomial mixture.
//!
//! As `n → ∞` the pair converges (after rescaling where appropriate) to
//! explicit limits: half-normal and Rayleigh laws for driftless axes,
//! geometric laws under drift, a negative binomial law for the non-negative
//! bridge, and — for the meander with two inward-drifting axes — a
//! two-component mixture whose coordinates are *not* independent. The
//! [`limits`] module evaluates these laws, [`stats`] measures
//! total-variation and Kolmogorov–Smirnov distances between finite-`n` and
//! limit laws, [`oracle`] re-derives small-`n` laws by brute-force path
//! enumeration, and [`sampler`] estimates them by seeded Monte Carlo.
//!
//! # Numeric backends
//!
//! Every engine is generic over [`numeric::Scalar`], instantiated at
//! `num::BigRational` (exact arithmetic, the default for small `n`) and
//! `f64` (log-free double precision for large `n`). Exact results are
//! *exact*: rational tables sum to one with no rounding, and the test suite
//! compares them cell-by-cell against an independent enumeration oracle.
//!
//! # Quick start
//!
//! ```
//! use quadrant_returns::walk::{Conditioning, StepDistribution};
//! use quadrant_returns::shuffle::{joint_law, Mode};
//! use num::BigRational;
//!
//! let walk = StepDistribution::symmetric();
//! let law = joint_law::<BigRational>(4, &walk, Conditioning::Meander, Mode::Exact)?;
//! // P(N¹ = r1, N² = r2, walk stays in the quadrant), exactly.
//! for ((r1, r2), mass) in law.mass() {
//!     println!("({r1}, {r2}) -> {mass}");
//! }
//! # Ok::<(), quadrant_returns::Error>(())
//! ```

pub mod cli;
pub mod limits;
pub mod numeric;
pub mod one_dim;
pub mod oracle;
pub mod sampler;
pub mod shuffle;
pub mod stats;
pub mod thresholds;
pub mod walk;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A step probability was zero or negative.
    #[error("step probability {label} must be strictly positive, got {value}")]
    NonPositiveProbability { label: &'static str, value: String },

    /// The four step probabilities do not sum to one.
    #[error("step probabilities must sum to 1, got {sum}")]
    SumNotOne { sum: String },

    /// An endpoint is unreachable in the given number of steps
    /// (wrong parity or out of range).
    #[error("endpoint {x} is unreachable in {n} steps (parity or range mismatch)")]
    ParityMismatch { n: usize, x: i64 },

    /// An operation that is only defined for even lengths was called with an
    /// odd one.
    #[error("length {n} must be even for {what}")]
    OddLength { n: usize, what: &'static str },

    /// A conditioning event has probability zero at this length
    /// (e.g. a bridge at odd `n`).
    #[error("{conditioning} has zero probability at n = {n}: {reason}")]
    ImpossibleConditioning {
        conditioning: &'static str,
        n: usize,
        reason: &'static str,
    },

    /// The summation window does not contain the binomial mean fraction.
    #[error("window [{lo}, {hi}] must contain the mean fraction {h}")]
    WindowViolation { lo: f64, hi: f64, h: f64 },

    /// Brute-force enumeration was asked for a length past its hard cap.
    #[error("brute-force enumeration is capped at n = {cap}, requested n = {n}")]
    CapTooLarge { n: usize, cap: usize },

    /// The exact backend was asked for a length past its configured bound.
    #[error("exact backend is capped at n = {cap}, requested n = {n}; use the float backend")]
    CapacityExceeded { n: usize, cap: usize },

    /// A probability mass function was evaluated at zero but its support
    /// starts at one.
    #[error("law has no mass at zero (support starts at 1)")]
    ZeroUnsupported,

    /// A distribution function on `[0, ∞)` was evaluated at a negative point.
    #[error("{what} is only defined for x ≥ 0, got {value}")]
    NegativeArgument { what: &'static str, value: f64 },

    /// Any other invalid argument, with context.
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    /// Underlying I/O failure (CLI file output).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
