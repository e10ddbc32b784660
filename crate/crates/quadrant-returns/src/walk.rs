//! Step distributions of quarter-plane walks, the conditionings under which
//! their return counts are studied, and exponential tilting.
//!
//! A [`StepDistribution`] holds the four step probabilities
//! `(p1, q1, p2, q2)` — east, west, north, south — as exact rationals.
//! Derived quantities:
//!
//! * `h1 = p1 + q1`, `h2 = p2 + q2` — the probabilities of moving
//!   horizontally resp. vertically;
//! * the *extracted* one-dimensional walks: conditioned on the set of steps
//!   that move an axis, that axis performs a simple walk with up-probability
//!   `p̃1 = p1/h1` (resp. `p̃2 = p2/h2`);
//! * per-axis drift classes, compared exactly.
//!
//! [`tilt_factor`] implements the exponential change of measure that maps a
//! drifted simple walk onto the symmetric one while pinning the endpoint:
//! for every path event `A`,
//!
//! ```text
//! P_p(A, S_n = x) = (4pq)^{n/2} (p/q)^{x/2} · P_{1/2}(A, S_n = x).
//! ```
//!
//! The factor is the probability ratio of a single path with `(n+x)/2` up
//! steps, so the identity holds exactly — the tests verify it against full
//! path enumeration. Conditioning on a fixed endpoint therefore erases the
//! drift, which is why bridge-type conditional laws do not depend on `p`.

use num::rational::BigRational;
use num::{One, Signed};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::numeric::{big_rational_to_f64, parse_rational, rational_from_f64};
use crate::{Error, Result};

/// Tolerance for `|p1+q1+p2+q2 − 1|` when constructing from floats.
pub const FLOAT_SUM_TOLERANCE: f64 = 1e-12;

/// Below this difference, a float-constructed axis is snapped to zero drift.
pub const FLOAT_DRIFT_EPSILON: f64 = 1e-15;

/// One of the two coordinate axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Sign of `p − q` for an extracted axis walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DriftClass {
    /// `p < q`: the axis drifts towards the boundary (inward).
    Negative,
    /// `p = q`: driftless.
    Zero,
    /// `p > q`: the axis drifts away from the boundary.
    Positive,
}

impl fmt::Display for DriftClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DriftClass::Negative => write!(f, "negative"),
            DriftClass::Zero => write!(f, "zero"),
            DriftClass::Positive => write!(f, "positive"),
        }
    }
}

/// The conditioning applied to the first `n` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conditioning {
    /// No conditioning.
    Unconditioned,
    /// `S_n = 0` (both coordinates return to the origin at time `n`).
    Bridge,
    /// The walk stays in the quadrant: `S_k ∈ ℕ²` for all `k ≤ n`.
    Meander,
    /// Both: stays in the quadrant and ends at the origin.
    NonNegativeBridge,
}

impl Conditioning {
    pub const ALL: [Conditioning; 4] = [
        Conditioning::Unconditioned,
        Conditioning::Bridge,
        Conditioning::Meander,
        Conditioning::NonNegativeBridge,
    ];

    /// Does the event constrain the endpoint to the origin?
    pub fn pins_endpoint(self) -> bool {
        matches!(self, Conditioning::Bridge | Conditioning::NonNegativeBridge)
    }

    /// Does the event require the walk to stay in the quadrant?
    pub fn requires_survival(self) -> bool {
        matches!(self, Conditioning::Meander | Conditioning::NonNegativeBridge)
    }

    /// Endpoint-pinned events are impossible at odd `n`.
    pub fn check_length(self, n: usize) -> Result<()> {
        if self.pins_endpoint() && n % 2 == 1 {
            return Err(Error::ImpossibleConditioning {
                conditioning: self.name(),
                n,
                reason: "the walk cannot be back at the origin after an odd number of steps",
            });
        }
        Ok(())
    }

    pub fn name(self) -> &'static str {
        match self {
            Conditioning::Unconditioned => "unconditioned",
            Conditioning::Bridge => "bridge",
            Conditioning::Meander => "meander",
            Conditioning::NonNegativeBridge => "non-negative-bridge",
        }
    }
}

impl fmt::Display for Conditioning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for Conditioning {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "unconditioned" | "none" | "free" => Ok(Conditioning::Unconditioned),
            "bridge" => Ok(Conditioning::Bridge),
            "meander" => Ok(Conditioning::Meander),
            "non-negative-bridge" | "nonnegative-bridge" | "excursion" | "nnb" => {
                Ok(Conditioning::NonNegativeBridge)
            }
            other => Err(Error::Invalid {
                what: "conditioning",
                detail: format!(
                    "{other:?} (expected unconditioned | bridge | meander | non-negative-bridge)"
                ),
            }),
        }
    }
}

/// Parity of a walk length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

impl FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::Invalid {
                what: "parity",
                detail: format!("{other:?} (expected even | odd)"),
            }),
        }
    }
}

/// An extracted one-dimensional walk: the law of one coordinate along the
/// steps that move it.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisWalk {
    /// Probability that a step of the full walk moves this axis.
    pub h: BigRational,
    /// Up-step probability of the extracted simple walk (`p_i / h_i`).
    pub p: BigRational,
}

impl AxisWalk {
    pub fn h_f64(&self) -> f64 {
        big_rational_to_f64(&self.h)
    }
    pub fn p_f64(&self) -> f64 {
        big_rational_to_f64(&self.p)
    }
    pub fn q(&self) -> BigRational {
        BigRational::one() - &self.p
    }
    pub fn q_f64(&self) -> f64 {
        1.0 - self.p_f64()
    }
    /// Drift class of the extracted walk, decided exactly.
    pub fn drift(&self) -> DriftClass {
        let half = BigRational::new(1.into(), 2.into());
        match self.p.cmp(&half) {
            Ordering::Less => DriftClass::Negative,
            Ordering::Equal => DriftClass::Zero,
            Ordering::Greater => DriftClass::Positive,
        }
    }
    /// `|p − q|` of the extracted walk (the geometric parameter of the
    /// unconditioned limit when the drift is non-zero).
    pub fn abs_drift_f64(&self) -> f64 {
        (2.0 * self.p_f64() - 1.0).abs()
    }
}

/// Validated step distribution of a quarter-plane walk.
///
/// Probabilities are stored as exact rationals regardless of how they were
/// supplied, so the exact backend is always available and drift classes are
/// decided by exact comparison. Construction from floats first checks
/// `|sum − 1| ≤ 1e-12`, snaps `|p_i − q_i| ≤ 1e-15` to equality, then
/// normalizes by the exact sum.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDistribution {
    p1: BigRational,
    q1: BigRational,
    p2: BigRational,
    q2: BigRational,
}

impl StepDistribution {
    /// Build from exact rationals; the sum must be exactly one.
    pub fn from_rationals(
        p1: BigRational,
        q1: BigRational,
        p2: BigRational,
        q2: BigRational,
    ) -> Result<Self> {
        for (label, value) in [("p1", &p1), ("q1", &q1), ("p2", &p2), ("q2", &q2)] {
            if !value.is_positive() {
                return Err(Error::NonPositiveProbability {
                    label,
                    value: value.to_string(),
                });
            }
        }
        let sum = &p1 + &q1 + &p2 + &q2;
        if !sum.is_one() {
            return Err(Error::SumNotOne {
                sum: sum.to_string(),
            });
        }
        Ok(Self { p1, q1, p2, q2 })
    }

    /// Build from strings, each a decimal or a fraction (`"0.25"`, `"1/4"`).
    pub fn from_strs(p1: &str, q1: &str, p2: &str, q2: &str) -> Result<Self> {
        Self::from_rationals(
            parse_rational(p1)?,
            parse_rational(q1)?,
            parse_rational(p2)?,
            parse_rational(q2)?,
        )
    }

    /// Parse a comma-separated list `"p1,q1,p2,q2"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Invalid {
                what: "walk",
                detail: format!("expected 4 comma-separated probabilities, got {}", parts.len()),
            });
        }
        Self::from_strs(parts[0], parts[1], parts[2], parts[3])
    }

    /// Build from floats with tolerance `1e-12` on the sum; the values are
    /// then normalized by their exact (dyadic) sum so the stored rationals
    /// sum to exactly one.
    pub fn from_f64s(p1: f64, q1: f64, p2: f64, q2: f64) -> Result<Self> {
        for (label, value) in [("p1", p1), ("q1", q1), ("p2", p2), ("q2", q2)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::NonPositiveProbability {
                    label,
                    value: value.to_string(),
                });
            }
        }
        let sum = p1 + q1 + p2 + q2;
        if (sum - 1.0).abs() > FLOAT_SUM_TOLERANCE {
            return Err(Error::SumNotOne {
                sum: sum.to_string(),
            });
        }
        // Snap near-equal axis pairs so float noise cannot silently turn a
        // driftless axis into a (mis-classified) drifted one.
        let (p1, q1) = snap_pair(p1, q1);
        let (p2, q2) = snap_pair(p2, q2);
        let exact = [
            rational_from_f64(p1)?,
            rational_from_f64(q1)?,
            rational_from_f64(p2)?,
            rational_from_f64(q2)?,
        ];
        let total: BigRational = exact.iter().cloned().sum();
        let [p1, q1, p2, q2] = exact;
        Self::from_rationals(p1 / &total, q1 / &total, p2 / &total, q2 / &total)
    }

    /// The symmetric walk `(1/4, 1/4, 1/4, 1/4)`.
    pub fn symmetric() -> Self {
        let quarter = BigRational::new(1.into(), 4.into());
        Self {
            p1: quarter.clone(),
            q1: quarter.clone(),
            p2: quarter.clone(),
            q2: quarter,
        }
    }

    pub fn p1(&self) -> &BigRational {
        &self.p1
    }
    pub fn q1(&self) -> &BigRational {
        &self.q1
    }
    pub fn p2(&self) -> &BigRational {
        &self.p2
    }
    pub fn q2(&self) -> &BigRational {
        &self.q2
    }

    /// Step probabilities as floats, in `(east, west, north, south)` order.
    pub fn probs_f64(&self) -> [f64; 4] {
        [
            big_rational_to_f64(&self.p1),
            big_rational_to_f64(&self.q1),
            big_rational_to_f64(&self.p2),
            big_rational_to_f64(&self.q2),
        ]
    }

    /// `h1 = p1 + q1`.
    pub fn h1(&self) -> BigRational {
        &self.p1 + &self.q1
    }

    /// `h2 = p2 + q2`.
    pub fn h2(&self) -> BigRational {
        &self.p2 + &self.q2
    }

    /// Extracted one-dimensional walk of an axis.
    pub fn axis(&self, axis: Axis) -> AxisWalk {
        match axis {
            Axis::Horizontal => AxisWalk {
                h: self.h1(),
                p: &self.p1 / self.h1(),
            },
            Axis::Vertical => AxisWalk {
                h: self.h2(),
                p: &self.p2 / self.h2(),
            },
        }
    }

    /// Both extracted walks, horizontal first.
    pub fn axes(&self) -> (AxisWalk, AxisWalk) {
        (self.axis(Axis::Horizontal), self.axis(Axis::Vertical))
    }

    /// The walk with axes swapped (east↔north, west↔south).
    pub fn swap_axes(&self) -> Self {
        Self {
            p1: self.p2.clone(),
            q1: self.q2.clone(),
            p2: self.p1.clone(),
            q2: self.q1.clone(),
        }
    }

    /// Compact display used in provenance output.
    pub fn describe(&self) -> String {
        format!("{},{},{},{}", self.p1, self.q1, self.p2, self.q2)
    }
}

fn snap_pair(p: f64, q: f64) -> (f64, f64) {
    if (p - q).abs() <= FLOAT_DRIFT_EPSILON {
        let mid = 0.5 * (p + q);
        (mid, mid)
    } else {
        (p, q)
    }
}

/// Parameters of the exponential tilt that symmetrizes a one-dimensional
/// walk with up-probability `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltParams {
    /// `ρ = √(4pq)` — the per-step mass factor at the tilt point (equals 1
    /// iff the walk is already symmetric).
    pub rho: f64,
    /// `t0 = ln(q/p) / 2` — the tilt that makes the step law symmetric.
    pub tilt_point: f64,
    /// Whether the walk was already symmetric.
    pub symmetric: bool,
}

impl TiltParams {
    pub fn for_up_probability(p: f64) -> Self {
        let q = 1.0 - p;
        TiltParams {
            rho: (4.0 * p * q).sqrt(),
            tilt_point: 0.5 * (q / p).ln(),
            symmetric: p == q,
        }
    }
}

/// Multiplicative factor relating a drifted walk to the symmetric one at a
/// pinned endpoint: for any event `A` of the first `n` steps,
/// `P_p(A, S_n = x) = tilt_factor(p, n, x) · P_{1/2}(A, S_n = x)`.
///
/// Equals `(4pq)^{n/2} (p/q)^{x/2}` — the ratio of the probability of any
/// single path with endpoint `x` under `p` versus under `1/2`.
///
/// # Errors
///
/// [`Error::ParityMismatch`] if `|x| > n` or `x ≢ n (mod 2)`: no path
/// reaches such an endpoint, so no factor relates the two laws.
pub fn tilt_factor(p: f64, n: usize, x: i64) -> Result<f64> {
    if x.unsigned_abs() as usize > n || (n as i64 - x).rem_euclid(2) != 0 {
        return Err(Error::ParityMismatch { n, x });
    }
    let q = 1.0 - p;
    // exp((n/2)·ln(4pq) + (x/2)·ln(p/q)) — log space keeps large n finite.
    Ok((0.5 * (n as f64) * (4.0 * p * q).ln() + 0.5 * (x as f64) * (p / q).ln()).exp())
}
