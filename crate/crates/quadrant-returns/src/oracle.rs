//! Ground truth by exhaustive dynamic programming over the full walk state.
//!
//! Nothing here shares code with the production engines: the state is the
//! literal `(x, y, returns-to-each-axis, alive)` tuple and every step
//! distributes mass over the four directions. That makes the oracle slow —
//! the state space grows like `n⁴` — and trustworthy, which is the point:
//! it certifies the convolution engine cell-by-cell at small lengths. The
//! hard cap keeps runs to a few seconds.
//!
//! A half-plane variant that only tracks the horizontal exit is included so
//! the independence-of-axes reduction can itself be checked against the
//! one-dimensional engine.

use num::rational::BigRational;
use num::Zero;
use std::collections::BTreeMap;

use crate::shuffle::JointReturnLaw;
use crate::walk::{Conditioning, StepDistribution};
use crate::{Error, Result};

/// Largest length the oracle accepts.
pub const BRUTE_CAP: usize = 14;

/// Which exits end the walk's "alive" phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Exit when either coordinate goes negative (the quadrant walk).
    Quadrant,
    /// Exit only when the horizontal coordinate goes negative; the
    /// vertical one may roam freely.
    HalfPlane,
}

/// Exact joint law of `(N¹_n, N²_n)` with the conditioning event, by brute
/// force over all states, on the quadrant.
///
/// # Errors
///
/// `CapTooLarge` past [`BRUTE_CAP`]; `ImpossibleConditioning` for
/// endpoint-pinned conditionings at odd `n`.
pub fn enumerate_joint(
    n: usize,
    walk: &StepDistribution,
    conditioning: Conditioning,
) -> Result<JointReturnLaw<BigRational>> {
    enumerate_in_region(n, walk, conditioning, Region::Quadrant)
}

/// The same enumeration with a selectable exit region.
pub fn enumerate_in_region(
    n: usize,
    walk: &StepDistribution,
    conditioning: Conditioning,
    region: Region,
) -> Result<JointReturnLaw<BigRational>> {
    if n > BRUTE_CAP {
        return Err(Error::CapTooLarge { n, cap: BRUTE_CAP });
    }
    conditioning.check_length(n)?;

    // State: (x, y, r1, r2, alive) → probability mass. Returns keep
    // accumulating after death so every conditioning can be read off at the
    // end from the same run.
    type State = (i64, i64, usize, usize, bool);
    let mut states: BTreeMap<State, BigRational> = BTreeMap::new();
    states.insert((0, 0, 0, 0, true), num::One::one());

    let steps: [(i64, i64, BigRational); 4] = [
        (1, 0, walk.p1().clone()),
        (-1, 0, walk.q1().clone()),
        (0, 1, walk.p2().clone()),
        (0, -1, walk.q2().clone()),
    ];

    for _ in 0..n {
        let mut next: BTreeMap<State, BigRational> = BTreeMap::new();
        for ((x, y, r1, r2, alive), mass) in states {
            for (dx, dy, prob) in &steps {
                let nx = x + dx;
                let ny = y + dy;
                // A moved coordinate landing on zero was at ±1 before, so
                // every landing is a strict return.
                let nr1 = r1 + usize::from(*dx != 0 && nx == 0);
                let nr2 = r2 + usize::from(*dy != 0 && ny == 0);
                let exited = match region {
                    Region::Quadrant => nx < 0 || ny < 0,
                    Region::HalfPlane => nx < 0,
                };
                let key = (nx, ny, nr1, nr2, alive && !exited);
                let entry = next.entry(key).or_insert_with(BigRational::zero);
                *entry += &mass * prob;
            }
        }
        states = next;
    }

    let mut mass: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    let mut event_probability = BigRational::zero();
    for ((x, y, r1, r2, alive), value) in states {
        let keep = match conditioning {
            Conditioning::Unconditioned => true,
            Conditioning::Bridge => x == 0 && y == 0,
            Conditioning::Meander => alive,
            Conditioning::NonNegativeBridge => alive && x == 0 && y == 0,
        };
        if keep {
            event_probability += &value;
            let entry = mass.entry((r1, r2)).or_insert_with(BigRational::zero);
            *entry += value;
        }
    }
    mass.retain(|_, v| !v.is_zero());

    Ok(JointReturnLaw::from_parts(
        n,
        conditioning,
        mass,
        event_probability,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;
    use crate::one_dim::joint_table;
    use crate::numeric::Scalar;
    use crate::walk::Axis;
    use num::One;

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn two_step_non_negative_bridge() {
        // Only the paths east-west and north-south stay in the quadrant and
        // end at the origin: event probability 2·(1/4)² = 1/8, and the
        // conditional law splits evenly between (r1, r2) = (1, 0) and (0, 1).
        let law = enumerate_joint(
            2,
            &StepDistribution::symmetric(),
            Conditioning::NonNegativeBridge,
        )
        .unwrap();
        assert_eq!(*law.event_probability(), rat("1/8"));
        let conditional = law.conditional().unwrap();
        assert_eq!(conditional[&(1, 0)], rat("1/2"));
        assert_eq!(conditional[&(0, 1)], rat("1/2"));
    }

    #[test]
    fn two_step_unconditioned_cells() {
        let law = enumerate_joint(
            2,
            &StepDistribution::symmetric(),
            Conditioning::Unconditioned,
        )
        .unwrap();
        assert_eq!(law.cell(1, 0), rat("1/8"));
        assert_eq!(law.cell(0, 1), rat("1/8"));
        assert_eq!(law.cell(0, 0), rat("3/4"));
        assert!(law.event_probability().is_one());
    }

    #[test]
    fn total_mass_is_one() {
        for spec in ["1/4,1/4,1/4,1/4", "0.3,0.1,0.4,0.2"] {
            let walk = StepDistribution::parse(spec).unwrap();
            for n in [0, 3, 7] {
                let law = enumerate_joint(n, &walk, Conditioning::Unconditioned).unwrap();
                assert!(law.event_probability().is_one(), "{spec} n={n}");
            }
        }
    }

    #[test]
    fn exit_probability_is_monotone() {
        let walk = StepDistribution::parse("0.1,0.3,0.2,0.4").unwrap();
        let survivals: Vec<BigRational> = (0..=8)
            .map(|n| {
                enumerate_joint(n, &walk, Conditioning::Meander)
                    .unwrap()
                    .event_probability()
                    .clone()
            })
            .collect();
        assert!(survivals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        let err = enumerate_joint(
            15,
            &StepDistribution::symmetric(),
            Conditioning::Unconditioned,
        )
        .unwrap_err();
        assert!(matches!(err, Error::CapTooLarge { cap: BRUTE_CAP, .. }));
    }

    #[test]
    fn convolution_engine_matches_the_oracle() {
        // The full sweep over lengths and walks runs in the acceptance
        // suite; this is the fast early-warning version.
        use crate::shuffle::{joint_law, Mode};
        let walk = StepDistribution::parse("0.1,0.3,0.2,0.4").unwrap();
        for conditioning in Conditioning::ALL {
            for n in 0..=6 {
                if conditioning.pins_endpoint() && n % 2 == 1 {
                    continue;
                }
                let expected = enumerate_joint(n, &walk, conditioning).unwrap();
                let got =
                    joint_law::<BigRational>(n, &walk, conditioning, Mode::Exact).unwrap();
                assert_eq!(
                    got.event_probability(),
                    expected.event_probability(),
                    "{conditioning} n={n}"
                );
                let got_cells: Vec<_> = got.mass().collect();
                let expected_cells: Vec<_> = expected.mass().collect();
                assert_eq!(got_cells, expected_cells, "{conditioning} n={n}");
            }
        }
    }

    #[test]
    fn half_plane_reduction_matches_one_dimensional_engine() {
        // Summing the half-plane oracle over r2 must reproduce the binomial
        // mixture of 1D meander tables: the vertical coordinate is
        // unconstrained, so only the horizontal extraction matters.
        let walk = StepDistribution::parse("0.1,0.3,0.2,0.4").unwrap();
        let n = 8;
        let law = enumerate_in_region(n, &walk, Conditioning::Meander, Region::HalfPlane)
            .unwrap();
        let marginal = law.marginal(Axis::Horizontal);

        let weights = <BigRational as Scalar>::binomial_weights(n, &walk.h1());
        let p1 = walk.axis(Axis::Horizontal).p;
        let mut expected = vec![BigRational::zero(); n / 2 + 1];
        for (k, w) in weights.iter().enumerate() {
            let table = joint_table::<BigRational>(k, &p1).unwrap();
            for r in 0..=k / 2 {
                expected[r] += w * (table.mass(r, true, true) + table.mass(r, false, true));
            }
        }
        for (r, m) in marginal.iter().enumerate() {
            assert_eq!(*m, expected[r], "r={r}");
        }
    }
}
