//! Audit the convolution engine against brute-force path enumeration.
//!
//! The two computations share no code: the engine convolves per-axis
//! tables under a binomial shuffle, the oracle walks every path. Both use
//! exact rationals, so agreement is equality, not approximation.

use num::BigRational;
use quadrant_returns::oracle::enumerate_joint;
use quadrant_returns::shuffle::{joint_law, Mode};
use quadrant_returns::walk::{Conditioning, StepDistribution};

fn main() -> quadrant_returns::Result<()> {
    let walks = [
        "1/4,1/4,1/4,1/4", // symmetric
        "0.1,0.3,0.2,0.4", // both axes drift inward
        "0.3,0.1,0.4,0.2", // both axes drift outward
    ];
    let conditionings = [
        Conditioning::Unconditioned,
        Conditioning::Bridge,
        Conditioning::Meander,
        Conditioning::NonNegativeBridge,
    ];

    for raw in walks {
        let walk = StepDistribution::parse(raw)?;
        for cond in conditionings {
            for n in [3usize, 6, 10] {
                if cond.check_length(n).is_err() {
                    continue; // no bridge returns to the origin in odd time
                }
                let fast = joint_law::<BigRational>(n, &walk, cond, Mode::Exact)?;
                let slow = enumerate_joint(n, &walk, cond)?;

                let cells = fast.mass().count();
                assert_eq!(cells, slow.mass().count());
                for (key, value) in fast.mass() {
                    assert_eq!(value, &slow.cell(key.0, key.1), "cell {key:?}");
                }
                assert_eq!(fast.event_probability(), slow.event_probability());
                println!(
                    "walk {raw:<18} {:<20} n={n:<3} {cells:>3} cells  event mass {}",
                    cond.name(),
                    fast.event_probability()
                );
            }
        }
    }
    println!("\nevery cell identical between engine and oracle");
    Ok(())
}
