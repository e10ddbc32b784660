//! Exact joint law of the two return counts for a short symmetric walk.
//!
//! Solves P(N¹_n = r1, N²_n = r2) with rational arithmetic and prints the
//! table as exact fractions. Run with
//!
//! ```text
//! cargo run --example exact_law [n]
//! ```

use num::BigRational;
use quadrant_returns::shuffle::{joint_law, Mode};
use quadrant_returns::walk::{Axis, Conditioning, StepDistribution};

fn main() -> quadrant_returns::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .map(|raw| raw.parse().expect("n must be a non-negative integer"))
        .unwrap_or(8);

    let walk = StepDistribution::parse("1/4,1/4,1/4,1/4")?;
    let law = joint_law::<BigRational>(n, &walk, Conditioning::Unconditioned, Mode::Exact)?;

    println!("joint return-count law, symmetric walk, n = {n}");
    println!("{:>4} {:>4}   mass", "r1", "r2");
    for (&(r1, r2), mass) in law.mass() {
        println!("{r1:>4} {r2:>4}   {mass}");
    }

    // Unconditioned mass must account for every one of the 4^n paths.
    assert_eq!(
        law.event_probability(),
        &BigRational::from_integer(1.into())
    );

    // The walk treats the two axes identically, so the joint law is
    // exchangeable: the marginals agree cell by cell.
    let horizontal = law.marginal(Axis::Horizontal);
    let vertical = law.marginal(Axis::Vertical);
    assert_eq!(horizontal, vertical);

    println!("\nmarginal of one axis:");
    for (r, mass) in horizontal.iter().enumerate() {
        println!("P(N = {r}) = {mass}");
    }
    Ok(())
}
