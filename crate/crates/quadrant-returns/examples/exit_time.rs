//! How long does the walk stay in the quadrant? Exact survival
//! probabilities P(τ > n) against their asymptotic forms, for the three
//! drift patterns.
//!
//! Driftless: P(τ > n) ≈ 4/(π n √(h1 h2)) — polynomial decay. Outward
//! drift on both axes: the walk escapes with positive probability, so
//! P(τ > n) tends to a constant. Inward drift: geometric decay with a
//! polynomial correction. The asymptote column uses the closed-form
//! constants; the ratio column shows it converging onto the exact curve.

use quadrant_returns::limits::tau_asymptote;
use quadrant_returns::shuffle::exit_probability;
use quadrant_returns::walk::{Parity, StepDistribution};

fn survey(label: &str, raw: &str, lengths: &[usize]) -> quadrant_returns::Result<()> {
    let walk = StepDistribution::parse(raw)?;
    println!("== {label} walk {raw}");
    println!("{:>6} {:>14} {:>14} {:>8}", "n", "P(tau > n)", "asymptote", "ratio");
    for &n in lengths {
        let exact: f64 = exit_probability(n, &walk)?;
        let approx = tau_asymptote(&walk, n, Parity::of(n));
        println!("{n:>6} {exact:>14.6e} {approx:>14.6e} {:>8.4}", exact / approx);
    }
    println!();
    Ok(())
}

fn main() -> quadrant_returns::Result<()> {
    survey("driftless", "1/4,1/4,1/4,1/4", &[100, 400, 1600, 6400])?;
    survey("outward", "0.3,0.1,0.4,0.2", &[50, 100, 200, 400])?;
    survey("inward", "0.1,0.3,0.2,0.4", &[50, 100, 200, 400])?;
    Ok(())
}
