//! Tour of the limiting laws: which limit each conditioning and drift
//! pattern produces, and the constants that parameterize it.
//!
//! For each axis the relevant quantities are the extracted up-step
//! probability p̃ = p/(p+q), the decay rate ρ = √(4p̃q̃), and the survival
//! constants c(even), c(odd). The table below prints them for one walk of
//! each drift pattern, then tabulates the meander marginal against the
//! unconditioned one so the conditioning's effect is visible.

use quadrant_returns::limits::{limit_joint, LimitConstants};
use quadrant_returns::walk::{Axis, Conditioning, Parity, StepDistribution};

fn main() -> quadrant_returns::Result<()> {
    let cases = [
        ("driftless", "1/4,1/4,1/4,1/4"),
        ("outward", "0.3,0.1,0.4,0.2"),
        ("mixed", "0.1,0.3,0.4,0.2"),
        ("inward", "0.1,0.3,0.2,0.4"),
    ];

    for (label, raw) in cases {
        let walk = StepDistribution::parse(raw)?;
        let constants = LimitConstants::for_walk(&walk);
        println!("== {label} walk {raw}");
        for (name, axis) in [("axis 1", constants.axis1), ("axis 2", constants.axis2)] {
            println!(
                "   {name}: drift {:<8} p~ = {:.4}  rho = {:.4}  c(even) = {:.4}  c(odd) = {:.4}",
                axis.drift.to_string(),
                axis.p_tilde,
                axis.rho,
                axis.c_even,
                axis.c_odd,
            );
        }

        // Meander marginal on axis 1 vs the unconditioned one: surviving
        // in the quadrant shifts mass towards fewer returns.
        let meander = limit_joint(&walk, Conditioning::Meander, Parity::Even);
        let free = limit_joint(&walk, Conditioning::Unconditioned, Parity::Even);
        let (m, f) = (
            meander.marginal(Axis::Horizontal),
            free.marginal(Axis::Horizontal),
        );
        if m.is_discrete() && f.is_discrete() {
            print!("   r:              ");
            (0..6).for_each(|r| print!("{r:>9}"));
            print!("\n   meander pmf:    ");
            for r in 0..6 {
                print!("{:>9.5}", m.pmf(r)?);
            }
            print!("\n   unconditioned:  ");
            for r in 0..6 {
                print!("{:>9.5}", f.pmf(r)?);
            }
            println!();
        } else {
            println!("   driftless axes rescale to continuous limits (half-normal / Rayleigh)");
        }
        println!();
    }
    Ok(())
}
