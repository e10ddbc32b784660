//! Watch the bridge law converge to its product-of-Rayleighs limit.
//!
//! At each length the conditional law is solved (exactly up to n = 512,
//! with a binomial window beyond) and its worst per-axis
//! Kolmogorov–Smirnov statistic against the rescaled Rayleigh cdf is
//! recorded. The statistic decays like C/√n, so the final column —
//! KS · √n — settles near a constant.

use quadrant_returns::stats::sweep;
use quadrant_returns::walk::{Conditioning, StepDistribution};

fn main() -> quadrant_returns::Result<()> {
    let walk = StepDistribution::parse("1/4,1/4,1/4,1/4")?;
    let lengths = [64, 128, 256, 512, 1024, 2048];

    println!("bridge vs product of Rayleighs, symmetric walk");
    println!("{:>6} {:>10} {:>12} {:>10}", "n", "KS", "slack", "KS*sqrt(n)");
    for row in sweep(&walk, Conditioning::Bridge, &lengths)? {
        println!(
            "{:>6} {:>10.6} {:>12.2e} {:>10.4}",
            row.n,
            row.value,
            row.slack,
            row.value * (row.n as f64).sqrt()
        );
    }

    println!();
    println!("inward-drift meander vs its mixture limit (total variation)");
    let drifted = StepDistribution::parse("0.1,0.3,0.2,0.4")?;
    println!("{:>6} {:>10} {:>12}", "n", "TV", "slack");
    for row in sweep(&drifted, Conditioning::Meander, &[50, 100, 200, 400, 800])? {
        println!("{:>6} {:>10.6} {:>12.2e}", row.n, row.value, row.slack);
    }
    Ok(())
}
