//! Monte Carlo estimation of a conditional law, checked against the exact
//! engine, plus the determinism guarantee: the identical seed produces the
//! identical law no matter how many worker lanes run.

use quadrant_returns::sampler::{sample, sample_with_lanes, Method};
use quadrant_returns::shuffle::{joint_law, Mode};
use quadrant_returns::stats::tv_maps;
use quadrant_returns::walk::{Conditioning, StepDistribution};

fn main() -> quadrant_returns::Result<()> {
    let walk = StepDistribution::parse("1/4,1/4,1/4,1/4")?;
    let (n, seed, trials) = (12, 0xFEED, 200_000);

    let empirical = sample(n, &walk, Conditioning::Meander, seed, trials, Method::Rejection)?;
    println!(
        "meander at n = {n}: {} of {} trials stayed in the quadrant (rate {:.4})",
        empirical.accepted(),
        empirical.trials(),
        empirical.acceptance_rate()
    );
    println!(
        "event estimate {:.6} +- {:.6}",
        empirical.event_estimate(),
        empirical.event_standard_error()
    );

    let exact = joint_law::<f64>(n, &walk, Conditioning::Meander, Mode::Exact)?;
    println!("exact event probability {:.6}", exact.event_probability());

    let tv = tv_maps(&empirical.conditional()?, &exact.conditional()?);
    println!("TV(empirical, exact) = {tv:.5} over {} cells", exact.mass().count());
    assert!(tv < 0.02, "200k trials should land well inside 2%");

    // Same seed, different parallelism: the laws are identical, not merely
    // close — trials are chunked and merged in index order.
    let one_lane = sample_with_lanes(n, &walk, Conditioning::Meander, seed, trials, Method::Rejection, 1)?;
    let eight_lanes = sample_with_lanes(n, &walk, Conditioning::Meander, seed, trials, Method::Rejection, 8)?;
    assert_eq!(one_lane, eight_lanes);
    assert_eq!(one_lane, empirical);
    println!("1-lane and 8-lane runs agree bit for bit");
    Ok(())
}
