//! The meander's two return counts do NOT become independent in the limit
//! when both axes drift inward — unlike every other case in the
//! catalogue. This example quantifies that failure.
//!
//! The joint limit is a two-component mixture over step-count parities:
//! conditioned on which axis received an even share of the n steps, the
//! counts are independent, but the mixture over the two parity patterns
//! couples them. The gap from the product of the marginals is a fixed,
//! explicitly computable distribution — it does not shrink as n grows.

use quadrant_returns::limits::limit_joint;
use quadrant_returns::shuffle::{joint_law, Mode};
use quadrant_returns::stats::{limit_product_gap, product_of_marginals, tv_maps};
use quadrant_returns::walk::{Axis, Conditioning, Parity, StepDistribution};

fn main() -> quadrant_returns::Result<()> {
    let walk = StepDistribution::parse("0.1,0.3,0.2,0.4")?;
    let limit = limit_joint(&walk, Conditioning::Meander, Parity::Even);

    // TV between the joint limit and the product of its own marginals.
    let gap = limit_product_gap(&limit, 400)?;
    println!("inward-inward meander limit vs product of marginals:");
    println!("  TV = {:.6}  (+{:.1e} truncation slack)", gap.value, gap.slack);
    assert!(gap.value > 1e-3, "the dependence is macroscopic");

    // The most visible single cell: both counts zero.
    let joint00 = limit.pmf2(0, 0)?;
    let product00 =
        limit.marginal(Axis::Horizontal).pmf(0)? * limit.marginal(Axis::Vertical).pmf(0)?;
    println!("  P(0,0) joint   = {joint00:.6}");
    println!("  P(0,0) product = {product00:.6}  (gap {:.2e})", joint00 - product00);

    // Contrast: one inward and one outward axis. The mixture weights
    // become parity-independent and the limit factorizes exactly.
    let mixed = limit_joint(
        &StepDistribution::parse("0.1,0.3,0.4,0.2")?,
        Conditioning::Meander,
        Parity::Even,
    );
    let factorized = limit_product_gap(&mixed, 400)?;
    println!("mixed-drift meander limit vs product:  TV = {:.2e}", factorized.value);
    assert!(factorized.value < 1e-12);

    // The same dependence is already visible at finite n.
    println!();
    println!("finite-n meander, TV(joint, product of its marginals):");
    for n in [50usize, 100, 200, 400] {
        let law = joint_law::<f64>(n, &walk, Conditioning::Meander, Mode::Exact)?;
        let conditional = law.conditional()?;
        let tv = tv_maps(&conditional, &product_of_marginals(&conditional));
        println!("  n = {n:<4} TV = {tv:.6}");
    }
    println!("the gap saturates near the limit value instead of vanishing");
    Ok(())
}
