//! The one-dimensional building blocks have classical closed forms; this
//! example checks the dynamic-programming tables against them, exactly.
//!
//! For the driftless simple walk: P(N_{2m} = r) = C(2m − r, m) / 2^{2m−r}
//! counts strict returns to 0 in 2m steps, and the discrete-theta law
//! gives the same count for walks pinned to end at 0. Both are compared
//! as rationals, so every digit matters.

use num::BigRational;
use quadrant_returns::one_dim::{free_snapshots, return_count_pmf, theta_pmf};

fn main() -> quadrant_returns::Result<()> {
    let half = BigRational::new(1.into(), 2.into());

    for m in [2usize, 5, 9] {
        let n = 2 * m;
        let table = free_snapshots::<BigRational>(n, &half)?;

        println!("driftless walk, n = {n}: P(N = r) by DP vs closed form");
        for (r, dp) in table.counts[n].iter().enumerate() {
            let closed = return_count_pmf(n, r)?;
            assert_eq!(dp, &closed);
            if r <= 4 {
                println!("  r = {r}: {closed}");
            }
        }

        // Same comparison for walks pinned to the origin at time n.
        for (r, dp) in table.at_origin[n].iter().enumerate() {
            assert_eq!(dp, &theta_pmf(r, n)?, "pinned, r = {r}");
        }
        println!("  pinned-endpoint law matches the discrete theta pmf\n");
    }
    println!("every table cell equals its closed form");
    Ok(())
}
