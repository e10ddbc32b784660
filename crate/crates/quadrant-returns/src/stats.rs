//! Distances between finite-length laws and their limits.
//!
//! Two metrics cover the two kinds of limit. Discrete limits (geometric,
//! negative binomial, the meander mixtures) are compared in total variation;
//! continuous limits (half-normal, Rayleigh) are compared with a
//! Kolmogorov–Smirnov statistic after dividing the counts by `√(h·n)`.
//! Every comparison against a truncated or windowed object carries an
//! explicit `slack` so the reported value brackets the true distance:
//! `true ∈ [value, value + slack]`.

use std::collections::BTreeMap;

use crate::limits::{limit_joint, limit_rescale, LimitLaw, Marginal};
use crate::numeric::Scalar;
use crate::shuffle::{joint_law, BinomialWindow, JointReturnLaw, Mode};
use crate::walk::{Axis, Conditioning, Parity, StepDistribution};
use crate::{Error, Result};

/// Largest length solved exactly inside [`sweep`]; longer laws use the
/// default binomial window (whose truncation shows up as row slack).
pub const SWEEP_EXACT_CUTOFF: usize = 512;

/// The convolution mode [`sweep`] uses for a given length: exact up to
/// [`SWEEP_EXACT_CUTOFF`], the default binomial window beyond.
pub fn auto_mode(walk: &StepDistribution, n: usize) -> Mode {
    if n <= SWEEP_EXACT_CUTOFF {
        Mode::Exact
    } else {
        Mode::Windowed(BinomialWindow::default_for(&walk.h1()))
    }
}

/// A distance together with a certified upper bound on everything the
/// computation could not see (limit tail mass, window truncation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvResult {
    /// Distance restricted to the examined support: a lower bound.
    pub value: f64,
    /// Unexamined contribution, bounded from above.
    pub slack: f64,
}

impl TvResult {
    /// Certified upper bound on the true distance.
    pub fn bound(&self) -> f64 {
        self.value + self.slack
    }
}

/// Total variation `½ Σ |p − q|` between two mass vectors (missing entries
/// count as zero).
pub fn tv_vec(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    0.5 * (0..len)
        .map(|i| {
            let a = p.get(i).copied().unwrap_or(0.0);
            let b = q.get(i).copied().unwrap_or(0.0);
            (a - b).abs()
        })
        .sum::<f64>()
}

/// Total variation between two sparse joint mass maps.
pub fn tv_maps(
    p: &BTreeMap<(usize, usize), f64>,
    q: &BTreeMap<(usize, usize), f64>,
) -> f64 {
    let mut sum = 0.0;
    for (key, a) in p {
        sum += (a - q.get(key).copied().unwrap_or(0.0)).abs();
    }
    for (key, b) in q {
        if !p.contains_key(key) {
            sum += b.abs();
        }
    }
    0.5 * sum
}

/// Product of the marginals of a joint mass map — the law the joint would
/// have if its coordinates were independent. Comparing against it with
/// [`tv_maps`] quantifies dependence.
pub fn product_of_marginals(
    joint: &BTreeMap<(usize, usize), f64>,
) -> BTreeMap<(usize, usize), f64> {
    let mut m1: BTreeMap<usize, f64> = BTreeMap::new();
    let mut m2: BTreeMap<usize, f64> = BTreeMap::new();
    for (&(r1, r2), &mass) in joint {
        *m1.entry(r1).or_default() += mass;
        *m2.entry(r2).or_default() += mass;
    }
    let mut product = BTreeMap::new();
    for (&r1, &a) in &m1 {
        for (&r2, &b) in &m2 {
            let mass = a * b;
            if mass > 0.0 {
                product.insert((r1, r2), mass);
            }
        }
    }
    product
}

/// Extra conditional-law slack caused by window truncation: the windowed
/// law loses at most `truncation_remainder` of raw mass, which perturbs the
/// conditional law by at most `remainder / event` in total variation.
fn window_slack<T: Scalar>(law: &JointReturnLaw<T>) -> f64 {
    let remainder = law.truncation_remainder();
    if remainder == 0.0 {
        return 0.0;
    }
    let event = law.event_probability().to_f64();
    if event > 2.0 * remainder {
        remainder / event
    } else {
        1.0
    }
}

/// Total variation between a finite-length conditional law and a discrete
/// limit law.
///
/// The examined box covers the finite law's entire support, so `value` is
/// an exact lower bound and `slack` collects the limit's tail beyond the
/// box plus any window truncation.
///
/// # Errors
///
/// `Invalid` when the limit has a continuous marginal (use [`ks_rescaled`])
/// or when the conditioning event has zero probability.
pub fn tv_distance<T: Scalar>(law: &JointReturnLaw<T>, limit: &LimitLaw) -> Result<TvResult> {
    if !limit.is_discrete() {
        return Err(Error::Invalid {
            what: "total variation",
            detail: "the limit has a continuous marginal; compare with ks_rescaled".into(),
        });
    }
    let conditional: BTreeMap<(usize, usize), f64> = law
        .conditional()?
        .iter()
        .map(|(&cell, mass)| (cell, mass.to_f64()))
        .collect();
    let mut result = tv_map_vs_limit(&conditional, limit)?;
    result.slack += window_slack(law);
    Ok(result)
}

/// Total variation between a normalized joint mass map (an empirical or
/// exact conditional law) and a discrete limit law. The box covers the
/// map's entire support, so outside it the pointwise gap is exactly the
/// limit's mass and the value is the full distance; `slack` stays zero.
pub fn tv_map_vs_limit(
    map: &BTreeMap<(usize, usize), f64>,
    limit: &LimitLaw,
) -> Result<TvResult> {
    if !limit.is_discrete() {
        return Err(Error::Invalid {
            what: "total variation",
            detail: "the limit has a continuous marginal; compare with ks_rescaled".into(),
        });
    }
    let rmax1 = map.keys().map(|&(r1, _)| r1).max().unwrap_or(0);
    let rmax2 = map.keys().map(|&(_, r2)| r2).max().unwrap_or(0);
    let mut sum = 0.0;
    let mut limit_in_box = 0.0;
    for r1 in 0..=rmax1 {
        for r2 in 0..=rmax2 {
            let p = map.get(&(r1, r2)).copied().unwrap_or(0.0);
            let q = limit.pmf2(r1, r2)?;
            sum += (p - q).abs();
            limit_in_box += q;
        }
    }
    let outside = (1.0 - limit_in_box).max(0.0);
    Ok(TvResult {
        value: 0.5 * (sum + outside),
        slack: 0.0,
    })
}

/// Total variation between a discrete limit law and the product of its own
/// marginals, over the box `[0, rmax]²` with tail slack. A `value` above
/// zero certifies that the limit's coordinates are dependent.
pub fn limit_product_gap(limit: &LimitLaw, rmax: usize) -> Result<TvResult> {
    let m1 = limit.marginal(Axis::Horizontal);
    let m2 = limit.marginal(Axis::Vertical);
    let mut sum = 0.0;
    let mut joint_in = 0.0;
    let mut product_in = 0.0;
    for r1 in 0..=rmax {
        for r2 in 0..=rmax {
            let j = limit.pmf2(r1, r2)?;
            let p = m1.pmf(r1)? * m2.pmf(r2)?;
            sum += (j - p).abs();
            joint_in += j;
            product_in += p;
        }
    }
    Ok(TvResult {
        value: 0.5 * sum,
        slack: 0.5 * ((1.0 - joint_in).max(0.0) + (1.0 - product_in).max(0.0)),
    })
}

/// Kolmogorov–Smirnov statistic between the law of `count / scale`
/// (`masses[r] = P(count = r)`) and a continuous cdf: the supremum of the
/// cdf gap, attained at a jump of the rescaled empirical cdf from the left
/// or the right.
pub fn ks_rescaled(
    masses: &[f64],
    scale: f64,
    cdf: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    if !(scale > 0.0) {
        return Err(Error::Invalid {
            what: "rescale factor",
            detail: format!("need a positive scale, got {scale}"),
        });
    }
    let mut cumulative = 0.0;
    let mut worst = 0.0f64;
    for (r, &mass) in masses.iter().enumerate() {
        let at = cdf(r as f64 / scale)?;
        worst = worst.max((cumulative - at).abs());
        cumulative += mass;
        worst = worst.max((cumulative - at).abs());
    }
    // Beyond the support the empirical cdf stays at its total mass while
    // the limit climbs to one.
    worst = worst.max((1.0 - cumulative).abs());
    Ok(worst)
}

/// Supremum cdf gap between a discrete marginal mass vector and a discrete
/// limit marginal (a Kolmogorov–Smirnov statistic on the lattice).
pub fn discrete_cdf_gap(masses: &[f64], limit: &Marginal) -> Result<f64> {
    let mut empirical = 0.0;
    let mut reference = 0.0;
    let mut worst = 0.0f64;
    for (r, &mass) in masses.iter().enumerate() {
        empirical += mass;
        reference += limit.pmf(r)?;
        worst = worst.max((empirical - reference).abs());
    }
    let len = masses.len();
    // Past the vector the empirical cdf is flat at ~1; the gap is the
    // limit's remaining tail.
    worst = worst.max(limit.tail_beyond(len.saturating_sub(1))?);
    Ok(worst)
}

/// Which distance a [`ConvergenceRow`] reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Tv,
    Ks,
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Metric::Tv => "TV",
            Metric::Ks => "KS",
        })
    }
}

/// One row of a convergence sweep: the distance between the conditional
/// law at length `n` and its limit, with the rescale factors that were
/// applied to the counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub conditioning: Conditioning,
    pub parity: Parity,
    pub metric: Metric,
    pub value: f64,
    pub slack: f64,
    pub scale1: f64,
    pub scale2: f64,
}

impl ConvergenceRow {
    /// The five CSV columns `(n, parity, metric, value, slack)`.
    pub fn csv_record(&self) -> [String; 5] {
        [
            self.n.to_string(),
            self.parity.to_string(),
            self.metric.to_string(),
            self.value.format_mass(),
            self.slack.format_mass(),
        ]
    }
}

/// Convergence sweep: for each length, solve the conditional law (exactly
/// up to length 512, windowed beyond) and measure its distance to the
/// limit.
///
/// Discrete limits produce one joint-TV row. Continuous limits produce one
/// KS row holding the worst marginal statistic across the two axes (an
/// axis with a discrete marginal in a mixed product contributes its lattice
/// cdf gap). Lengths incompatible with the conditioning (odd lengths for
/// pinned endpoints) are skipped.
pub fn sweep(
    walk: &StepDistribution,
    conditioning: Conditioning,
    lengths: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::new();
    for &n in lengths {
        if conditioning.check_length(n).is_err() {
            continue;
        }
        let mode = auto_mode(walk, n);
        let law = joint_law::<f64>(n, walk, conditioning, mode)?;
        let limit = limit_joint(walk, conditioning, Parity::of(n));
        let (scale1, scale2) = limit_rescale(walk, n, conditioning);
        let row = if limit.is_discrete() {
            let tv = tv_distance(&law, &limit)?;
            ConvergenceRow {
                n,
                conditioning,
                parity: Parity::of(n),
                metric: Metric::Tv,
                value: tv.value,
                slack: tv.slack,
                scale1,
                scale2,
            }
        } else {
            let mut worst = 0.0f64;
            for (axis, scale) in [(Axis::Horizontal, scale1), (Axis::Vertical, scale2)] {
                let masses: Vec<f64> = law
                    .conditional_marginal(axis)?
                    .iter()
                    .map(Scalar::to_f64)
                    .collect();
                let marginal = limit.marginal(axis);
                let value = if marginal.is_discrete() {
                    discrete_cdf_gap(&masses, &marginal)?
                } else {
                    ks_rescaled(&masses, scale, |x| marginal.cdf(x))?
                };
                worst = worst.max(value);
            }
            ConvergenceRow {
                n,
                conditioning,
                parity: Parity::of(n),
                metric: Metric::Ks,
                value: worst,
                slack: window_slack(&law),
                scale1,
                scale2,
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::{geometric_pmf, negbin_pmf, rayleigh_cdf};
    use proptest::prelude::*;

    #[test]
    fn tv_vec_basics() {
        assert_eq!(tv_vec(&[1.0], &[1.0]), 0.0);
        assert_eq!(tv_vec(&[1.0], &[0.0, 1.0]), 1.0);
        assert!((tv_vec(&[0.5, 0.5], &[1.0]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn geometric_half_vs_negbin_gap_is_one_half() {
        // ½Σ|2^{−(r+1)} − r·2^{−(r+1)}|: the r = 0 term alone carries 1/2
        // of L¹ mass and rows r ≥ 2 carry the matching other half.
        let g: Vec<f64> = (0..400).map(|r| geometric_pmf(0.5, r)).collect();
        let nb: Vec<f64> = (0..400)
            .map(|r| if r == 0 { 0.0 } else { negbin_pmf(r).unwrap() })
            .collect();
        assert!((tv_vec(&g, &nb) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn product_of_marginals_detects_dependence() {
        // Perfectly correlated two-point law.
        let mut joint = BTreeMap::new();
        joint.insert((0, 0), 0.5);
        joint.insert((1, 1), 0.5);
        let product = product_of_marginals(&joint);
        assert_eq!(product.len(), 4);
        assert!((tv_maps(&joint, &product) - 0.5).abs() < 1e-15);
        // A genuine product round-trips to itself.
        assert!(tv_maps(&product, &product_of_marginals(&product)) < 1e-15);
    }

    #[test]
    fn ks_against_rayleigh_shrinks_with_n() {
        let walk = StepDistribution::symmetric();
        let mut previous = f64::INFINITY;
        for n in [16usize, 64, 256] {
            let law = joint_law::<f64>(n, &walk, Conditioning::Bridge, Mode::Exact).unwrap();
            let masses: Vec<f64> = law
                .conditional_marginal(Axis::Horizontal)
                .unwrap()
                .iter()
                .map(Scalar::to_f64)
                .collect();
            let scale = (0.5 * n as f64).sqrt();
            let ks = ks_rescaled(&masses, scale, rayleigh_cdf).unwrap();
            assert!(ks < previous, "n={n}: {ks} !< {previous}");
            previous = ks;
        }
        assert!(previous < 0.08, "KS at n=256 should be small: {previous}");
    }

    #[test]
    fn ks_input_validation() {
        assert!(ks_rescaled(&[1.0], 0.0, rayleigh_cdf).is_err());
        // A point mass at 0 against Rayleigh: gap 1 at x = 0.
        let ks = ks_rescaled(&[1.0], 1.0, rayleigh_cdf).unwrap();
        assert!((ks - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tv_distance_meander_small_lengths_shrink() {
        let walk = StepDistribution::symmetric();
        let limit_law = limit_joint(&walk, Conditioning::Meander, Parity::Even);
        let mut previous = f64::INFINITY;
        for n in [8usize, 32, 128] {
            let law = joint_law::<f64>(n, &walk, Conditioning::Meander, Mode::Exact).unwrap();
            let tv = tv_distance(&law, &limit_law).unwrap();
            assert_eq!(tv.slack, 0.0, "exact mode carries no slack");
            assert!(tv.bound() < previous, "n={n}");
            previous = tv.bound();
        }
        assert!(previous < 0.1, "TV at n=128: {previous}");
    }

    #[test]
    fn limit_product_gap_flags_the_double_inward_mixture() {
        let walk = StepDistribution::parse("0.1,0.3,0.2,0.4").unwrap();
        let mixture = limit_joint(&walk, Conditioning::Meander, Parity::Even);
        let gap = limit_product_gap(&mixture, 80).unwrap();
        assert!(gap.slack < 1e-12);
        assert!(gap.value > 1e-3, "dependence gap {}", gap.value);

        // Product laws show no gap.
        let product = limit_joint(&walk, Conditioning::NonNegativeBridge, Parity::Even);
        let none = limit_product_gap(&product, 80).unwrap();
        assert!(none.value < 1e-12);
    }

    #[test]
    fn sweep_rows_shrink_at_doublings() {
        let walk = StepDistribution::symmetric();
        for conditioning in [Conditioning::Meander, Conditioning::NonNegativeBridge] {
            let rows = sweep(&walk, conditioning, &[8, 16, 32, 64]).unwrap();
            assert_eq!(rows.len(), 4);
            for pair in rows.windows(2) {
                assert!(
                    pair[1].value < pair[0].value,
                    "{conditioning}: {} !< {}",
                    pair[1].value,
                    pair[0].value
                );
                assert_eq!(pair[0].metric, Metric::Tv);
            }
        }
        let rows = sweep(&walk, Conditioning::Bridge, &[8, 16, 32, 64]).unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].value < pair[0].value);
            assert_eq!(pair[0].metric, Metric::Ks);
        }
        // Odd lengths are skipped for pinned conditionings, kept otherwise.
        let skipped = sweep(&walk, Conditioning::Bridge, &[7, 8]).unwrap();
        assert_eq!(skipped.len(), 1);
        let kept = sweep(&walk, Conditioning::Meander, &[7, 8]).unwrap();
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[0].parity, Parity::Odd);
    }

    #[test]
    fn csv_record_shape() {
        let row = ConvergenceRow {
            n: 64,
            conditioning: Conditioning::Bridge,
            parity: Parity::Even,
            metric: Metric::Ks,
            value: 0.125,
            slack: 0.0,
            scale1: 4.0,
            scale2: 4.0,
        };
        let record = row.csv_record();
        assert_eq!(record[0], "64");
        assert_eq!(record[1], "even");
        assert_eq!(record[2], "KS");
        assert!(record[3].starts_with("1.25"));
    }

    fn mass_vector() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.0f64..1.0, 1..8)
            .prop_filter("needs positive mass", |v| v.iter().sum::<f64>() > 1e-6)
            .prop_map(|v| {
                let total: f64 = v.iter().sum();
                v.into_iter().map(|x| x / total).collect()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn tv_is_a_metric_on_mass_vectors(
            p in mass_vector(),
            q in mass_vector(),
            r in mass_vector(),
        ) {
            let pq = tv_vec(&p, &q);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&pq));
            prop_assert!((pq - tv_vec(&q, &p)).abs() < 1e-15);
            prop_assert!(pq <= tv_vec(&p, &r) + tv_vec(&r, &q) + 1e-12);
            prop_assert_eq!(tv_vec(&p, &p), 0.0);
            // TV dominates half the largest pointwise gap.
            let biggest = p
                .iter()
                .zip(q.iter().chain(std::iter::repeat(&0.0)))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            prop_assert!(pq + 1e-12 >= 0.5 * biggest);
        }
    }
}
