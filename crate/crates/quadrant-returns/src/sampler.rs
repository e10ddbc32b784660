//! Seeded Monte Carlo simulation of the conditioned walk.
//!
//! Conditionings are realized by rejection: simulate the free walk, keep
//! the paths satisfying the event. For drifted walks the endpoint-pinned
//! events are exponentially rare, so a tilted mode simulates the
//! *symmetrized* walk instead and re-weights each accepted path by the
//! per-axis likelihood ratio — exactly [`tilt_factor`] evaluated at the
//! number of steps and final offset of each axis. At zero drift the
//! symmetrized walk is the original and every weight is exactly 1.
//!
//! # Determinism
//!
//! Every trial owns a counter-based RNG stream derived from
//! `(seed, trial index)`, and trials are aggregated in fixed chunks that
//! are merged in index order. The resulting [`EmpiricalLaw`] is therefore
//! byte-identical for a fixed `(seed, trials)` pair no matter how many
//! worker lanes run the chunks — parallelism can only change the wall
//! clock, never the numbers.
//!
//! # Feasibility guard
//!
//! Rejection sampling of a meander with inward drift stalls: the survival
//! probability decays like `θⁿ/n³`, and tilting does not help because the
//! survival indicator under the symmetrized measure still has
//! exponentially small weighted mass. [`acceptance_forecast`] predicts the
//! acceptance probability so callers can refuse hopeless runs up front and
//! switch to the exact engine, which handles those regimes in polynomial
//! time.

use std::collections::BTreeMap;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::limits::{bridge_event_asymptote, excursion_event_asymptote, tau_asymptote};
use crate::walk::{tilt_factor, Conditioning, Parity, StepDistribution};
use crate::{Error, Result};

/// Trials per aggregation chunk. Chunks are merged in index order, making
/// the floating-point accumulation independent of the lane count.
const CHUNK: u64 = 8192;

/// How the sampler realizes the conditioning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Simulate the walk itself and keep paths satisfying the event.
    Rejection,
    /// Simulate the symmetrized walk and weight accepted paths by the
    /// per-axis likelihood ratios.
    Tilted,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Rejection => "rejection",
            Method::Tilted => "tilted",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rejection" => Ok(Method::Rejection),
            "tilted" => Ok(Method::Tilted),
            other => Err(Error::Invalid {
                what: "sampling method",
                detail: format!("expected 'rejection' or 'tilted', got '{other}'"),
            }),
        }
    }
}

/// A seeded empirical joint return law: weighted masses over `(r1, r2)`
/// among accepted trials, plus the bookkeeping needed to reproduce and to
/// attach standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalLaw {
    n: usize,
    conditioning: Conditioning,
    method: Method,
    seed: u64,
    trials: u64,
    accepted: u64,
    masses: BTreeMap<(usize, usize), f64>,
    weight_sum: f64,
    weight_sq_sum: f64,
}

impl EmpiricalLaw {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn conditioning(&self) -> Conditioning {
        self.conditioning
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    /// Raw weighted masses (rejection mode: acceptance counts).
    pub fn masses(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.masses
    }

    /// Fraction of trials that satisfied the conditioning.
    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.trials as f64
    }

    /// Unbiased estimate of the probability of the conditioning event
    /// under the walk's own law (self-normalizing in tilted mode).
    pub fn event_estimate(&self) -> f64 {
        self.weight_sum / self.trials as f64
    }

    /// Standard error of [`event_estimate`](Self::event_estimate).
    pub fn event_standard_error(&self) -> f64 {
        let t = self.trials as f64;
        let mean = self.weight_sum / t;
        let variance = (self.weight_sq_sum / t - mean * mean).max(0.0);
        (variance / t).sqrt()
    }

    /// True when no trial satisfied the conditioning — the sampling budget
    /// was exhausted and the law is empty.
    pub fn budget_exhausted(&self) -> bool {
        self.accepted == 0
    }

    /// Empirical conditional law: masses normalized to total one.
    ///
    /// # Errors
    ///
    /// `Invalid` when no trial was accepted.
    pub fn conditional(&self) -> Result<BTreeMap<(usize, usize), f64>> {
        if self.budget_exhausted() || self.weight_sum <= 0.0 {
            return Err(Error::Invalid {
                what: "empirical conditional law",
                detail: "no accepted trials; the sampling budget was exhausted".into(),
            });
        }
        Ok(self
            .masses
            .iter()
            .map(|(&cell, &w)| (cell, w / self.weight_sum))
            .collect())
    }
}

/// Cumulative step thresholds for a uniform draw in `[0, 1)`:
/// `u < c1` moves x up, `u < c2` moves x down, `u < c3` moves y up,
/// otherwise y moves down.
#[derive(Clone, Copy)]
struct Thresholds {
    c1: f64,
    c2: f64,
    c3: f64,
}

struct ChunkResult {
    masses: BTreeMap<(usize, usize), f64>,
    accepted: u64,
    weight_sum: f64,
    weight_sq_sum: f64,
}

/// Outcome of one accepted trial: return counts plus the per-axis step
/// counts and endpoints needed for tilt weights.
struct Accepted {
    r1: usize,
    r2: usize,
    k1: usize,
    x1: i64,
    x2: i64,
}

/// Simulate the conditioned walk and collect the empirical joint return
/// law, using the current global worker pool (see [`sample_with_lanes`]
/// to fix the lane count explicitly — the results are identical).
///
/// # Errors
///
/// `Invalid` for `trials = 0`; `ImpossibleConditioning` for endpoint-pinned
/// conditionings at odd length.
pub fn sample(
    n: usize,
    walk: &StepDistribution,
    conditioning: Conditioning,
    seed: u64,
    trials: u64,
    method: Method,
) -> Result<EmpiricalLaw> {
    sample_with_lanes(n, walk, conditioning, seed, trials, method, 0)
}

/// [`sample`] with an explicit worker-lane count (`0` = one lane per
/// available CPU). The law is byte-identical for every lane count.
pub fn sample_with_lanes(
    n: usize,
    walk: &StepDistribution,
    conditioning: Conditioning,
    seed: u64,
    trials: u64,
    method: Method,
    lanes: usize,
) -> Result<EmpiricalLaw> {
    if trials == 0 {
        return Err(Error::Invalid {
            what: "trial count",
            detail: "at least one trial is required".into(),
        });
    }
    conditioning.check_length(n)?;

    let [p1, q1, p2, _] = walk.probs_f64();
    let (axis1, axis2) = walk.axes();
    let (h1, h2) = (axis1.h_f64(), axis2.h_f64());
    let thresholds = match method {
        Method::Rejection => Thresholds {
            c1: p1,
            c2: p1 + q1,
            c3: p1 + q1 + p2,
        },
        Method::Tilted => Thresholds {
            c1: h1 / 2.0,
            c2: h1,
            c3: h1 + h2 / 2.0,
        },
    };
    let tilt = match method {
        Method::Rejection => None,
        Method::Tilted => Some((axis1.p_f64(), axis2.p_f64())),
    };

    let chunk_count = trials.div_ceil(CHUNK);
    let run_chunk = |index: u64| -> ChunkResult {
        let lo = index * CHUNK;
        let hi = (lo + CHUNK).min(trials);
        let mut result = ChunkResult {
            masses: BTreeMap::new(),
            accepted: 0,
            weight_sum: 0.0,
            weight_sq_sum: 0.0,
        };
        for trial in lo..hi {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            if let Some(hit) = run_trial(&mut rng, n, thresholds, conditioning) {
                let weight = match tilt {
                    None => 1.0,
                    Some((pt1, pt2)) => {
                        // Steps on each axis have matching length/offset
                        // parity by construction.
                        tilt_factor(pt1, hit.k1, hit.x1).expect("axis-1 parity")
                            * tilt_factor(pt2, n - hit.k1, hit.x2).expect("axis-2 parity")
                    }
                };
                *result.masses.entry((hit.r1, hit.r2)).or_insert(0.0) += weight;
                result.accepted += 1;
                result.weight_sum += weight;
                result.weight_sq_sum += weight * weight;
            }
        }
        result
    };

    let chunks: Vec<ChunkResult> = if lanes == 1 {
        (0..chunk_count).map(run_chunk).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(lanes)
            .build()
            .map_err(|e| Error::Invalid {
                what: "worker pool",
                detail: e.to_string(),
            })?;
        pool.install(|| (0..chunk_count).into_par_iter().map(run_chunk).collect())
    };

    // Merge in chunk order: the floating-point sums are then a fixed
    // sequence of additions regardless of which lane ran which chunk.
    let mut law = EmpiricalLaw {
        n,
        conditioning,
        method,
        seed,
        trials,
        accepted: 0,
        masses: BTreeMap::new(),
        weight_sum: 0.0,
        weight_sq_sum: 0.0,
    };
    for chunk in chunks {
        for (cell, weight) in chunk.masses {
            *law.masses.entry(cell).or_insert(0.0) += weight;
        }
        law.accepted += chunk.accepted;
        law.weight_sum += chunk.weight_sum;
        law.weight_sq_sum += chunk.weight_sq_sum;
    }
    Ok(law)
}

/// Walk `n` steps; `None` when the conditioning rejects the path.
fn run_trial(
    rng: &mut ChaCha8Rng,
    n: usize,
    thresholds: Thresholds,
    conditioning: Conditioning,
) -> Option<Accepted> {
    let survival = conditioning.requires_survival();
    let (mut x1, mut x2) = (0i64, 0i64);
    let (mut r1, mut r2) = (0usize, 0usize);
    let mut k1 = 0usize;
    for _ in 0..n {
        let u: f64 = rng.gen();
        if u < thresholds.c2 {
            k1 += 1;
            x1 += if u < thresholds.c1 { 1 } else { -1 };
            if x1 == 0 {
                r1 += 1;
            }
            if survival && x1 < 0 {
                return None;
            }
        } else {
            x2 += if u < thresholds.c3 { 1 } else { -1 };
            if x2 == 0 {
                r2 += 1;
            }
            if survival && x2 < 0 {
                return None;
            }
        }
    }
    let accepted = match conditioning {
        Conditioning::Unconditioned | Conditioning::Meander => true,
        Conditioning::Bridge | Conditioning::NonNegativeBridge => x1 == 0 && x2 == 0,
    };
    accepted.then_some(Accepted { r1, r2, k1, x1, x2 })
}

/// Order-of-magnitude forecast of the probability that one trial satisfies
/// the conditioning, from the closed-form event asymptotics. Used to
/// refuse rejection runs whose acceptance is hopeless.
pub fn acceptance_forecast(n: usize, walk: &StepDistribution, conditioning: Conditioning) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let forecast = match conditioning {
        Conditioning::Unconditioned => 1.0,
        Conditioning::Meander => tau_asymptote(walk, n, Parity::of(n)),
        Conditioning::Bridge => bridge_event_asymptote(walk, n),
        Conditioning::NonNegativeBridge => excursion_event_asymptote(walk, n),
    };
    forecast.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_joint;
    use crate::stats::tv_maps;

    fn symmetric() -> StepDistribution {
        StepDistribution::symmetric()
    }

    fn drifted() -> StepDistribution {
        StepDistribution::parse("0.1,0.3,0.2,0.4").unwrap()
    }

    fn oracle_conditional(
        n: usize,
        walk: &StepDistribution,
        conditioning: Conditioning,
    ) -> BTreeMap<(usize, usize), f64> {
        enumerate_joint(n, walk, conditioning)
            .unwrap()
            .conditional()
            .unwrap()
            .into_iter()
            .map(|(cell, mass)| (cell, crate::numeric::big_rational_to_f64(&mass)))
            .collect()
    }

    #[test]
    fn identical_across_lane_counts_and_reruns() {
        let walk = symmetric();
        let a = sample_with_lanes(8, &walk, Conditioning::Meander, 7, 20_000, Method::Rejection, 1)
            .unwrap();
        let b = sample_with_lanes(8, &walk, Conditioning::Meander, 7, 20_000, Method::Rejection, 8)
            .unwrap();
        let c = sample_with_lanes(8, &walk, Conditioning::Meander, 7, 20_000, Method::Rejection, 3)
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        // And a different seed changes the outcome.
        let d = sample_with_lanes(8, &walk, Conditioning::Meander, 8, 20_000, Method::Rejection, 1)
            .unwrap();
        assert_ne!(a, d);
    }

    #[test]
    fn two_step_pins_from_the_exact_law() {
        // P(N¹=1, N²=0) = 1/8 for the symmetric two-step walk, and the
        // meander acceptance rate is 3/8; a million trials put the
        // empirical values within 3σ ≈ 0.003 for a correct sampler.
        let walk = symmetric();
        let law = sample(2, &walk, Conditioning::Unconditioned, 11, 1_000_000, Method::Rejection)
            .unwrap();
        let mass = law.conditional().unwrap()[&(1, 0)];
        assert!((mass - 0.125).abs() < 0.003, "P(1,0) = {mass}");

        let meander = sample(2, &walk, Conditioning::Meander, 11, 1_000_000, Method::Rejection)
            .unwrap();
        assert!(
            (meander.acceptance_rate() - 0.375).abs() < 0.003,
            "acceptance {}",
            meander.acceptance_rate()
        );
    }

    #[test]
    fn matches_the_oracle_at_n8() {
        let walk = symmetric();
        for conditioning in Conditioning::ALL {
            let law = sample(8, &walk, conditioning, 23, 300_000, Method::Rejection).unwrap();
            let tv = tv_maps(
                &law.conditional().unwrap(),
                &oracle_conditional(8, &walk, conditioning),
            );
            assert!(tv <= 0.03, "{conditioning}: TV {tv}");
        }
    }

    #[test]
    fn tilted_estimates_match_rejection() {
        // Endpoint-pinned events on a drifted walk: the tilted and direct
        // estimators target the same probability; compare within four
        // combined standard errors.
        let walk = drifted();
        for (n, conditioning) in [
            (8, Conditioning::Bridge),
            (10, Conditioning::NonNegativeBridge),
            (6, Conditioning::Meander),
        ] {
            let direct =
                sample(n, &walk, conditioning, 101, 400_000, Method::Rejection).unwrap();
            let tilted = sample(n, &walk, conditioning, 202, 400_000, Method::Tilted).unwrap();
            let gap = (direct.event_estimate() - tilted.event_estimate()).abs();
            let se = (direct.event_standard_error().powi(2)
                + tilted.event_standard_error().powi(2))
            .sqrt();
            assert!(
                gap <= 4.0 * se,
                "{conditioning} n={n}: gap {gap:.3e} > 4·SE {se:.3e}"
            );
        }
    }

    #[test]
    fn tilted_reduces_to_rejection_at_zero_drift() {
        for walk in [symmetric(), StepDistribution::parse("0.15,0.15,0.35,0.35").unwrap()] {
            let a = sample(9, &walk, Conditioning::Meander, 5, 50_000, Method::Rejection).unwrap();
            let b = sample(9, &walk, Conditioning::Meander, 5, 50_000, Method::Tilted).unwrap();
            assert_eq!(a.masses, b.masses);
            assert_eq!(a.weight_sum, b.weight_sum);
        }
    }

    #[test]
    fn input_validation() {
        let walk = symmetric();
        assert!(sample(4, &walk, Conditioning::Bridge, 1, 0, Method::Rejection).is_err());
        assert!(sample(5, &walk, Conditioning::Bridge, 1, 10, Method::Rejection).is_err());
        assert!(sample(5, &walk, Conditioning::Unconditioned, 1, 10, Method::Rejection).is_ok());
    }

    #[test]
    fn exhausted_budget_is_flagged_not_fatal() {
        // Strong inward drift at n = 60: acceptance ≈ 7·10⁻⁶, so 100
        // trials reject everything.
        let law = sample(60, &drifted(), Conditioning::Meander, 3, 100, Method::Rejection)
            .unwrap();
        assert!(law.budget_exhausted());
        assert_eq!(law.accepted(), 0);
        assert!(law.conditional().is_err());
        assert_eq!(law.event_estimate(), 0.0);
    }

    #[test]
    fn forecast_pins() {
        let walk = symmetric();
        assert_eq!(acceptance_forecast(0, &walk, Conditioning::Meander), 1.0);
        assert_eq!(acceptance_forecast(50, &walk, Conditioning::Unconditioned), 1.0);
        let meander = acceptance_forecast(100, &walk, Conditioning::Meander);
        assert!((meander - 4.0 / (std::f64::consts::PI * 100.0)).abs() < 1e-12);
        // Inward drift at n = 200 falls below any practical budget.
        let hopeless = acceptance_forecast(200, &drifted(), Conditioning::Meander);
        assert!(hopeless < 1e-8, "forecast {hopeless}");
        // Small lengths clamp to a probability.
        assert!(acceptance_forecast(2, &walk, Conditioning::Meander) <= 1.0);
    }

    #[test]
    fn empirical_acceptance_tracks_forecast() {
        let walk = symmetric();
        let n = 64;
        let law = sample(n, &walk, Conditioning::Meander, 17, 200_000, Method::Rejection).unwrap();
        let forecast = acceptance_forecast(n, &walk, Conditioning::Meander);
        let ratio = law.acceptance_rate() / forecast;
        assert!(
            (0.5..2.0).contains(&ratio),
            "rate {} vs forecast {forecast}",
            law.acceptance_rate()
        );
    }
}
