//! Lifting one-dimensional tables to two-dimensional joint return laws.
//!
//! Conditioned on the number `H_n = k` of horizontal steps, the two
//! coordinates of a quarter-plane walk evolve as *independent* extracted
//! one-dimensional walks of lengths `k` and `n − k`, and `H_n` itself is
//! binomial with parameter `h1`. Every joint quantity here is therefore a
//! binomial convolution
//!
//! ```text
//! P(joint event) = Σ_k C(n,k) h1^k h2^{n−k} · P₁(event at k) · P₂(event at n−k)
//! ```
//!
//! with the per-axis factors read from the per-length snapshot tables of
//! [`crate::one_dim`]. Exact mode sums all `k = 0..=n`; windowed mode
//! restricts `k/n` to an interval around `h1` and certifies the discarded
//! mass with a Chernoff bound, which is what makes large-`n` float sweeps
//! affordable without giving up error control.

use num::rational::BigRational;
use std::collections::BTreeMap;

use crate::numeric::{big_rational_to_f64, Scalar};
use crate::one_dim::{free_snapshots, survival_curve, survive_snapshots};
use crate::walk::{Axis, Conditioning, StepDistribution};
use crate::{Error, Result};

/// A summation window `[alpha, beta]` for the fraction `H_n / n` of
/// horizontal steps, with Chernoff-certified tail mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialWindow {
    alpha: f64,
    beta: f64,
}

impl BinomialWindow {
    /// A window with `0 ≤ alpha < beta ≤ 1`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) || alpha >= beta {
            return Err(Error::Invalid {
                what: "binomial window",
                detail: format!("[{alpha}, {beta}] is not a sub-interval of [0, 1]"),
            });
        }
        Ok(BinomialWindow { alpha, beta })
    }

    /// The default window around `h1`: `[h1/2, (1 + h1)/2]`, which keeps a
    /// fixed relative margin on both sides for every `h1 ∈ (0, 1)`.
    pub fn default_for(h1: &BigRational) -> Self {
        let h = big_rational_to_f64(h1);
        BinomialWindow {
            alpha: h / 2.0,
            beta: (1.0 + h) / 2.0,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Errors unless `alpha < h < beta`.
    pub fn check_contains(&self, h: f64) -> Result<()> {
        if !(self.alpha < h && h < self.beta) {
            return Err(Error::WindowViolation {
                lo: self.alpha,
                hi: self.beta,
                h,
            });
        }
        Ok(())
    }

    /// The integer summation range `⌈alpha·n⌉ ..= ⌊beta·n⌋`.
    pub fn index_range(&self, n: usize) -> (usize, usize) {
        let lo = (self.alpha * n as f64).ceil() as usize;
        let hi = (self.beta * n as f64).floor() as usize;
        (lo.min(n), hi.min(n))
    }

    /// Chernoff upper bound on `P(H_n ∉ [alpha·n, beta·n])` for
    /// `H_n ~ Binomial(n, h)`: `e^{−n·KL(alpha‖h)} + e^{−n·KL(beta‖h)}`,
    /// clamped to 1.
    pub fn tail_bound(&self, n: usize, h: &BigRational) -> f64 {
        let h = big_rational_to_f64(h);
        let bound = (-(n as f64) * kl_divergence(self.alpha, h)).exp()
            + (-(n as f64) * kl_divergence(self.beta, h)).exp();
        bound.min(1.0)
    }

    /// The geometric rate `ν` with `tail_bound = ν^n` exactly.
    pub fn nu(&self, n: usize, h: &BigRational) -> f64 {
        self.tail_bound(n, h).powf(1.0 / n.max(1) as f64)
    }
}

/// Binary Kullback–Leibler divergence `KL(a ‖ h)` with the `0·ln 0 = 0`
/// convention.
fn kl_divergence(a: f64, h: f64) -> f64 {
    let part = |x: f64, y: f64| if x == 0.0 { 0.0 } else { x * (x / y).ln() };
    part(a, h) + part(1.0 - a, 1.0 - h)
}

/// Summation strategy for the binomial convolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Sum every `k = 0..=n`; the result is exactly normalized on the
    /// rational backend and the truncation remainder is zero.
    Exact,
    /// Sum only `k/n` inside the window; the event mass carried by the
    /// excluded lengths is recorded as the truncation remainder.
    Windowed(BinomialWindow),
}

/// Joint law of the two return counts `(N¹_n, N²_n)` at length `n`.
///
/// The table stores the *unnormalized* joint mass
/// `P(N¹_n = r1, N²_n = r2, conditioning event)` together with the event
/// probability, so both the raw and the conditional law are recoverable.
/// In windowed mode every stored cell (and the event probability) is a
/// lower bound that is within [`Self::truncation_remainder`] of exact.
#[derive(Debug, Clone, PartialEq)]
pub struct JointReturnLaw<T> {
    n: usize,
    conditioning: Conditioning,
    mass: BTreeMap<(usize, usize), T>,
    event_probability: T,
    truncation_remainder: f64,
}

impl<T: Scalar> JointReturnLaw<T> {
    /// Assemble a law from an already-computed table (used by the oracle
    /// and the sampler, which produce the same shape by other means).
    pub(crate) fn from_parts(
        n: usize,
        conditioning: Conditioning,
        mass: BTreeMap<(usize, usize), T>,
        event_probability: T,
    ) -> Self {
        JointReturnLaw {
            n,
            conditioning,
            mass,
            event_probability,
            truncation_remainder: 0.0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn conditioning(&self) -> Conditioning {
        self.conditioning
    }

    /// Non-zero cells `(r1, r2) → P(N¹ = r1, N² = r2, event)` in key order.
    pub fn mass(&self) -> impl Iterator<Item = (&(usize, usize), &T)> {
        self.mass.iter()
    }

    /// One unnormalized cell; zero when absent.
    pub fn cell(&self, r1: usize, r2: usize) -> T {
        self.mass
            .get(&(r1, r2))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// Probability of the conditioning event (total stored mass). Equals 1
    /// for `Unconditioned` in exact mode.
    pub fn event_probability(&self) -> &T {
        &self.event_probability
    }

    /// Event mass discarded by windowing (0 in exact mode), accumulated
    /// term by term rather than bounded, so it stays meaningful even when
    /// the event itself is exponentially small.
    pub fn truncation_remainder(&self) -> f64 {
        self.truncation_remainder
    }

    /// The conditional law `P(N¹ = r1, N² = r2 | event)`.
    ///
    /// # Errors
    ///
    /// `Invalid` when the event probability is zero (nothing to condition
    /// on).
    pub fn conditional(&self) -> Result<BTreeMap<(usize, usize), T>> {
        if self.event_probability.is_zero() {
            return Err(Error::Invalid {
                what: "conditional law",
                detail: format!(
                    "the {} event has zero probability at n = {}",
                    self.conditioning, self.n
                ),
            });
        }
        Ok(self
            .mass
            .iter()
            .map(|(&key, v)| (key, v.div_ref(&self.event_probability)))
            .collect())
    }

    /// Unnormalized marginal of one axis's return count, indexed by `r`.
    pub fn marginal(&self, axis: Axis) -> Vec<T> {
        let pick = |&(r1, r2): &(usize, usize)| match axis {
            Axis::Horizontal => r1,
            Axis::Vertical => r2,
        };
        let rmax = self.mass.keys().map(&pick).max().unwrap_or(0);
        let mut out = vec![T::zero(); rmax + 1];
        for (key, v) in &self.mass {
            let r = pick(key);
            out[r] = out[r].add_ref(v);
        }
        out
    }

    /// Normalized marginal of one axis (sums to 1 up to windowing error).
    pub fn conditional_marginal(&self, axis: Axis) -> Result<Vec<T>> {
        if self.event_probability.is_zero() {
            return Err(Error::Invalid {
                what: "conditional marginal",
                detail: format!(
                    "the {} event has zero probability at n = {}",
                    self.conditioning, self.n
                ),
            });
        }
        Ok(self
            .marginal(axis)
            .into_iter()
            .map(|v| v.div_ref(&self.event_probability))
            .collect())
    }
}

/// Joint law of `(N¹_n, N²_n)` with the conditioning event, by binomial
/// convolution of per-axis tables.
///
/// # Errors
///
/// `ImpossibleConditioning` for endpoint-pinned conditionings at odd `n`;
/// `CapacityExceeded` past the backend length cap; `WindowViolation` if a
/// window excludes `h1`.
pub fn joint_law<T: Scalar>(
    n: usize,
    walk: &StepDistribution,
    conditioning: Conditioning,
    mode: Mode,
) -> Result<JointReturnLaw<T>> {
    conditioning.check_length(n)?;
    let (axis1, axis2) = walk.axes();
    let h1 = walk.h1();

    let (k_lo, k_hi) = match mode {
        Mode::Exact => (0, n),
        Mode::Windowed(window) => {
            window.check_contains(big_rational_to_f64(&h1))?;
            window.index_range(n)
        }
    };

    // Per-length, per-return-count vectors for the event restricted to one
    // axis: u[k][r1] and v[j][r2].
    let (u, v): (Vec<Vec<T>>, Vec<Vec<T>>) = match conditioning {
        Conditioning::Unconditioned => (
            free_snapshots::<T>(n, &axis1.p)?.counts,
            free_snapshots::<T>(n, &axis2.p)?.counts,
        ),
        Conditioning::Bridge => (
            free_snapshots::<T>(n, &axis1.p)?.at_origin,
            free_snapshots::<T>(n, &axis2.p)?.at_origin,
        ),
        Conditioning::Meander => (
            survive_snapshots::<T>(n, &axis1.p)?.meander,
            survive_snapshots::<T>(n, &axis2.p)?.meander,
        ),
        Conditioning::NonNegativeBridge => (
            survive_snapshots::<T>(n, &axis1.p)?.excursion,
            survive_snapshots::<T>(n, &axis2.p)?.excursion,
        ),
    };
    let weights = T::binomial_weights(n, &h1);

    // The mass a window discards, accumulated from the same tables the law
    // is built from rather than bounded a priori: conditioned events can be
    // exponentially smaller than any generic binomial tail bound, which
    // would make the recorded remainder useless for them.
    let remainder = if k_lo == 0 && k_hi == n {
        0.0
    } else {
        let mut outside = T::zero();
        for k in (0..k_lo).chain(k_hi + 1..=n) {
            if weights[k].is_zero() {
                continue;
            }
            let mut uk = T::zero();
            for value in &u[k] {
                uk = uk.add_ref(value);
            }
            let mut vk = T::zero();
            for value in &v[n - k] {
                vk = vk.add_ref(value);
            }
            outside = outside.add_ref(&weights[k].mul_ref(&uk).mul_ref(&vk));
        }
        outside.to_f64()
    };

    let rmax = n / 2;
    let mut acc = vec![vec![T::zero(); rmax + 1]; rmax + 1];
    for k in k_lo..=k_hi {
        if weights[k].is_zero() {
            continue;
        }
        let uk = &u[k];
        let vk = &v[n - k];
        for (r1, uv) in uk.iter().enumerate() {
            if uv.is_zero() {
                continue;
            }
            let wu = weights[k].mul_ref(uv);
            let row = &mut acc[r1];
            for (r2, vv) in vk.iter().enumerate() {
                if vv.is_zero() {
                    continue;
                }
                row[r2] = row[r2].add_ref(&wu.mul_ref(vv));
            }
        }
    }

    let mut mass = BTreeMap::new();
    let mut event_probability = T::zero();
    for (r1, row) in acc.into_iter().enumerate() {
        for (r2, value) in row.into_iter().enumerate() {
            if !value.is_zero() {
                event_probability = event_probability.add_ref(&value);
                mass.insert((r1, r2), value);
            }
        }
    }

    Ok(JointReturnLaw {
        n,
        conditioning,
        mass,
        event_probability,
        truncation_remainder: remainder,
    })
}

/// `P(τ > n)`: the probability the walk stays in the quadrant for `n`
/// steps. Needs only the per-axis survival curves, so it is cheap even for
/// `n` in the thousands.
pub fn exit_probability<T: Scalar>(n: usize, walk: &StepDistribution) -> Result<T> {
    let (axis1, axis2) = walk.axes();
    let s1 = survival_curve::<T>(n, &axis1.p)?;
    let s2 = survival_curve::<T>(n, &axis2.p)?;
    let weights = T::binomial_weights(n, &walk.h1());
    let mut total = T::zero();
    for k in 0..=n {
        total = total.add_ref(&weights[k].mul_ref(&s1[k]).mul_ref(&s2[n - k]));
    }
    Ok(total)
}

/// The windowed arithmetic-progression Bernstein sum
///
/// ```text
/// Σ_{alpha·n ≤ k ≤ beta·n, k ≡ b (mod a)} f(k/n) · C(n,k) h^k (1−h)^{n−k},
/// ```
///
/// which converges to `f(h)/a` as `n → ∞` when `alpha < h < beta`: the
/// binomial mass concentrates at `k ≈ h·n` where `f(k/n) ≈ f(h)`, and the
/// progression `aℕ + b` captures `1/a` of it. Float backend; `f` is only
/// evaluated inside the window, so endpoint singularities outside it are
/// fine.
///
/// # Errors
///
/// `WindowViolation` when `h ∉ (alpha, beta)`; `Invalid` when `a = 0`.
pub fn bernstein_sum(
    f: impl Fn(f64) -> f64,
    h: &BigRational,
    a: usize,
    b: usize,
    n: usize,
    window: &BinomialWindow,
) -> Result<f64> {
    if a == 0 {
        return Err(Error::Invalid {
            what: "progression modulus",
            detail: "a must be ≥ 1".into(),
        });
    }
    let hf = big_rational_to_f64(h);
    window.check_contains(hf)?;
    let (lo, hi) = window.index_range(n);
    // First k ≥ lo with k ≡ b (mod a).
    let mut k = lo + (a + b % a - lo % a) % a;
    let mut sum = 0.0;
    while k <= hi {
        sum += f(k as f64 / n as f64) * crate::numeric::ln_binomial_pmf(n, k, hf).exp();
        k += a;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;
    use crate::one_dim::joint_table;
    use num::{One, Zero};

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn symmetric() -> StepDistribution {
        StepDistribution::symmetric()
    }

    #[test]
    fn frozen_two_step_laws() {
        let walk = symmetric();
        let free = joint_law::<BigRational>(2, &walk, Conditioning::Unconditioned, Mode::Exact)
            .unwrap();
        assert_eq!(free.cell(1, 0), rat("1/8"));
        assert_eq!(free.cell(0, 1), rat("1/8"));
        assert_eq!(free.cell(0, 0), rat("3/4"));
        assert!(free.event_probability().is_one());

        let bridge =
            joint_law::<BigRational>(2, &walk, Conditioning::Bridge, Mode::Exact).unwrap();
        assert_eq!(*bridge.event_probability(), rat("1/4"));

        let meander =
            joint_law::<BigRational>(2, &walk, Conditioning::Meander, Mode::Exact).unwrap();
        assert_eq!(*meander.event_probability(), rat("3/8"));

        let nnb = joint_law::<BigRational>(2, &walk, Conditioning::NonNegativeBridge, Mode::Exact)
            .unwrap();
        assert_eq!(*nnb.event_probability(), rat("1/8"));
        let conditional = nnb.conditional().unwrap();
        assert_eq!(conditional[&(1, 0)], rat("1/2"));
        assert_eq!(conditional[&(0, 1)], rat("1/2"));
    }

    #[test]
    fn unconditioned_mass_is_exactly_one() {
        for spec in ["1/4,1/4,1/4,1/4", "0.1,0.3,0.2,0.4"] {
            let walk = StepDistribution::parse(spec).unwrap();
            for n in [0, 1, 5, 8, 13] {
                let law =
                    joint_law::<BigRational>(n, &walk, Conditioning::Unconditioned, Mode::Exact)
                        .unwrap();
                assert!(law.event_probability().is_one(), "{spec} n={n}");
            }
        }
    }

    #[test]
    fn odd_bridge_is_rejected() {
        let err = joint_law::<BigRational>(3, &symmetric(), Conditioning::Bridge, Mode::Exact)
            .unwrap_err();
        assert!(matches!(err, Error::ImpossibleConditioning { .. }));
    }

    #[test]
    fn axis_swap_transposes_the_table() {
        let walk = StepDistribution::parse("0.1,0.3,0.2,0.4").unwrap();
        let swapped = walk.swap_axes();
        for conditioning in Conditioning::ALL {
            let n = 8;
            let a = joint_law::<BigRational>(n, &walk, conditioning, Mode::Exact).unwrap();
            let b = joint_law::<BigRational>(n, &swapped, conditioning, Mode::Exact).unwrap();
            for (&(r1, r2), mass) in a.mass() {
                assert_eq!(*mass, b.cell(r2, r1), "{conditioning} ({r1},{r2})");
            }
            assert_eq!(a.event_probability(), b.event_probability());
        }
    }

    #[test]
    fn unconditioned_marginal_is_the_binomial_mixture() {
        // Summing the joint law over r2 must reproduce
        // Σ_k P(Ñ¹_k = r1) C(n,k) h1^k h2^{n−k} exactly.
        let walk = StepDistribution::parse("0.1,0.3,0.2,0.4").unwrap();
        let n = 12;
        let law =
            joint_law::<BigRational>(n, &walk, Conditioning::Unconditioned, Mode::Exact).unwrap();
        let marginal = law.marginal(Axis::Horizontal);

        let weights = <BigRational as Scalar>::binomial_weights(n, &walk.h1());
        let p1 = walk.axis(Axis::Horizontal).p;
        let mut expected = vec![BigRational::zero(); n / 2 + 1];
        for (k, w) in weights.iter().enumerate() {
            let table = joint_table::<BigRational>(k, &p1).unwrap();
            for (r, m) in table.return_marginal().into_iter().enumerate() {
                expected[r] += w * m;
            }
        }
        for (r, m) in marginal.iter().enumerate() {
            assert_eq!(*m, expected[r], "r={r}");
        }
    }

    #[test]
    fn exit_probability_values() {
        assert!(exit_probability::<BigRational>(0, &symmetric()).unwrap().is_one());
        assert_eq!(exit_probability::<BigRational>(2, &symmetric()).unwrap(), rat("3/8"));
        // Agrees with the meander event probability from the full engine.
        let walk = StepDistribution::parse("0.1,0.3,0.2,0.4").unwrap();
        for n in [1, 4, 9] {
            let law = joint_law::<BigRational>(n, &walk, Conditioning::Meander, Mode::Exact)
                .unwrap();
            assert_eq!(
                exit_probability::<BigRational>(n, &walk).unwrap(),
                *law.event_probability(),
                "n={n}"
            );
        }
        // Non-increasing in n.
        let curve: Vec<BigRational> = (0..=10)
            .map(|n| exit_probability::<BigRational>(n, &symmetric()).unwrap())
            .collect();
        assert!(curve.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn windowed_cells_stay_within_the_certified_remainder() {
        let walk = StepDistribution::parse("0.25,0.25,0.3,0.2").unwrap();
        let n = 512;
        let window = BinomialWindow::default_for(&walk.h1());
        for conditioning in Conditioning::ALL {
            let exact = joint_law::<f64>(n, &walk, conditioning, Mode::Exact).unwrap();
            let windowed =
                joint_law::<f64>(n, &walk, conditioning, Mode::Windowed(window)).unwrap();
            let remainder = windowed.truncation_remainder();
            assert!(remainder > 0.0 && remainder < 1e-6, "remainder {remainder}");
            for (&(r1, r2), mass) in exact.mass() {
                let w = windowed.cell(r1, r2);
                assert!(w <= *mass + 1e-15, "windowed exceeds exact at ({r1},{r2})");
                assert!(
                    mass - w <= remainder,
                    "({r1},{r2}): {mass} vs {w}, remainder {remainder}"
                );
            }
            let lost = exact.event_probability() - windowed.event_probability();
            assert!(
                (-1e-12..=remainder + 1e-12).contains(&lost),
                "{conditioning}: lost {lost}"
            );
        }
    }

    #[test]
    fn window_validation() {
        assert!(BinomialWindow::new(0.5, 0.4).is_err());
        assert!(BinomialWindow::new(-0.1, 0.4).is_err());
        let window = BinomialWindow::new(0.6, 0.9).unwrap();
        let err = joint_law::<f64>(
            10,
            &symmetric(),
            Conditioning::Unconditioned,
            Mode::Windowed(window),
        )
        .unwrap_err();
        assert!(matches!(err, Error::WindowViolation { .. }));
    }

    #[test]
    fn chernoff_bound_is_a_true_bound() {
        // Compare against the exact binomial tail mass.
        let h = rat("1/2");
        let window = BinomialWindow::new(0.3, 0.7).unwrap();
        for n in [10, 50, 200] {
            let weights = <BigRational as Scalar>::binomial_weights(n, &h);
            let (lo, hi) = window.index_range(n);
            let outside: BigRational = weights
                .iter()
                .enumerate()
                .filter(|&(k, _)| k < lo || k > hi)
                .map(|(_, w)| w.clone())
                .sum();
            let bound = window.tail_bound(n, &h);
            assert!(
                big_rational_to_f64(&outside) <= bound,
                "n={n}: exact {outside} vs bound {bound}"
            );
            let nu = window.nu(n, &h);
            assert!(nu > 0.0 && nu < 1.0, "nu={nu}");
        }
    }

    #[test]
    fn bernstein_sum_basics() {
        // Full window, f ≡ 1: the whole binomial mass.
        let full = BinomialWindow::new(0.0, 1.0).unwrap();
        let h = rat("0.3");
        let total = bernstein_sum(|_| 1.0, &h, 1, 0, 500, &full).unwrap();
        assert!((total - 1.0).abs() < 1e-9, "{total}");

        // Even indices capture half the mass.
        let window = BinomialWindow::new(0.3, 0.7).unwrap();
        let even = bernstein_sum(|_| 1.0, &rat("1/2"), 2, 0, 10_000, &window).unwrap();
        assert!((even - 0.5).abs() < 1e-3, "{even}");

        // Residue classes partition the window mass.
        let r0 = bernstein_sum(|x| x, &rat("1/2"), 3, 0, 2_000, &window).unwrap();
        let r1 = bernstein_sum(|x| x, &rat("1/2"), 3, 1, 2_000, &window).unwrap();
        let r2 = bernstein_sum(|x| x, &rat("1/2"), 3, 2, 2_000, &window).unwrap();
        let all = bernstein_sum(|x| x, &rat("1/2"), 1, 0, 2_000, &window).unwrap();
        assert!((r0 + r1 + r2 - all).abs() < 1e-12);

        assert!(bernstein_sum(|_| 1.0, &rat("0.9"), 1, 0, 100, &window).is_err());
        assert!(bernstein_sum(|_| 1.0, &rat("1/2"), 0, 0, 100, &window).is_err());
    }

    #[test]
    fn zero_length_laws() {
        for conditioning in Conditioning::ALL {
            let law =
                joint_law::<BigRational>(0, &symmetric(), conditioning, Mode::Exact).unwrap();
            assert!(law.event_probability().is_one(), "{conditioning}");
            assert!(law.cell(0, 0).is_one());
        }
    }
}
