//! The catalogue of limiting distributions and asymptotic constants.
//!
//! As `n → ∞` the conditional laws of the return counts converge to a small
//! set of explicit distributions, and which one applies is decided per axis
//! by the sign of the extracted drift `p̃ − q̃`:
//!
//! | conditioning        | driftless axis        | drifted axis                         |
//! |---------------------|-----------------------|--------------------------------------|
//! | unconditioned       | half-normal (÷ √(hn)) | geometric `𝒢(|p̃−q̃|)`               |
//! | bridge              | Rayleigh (÷ √(hn))    | Rayleigh (÷ √(hn)) — drift cancels   |
//! | meander             | geometric `𝒢(1/2)`    | `𝒢(p̃)` outward; kernel mix inward  |
//! | non-negative bridge | `ℬ𝒩(2,1/2)`          | `ℬ𝒩(2,1/2)` — drift cancels         |
//!
//! For the meander with *both* axes drifting inward the limit is a genuine
//! two-component mixture whose coordinates are **not** independent: the two
//! per-axis laws share the parity of the number of horizontal steps, which
//! survives in the limit as a common Bernoulli label. Everything here is an
//! evaluator — masses, cdfs, certified tail bounds and the asymptotic
//! constants used for exit-time predictions and sampling forecasts.
//!
//! # Inward-drift survival constants
//!
//! For an inward-drifting axis (`p̃ < 1/2`) the survival probability decays
//! like `P(τ̃ > k) ≈ c(k mod 2) · ρ^k / k^{3/2}` with `ρ = √(4p̃q̃)`. The
//! constants follow from the first-passage law
//! `P(τ̃ = m) = (1/m) C(m, (m−1)/2) p̃^{(m−1)/2} q̃^{(m+1)/2}` (odd `m`),
//! whose central-binomial asymptotics give
//! `P(τ̃ = m) ≈ κ √(q̃/p̃) ρ^m / m^{3/2}`; summing the odd tail yields
//!
//! ```text
//! c(even) = κ √(q̃/p̃) · ρ/(1−ρ²),   c(odd) = ρ · c(even),   κ = √(2/π).
//! ```
//!
//! The `√(q̃/p̃)` factor is easy to get backwards; the crate pins it with a
//! one-step sanity check (`P(τ̃ = 1) = q̃`) and, end to end, by comparing
//! [`tau_asymptote`] against the exact engine in the acceptance suite.
//!
//! At usable lengths the collapsed form `c(parity) ρ^k k^{−3/2}` is still
//! visibly biased — the geometric window of the tail sum spans
//! `~2/(1−ρ²)` further steps over which `m^{−3/2}` keeps falling, costing
//! ~10–15% at `k ≈ 200` when `ρ²` is close to 1. [`tau_asymptote`]
//! therefore keeps each axis's odd-tail sum `Σ ρ^m m^{−3/2}` exact
//! (evaluated at the binomial saddle point) and lets it collapse to the
//! displayed constants only as `n → ∞`.

use statrs::function::erf::erf;
use std::f64::consts::PI;

use crate::walk::{Axis, AxisWalk, Conditioning, DriftClass, Parity, StepDistribution};
use crate::{Error, Result};

/// `κ = √(2/π)`, the driftless survival constant: `P(τ̃ > k) ≈ κ/√k`.
pub fn kappa() -> f64 {
    (2.0 / PI).sqrt()
}

/// Half-normal cdf `√(2/π) ∫₀ˣ e^{−t²/2} dt = erf(x/√2)`.
pub fn halfnormal_cdf(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::NegativeArgument {
            what: "the half-normal cdf",
            value: x,
        });
    }
    Ok(erf(x / std::f64::consts::SQRT_2))
}

/// Rayleigh cdf `1 − e^{−x²/2}`.
pub fn rayleigh_cdf(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::NegativeArgument {
            what: "the Rayleigh cdf",
            value: x,
        });
    }
    Ok(-(-x * x / 2.0).exp_m1())
}

/// Geometric pmf `α(1−α)^r` on `r ≥ 0`.
pub fn geometric_pmf(alpha: f64, r: usize) -> f64 {
    debug_assert!(alpha > 0.0 && alpha <= 1.0);
    alpha * (1.0 - alpha).powi(r as i32)
}

/// Negative-binomial `ℬ𝒩(2, 1/2)` pmf `r/2^{r+1}` on `r ≥ 1`.
///
/// # Errors
///
/// `ZeroUnsupported` at `r = 0`: a non-negative bridge of positive length
/// always produces at least one return per axis, so the limit law has no
/// mass at zero.
pub fn negbin_pmf(r: usize) -> Result<f64> {
    if r == 0 {
        return Err(Error::ZeroUnsupported);
    }
    Ok(r as f64 * 0.5f64.powi(r as i32 + 1))
}

/// The two-parameter kernel `(c + (1−c)r) / 2^{r+1}` shared by every
/// inward-drift meander limit; it has unit mass for any `c` and degenerates
/// to `𝒢(1/2)` at `c = 1`.
fn kernel(c: f64, r: usize) -> f64 {
    (c + (1.0 - c) * r as f64) * 0.5f64.powi(r as i32 + 1)
}

/// Mass of the kernel beyond `rmax`: `Σ_{r > rmax} = (c + (1−c)(rmax+2)) / 2^{rmax+1}`.
fn kernel_tail(c: f64, rmax: usize) -> f64 {
    (c + (1.0 - c) * (rmax as f64 + 2.0)) * 0.5f64.powi(rmax as i32 + 1)
}

/// Limit pmf of the 1D return count conditioned on survival.
///
/// Outward or driftless (`p ≥ 1/2`): geometric `𝒢(p)`, parity-free.
/// Inward (`p < 1/2`): the kernel with `c = 2p` along even lengths and
/// `c = 1/(2(1−p))` along odd ones.
pub fn meander_1d_pmf(p: f64, parity: Parity, r: usize) -> f64 {
    if p >= 0.5 {
        geometric_pmf(p, r)
    } else {
        let c = match parity {
            Parity::Even => 2.0 * p,
            Parity::Odd => 0.5 / (1.0 - p),
        };
        kernel(c, r)
    }
}

/// Per-axis limit constants, decided by the drift class of the extracted
/// walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisLimit {
    pub drift: DriftClass,
    /// Tilt rate `√(4p̃q̃)` (1 iff driftless). Governs endpoint-pinned
    /// decay for every drift sign and survival decay for inward drift.
    pub rho: f64,
    /// Polynomial survival exponent: 0 outward, 1/2 driftless, 3/2 inward.
    pub alpha: f64,
    /// Survival constants `c(even)`, `c(odd)`:
    /// `P(τ̃ > k) ≈ c(k mod 2) · survival_rate^k / k^alpha`.
    pub c_even: f64,
    pub c_odd: f64,
    /// Kernel parameters of the inward meander limit: `a = 2p̃` (even),
    /// `b = 1/(2q̃)` (odd). Both equal 1 at zero drift.
    pub a: f64,
    pub b: f64,
    /// Up-step probability of the extracted walk.
    pub p_tilde: f64,
    /// Probability that a step of the full walk moves this axis.
    pub h: f64,
}

impl AxisLimit {
    pub fn for_axis(axis: &AxisWalk) -> Self {
        let p = axis.p_f64();
        let q = 1.0 - p;
        let h = axis.h_f64();
        let drift = axis.drift();
        let rho = (4.0 * p * q).sqrt();
        let (alpha, c_even, c_odd) = match drift {
            DriftClass::Positive => {
                let c = (p - q) / p;
                (0.0, c, c)
            }
            DriftClass::Zero => (0.5, kappa(), kappa()),
            DriftClass::Negative => {
                let c0 = kappa() * (q / p).sqrt() * rho / (1.0 - rho * rho);
                (1.5, c0, rho * c0)
            }
        };
        AxisLimit {
            drift,
            rho,
            alpha,
            c_even,
            c_odd,
            a: 2.0 * p,
            b: 0.5 / q,
            p_tilde: p,
            h,
        }
    }

    /// `c(parity)`.
    pub fn c(&self, parity: Parity) -> f64 {
        match parity {
            Parity::Even => self.c_even,
            Parity::Odd => self.c_odd,
        }
    }

    /// The geometric survival decay rate: `rho` inward, 1 otherwise.
    pub fn survival_rate(&self) -> f64 {
        match self.drift {
            DriftClass::Negative => self.rho,
            _ => 1.0,
        }
    }

    /// `P(τ̃ > k)` with the geometric part `survival_rate()^k` factored
    /// out, at a (fractional) axis length `k` of the given parity.
    /// Collapses to `c(parity)·k^{−3/2}` (inward), `κ·k^{−1/2}`
    /// (driftless) or `(p̃−q̃)/p̃` (outward) as `k → ∞`.
    fn survival_prefactor(&self, k: f64, parity: Parity) -> f64 {
        match self.drift {
            DriftClass::Positive => (2.0 * self.p_tilde - 1.0) / self.p_tilde,
            DriftClass::Zero => kappa() / k.sqrt(),
            DriftClass::Negative => {
                let delta = match parity {
                    Parity::Even => 1.0,
                    Parity::Odd => 2.0,
                };
                let q_over_p = (1.0 - self.p_tilde) / self.p_tilde;
                kappa() * q_over_p.sqrt() * odd_tail_sum(self.rho, k, delta)
            }
        }
    }

    /// Meander conditional limit pmf along lengths of the given parity.
    pub fn phi(&self, parity: Parity, r: usize) -> f64 {
        meander_1d_pmf(self.p_tilde, parity, r)
    }
}

/// All limit constants of a walk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConstants {
    pub axis1: AxisLimit,
    pub axis2: AxisLimit,
    /// Tilt rate of the number of axis-moving steps: `θ = ρ₁h₁ + ρ₂h₂`,
    /// equal to 1 iff both axes are driftless. Governs the decay of
    /// endpoint-pinned events.
    pub theta: f64,
}

impl LimitConstants {
    pub fn for_walk(walk: &StepDistribution) -> Self {
        let (a1, a2) = walk.axes();
        let axis1 = AxisLimit::for_axis(&a1);
        let axis2 = AxisLimit::for_axis(&a2);
        let theta = axis1.rho * axis1.h + axis2.rho * axis2.h;
        LimitConstants {
            axis1,
            axis2,
            theta,
        }
    }
}

/// One limiting marginal distribution (unit scale; callers divide counts by
/// `√(h·n)` for the continuous families).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Marginal {
    HalfNormal,
    Rayleigh,
    Geometric { alpha: f64 },
    NegBinomialTwoHalf,
    /// Convex combination `w·kernel(a, ·) + (1−w)·kernel(b, ·)` of the two
    /// parity branches of an inward-drift meander limit.
    ReturnMixture { a: f64, b: f64, weight_even: f64 },
}

impl Marginal {
    pub fn is_discrete(&self) -> bool {
        !matches!(self, Marginal::HalfNormal | Marginal::Rayleigh)
    }

    /// Probability mass at `r` (discrete families only).
    pub fn pmf(&self, r: usize) -> Result<f64> {
        match *self {
            Marginal::Geometric { alpha } => Ok(geometric_pmf(alpha, r)),
            Marginal::NegBinomialTwoHalf => {
                if r == 0 {
                    Ok(0.0)
                } else {
                    negbin_pmf(r)
                }
            }
            Marginal::ReturnMixture { a, b, weight_even } => {
                Ok(weight_even * kernel(a, r) + (1.0 - weight_even) * kernel(b, r))
            }
            Marginal::HalfNormal | Marginal::Rayleigh => Err(Error::Invalid {
                what: "pmf",
                detail: "continuous limit laws have no point masses".into(),
            }),
        }
    }

    /// Cumulative distribution function (continuous families only).
    pub fn cdf(&self, x: f64) -> Result<f64> {
        match self {
            Marginal::HalfNormal => halfnormal_cdf(x),
            Marginal::Rayleigh => rayleigh_cdf(x),
            _ => Err(Error::Invalid {
                what: "cdf",
                detail: "discrete limit laws are compared through their pmf".into(),
            }),
        }
    }

    /// Certified mass beyond `rmax` (discrete families only).
    pub fn tail_beyond(&self, rmax: usize) -> Result<f64> {
        match *self {
            Marginal::Geometric { alpha } => Ok((1.0 - alpha).powi(rmax as i32 + 1)),
            // Σ_{r>R} r/2^{r+1} = (R+2)/2^{R+1}.
            Marginal::NegBinomialTwoHalf => Ok((rmax as f64 + 2.0) * 0.5f64.powi(rmax as i32 + 1)),
            Marginal::ReturnMixture { a, b, weight_even } => {
                Ok(weight_even * kernel_tail(a, rmax) + (1.0 - weight_even) * kernel_tail(b, rmax))
            }
            Marginal::HalfNormal | Marginal::Rayleigh => Err(Error::Invalid {
                what: "tail bound",
                detail: "only discrete limit laws carry a truncation tail".into(),
            }),
        }
    }
}

/// One product component of the two-component meander mixture: which parity
/// branch each axis uses, and the component's weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureComponent {
    pub parity1: Parity,
    pub parity2: Parity,
    pub weight: f64,
}

/// A limiting joint law: either a product of independent marginals or the
/// two-component mixture of the double-inward meander, whose coordinates
/// are dependent through the shared component label.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitLaw {
    Product {
        first: Marginal,
        second: Marginal,
    },
    Mixture2d {
        /// Kernel parameters (even, odd) of each axis.
        phi1: (f64, f64),
        phi2: (f64, f64),
        components: [MixtureComponent; 2],
    },
}

impl LimitLaw {
    pub fn is_discrete(&self) -> bool {
        match self {
            LimitLaw::Product { first, second } => first.is_discrete() && second.is_discrete(),
            LimitLaw::Mixture2d { .. } => true,
        }
    }

    /// Joint pmf at `(r1, r2)` (discrete laws only).
    pub fn pmf2(&self, r1: usize, r2: usize) -> Result<f64> {
        match self {
            LimitLaw::Product { first, second } => Ok(first.pmf(r1)? * second.pmf(r2)?),
            LimitLaw::Mixture2d {
                phi1,
                phi2,
                components,
            } => Ok(components
                .iter()
                .map(|comp| {
                    comp.weight
                        * kernel(pick(*phi1, comp.parity1), r1)
                        * kernel(pick(*phi2, comp.parity2), r2)
                })
                .sum()),
        }
    }

    /// Marginal law of one axis.
    pub fn marginal(&self, axis: Axis) -> Marginal {
        match self {
            LimitLaw::Product { first, second } => match axis {
                Axis::Horizontal => *first,
                Axis::Vertical => *second,
            },
            LimitLaw::Mixture2d {
                phi1,
                phi2,
                components,
            } => {
                let (params, parity_of) = match axis {
                    Axis::Horizontal => (*phi1, [components[0].parity1, components[1].parity1]),
                    Axis::Vertical => (*phi2, [components[0].parity2, components[1].parity2]),
                };
                let weight_even = components
                    .iter()
                    .zip(parity_of)
                    .filter(|&(_, parity)| parity == Parity::Even)
                    .map(|(comp, _)| comp.weight)
                    .sum();
                Marginal::ReturnMixture {
                    a: params.0,
                    b: params.1,
                    weight_even,
                }
            }
        }
    }

    /// Union bound on the mass outside `[0, r1max] × [0, r2max]` (discrete
    /// laws only).
    pub fn tail_beyond(&self, r1max: usize, r2max: usize) -> Result<f64> {
        Ok(self.marginal(Axis::Horizontal).tail_beyond(r1max)?
            + self.marginal(Axis::Vertical).tail_beyond(r2max)?)
    }
}

fn pick(params: (f64, f64), parity: Parity) -> f64 {
    match parity {
        Parity::Even => params.0,
        Parity::Odd => params.1,
    }
}

/// The limiting joint law of the rescaled return counts.
///
/// `parity` only matters for the meander of a walk whose axes both drift
/// inward; every other case is parity-free.
pub fn limit_joint(walk: &StepDistribution, conditioning: Conditioning, parity: Parity) -> LimitLaw {
    let constants = LimitConstants::for_walk(walk);
    let (l1, l2) = (constants.axis1, constants.axis2);
    match conditioning {
        Conditioning::Unconditioned => LimitLaw::Product {
            first: unconditioned_marginal(&l1),
            second: unconditioned_marginal(&l2),
        },
        // Pinning the endpoint cancels the drift exactly, so the bridge and
        // non-negative-bridge limits never depend on it.
        Conditioning::Bridge => LimitLaw::Product {
            first: Marginal::Rayleigh,
            second: Marginal::Rayleigh,
        },
        Conditioning::NonNegativeBridge => LimitLaw::Product {
            first: Marginal::NegBinomialTwoHalf,
            second: Marginal::NegBinomialTwoHalf,
        },
        Conditioning::Meander => {
            let inward1 = l1.drift == DriftClass::Negative;
            let inward2 = l2.drift == DriftClass::Negative;
            match (inward1, inward2) {
                (false, false) => LimitLaw::Product {
                    first: Marginal::Geometric { alpha: l1.p_tilde },
                    second: Marginal::Geometric { alpha: l2.p_tilde },
                },
                // One inward axis: its parity branches mix with weights
                // 1 : ρ (the surviving mass along odd lengths is ρ times
                // the even one), independently of n's parity, and the other
                // axis stays geometric.
                (true, false) => LimitLaw::Product {
                    first: Marginal::ReturnMixture {
                        a: l1.a,
                        b: l1.b,
                        weight_even: 1.0 / (1.0 + l1.rho),
                    },
                    second: Marginal::Geometric { alpha: l2.p_tilde },
                },
                (false, true) => LimitLaw::Product {
                    first: Marginal::Geometric { alpha: l1.p_tilde },
                    second: Marginal::ReturnMixture {
                        a: l2.a,
                        b: l2.b,
                        weight_even: 1.0 / (1.0 + l2.rho),
                    },
                },
                // Both inward: the parities of the two extracted lengths
                // are locked together by n, so the component label is
                // shared — the coordinates are not independent.
                (true, true) => {
                    let components = match parity {
                        Parity::Even => {
                            let w = 1.0 / (1.0 + l1.rho * l2.rho);
                            [
                                MixtureComponent {
                                    parity1: Parity::Even,
                                    parity2: Parity::Even,
                                    weight: w,
                                },
                                MixtureComponent {
                                    parity1: Parity::Odd,
                                    parity2: Parity::Odd,
                                    weight: 1.0 - w,
                                },
                            ]
                        }
                        Parity::Odd => {
                            let w = l2.rho / (l1.rho + l2.rho);
                            [
                                MixtureComponent {
                                    parity1: Parity::Even,
                                    parity2: Parity::Odd,
                                    weight: w,
                                },
                                MixtureComponent {
                                    parity1: Parity::Odd,
                                    parity2: Parity::Even,
                                    weight: 1.0 - w,
                                },
                            ]
                        }
                    };
                    LimitLaw::Mixture2d {
                        phi1: (l1.a, l1.b),
                        phi2: (l2.a, l2.b),
                        components,
                    }
                }
            }
        }
    }
}

fn unconditioned_marginal(axis: &AxisLimit) -> Marginal {
    match axis.drift {
        DriftClass::Zero => Marginal::HalfNormal,
        _ => Marginal::Geometric {
            alpha: (2.0 * axis.p_tilde - 1.0).abs(),
        },
    }
}

/// Per-axis rescale factors `a_n`: counts are divided by `√(h_i n)` when
/// the limiting marginal is continuous, and left alone when it is discrete.
pub fn limit_rescale(walk: &StepDistribution, n: usize, conditioning: Conditioning) -> (f64, f64) {
    let (a1, a2) = walk.axes();
    let scale = |axis: &AxisWalk| -> f64 {
        let continuous = match conditioning {
            Conditioning::Bridge => true,
            Conditioning::Unconditioned => axis.drift() == DriftClass::Zero,
            Conditioning::Meander | Conditioning::NonNegativeBridge => false,
        };
        if continuous {
            (axis.h_f64() * n as f64).sqrt()
        } else {
            1.0
        }
    };
    (scale(&a1), scale(&a2))
}

/// Asymptotic approximant of `P(τ > n)`.
///
/// The binomial convolution of the per-axis survivals concentrates at
/// `k/n ≈ x₀ = s₁h₁/θ_s`, `θ_s = s₁h₁ + s₂h₂` (`s_i` the per-axis survival
/// rate), so
///
/// ```text
/// P(τ > n) ≈ θ_sⁿ · C(x₀·n, (1−x₀)·n, parity),
/// ```
///
/// where `C` multiplies the per-axis survival prefactors
/// `P(τ̃_i > k) / s_i^k` evaluated at the split lengths and averages them
/// over the two step-count parity patterns — `(even, even)`/`(odd, odd)`
/// for even `n`, mixed for odd — each of which captures half the binomial
/// mass. For the symmetric walk this collapses to `κ²/(n·√(h₁h₂))`.
pub fn tau_asymptote(walk: &StepDistribution, n: usize, parity: Parity) -> f64 {
    let constants = LimitConstants::for_walk(walk);
    let (l1, l2) = (constants.axis1, constants.axis2);
    let (s1, s2) = (l1.survival_rate(), l2.survival_rate());
    let theta = s1 * l1.h + s2 * l2.h;
    let x0 = s1 * l1.h / theta;
    let (k1, k2) = (x0 * n as f64, (1.0 - x0) * n as f64);
    // The binomial step split is (even, even) or (odd, odd) for even n and
    // mixed for odd n, each pattern with asymptotic weight 1/2.
    let pairs = match parity {
        Parity::Even => [(Parity::Even, Parity::Even), (Parity::Odd, Parity::Odd)],
        Parity::Odd => [(Parity::Even, Parity::Odd), (Parity::Odd, Parity::Even)],
    };
    let mixed: f64 = pairs
        .iter()
        .map(|&(p1, p2)| l1.survival_prefactor(k1, p1) * l2.survival_prefactor(k2, p2))
        .sum::<f64>()
        / 2.0;
    (n as f64 * theta.ln()).exp() * mixed
}

/// `Σ_{j≥0} ρ^{δ+2j} (k+δ+2j)^{−3/2}`: the odd-index survival tail beyond
/// `k`. Kept as a sum because collapsing `(k+…)^{−3/2}` to `k^{−3/2}`
/// costs ~10% at `k ≈ 200` once `ρ²` is close to 1.
fn odd_tail_sum(rho: f64, k: f64, delta: f64) -> f64 {
    let step = rho * rho;
    let mut weight = rho.powf(delta);
    let mut m = k + delta;
    let mut total = 0.0;
    loop {
        let term = weight * m.powf(-1.5);
        total += term;
        if term <= total * 1e-16 {
            return total;
        }
        weight *= step;
        m += 2.0;
    }
}

/// Asymptotic approximant of the bridge event `P(S_n = 0)` (even `n`;
/// zero at odd `n`). Endpoint pinning decays at the tilt rate `ρ_i` on
/// both axes regardless of drift sign:
/// `P(S̃_k = 0) ≈ κ ρ^k / √k` along even `k`.
pub fn bridge_event_asymptote(walk: &StepDistribution, n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let constants = LimitConstants::for_walk(walk);
    let l1 = constants.axis1;
    let theta = constants.theta;
    let x0 = l1.rho * l1.h / theta;
    let nf = n as f64;
    // Only even k contribute (half the binomial mass).
    (nf * theta.ln()).exp() * kappa() * kappa() / (2.0 * nf) / (x0 * (1.0 - x0)).sqrt()
}

/// Asymptotic approximant of the non-negative-bridge event
/// `P(τ > n, S_n = 0)` (even `n`; zero at odd `n`), from the per-axis
/// estimate `P(τ̃ > k, S̃_k = 0) ≈ 2κ ρ^k / k^{3/2}` along even `k`.
pub fn excursion_event_asymptote(walk: &StepDistribution, n: usize) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let constants = LimitConstants::for_walk(walk);
    let l1 = constants.axis1;
    let theta = constants.theta;
    let x0 = l1.rho * l1.h / theta;
    let nf = n as f64;
    (nf * theta.ln()).exp() * 2.0 * kappa() * kappa() / (nf * nf * nf)
        * (x0 * (1.0 - x0)).powf(-1.5)
}

/// Finite-`n` check pair for the convolution asymptotics of two
/// polynomially decaying sequences: with `a_k = a(k+1)^{−α}` and
/// `b_k = b(k+1)^{−α}` (`α > 1`), returns
///
/// * `lhs = Σ_{k=0}^n a_k b_{n−k}`, and
/// * `rhs = (A·b + a·B)/n^α`, `A = Σa_k = a·ζ(α)`, `B = b·ζ(α)`,
///
/// whose ratio tends to 1: the convolution mass concentrates at the two
/// ends `k ≈ 0` and `k ≈ n`.
///
/// # Errors
///
/// `Invalid` unless `α > 1` and `a, b > 0`.
pub fn convolution_asymptotics_check(
    alpha: f64,
    a: f64,
    b: f64,
    n: usize,
) -> Result<(f64, f64)> {
    if !(alpha > 1.0) || !(a > 0.0) || !(b > 0.0) || n == 0 {
        return Err(Error::Invalid {
            what: "convolution check parameters",
            detail: format!("need alpha > 1, a > 0, b > 0, n ≥ 1; got alpha={alpha} a={a} b={b} n={n}"),
        });
    }
    let lhs: f64 = (0..=n)
        .map(|k| {
            a * ((k + 1) as f64).powf(-alpha) * b * ((n - k + 1) as f64).powf(-alpha)
        })
        .sum();
    let zeta = zeta_by_summation(alpha);
    let rhs = (a * zeta * b + a * b * zeta) / (n as f64).powf(alpha);
    Ok((lhs, rhs))
}

/// `ζ(α)` by direct summation with a midpoint-rule tail: the remainder
/// `Σ_{m>M} m^{−α}` is `(M+1/2)^{1−α}/(α−1)` up to `O(M^{−1−α})`.
fn zeta_by_summation(alpha: f64) -> f64 {
    const M: usize = 100_000;
    let head: f64 = (1..=M).map(|m| (m as f64).powf(-alpha)).sum();
    head + (M as f64 + 0.5).powf(1.0 - alpha) / (alpha - 1.0)
}
