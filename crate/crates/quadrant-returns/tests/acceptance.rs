//! Acceptance gate: twelve numbered end-to-end checks, one test (and one
//! harness line) each. Expensive laws are computed once and shared, so the
//! margin audit in check 12 reuses the distances measured in checks 4–8.
//!
//! Run `cargo test --test acceptance -- --nocapture` to see the measured
//! values behind every PASS line.

use std::sync::OnceLock;

use num::BigRational;
use quadrant_returns::limits::{
    halfnormal_cdf, limit_joint, rayleigh_cdf, tau_asymptote,
    convolution_asymptotics_check,
};
use quadrant_returns::numeric::{big_rational_to_f64, parse_rational, Scalar};
use quadrant_returns::one_dim::{joint_table, return_count_pmf, theta_pmf};
use quadrant_returns::oracle::enumerate_joint;
use quadrant_returns::sampler::{sample_with_lanes, Method};
use quadrant_returns::shuffle::{
    bernstein_sum, exit_probability, joint_law, BinomialWindow, Mode,
};
use quadrant_returns::stats::{
    auto_mode, ks_rescaled, limit_product_gap, product_of_marginals, tv_distance,
    tv_maps, tv_vec,
};
use quadrant_returns::thresholds::{
    BERNSTEIN_GAP, CONVOLUTION_RELATIVE, EXIT_RATIO_HI, EXIT_RATIO_LO,
    EXIT_SYMMETRIC_RELATIVE_N5000, KS_HALFNORMAL_N2000, KS_RAYLEIGH_N2000,
    MC_TV_N8, MEANDER_DEPENDENCE_WITNESS, TV_BRIDGE_INDEPENDENCE_N2000,
    TV_EXCURSION_N400, TV_MEANDER_N600, TV_UNCONDITIONED_GEOMETRIC_N400,
};
use quadrant_returns::walk::{Axis, Conditioning, Parity, StepDistribution};

const SYMMETRIC: &str = "1/4,1/4,1/4,1/4";
/// Both axes drift away from their walls.
const OUTWARD: &str = "0.3,0.1,0.4,0.2";
/// Both axes drift into their walls.
const INWARD: &str = "0.1,0.3,0.2,0.4";
/// Axis 1 drifts inward, axis 2 outward.
const MIXED: &str = "0.1,0.3,0.4,0.2";
/// Gently inward on both axes; used where a non-symmetric excursion is
/// needed.
const DRIFTED: &str = "0.15,0.35,0.2,0.3";

const MC_SEED: u64 = 8;
const MC_TRIALS: u64 = 1_000_000;

fn walk(spec: &str) -> StepDistribution {
    StepDistribution::parse(spec).unwrap()
}

fn pass(idx: usize, what: &str, detail: &str) {
    println!("[{idx:>2}] {what}: PASS ({detail})");
}

// ---- shared measurements (computed once, reused by check 12) ----

fn ks_halfnormal_n2000() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| {
        let w = walk(SYMMETRIC);
        let n = 2000;
        let law =
            joint_law::<f64>(n, &w, Conditioning::Unconditioned, auto_mode(&w, n)).unwrap();
        let masses = law.conditional_marginal(Axis::Horizontal).unwrap();
        let scale = (big_rational_to_f64(&w.h1()) * n as f64).sqrt();
        ks_rescaled(&masses, scale, halfnormal_cdf).unwrap()
    })
}

fn tv_geometric_n400() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| {
        let w = walk(OUTWARD);
        let law =
            joint_law::<f64>(400, &w, Conditioning::Unconditioned, Mode::Exact).unwrap();
        let masses = law.conditional_marginal(Axis::Horizontal).unwrap();
        // Success chance of ending the return sequence: |p1 − q1| / h1.
        let [p1, q1, _, _] = w.probs_f64();
        let s = (p1 - q1).abs() / big_rational_to_f64(&w.h1());
        let reference: Vec<f64> = (0..masses.len())
            .map(|r| s * (1.0 - s).powi(r as i32))
            .collect();
        // The box holds all finite-n mass; the limit's tail beyond it is the
        // leftover geometric mass.
        let tail = (1.0 - s).powi(masses.len() as i32);
        tv_vec(&masses, &reference) + 0.5 * tail
    })
}

fn bridge_law_n2000() -> &'static quadrant_returns::shuffle::JointReturnLaw<f64> {
    static V: OnceLock<quadrant_returns::shuffle::JointReturnLaw<f64>> = OnceLock::new();
    V.get_or_init(|| {
        let w = walk(SYMMETRIC);
        joint_law::<f64>(2000, &w, Conditioning::Bridge, auto_mode(&w, 2000)).unwrap()
    })
}

fn ks_rayleigh_n2000() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| {
        let w = walk(SYMMETRIC);
        let masses = bridge_law_n2000().conditional_marginal(Axis::Horizontal).unwrap();
        let scale = (big_rational_to_f64(&w.h1()) * 2000.0).sqrt();
        ks_rescaled(&masses, scale, rayleigh_cdf).unwrap()
    })
}

fn tv_bridge_independence_n2000() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| {
        let law = bridge_law_n2000();
        let conditional = law.conditional().unwrap();
        let product = product_of_marginals(&conditional);
        let truncation = law.truncation_remainder() / law.event_probability().to_f64();
        tv_maps(&conditional, &product) + truncation
    })
}

fn tv_excursion_n400(spec: &str) -> f64 {
    let w = walk(spec);
    let law =
        joint_law::<f64>(400, &w, Conditioning::NonNegativeBridge, Mode::Exact).unwrap();
    let limit = limit_joint(&w, Conditioning::NonNegativeBridge, Parity::Even);
    tv_distance(&law, &limit).unwrap().bound()
}

fn tv_excursion_worst() -> (f64, f64) {
    static V: OnceLock<(f64, f64)> = OnceLock::new();
    *V.get_or_init(|| (tv_excursion_n400(SYMMETRIC), tv_excursion_n400(DRIFTED)))
}

fn tv_meander_n600(spec: &str) -> f64 {
    let w = walk(spec);
    let law = joint_law::<f64>(600, &w, Conditioning::Meander, auto_mode(&w, 600)).unwrap();
    let limit = limit_joint(&w, Conditioning::Meander, Parity::Even);
    tv_distance(&law, &limit).unwrap().bound()
}

fn tv_meander_all() -> (f64, f64, f64) {
    static V: OnceLock<(f64, f64, f64)> = OnceLock::new();
    *V.get_or_init(|| {
        (
            tv_meander_n600(OUTWARD),
            tv_meander_n600(MIXED),
            tv_meander_n600(INWARD),
        )
    })
}

fn exit_symmetric_error_n5000() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| {
        let w = walk(SYMMETRIC);
        let n = 5000;
        let p = exit_probability::<f64>(n, &w).unwrap();
        let h1 = big_rational_to_f64(&w.h1());
        let scaled = n as f64 * p * (h1 * (1.0 - h1)).sqrt() * std::f64::consts::PI / 2.0;
        (scaled - 1.0).abs()
    })
}

fn exit_ratio_n400() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| {
        let w = walk(INWARD);
        let p = exit_probability::<f64>(400, &w).unwrap();
        p / tau_asymptote(&w, 400, Parity::Even)
    })
}

// ---- the twelve checks ----

#[test]
fn c01_exact_engine_matches_the_brute_force_oracle() {
    let started = std::time::Instant::now();
    let mut laws = 0usize;
    for spec in [SYMMETRIC, INWARD, OUTWARD] {
        let w = walk(spec);
        for n in 2..=12 {
            for cond in Conditioning::ALL {
                if cond.check_length(n).is_err() {
                    continue;
                }
                let engine = joint_law::<BigRational>(n, &w, cond, Mode::Exact).unwrap();
                let oracle = enumerate_joint(n, &w, cond).unwrap();
                let engine_cells: Vec<_> =
                    engine.mass().map(|(k, v)| (*k, v.clone())).collect();
                let oracle_cells: Vec<_> =
                    oracle.mass().map(|(k, v)| (*k, v.clone())).collect();
                assert_eq!(
                    engine_cells, oracle_cells,
                    "[ 1] joint law differs from the oracle at n={n}, walk {spec}, {cond}"
                );
                assert_eq!(
                    engine.event_probability(),
                    oracle.event_probability(),
                    "[ 1] event probability differs at n={n}, walk {spec}, {cond}"
                );
                laws += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "[ 1] oracle sweep took {elapsed:?}, over the one-minute budget"
    );
    pass(
        1,
        "exact engine matches the brute-force oracle",
        &format!("{laws} laws, 3 walks, n = 2..=12, exact equality, {elapsed:.1?}"),
    );
}

#[test]
fn c02_one_dimensional_tables_match_their_closed_forms() {
    let half = parse_rational("1/2").unwrap();
    let mut checked = 0usize;
    for m in 1..=12 {
        let n = 2 * m;
        let table = joint_table::<BigRational>(n, &half).unwrap();
        let marginal = table.return_marginal();
        for (r, mass) in marginal.iter().enumerate() {
            assert_eq!(
                mass,
                &return_count_pmf(n, r).unwrap(),
                "[ 2] return-count marginal differs at n={n}, r={r}"
            );
            let at_zero = table.mass(r, true, true) + table.mass(r, true, false);
            assert_eq!(
                at_zero,
                theta_pmf(r, n).unwrap(),
                "[ 2] r-th-return time mass differs at n={n}, r={r}"
            );
            checked += 2;
        }
    }
    pass(
        2,
        "one-dimensional tables match their closed forms",
        &format!("{checked} exact rational identities, lengths 2..=24"),
    );
}

#[test]
fn c03_staying_non_negative_halves_each_return_exactly() {
    let half = parse_rational("1/2").unwrap();
    let two = BigRational::from_integer(2.into());
    let mut checked = 0usize;
    for m in 1..=12 {
        let n = 2 * m;
        let table = joint_table::<BigRational>(n, &half).unwrap();
        for r in 0..=m {
            let survived = table.mass(r, true, true);
            let unrestricted = theta_pmf(r, n).unwrap();
            assert_eq!(
                survived * num::pow::pow(two.clone(), r),
                unrestricted,
                "[ 3] survival factor is not 2^-r at n={n}, r={r}"
            );
            checked += 1;
        }
    }
    pass(
        3,
        "staying non-negative halves each return exactly",
        &format!("{checked} exact rational identities, even lengths ≤ 24"),
    );
}

#[test]
fn c04_unconditioned_returns_approach_halfnormal_and_geometric_laws() {
    let started = std::time::Instant::now();
    let ks = ks_halfnormal_n2000();
    assert!(
        ks <= KS_HALFNORMAL_N2000,
        "[ 4] half-normal KS {ks:.6} exceeds {KS_HALFNORMAL_N2000}"
    );
    let tv = tv_geometric_n400();
    assert!(
        tv <= TV_UNCONDITIONED_GEOMETRIC_N400,
        "[ 4] geometric TV {tv:.3e} exceeds {TV_UNCONDITIONED_GEOMETRIC_N400}"
    );
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "[ 4] rescaled-marginal checks took {elapsed:?}, over the two-minute budget"
    );
    pass(
        4,
        "unconditioned returns approach half-normal and geometric laws",
        &format!("KS {ks:.6} @ n=2000 symmetric, TV {tv:.3e} @ n=400 outward, {elapsed:.1?}"),
    );
}

#[test]
fn c05_bridge_returns_approach_rayleigh_and_become_independent() {
    let ks = ks_rayleigh_n2000();
    assert!(
        ks <= KS_RAYLEIGH_N2000,
        "[ 5] Rayleigh KS {ks:.6} exceeds {KS_RAYLEIGH_N2000}"
    );
    let tv = tv_bridge_independence_n2000();
    assert!(
        tv <= TV_BRIDGE_INDEPENDENCE_N2000,
        "[ 5] joint-vs-product TV {tv:.6} exceeds {TV_BRIDGE_INDEPENDENCE_N2000}"
    );
    pass(
        5,
        "bridge returns approach Rayleigh and become independent",
        &format!("KS {ks:.6}, joint-vs-product TV {tv:.6}, n=2000 symmetric"),
    );
}

#[test]
fn c06_excursion_returns_approach_the_negative_binomial_product() {
    let (sym, drifted) = tv_excursion_worst();
    assert!(
        sym <= TV_EXCURSION_N400,
        "[ 6] symmetric excursion TV {sym:.6} exceeds {TV_EXCURSION_N400}"
    );
    assert!(
        drifted <= TV_EXCURSION_N400,
        "[ 6] drifted excursion TV {drifted:.6} exceeds {TV_EXCURSION_N400}"
    );
    pass(
        6,
        "excursion returns approach the negative-binomial product",
        &format!("TV {sym:.6} symmetric, {drifted:.6} drifted, n=400"),
    );
}

#[test]
fn c07_meander_returns_approach_their_drift_dependent_limits() {
    let (outward, mixed, inward) = tv_meander_all();
    for (name, tv) in [("outward", outward), ("mixed", mixed), ("inward", inward)] {
        assert!(
            tv <= TV_MEANDER_N600,
            "[ 7] {name} meander TV {tv:.6} exceeds {TV_MEANDER_N600}"
        );
    }
    // The inward limit couples the two coordinates: its distance from the
    // product of its own marginals is a positive constant, not a finite-n
    // artifact.
    let witness = limit_product_gap(&limit_joint(&walk(INWARD), Conditioning::Meander, Parity::Even), 200)
        .unwrap()
        .value;
    assert!(
        witness > MEANDER_DEPENDENCE_WITNESS,
        "[ 7] dependence witness {witness:.3e} is not above {MEANDER_DEPENDENCE_WITNESS:.0e}"
    );
    pass(
        7,
        "meander returns approach their drift-dependent limits",
        &format!(
            "TV {outward:.2e} outward, {mixed:.6} mixed, {inward:.6} inward @ n=600; dependence witness {witness:.3e}"
        ),
    );
}

#[test]
fn c08_exit_probability_matches_its_asymptote() {
    let err = exit_symmetric_error_n5000();
    assert!(
        err <= EXIT_SYMMETRIC_RELATIVE_N5000,
        "[ 8] symmetric exit error {err:.5} exceeds {EXIT_SYMMETRIC_RELATIVE_N5000}"
    );
    let ratio = exit_ratio_n400();
    assert!(
        (EXIT_RATIO_LO..=EXIT_RATIO_HI).contains(&ratio),
        "[ 8] inward exit ratio {ratio:.4} outside [{EXIT_RATIO_LO}, {EXIT_RATIO_HI}]"
    );
    pass(
        8,
        "exit probability matches its asymptote",
        &format!("|n·P·√(h₁h₂)·π/2 − 1| = {err:.2e} @ n=5000; inward ratio {ratio:.4} @ n=400"),
    );
}

#[test]
fn c09_windowed_progression_sums_converge() {
    let half = parse_rational("1/2").unwrap();
    let window = BinomialWindow::new(0.3, 0.7).unwrap();
    let sum = bernstein_sum(
        |x| 1.0 / (x * (1.0 - x)).sqrt(),
        &half,
        2,
        0,
        100_000,
        &window,
    )
    .unwrap();
    // Even indices carry half the binomial mass, so the windowed sum tends
    // to f(1/2)/2 = 1.
    let gap = (sum - 1.0).abs();
    assert!(
        gap <= BERNSTEIN_GAP,
        "[ 9] progression sum {sum:.6} is {gap:.2e} from 1, over {BERNSTEIN_GAP}"
    );
    pass(
        9,
        "windowed progression sums converge",
        &format!("sum {sum:.8}, gap {gap:.2e} @ n=100000"),
    );
}

#[test]
fn c10_polynomial_convolutions_concentrate_at_the_ends() {
    let mut details = Vec::new();
    for alpha in [1.5, 2.0] {
        let (lhs, rhs) = convolution_asymptotics_check(alpha, 1.0, 1.0, 10_000).unwrap();
        let rel = (lhs / rhs - 1.0).abs();
        assert!(
            rel <= CONVOLUTION_RELATIVE,
            "[10] convolution ratio off by {rel:.4} at alpha={alpha}, over {CONVOLUTION_RELATIVE}"
        );
        details.push(format!("α={alpha}: {rel:.4}"));
    }
    pass(
        10,
        "polynomial convolutions concentrate at the ends",
        &format!("relative gaps {} @ n=10000", details.join(", ")),
    );
}

#[test]
fn c11_monte_carlo_agrees_with_the_oracle_deterministically() {
    let w = walk(SYMMETRIC);
    let mut details = Vec::new();
    for cond in Conditioning::ALL {
        let run =
            sample_with_lanes(8, &w, cond, MC_SEED, MC_TRIALS, Method::Rejection, 1).unwrap();
        let rerun =
            sample_with_lanes(8, &w, cond, MC_SEED, MC_TRIALS, Method::Rejection, 1).unwrap();
        let wide =
            sample_with_lanes(8, &w, cond, MC_SEED, MC_TRIALS, Method::Rejection, 8).unwrap();
        assert_eq!(
            run.masses(),
            rerun.masses(),
            "[11] repeated seeded runs differ for {cond}"
        );
        assert_eq!(
            run.masses(),
            wide.masses(),
            "[11] 1-lane and 8-lane runs differ for {cond}"
        );
        assert_eq!(run.accepted(), wide.accepted());

        let empirical = run.conditional().unwrap();
        let reference: std::collections::BTreeMap<(usize, usize), f64> =
            enumerate_joint(8, &w, cond)
                .unwrap()
                .conditional()
                .unwrap()
                .into_iter()
                .map(|(cell, mass)| (cell, big_rational_to_f64(&mass)))
                .collect();
        let tv = tv_maps(&empirical, &reference);
        assert!(
            tv <= MC_TV_N8,
            "[11] {cond} empirical law is {tv:.5} from the oracle, over {MC_TV_N8}"
        );
        details.push(format!("{cond} {tv:.5} ({} kept)", run.accepted()));
    }
    pass(
        11,
        "Monte Carlo agrees with the oracle deterministically",
        &format!("n=8, 10^6 trials, seed {MC_SEED}: {}", details.join(", ")),
    );
}

#[test]
fn c12_frozen_thresholds_keep_a_two_fold_margin() {
    let (excursion_sym, excursion_drifted) = tv_excursion_worst();
    let (meander_outward, meander_mixed, meander_inward) = tv_meander_all();
    let rows: Vec<(&str, f64, f64)> = vec![
        (
            "half-normal KS, n=2000",
            KS_HALFNORMAL_N2000,
            ks_halfnormal_n2000(),
        ),
        (
            "geometric TV, n=400",
            TV_UNCONDITIONED_GEOMETRIC_N400,
            tv_geometric_n400(),
        ),
        ("Rayleigh KS, n=2000", KS_RAYLEIGH_N2000, ks_rayleigh_n2000()),
        (
            "bridge independence TV, n=2000",
            TV_BRIDGE_INDEPENDENCE_N2000,
            tv_bridge_independence_n2000(),
        ),
        (
            "excursion TV, n=400",
            TV_EXCURSION_N400,
            excursion_sym.max(excursion_drifted),
        ),
        (
            "meander TV, n=600",
            TV_MEANDER_N600,
            meander_outward.max(meander_mixed).max(meander_inward),
        ),
        (
            "exit relative error, n=5000",
            EXIT_SYMMETRIC_RELATIVE_N5000,
            exit_symmetric_error_n5000(),
        ),
        (
            "exit ratio deviation, n=400",
            EXIT_RATIO_HI - 1.0,
            (exit_ratio_n400() - 1.0).abs(),
        ),
    ];
    let mut lines = Vec::new();
    for (name, threshold, measured) in &rows {
        let margin = threshold / measured;
        assert!(
            *threshold >= 2.0 * measured,
            "[12] {name}: threshold {threshold} is only {margin:.2}x the measured {measured:.6}"
        );
        lines.push(format!("{name}: {measured:.2e} vs {threshold:.3} ({margin:.0}x)"));
    }
    pass(
        12,
        "frozen thresholds keep a two-fold margin",
        &lines.join("; "),
    );
}
