//! Exact finite-length distributions for the one-dimensional simple random
//! walk: the joint law of (return count, endpoint-zero flag, survival flag),
//! per-length snapshot tables consumed by the two-dimensional convolution,
//! and the symmetric-walk closed forms the dynamic programs are tested
//! against.
//!
//! Throughout, the walk starts at `0` and steps `+1` with probability `p`,
//! `−1` with probability `q = 1 − p`. Three statistics of the first `k`
//! steps matter:
//!
//! * `N_k` — the number of returns, i.e. steps that land on `0` (with `±1`
//!   steps every landing is a strict return);
//! * the endpoint flag `S_k = 0`;
//! * the survival flag `τ > k`, where `τ` is the first time the walk goes
//!   below `0`.
//!
//! # Dynamic programs
//!
//! Two forward DPs over the state `(return count, position)` drive
//! everything: a *free* one on all of `ℤ` and a *surviving* one on `ℕ` that
//! kills mass stepping to `−1`. Each exploits the same band structure — with
//! `r` returns by step `j` the position satisfies `|pos| ≤ j − 2r` and
//! `pos ≡ j (mod 2)` — so a step rewrites every in-band cell of the
//! destination buffer and never needs to clear the rest: out-of-band cells
//! were never written for that parity and still hold their initial zeros.
//! Per-return-count row sums are maintained incrementally (mass only changes
//! rows when it lands on `0`), which makes every intermediate length a free
//! snapshot and keeps the total cost at `O(k³)` cell updates for all lengths
//! `0..=k` together.

use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

use crate::numeric::{binomial, half_power, Scalar};
use crate::{Error, Result};

/// Joint law of `(N_k, 1{S_k = 0}, 1{τ > k})` at a fixed length `k`.
///
/// Cells are keyed by `(r, endpoint_zero, survived)`; only non-zero cells
/// are stored. The total mass is one (exactly on the rational backend).
#[derive(Debug, Clone, PartialEq)]
pub struct OneDimTable<T> {
    k: usize,
    p: BigRational,
    cells: BTreeMap<(usize, bool, bool), T>,
}

impl<T: Scalar> OneDimTable<T> {
    /// The walk length this table describes.
    pub fn length(&self) -> usize {
        self.k
    }

    /// The up-step probability the table was built for.
    pub fn up_probability(&self) -> &BigRational {
        &self.p
    }

    /// Mass of one cell; zero when the cell is not stored.
    pub fn mass(&self, r: usize, endpoint_zero: bool, survived: bool) -> T {
        self.cells
            .get(&(r, endpoint_zero, survived))
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// All non-zero cells in key order.
    pub fn cells(&self) -> impl Iterator<Item = (&(usize, bool, bool), &T)> {
        self.cells.iter()
    }

    /// Total stored mass.
    pub fn total(&self) -> T {
        self.cells
            .values()
            .fold(T::zero(), |acc, v| acc.add_ref(v))
    }

    /// Marginal law of the return count, indexed by `r`.
    pub fn return_marginal(&self) -> Vec<T> {
        let rmax = self.cells.keys().map(|&(r, _, _)| r).max().unwrap_or(0);
        let mut out = vec![T::zero(); rmax + 1];
        for (&(r, _, _), v) in &self.cells {
            out[r] = out[r].add_ref(v);
        }
        out
    }
}

/// Per-length tables of the free walk.
///
/// For every `k = 0..=n`: `counts[k][r] = P(N_k = r)` and
/// `at_origin[k][r] = P(N_k = r, S_k = 0)` (all zeros at odd `k`).
#[derive(Debug, Clone)]
pub struct FreeSnapshots<T> {
    pub counts: Vec<Vec<T>>,
    pub at_origin: Vec<Vec<T>>,
}

/// Per-length tables of the walk killed below zero.
///
/// For every `k = 0..=n`: `meander[k][r] = P(N_k = r, τ > k)`,
/// `excursion[k][r] = P(N_k = r, τ > k, S_k = 0)`, and
/// `survival[k] = P(τ > k)`.
#[derive(Debug, Clone)]
pub struct SurviveSnapshots<T> {
    pub meander: Vec<Vec<T>>,
    pub excursion: Vec<Vec<T>>,
    pub survival: Vec<T>,
}

fn check_up_probability(p: &BigRational) -> Result<()> {
    if !p.is_positive() {
        return Err(Error::NonPositiveProbability {
            label: "p",
            value: p.to_string(),
        });
    }
    if *p >= BigRational::one() {
        return Err(Error::Invalid {
            what: "up-step probability",
            detail: format!("{p} is not below 1"),
        });
    }
    Ok(())
}

fn check_length<T: Scalar>(n: usize) -> Result<()> {
    if n > T::LENGTH_CAP {
        return Err(Error::CapacityExceeded {
            n,
            cap: T::LENGTH_CAP,
        });
    }
    Ok(())
}

/// Band-structured row store for the `(return count, position)` DPs.
///
/// Row `r` covers positions `lo_r ..= hi_r` (inclusive, step irrelevant —
/// parity is handled by the writers); reads outside a row come back as
/// `None` and mean "no mass".
struct Rows<T> {
    rows: Vec<Vec<T>>,
    /// Lowest position stored in each row (0 for the surviving DP,
    /// `−(n − 2r)` for the free DP).
    lo: Vec<i64>,
}

impl<T: Scalar> Rows<T> {
    fn new(widths: &[(i64, usize)]) -> Self {
        Rows {
            rows: widths.iter().map(|&(_, w)| vec![T::zero(); w]).collect(),
            lo: widths.iter().map(|&(lo, _)| lo).collect(),
        }
    }

    fn get(&self, r: usize, pos: i64) -> Option<&T> {
        let row = self.rows.get(r)?;
        let idx = pos - self.lo[r];
        if idx < 0 || idx as usize >= row.len() {
            None
        } else {
            Some(&row[idx as usize])
        }
    }

    fn set(&mut self, r: usize, pos: i64, value: T) {
        let idx = (pos - self.lo[r]) as usize;
        self.rows[r][idx] = value;
    }
}

/// `p·a + q·b` where either source may be out of band (treated as zero).
fn pull<T: Scalar>(p: &T, a: Option<&T>, q: &T, b: Option<&T>) -> T {
    match (a, b) {
        (Some(a), Some(b)) => p.mul_ref(a).add_ref(&q.mul_ref(b)),
        (Some(a), None) => p.mul_ref(a),
        (None, Some(b)) => q.mul_ref(b),
        (None, None) => T::zero(),
    }
}

/// Run the free-walk DP to length `n`, recording the return-count marginal
/// and the at-origin slice after every step.
pub fn free_snapshots<T: Scalar>(n: usize, p: &BigRational) -> Result<FreeSnapshots<T>> {
    check_up_probability(p)?;
    check_length::<T>(n)?;
    let pv = T::from_big_rational(p);
    let qv = T::from_big_rational(&(BigRational::one() - p));
    let rmax = n / 2;

    // Row r never holds mass outside |pos| ≤ n − 2r.
    let widths: Vec<(i64, usize)> = (0..=rmax)
        .map(|r| {
            let half = (n - 2 * r) as i64;
            (-half, 2 * (n - 2 * r) + 1)
        })
        .collect();
    let mut cur = Rows::<T>::new(&widths);
    let mut nxt = Rows::<T>::new(&widths);
    cur.set(0, 0, T::one());

    let mut sums = vec![T::zero(); rmax + 1];
    sums[0] = T::one();
    let mut counts = Vec::with_capacity(n + 1);
    let mut at_origin = Vec::with_capacity(n + 1);
    counts.push(vec![T::one()]);
    at_origin.push(vec![T::one()]);

    for j in 0..n {
        let live_rmax = (j + 1) / 2;
        // Mass entering 0 from row r moves to row r + 1; capture it before
        // the buffers swap.
        let outflow: Vec<T> = (0..=live_rmax)
            .map(|r| pull(&pv, cur.get(r, -1), &qv, cur.get(r, 1)))
            .collect();

        for r in 0..=live_rmax {
            let band = (j + 1) as i64 - 2 * r as i64;
            if band < 0 {
                continue;
            }
            let mut pos = -band;
            while pos <= band {
                let value = if pos == 0 {
                    if r == 0 {
                        T::zero()
                    } else {
                        pull(&pv, cur.get(r - 1, -1), &qv, cur.get(r - 1, 1))
                    }
                } else {
                    pull(&pv, cur.get(r, pos - 1), &qv, cur.get(r, pos + 1))
                };
                nxt.set(r, pos, value);
                pos += 2;
            }
        }

        // Incremental updates are safe here, unlike in the killed DP: the
        // free-walk marginal P(N = r) never decays below the scale of the
        // outflows that built it, so no catastrophic cancellation occurs.
        for r in (0..=live_rmax).rev() {
            sums[r] = sums[r].sub_ref(&outflow[r]);
            if r > 0 {
                sums[r] = sums[r].add_ref(&outflow[r - 1]);
            }
        }
        std::mem::swap(&mut cur, &mut nxt);

        counts.push(sums[..=live_rmax].to_vec());
        let origin_row: Vec<T> = if (j + 1) % 2 == 0 {
            (0..=live_rmax)
                .map(|r| cur.get(r, 0).cloned().unwrap_or_else(T::zero))
                .collect()
        } else {
            vec![T::zero(); live_rmax + 1]
        };
        at_origin.push(origin_row);
    }

    Ok(FreeSnapshots { counts, at_origin })
}

/// Run the killed-walk DP to length `n`, recording the surviving
/// return-count marginal, the surviving at-origin slice, and the survival
/// probability after every step.
pub fn survive_snapshots<T: Scalar>(n: usize, p: &BigRational) -> Result<SurviveSnapshots<T>> {
    check_up_probability(p)?;
    check_length::<T>(n)?;
    let pv = T::from_big_rational(p);
    let qv = T::from_big_rational(&(BigRational::one() - p));
    let rmax = n / 2;

    // Surviving mass with r returns sits in 0 ..= n − 2r.
    let widths: Vec<(i64, usize)> = (0..=rmax).map(|r| (0, n - 2 * r + 1)).collect();
    let mut cur = Rows::<T>::new(&widths);
    let mut nxt = Rows::<T>::new(&widths);
    cur.set(0, 0, T::one());

    let mut meander = Vec::with_capacity(n + 1);
    let mut excursion = Vec::with_capacity(n + 1);
    let mut survival = Vec::with_capacity(n + 1);
    meander.push(vec![T::one()]);
    excursion.push(vec![T::one()]);
    survival.push(T::one());

    for j in 0..n {
        let live_rmax = (j + 1) / 2;

        for r in 0..=live_rmax {
            let band = (j + 1) as i64 - 2 * r as i64;
            if band < 0 {
                continue;
            }
            let mut pos = ((j + 1) % 2) as i64;
            while pos <= band {
                let value = if pos == 0 {
                    if r == 0 {
                        T::zero()
                    } else {
                        // Mass at 1 stepping down lands on 0 and moves to
                        // the next return-count row.
                        match cur.get(r - 1, 1) {
                            Some(v) => qv.mul_ref(v),
                            None => T::zero(),
                        }
                    }
                } else {
                    pull(&pv, cur.get(r, pos - 1), &qv, cur.get(r, pos + 1))
                };
                nxt.set(r, pos, value);
                pos += 2;
            }
        }
        std::mem::swap(&mut cur, &mut nxt);

        // Re-sum every row from its cells. A running total updated by
        // subtracting the per-step losses cancels catastrophically in
        // floating point once the surviving mass decays far below the
        // scale it had early on; summing the non-negative cells keeps the
        // error relative at every length.
        let mut row_sums = Vec::with_capacity(live_rmax + 1);
        let mut alive = T::zero();
        for r in 0..=live_rmax {
            let band = (j + 1) as i64 - 2 * r as i64;
            let mut total = T::zero();
            let mut pos = ((j + 1) % 2) as i64;
            while pos <= band {
                if let Some(v) = cur.get(r, pos) {
                    total = total.add_ref(v);
                }
                pos += 2;
            }
            alive = alive.add_ref(&total);
            row_sums.push(total);
        }

        meander.push(row_sums);
        let origin_row: Vec<T> = if (j + 1) % 2 == 0 {
            (0..=live_rmax)
                .map(|r| cur.get(r, 0).cloned().unwrap_or_else(T::zero))
                .collect()
        } else {
            vec![T::zero(); live_rmax + 1]
        };
        excursion.push(origin_row);
        survival.push(alive);
    }

    Ok(SurviveSnapshots {
        meander,
        excursion,
        survival,
    })
}

/// Exact joint law of `(N_k, 1{S_k = 0}, 1{τ > k})`.
///
/// Assembled from the free and killed DPs at length `k`: survived cells are
/// read off directly, non-survived ones by subtraction.
///
/// # Errors
///
/// `CapacityExceeded` when `k` is beyond the backend's length cap;
/// `NonPositiveProbability`/`Invalid` for `p ∉ (0, 1)`.
pub fn joint_table<T: Scalar>(k: usize, p: &BigRational) -> Result<OneDimTable<T>> {
    let free = free_snapshots::<T>(k, p)?;
    let surv = survive_snapshots::<T>(k, p)?;
    let counts = &free.counts[k];
    let at_origin = &free.at_origin[k];
    let meander = &surv.meander[k];
    let excursion = &surv.excursion[k];

    let mut cells = BTreeMap::new();
    let mut put = |key: (usize, bool, bool), value: T| {
        debug_assert!(value.to_f64() > -1e-9, "negative cell {key:?}");
        if !value.is_zero() && value > T::zero() {
            cells.insert(key, value);
        }
    };
    for r in 0..counts.len() {
        let zero_surv = excursion[r].clone();
        let zero_any = at_origin[r].clone();
        let any_surv = meander[r].clone();
        let any_any = counts[r].clone();
        put((r, true, true), zero_surv.clone());
        put((r, false, true), any_surv.sub_ref(&zero_surv));
        put((r, true, false), zero_any.clone().sub_ref(&zero_surv));
        put(
            (r, false, false),
            any_any.sub_ref(&zero_any).sub_ref(&any_surv.sub_ref(&zero_surv)),
        );
    }
    Ok(OneDimTable {
        k,
        p: p.clone(),
        cells,
    })
}

/// Survival probabilities `P(τ > k)` for all `k = 0..=n` by a linear-state
/// DP over position alone — cheap enough for lengths in the thousands.
pub fn survival_curve<T: Scalar>(n: usize, p: &BigRational) -> Result<Vec<T>> {
    check_up_probability(p)?;
    check_length::<T>(n)?;
    let pv = T::from_big_rational(p);
    let qv = T::from_big_rational(&(BigRational::one() - p));

    let mut cur = vec![T::zero(); n + 2];
    let mut nxt = vec![T::zero(); n + 2];
    cur[0] = T::one();
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::one());

    for j in 0..n {
        let mut pos = (j + 1) % 2;
        while pos <= j + 1 {
            nxt[pos] = if pos == 0 {
                qv.mul_ref(&cur[1])
            } else {
                let up = pv.mul_ref(&cur[pos - 1]);
                if pos + 1 < cur.len() {
                    up.add_ref(&qv.mul_ref(&cur[pos + 1]))
                } else {
                    up
                }
            };
            pos += 2;
        }
        std::mem::swap(&mut cur, &mut nxt);

        // Sum the surviving cells outright; peeling the per-step deaths off
        // a running total loses all precision once the survival probability
        // drops far below its early magnitude.
        let mut alive = T::zero();
        let mut pos = (j + 1) % 2;
        while pos <= j + 1 {
            alive = alive.add_ref(&cur[pos]);
            pos += 2;
        }
        out.push(alive);
    }
    Ok(out)
}

/// `P(τ > k)` for a single length.
pub fn survival<T: Scalar>(k: usize, p: &BigRational) -> Result<T> {
    Ok(survival_curve::<T>(k, p)?.pop().expect("curve is non-empty"))
}

/// Exact law of the time of the `r`-th return for the symmetric walk:
/// `P(θ_r = n) = 2^{−(n−r)} · r/(n−r) · C(n−r, n/2)`.
///
/// Returns `0` for `r > n/2` (too few steps) and handles `r = 0` as the
/// trivial return at time zero.
///
/// # Errors
///
/// `OddLength` — returns to zero only happen at even times.
pub fn theta_pmf(r: usize, n: usize) -> Result<BigRational> {
    if n % 2 == 1 {
        return Err(Error::OddLength {
            n,
            what: "a return time",
        });
    }
    if r == 0 {
        return Ok(if n == 0 {
            BigRational::one()
        } else {
            BigRational::zero()
        });
    }
    if r > n / 2 {
        return Ok(BigRational::zero());
    }
    let c = BigRational::from_integer(binomial(n - r, n / 2));
    let ratio = BigRational::new((r as i64).into(), ((n - r) as i64).into());
    Ok(half_power(n - r) * ratio * c)
}

/// `P(θ_r = n, τ > n) = 2^{−r} · P(θ_r = n)` for the symmetric walk: each
/// of the `r` excursions between consecutive returns may independently be
/// flipped to the negative side without changing the path probability.
pub fn theta_survival_pmf(r: usize, n: usize) -> Result<BigRational> {
    Ok(half_power(r) * theta_pmf(r, n)?)
}

/// Exact return-count law of the symmetric walk at even length `2m`:
/// `P(N_{2m} = r) = 2^{−(2m−r)} · C(2m−r, m)`.
///
/// Returns `0` for `r > m`.
///
/// # Errors
///
/// `OddLength` for odd `n` (at odd lengths the count equals the count one
/// step earlier, so the closed form is stated for even lengths only).
pub fn return_count_pmf(n: usize, r: usize) -> Result<BigRational> {
    if n % 2 == 1 {
        return Err(Error::OddLength {
            n,
            what: "the return-count closed form",
        });
    }
    let m = n / 2;
    if r > m {
        return Ok(BigRational::zero());
    }
    Ok(half_power(2 * m - r) * BigRational::from_integer(binomial(2 * m - r, m)))
}
