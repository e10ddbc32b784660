//! Numeric backends shared by every engine.
//!
//! All dynamic programs in this crate are generic over [`Scalar`], which is
//! implemented for two types:
//!
//! * [`num::BigRational`] — exact arbitrary-precision rational arithmetic.
//!   Every operation is exact; equality means mathematical equality.
//! * [`f64`] — double precision for lengths where rational arithmetic is
//!   impractical. Binomial weights are evaluated through `ln Γ` so that
//!   `C(n, k)` never overflows even for `n` in the thousands.
//!
//! The module also hosts exact parsing of probability strings (`"0.15"`,
//! `"3/20"`) and binomial helpers used by the shuffle and oracle engines.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use statrs::function::gamma::ln_gamma;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Sub};

use crate::{Error, Result};

/// Arithmetic required by the probability engines.
///
/// Operations take references (`add_ref`, `mul_ref`) so that the exact
/// backend avoids needless big-integer clones while `f64` compiles down to
/// plain register arithmetic.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    /// Largest walk length the quadratic-state dynamic programs accept on
    /// this backend; longer requests fail with `CapacityExceeded`. The
    /// exact backend is bounded because its table entries grow to thousands
    /// of bits; the float backend is bounded only as a sanity stop.
    const LENGTH_CAP: usize;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn div_ref(&self, other: &Self) -> Self;
    /// Exact conversion from a rational parameter (walk probabilities are
    /// always stored as rationals; each backend lowers them as needed).
    fn from_big_rational(value: &BigRational) -> Self;
    fn to_f64(&self) -> f64;
    /// Binomial weights `w_k = C(n, k) h^k (1−h)^{n−k}` for `k = 0..=n`.
    ///
    /// The exact backend uses the multiplicative recurrence
    /// `w_{k+1} = w_k · (n−k)/(k+1) · h/(1−h)`; the float backend works in
    /// log space to stay finite for large `n`.
    fn binomial_weights(n: usize, h: &BigRational) -> Vec<Self>;
    /// Render a mass the way output files print it: rationals as `num/den`,
    /// floats with 17 significant digits (round-trip safe).
    fn format_mass(&self) -> String;
}

/// Default length bound of the exact backend.
pub const EXACT_LENGTH_CAP: usize = 4096;

/// Length bound of the float backend (a sanity stop: memory and time, not
/// precision, are what run out first).
pub const FLOAT_LENGTH_CAP: usize = 1 << 16;

impl Scalar for f64 {
    const LENGTH_CAP: usize = FLOAT_LENGTH_CAP;

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn from_big_rational(value: &BigRational) -> Self {
        big_rational_to_f64(value)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn binomial_weights(n: usize, h: &BigRational) -> Vec<Self> {
        let h = big_rational_to_f64(h);
        let (ln_h, ln_g) = (h.ln(), (1.0 - h).ln());
        let ln_fact_n = ln_gamma(n as f64 + 1.0);
        (0..=n)
            .map(|k| {
                let ln_c =
                    ln_fact_n - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0);
                (ln_c + k as f64 * ln_h + (n - k) as f64 * ln_g).exp()
            })
            .collect()
    }
    fn format_mass(&self) -> String {
        format!("{self:.16e}")
    }
}

impl Scalar for BigRational {
    const LENGTH_CAP: usize = EXACT_LENGTH_CAP;

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }
    fn from_big_rational(value: &BigRational) -> Self {
        value.clone()
    }
    fn to_f64(&self) -> f64 {
        big_rational_to_f64(self)
    }
    fn binomial_weights(n: usize, h: &BigRational) -> Vec<Self> {
        let g = <BigRational as One>::one() - h;
        let ratio = h / &g;
        let mut weights = Vec::with_capacity(n + 1);
        // w_0 = (1−h)^n
        let mut w = num::pow::pow(g, n);
        weights.push(w.clone());
        for k in 0..n {
            w = w * &ratio * BigRational::from_integer(BigInt::from(n - k))
                / BigRational::from_integer(BigInt::from(k + 1));
            weights.push(w.clone());
        }
        weights
    }
    fn format_mass(&self) -> String {
        self.to_string()
    }
}

/// Convert an arbitrary-precision rational to the nearest `f64`.
///
/// Works for magnitudes far outside the `f64` exponent range of the
/// numerator/denominator pair by scaling both by a common power of two
/// before the final division.
pub fn big_rational_to_f64(value: &BigRational) -> f64 {
    let numer = value.numer();
    let denom = value.denom();
    let num_bits = numer.bits() as i64;
    let den_bits = denom.bits() as i64;
    // Keep both operands inside ~2^900 so the division below cannot
    // overflow or flush to zero prematurely.
    let shift = (num_bits.max(den_bits) - 900).max(0) as u64;
    let scaled_num = numer >> shift;
    let scaled_den = denom >> shift;
    let approx_num = bigint_to_f64(&scaled_num);
    let approx_den = bigint_to_f64(&scaled_den);
    if approx_den == 0.0 {
        return if approx_num == 0.0 { 0.0 } else { f64::INFINITY };
    }
    approx_num / approx_den
}

fn bigint_to_f64(value: &BigInt) -> f64 {
    // BigInt -> f64 via the standard library conversion on the top 64 bits.
    let bits = value.bits();
    if bits <= 63 {
        return i64::try_from(value.clone()).map(|v| v as f64).unwrap_or(0.0);
    }
    let shift = bits - 63;
    let top = value >> shift;
    let top = i64::try_from(top).unwrap_or(i64::MAX) as f64;
    top * 2f64.powi(shift as i32)
}

/// Parse a probability given either as a decimal (`"0.15"`) or as a
/// fraction of integers (`"3/20"`), exactly.
///
/// Decimal strings become the exact rational they denote (`0.1 = 1/10`);
/// no binary rounding is involved. Exponents are not supported.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let invalid = |detail: String| Error::Invalid {
        what: "probability",
        detail,
    };
    if text.is_empty() {
        return Err(invalid("empty string".into()));
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|e| invalid(format!("bad numerator {num:?}: {e}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|e| invalid(format!("bad denominator {den:?}: {e}")))?;
        if den.is_zero() {
            return Err(invalid(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    let digits = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { int_part },
        frac_part
    );
    let numer: BigInt = digits
        .parse()
        .map_err(|e| invalid(format!("bad decimal {text:?}: {e}")))?;
    let denom = num::pow::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(numer, denom))
}

/// Exact rational equal to the given finite `f64` (every finite double is a
/// dyadic rational).
pub fn rational_from_f64(value: f64) -> Result<BigRational> {
    BigRational::from_float(value).ok_or_else(|| Error::Invalid {
        what: "probability",
        detail: format!("{value} is not finite"),
    })
}

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// `2^{-e}` as an exact rational.
pub fn half_power(e: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << e)
}

/// Natural log of the binomial pmf `C(n,k) h^k (1−h)^{n−k}`.
pub fn ln_binomial_pmf(n: usize, k: usize, h: f64) -> f64 {
    let ln_c = ln_gamma(n as f64 + 1.0)
        - ln_gamma(k as f64 + 1.0)
        - ln_gamma((n - k) as f64 + 1.0);
    ln_c + k as f64 * h.ln() + (n - k) as f64 * (1.0 - h).ln()
}
