//! The deformed exponential `f_p(x) = Σ x^j p^(j(j-1)/2) / j!`, its
//! truncations `f_{p,k}`, the pantograph identity `f_p'(x) = f_p(px)` and the
//! Kurtz real-rootedness test on coefficient sequences.
//!
//! Series values are computed as certified enclosures: every term is carried
//! as an [`Interval`] and the neglected tail is bounded by a geometric series
//! once the term ratio `|x| p^j / (j+1)` drops below one.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ext_real::{ExtReal, ParseDecimalError, Round, MIN_PRECISION};
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefexpError {
    #[error("invalid density parameter {text:?}: {reason}")]
    InvalidParam { text: String, reason: &'static str },
    #[error(transparent)]
    Parse(#[from] ParseDecimalError),
    #[error("target error must be positive")]
    NonpositiveTarget,
    #[error("series at x = {x} did not converge within {cap} terms")]
    NonConvergence { x: String, cap: usize },
    #[error("truncation degree must be at least 2, got {0}")]
    Degree(usize),
    #[error("coefficient b_{index} is not positive")]
    NonpositiveCoefficient { index: usize },
}

/// The density parameter `p`, kept as the exact rational its decimal text denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityParam {
    text: String,
    value: BigRational,
}

impl DensityParam {
    /// Accepts `0 < p <= 1`; operations that need `p < 1` check separately.
    pub fn parse(text: &str) -> Result<Self, DefexpError> {
        let value = ExtReal::parse_rational(text)?;
        let text = text.trim().to_string();
        if !value.is_positive() {
            return Err(DefexpError::InvalidParam {
                text,
                reason: "p must be positive",
            });
        }
        if value > BigRational::one() {
            return Err(DefexpError::InvalidParam {
                text,
                reason: "p must not exceed 1",
            });
        }
        Ok(Self { text, value })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn rational(&self) -> &BigRational {
        &self.value
    }

    /// True when `p` is a dyadic rational, i.e. exactly representable in binary.
    pub fn is_exact(&self) -> bool {
        let d = self.value.denom();
        d.is_positive() && (d & (d - BigInt::one())).is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn require_below_one(&self) -> Result<(), DefexpError> {
        if self.is_one() {
            Err(DefexpError::InvalidParam {
                text: self.text.clone(),
                reason: "p must be strictly below 1 here",
            })
        } else {
            Ok(())
        }
    }

    pub fn value(&self, prec: u32) -> ExtReal {
        ExtReal::from_rational(&self.value, prec, Round::Nearest)
    }

    pub fn enclosure(&self, prec: u32) -> Interval {
        Interval::from_rational(&self.value, prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.value(64).to_f64()
    }

    /// Exact `p^e`.
    pub fn pow(&self, e: u64) -> BigRational {
        num_traits::pow(self.value.clone(), e as usize)
    }
}

impl fmt::Display for DensityParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl Serialize for DensityParam {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.text)
    }
}

impl<'de> Deserialize<'de> for DensityParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        DensityParam::parse(&text).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn binom2(j: u64) -> u64 {
    j * j.saturating_sub(1) / 2
}

pub(crate) fn factorial(j: u64) -> BigInt {
    (1..=j).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact `p^(j(j-1)/2) / j!`.
pub fn series_coefficient(p: &DensityParam, j: u64) -> BigRational {
    p.pow(binom2(j)) / BigRational::from_integer(factorial(j))
}

/// Working precision for degree-`k` coefficients: enough that `p^C(k,2)/k!`
/// keeps 64 significant bits against the leading term, and never below 128.
pub fn precision_floor(p: &DensityParam, k: usize) -> u32 {
    let k = k as f64;
    let inv_log = -p.to_f64().log2();
    let need = (k * (k - 1.0) / 2.0) * inv_log + k * k.max(1.0).log2() + 64.0;
    (need.ceil() as u32).max(128)
}

#[derive(Clone, Copy, Debug)]
pub struct SeriesConfig {
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { max_terms: 200_000 }
    }
}

#[derive(Clone, Debug)]
pub(crate) enum TailRule {
    /// Stop once the bounded tail is below this absolute value.
    Absolute(ExtReal),
    /// Stop once the bounded tail is below `2^-bits` times the largest term.
    RelativeToPeak(u32),
}

pub(crate) struct SeriesEnclosure {
    pub value: Interval,
}

/// Rough `log2` of the largest term `|x|^j p^(j+shift choose ..)/j!` and the
/// index where the term ratio first drops below one. Only used to size precision.
pub(crate) fn estimate_peak(xabs: f64, p: f64, shift: u32, cap: usize) -> (f64, usize) {
    if xabs == 0.0 {
        return (0.0, 0);
    }
    let lx = xabs.log2();
    let lp = p.log2();
    let mut log_term = 0.0f64;
    let mut peak = 0.0f64;
    for j in 0..cap {
        let step = lx + (j as f64 + shift as f64) * lp - ((j + 1) as f64).log2();
        if step < 0.0 {
            return (peak, j);
        }
        log_term += step;
        peak = peak.max(log_term);
    }
    (peak, cap)
}

/// Encloses `Σ_j x^j p^(C(j,2) + shift·j) / j!`.
///
/// `shift = 0` gives `f_p(x)`; `shift = 1` gives the term-wise derivative
/// `f_p'(x)`. Terms obey `t_{j+1} = t_j · x · p^(j+shift) / (j+1)`, whose ratio
/// decreases in `j`, so after index `J` the tail is at most `t_J r_J / (1 - r_J)`.
pub(crate) fn enclose_series(
    p: &DensityParam,
    x: &Interval,
    shift: u32,
    prec: u32,
    rule: &TailRule,
    min_terms: usize,
    max_terms: usize,
) -> Result<SeriesEnclosure, DefexpError> {
    let prec = prec.max(MIN_PRECISION);
    let p_enc = p.enclosure(prec);
    let one = ExtReal::one(prec);
    let mut q = Interval::from_rational(&p.pow(shift as u64), prec);
    let xabs = x.mag();
    let mut term = Interval::point(one.clone());
    let mut sum = term.clone();
    let mut peak = one.clone();
    let mut ratio_below_one_at: Option<usize> = None;
    let mut j = 0usize;
    loop {
        let ratio = xabs
            .mul(q.hi(), prec, Round::Up)
            .div_u64(j as u64 + 1, prec, Round::Up);
        if ratio_below_one_at.is_none() && ratio < one {
            ratio_below_one_at = Some(j);
        }
        if let Some(js) = ratio_below_one_at {
            if j >= min_terms && j >= 2 * js && ratio < one {
                let tb = term.mag();
                let headroom = one.sub(&ratio, prec, Round::Down);
                let tail = tb
                    .mul(&ratio, prec, Round::Up)
                    .div(&headroom, prec, Round::Up);
                let done = match rule {
                    TailRule::Absolute(err) => tb < err.mul(&headroom, prec, Round::Down),
                    TailRule::RelativeToPeak(bits) => tail <= peak.mul_2exp(-(*bits as i64)),
                };
                if done {
                    return Ok(SeriesEnclosure {
                        value: sum.widen(&tail, prec),
                    });
                }
            }
        }
        if j >= max_terms {
            return Err(DefexpError::NonConvergence {
                x: x.mid(prec).to_decimal_string(12),
                cap: max_terms,
            });
        }
        term = term.mul(x, prec).mul(&q, prec).div_u64(j as u64 + 1, prec);
        sum = sum.add(&term, prec);
        let m = term.mag();
        if m > peak {
            peak = m;
        }
        q = q.mul(&p_enc, prec);
        j += 1;
    }
}

fn absolute_series_value(
    p: &DensityParam,
    x: &Interval,
    shift: u32,
    err: &ExtReal,
    base_prec: u32,
    config: &SeriesConfig,
) -> Result<ExtReal, DefexpError> {
    if !err.is_positive() {
        return Err(DefexpError::NonpositiveTarget);
    }
    let xabs = x.mag().to_f64();
    let (peak, jstar) = estimate_peak(xabs, p.to_f64(), shift, config.max_terms);
    let need = peak - err.log2_abs() + ((2 * jstar + 2) as f64).log2() + 24.0;
    let mut prec = base_prec.max(128).max(need.ceil() as u32);
    let half = err.mul_2exp(-1);
    for _ in 0..6 {
        let enc = enclose_series(
            p,
            x,
            shift,
            prec,
            &TailRule::Absolute(half.clone()),
            0,
            config.max_terms,
        )?;
        if enc.value.radius(prec) < *err {
            return Ok(enc.value.mid(prec));
        }
        prec *= 2;
    }
    Err(DefexpError::NonConvergence {
        x: x.mid(prec).to_decimal_string(12),
        cap: config.max_terms,
    })
}

/// `f_p(x)` to within `target_abs_err`.
pub fn eval_deformed_exp(
    p: &DensityParam,
    x: &ExtReal,
    target_abs_err: &ExtReal,
) -> Result<ExtReal, DefexpError> {
    eval_deformed_exp_with(p, x, target_abs_err, &SeriesConfig::default())
}

pub fn eval_deformed_exp_with(
    p: &DensityParam,
    x: &ExtReal,
    target_abs_err: &ExtReal,
    config: &SeriesConfig,
) -> Result<ExtReal, DefexpError> {
    absolute_series_value(
        p,
        &Interval::point(x.clone()),
        0,
        target_abs_err,
        x.precision(),
        config,
    )
}

/// `f_p'(x)` by term-wise differentiation, to within `target_abs_err`.
pub fn eval_deformed_exp_derivative(
    p: &DensityParam,
    x: &ExtReal,
    target_abs_err: &ExtReal,
) -> Result<ExtReal, DefexpError> {
    absolute_series_value(
        p,
        &Interval::point(x.clone()),
        1,
        target_abs_err,
        x.precision(),
        &SeriesConfig::default(),
    )
}

/// `f_p'(x) - f_p(px)`; both sides are computed to `target_abs_err`, so the
/// result is below `2·target_abs_err` in magnitude.
pub fn pantograph_residual(
    p: &DensityParam,
    x: &ExtReal,
    target_abs_err: &ExtReal,
) -> Result<ExtReal, DefexpError> {
    let config = SeriesConfig::default();
    let derivative = eval_deformed_exp_derivative(p, x, target_abs_err)?;
    let prec = derivative.precision().max(x.precision()) + 64;
    let px = p.enclosure(prec).mul(&Interval::point(x.clone()), prec);
    let delayed = absolute_series_value(p, &px, 0, target_abs_err, prec, &config)?;
    Ok(derivative.sub(&delayed, prec, Round::Nearest))
}

/// Coefficients `b_0..b_k` of a real polynomial, all positive.
#[derive(Clone, Debug)]
pub struct CoefficientList {
    coeffs: Vec<ExtReal>,
    exact: Option<Vec<BigRational>>,
    precision_bits: u32,
}

impl CoefficientList {
    /// Exact rational coefficients, rounded to `prec` bits for the value view.
    pub fn from_rationals(exact: Vec<BigRational>, prec: u32) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let coeffs = exact
            .iter()
            .map(|r| ExtReal::from_rational(r, prec, Round::Nearest))
            .collect();
        Self {
            coeffs,
            exact: Some(exact),
            precision_bits: prec,
        }
    }

    /// Approximate coefficients; comparisons on these use a guard band.
    pub fn from_values(coeffs: Vec<ExtReal>) -> Self {
        let precision_bits = coeffs
            .iter()
            .map(ExtReal::precision)
            .min()
            .unwrap_or(MIN_PRECISION);
        Self {
            coeffs,
            exact: None,
            precision_bits,
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[ExtReal] {
        &self.coeffs
    }

    pub fn exact(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    pub(crate) fn enclosure(&self, j: usize, prec: u32) -> Interval {
        match &self.exact {
            Some(ex) => Interval::from_rational(&ex[j], prec),
            None => Interval::point(self.coeffs[j].clone()),
        }
    }

    /// Horner evaluation over an interval argument.
    pub(crate) fn eval_enclosure(&self, x: &Interval, prec: u32) -> Interval {
        let k = self.degree();
        let mut acc = self.enclosure(k, prec);
        for j in (0..k).rev() {
            acc = acc.mul(x, prec).add(&self.enclosure(j, prec), prec);
        }
        acc
    }

    /// `log2` of `Σ |b_j| |x|^j`, used to size precision against cancellation.
    pub(crate) fn log2_abs_sum(&self, xabs: f64) -> f64 {
        let lx = if xabs == 0.0 { f64::NEG_INFINITY } else { xabs.log2() };
        let logs: Vec<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j == 0 {
                    c.log2_abs()
                } else {
                    c.log2_abs() + j as f64 * lx
                }
            })
            .collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + logs.iter().map(|l| (l - m).exp2()).sum::<f64>().log2()
    }
}

/// `b_j = p^(j(j-1)/2) / j!` for `j = 0..=k`.
pub fn truncated_coefficients(p: &DensityParam, k: usize) -> Result<CoefficientList, DefexpError> {
    if k < 2 {
        return Err(DefexpError::Degree(k));
    }
    let exact = (0..=k as u64).map(|j| series_coefficient(p, j)).collect();
    Ok(CoefficientList::from_rationals(exact, precision_floor(p, k)))
}

/// `Σ b_j x^j`, with error at most `2^(-precision/2)` relative to the value
/// (or absolute error at the rounding floor of `Σ |b_j x^j|` near a root).
pub fn eval_truncated(coeffs: &CoefficientList, x: &ExtReal) -> ExtReal {
    let base = coeffs.precision_bits.max(x.precision());
    let scale = coeffs.log2_abs_sum(x.abs().to_f64()).max(0.0);
    let mut prec = base + 32 + scale.ceil() as u32;
    let xi = Interval::point(x.clone());
    let mut enc = coeffs.eval_enclosure(&xi, prec);
    for _ in 0..8 {
        let mid = enc.mid(prec);
        let width = enc.width(prec);
        let relative_ok = width <= mid.abs().mul_2exp(-(base as i64 / 2));
        let floor_ok = width.log2_abs() <= scale - base as f64;
        if relative_ok || floor_ok {
            return mid.with_precision(base, Round::Nearest);
        }
        prec *= 2;
        enc = coeffs.eval_enclosure(&xi, prec);
    }
    enc.mid(prec).with_precision(base, Round::Nearest)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KurtzOutcome {
    pub holds: bool,
    pub first_failure: Option<usize>,
    /// Whether the comparison used exact rationals.
    pub exact: bool,
}

/// Kurtz's sufficient condition for all roots real and distinct:
/// `b_j^2 > 4 b_{j-1} b_{j+1}` for `1 <= j <= k-1`, all `b_j > 0`.
pub fn kurtz_check(coeffs: &CoefficientList) -> Result<KurtzOutcome, DefexpError> {
    if let Some(index) = coeffs.coeffs.iter().position(|c| !c.is_positive()) {
        return Err(DefexpError::NonpositiveCoefficient { index });
    }
    if let Some(ex) = &coeffs.exact {
        if let Some(index) = ex.iter().position(|c| !c.is_positive()) {
            return Err(DefexpError::NonpositiveCoefficient { index });
        }
    }
    let k = coeffs.degree();
    let four = BigRational::from_integer(BigInt::from(4));
    let prec = coeffs.precision_bits;
    for j in 1..k {
        let ok = match &coeffs.exact {
            Some(ex) => &ex[j] * &ex[j] > &four * &ex[j - 1] * &ex[j + 1],
            None => {
                let c = &coeffs.coeffs;
                let lhs = c[j].mul(&c[j], prec, Round::Down);
                let rhs = c[j - 1]
                    .mul(&c[j + 1], prec, Round::Up)
                    .mul_2exp(2);
                // Inside the guard band counts as a failure.
                let guard = rhs.mul_2exp(-(prec as i64 / 2));
                lhs > rhs.add(&guard, prec, Round::Up)
            }
        };
        if !ok {
            return Ok(KurtzOutcome {
                holds: false,
                first_failure: Some(j),
                exact: coeffs.exact.is_some(),
            });
        }
    }
    Ok(KurtzOutcome {
        holds: true,
        first_failure: None,
        exact: coeffs.exact.is_some(),
    })
}

/// Smallest `j` where `1/j > 4p/(j+1)` fails, if any `j <= k-1` does.
pub fn kurtz_closed_form_failure(p: &DensityParam, k: usize) -> Option<usize> {
    let four_p = p.rational() * BigRational::from_integer(BigInt::from(4));
    (1..k).find(|&j| {
        let lhs = BigRational::new(BigInt::one(), BigInt::from(j));
        let rhs = &four_p / BigRational::from_integer(BigInt::from(j + 1));
        lhs <= rhs
    })
}
