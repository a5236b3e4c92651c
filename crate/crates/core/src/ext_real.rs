//! Arbitrary-precision binary floating point with directed rounding.
//!
//! An [`ExtReal`] is an exact dyadic number `mantissa * 2^exponent` tagged with
//! the working precision (in bits) it was produced at. Every arithmetic
//! operation takes the target precision and a [`Round`] mode explicitly, so
//! callers building enclosures can round lower bounds down and upper bounds up.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Smallest working precision accepted anywhere in the crate.
pub const MIN_PRECISION: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
    /// To nearest, ties toward positive infinity.
    Nearest,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseDecimalError {
    #[error("empty number")]
    Empty,
    #[error("malformed number {0:?}")]
    Malformed(String),
    #[error("exponent out of range in {0:?}")]
    ExponentRange(String),
}

#[derive(Clone, Debug)]
pub struct ExtReal {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn round_mant(mant: BigInt, exp: i64, prec: u32, rnd: Round) -> (BigInt, i64) {
    let bits = mant.bits();
    let (mut m, mut e) = if bits > prec as u64 {
        let s = (bits - prec as u64) as usize;
        let m = match rnd {
            Round::Down => mant >> s,
            Round::Up => -((-mant) >> s),
            Round::Nearest => (mant + (BigInt::one() << (s - 1))) >> s,
        };
        (m, exp + s as i64)
    } else {
        (mant, exp)
    };
    if m.is_zero() {
        return (m, 0);
    }
    let tz = m.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        m >>= tz as usize;
        e += tz as i64;
    }
    (m, e)
}

impl ExtReal {
    pub fn zero(prec: u32) -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
            prec: prec.max(MIN_PRECISION),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    /// Builds `mant * 2^exp` rounded to `prec` bits.
    pub fn from_parts(mant: BigInt, exp: i64, prec: u32, rnd: Round) -> Self {
        let prec = prec.max(MIN_PRECISION);
        let (mant, exp) = round_mant(mant, exp, prec, rnd);
        Self { mant, exp, prec }
    }

    /// Exact for integers that fit in `prec` bits.
    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_parts(BigInt::from(v), 0, prec, Round::Nearest)
    }

    pub fn from_bigint(v: &BigInt, prec: u32, rnd: Round) -> Self {
        Self::from_parts(v.clone(), 0, prec, rnd)
    }

    /// Exact conversion of a finite `f64` (precision is raised to hold it).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Self::from_parts(BigInt::from(m) * sign, e, prec.max(53), Round::Nearest)
    }

    pub fn from_rational(r: &BigRational, prec: u32, rnd: Round) -> Self {
        Self::from_ratio(r.numer(), r.denom(), prec, rnd)
    }

    /// `num / den` rounded in direction `rnd`; `den` must be nonzero.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32, rnd: Round) -> Self {
        assert!(!den.is_zero(), "division by zero");
        let prec = prec.max(MIN_PRECISION);
        if num.is_zero() {
            return Self::zero(prec);
        }
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num.clone(), den.clone())
        };
        let shift = (prec as i64 + 3 + den.bits() as i64 - num.bits() as i64).max(0);
        let scaled = num << shift as usize;
        let (q, r) = scaled.div_mod_floor(&den);
        // Sticky bit: q' lies strictly inside (q, q+1) whenever the division was inexact.
        let sticky = if r.is_zero() { BigInt::zero() } else { BigInt::one() };
        let q2 = (q << 1usize) + sticky;
        Self::from_parts(q2, -shift - 1, prec, rnd)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Same value, relabelled (and if needed rounded) to a new precision.
    pub fn with_precision(&self, prec: u32, rnd: Round) -> Self {
        Self::from_parts(self.mant.clone(), self.exp, prec, rnd)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        match self.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn neg(&self) -> Self {
        Self {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_2exp(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    /// Position just above the most significant bit: `|self| < 2^top`.
    fn top(&self) -> i64 {
        self.mant.bits() as i64 + self.exp
    }

    /// `floor(log2 |self|)`, or `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.top() - 1)
        }
    }

    pub fn add(&self, other: &Self, prec: u32, rnd: Round) -> Self {
        if other.is_zero() {
            return self.with_precision(prec, rnd);
        }
        if self.is_zero() {
            return other.with_precision(prec, rnd);
        }
        let prec = prec.max(MIN_PRECISION);
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        // When `small` sits wholly below both the rounding grid and the last bit
        // of `big`, any same-signed value in that gap rounds identically.
        let pos = big.exp.min(big.top() - prec as i64) - 2;
        if small.top() <= pos {
            let sticky = if small.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            let e = pos - 1;
            let shifted = &big.mant << (big.exp - e) as usize;
            return Self::from_parts(shifted + sticky, e, prec, rnd);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        Self::from_parts(a + b, e, prec, rnd)
    }

    pub fn sub(&self, other: &Self, prec: u32, rnd: Round) -> Self {
        self.add(&other.neg(), prec, rnd)
    }

    pub fn mul(&self, other: &Self, prec: u32, rnd: Round) -> Self {
        Self::from_parts(&self.mant * &other.mant, self.exp + other.exp, prec, rnd)
    }

    pub fn mul_u64(&self, k: u64, prec: u32, rnd: Round) -> Self {
        Self::from_parts(&self.mant * BigInt::from(k), self.exp, prec, rnd)
    }

    /// Division; panics if `other` is zero.
    pub fn div(&self, other: &Self, prec: u32, rnd: Round) -> Self {
        assert!(!other.is_zero(), "division by zero");
        let q = Self::from_ratio(&self.mant, &other.mant, prec, rnd);
        q.mul_2exp(self.exp - other.exp)
    }

    pub fn div_u64(&self, k: u64, prec: u32, rnd: Round) -> Self {
        assert!(k != 0, "division by zero");
        let q = Self::from_ratio(&self.mant, &BigInt::from(k), prec, rnd);
        q.mul_2exp(self.exp)
    }

    /// `self^n` by repeated squaring, each step rounded in direction `rnd`.
    /// Only valid as a directed bound for nonnegative `self`.
    pub fn powu(&self, mut n: u64, prec: u32, rnd: Round) -> Self {
        debug_assert!(!self.is_negative() || rnd == Round::Nearest);
        let mut acc = Self::one(prec);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec, rnd);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, prec, rnd);
            }
        }
        acc
    }

    /// Floor as an integer (exact).
    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            &self.mant >> (-self.exp) as usize
        }
    }

    /// Exact rational value.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let (m, e) = if bits > 62 {
            let s = bits - 62;
            (&self.mant >> s as usize, self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let m = m.to_i64().expect("62-bit mantissa") as f64;
        scale_f64(m, e)
    }

    /// Approximate `log2 |self|` (`-inf` for zero).
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let s = bits.saturating_sub(62);
        let m = (self.mant.abs() >> s as usize).to_f64().expect("62-bit mantissa");
        m.log2() + (self.exp + s as i64) as f64
    }

    /// Decimal rendering with `digits` significant digits (round to nearest).
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let exact = self.to_rational().abs();
        let mut e10 = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        let ten = BigInt::from(10);
        let lower = num_traits::pow(ten.clone(), digits - 1);
        let upper = &lower * &ten;
        let n = loop {
            let shift = digits as i64 - 1 - e10;
            let scaled = if shift >= 0 {
                &exact * BigRational::from_integer(num_traits::pow(ten.clone(), shift as usize))
            } else {
                &exact / BigRational::from_integer(num_traits::pow(ten.clone(), (-shift) as usize))
            };
            let n = scaled.round();
            let n = n.to_integer();
            if n >= upper {
                e10 += 1;
            } else if n < lower {
                e10 -= 1;
            } else {
                break n;
            }
        };
        let sign = if self.is_negative() { "-" } else { "" };
        let s = n.to_string();
        format_decimal(sign, &s, e10)
    }

    /// Parses a decimal literal (`-12.5e-3` style) into its exact rational value.
    pub fn parse_rational(text: &str) -> Result<BigRational, ParseDecimalError> {
        parse_decimal_rational(text)
    }

    /// Parses a decimal literal and rounds it to `prec` bits.
    pub fn parse_decimal(text: &str, prec: u32, rnd: Round) -> Result<Self, ParseDecimalError> {
        let r = parse_decimal_rational(text)?;
        Ok(Self::from_rational(&r, prec, rnd))
    }
}

fn scale_f64(mut m: f64, mut e: i64) -> f64 {
    while e > 1000 {
        m *= 2f64.powi(1000);
        e -= 1000;
        if m.is_infinite() {
            return m;
        }
    }
    while e < -1000 {
        m *= 2f64.powi(-1000);
        e += 1000;
        if m == 0.0 {
            return m;
        }
    }
    m * 2f64.powi(e as i32)
}

fn format_decimal(sign: &str, digits: &str, e10: i64) -> String {
    let trimmed = digits.trim_end_matches('0');
    let trimmed = if trimmed.is_empty() { "0" } else { trimmed };
    if (-7..21).contains(&e10) {
        if e10 >= 0 {
            let int_len = e10 as usize + 1;
            if trimmed.len() <= int_len {
                format!("{sign}{trimmed}{}", "0".repeat(int_len - trimmed.len()))
            } else {
                format!("{sign}{}.{}", &trimmed[..int_len], &trimmed[int_len..])
            }
        } else {
            let zeros = (-e10 - 1) as usize;
            format!("{sign}0.{}{trimmed}", "0".repeat(zeros))
        }
    } else if trimmed.len() == 1 {
        format!("{sign}{trimmed}e{e10}")
    } else {
        format!("{sign}{}.{}e{e10}", &trimmed[..1], &trimmed[1..])
    }
}

fn parse_decimal_rational(text: &str) -> Result<BigRational, ParseDecimalError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseDecimalError::Empty);
    }
    let malformed = || ParseDecimalError::Malformed(text.to_string());
    let (neg, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = body[i + 1..].parse().map_err(|_| malformed())?;
            (&body[..i], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let digits = BigInt::parse_bytes(all_digits.as_bytes(), 10).ok_or_else(malformed)?;
    let scale = exponent - frac_part.len() as i64;
    if scale.abs() > 100_000 {
        return Err(ParseDecimalError::ExponentRange(text.to_string()));
    }
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(if neg { -value } else { value })
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Ordering::Equal {
            return Ordering::Equal;
        }
        let by_magnitude = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = self.mant.abs() << (self.exp - e) as usize;
                let b = other.mant.abs() << (other.exp - e) as usize;
                a.cmp(&b)
            }
            ord => ord,
        };
        if sa == Ordering::Less {
            by_magnitude.reverse()
        } else {
            by_magnitude
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.prec as f64) * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_decimal_string(digits))
    }
}
