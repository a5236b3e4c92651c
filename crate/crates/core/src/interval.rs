//! Closed intervals with [`ExtReal`] endpoints and outward rounding.

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::ext_real::{ExtReal, Round};

/// `[lo, hi]`, with every operation rounding `lo` down and `hi` up so the
/// true result is always contained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: ExtReal,
    hi: ExtReal,
}

impl Interval {
    pub fn new(lo: ExtReal, hi: ExtReal) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn point(x: ExtReal) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self {
            lo: ExtReal::from_rational(r, prec, Round::Down),
            hi: ExtReal::from_rational(r, prec, Round::Up),
        }
    }

    pub fn lo(&self) -> &ExtReal {
        &self.lo
    }

    pub fn hi(&self) -> &ExtReal {
        &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, x: &ExtReal) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Certified sign: `Some` when every point of the interval has that sign.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.lo.is_negative()
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        Self {
            lo: self.lo.add(&other.lo, prec, Round::Down),
            hi: self.hi.add(&other.hi, prec, Round::Up),
        }
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        if self.is_nonnegative() && other.is_nonnegative() {
            return Self {
                lo: self.lo.mul(&other.lo, prec, Round::Down),
                hi: self.hi.mul(&other.hi, prec, Round::Up),
            };
        }
        if other.lo == other.hi {
            return self.scale(&other.lo, prec);
        }
        if self.lo == self.hi {
            return other.scale(&self.lo, prec);
        }
        let corners = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = corners
            .iter()
            .map(|(a, b)| a.mul(b, prec, Round::Down))
            .min()
            .expect("four corners");
        let hi = corners
            .iter()
            .map(|(a, b)| a.mul(b, prec, Round::Up))
            .max()
            .expect("four corners");
        Self { lo, hi }
    }

    /// Multiplication by an exact scalar.
    pub fn scale(&self, k: &ExtReal, prec: u32) -> Self {
        if k.is_negative() {
            Self {
                lo: self.hi.mul(k, prec, Round::Down),
                hi: self.lo.mul(k, prec, Round::Up),
            }
        } else {
            Self {
                lo: self.lo.mul(k, prec, Round::Down),
                hi: self.hi.mul(k, prec, Round::Up),
            }
        }
    }

    pub fn div_u64(&self, k: u64, prec: u32) -> Self {
        Self {
            lo: self.lo.div_u64(k, prec, Round::Down),
            hi: self.hi.div_u64(k, prec, Round::Up),
        }
    }

    /// Division by an interval that excludes zero; `None` otherwise.
    pub fn div(&self, other: &Self, prec: u32) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let corners = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = corners
            .iter()
            .map(|(a, b)| a.div(b, prec, Round::Down))
            .min()?;
        let hi = corners
            .iter()
            .map(|(a, b)| a.div(b, prec, Round::Up))
            .max()?;
        Some(Self { lo, hi })
    }

    /// Upper bound on `max |x|` over the interval.
    pub fn mag(&self) -> ExtReal {
        self.lo.abs().max(self.hi.abs())
    }

    /// Adds `[-r, r]`.
    pub fn widen(&self, r: &ExtReal, prec: u32) -> Self {
        Self {
            lo: self.lo.sub(r, prec, Round::Down),
            hi: self.hi.add(r, prec, Round::Up),
        }
    }

    pub fn width(&self, prec: u32) -> ExtReal {
        self.hi.sub(&self.lo, prec, Round::Up)
    }

    pub fn radius(&self, prec: u32) -> ExtReal {
        self.width(prec).mul_2exp(-1)
    }

    pub fn mid(&self, prec: u32) -> ExtReal {
        self.lo.add(&self.hi, prec + 1, Round::Nearest).mul_2exp(-1).with_precision(prec, Round::Nearest)
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}
