//! Closed rational intervals for irrational constants.
//!
//! Roots are bracketed by integer `nth_root` at a fixed decimal scale;
//! arithmetic keeps the result a superset of every real value reachable from
//! the operands. Long chains can be re-rounded outward with
//! [`Enclosure::rounded`] to keep denominators small.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_decimal, Rat};

/// Extra decimal digits carried beyond the requested precision.
const GUARD_DIGITS: u32 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    lo: Rat,
    hi: Rat,
}

fn scale(digits: u32) -> BigInt {
    BigInt::from(10u32).pow(digits + GUARD_DIGITS)
}

impl Enclosure {
    pub fn exact(x: Rat) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn new(lo: Rat, hi: Rat) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain("empty interval".into()));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &Rat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Every point of the interval is strictly below `x`.
    pub fn certainly_below(&self, x: &Rat) -> bool {
        &self.hi < x
    }

    /// Outward rounding to a grid of `10^-(digits + guard)`.
    pub fn rounded(&self, digits: u32) -> Self {
        let s = Rat::from_integer(scale(digits));
        Self {
            lo: (&self.lo * &s).floor() / &s,
            hi: (&self.hi * &s).ceil() / &s,
        }
    }

    /// `x^(1/n)` for `x >= 0`.
    pub fn nth_root_of(x: &Rat, n: u32, digits: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("zeroth root".into()));
        }
        if x.is_negative() {
            return Err(Error::Domain("root of a negative number".into()));
        }
        // (p/q)^(1/n) = (p q^(n-1) S^n)^(1/n) / (q S)
        let s = scale(digits);
        let (p, q) = (x.numer().clone(), x.denom().clone());
        let radicand = &p * q.pow(n - 1) * s.pow(n);
        let m = radicand.nth_root(n);
        let den = &q * &s;
        let lo = Rat::new(m.clone(), den.clone());
        let hi = if m.pow(n) == radicand {
            lo.clone()
        } else {
            Rat::new(m + 1, den)
        };
        Ok(Self { lo, hi })
    }

    pub fn sqrt_of(x: &Rat, digits: u32) -> Result<Self> {
        Self::nth_root_of(x, 2, digits)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().cloned().unwrap_or_default();
        let hi = c.iter().max().cloned().unwrap_or_default();
        Self { lo, hi }
    }

    pub fn scale_by(&self, k: &Rat) -> Self {
        self.mul(&Self::exact(k.clone()))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.contains(&Rat::zero()) {
            return Err(Error::Domain("division by an interval containing 0".into()));
        }
        Ok(Self {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    /// Integer power; tight for even powers of sign-changing intervals.
    pub fn pow(&self, k: u32) -> Self {
        if k == 0 {
            return Self::exact(Rat::one());
        }
        let (a, b) = (self.lo.pow(k as i32), self.hi.pow(k as i32));
        if k % 2 == 1 || !self.lo.is_negative() {
            Self {
                lo: a.clone().min(b.clone()),
                hi: a.max(b),
            }
        } else if !self.hi.is_positive() {
            Self { lo: b, hi: a }
        } else {
            Self {
                lo: Rat::zero(),
                hi: a.max(b),
            }
        }
    }

    pub fn max(&self, o: &Self) -> Self {
        Self {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    pub fn min(&self, o: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().min(o.hi.clone()),
        }
    }

    /// Endpoints printed to `digits` places, rounded outward.
    pub fn decimal_bounds(&self, digits: u32) -> (String, String) {
        let s = Rat::from_integer(BigInt::from(10u32).pow(digits));
        let lo = (&self.lo * &s).floor() / &s;
        let hi = (&self.hi * &s).ceil() / &s;
        (fmt_decimal(&lo, digits), fmt_decimal(&hi, digits))
    }

    /// Midpoint to `digits` decimal places.
    pub fn to_decimal(&self, digits: u32) -> String {
        fmt_decimal(&self.midpoint(), digits)
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(30) as u32;
        let (lo, hi) = self.decimal_bounds(d);
        write!(f, "[{lo}, {hi}]")
    }
}
