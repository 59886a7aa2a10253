//! Outward-rounded interval arithmetic on binary fixed-point numbers.
//!
//! A [`Real`] is a closed interval `[lo, hi] · 2^-bits` with integer
//! endpoints. Every operation rounds the lower end down and the upper end up,
//! so the true value always stays inside. The fraction width is chosen per
//! value and the wider one wins when two values meet.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fraction bits used when nothing else is requested.
pub const DEFAULT_BITS: u32 = 128;

#[derive(Clone, PartialEq, Eq)]
pub struct Real {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// `m · 2^-bits` as an f64, rounded toward `-∞` or `+∞`.
fn scaled_to_f64(m: &BigInt, bits: u32, up: bool) -> f64 {
    let (mut m, mut bits) = (m.clone(), bits);
    if bits > 1000 {
        let drop = bits - 1000;
        m = if up {
            ceil_div(&m, &pow2(drop))
        } else {
            floor_div(&m, &pow2(drop))
        };
        bits = 1000;
    }
    let f = m.to_f64().unwrap_or(if m.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    let f = if up { f.next_up() } else { f.next_down() };
    let scaled = f * 2f64.powi(-(bits as i32));
    if up {
        scaled.next_up()
    } else {
        scaled.next_down()
    }
}

impl Real {
    pub fn from_int(n: i64) -> Real {
        Real::exact_scaled(BigInt::from(n) << DEFAULT_BITS as usize, DEFAULT_BITS)
    }

    pub fn zero() -> Real {
        Real::from_int(0)
    }

    pub fn one() -> Real {
        Real::from_int(1)
    }

    fn exact_scaled(m: BigInt, bits: u32) -> Real {
        Real {
            lo: m.clone(),
            hi: m,
            bits,
        }
    }

    /// Encloses `num/den` with `bits` fraction bits.
    pub fn from_ratio(r: &BigRational, bits: u32) -> Real {
        let num = r.numer() << bits as usize;
        let den = r.denom();
        Real {
            lo: floor_div(&num, den),
            hi: ceil_div(&num, den),
            bits,
        }
    }

    /// Encloses an f64 (exactly, when its binary exponent allows).
    pub fn from_f64(x: f64, bits: u32) -> Real {
        let r = BigRational::from_float(x).expect("finite float");
        Real::from_ratio(&r, bits)
    }

    /// The interval `[lo, hi]` for two reals, taking outer endpoints.
    pub fn hull(a: &Real, b: &Real) -> Real {
        let bits = a.bits.max(b.bits);
        let (a, b) = (a.rescaled(bits), b.rescaled(bits));
        Real {
            lo: a.lo.min(b.lo),
            hi: a.hi.max(b.hi),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Re-expresses with `bits` fraction bits, rounding outward if narrower.
    pub fn rescaled(&self, bits: u32) -> Real {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let k = (bits - self.bits) as usize;
                Real {
                    lo: &self.lo << k,
                    hi: &self.hi << k,
                    bits,
                }
            }
            Ordering::Less => {
                let d = pow2(self.bits - bits);
                Real {
                    lo: floor_div(&self.lo, &d),
                    hi: ceil_div(&self.hi, &d),
                    bits,
                }
            }
        }
    }

    fn aligned(&self, other: &Real) -> (Real, Real) {
        let bits = self.bits.max(other.bits);
        (self.rescaled(bits), other.rescaled(bits))
    }

    pub fn add(&self, other: &Real) -> Real {
        let (a, b) = self.aligned(other);
        Real {
            lo: a.lo + b.lo,
            hi: a.hi + b.hi,
            bits: a.bits,
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        let (a, b) = self.aligned(other);
        Real {
            lo: a.lo - b.hi,
            hi: a.hi - b.lo,
            bits: a.bits,
        }
    }

    pub fn neg(&self) -> Real {
        Real {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        let (a, b) = self.aligned(other);
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let lo = products.iter().min().unwrap();
        let hi = products.iter().max().unwrap();
        let d = pow2(a.bits);
        Real {
            lo: floor_div(lo, &d),
            hi: ceil_div(hi, &d),
            bits: a.bits,
        }
    }

    /// `1/self`. Panics if the interval contains zero.
    pub fn recip(&self) -> Real {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an interval containing zero"
        );
        let num = pow2(2 * self.bits);
        if self.lo.is_positive() {
            Real {
                lo: floor_div(&num, &self.hi),
                hi: ceil_div(&num, &self.lo),
                bits: self.bits,
            }
        } else {
            self.neg().recip().neg()
        }
    }

    pub fn div(&self, other: &Real) -> Real {
        let (a, b) = self.aligned(other);
        a.mul(&b.recip())
    }

    pub fn powi(&self, n: u32) -> Real {
        let mut acc = Real::one().rescaled(self.bits);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn intersect(&self, other: &Real) -> Option<Real> {
        let (a, b) = self.aligned(other);
        let lo = a.lo.max(b.lo);
        let hi = a.hi.min(b.hi);
        (lo <= hi).then_some(Real {
            lo,
            hi,
            bits: a.bits,
        })
    }

    /// Widens both ends by `r` (taken as an absolute amount).
    pub fn widen(&self, r: &Real) -> Real {
        let (a, r) = self.aligned(r);
        Real {
            lo: &a.lo - &r.hi.abs(),
            hi: &a.hi + &r.hi.abs(),
            bits: a.bits,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// Certain ordering, or `None` when the intervals overlap (and are not
    /// the same single point).
    pub fn cmp_certain(&self, other: &Real) -> Option<Ordering> {
        let (a, b) = self.aligned(other);
        if a.hi < b.lo {
            Some(Ordering::Less)
        } else if a.lo > b.hi {
            Some(Ordering::Greater)
        } else if a.is_exact() && b.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, other: &Real) -> bool {
        self.cmp_certain(other) == Some(Ordering::Less)
    }

    pub fn certainly_gt(&self, other: &Real) -> bool {
        self.cmp_certain(other) == Some(Ordering::Greater)
    }

    pub fn certainly_le(&self, other: &Real) -> bool {
        let (a, b) = self.aligned(other);
        a.hi <= b.lo
    }

    pub fn certainly_ge(&self, other: &Real) -> bool {
        other.certainly_le(self)
    }

    pub fn overlaps(&self, other: &Real) -> bool {
        self.intersect(other).is_some()
    }

    /// Lower endpoint, rounded down to an f64.
    pub fn lo_f64(&self) -> f64 {
        if self.lo.is_zero() {
            return 0.0;
        }
        scaled_to_f64(&self.lo, self.bits, false)
    }

    /// Upper endpoint, rounded up to an f64.
    pub fn hi_f64(&self) -> f64 {
        if self.hi.is_zero() {
            return 0.0;
        }
        scaled_to_f64(&self.hi, self.bits, true)
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo_f64() + self.hi_f64())
    }

    /// Exact midpoint as a rational.
    pub fn mid_ratio(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, pow2(self.bits + 1))
    }

    pub fn lo_ratio(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.bits))
    }

    pub fn hi_ratio(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.bits))
    }

    /// `hi - lo`, rounded up to an f64.
    pub fn width_f64(&self) -> f64 {
        scaled_to_f64(&(&self.hi - &self.lo), self.bits, true).max(0.0)
    }

    /// `log2(hi - lo)`, or `-inf` for a point; robust for tiny widths.
    pub fn log2_width(&self) -> f64 {
        let w = &self.hi - &self.lo;
        if w.is_zero() {
            return f64::NEG_INFINITY;
        }
        w.bits() as f64 - self.bits as f64
    }

    /// Point at the exact midpoint (same fraction width).
    pub fn midpoint(&self) -> Real {
        let m = floor_div(&(&self.lo + &self.hi), &BigInt::from(2));
        Real::exact_scaled(m, self.bits)
    }

    /// Replaces the lower endpoint by `max(lo, x)`.
    pub fn clamp_lo(&self, x: &Real) -> Real {
        let (a, b) = self.aligned(x);
        Real {
            lo: a.lo.max(b.lo),
            hi: a.hi.clone(),
            bits: a.bits,
        }
    }

    /// Replaces the upper endpoint by `min(hi, x)`.
    pub fn clamp_hi(&self, x: &Real) -> Real {
        let (a, b) = self.aligned(x);
        Real {
            lo: a.lo.clone(),
            hi: a.hi.min(b.hi),
            bits: a.bits,
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo_f64(), self.hi_f64())
    }
}

/// Parses a plain decimal literal such as `1.7`, `2` or `0.25`.
pub fn parse_decimal(s: &str) -> Option<(BigRational, u32)> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|c| c.is_ascii_digit()) || !frac_part.bytes().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().ok()?
    };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(if neg { -num } else { num }, den);
    Some((r, frac_part.len() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn arithmetic_encloses_exact_results() {
        let third = Real::from_ratio(&ratio(1, 3), 64);
        assert!(third.lo_f64() <= 1.0 / 3.0 && 1.0 / 3.0 <= third.hi_f64());
        let one = third.mul(&Real::from_int(3));
        assert!(one.lo_f64() <= 1.0 && one.hi_f64() >= 1.0);
        let back = Real::one().div(&Real::from_int(3));
        assert!(back.overlaps(&third));
        let sq = Real::from_ratio(&ratio(3, 2), 64).powi(3);
        assert!(sq.lo_f64() <= 3.375 && sq.hi_f64() >= 3.375);
        assert!(sq.is_exact());
    }

    #[test]
    fn subtraction_and_negatives() {
        let a = Real::from_ratio(&ratio(-7, 5), 80);
        let b = Real::from_ratio(&ratio(2, 5), 80);
        let c = a.sub(&b).mul(&a);
        let exact = (-7.0 / 5.0 - 2.0 / 5.0) * (-7.0 / 5.0);
        assert!(c.lo_f64() <= exact && exact <= c.hi_f64());
        let r = a.recip();
        assert!(r.lo_f64() <= -5.0 / 7.0 && -5.0 / 7.0 <= r.hi_f64());
    }

    #[test]
    fn certain_comparisons() {
        let a = Real::from_ratio(&ratio(1, 3), 64);
        let b = Real::from_ratio(&ratio(1, 2), 64);
        assert_eq!(a.cmp_certain(&b), Some(Ordering::Less));
        assert_eq!(a.cmp_certain(&a), None);
        assert_eq!(b.cmp_certain(&b), Some(Ordering::Equal));
        assert!(b.certainly_le(&b));
    }

    #[test]
    fn decimal_literals() {
        let (r, places) = parse_decimal("1.7").unwrap();
        assert_eq!(r, ratio(17, 10));
        assert_eq!(places, 1);
        assert_eq!(parse_decimal("2").unwrap().0, ratio(2, 1));
        assert_eq!(parse_decimal(".5").unwrap().0, ratio(1, 2));
        assert!(parse_decimal("1.2.3").is_none());
        assert!(parse_decimal("abc").is_none());
    }
}
