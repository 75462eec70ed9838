//! Closed real intervals with dyadic fixed-point endpoints.
//!
//! An [`Interval`] at precision `p` stores integers `lo <= hi` and denotes the
//! set `[lo / 2^p, hi / 2^p]`. Every operation rounds its endpoints outward,
//! so the true result of the corresponding real operation is always contained
//! in the returned interval.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Extra working bits used inside transcendental kernels.
const GUARD: u32 = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn pow2(s: u32) -> BigInt {
    BigInt::one() << s
}

fn floor_shr(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        x.clone()
    } else {
        x.div_floor(&pow2(s))
    }
}

fn ceil_shr(x: &BigInt, s: u32) -> BigInt {
    -floor_shr(&-x, s)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn bit_length(v: u64) -> u32 {
    64 - v.leading_zeros()
}

/// Fixed-point value `v / 2^w` with absolute error at most `err / 2^w`.
struct Approx {
    v: BigInt,
    err: u64,
}

/// `atanh(t)` for `t = x / 2^w`, `0 <= t <= 1/5`, where `x` is a floor
/// approximation of the exact argument (error below one unit).
fn atanh_fixed(x: &BigInt, w: u32) -> Approx {
    let t2 = (x * x) >> w;
    let mut p = x.clone();
    let mut sum = x.clone();
    let mut k: u64 = 0;
    loop {
        p = (&p * &t2) >> w;
        if p.is_zero() {
            break;
        }
        k += 1;
        sum += &p / BigInt::from(2 * k + 1);
    }
    Approx {
        v: sum,
        err: 4 * k + 8,
    }
}

/// `ln 2 = 2 atanh(1/3)` at working precision `w`.
fn ln2_fixed(w: u32) -> Approx {
    let mut p: BigInt = pow2(w) / 3;
    let mut sum = p.clone();
    let mut k: u64 = 0;
    loop {
        p /= 9;
        if p.is_zero() {
            break;
        }
        k += 1;
        sum += &p / BigInt::from(2 * k + 1);
    }
    Approx {
        v: sum << 1,
        err: 10 * k + 10,
    }
}

/// `atan(1/m)` for integer `m >= 2` at working precision `w`.
fn atan_inv_fixed(m: u64, w: u32) -> Approx {
    let m2 = BigInt::from(m * m);
    let mut p = pow2(w) / m;
    let mut sum = p.clone();
    let mut k: u64 = 0;
    loop {
        p = p.div_floor(&m2);
        if p.is_zero() {
            break;
        }
        k += 1;
        let term = &p / BigInt::from(2 * k + 1);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    Approx {
        v: sum,
        err: 2 * k + 6,
    }
}

/// `ln n` for a positive integer, as a fixed-point approximation at `w` bits.
fn ln_int_fixed(n: &BigInt, w: u32) -> Approx {
    debug_assert!(n.is_positive());
    let mut e = n.bits() - 1;
    let mut base = pow2(e as u32);
    if (n << 1u32) >= &base * 3 {
        e += 1;
        base <<= 1u32;
    }
    let num = n - &base;
    let den = n + &base;
    let x = (num.abs() << w).div_floor(&den);
    let at = atanh_fixed(&x, w);
    let mut v = at.v << 1u32;
    if num.is_negative() {
        v = -v;
    }
    let mut err = 2 * at.err + 4;
    if e > 0 {
        let l2 = ln2_fixed(w);
        v += l2.v * BigInt::from(e);
        err += l2.err.saturating_mul(e);
    }
    Approx { v, err }
}

impl Interval {
    fn from_approx(a: Approx, w: u32, prec: u32) -> Interval {
        let err = BigInt::from(a.err);
        Interval {
            lo: floor_shr(&(&a.v - &err), w - prec),
            hi: ceil_shr(&(&a.v + &err), w - prec),
            prec,
        }
    }

    fn raw(lo: BigInt, hi: BigInt, prec: u32) -> Interval {
        debug_assert!(lo <= hi);
        Interval { lo, hi, prec }
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Interval {
        let m = v << prec;
        Interval::raw(m.clone(), m, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Interval {
        Interval::from_int(&BigInt::from(v), prec)
    }

    pub fn zero(prec: u32) -> Interval {
        Interval::raw(BigInt::zero(), BigInt::zero(), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Interval {
        let scaled = q.numer() << prec;
        Interval::raw(
            scaled.div_floor(q.denom()),
            ceil_div(&scaled, q.denom()),
            prec,
        )
    }

    /// Parses a finite decimal literal such as `1.25506` or `-0.4` exactly.
    pub fn from_decimal(s: &str, prec: u32) -> Result<Interval> {
        Ok(Interval::from_rational(&parse_decimal(s)?, prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_rational(&self) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(self.prec))
    }

    pub fn hi_rational(&self) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(self.prec))
    }

    /// Width of the interval in units of `2^-prec`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo_rational() <= q && q <= &self.hi_rational()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Every point of `self` is `<=` every point of `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.aligned(other);
        self.hi <= other.lo
    }

    /// Every point of `self` is `>` every point of `other`.
    pub fn certainly_gt(&self, other: &Interval) -> bool {
        self.aligned(other);
        self.lo > other.hi
    }

    fn aligned(&self, other: &Interval) {
        assert_eq!(self.prec, other.prec, "interval precision mismatch");
    }

    pub fn mid_f64(&self) -> f64 {
        let mid = (&self.lo + &self.hi).to_f64().unwrap_or(f64::NAN);
        mid * 2f64.powi(-(self.prec as i32) - 1)
    }

    /// Midpoint rounded to `digits` places after the decimal point.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let num: BigInt = (&self.lo + &self.hi) * &scale;
        let den = pow2(self.prec + 1);
        let twice: BigInt = &den * 2;
        let q: BigInt = (num * BigInt::from(2) + &den).div_floor(&twice);
        let neg = q.is_negative();
        let digits_str = q.abs().to_string();
        let padded = if digits_str.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - digits_str.len()), digits_str)
        } else {
            digits_str
        };
        let (int_part, frac_part) = padded.split_at(padded.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval::raw(a, b, self.prec)
        } else {
            Interval::raw(b, a, self.prec)
        }
    }

    pub fn mul_i64(&self, k: i64) -> Interval {
        self.mul_int(&BigInt::from(k))
    }

    pub fn mul_rational(&self, q: &BigRational) -> Interval {
        let a = &self.lo * q.numer();
        let b = &self.hi * q.numer();
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        Interval::raw(a.div_floor(q.denom()), ceil_div(&b, q.denom()), self.prec)
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        self.aligned(other);
        if !(other.lo.is_positive() || other.hi.is_negative()) {
            return domain("interval division by an interval containing zero");
        }
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&other.lo, &other.hi] {
                let n = a << self.prec;
                let f = n.div_floor(b);
                let c = ceil_div(&n, b);
                if lo.as_ref().is_none_or(|l| &f < l) {
                    lo = Some(f);
                }
                if hi.as_ref().is_none_or(|h| &c > h) {
                    hi = Some(c);
                }
            }
        }
        Ok(Interval::raw(lo.unwrap(), hi.unwrap(), self.prec))
    }

    /// Square root of a non-negative interval.
    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo.is_negative() {
            return domain("square root of an interval with negative part");
        }
        let lo = (&self.lo << self.prec).sqrt();
        let hv = &self.hi << self.prec;
        let mut hi = hv.sqrt();
        if &hi * &hi < hv {
            hi += 1;
        }
        Ok(Interval::raw(lo, hi, self.prec))
    }

    /// Real cube root of a non-negative integer.
    pub fn cbrt_int(v: &BigInt, prec: u32) -> Result<Interval> {
        if v.is_negative() {
            return domain("cube root of a negative integer");
        }
        let scaled: BigInt = v << (3 * prec);
        let lo = num_integer::Roots::cbrt(&scaled);
        let hi = if &lo * &lo * &lo == scaled { lo.clone() } else { &lo + 1 };
        Ok(Interval::raw(lo, hi, prec))
    }

    /// Natural logarithm of a positive interval.
    pub fn ln(&self) -> Result<Interval> {
        if !self.lo.is_positive() {
            return domain("logarithm of an interval that is not positive");
        }
        let shift = BigRational::from_integer(pow2(self.prec));
        let lo = ln_rational(&BigRational::new(self.lo.clone(), BigInt::one()), self.prec)?
            - ln_rational(&shift, self.prec)?;
        let hi = ln_rational(&BigRational::new(self.hi.clone(), BigInt::one()), self.prec)?
            - ln_rational(&shift, self.prec)?;
        Ok(Interval::raw(lo.lo, hi.hi, self.prec))
    }

    /// Smallest interval containing both operands.
    pub fn hull(&self, other: &Interval) -> Interval {
        self.aligned(other);
        Interval::raw(
            (&self.lo).min(&other.lo).clone(),
            (&self.hi).max(&other.hi).clone(),
            self.prec,
        )
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            let m = (-&self.lo).max(self.hi.clone());
            Interval::raw(BigInt::zero(), m, self.prec)
        }
    }
}

/// `ln n` for a positive integer.
pub fn ln_int(n: &BigInt, prec: u32) -> Result<Interval> {
    if !n.is_positive() {
        return domain(format!("logarithm of non-positive integer {n}"));
    }
    if n.is_one() {
        return Ok(Interval::zero(prec));
    }
    let e = n.bits();
    let w = prec + GUARD + bit_length(e) + 8;
    Ok(Interval::from_approx(ln_int_fixed(n, w), w, prec))
}

pub fn ln_u64(n: u64, prec: u32) -> Result<Interval> {
    ln_int(&BigInt::from(n), prec)
}

/// `ln q` for a positive rational.
pub fn ln_rational(q: &BigRational, prec: u32) -> Result<Interval> {
    if !q.is_positive() {
        return domain(format!("logarithm of non-positive rational {q}"));
    }
    if q.denom().is_one() {
        return ln_int(q.numer(), prec);
    }
    Ok(ln_int(q.numer(), prec)? - ln_int(q.denom(), prec)?)
}

pub fn ln2(prec: u32) -> Interval {
    let w = prec + GUARD;
    Interval::from_approx(ln2_fixed(w), w, prec)
}

pub fn pi(prec: u32) -> Interval {
    let w = prec + GUARD;
    let a = atan_inv_fixed(5, w);
    let b = atan_inv_fixed(239, w);
    Interval::from_approx(
        Approx {
            v: a.v * 16 - b.v * 4,
            err: 16 * a.err + 4 * b.err,
        },
        w,
        prec,
    )
}

/// Parses a finite decimal literal into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let valid = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !valid(int_part) || !valid(frac_part) {
        return Err(Error::Parse(format!("not a decimal literal: `{s}`")));
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("not a decimal literal: `{s}`")))?;
    if neg {
        num = -num;
    }
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(num, den))
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        self.aligned(rhs);
        Interval::raw(&self.lo + &rhs.lo, &self.hi + &rhs.hi, self.prec)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        self.aligned(rhs);
        Interval::raw(&self.lo - &rhs.hi, &self.hi - &rhs.lo, self.prec)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        self.aligned(rhs);
        let cands = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let min = cands.iter().min().unwrap();
        let max = cands.iter().max().unwrap();
        Interval::raw(floor_shr(min, self.prec), ceil_shr(max, self.prec), self.prec)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::raw(-&self.hi, -&self.lo, self.prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: &Interval) -> Interval {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = Interval::raw(self.lo.clone(), self.lo.clone(), self.prec);
        let hi = Interval::raw(self.hi.clone(), self.hi.clone(), self.prec);
        write!(f, "[{}, {}]", lo.to_decimal(20), hi.to_decimal(20))
    }
}
