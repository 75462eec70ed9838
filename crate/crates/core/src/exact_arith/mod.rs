//! Exact integers, rationals, factored integers, the ring Z[√−c] and the
//! certified comparator used for bound verdicts.

mod basis;
mod compare;
mod interval;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use basis::CoprimeBasis;
pub use compare::{
    certify_le, log_compare, BoundVerdict, LogExpr, Verdict, DEFAULT_PRECISION, MAX_PRECISION,
};
pub use interval::{ln2, ln_int, ln_rational, ln_u64, parse_decimal, pi, Interval};

use crate::error::{domain, Result};

pub type ExactRational = num_rational::BigRational;

/// A positive integer stored as its prime factorization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactoredInteger {
    factors: BTreeMap<u64, u32>,
}

impl FactoredInteger {
    pub fn one() -> FactoredInteger {
        FactoredInteger::default()
    }

    pub fn prime_power(p: u64, e: u32) -> FactoredInteger {
        let mut f = FactoredInteger::one();
        if e > 0 {
            f.factors.insert(p, e);
        }
        f
    }

    /// Builds from `(prime, exponent)` pairs, merging repeated primes and
    /// dropping zero exponents. Primality of the keys is the caller's contract.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u32)>>(pairs: I) -> FactoredInteger {
        let mut f = FactoredInteger::one();
        for (p, e) in pairs {
            if e > 0 {
                *f.factors.entry(p).or_insert(0) += e;
            }
        }
        f
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The p-adic valuation.
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().map(|(&p, &e)| (p, e))
    }

    pub fn num_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn to_bigint(&self) -> BigInt {
        product_tree(
            &self
                .factors
                .iter()
                .map(|(&p, &e)| BigInt::from(p).pow(e))
                .collect::<Vec<_>>(),
        )
    }

    pub fn mul(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut out = self.clone();
        for (p, e) in other.iter() {
            *out.factors.entry(p).or_insert(0) += e;
        }
        out
    }

    pub fn lcm(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut out = self.clone();
        for (p, e) in other.iter() {
            let slot = out.factors.entry(p).or_insert(0);
            *slot = (*slot).max(e);
        }
        out
    }

    pub fn gcd(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut out = FactoredInteger::one();
        for (p, e) in self.iter() {
            let m = e.min(other.exponent(p));
            if m > 0 {
                out.factors.insert(p, m);
            }
        }
        out
    }

    pub fn divides(&self, other: &FactoredInteger) -> bool {
        self.iter().all(|(p, e)| other.exponent(p) >= e)
    }

    /// `self / other` when the quotient is an integer.
    pub fn checked_div(&self, other: &FactoredInteger) -> Option<FactoredInteger> {
        if !other.divides(self) {
            return None;
        }
        let mut out = self.clone();
        for (p, e) in other.iter() {
            let slot = out.factors.get_mut(&p).expect("divisibility checked");
            *slot -= e;
            if *slot == 0 {
                out.factors.remove(&p);
            }
        }
        Some(out)
    }

    /// `log` of the value, summed from certified prime logarithms.
    pub fn ln(&self, prec: u32) -> Interval {
        let mut acc = Interval::zero(prec);
        for (p, e) in self.iter() {
            acc = acc + ln_u64(p, prec).expect("primes are positive").mul_i64(e as i64);
        }
        acc
    }
}

impl std::fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

pub fn lcm_factored(xs: &[FactoredInteger]) -> Result<FactoredInteger> {
    let (first, rest) = match xs.split_first() {
        Some(s) => s,
        None => return domain("lcm of an empty list"),
    };
    Ok(rest.iter().fold(first.clone(), |acc, x| acc.lcm(x)))
}

pub fn gcd_factored(xs: &[FactoredInteger]) -> Result<FactoredInteger> {
    let (first, rest) = match xs.split_first() {
        Some(s) => s,
        None => return domain("gcd of an empty list"),
    };
    Ok(rest.iter().fold(first.clone(), |acc, x| acc.gcd(x)))
}

/// True iff `n / q` is an integer.
pub fn is_multiple_of_rational(n: &BigInt, q: &ExactRational) -> Result<bool> {
    if q.is_zero() {
        return domain("multiple of zero");
    }
    Ok((n * q.denom()).is_multiple_of(q.numer()))
}

/// Balanced product of a list of integers; `1` for the empty list.
pub fn product_tree(xs: &[BigInt]) -> BigInt {
    match xs.len() {
        0 => BigInt::one(),
        1 => xs[0].clone(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            product_tree(a) * product_tree(b)
        }
    }
}

/// `lcm(acc, a)` for non-negative `acc` and non-zero `a`, reducing the large
/// operand modulo the small one before the gcd.
pub fn lcm_step(acc: &BigInt, a: &BigInt) -> BigInt {
    let a = a.abs();
    let g = (acc % &a).gcd(&a);
    acc * (a / g)
}

pub fn lcm_bigints(xs: &[BigInt]) -> Result<BigInt> {
    if xs.is_empty() {
        return domain("lcm of an empty list");
    }
    let mut acc = BigInt::one();
    for x in xs {
        if x.is_zero() {
            return domain("lcm with a zero term");
        }
        acc = lcm_step(&acc, x);
    }
    Ok(acc)
}

/// The p-adic valuation of a non-zero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero() && p >= 2);
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

/// An element `re + im·√−c` of Z[√−c].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticInteger {
    pub c: u64,
    pub re: BigInt,
    pub im: BigInt,
}

impl QuadraticInteger {
    pub fn new(c: u64, re: impl Into<BigInt>, im: impl Into<BigInt>) -> QuadraticInteger {
        assert!(c >= 1, "ring parameter must be positive");
        QuadraticInteger {
            c,
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn one(c: u64) -> QuadraticInteger {
        QuadraticInteger::new(c, 1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + BigInt::from(self.c) * &self.im * &self.im
    }

    pub fn conj(&self) -> QuadraticInteger {
        QuadraticInteger::new(self.c, self.re.clone(), -&self.im)
    }

    pub fn mul(&self, o: &QuadraticInteger) -> Result<QuadraticInteger> {
        if self.c != o.c {
            return domain(format!("mixed ring parameters {} and {}", self.c, o.c));
        }
        let c = BigInt::from(self.c);
        Ok(QuadraticInteger::new(
            self.c,
            &self.re * &o.re - c * &self.im * &o.im,
            &self.re * &o.im + &o.re * &self.im,
        ))
    }
}

pub fn quad_product(c: u64, zs: &[QuadraticInteger]) -> Result<QuadraticInteger> {
    if c == 0 {
        return domain("ring parameter must be positive");
    }
    let mut acc = QuadraticInteger::one(c);
    for z in zs {
        if z.c != c {
            return domain(format!("element over √−{} in a product over √−{c}", z.c));
        }
        acc = acc.mul(z)?;
    }
    Ok(acc)
}
