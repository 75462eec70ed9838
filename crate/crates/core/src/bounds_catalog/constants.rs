//! Named numeric constants of the catalog.
//!
//! Two families reuse the short names `c1, c2, …` with different values, so
//! names are namespaced: `ap.*` for progression bounds, `n2plus1.*` for the
//! `k² + 1` bounds.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact_arith::{ln_rational, ln_u64, parse_decimal, Interval, LogExpr};
use crate::prime_toolkit::PrimeTable;

/// Decimal constants as stated.
pub const NAMED: &[(&str, &str)] = &[
    ("hanson.pi", "1.25506"),
    ("farhi.n2plus1.k", "0.32"),
    ("farhi.n2plus1.base", "1.442"),
    ("ap.c1", "41.30142"),
    ("ap.c2", "12.30641"),
    ("ap.c3", "1.25507"),
    ("ap.c4", "3.35609"),
    ("ap.c5", "1.38402"),
    ("ap.c6", "1.57681"),
    ("ap.c7", "2.1284"),
    ("n2plus1.alpha1", "0.7993"),
    ("n2plus1.alpha2", "10.3624"),
    ("n2plus1.alpha3", "3.9497"),
    ("n2plus1.beta1", "0.6722"),
    ("n2plus1.beta2", "0.5981"),
    ("n2plus1.beta3", "0.281"),
    ("n2plus1.c1.printed", "0.1608548666"),
    ("n2plus1.c3", "2.1284"),
    ("bennett.theta", "0.4"),
];

pub fn value(name: &str) -> Result<BigRational> {
    let (_, v) = NAMED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Unknown {
            name: name.to_string(),
            valid: NAMED.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", "),
        })?;
    parse_decimal(v)
}

pub fn interval(name: &str, prec: u32) -> Result<Interval> {
    Ok(Interval::from_rational(&value(name)?, prec))
}

/// `log` of a named constant.
pub fn ln(name: &str, prec: u32) -> Result<Interval> {
    ln_rational(&value(name)?, prec)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `A = log(2^{1/2} 3^{1/3} 5^{1/5} / 30^{1/30})`.
pub fn chebyshev_a(prec: u32) -> Interval {
    LogExpr::new()
        .plus(q(1, 2), q(2, 1))
        .plus(q(1, 3), q(3, 1))
        .plus(q(1, 5), q(5, 1))
        .plus(q(-1, 30), q(30, 1))
        .eval(prec)
        .expect("positive arguments")
}

/// `∫_1^X θ(t; 4, 3)/t² dt = Σ_{p ≡ 3 (4), p ≤ X} log p · (1/p − 1/X)`.
pub fn theta_43_integral(table: &PrimeTable, x: u64, prec: u32) -> Result<Interval> {
    let mut acc = Interval::zero(prec);
    for &p in table.primes_up_to(x).iter().filter(|&&p| p % 4 == 3) {
        let w = BigRational::new(BigInt::from(x - p), BigInt::from(p * x));
        acc = acc + ln_u64(p, prec)?.mul_rational(&w);
    }
    Ok(acc)
}

/// `1/2 − 0.4/(3 log 10) + ∫_1^{1000} θ(t;4,3)/t² dt − (3/2) log 10 + 0.4 log log 1000`.
pub fn n2plus1_c1(table: &PrimeTable, prec: u32) -> Result<Interval> {
    let ln10 = ln_u64(10, prec)?;
    let ln1000 = ln10.mul_i64(3);
    let half = Interval::from_rational(&q(1, 2), prec);
    let a = interval("bennett.theta", prec)?;
    let lead = &half - &a.div(&ln10.mul_i64(3))?;
    let tail = &ln1000.ln()?.mul_rational(&q(2, 5)) - &ln10.mul_rational(&q(3, 2));
    Ok(&(&lead + &theta_43_integral(table, 1000, prec)?) + &tail)
}

/// `1/2 + 0.4/(3 log 10)`.
pub fn n2plus1_c2(prec: u32) -> Result<Interval> {
    let ln10 = ln_u64(10, prec)?;
    let a = interval("bennett.theta", prec)?;
    Ok(&Interval::from_rational(&q(1, 2), prec) + &a.div(&ln10.mul_i64(3))?)
}

/// `1 + 5/(6 log 10)`.
pub fn n2plus1_c4(prec: u32) -> Result<Interval> {
    let ln10 = ln_u64(10, prec)?;
    let five = Interval::from_i64(5, prec);
    Ok(&Interval::from_i64(1, prec) + &five.div(&ln10.mul_i64(6))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: &Interval, v: f64, tol: f64) -> bool {
        (x.mid_f64() - v).abs() <= tol
    }

    #[test]
    fn chebyshev_constant() {
        let a = chebyshev_a(128);
        assert!(close(&a, 0.92129202, 1e-8), "{}", a.to_decimal(12));
        // c1 = e^A ≈ 2.51 and c2 = e^{6A/5} ≈ 3.02
        assert!((a.mid_f64().exp() - 2.51).abs() < 0.005);
        assert!(((1.2 * a.mid_f64()).exp() - 3.02).abs() < 0.005);
    }

    #[test]
    fn n2plus1_constants() {
        let t = PrimeTable::new(2000);
        let c1 = n2plus1_c1(&t, 128).unwrap();
        let printed = interval("n2plus1.c1.printed", 128).unwrap();
        assert!(close(&c1, printed.mid_f64(), 1e-8), "{}", c1.to_decimal(12));
        assert!(close(&n2plus1_c2(128).unwrap(), 0.5579, 1e-4));
        assert!(close(&n2plus1_c4(128).unwrap(), 1.3619, 1e-4));
    }

    #[test]
    fn integral_is_a_step_sum() {
        // θ(t;4,3) is 0 on [1,3), log 3 on [3,7), log 21 on [7,10]
        let t = PrimeTable::new(100);
        let got = theta_43_integral(&t, 10, 128).unwrap().mid_f64();
        let l3 = 3f64.ln();
        let l21 = 21f64.ln();
        let want = l3 * (1.0 / 3.0 - 1.0 / 7.0) + l21 * (1.0 / 7.0 - 1.0 / 10.0);
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn lookup() {
        assert_eq!(value("ap.c1").unwrap(), q(4130142, 100000));
        assert!(matches!(value("c1"), Err(Error::Unknown { .. })));
    }
}
