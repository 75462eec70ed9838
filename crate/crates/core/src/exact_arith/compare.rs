use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::interval::{ln_rational, Interval};
use crate::error::{domain, Result};

pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
    Skipped,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::Skipped => "SKIPPED",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of checking `lhs <= rhs`.
///
/// `margin` encloses `rhs - lhs` for log-domain comparisons; exact
/// comparisons carry no margin and report `precision_bits == 0`.
#[derive(Clone, Debug)]
pub struct BoundVerdict {
    pub verdict: Verdict,
    pub margin: Option<Interval>,
    pub precision_bits: u32,
}

impl BoundVerdict {
    pub fn exact(holds: bool) -> BoundVerdict {
        BoundVerdict {
            verdict: if holds { Verdict::Holds } else { Verdict::Fails },
            margin: None,
            precision_bits: 0,
        }
    }

    pub fn skipped() -> BoundVerdict {
        BoundVerdict {
            verdict: Verdict::Skipped,
            margin: None,
            precision_bits: 0,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// A finite sum `Σ kᵢ·log vᵢ` with exact rational `kᵢ` and positive rational `vᵢ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogExpr {
    terms: Vec<(BigRational, BigRational)>,
}

impl LogExpr {
    pub fn new() -> LogExpr {
        LogExpr::default()
    }

    /// `log v`.
    pub fn log(v: impl Into<BigRational>) -> LogExpr {
        LogExpr::new().plus(BigRational::from_integer(1.into()), v)
    }

    /// Appends `k·log v`.
    pub fn plus(mut self, k: impl Into<BigRational>, v: impl Into<BigRational>) -> LogExpr {
        self.terms.push((k.into(), v.into()));
        self
    }

    pub fn terms(&self) -> &[(BigRational, BigRational)] {
        &self.terms
    }

    pub fn validate(&self) -> Result<()> {
        for (_, v) in &self.terms {
            if !v.is_positive() {
                return domain(format!("log argument {v} is not positive"));
            }
        }
        Ok(())
    }

    pub fn eval(&self, prec: u32) -> Result<Interval> {
        let mut acc = Interval::zero(prec);
        for (k, v) in &self.terms {
            acc = acc + ln_rational(v, prec)?.mul_rational(k);
        }
        Ok(acc)
    }
}

fn decide(lhs: &Interval, rhs: &Interval) -> Verdict {
    if lhs.certainly_le(rhs) {
        Verdict::Holds
    } else if lhs.certainly_gt(rhs) {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    }
}

/// Certifies `lhs <= rhs` where both sides are produced by `sides(prec)`.
///
/// Starts at `start_bits` and doubles the precision up to [`MAX_PRECISION`]
/// while the enclosures overlap.
pub fn certify_le<F>(start_bits: u32, sides: F) -> Result<BoundVerdict>
where
    F: Fn(u32) -> Result<(Interval, Interval)>,
{
    let mut prec = start_bits.max(16);
    loop {
        let (lhs, rhs) = sides(prec)?;
        let verdict = decide(&lhs, &rhs);
        if verdict != Verdict::Inconclusive || prec >= MAX_PRECISION {
            return Ok(BoundVerdict {
                verdict,
                margin: Some(&rhs - &lhs),
                precision_bits: prec,
            });
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

/// Certifies `lhs <= rhs` for two log-domain sums.
pub fn log_compare(lhs: &LogExpr, rhs: &LogExpr, precision_bits: u32) -> Result<BoundVerdict> {
    if precision_bits == 0 {
        return domain("precision must be positive");
    }
    lhs.validate()?;
    rhs.validate()?;
    certify_le(precision_bits, |p| Ok((lhs.eval(p)?, rhs.eval(p)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn integer_logs() {
        let v = log_compare(&LogExpr::log(r(2520)), &LogExpr::new().plus(r(10), r(3)), 64).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert_eq!(v.precision_bits, 64);
        let v = log_compare(&LogExpr::new().plus(r(8), r(2)), &LogExpr::log(r(840)), 64).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        let v = log_compare(&LogExpr::log(r(840)), &LogExpr::new().plus(r(8), r(2)), 64).unwrap();
        assert_eq!(v.verdict, Verdict::Fails);
    }

    #[test]
    fn exact_tie_is_inconclusive_at_every_precision() {
        for bits in [32, 128, 1024] {
            let v = log_compare(&LogExpr::log(r(8)), &LogExpr::new().plus(r(3), r(2)), bits).unwrap();
            assert_eq!(v.verdict, Verdict::Inconclusive);
            assert_eq!(v.precision_bits, MAX_PRECISION);
            assert!(v.margin.unwrap().contains(&r(0)));
        }
    }

    #[test]
    fn rejects_non_positive_arguments() {
        assert!(log_compare(&LogExpr::log(r(0)), &LogExpr::log(r(2)), 64).is_err());
        assert!(log_compare(&LogExpr::log(r(2)), &LogExpr::log(r(-3)), 64).is_err());
    }

    #[test]
    fn escalation_resolves_close_comparisons() {
        // 2^64 + 1 against 2^64: separated only beyond 64 bits
        let big = BigInt::from(1u128 << 64) + 1;
        let lhs = LogExpr::new().plus(r(64), r(2));
        let rhs = LogExpr::log(BigRational::from_integer(big));
        let v = log_compare(&lhs, &rhs, 32).unwrap();
        assert_eq!(v.verdict, Verdict::Holds);
        assert!(v.precision_bits > 64);
    }
}
