use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exact_arith::{BoundVerdict, Interval, Verdict};

/// Digits after the decimal point in rendered log values.
pub const LOG_DIGITS: usize = 20;

/// Integers with more digits than this are summarized in `detail`.
const DETAIL_DIGITS: usize = 60;

/// Outcome of a single check at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub check_id: String,
    pub params: BTreeMap<String, String>,
    pub lhs_log: Option<String>,
    pub rhs_log: Option<String>,
    pub verdict: Verdict,
    pub precision_bits: u32,
    pub margin: Option<String>,
    pub detail: Option<String>,
    pub elapsed_ms: Option<u64>,
}

/// Builds a parameter record from `(name, value)` pairs.
pub fn params<K: ToString, V: ToString>(pairs: &[(K, V)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Renders an integer in full, or as a digit count when it is long.
pub fn short_int(v: &impl fmt::Display) -> String {
    let s = v.to_string();
    let digits = s.trim_start_matches('-').len();
    if digits <= DETAIL_DIGITS {
        s
    } else {
        format!("<{digits} digits>")
    }
}

impl BoundReport {
    fn base(check_id: &str, params: BTreeMap<String, String>, verdict: Verdict) -> BoundReport {
        BoundReport {
            check_id: check_id.to_string(),
            params,
            lhs_log: None,
            rhs_log: None,
            verdict,
            precision_bits: 0,
            margin: None,
            detail: None,
            elapsed_ms: None,
        }
    }

    /// Result of an exact integer or divisibility test.
    pub fn exact(
        check_id: &str,
        params: BTreeMap<String, String>,
        holds: bool,
        detail: impl Into<String>,
    ) -> BoundReport {
        let verdict = if holds { Verdict::Holds } else { Verdict::Fails };
        BoundReport {
            detail: Some(detail.into()),
            ..BoundReport::base(check_id, params, verdict)
        }
    }

    /// Result of a certified log-domain comparison `lhs <= rhs`.
    pub fn logged(
        check_id: &str,
        params: BTreeMap<String, String>,
        lhs: &Interval,
        rhs: &Interval,
        v: &BoundVerdict,
    ) -> BoundReport {
        BoundReport {
            lhs_log: Some(lhs.to_decimal(LOG_DIGITS)),
            rhs_log: Some(rhs.to_decimal(LOG_DIGITS)),
            precision_bits: v.precision_bits,
            margin: v.margin.as_ref().map(|m| m.to_decimal(LOG_DIGITS)),
            ..BoundReport::base(check_id, params, v.verdict)
        }
    }

    pub fn skipped(
        check_id: &str,
        params: BTreeMap<String, String>,
        reason: impl Into<String>,
    ) -> BoundReport {
        BoundReport {
            detail: Some(reason.into()),
            ..BoundReport::base(check_id, params, Verdict::Skipped)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> BoundReport {
        self.detail = Some(detail.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    /// `name=value` pairs joined by `;`.
    pub fn params_text(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.check_id, self.params_text(), self.verdict)?;
        if let (Some(l), Some(r)) = (&self.lhs_log, &self.rhs_log) {
            write!(f, " log lhs={l} log rhs={r}")?;
        }
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{log_compare, LogExpr};
    use num_bigint::BigInt;

    #[test]
    fn json_round_trip() {
        let lhs = LogExpr::log(BigInt::from(2520));
        let rhs = LogExpr::new().plus(BigInt::from(10), BigInt::from(3));
        let v = log_compare(&lhs, &rhs, 64).unwrap();
        let r = BoundReport::logged(
            "demo",
            params(&[("n", 10)]),
            &lhs.eval(64).unwrap(),
            &rhs.eval(64).unwrap(),
            &v,
        );
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"verdict\":\"HOLDS\""));
        let back: BoundReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.lhs_log.as_deref(), Some("7.83201418050546899075"));
    }

    #[test]
    fn rendering() {
        let r = BoundReport::exact("demo", params(&[("b", "2"), ("a", "1")]), true, "12 <= 81");
        assert_eq!(r.params_text(), "a=1;b=2");
        assert_eq!(r.to_string(), "demo [a=1;b=2] HOLDS (12 <= 81)");
        assert_eq!(short_int(&BigInt::from(10).pow(70)), "<71 digits>");
        assert_eq!(short_int(&-42), "-42");
    }
}
