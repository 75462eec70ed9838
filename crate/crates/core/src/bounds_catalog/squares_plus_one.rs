//! Bounds and divisibility lemmas for `L_n = lcm(1²+1, 2²+1, …, n²+1)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{certified, constants, int, ln_small, Catalog, CheckInfo, Entry, Group, LogLcm, Sides};
use crate::error::{Error, Result};
use crate::exact_arith::{ln_u64, Interval};
use crate::prime_toolkit::{factorial_valuation, PrimeLogs, PrimeTable};
use crate::report::BoundReport;

pub(super) const ENTRIES: &[Entry] = &[
    Entry {
        info: CheckInfo {
            id: "n2plus1_sandwich",
            params: &[int("n")],
            sweep: "n",
            exact: false,
            summary: "(0.7993 sqrt n (log n)^-0.4)^n <= L_n <= 10.3624 (3.9497 n (log n)^0.8)^n, n >= 2",
        },
        run: n2plus1_sandwich,
    },
    Entry {
        info: CheckInfo {
            id: "n2plus1_square_divisor",
            params: &[int("n")],
            sweep: "n",
            exact: true,
            summary: "L_n^2 is a multiple of 2^(floor(n/2)+1) Q_n / n!^2 prod_{p = 3 mod 4, p <= n} p^(2 v_p(n!)), Q_n = prod (k^2+1)",
        },
        run: square_divisor,
    },
    Entry {
        info: CheckInfo {
            id: "n2plus1_large_primes",
            params: &[int("n")],
            sweep: "n",
            exact: true,
            summary: "prod_{p > n} p^v_p(L_n) divides 2^(2 v_2(n!) - floor((n-1)/2) - 1) Q_n / n!^2 prod_{p = 3 mod 4, p <= n} p^(2 v_p(n!)), n >= 2",
        },
        run: large_primes,
    },
    Entry {
        info: CheckInfo {
            id: "factorial_3mod4",
            params: &[int("n")],
            sweep: "n",
            exact: false,
            summary: "(0.6722 sqrt n (log n)^-0.4)^n <= prod_{p = 3 mod 4, p <= n} p^v_p(n!) <= (0.5981 sqrt n (log n)^0.4)^n, n >= 1000",
        },
        run: factorial_3mod4,
    },
    Entry {
        info: CheckInfo {
            id: "bennett_check",
            params: &[int("x")],
            sweep: "x",
            exact: false,
            summary: "|theta(x;4,3) - x/2| <= 0.4 x/log x and pi(x;4,1) <= x/(2 log x) (1 + 5/(2 log x)), x >= 1000",
        },
        run: bennett_check,
    },
];

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Valuations of `Q_n = ∏ (k²+1)` and of `L_n` along ascending `n`.
struct SquaresPlusOne<'a> {
    table: &'a PrimeTable,
    next: u64,
    q: HashMap<u64, i64>,
    l: HashMap<u64, i64>,
}

impl<'a> SquaresPlusOne<'a> {
    fn new(table: &'a PrimeTable) -> SquaresPlusOne<'a> {
        SquaresPlusOne {
            table,
            next: 1,
            q: HashMap::new(),
            l: HashMap::new(),
        }
    }

    fn upto(&mut self, n: u64) -> Result<()> {
        while self.next <= n {
            let k = self.next;
            let t = k
                .checked_mul(k)
                .and_then(|v| v.checked_add(1))
                .ok_or_else(|| Error::Range("k^2 + 1 overflows".into()))?;
            for (p, e) in self.table.factor(t)?.iter() {
                *self.q.entry(p).or_insert(0) += i64::from(e);
                let cur = self.l.entry(p).or_insert(0);
                *cur = (*cur).max(i64::from(e));
            }
            self.next += 1;
        }
        Ok(())
    }

    fn q(&self, p: u64) -> i64 {
        self.q.get(&p).copied().unwrap_or(0)
    }

    fn l(&self, p: u64) -> i64 {
        self.l.get(&p).copied().unwrap_or(0)
    }

    /// Primes up to `n` and every prime dividing `Q_n`, ascending.
    fn support(&self, n: u64) -> Vec<u64> {
        let mut ps: Vec<u64> = self.table.primes_up_to(n).to_vec();
        ps.extend(self.q.keys().copied().filter(|&p| p > n));
        ps.sort_unstable();
        ps
    }
}

/// Exact report from per-prime slacks; holds iff every slack is non-negative.
fn slack_report(g: &Group, n: u64, slacks: impl Iterator<Item = Result<(u64, i64)>>) -> Result<BoundReport> {
    let mut worst: Option<(i64, u64)> = None;
    for s in slacks {
        let (p, v) = s?;
        if worst.is_none_or(|(w, q)| (v, p) < (w, q)) {
            worst = Some((v, p));
        }
    }
    Ok(match worst {
        Some((v, p)) => g.exact(n, v >= 0, format!("least slack {v} at p = {p}")),
        None => g.exact(n, true, "no prime involved"),
    })
}

fn square_divisor(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let mut s = SquaresPlusOne::new(cat.table());
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        s.upto(n)?;
        if n == 0 {
            out.push(g.skipped(n, "needs n >= 1"));
            continue;
        }
        let ps = s.support(n);
        let slacks = ps.iter().map(|&p| {
            let fv = factorial_valuation(p, n)? as i64;
            let d = match p {
                2 => (n / 2) as i64 + 1 + s.q(2) - 2 * fv,
                _ if p % 4 == 3 && p <= n => s.q(p),
                _ => s.q(p) - 2 * fv,
            };
            Ok((p, 2 * s.l(p) - d))
        });
        out.push(slack_report(g, n, slacks)?);
    }
    Ok(out)
}

fn large_primes(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let mut s = SquaresPlusOne::new(cat.table());
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        s.upto(n)?;
        if n < 2 {
            out.push(g.skipped(n, "needs n >= 2"));
            continue;
        }
        let ps = s.support(n);
        let slacks = ps.iter().map(|&p| {
            let fv = factorial_valuation(p, n)? as i64;
            let m = match p {
                2 => 2 * fv - ((n - 1) / 2) as i64 - 1 + s.q(2) - 2 * fv,
                _ if p % 4 == 3 && p <= n => s.q(p),
                _ => s.q(p) - 2 * fv,
            };
            let gv = if p > n { s.l(p) } else { 0 };
            Ok((p, m - gv))
        });
        out.push(slack_report(g, n, slacks)?);
    }
    Ok(out)
}

/// `log n` and `log log n`.
fn logs_of(n: u64, prec: u32) -> Result<(Interval, Interval)> {
    let lnn = ln_u64(n, prec)?;
    let lln = lnn.ln()?;
    Ok((lnn, lln))
}

fn sandwich_bounds(n: u64, prec: u32) -> Result<(Interval, Interval)> {
    let (lnn, lln) = logs_of(n, prec)?;
    let half = lnn.mul_rational(&rat(1, 2));
    let lower = &(&constants::ln("n2plus1.alpha1", prec)? + &half) - &lln.mul_rational(&rat(2, 5));
    let upper_base = &(&constants::ln("n2plus1.alpha3", prec)? + &lnn) + &lln.mul_rational(&rat(4, 5));
    let nn = BigInt::from(n);
    Ok((
        lower.mul_int(&nn),
        &constants::ln("n2plus1.alpha2", prec)? + &upper_base.mul_int(&nn),
    ))
}

fn log_l_scratch(table: &PrimeTable, n: u64, prec: u32) -> Result<Interval> {
    let mut logs = PrimeLogs::new(prec);
    let mut l = LogLcm::new(prec);
    for k in 1..=n {
        l.absorb(&table.factor(k * k + 1)?, &mut logs);
    }
    Ok(l.log().clone())
}

fn n2plus1_sandwich(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let table = cat.table();
    let prec = cat.prec();
    let mut logs = PrimeLogs::new(prec);
    let mut l = LogLcm::new(prec);
    let mut k = 0;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        while k < n {
            k += 1;
            let t = k
                .checked_mul(k)
                .and_then(|v| v.checked_add(1))
                .ok_or_else(|| Error::Range("k^2 + 1 overflows".into()))?;
            l.absorb(&table.factor(t)?, &mut logs);
        }
        if n < 2 {
            out.push(g.skipped(n, "needs n >= 2"));
            continue;
        }
        let (lo, hi) = sandwich_bounds(n, prec)?;
        let sides = Sides::sandwich(lo, l.log().clone(), hi);
        out.push(certified(g.id(), g.at(n), prec, sides, |p| {
            let (lo, hi) = sandwich_bounds(n, p)?;
            Ok(Sides::sandwich(lo, log_l_scratch(table, n, p)?, hi))
        })?);
    }
    Ok(out)
}

fn factorial_3mod4_sides(table: &PrimeTable, logs: &mut PrimeLogs, n: u64) -> Result<Sides> {
    let prec = logs.prec();
    let mut value = Interval::zero(prec);
    for &p in table.primes_up_to(n).iter().filter(|&&p| p % 4 == 3) {
        value = &value + &logs.get(p).mul_i64(factorial_valuation(p, n)? as i64);
    }
    let (lnn, lln) = logs_of(n, prec)?;
    let half = lnn.mul_rational(&rat(1, 2));
    let tilt = lln.mul_rational(&rat(2, 5));
    let nn = BigInt::from(n);
    let lower = (&(&constants::ln("n2plus1.beta1", prec)? + &half) - &tilt).mul_int(&nn);
    let upper = (&(&constants::ln("n2plus1.beta2", prec)? + &half) + &tilt).mul_int(&nn);
    Ok(Sides::sandwich(lower, value, upper))
}

fn factorial_3mod4(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let table = cat.table();
    let mut logs = PrimeLogs::new(cat.prec());
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        if n < 1000 {
            out.push(g.skipped(n, "needs n >= 1000"));
            continue;
        }
        if n > table.limit() {
            return Err(Error::Range(format!("{n} exceeds the sieve limit {}", table.limit())));
        }
        let sides = factorial_3mod4_sides(table, &mut logs, n)?;
        out.push(certified(g.id(), g.at(n), cat.prec(), sides, |p| {
            factorial_3mod4_sides(table, &mut PrimeLogs::new(p), n)
        })?);
    }
    Ok(out)
}

fn bennett_sides(
    table: &PrimeTable,
    logs: &mut PrimeLogs,
    x: u64,
    theta: Interval,
    count: u64,
) -> Result<Sides> {
    let prec = logs.prec();
    let lnx = ln_small(table, logs, x)?;
    let inv = Interval::from_i64(1, prec).div(&lnx)?;
    let xq = BigRational::from_integer(BigInt::from(x));
    let half_x = Interval::from_rational(&(&xq * rat(1, 2)), prec);
    let err = inv.mul_rational(&(constants::value("bennett.theta")? * &xq));
    let pi_bound = &inv.mul_rational(&(&xq * rat(1, 2))) + &(&inv * &inv).mul_rational(&(&xq * rat(5, 4)));
    let dev = &theta - &half_x;
    let detail = format!(
        "theta(x;4,3) = {}, pi(x;4,1) = {count}",
        theta.to_decimal(crate::report::LOG_DIGITS)
    );
    Ok(Sides {
        shown: (dev.abs(), err.clone()),
        claims: vec![
            (dev.clone(), err.clone()),
            (-&dev, err),
            (Interval::from_i64(count as i64, prec), pi_bound),
        ],
        detail: Some(detail),
    })
}

fn bennett_scratch(table: &PrimeTable, x: u64, prec: u32) -> Result<Sides> {
    let mut logs = PrimeLogs::new(prec);
    let mut theta = Interval::zero(prec);
    let mut count = 0;
    for &p in table.primes_up_to(x) {
        match p % 4 {
            3 => theta = &theta + logs.get(p),
            1 => count += 1,
            _ => {}
        }
    }
    bennett_sides(table, &mut logs, x, theta, count)
}

fn bennett_check(cat: &Catalog, g: &Group, xs: &[u64]) -> Result<Vec<BoundReport>> {
    let table = cat.table();
    let prec = cat.prec();
    let mut logs = PrimeLogs::new(prec);
    let mut theta = Interval::zero(prec);
    let mut count = 0;
    let mut seen = 0;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        if x > table.limit() {
            return Err(Error::Range(format!("{x} exceeds the sieve limit {}", table.limit())));
        }
        let primes = table.primes_up_to(x);
        for (i, &p) in primes.iter().enumerate().skip(seen) {
            match p % 4 {
                3 => theta = &theta + cat.prime_ln(i),
                1 => count += 1,
                _ => {}
            }
        }
        seen = primes.len();
        if x < 1000 {
            out.push(g.skipped(x, "needs x >= 1000"));
            continue;
        }
        let sides = bennett_sides(table, &mut logs, x, theta.clone(), count)?;
        out.push(certified(g.id(), g.at(x), prec, sides, |p| bennett_scratch(table, x, p))?);
    }
    Ok(out)
}
