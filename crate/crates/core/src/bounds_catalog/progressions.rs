//! Upper bounds for `lcm(a, a+b, …, a+nb)` and the mean `M(r)` of
//! reciprocals of residues prime to `r`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::{certified, constants, int, Catalog, CheckInfo, Entry, Group, LogLcm, Sides};
use crate::error::{domain, Error, Result};
use crate::exact_arith::{lcm_step, ln_u64, FactoredInteger, Interval};
use crate::prime_toolkit::{factorial_valuation, PrimeLogs, PrimeTable};
use crate::report::{short_int, BoundReport};

const AP_PARAMS: &[super::ParamInfo] = &[int("a"), int("b"), int("n")];

pub(super) const ENTRIES: &[Entry] = &[
    Entry {
        info: CheckInfo {
            id: "ap_upper",
            params: AP_PARAMS,
            sweep: "n",
            exact: false,
            summary: "lcm(a, a+b, ..., a+nb) <= (41.30142 b log b)^(n + floor(a/b)); b >= 2, gcd(a,b) = 1, n >= b+1",
        },
        run: ap_upper,
    },
    Entry {
        info: CheckInfo {
            id: "ap_upper_prime",
            params: AP_PARAMS,
            sweep: "n",
            exact: false,
            summary: "lcm(a, a+b, ..., a+nb) <= (12.30641 b^(b/(b-1)))^n; b prime, 1 <= a < b, n >= b+1",
        },
        run: ap_upper_prime,
    },
    Entry {
        info: CheckInfo {
            id: "M_sandwich",
            params: &[int("r")],
            sweep: "r",
            exact: false,
            summary: "log(r+1) <= r M(r) <= log r + log log r + log 41.30142, r >= 2",
        },
        run: m_sandwich,
    },
    Entry {
        info: CheckInfo {
            id: "theta_prog_upper",
            params: &[int("k"), int("l"), int("x")],
            sweep: "x",
            exact: false,
            summary: "theta(x; k, l) <= x (2 * 1.25507/k + log k/(k-1)); k prime, 1 <= l < k, x >= k(k+1)",
        },
        run: theta_prog_upper,
    },
    Entry {
        info: CheckInfo {
            id: "ap_large_primes",
            params: AP_PARAMS,
            sweep: "n",
            exact: true,
            summary: "prod_{p > n} p^v_p(lcm(a..a+nb)) divides a(a+b)..(a+nb) prod_{p<=n, p|b} p^v_p(n!) / (n! prod_{p<=n, p!|b} p^v_p(n+1))",
        },
        run: ap_large_primes,
    },
];

/// `M(r) = (1/φ(r)) Σ_{ℓ ≤ r, gcd(ℓ, r) = 1} 1/ℓ`.
pub fn m_of(r: u64) -> Result<BigRational> {
    if r == 0 {
        return domain("r must be positive");
    }
    let mut d = BigInt::one();
    for k in 1..=r {
        d = lcm_step(&d, &BigInt::from(k));
    }
    Ok(m_with_denominator(r, &d))
}

/// `M(r)` over a common denominator `d` that every `ℓ <= r` divides.
fn m_with_denominator(r: u64, d: &BigInt) -> BigRational {
    let mut num = BigInt::from(0);
    let mut phi: u64 = 0;
    for l in 1..=r {
        if l.gcd(&r) == 1 {
            num += d / l;
            phi += 1;
        }
    }
    BigRational::new(num, d * phi)
}

fn m_sides(r: u64, m: &BigRational, prec: u32) -> Result<Sides> {
    let rm = Interval::from_rational(&(m * BigInt::from(r)), prec);
    let lnr = ln_u64(r, prec)?;
    let upper = &(&lnr + &lnr.ln()?) + &constants::ln("ap.c1", prec)?;
    Ok(Sides::sandwich(ln_u64(r + 1, prec)?, rm, upper))
}

fn m_sandwich(cat: &Catalog, g: &Group, rs: &[u64]) -> Result<Vec<BoundReport>> {
    let r_max = rs.last().copied().unwrap_or(0);
    let mut d = BigInt::one();
    for k in 1..=r_max {
        d = lcm_step(&d, &BigInt::from(k));
    }
    let mut out = Vec::with_capacity(rs.len());
    for &r in rs {
        if r < 2 {
            out.push(g.skipped(r, "needs r >= 2"));
            continue;
        }
        let m = m_with_denominator(r, &d);
        let sides = m_sides(r, &m, cat.prec())?.with_detail(format!("M(r) = {m}"));
        out.push(certified(g.id(), g.at(r), cat.prec(), sides, |p| {
            Ok(m_sides(r, &m, p)?.with_detail(format!("M(r) = {m}")))
        })?);
    }
    Ok(out)
}

fn ap_window(a: u64, b: u64) -> Option<&'static str> {
    if a == 0 || b < 2 {
        Some("needs a >= 1 and b >= 2")
    } else if a.gcd(&b) != 1 {
        Some("needs gcd(a, b) = 1")
    } else {
        None
    }
}

/// `log lcm(a, a+b, …, a+nb)` along ascending `n`.
struct ApLog<'a> {
    table: &'a PrimeTable,
    a: u64,
    b: u64,
    next: u64,
    logs: PrimeLogs,
    l: LogLcm,
}

impl<'a> ApLog<'a> {
    fn new(table: &'a PrimeTable, a: u64, b: u64, prec: u32) -> ApLog<'a> {
        ApLog {
            table,
            a,
            b,
            next: 0,
            logs: PrimeLogs::new(prec),
            l: LogLcm::new(prec),
        }
    }

    fn upto(&mut self, n: u64) -> Result<&Interval> {
        while self.next <= n {
            let t = self
                .b
                .checked_mul(self.next)
                .and_then(|v| v.checked_add(self.a))
                .ok_or_else(|| Error::Range("progression term overflows".into()))?;
            self.l.absorb(&self.table.factor(t)?, &mut self.logs);
            self.next += 1;
        }
        Ok(self.l.log())
    }
}

#[derive(Clone, Copy)]
enum ApBound {
    General,
    Prime,
}

fn ap_rhs(kind: ApBound, a: u64, b: u64, n: u64, prec: u32) -> Result<Interval> {
    let lnb = ln_u64(b, prec)?;
    Ok(match kind {
        // (n + ⌊a/b⌋) · log(c1 · b · log b)
        ApBound::General => {
            let base = &(&constants::ln("ap.c1", prec)? + &lnb) + &lnb.ln()?;
            base.mul_int(&BigInt::from(n + a / b))
        }
        // n · (log c2 + b/(b−1) · log b)
        ApBound::Prime => {
            let w = BigRational::new(BigInt::from(b), BigInt::from(b - 1));
            let base = &constants::ln("ap.c2", prec)? + &lnb.mul_rational(&w);
            base.mul_int(&BigInt::from(n))
        }
    })
}

fn ap_upper_sweep(kind: ApBound, cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let (a, b) = (g.u64("a")?, g.u64("b")?);
    let window = match kind {
        ApBound::General => ap_window(a, b),
        ApBound::Prime => {
            if b < 2 || !cat.table().is_prime(b)? {
                Some("needs b prime")
            } else if a == 0 || a >= b {
                Some("needs 1 <= a < b")
            } else {
                None
            }
        }
    };
    if let Some(reason) = window {
        return Ok(g.skip_all(ns, reason));
    }
    let prec = cat.prec();
    let mut run = ApLog::new(cat.table(), a, b, prec);
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let lhs = run.upto(n)?.clone();
        if n < b + 1 {
            out.push(g.skipped(n, "needs n >= b + 1"));
            continue;
        }
        let sides = Sides::single(lhs, ap_rhs(kind, a, b, n, prec)?);
        out.push(certified(g.id(), g.at(n), prec, sides, |p| {
            let mut fresh = ApLog::new(cat.table(), a, b, p);
            let lhs = fresh.upto(n)?.clone();
            Ok(Sides::single(lhs, ap_rhs(kind, a, b, n, p)?))
        })?);
    }
    Ok(out)
}

fn ap_upper(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    ap_upper_sweep(ApBound::General, cat, g, ns)
}

fn ap_upper_prime(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    ap_upper_sweep(ApBound::Prime, cat, g, ns)
}

fn theta_prog_rhs(k: u64, x: u64, prec: u32) -> Result<Interval> {
    let c3 = constants::interval("ap.c3", prec)?;
    let kk = Interval::from_i64(k as i64, prec);
    let first = c3.mul_i64(2).div(&kk)?;
    let second = ln_u64(k, prec)?.div(&Interval::from_i64(k as i64 - 1, prec))?;
    Ok((&first + &second).mul_int(&BigInt::from(x)))
}

fn theta_prog_scratch(table: &PrimeTable, k: u64, l: u64, x: u64, prec: u32) -> Result<Sides> {
    let mut acc = Interval::zero(prec);
    for &p in table.primes_up_to(x).iter().filter(|&&p| p % k == l) {
        acc = &acc + &ln_u64(p, prec)?;
    }
    Ok(Sides::single(acc, theta_prog_rhs(k, x, prec)?))
}

fn theta_prog_upper(cat: &Catalog, g: &Group, xs: &[u64]) -> Result<Vec<BoundReport>> {
    let (k, l) = (g.u64("k")?, g.u64("l")?);
    let table = cat.table();
    if k < 2 || !table.is_prime(k)? {
        return Ok(g.skip_all(xs, "needs k prime"));
    }
    if l == 0 || l >= k {
        return Ok(g.skip_all(xs, "needs 1 <= l < k"));
    }
    let prec = cat.prec();
    let mut logs = PrimeLogs::new(prec);
    let mut state: Option<(u64, Interval)> = None;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        if x > table.limit() {
            return Err(Error::Range(format!("{x} exceeds the sieve limit {}", table.limit())));
        }
        let lo = state.as_ref().map_or(0, |(x0, _)| *x0);
        let mut theta = state.take().map_or_else(|| Interval::zero(prec), |(_, v)| v);
        let primes = table.primes_up_to(x);
        let start = primes.partition_point(|&p| p <= lo);
        for &p in primes[start..].iter().filter(|&&p| p % k == l) {
            theta = &theta + logs.get(p);
        }
        state = Some((x, theta.clone()));
        if x < k * (k + 1) {
            out.push(g.skipped(x, "needs x >= k(k+1)"));
            continue;
        }
        let sides = Sides::single(theta, theta_prog_rhs(k, x, prec)?);
        out.push(certified(g.id(), g.at(x), prec, sides, |p| {
            theta_prog_scratch(table, k, l, x, p)
        })?);
    }
    Ok(out)
}

fn ap_large_primes(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let (a, b) = (g.u64("a")?, g.u64("b")?);
    if a == 0 || b == 0 {
        return Ok(g.skip_all(ns, "needs a >= 1 and b >= 1"));
    }
    if a.gcd(&b) != 1 {
        return Ok(g.skip_all(ns, "needs gcd(a, b) = 1"));
    }
    let table = cat.table();
    // valuations of a(a+b)⋯(a+nb) and of the lcm
    let mut prod: HashMap<u64, i64> = HashMap::new();
    let mut lcm: HashMap<u64, i64> = HashMap::new();
    let mut next = 0;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        while next <= n {
            let t = a + b * next;
            for (p, e) in table.factor(t)?.iter() {
                *prod.entry(p).or_insert(0) += i64::from(e);
                let cur = lcm.entry(p).or_insert(0);
                *cur = (*cur).max(i64::from(e));
            }
            next += 1;
        }
        let mut worst: Option<(i64, u64)> = None;
        let mut note = |slack: i64, p: u64| {
            if worst.is_none_or(|(s, q)| (slack, p) < (s, q)) {
                worst = Some((slack, p));
            }
        };
        for &p in table.primes_up_to(n) {
            let mut v = prod.get(&p).copied().unwrap_or(0);
            if b % p != 0 {
                v -= factorial_valuation(p, n)? as i64;
                v -= crate::exact_arith::valuation(&BigInt::from(n + 1), p) as i64;
            }
            note(v, p);
        }
        let mut large = Vec::new();
        for (&p, &e) in prod.iter().filter(|(&p, _)| p > n) {
            let ge = lcm[&p];
            large.push((p, ge as u32));
            note(e - ge, p);
        }
        let gn = FactoredInteger::from_pairs(large).to_bigint();
        let detail = match worst {
            Some((s, p)) => format!("G = {}, least slack {s} at p = {p}", short_int(&gn)),
            None => format!("G = {}", short_int(&gn)),
        };
        out.push(g.exact(n, worst.is_none_or(|(s, _)| s >= 0), detail));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;
    use crate::exact_arith::Verdict;
    use crate::report::params;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn m_values() {
        assert_eq!(m_of(1).unwrap(), q(1, 1));
        assert_eq!(m_of(2).unwrap(), q(1, 1));
        assert_eq!(m_of(3).unwrap(), q(3, 4));
        // φ(10) = 4: (1 + 1/3 + 1/7 + 1/9)/4
        assert_eq!(m_of(10).unwrap(), (q(1, 1) + q(1, 3) + q(1, 7) + q(1, 9)) / q(4, 1));
        assert!(m_of(0).is_err());
    }

    #[test]
    fn m_sandwich_scan() {
        let cat = small();
        let out = assert_scan_is_pointwise(&cat, "M_sandwich", &grid(&[("r", (0..=120).collect())]));
        assert_eq!(verdicts(&out, Verdict::Holds), 119);
        assert_eq!(out[3].detail.as_deref(), Some("M(r) = 3/4"));
    }

    #[test]
    fn ap_upper_example_grid() {
        let cat = small();
        let g = grid(&[("a", vec![1]), ("b", vec![2]), ("n", (3..=100).collect())]);
        let out = assert_scan_is_pointwise(&cat, "ap_upper", &g);
        assert_eq!(verdicts(&out, Verdict::Holds), 98);
        let g = grid(&[("a", vec![1, 2, 4]), ("b", vec![5, 7]), ("n", (0..=60).collect())]);
        let out = assert_scan_is_pointwise(&cat, "ap_upper_prime", &g);
        assert_eq!(verdicts(&out, Verdict::Fails), 0);
        assert_eq!(verdicts(&out, Verdict::Inconclusive), 0);
        let r = cat.check("ap_upper_prime", &params(&[("a", 3), ("b", 6), ("n", 20)])).unwrap();
        assert_eq!(r.verdict, Verdict::Skipped);
    }

    #[test]
    fn theta_progressions() {
        let cat = small();
        let g = grid(&[("k", vec![3, 5, 7]), ("l", vec![1, 2, 4]), ("x", (1..=400).step_by(7).collect())]);
        let out = assert_scan_is_pointwise(&cat, "theta_prog_upper", &g);
        assert_eq!(verdicts(&out, Verdict::Fails), 0);
        assert!(verdicts(&out, Verdict::Holds) > 300);
    }

    #[test]
    fn large_prime_part() {
        let cat = small();
        let g = grid(&[("a", vec![1, 2, 3, 7]), ("b", vec![1, 3, 4, 10]), ("n", (0..=50).collect())]);
        let out = assert_scan_is_pointwise(&cat, "ap_large_primes", &g);
        assert_eq!(verdicts(&out, Verdict::Fails), 0);
        assert!(verdicts(&out, Verdict::Holds) >= 600);
    }
}
