//! Bounds on `lcm(1..n)`, the Chebyshev functions, arithmetic progressions
//! and values of polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::constants::{self, chebyshev_a};
use super::{certified, int, ln_small, spec, Catalog, CheckInfo, Entry, Group, LogLcm, Sides};
use crate::error::{Error, Result};
use crate::exact_arith::{lcm_step, ln_u64, Interval};
use crate::prime_toolkit::{prime_power_count, PrimeLogs, PrimeTable};
use crate::report::{short_int, BoundReport};
use crate::sequences::{positive_terms, sylvester, myerson_from_prefix, SequenceSpec, SYLVESTER_CAP};

pub(super) const ENTRIES: &[Entry] = &[
    Entry {
        info: CheckInfo {
            id: "chebyshev_psi",
            params: &[int("x")],
            sweep: "x",
            exact: false,
            summary: "Ax - 5/2 log x - 1 <= psi(x) <= 6/5 Ax + 5/(4 log 6) log^2 x + 5/4 log x + 1, x >= 1",
        },
        run: chebyshev_psi,
    },
    Entry {
        info: CheckInfo {
            id: "chebyshev_lcm",
            params: &[int("n")],
            sweep: "n",
            exact: false,
            summary: "e^-1 n^(-5/2) e^(An) <= lcm(1..n) <= e n^(5/4) e^(5/(4 log 6) log^2 n) e^(6An/5), n >= 1",
        },
        run: chebyshev_lcm,
    },
    Entry {
        info: CheckInfo {
            id: "chebyshev_theta",
            params: &[int("x")],
            sweep: "x",
            exact: false,
            summary: "Ax - 12/5 sqrt x - 5/(8 log 6) log^2 x - 15/4 log x - 3 <= theta(x) <= psi upper bound, x >= 1",
        },
        run: chebyshev_theta,
    },
    Entry {
        info: CheckInfo {
            id: "hanson_3n",
            params: &[int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(1..n) <= 3^n, n >= 1",
        },
        run: hanson_3n,
    },
    Entry {
        info: CheckInfo {
            id: "hanson_pi",
            params: &[int("x")],
            sweep: "x",
            exact: false,
            summary: "pi(x) <= 1.25506 x / log x, x >= 2",
        },
        run: hanson_pi,
    },
    Entry {
        info: CheckInfo {
            id: "nair_2n",
            params: &[int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(1..n) >= 2^n, n >= 7",
        },
        run: nair_2n,
    },
    Entry {
        info: CheckInfo {
            id: "nair_4n",
            params: &[int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(1..n) <= 4^n, n >= 1",
        },
        run: nair_4n,
    },
    Entry {
        info: CheckInfo {
            id: "ap_divisor",
            params: &[int("u0"), int("r"), int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(u_0..u_n) is a multiple of u_k..u_n / ((n-k)! gcd(u_k, r)^(n-k)) for every k, u_k = u0 + kr",
        },
        run: ap_divisor,
    },
    Entry {
        info: CheckInfo {
            id: "farhi_ap",
            params: &[int("u0"), int("r"), int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(u_0..u_n) >= u0 (1+r)^(n-1), and >= u0 (1+r)^n when (r+1) | n; gcd(u0, r) = 1",
        },
        run: farhi_ap,
    },
    Entry {
        info: CheckInfo {
            id: "hong_ap",
            params: &[int("u0"), int("r"), int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(u_0..u_n) >= u0 (1+r)^n; gcd(u0, r) = 1",
        },
        run: hong_ap,
    },
    Entry {
        info: CheckInfo {
            id: "farhi_quad",
            params: &[int("a"), int("b"), int("t"), int("n")],
            sweep: "n",
            exact: true,
            summary: "u_k = ak(k+t) + b: lcm(u_0..u_n) >= 2b(a/4)^n (t = 0) or b/(t 2^t) (a/4)^n (t >= 1), and is a multiple of a^n u_0..u_n / f(t,n)",
        },
        run: farhi_quad,
    },
    Entry {
        info: CheckInfo {
            id: "farhi_n2plus1",
            params: &[int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(1^2+1, ..., n^2+1) >= 0.32 * 1.442^n, n >= 1",
        },
        run: farhi_n2plus1,
    },
    Entry {
        info: CheckInfo {
            id: "hong_poly",
            params: &[spec("f"), int("m"), int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(f(m..n)) >= 2^n for f non-constant with non-negative coefficients, n >= 7, 1 <= m <= ceil(n/2)",
        },
        run: hong_poly,
    },
    Entry {
        info: CheckInfo {
            id: "myerson",
            params: &[spec("spec"), int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(a_1..a_n) divides a_1..a_n / prod_j prod_{k <= n/b_j} a_k with Sylvester b",
        },
        run: myerson,
    },
];

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn need_sieve(table: &PrimeTable, x: u64) -> Result<()> {
    if x > table.limit() {
        return Err(Error::Range(format!("{x} exceeds the sieve limit {}", table.limit())));
    }
    Ok(())
}

/// Closed-form pieces shared by the Chebyshev bounds.
struct ChebyshevBounds {
    a: Interval,
    a65: Interval,
    k_hi: Interval,
    k_lo: Interval,
    prec: u32,
}

impl ChebyshevBounds {
    fn new(prec: u32) -> Result<ChebyshevBounds> {
        let a = chebyshev_a(prec);
        let ln6 = ln_u64(6, prec)?;
        let five = Interval::from_i64(5, prec);
        Ok(ChebyshevBounds {
            a65: a.mul_rational(&rat(6, 5)),
            a,
            k_hi: five.div(&ln6.mul_i64(4))?,
            k_lo: five.div(&ln6.mul_i64(8))?,
            prec,
        })
    }

    fn one(&self) -> Interval {
        Interval::from_i64(1, self.prec)
    }

    /// `Ax − 5/2 log x − 1`.
    fn psi_lower(&self, x: u64, lnx: &Interval) -> Interval {
        let ax = self.a.mul_int(&BigInt::from(x));
        &(&ax - &lnx.mul_rational(&rat(5, 2))) - &self.one()
    }

    /// `6/5 Ax + 5/(4 log 6) log² x + 5/4 log x + 1`.
    fn upper(&self, x: u64, lnx: &Interval) -> Interval {
        let lead = self.a65.mul_int(&BigInt::from(x));
        let sq = &self.k_hi * &(lnx * lnx);
        &(&(&lead + &sq) + &lnx.mul_rational(&rat(5, 4))) + &self.one()
    }

    /// `Ax − 12/5 √x − 5/(8 log 6) log² x − 15/4 log x − 3`.
    fn theta_lower(&self, x: u64, lnx: &Interval) -> Result<Interval> {
        let ax = self.a.mul_int(&BigInt::from(x));
        let root = Interval::from_int(&BigInt::from(x), self.prec).sqrt()?;
        let sq = &self.k_lo * &(lnx * lnx);
        let mut v = &ax - &root.mul_rational(&rat(12, 5));
        v = &v - &sq;
        v = &v - &lnx.mul_rational(&rat(15, 4));
        Ok(&v - &Interval::from_i64(3, self.prec))
    }
}

/// The prime `p` when `y = p^k`.
fn prime_power_base(table: &PrimeTable, y: u64) -> Result<Option<u64>> {
    if y < 2 {
        return Ok(None);
    }
    let f = table.factor(y)?;
    Ok(if f.num_primes() == 1 { f.iter().next().map(|(p, _)| p) } else { None })
}

fn psi_scratch(table: &PrimeTable, logs: &mut PrimeLogs, x: u64) -> Interval {
    let mut acc = Interval::zero(logs.prec());
    for &p in table.primes_up_to(x) {
        acc = &acc + &logs.get(p).mul_i64(i64::from(prime_power_count(p, x)));
    }
    acc
}

fn theta_scratch(table: &PrimeTable, logs: &mut PrimeLogs, x: u64) -> Interval {
    let mut acc = Interval::zero(logs.prec());
    for &p in table.primes_up_to(x) {
        acc = &acc + logs.get(p);
    }
    acc
}

#[derive(Clone, Copy)]
enum Cheb {
    Psi,
    Theta,
}

fn cheb_sides(
    kind: Cheb,
    table: &PrimeTable,
    b: &ChebyshevBounds,
    logs: &mut PrimeLogs,
    x: u64,
    value: Interval,
) -> Result<Sides> {
    let lnx = ln_small(table, logs, x)?;
    let lower = match kind {
        Cheb::Psi => b.psi_lower(x, &lnx),
        Cheb::Theta => b.theta_lower(x, &lnx)?,
    };
    Ok(Sides::sandwich(lower, value, b.upper(x, &lnx)))
}

fn cheb_scratch(kind: Cheb, table: &PrimeTable, x: u64, prec: u32) -> Result<Sides> {
    let b = ChebyshevBounds::new(prec)?;
    let mut logs = PrimeLogs::new(prec);
    let value = match kind {
        Cheb::Psi => psi_scratch(table, &mut logs, x),
        Cheb::Theta => theta_scratch(table, &mut logs, x),
    };
    cheb_sides(kind, table, &b, &mut logs, x, value)
}

fn chebyshev_sweep(kind: Cheb, cat: &Catalog, g: &Group, xs: &[u64]) -> Result<Vec<BoundReport>> {
    let table = cat.table();
    let prec = cat.prec();
    let b = ChebyshevBounds::new(prec)?;
    let mut logs = PrimeLogs::new(prec);
    let mut state: Option<(u64, Interval)> = None;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        if x == 0 {
            out.push(g.skipped(x, "needs x >= 1"));
            continue;
        }
        need_sieve(table, x)?;
        let value = match state.take() {
            None => match kind {
                Cheb::Psi => psi_scratch(table, &mut logs, x),
                Cheb::Theta => theta_scratch(table, &mut logs, x),
            },
            Some((x0, mut v)) => {
                for y in x0 + 1..=x {
                    let p = match kind {
                        Cheb::Psi => prime_power_base(table, y)?,
                        Cheb::Theta => table.is_prime(y)?.then_some(y),
                    };
                    if let Some(p) = p {
                        v = &v + logs.get(p);
                    }
                }
                v
            }
        };
        state = Some((x, value.clone()));
        let sides = cheb_sides(kind, table, &b, &mut logs, x, value)?;
        out.push(certified(g.id(), g.at(x), prec, sides, |p| {
            cheb_scratch(kind, table, x, p)
        })?);
    }
    Ok(out)
}

fn chebyshev_psi(cat: &Catalog, g: &Group, xs: &[u64]) -> Result<Vec<BoundReport>> {
    chebyshev_sweep(Cheb::Psi, cat, g, xs)
}

fn chebyshev_theta(cat: &Catalog, g: &Group, xs: &[u64]) -> Result<Vec<BoundReport>> {
    chebyshev_sweep(Cheb::Theta, cat, g, xs)
}

fn lcm_sides(table: &PrimeTable, b: &ChebyshevBounds, logs: &mut PrimeLogs, n: u64, log_l: Interval) -> Result<Sides> {
    let lnn = ln_small(table, logs, n)?;
    Ok(Sides::sandwich(b.psi_lower(n, &lnn), log_l, b.upper(n, &lnn)))
}

fn chebyshev_lcm(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let table = cat.table();
    let prec = cat.prec();
    let b = ChebyshevBounds::new(prec)?;
    let mut logs = PrimeLogs::new(prec);
    let mut l = LogLcm::new(prec);
    let mut k = 0;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        while k < n {
            k += 1;
            l.absorb(&table.factor(k)?, &mut logs);
        }
        if n == 0 {
            out.push(g.skipped(n, "needs n >= 1"));
            continue;
        }
        let sides = lcm_sides(table, &b, &mut logs, n, l.log().clone())?;
        let redo = |p: u32| -> Result<Sides> {
            let b = ChebyshevBounds::new(p)?;
            let mut logs = PrimeLogs::new(p);
            let mut l = LogLcm::new(p);
            for k in 1..=n {
                l.absorb(&table.factor(k)?, &mut logs);
            }
            lcm_sides(table, &b, &mut logs, n, l.log().clone())
        };
        out.push(certified(g.id(), g.at(n), prec, sides, redo)?);
    }
    Ok(out)
}

/// `lcm(1..n)` along ascending `ns`.
struct NaturalLcm {
    k: u64,
    l: BigInt,
}

impl NaturalLcm {
    fn new() -> NaturalLcm {
        NaturalLcm {
            k: 0,
            l: BigInt::one(),
        }
    }

    fn upto(&mut self, n: u64) -> &BigInt {
        while self.k < n {
            self.k += 1;
            self.l = lcm_step(&self.l, &BigInt::from(self.k));
        }
        &self.l
    }
}

fn pow_u64(base: u64, e: u64) -> BigInt {
    BigInt::from(base).pow(e as u32)
}

fn le_detail(a: &BigInt, b: &BigInt) -> String {
    format!("{} <= {}", short_int(a), short_int(b))
}

fn hanson_3n(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let mut run = NaturalLcm::new();
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let l = run.upto(n).clone();
        if n == 0 {
            out.push(g.skipped(n, "needs n >= 1"));
            continue;
        }
        let bound = pow_u64(3, n);
        out.push(g.exact(n, l <= bound, le_detail(&l, &bound)));
    }
    Ok(out)
}

fn nair_2n(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let mut run = NaturalLcm::new();
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let l = run.upto(n).clone();
        if n < 7 {
            out.push(g.skipped(n, "needs n >= 7"));
            continue;
        }
        let bound = pow_u64(2, n);
        out.push(g.exact(n, bound <= l, le_detail(&bound, &l)));
    }
    Ok(out)
}

fn nair_4n(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let mut run = NaturalLcm::new();
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let l = run.upto(n).clone();
        if n == 0 {
            out.push(g.skipped(n, "needs n >= 1"));
            continue;
        }
        let bound = pow_u64(4, n);
        out.push(g.exact(n, l <= bound, le_detail(&l, &bound)));
    }
    Ok(out)
}

fn hanson_pi_sides(table: &PrimeTable, logs: &mut PrimeLogs, x: u64, count: u64) -> Result<Sides> {
    let prec = logs.prec();
    let k = constants::interval("hanson.pi", prec)?;
    let lnx = ln_small(table, logs, x)?;
    let rhs = k.mul_int(&BigInt::from(x)).div(&lnx)?;
    Ok(Sides::single(Interval::from_i64(count as i64, prec), rhs).with_detail(format!("pi(x) = {count}")))
}

fn hanson_pi(cat: &Catalog, g: &Group, xs: &[u64]) -> Result<Vec<BoundReport>> {
    let table = cat.table();
    let mut logs = PrimeLogs::new(cat.prec());
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        if x < 2 {
            out.push(g.skipped(x, "needs x >= 2"));
            continue;
        }
        need_sieve(table, x)?;
        let count = table.pi(x)?;
        let sides = hanson_pi_sides(table, &mut logs, x, count)?;
        out.push(certified(g.id(), g.at(x), cat.prec(), sides, |p| {
            hanson_pi_sides(table, &mut PrimeLogs::new(p), x, count)
        })?);
    }
    Ok(out)
}

/// Running `lcm` and terms of an integer sequence indexed from `first`.
struct Running<F: Fn(u64) -> BigInt> {
    term: F,
    next: u64,
    l: BigInt,
    terms: Vec<BigInt>,
}

impl<F: Fn(u64) -> BigInt> Running<F> {
    fn new(first: u64, term: F) -> Running<F> {
        Running {
            term,
            next: first,
            l: BigInt::one(),
            terms: Vec::new(),
        }
    }

    /// Absorbs terms up to index `n`.
    fn upto(&mut self, n: u64) {
        while self.next <= n {
            let t = (self.term)(self.next);
            self.l = lcm_step(&self.l, &t);
            self.terms.push(t);
            self.next += 1;
        }
    }
}

fn progression(g: &Group) -> Result<(u64, u64)> {
    Ok((g.u64("u0")?, g.u64("r")?))
}

fn ap_window(u0: u64, r: u64, coprime: bool) -> Option<&'static str> {
    if u0 == 0 || r == 0 {
        Some("needs u0 >= 1 and r >= 1")
    } else if coprime && u0.gcd(&r) != 1 {
        Some("needs gcd(u0, r) = 1")
    } else {
        None
    }
}

fn ap_divisor(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let (u0, r) = progression(g)?;
    if let Some(reason) = ap_window(u0, r, false) {
        return Ok(g.skip_all(ns, reason));
    }
    let br = BigInt::from(r);
    let mut run = Running::new(0, |k| BigInt::from(u0) + &br * k);
    // suffix[k] = u_k⋯u_n for the current n
    let mut suffix: Vec<BigInt> = Vec::new();
    let mut fact = vec![BigInt::one()];
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        run.upto(n);
        for t in &run.terms[suffix.len()..] {
            for s in suffix.iter_mut() {
                *s *= t;
            }
            suffix.push(t.clone());
        }
        while fact.len() <= n as usize {
            let k = fact.len();
            let next = fact.last().unwrap() * k;
            fact.push(next);
        }
        let mut bad = None;
        for k in 0..=n as usize {
            let gk = run.terms[k].gcd(&br);
            let den = &fact[n as usize - k] * gk.pow((n as usize - k) as u32);
            if !(&run.l * den).is_multiple_of(&suffix[k]) {
                bad = Some(k);
                break;
            }
        }
        let detail = match bad {
            None => format!("all {} quotients divide L = {}", n + 1, short_int(&run.l)),
            Some(k) => format!("quotient for k = {k} does not divide L"),
        };
        out.push(g.exact(n, bad.is_none(), detail));
    }
    Ok(out)
}

fn ap_lower(g: &Group, ns: &[u64], strong: bool) -> Result<Vec<BoundReport>> {
    let (u0, r) = progression(g)?;
    if let Some(reason) = ap_window(u0, r, true) {
        return Ok(g.skip_all(ns, reason));
    }
    let mut run = Running::new(0, |k| BigInt::from(u0 + r * k));
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        run.upto(n);
        let l = &run.l;
        let full = BigInt::from(u0) * pow_u64(1 + r, n);
        // u0 (1+r)^{n−1} <= L  ⟺  u0 (1+r)^n <= (1+r) L
        let weak = full <= l * (1 + r);
        let (holds, bound) = if strong || n % (r + 1) == 0 {
            (weak && full <= *l, BigRational::from_integer(full))
        } else {
            (weak, BigRational::new(full, BigInt::from(1 + r)))
        };
        let shown = if bound.is_integer() {
            short_int(bound.numer())
        } else {
            format!("{}/{}", short_int(bound.numer()), bound.denom())
        };
        out.push(g.exact(n, holds, format!("{shown} <= {}", short_int(l))));
    }
    Ok(out)
}

fn farhi_ap(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    ap_lower(g, ns, false)
}

fn hong_ap(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    ap_lower(g, ns, true)
}

fn farhi_quad(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let (a, b, t) = (g.u64("a")?, g.u64("b")?, g.u64("t")?);
    if a == 0 || b == 0 {
        return Ok(g.skip_all(ns, "needs a >= 1 and b >= 1"));
    }
    if a.gcd(&b) != 1 {
        return Ok(g.skip_all(ns, "needs gcd(a, b) = 1"));
    }
    let (ba, bb) = (BigInt::from(a), BigInt::from(b));
    let mut run = Running::new(0, |k| &ba * k * (k + t) + &bb);
    let mut prod = BigInt::one();
    let mut used = 0;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        run.upto(n);
        for u in &run.terms[used..] {
            prod *= u;
        }
        used = run.terms.len();
        if t == 0 && n == 0 {
            out.push(g.skipped(n, "needs n >= 1 when t = 0"));
            continue;
        }
        let l = &run.l;
        let an = ba.pow(n as u32);
        let four_n = pow_u64(4, n);
        // 2b(a/4)^n <= L, or b/(t 2^t) (a/4)^n <= L
        let (bound_ok, bound) = if t == 0 {
            let lhs = &bb * 2 * &an;
            (lhs <= l * &four_n, BigRational::new(lhs, four_n))
        } else {
            let scale = BigInt::from(t) * pow_u64(2, t) * &four_n;
            (&bb * &an <= l * &scale, BigRational::new(&bb * &an, scale))
        };
        // a^n u_0⋯u_n / f(t,n) = 2 u_0⋯u_n / (2n)!  or  (t−1)! u_0⋯u_n / (2n+t)!
        let (num, den) = if t == 0 {
            (&prod * 2, factorial(2 * n))
        } else {
            (&prod * factorial(t - 1), factorial(2 * n + t))
        };
        let quotient = BigRational::new(l * den, num);
        let holds = bound_ok && quotient.is_integer();
        let detail = format!(
            "L = {}, bound ~ {:.6e}, L*f/(a^n prod) = {}",
            short_int(l),
            ratio_f64(&bound),
            if quotient.is_integer() {
                short_int(quotient.numer())
            } else {
                "not an integer".to_string()
            }
        );
        out.push(g.exact(n, holds, detail));
    }
    Ok(out)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn ratio_f64(q: &BigRational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    let shift = (n.bits().max(d.bits()) as i64 - 60).max(0) as u32;
    let f = |v: &BigInt| -> f64 { (v >> shift).to_string().parse::<f64>().unwrap_or(f64::NAN) };
    if d.is_zero() {
        f64::NAN
    } else {
        f(n) / f(d)
    }
}

fn farhi_n2plus1(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let mut run = Running::new(1, |k| BigInt::from(k) * k + 1);
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        run.upto(n);
        if n == 0 {
            out.push(g.skipped(n, "needs n >= 1"));
            continue;
        }
        // 0.32 · 1.442^n <= L  ⟺  32 · 1442^n <= 100 · 1000^n · L
        let lhs = pow_u64(1442, n) * 32u32;
        let rhs = pow_u64(1000, n) * 100u32 * &run.l;
        let bound = BigRational::new(lhs.clone(), pow_u64(1000, n) * 100u32);
        out.push(g.exact(
            n,
            lhs <= rhs,
            format!("{:.6e} <= {}", ratio_f64(&bound), short_int(&run.l)),
        ));
    }
    Ok(out)
}

fn hong_poly(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let coeffs = match g.spec("f")? {
        SequenceSpec::Polynomial { coeffs } => coeffs,
        _ => return Ok(g.skip_all(ns, "needs a polynomial `poly:c0,c1,...`")),
    };
    if coeffs.iter().skip(1).all(|&c| c == 0) {
        return Ok(g.skip_all(ns, "needs a non-constant polynomial"));
    }
    let m = g.u64("m")?;
    let eval = |k: u64| coeffs.iter().rev().fold(BigInt::zero(), |acc, &c| acc * k + c);
    let mut run = Running::new(m.max(1), eval);
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        run.upto(n);
        if n < 7 {
            out.push(g.skipped(n, "needs n >= 7"));
            continue;
        }
        if m == 0 || m > n.div_ceil(2) {
            out.push(g.skipped(n, "needs 1 <= m <= ceil(n/2)"));
            continue;
        }
        let bound = pow_u64(2, n);
        out.push(g.exact(n, bound <= run.l, le_detail(&bound, &run.l)));
    }
    Ok(out)
}

fn myerson(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let spec = g.spec("spec")?;
    if !spec.is_strong_divisibility_family() {
        return Ok(g.skip_all(ns, "needs a strong divisibility family"));
    }
    let n_max = ns.last().copied().unwrap_or(0) as usize;
    let terms = if n_max == 0 { Vec::new() } else { positive_terms(&spec, n_max)? };
    let b = sylvester(SYLVESTER_CAP)?;
    let mut prefix = vec![BigInt::one()];
    let mut l = BigInt::one();
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let n = n as usize;
        while prefix.len() <= n {
            let a = &terms[prefix.len() - 1];
            l = lcm_step(&l, a);
            let next = prefix.last().unwrap() * a;
            prefix.push(next);
        }
        if n == 0 {
            out.push(g.skipped(0, "needs n >= 1"));
            continue;
        }
        let q = myerson_from_prefix(&prefix, &b, n);
        let holds = q.is_integer() && q.numer().is_multiple_of(&l);
        let detail = if q.is_integer() {
            format!("quotient = {}, L = {}", short_int(q.numer()), short_int(&l))
        } else {
            "quotient is not an integer".to_string()
        };
        out.push(g.exact(n as u64, holds, detail));
    }
    Ok(out)
}
