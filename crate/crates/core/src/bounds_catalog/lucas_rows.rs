//! Lucas and Fibonacci lcm bounds, binomial valuations and row identities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{certified, int, spec, Catalog, CheckInfo, Entry, Group, Sides};
use crate::error::{domain, Result};
use crate::exact_arith::{lcm_step, ln_int, Interval};
use crate::identities::{
    hanson_c_check, nair_divisor_check, RowScanner, BINOMIAL_ROW_LCM, HANSON_C, LCM_GCD_ROW,
    LCM_ROW_IDENTITY, LCM_WEIGHTED_ROW, NAIR_DIVISOR,
};
use crate::prime_toolkit::{factorial_valuation, kummer_borrows, max_binomial_valuation};
use crate::report::BoundReport;
use crate::sequences::SequenceSpec;

const LUCAS_PARAMS: &[super::ParamInfo] = &[int("p"), int("q"), int("n")];
const ROW_PARAMS: &[super::ParamInfo] = &[spec("spec"), int("n")];

pub(super) const ENTRIES: &[Entry] = &[
    Entry {
        info: CheckInfo {
            id: "lucas_sandwich",
            params: LUCAS_PARAMS,
            sweep: "n",
            exact: false,
            summary: "|alpha|^(n^2/4 - n/2 - 1) <= lcm(U_1..U_n) <= |alpha|^(n^2/3 + 7n/3 - 8/3); P, Q coprime, non-zero, P^2 > 4Q",
        },
        run: lucas_sandwich,
    },
    Entry {
        info: CheckInfo {
            id: "fib_sandwich",
            params: &[int("n")],
            sweep: "n",
            exact: false,
            summary: "Phi^(n^2/4 - 9/4) <= lcm(F_1..F_n) <= Phi^(n^2/3 + 4n/3)",
        },
        run: fib_sandwich,
    },
    Entry {
        info: CheckInfo {
            id: "lucas_term_sandwich",
            params: LUCAS_PARAMS,
            sweep: "n",
            exact: false,
            summary: "|alpha|^(n-2) <= |U_n| <= |alpha|^n under the Lucas sandwich hypotheses",
        },
        run: lucas_term_sandwich,
    },
    Entry {
        info: CheckInfo {
            id: "kummer_legendre",
            params: &[int("p"), int("n")],
            sweep: "n",
            exact: true,
            summary: "borrows of n - k in base p equal v_p(C(n,k)) for all k, and the digit formula gives max_k v_p(C(n,k))",
        },
        run: kummer_legendre,
    },
    Entry {
        info: CheckInfo {
            id: BINOMIAL_ROW_LCM,
            params: &[int("n")],
            sweep: "n",
            exact: true,
            summary: "(n+1) lcm(C(n,0), ..., C(n,n)) = lcm(1, ..., n+1)",
        },
        run: binomial_row_lcm,
    },
    Entry {
        info: CheckInfo {
            id: LCM_ROW_IDENTITY,
            params: ROW_PARAMS,
            sweep: "n",
            exact: true,
            summary: "a_(n+1) lcm of the a-binomial row n = lcm(a_1, ..., a_(n+1))",
        },
        run: lcm_row_identity,
    },
    Entry {
        info: CheckInfo {
            id: LCM_WEIGHTED_ROW,
            params: ROW_PARAMS,
            sweep: "n",
            exact: true,
            summary: "lcm(a_1..a_n) = lcm_k a_k C_a(n,k), n >= 1",
        },
        run: lcm_weighted_row,
    },
    Entry {
        info: CheckInfo {
            id: LCM_GCD_ROW,
            params: ROW_PARAMS,
            sweep: "n",
            exact: true,
            summary: "lcm(a_1..a_n) = gcd over ceil(n/2) <= k <= n of C_a(n,k) lcm(a_1..a_k), n >= 1",
        },
        run: lcm_gcd_row,
    },
    Entry {
        info: CheckInfo {
            id: HANSON_C,
            params: &[int("n")],
            sweep: "n",
            exact: true,
            summary: "lcm(1..n) divides n!/([n/2]! [n/3]! [n/7]! [n/43]! ...), an integer",
        },
        run: hanson_c,
    },
    Entry {
        info: CheckInfo {
            id: NAIR_DIVISOR,
            params: &[int("k"), int("l")],
            sweep: "l",
            exact: true,
            summary: "l C(k,l) divides lcm(1..k), 1 <= l <= k",
        },
        run: nair_divisor,
    },
];

/// `|α| = (|P| + √Δ)/2` and its log.
fn lucas_alpha(p: i64, q: i64, prec: u32) -> Result<Interval> {
    let d = BigInt::from(p) * p - BigInt::from(q) * 4;
    let root = Interval::from_int(&d, prec).sqrt()?;
    let twice = &Interval::from_i64(p.abs(), prec) + &root;
    twice.mul_rational(&BigRational::new(BigInt::one(), BigInt::from(2))).ln()
}

fn lucas_window(p: i64, q: i64) -> Option<&'static str> {
    if p == 0 || q == 0 {
        Some("needs P and Q non-zero")
    } else if p.gcd(&q) != 1 {
        Some("needs gcd(P, Q) = 1")
    } else if i128::from(p) * i128::from(p) <= 4 * i128::from(q) {
        Some("needs P^2 - 4Q > 0")
    } else {
        None
    }
}

/// `|U_1|, …, |U_n|`.
fn lucas_abs(p: i64, q: i64, n: u64) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(n as usize);
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for k in 1..=n {
        if cur.is_zero() {
            return domain(format!("U_{k} vanishes"));
        }
        out.push(cur.abs());
        let next = &cur * p - &prev * q;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(out)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sq(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n) * n)
}

fn lin(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy)]
enum LcmBound {
    Lucas,
    Fibonacci,
}

fn exponents(kind: LcmBound, n: u64) -> (BigRational, BigRational) {
    match kind {
        LcmBound::Lucas => (
            sq(n) * rat(1, 4) - lin(n) * rat(1, 2) - rat(1, 1),
            sq(n) * rat(1, 3) + lin(n) * rat(7, 3) - rat(8, 3),
        ),
        LcmBound::Fibonacci => (
            sq(n) * rat(1, 4) - rat(9, 4),
            sq(n) * rat(1, 3) + lin(n) * rat(4, 3),
        ),
    }
}

fn lcm_sides(kind: LcmBound, p: i64, q: i64, n: u64, l: &BigInt, prec: u32) -> Result<Sides> {
    let la = lucas_alpha(p, q, prec)?;
    let (lo, hi) = exponents(kind, n);
    Ok(Sides::sandwich(la.mul_rational(&lo), ln_int(l, prec)?, la.mul_rational(&hi)))
}

fn lucas_lcm_sweep(kind: LcmBound, cat: &Catalog, g: &Group, p: i64, q: i64, ns: &[u64]) -> Result<Vec<BoundReport>> {
    if let Some(reason) = lucas_window(p, q) {
        return Ok(g.skip_all(ns, reason));
    }
    let n_max = ns.last().copied().unwrap_or(0);
    let terms = lucas_abs(p, q, n_max)?;
    let mut l = BigInt::one();
    let mut k = 0;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        while k < n {
            l = lcm_step(&l, &terms[k as usize]);
            k += 1;
        }
        if n == 0 {
            out.push(g.skipped(n, "needs n >= 1"));
            continue;
        }
        let sides = lcm_sides(kind, p, q, n, &l, cat.prec())?;
        out.push(certified(g.id(), g.at(n), cat.prec(), sides, |prec| {
            lcm_sides(kind, p, q, n, &l, prec)
        })?);
    }
    Ok(out)
}

fn lucas_sandwich(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    lucas_lcm_sweep(LcmBound::Lucas, cat, g, g.i64("p")?, g.i64("q")?, ns)
}

fn fib_sandwich(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    lucas_lcm_sweep(LcmBound::Fibonacci, cat, g, 1, -1, ns)
}

fn term_sides(p: i64, q: i64, n: u64, u: &BigInt, prec: u32) -> Result<Sides> {
    let la = lucas_alpha(p, q, prec)?;
    let lower = la.mul_rational(&(lin(n) - rat(2, 1)));
    Ok(Sides::sandwich(lower, ln_int(u, prec)?, la.mul_rational(&lin(n))))
}

fn lucas_term_sandwich(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let (p, q) = (g.i64("p")?, g.i64("q")?);
    if let Some(reason) = lucas_window(p, q) {
        return Ok(g.skip_all(ns, reason));
    }
    let terms = lucas_abs(p, q, ns.last().copied().unwrap_or(0))?;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 {
            out.push(g.skipped(n, "needs n >= 1"));
            continue;
        }
        let u = &terms[n as usize - 1];
        let sides = term_sides(p, q, n, u, cat.prec())?;
        out.push(certified(g.id(), g.at(n), cat.prec(), sides, |prec| {
            term_sides(p, q, n, u, prec)
        })?);
    }
    Ok(out)
}

fn kummer_legendre(cat: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    let p = g.u64("p")?;
    if p < 2 || !cat.table().is_prime(p)? {
        return Ok(g.skip_all(ns, "needs p prime"));
    }
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let fv = |m: u64| factorial_valuation(p, m);
        let vn = fv(n)?;
        let mut best = 0;
        let mut mismatch = None;
        for k in 0..=n {
            let legendre = vn - fv(k)? - fv(n - k)?;
            best = best.max(legendre);
            if kummer_borrows(n, k, p)? != legendre {
                mismatch = Some(k);
                break;
            }
        }
        let report = match mismatch {
            Some(k) => g.exact(n, false, format!("borrow count differs at k = {k}")),
            None if n == 0 => g.exact(n, true, "row 0 has no carries"),
            None => {
                let (value, witness) = max_binomial_valuation(n, p)?;
                let at_witness = vn - fv(witness)? - fv(n - witness)?;
                let holds = value == best && at_witness == value;
                g.exact(n, holds, format!("max valuation {best}, digit formula {value} at k = {witness}"))
            }
        };
        out.push(report);
    }
    Ok(out)
}

/// Re-labels a report produced elsewhere with this group's parameters.
fn relabel(g: &Group, n: u64, mut r: BoundReport) -> BoundReport {
    r.check_id = g.id().to_string();
    r.params = g.at(n);
    r
}

fn row_sweep(
    g: &Group,
    spec: &SequenceSpec,
    ns: &[u64],
    min_n: u64,
    f: impl Fn(&RowScanner, usize) -> Result<BoundReport>,
) -> Result<Vec<BoundReport>> {
    if !spec.is_strong_divisibility_family() {
        return Ok(g.skip_all(ns, "needs a strong divisibility family"));
    }
    let n_max = ns.last().copied().unwrap_or(0) as usize;
    let scanner = RowScanner::new(spec, n_max)?;
    ns.iter()
        .map(|&n| {
            if n < min_n {
                Ok(g.skipped(n, "needs n >= 1"))
            } else {
                Ok(relabel(g, n, f(&scanner, n as usize)?))
            }
        })
        .collect()
}

fn binomial_row_lcm(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    row_sweep(g, &SequenceSpec::Naturals, ns, 0, |s, n| s.row_identity(n, BINOMIAL_ROW_LCM))
}

fn lcm_row_identity(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    row_sweep(g, &g.spec("spec")?, ns, 0, |s, n| s.row_identity(n, LCM_ROW_IDENTITY))
}

fn lcm_weighted_row(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    row_sweep(g, &g.spec("spec")?, ns, 1, |s, n| s.weighted_row(n))
}

fn lcm_gcd_row(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    row_sweep(g, &g.spec("spec")?, ns, 1, |s, n| s.gcd_row(n))
}

fn hanson_c(_: &Catalog, g: &Group, ns: &[u64]) -> Result<Vec<BoundReport>> {
    ns.iter()
        .map(|&n| {
            if n == 0 {
                Ok(g.skipped(n, "needs n >= 1"))
            } else {
                Ok(relabel(g, n, hanson_c_check(n)?))
            }
        })
        .collect()
}

fn nair_divisor(_: &Catalog, g: &Group, ls: &[u64]) -> Result<Vec<BoundReport>> {
    let k = g.u64("k")?;
    ls.iter()
        .map(|&l| {
            if l == 0 || l > k {
                Ok(g.skipped(l, "needs 1 <= l <= k"))
            } else {
                Ok(relabel(g, l, nair_divisor_check(k, l)?))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use crate::exact_arith::Verdict;
    use crate::report::params;

    #[test]
    fn lucas_example() {
        let cat = small();
        let r = cat
            .check("lucas_sandwich", &params(&[("p", 3), ("q", 2), ("n", 4)]))
            .unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        // 2^1 <= 105 <= 2^12
        let lo: f64 = r.lhs_log.unwrap().parse().unwrap();
        let hi: f64 = r.rhs_log.unwrap().parse().unwrap();
        assert!((lo - 2f64.ln()).abs() < 1e-15);
        assert!((hi - 12.0 * 2f64.ln()).abs() < 1e-12);
        let v: f64 = r.detail.unwrap()["value = ".len()..].parse().unwrap();
        assert!((v - 105f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn lucas_families() {
        let cat = small();
        for (p, q) in [(1, -1), (3, 2), (2, -1), (4, 1), (5, 6)] {
            let mut g = grid(&[("n", (0..=60).collect())]);
            g.insert("p".into(), vec![p.to_string()]);
            g.insert("q".into(), vec![q.to_string()]);
            for id in ["lucas_sandwich", "lucas_term_sandwich"] {
                let out = assert_scan_is_pointwise(&cat, id, &g);
                assert_eq!(verdicts(&out, Verdict::Holds), 60, "{id} ({p},{q})");
            }
        }
        let out = assert_scan_is_pointwise(&cat, "fib_sandwich", &grid(&[("n", (1..=80).collect())]));
        assert_eq!(verdicts(&out, Verdict::Holds), 80);
        let r = cat
            .check("lucas_sandwich", &params(&[("p", "2"), ("q", "1"), ("n", "3")]))
            .unwrap();
        assert_eq!(r.verdict, Verdict::Skipped);
    }

    #[test]
    fn kummer_rows() {
        let cat = small();
        let out = assert_scan_is_pointwise(
            &cat,
            "kummer_legendre",
            &grid(&[("p", vec![2, 3, 4]), ("n", (0..=64).collect())]),
        );
        assert_eq!(verdicts(&out, Verdict::Holds), 130);
        assert_eq!(verdicts(&out, Verdict::Skipped), 65);
    }

    #[test]
    fn identities() {
        let cat = small();
        let out = assert_scan_is_pointwise(&cat, "binomial_row_lcm", &grid(&[("n", (0..=40).collect())]));
        assert_eq!(verdicts(&out, Verdict::Holds), 41);
        for id in ["lcm_row_identity", "lcm_weighted_row", "lcm_gcd_row"] {
            let mut g = grid(&[("n", (0..=30).collect())]);
            g.insert("spec".into(), vec!["fib".into(), "lucas:3,2".into(), "qpow:3".into(), "ap:1,2".into()]);
            let out = assert_scan_is_pointwise(&cat, id, &g);
            assert_eq!(verdicts(&out, Verdict::Fails), 0, "{id}");
            assert!(verdicts(&out, Verdict::Holds) >= 90, "{id}");
            assert_eq!(out[31].params_text(), "n=0;spec=lucas:3,2");
        }
        let out = cat.scan("hanson_C", &grid(&[("n", (1..=50).collect())])).unwrap();
        assert_eq!(verdicts(&out, Verdict::Holds), 50);
        let out = cat
            .scan("nair_divisor", &grid(&[("k", vec![12]), ("l", (0..=13).collect())]))
            .unwrap();
        assert_eq!(verdicts(&out, Verdict::Holds), 12);
        assert_eq!(out[3].params_text(), "k=12;l=3");
    }
}
