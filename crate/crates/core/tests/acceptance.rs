//! Acceptance suite: one pass/fail line per criterion, each against its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lcm_core::bounds_catalog::{constants, Catalog, Grid, Params};
use lcm_core::exact_arith::{lcm_bigints, parse_decimal, valuation, Interval, Verdict};
use lcm_core::identities::{LCM_GCD_ROW, LCM_ROW_IDENTITY, LCM_WEIGHTED_ROW};
use lcm_core::quadratic_lcm::{
    bezout_coefficients, quadratic_scan, HC_MULTIPLE, OON_2N, QUADRATIC_DIVISOR, QUADRATIC_FAR,
    QUADRATIC_LOWER, QUADRATIC_NEAR,
};
use lcm_core::report::{params, BoundReport};
use lcm_core::sequences::{
    champions, extract_u, is_strong_divisibility, lcm_via_u, positive_terms, SequenceSpec, UMethod,
};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPECS: [&str; 5] = ["nat", "fib", "lucas:3,2", "qpow:2", "qpow:3"];

type Outcome = Result<String, String>;

fn grid(pairs: &[(&str, Vec<String>)]) -> Grid {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn ints(r: impl IntoIterator<Item = u64>) -> Vec<String> {
    r.into_iter().map(|v| v.to_string()).collect()
}

fn one(v: impl ToString) -> Vec<String> {
    vec![v.to_string()]
}

/// Verdict counts of a scan, run task by task so reports are not retained.
fn scan(cat: &Catalog, id: &str, pairs: &[(&str, Vec<String>)]) -> Result<Counts, String> {
    let err = |e: lcm_core::Error| format!("{id}: {e}");
    let mut c = Counts::default();
    for t in cat.plan(id, &grid(pairs)).map_err(err)? {
        c.extend(&cat.run(&t).map_err(err)?);
    }
    Ok(c)
}

#[derive(Default)]
struct Counts {
    holds: usize,
    fails: usize,
    inconclusive: usize,
    skipped: usize,
    first_fail: Option<String>,
    first_inconclusive: Option<String>,
    first_skip: Option<String>,
}

impl Counts {
    fn of(rs: &[BoundReport]) -> Counts {
        let mut c = Counts::default();
        c.extend(rs);
        c
    }

    fn extend(&mut self, rs: &[BoundReport]) {
        for r in rs {
            let (n, first) = match r.verdict {
                Verdict::Holds => (&mut self.holds, None),
                Verdict::Fails => (&mut self.fails, Some(&mut self.first_fail)),
                Verdict::Inconclusive => (&mut self.inconclusive, Some(&mut self.first_inconclusive)),
                Verdict::Skipped => (&mut self.skipped, Some(&mut self.first_skip)),
            };
            *n += 1;
            if let Some(f) = first {
                f.get_or_insert_with(|| r.to_string());
            }
        }
    }

    fn merge(mut self, o: Counts) -> Counts {
        self.holds += o.holds;
        self.fails += o.fails;
        self.inconclusive += o.inconclusive;
        self.skipped += o.skipped;
        self.first_fail = self.first_fail.or(o.first_fail);
        self.first_inconclusive = self.first_inconclusive.or(o.first_inconclusive);
        self.first_skip = self.first_skip.or(o.first_skip);
        self
    }
}

/// Every report HOLDS; with `windowed`, SKIPPED marks points outside the window.
fn require(label: &str, c: &Counts, windowed: bool) -> Outcome {
    let first = |f: &Option<String>| f.clone().unwrap_or_default();
    if c.fails > 0 {
        return Err(format!("{label}: {} FAILS, first: {}", c.fails, first(&c.first_fail)));
    }
    if c.inconclusive > 0 {
        return Err(format!("{label}: {} INCONCLUSIVE, first: {}", c.inconclusive, first(&c.first_inconclusive)));
    }
    if c.skipped > 0 && !windowed {
        return Err(format!("{label}: {} SKIPPED, first: {}", c.skipped, first(&c.first_skip)));
    }
    if c.holds == 0 {
        return Err(format!("{label}: nothing checked"));
    }
    if c.skipped > 0 {
        Ok(format!("{label} {} HOLDS ({} outside window)", c.holds, c.skipped))
    } else {
        Ok(format!("{label} {} HOLDS", c.holds))
    }
}

fn all(parts: Vec<Outcome>) -> Outcome {
    let mut ok = Vec::new();
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join("; "))
}

fn c01(cat: &Catalog) -> Outcome {
    require("hanson_3n", &scan(cat, "hanson_3n", &[("n", ints(1..=5000))])?, false)
}

fn c02(cat: &Catalog) -> Outcome {
    all(vec![
        require("nair_2n", &scan(cat, "nair_2n", &[("n", ints(7..=5000))])?, false),
        require("nair_4n", &scan(cat, "nair_4n", &[("n", ints(1..=5000))])?, false),
    ])
}

fn c03(cat: &Catalog) -> Outcome {
    let a = constants::chebyshev_a(cat.prec());
    let lo = parse_decimal("0.92129201").unwrap();
    let hi = parse_decimal("0.92129203").unwrap();
    if a.lo_rational() < lo || a.hi_rational() > hi {
        return Err(format!("A = {} is not within 1e-8 of 0.92129202", a.to_decimal(12)));
    }
    let psi = require("chebyshev_psi", &scan(cat, "chebyshev_psi", &[("x", ints(1..=100_000))])?, false)?;
    Ok(format!("A = {}; {psi}", a.to_decimal(10)))
}

fn c04(cat: &Catalog) -> Outcome {
    require("binomial_row_lcm", &scan(cat, "binomial_row_lcm", &[("n", ints(0..=2000))])?, false)
}

fn c05(cat: &Catalog) -> Outcome {
    let mut parts = Vec::new();
    for id in [LCM_ROW_IDENTITY, LCM_WEIGHTED_ROW, LCM_GCD_ROW] {
        let mut rs = Counts::default();
        for spec in SPECS {
            let out = scan(cat, id, &[("spec", one(spec)), ("n", ints(0..=300))])?;
            // every index from 1 is covered; n = 0 is the empty row
            if out.skipped > 1 || out.first_skip.as_deref().is_some_and(|r| !r.contains("n=0;")) {
                return Err(format!("{id}: unexpected skip {}", out.first_skip.unwrap_or_default()));
            }
            rs = rs.merge(out);
        }
        parts.push(require(id, &rs, true));
    }
    all(parts)
}

fn c06(cat: &Catalog) -> Outcome {
    let mut rs = Counts::default();
    for (p, n_max) in [(2, 500), (3, 500), (5, 500), (7, 300), (11, 300)] {
        rs = rs.merge(scan(cat, "kummer_legendre", &[("p", one(p)), ("n", ints(0..=n_max))])?);
    }
    require("kummer_legendre", &rs, false)
}

/// `a_n = ∏_{d | n} u_d` from `u_1..u_len`.
fn terms_from_u(u: &[u64]) -> Vec<u64> {
    (1..=u.len())
        .map(|n| (1..=n).filter(|d| n % d == 0).map(|d| u[d - 1]).product())
        .collect()
}

fn strong_divisibility_direct(a: &[u64]) -> bool {
    (1..=a.len()).all(|i| (i + 1..=a.len()).all(|j| a[i - 1].gcd(&a[j - 1]) == a[i.gcd(&j) - 1]))
}

fn incomparable_coprime(u: &[u64]) -> bool {
    (1..=u.len()).all(|i| (i + 1..=u.len()).all(|j| j % i == 0 || u[i - 1].gcd(&u[j - 1]) == 1))
}

fn c07(cat: &Catalog) -> Outcome {
    let n = 300;
    let mut champion_checks = 0;
    for spec in SPECS {
        let s: SequenceSpec = spec.parse().map_err(|e| format!("{spec}: {e}"))?;
        let terms = positive_terms(&s, n).map_err(|e| format!("{spec}: {e}"))?;
        let a = extract_u(&terms, UMethod::Moebius).map_err(|e| e.to_string())?;
        let b = extract_u(&terms, UMethod::Nowicki).map_err(|e| e.to_string())?;
        if a.u != b.u {
            return Err(format!("{spec}: Moebius and lcm-ratio u differ"));
        }
        for k in 1..=n {
            let via_u = lcm_via_u(&terms[..k]).map_err(|e| e.to_string())?;
            if via_u != lcm_bigints(&terms[..k]).map_err(|e| e.to_string())? {
                return Err(format!("{spec}: prod u differs from the lcm at n = {k}"));
            }
        }
        for &p in cat.table().primes_up_to(1000) {
            let got = champions(&terms, p).map_err(|e| e.to_string())?;
            let want: Vec<usize> = (1..=n).filter(|&m| valuation(&a.u[m - 1], p) > 0).collect();
            if got != want {
                return Err(format!("{spec}: champions of p = {p} differ from the support of u"));
            }
            champion_checks += 1;
        }
    }
    let mut lists = 0u64;
    let mut strong = 0u64;
    for len in 1..=5u32 {
        for code in 0..12u64.pow(len) {
            let mut c = code;
            let u: Vec<u64> = (0..len)
                .map(|_| {
                    let d = c % 12 + 1;
                    c /= 12;
                    d
                })
                .collect();
            let a = terms_from_u(&u);
            let direct = strong_divisibility_direct(&a);
            if direct != incomparable_coprime(&u) {
                return Err(format!("u = {u:?}: gcd test and u-coprimality disagree"));
            }
            let big: Vec<BigInt> = a.iter().map(|&v| BigInt::from(v)).collect();
            let lib = is_strong_divisibility(&big).map_err(|e| format!("u = {u:?}: {e}"))?;
            if lib.holds != direct {
                return Err(format!("u = {u:?}: library verdict differs"));
            }
            lists += 1;
            strong += u64::from(direct);
        }
    }
    Ok(format!(
        "u-extraction, lcm product and {champion_checks} champion sets agree on 5 specs to n = {n}; \
         {lists} u-lists ({strong} strongly divisible) agree"
    ))
}

fn c08(cat: &Catalog) -> Outcome {
    let mut rs = Counts::default();
    for spec in ["nat", "fib"] {
        rs = rs.merge(scan(cat, "myerson", &[("spec", one(spec)), ("n", ints(1..=500))])?);
    }
    require("myerson", &rs, false)
}

fn quad(cat: &Catalog, id: &str, cs: &[u64], n_max: u64) -> Result<Counts, String> {
    let ms: Vec<u64> = (1..=n_max).collect();
    let rs = quadratic_scan(id, cat.table(), cs, &ms, &ms, cat.prec()).map_err(|e| format!("{id}: {e}"))?;
    Ok(Counts::of(&rs))
}

fn c09(cat: &Catalog) -> Outcome {
    let cs: Vec<u64> = (1..=10).collect();
    let hc = require(HC_MULTIPLE, &quad(cat, HC_MULTIPLE, &cs, 150)?, false)?;
    let div = require(QUADRATIC_DIVISOR, &quad(cat, QUADRATIC_DIVISOR, &cs, 150)?, false)?;
    let mut pairs = 0;
    for c in 1..=5 {
        for k in 0..=20 {
            let b = bezout_coefficients(c, k).map_err(|e| format!("c={c}, k={k}: {e}"))?;
            if !b.residual_holds() {
                return Err(format!("residual identity fails at c={c}, k={k}"));
            }
            for n in -10..=40 {
                if !b.bezout_identity_at(n).map_err(|e| e.to_string())? {
                    return Err(format!("integer Bezout identity fails at c={c}, k={k}, n={n}"));
                }
            }
            pairs += 1;
        }
    }
    Ok(format!("{hc}; {div}; Bezout residual and integer identity at {pairs} (c, k)"))
}

fn c10(cat: &Catalog) -> Outcome {
    let mut oon = Vec::new();
    for c in [1, 5] {
        for n in 1..=500u64 {
            let p: Params = params(&[("c", c), ("m", n.div_ceil(2)), ("n", n)]);
            oon.push(cat.check(OON_2N, &p).map_err(|e| e.to_string())?);
        }
    }
    let mut parts = vec![require(OON_2N, &Counts::of(&oon), false)];
    for id in [QUADRATIC_LOWER, QUADRATIC_FAR, QUADRATIC_NEAR] {
        parts.push(require(id, &quad(cat, id, &[1, 2], 500)?, id != QUADRATIC_LOWER));
    }
    all(parts)
}

fn coprime_pairs(max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for u0 in 1..=max {
        for r in 1..=max {
            if u0.gcd(&r) == 1 {
                out.push((u0, r));
            }
        }
    }
    out
}

fn c11(cat: &Catalog) -> Outcome {
    let mut div = Counts::default();
    let mut hong = Counts::default();
    for (u0, r) in coprime_pairs(10) {
        let g = [("u0", one(u0)), ("r", one(r)), ("n", ints(0..=200))];
        div = div.merge(scan(cat, "ap_divisor", &g)?);
        hong = hong.merge(scan(cat, "hong_ap", &g)?);
    }
    let mut upper = Counts::default();
    let mut upper_prime = Counts::default();
    for b in 2..=50u64 {
        let g = [("a", one(1)), ("b", one(b)), ("n", ints(b + 1..=b + 200))];
        upper = upper.merge(scan(cat, "ap_upper", &g)?);
        if b <= 47 && cat.table().is_prime(b).unwrap() {
            upper_prime = upper_prime.merge(scan(cat, "ap_upper_prime", &g)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut large = Vec::new();
    while large.len() < 100 {
        let (a, b, n) = (rng.random_range(1..=50u64), rng.random_range(1..=50u64), rng.random_range(1..=200u64));
        if a.gcd(&b) == 1 {
            let p: Params = params(&[("a", a), ("b", b), ("n", n)]);
            large.push(cat.check("ap_large_primes", &p).map_err(|e| e.to_string())?);
        }
    }
    all(vec![
        require("ap_divisor", &div, false),
        require("hong_ap", &hong, false),
        require("ap_upper", &upper, false),
        require("ap_upper_prime", &upper_prime, false),
        require("ap_large_primes", &Counts::of(&large), false),
    ])
}

fn c12(cat: &Catalog) -> Outcome {
    require("M_sandwich", &scan(cat, "M_sandwich", &[("r", ints(2..=2000))])?, false)
}

fn c13(cat: &Catalog) -> Outcome {
    all(vec![
        require("n2plus1_square_divisor", &scan(cat, "n2plus1_square_divisor", &[("n", ints(1..=500))])?, false),
        require("n2plus1_large_primes", &scan(cat, "n2plus1_large_primes", &[("n", ints(2..=500))])?, false),
        require("factorial_3mod4", &scan(cat, "factorial_3mod4", &[("n", ints(1000..=2000))])?, false),
        require("n2plus1_sandwich", &scan(cat, "n2plus1_sandwich", &[("n", ints(2..=2000))])?, false),
    ])
}

fn c14(cat: &Catalog) -> Outcome {
    let mut rs = Counts::default();
    for (p, q) in [(1, -1), (3, 2), (2, -1), (4, 1), (5, 6)] {
        rs = rs.merge(scan(cat, "lucas_sandwich", &[("p", one(p)), ("q", one(q)), ("n", ints(1..=200))])?);
    }
    all(vec![
        require("lucas_sandwich", &rs, false),
        require("fib_sandwich", &scan(cat, "fib_sandwich", &[("n", ints(1..=300))])?, false),
    ])
}

fn c15(cat: &Catalog) -> Outcome {
    all(vec![
        require("bennett_check", &scan(cat, "bennett_check", &[("x", ints(1000..=1_000_000))])?, false),
        require("hanson_pi", &scan(cat, "hanson_pi", &[("x", ints(2..=1_000_000))])?, false),
    ])
}

fn ratios(cat: &Catalog, id: &str, points: &[u64]) -> Result<(Vec<Interval>, Interval), String> {
    let s = cat.probe(id, &Params::new(), points).map_err(|e| format!("{id}: {e}"))?;
    Ok((s.points.iter().map(|p| p.ratio.clone()).collect(), s.target))
}

fn c16(cat: &Catalog) -> Outcome {
    let q = |s: &str| Interval::from_decimal(s, cat.prec()).unwrap();
    let (pnt, _) = ratios(cat, "pnt", &[1_000_000])?;
    if !(q("0.97").certainly_le(&pnt[0]) && pnt[0].certainly_le(&q("1.03"))) {
        return Err(format!("pnt ratio {} outside [0.97, 1.03]", pnt[0].to_decimal(8)));
    }
    let (bat, _) = ratios(cat, "bateman", &[100_000])?;
    if !(q("2.025").certainly_le(&bat[0]) && bat[0].certainly_le(&q("2.475"))) {
        return Err(format!("bateman ratio {} not within 10% of 2.25", bat[0].to_decimal(8)));
    }
    let (mat, target) = ratios(cat, "matiyasevich", &[300, 3000])?;
    let lo = &mat[1];
    if !(lo.certainly_gt(&q("0.25")) && q("0.34").certainly_gt(lo)) {
        return Err(format!("matiyasevich ratio {} at 3000 outside (0.25, 0.34)", lo.to_decimal(8)));
    }
    let d300 = (&mat[0] - &target).abs();
    let d3000 = (&mat[1] - &target).abs();
    if !d300.certainly_gt(&d3000) {
        return Err("matiyasevich ratio at 3000 is not closer to 3/pi^2 than at 300".into());
    }
    Ok(format!(
        "pnt {} at 1e6; bateman {} at 1e5; matiyasevich {} at 300, {} at 3000",
        pnt[0].to_decimal(6),
        bat[0].to_decimal(6),
        mat[0].to_decimal(6),
        mat[1].to_decimal(6)
    ))
}

type Criterion = (&'static str, u64, fn(&Catalog) -> Outcome);

const CRITERIA: [Criterion; 16] = [
    ("hanson lcm(1..n) <= 3^n", 30, c01),
    ("nair 2^n <= lcm(1..n) <= 4^n", 30, c02),
    ("chebyshev psi bounds", 60, c03),
    ("binomial row lcm identity", 60, c04),
    ("general lcm row identities", 120, c05),
    ("kummer vs legendre", 30, c06),
    ("strong divisibility machinery", 120, c07),
    ("myerson divisor", 60, c08),
    ("quadratic exact layer", 300, c09),
    ("quadratic lower bounds", 120, c10),
    ("arithmetic progressions", 300, c11),
    ("M(r) sandwich", 30, c12),
    ("lcm of n^2 + 1", 300, c13),
    ("lucas sequence bounds", 60, c14),
    ("bennett and hanson pi", 120, c15),
    ("asymptotic probes", 300, c16),
];

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let cat = Catalog::default();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, budget, f)) in CRITERIA.iter().enumerate() {
        let no = format!("{:02}", i + 1);
        if !filter.is_empty() && !filter.contains(&no) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = f(&cat);
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(s) if took > Duration::from_secs(*budget) => Err(format!("over budget; {s}")),
            o => o,
        };
        let (tag, text) = match &outcome {
            Ok(s) => ("PASS", s),
            Err(s) => ("FAIL", s),
        };
        println!("[{tag}] {no} {name} ({:.1} s, budget {budget} s): {text}", took.as_secs_f64());
        failed += usize::from(outcome.is_err());
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
