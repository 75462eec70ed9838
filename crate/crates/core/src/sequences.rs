//! Sequence families, strong divisibility, u-decompositions, champions and
//! the Myerson divisor.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::exact_arith::{lcm_step, product_tree, valuation};

pub const SYLVESTER_CAP: usize = 8;

/// A sequence family in its canonical text form (`nat`, `ap:1,4`, `quad:1`,
/// `quadg:2,1,0`, `lucas:3,2`, `fib`, `qpow:2`, `poly:1,0,1`, `list:2,3,5`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SequenceSpec {
    Naturals,
    /// `u_k = u0 + k·r`, indexed from 0.
    Arithmetic { u0: u64, r: u64 },
    /// `k² + c`, indexed from 1.
    Quadratic { c: u64 },
    /// `a·k(k+t) + b`, indexed from 0.
    QuadraticGeneral { a: u64, b: u64, t: u64 },
    /// `U_0 = 0, U_1 = 1, U_{n+2} = P·U_{n+1} − Q·U_n`, indexed from 1.
    Lucas { p: i64, q: i64 },
    /// `[n]_q = (qⁿ − 1)/(q − 1)`, indexed from 1.
    QPower { q: u64 },
    /// `f(k)` for coefficients in ascending degree order, indexed from 1.
    Polynomial { coeffs: Vec<u64> },
    Explicit { terms: Vec<BigInt> },
}

impl SequenceSpec {
    pub fn fibonacci() -> SequenceSpec {
        SequenceSpec::Lucas { p: 1, q: -1 }
    }

    /// True when terms are indexed from 0.
    pub fn zero_based(&self) -> bool {
        matches!(
            self,
            SequenceSpec::Arithmetic { .. } | SequenceSpec::QuadraticGeneral { .. }
        )
    }

    /// Families known to be strong divisibility sequences (after taking
    /// absolute values).
    pub fn is_strong_divisibility_family(&self) -> bool {
        match self {
            SequenceSpec::Naturals | SequenceSpec::QPower { .. } => true,
            SequenceSpec::Lucas { p, q } => {
                num_integer::gcd(*p, *q) == 1 && !lucas_degenerate(*p, *q)
            }
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SequenceSpec::Arithmetic { u0, r } if *u0 == 0 || *r == 0 => {
                domain("arithmetic progression needs u0 >= 1 and r >= 1")
            }
            SequenceSpec::Quadratic { c: 0 } => domain("quadratic family needs c >= 1"),
            SequenceSpec::QuadraticGeneral { a, b, .. } if *a == 0 || *b == 0 => {
                domain("quadratic family needs a >= 1 and b >= 1")
            }
            SequenceSpec::Lucas { p, q } if *p == 0 || *q == 0 => {
                domain("Lucas parameters must be non-zero")
            }
            SequenceSpec::QPower { q } if *q < 2 => domain("q must be at least 2"),
            SequenceSpec::Polynomial { coeffs } => {
                if coeffs.iter().skip(1).all(|&c| c == 0) {
                    domain("polynomial must be non-constant")
                } else {
                    Ok(())
                }
            }
            SequenceSpec::Explicit { terms } => {
                if terms.iter().any(|t| !t.is_positive()) {
                    domain("explicit terms must be positive")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

fn lucas_degenerate(p: i64, q: i64) -> bool {
    // U_n vanishes for some n >= 1 exactly when α/β is a root of unity
    p * p == q || p * p == 2 * q || p * p == 3 * q
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<T>()
                .map_err(|_| Error::Parse(format!("bad {what} parameter `{x}`")))
        })
        .collect()
}

fn need<'a>(tag: &str, args: Option<&'a str>) -> Result<&'a str> {
    args.ok_or_else(|| Error::Parse(format!("`{tag}` needs parameters")))
}

fn expect_len<T>(v: Vec<T>, n: usize, tag: &str) -> Result<Vec<T>> {
    if v.len() != n {
        return Err(Error::Parse(format!("`{tag}` takes {n} parameters")));
    }
    Ok(v)
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<SequenceSpec> {
        let s = s.trim();
        let (tag, args) = match s.split_once(':') {
            Some((t, a)) => (t, Some(a)),
            None => (s, None),
        };
        let spec = match tag {
            "nat" => SequenceSpec::Naturals,
            "fib" => SequenceSpec::fibonacci(),
            "ap" => {
                let v = expect_len(parse_list::<u64>(need(tag, args)?, tag)?, 2, tag)?;
                SequenceSpec::Arithmetic { u0: v[0], r: v[1] }
            }
            "quad" => {
                let v = expect_len(parse_list::<u64>(need(tag, args)?, tag)?, 1, tag)?;
                SequenceSpec::Quadratic { c: v[0] }
            }
            "quadg" => {
                let v = expect_len(parse_list::<u64>(need(tag, args)?, tag)?, 3, tag)?;
                SequenceSpec::QuadraticGeneral { a: v[0], b: v[1], t: v[2] }
            }
            "lucas" => {
                let v = expect_len(parse_list::<i64>(need(tag, args)?, tag)?, 2, tag)?;
                SequenceSpec::Lucas { p: v[0], q: v[1] }
            }
            "qpow" => {
                let v = expect_len(parse_list::<u64>(need(tag, args)?, tag)?, 1, tag)?;
                SequenceSpec::QPower { q: v[0] }
            }
            "poly" => SequenceSpec::Polynomial {
                coeffs: parse_list::<u64>(need(tag, args)?, tag)?,
            },
            "list" => SequenceSpec::Explicit {
                terms: parse_list::<BigInt>(need(tag, args)?, tag)?,
            },
            _ => return Err(Error::Parse(format!("unknown sequence family `{tag}`"))),
        };
        if args.is_some() && matches!(tag, "nat" | "fib") {
            return Err(Error::Parse(format!("`{tag}` takes no parameters")));
        }
        spec.validate().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(spec)
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Naturals => write!(f, "nat"),
            SequenceSpec::Lucas { p: 1, q: -1 } => write!(f, "fib"),
            SequenceSpec::Arithmetic { u0, r } => write!(f, "ap:{u0},{r}"),
            SequenceSpec::Quadratic { c } => write!(f, "quad:{c}"),
            SequenceSpec::QuadraticGeneral { a, b, t } => write!(f, "quadg:{a},{b},{t}"),
            SequenceSpec::Lucas { p, q } => write!(f, "lucas:{p},{q}"),
            SequenceSpec::QPower { q } => write!(f, "qpow:{q}"),
            SequenceSpec::Polynomial { coeffs } => write!(f, "poly:{}", join(coeffs)),
            SequenceSpec::Explicit { terms } => write!(f, "list:{}", join(terms)),
        }
    }
}

/// Terms of the family: `a_1..a_n` for 1-based families, `u_0..u_n` for
/// 0-based ones. Lucas terms keep their sign.
pub fn generate(spec: &SequenceSpec, n: usize) -> Result<Vec<BigInt>> {
    if n == 0 {
        return domain("n must be positive");
    }
    spec.validate()?;
    let out = match spec {
        SequenceSpec::Naturals => (1..=n as u64).map(BigInt::from).collect(),
        SequenceSpec::Arithmetic { u0, r } => (0..=n as u64)
            .map(|k| BigInt::from(*u0) + BigInt::from(*r) * k)
            .collect(),
        SequenceSpec::Quadratic { c } => (1..=n as u64)
            .map(|k| BigInt::from(k) * k + c)
            .collect(),
        SequenceSpec::QuadraticGeneral { a, b, t } => (0..=n as u64)
            .map(|k| BigInt::from(*a) * k * (k + t) + b)
            .collect(),
        SequenceSpec::Lucas { p, q } => lucas_terms(*p, *q, n),
        SequenceSpec::QPower { q } => {
            let mut out = Vec::with_capacity(n);
            let mut acc = BigInt::zero();
            let mut pw = BigInt::one();
            for _ in 0..n {
                acc += &pw;
                pw *= *q;
                out.push(acc.clone());
            }
            out
        }
        SequenceSpec::Polynomial { coeffs } => (1..=n as u64)
            .map(|k| {
                coeffs
                    .iter()
                    .rev()
                    .fold(BigInt::zero(), |acc, &c| acc * k + c)
            })
            .collect(),
        SequenceSpec::Explicit { terms } => {
            if terms.len() < n {
                return Err(Error::Range(format!(
                    "explicit list has only {} terms",
                    terms.len()
                )));
            }
            terms[..n].to_vec()
        }
    };
    Ok(out)
}

/// Absolute values of the generated terms; a zero term is a domain error.
pub fn positive_terms(spec: &SequenceSpec, n: usize) -> Result<Vec<BigInt>> {
    let terms = generate(spec, n)?;
    if let Some(i) = terms.iter().position(|t| t.is_zero()) {
        let idx = if spec.zero_based() { i } else { i + 1 };
        return domain(format!("term {idx} of {spec} is zero"));
    }
    Ok(terms.into_iter().map(|t| t.abs()).collect())
}

fn lucas_terms(p: i64, q: i64, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n);
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        out.push(cur.clone());
        let next = &cur * p - &prev * q;
        prev = std::mem::replace(&mut cur, next);
    }
    out
}

/// `U_n` from `(P + √Δ)ⁿ = x + y√Δ`, giving `U_n = y / 2^{n−1}`.
pub fn lucas_closed_form(p: i64, q: i64, n: u32) -> Result<BigInt> {
    let d: BigInt = BigInt::from(p) * p - BigInt::from(q) * 4;
    if d.is_zero() {
        return domain("closed form needs a non-zero discriminant");
    }
    if n == 0 {
        return Ok(BigInt::zero());
    }
    let (mut x, mut y) = (BigInt::one(), BigInt::zero());
    let bp = BigInt::from(p);
    for _ in 0..n {
        let nx = &x * &bp + &y * &d;
        let ny = &x + &y * &bp;
        x = nx;
        y = ny;
    }
    let den = BigInt::one() << (n - 1);
    let (quo, rem) = y.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::Invariant("closed form is not integral".into()));
    }
    Ok(quo)
}

/// The first `count` Sylvester numbers `2, 3, 7, 43, …`.
pub fn sylvester(count: usize) -> Result<Vec<BigInt>> {
    if count == 0 {
        return domain("count must be positive");
    }
    if count > SYLVESTER_CAP {
        return Err(Error::Range(format!("at most {SYLVESTER_CAP} Sylvester terms")));
    }
    let mut out = vec![BigInt::from(2)];
    let mut prod = BigInt::from(2);
    while out.len() < count {
        let next = &prod + 1;
        prod *= &next;
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UMethod {
    Moebius,
    Nowicki,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UDecomposition {
    pub u: Vec<BigInt>,
    pub source: UMethod,
}

/// Möbius function for small arguments.
pub fn moebius(n: u64) -> i8 {
    let mut m = n;
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

fn distinct_prime_factors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn require_positive(terms: &[BigInt]) -> Result<()> {
    if terms.is_empty() {
        return domain("sequence must be non-empty");
    }
    if terms.iter().any(|t| !t.is_positive()) {
        return domain("terms must be positive");
    }
    Ok(())
}

/// Möbius-inversion `u_n` as exact rationals, without integrality checks.
fn moebius_rational(terms: &[BigInt]) -> Vec<BigRational> {
    (1..=terms.len())
        .map(|n| {
            let mut num = Vec::new();
            let mut den = Vec::new();
            for d in divisors(n) {
                match moebius(d as u64) {
                    1 => num.push(terms[n / d - 1].clone()),
                    -1 => den.push(terms[n / d - 1].clone()),
                    _ => {}
                }
            }
            BigRational::new(product_tree(&num), product_tree(&den))
        })
        .collect()
}

/// The u-decomposition `a_n = ∏_{d|n} u_d` of a strong divisibility sequence.
pub fn extract_u(terms: &[BigInt], method: UMethod) -> Result<UDecomposition> {
    require_positive(terms)?;
    let u = match method {
        UMethod::Moebius => moebius_rational(terms)
            .into_iter()
            .enumerate()
            .map(|(i, q)| {
                if q.is_integer() {
                    Ok(q.to_integer())
                } else {
                    Err(Error::NotStrongDivisibility(format!(
                        "u_{} = {q} is not an integer",
                        i + 1
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()?,
        UMethod::Nowicki => {
            let mut acc = BigInt::one();
            let mut u = Vec::with_capacity(terms.len());
            for a in terms {
                let next = lcm_step(&acc, a);
                u.push(&next / &acc);
                acc = next;
            }
            for n in 1..=terms.len() {
                let prod = product_tree(
                    &divisors(n).iter().map(|&d| u[d - 1].clone()).collect::<Vec<_>>(),
                );
                if prod != terms[n - 1] {
                    return Err(Error::NotStrongDivisibility(format!(
                        "a_{n} differs from the product of c_d over d | {n}"
                    )));
                }
            }
            u
        }
    };
    Ok(UDecomposition { u, source: method })
}

/// `u_n = a_n / lcm(a_{n/q} : q prime, q | n)`.
pub fn u_by_prime_divisors(terms: &[BigInt]) -> Result<Vec<BigInt>> {
    require_positive(terms)?;
    (1..=terms.len())
        .map(|n| {
            let mut l = BigInt::one();
            for q in distinct_prime_factors(n as u64) {
                l = lcm_step(&l, &terms[n / q as usize - 1]);
            }
            let (quo, rem) = terms[n - 1].div_rem(&l);
            if rem.is_zero() {
                Ok(quo)
            } else {
                Err(Error::NotStrongDivisibility(format!(
                    "a_{n} is not a multiple of its predecessors' lcm"
                )))
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongDivisibility {
    pub holds: bool,
    /// First index pair `(i, j)`, `i < j`, with `gcd(a_i, a_j) ≠ a_{gcd(i,j)}`.
    pub witness: Option<(usize, usize)>,
}

fn direct_strong_divisibility(terms: &[BigInt]) -> Option<(usize, usize)> {
    let n = terms.len();
    for i in 1..=n {
        for j in i + 1..=n {
            let g = terms[i - 1].gcd(&terms[j - 1]);
            if g != terms[i.gcd(&j) - 1] {
                return Some((i, j));
            }
        }
    }
    None
}

/// Strong divisibility via integral u with coprime entries at incomparable
/// indices.
pub fn u_criterion(terms: &[BigInt]) -> bool {
    let u = moebius_rational(terms);
    if u.iter().any(|q| !q.is_integer()) {
        return false;
    }
    let u: Vec<BigInt> = u.into_iter().map(|q| q.to_integer()).collect();
    let n = u.len();
    for i in 1..=n {
        for j in i + 1..=n {
            if j % i != 0 && !u[i - 1].gcd(&u[j - 1]).is_one() {
                return false;
            }
        }
    }
    true
}

/// Tests `gcd(a_i, a_j) = a_{gcd(i,j)}` for all index pairs and cross-checks
/// the verdict against [`u_criterion`].
pub fn is_strong_divisibility(terms: &[BigInt]) -> Result<StrongDivisibility> {
    require_positive(terms)?;
    let witness = direct_strong_divisibility(terms);
    let holds = witness.is_none();
    if holds != u_criterion(terms) {
        return Err(Error::Invariant(
            "direct and u-criterion strong divisibility tests disagree".into(),
        ));
    }
    Ok(StrongDivisibility { holds, witness })
}

/// Champion indices for `p`: `m` is a champion when `ϑ_p(a_m)` exceeds every
/// earlier valuation (for `m = 1`, when `ϑ_p(a_1) > 0`).
pub fn champions(terms: &[BigInt], p: u64) -> Result<Vec<usize>> {
    require_positive(terms)?;
    let vals: Vec<u32> = terms.iter().map(|a| valuation(a, p)).collect();
    let mut out = Vec::new();
    if vals[0] > 0 {
        out.push(1);
    }
    let mut best = vals[0];
    for (i, &v) in vals.iter().enumerate().skip(1) {
        if v > best {
            out.push(i + 1);
            best = v;
        }
    }
    Ok(out)
}

/// `lcm(a_1..a_n)` as the product of the u-decomposition.
pub fn lcm_via_u(terms: &[BigInt]) -> Result<BigInt> {
    let d = extract_u(terms, UMethod::Nowicki)?;
    Ok(product_tree(&d.u))
}

/// `(a_1⋯a_n) / ∏_j ∏_{k ≤ n/b_j} a_k`.
pub fn myerson_divisor(terms: &[BigInt], b: &[BigInt], n: usize) -> Result<BigRational> {
    require_positive(terms)?;
    if n == 0 || n > terms.len() {
        return domain(format!("n must lie in 1..={}", terms.len()));
    }
    check_reciprocal_sum(b)?;
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(BigInt::one());
    for a in &terms[..n] {
        let next = prefix.last().unwrap() * a;
        prefix.push(next);
    }
    Ok(myerson_from_prefix(&prefix, b, n))
}

pub(crate) fn check_reciprocal_sum(b: &[BigInt]) -> Result<()> {
    if b.iter().any(|x| !x.is_positive()) {
        return domain("b entries must be positive");
    }
    let s = b
        .iter()
        .fold(BigRational::zero(), |acc, x| acc + BigRational::new(BigInt::one(), x.clone()));
    if s > BigRational::one() {
        return Err(Error::Precondition(format!("reciprocal sum {s} exceeds 1")));
    }
    Ok(())
}

/// Myerson quotient from prefix products `prefix[k] = a_1⋯a_k`.
pub(crate) fn myerson_from_prefix(prefix: &[BigInt], b: &[BigInt], n: usize) -> BigRational {
    let nb = BigInt::from(n);
    let den: Vec<BigInt> = b
        .iter()
        .map(|bj| {
            let k: usize = (&nb / bj).try_into().unwrap_or(usize::MAX).min(n);
            prefix[k].clone()
        })
        .collect();
    BigRational::new(prefix[n].clone(), product_tree(&den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::lcm_bigints;
    use proptest::prelude::*;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn lucas(p: i64, q: i64) -> SequenceSpec {
        SequenceSpec::Lucas { p, q }
    }

    #[test]
    fn generate_examples() {
        assert_eq!(generate(&lucas(1, -1), 6).unwrap(), big(&[1, 1, 2, 3, 5, 8]));
        assert_eq!(generate(&lucas(3, 2), 4).unwrap(), big(&[1, 3, 7, 15]));
        assert_eq!(
            generate(&lucas(3, 2), 10).unwrap(),
            generate(&SequenceSpec::QPower { q: 2 }, 10).unwrap()
        );
        assert_eq!(generate(&SequenceSpec::Quadratic { c: 1 }, 3).unwrap(), big(&[2, 5, 10]));
        assert_eq!(
            generate(&SequenceSpec::Arithmetic { u0: 1, r: 4 }, 3).unwrap(),
            big(&[1, 5, 9, 13])
        );
        assert_eq!(
            generate(&SequenceSpec::QuadraticGeneral { a: 2, b: 1, t: 1 }, 2).unwrap(),
            big(&[1, 5, 13])
        );
        assert_eq!(
            generate(&SequenceSpec::Polynomial { coeffs: vec![1, 0, 1] }, 3).unwrap(),
            big(&[2, 5, 10])
        );
        assert_eq!(generate(&SequenceSpec::QPower { q: 3 }, 3).unwrap(), big(&[1, 4, 13]));
        assert!(generate(&SequenceSpec::Naturals, 0).is_err());
        assert!(positive_terms(&lucas(1, 1), 5).is_err());
    }

    #[test]
    fn spec_text_round_trip() {
        for s in ["nat", "fib", "ap:1,4", "quad:1", "quadg:2,1,0", "lucas:3,2", "qpow:2", "poly:1,0,1", "list:2,3,5"] {
            let spec: SequenceSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("lucas:1,-1".parse::<SequenceSpec>().unwrap(), SequenceSpec::fibonacci());
        for bad in ["", "nat:1", "ap:1", "quad:0", "qpow:1", "lucas:0,1", "poly:3", "list:1,-2", "zeta:2"] {
            assert!(bad.parse::<SequenceSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn lucas_closed_form_matches_recurrence() {
        for (p, q) in [(1, -1), (3, 2), (2, -1), (4, 1), (5, 6), (1, -3), (6, 5), (7, -2)] {
            let rec = generate(&lucas(p, q), 50).unwrap();
            for n in 1..=50u32 {
                assert_eq!(lucas_closed_form(p, q, n).unwrap(), rec[n as usize - 1], "{p},{q},{n}");
            }
        }
        assert!(lucas_closed_form(2, 1, 3).is_err());
    }

    #[test]
    fn sylvester_examples_and_identities() {
        assert_eq!(sylvester(4).unwrap(), big(&[2, 3, 7, 43]));
        assert_eq!(sylvester(5).unwrap(), big(&[2, 3, 7, 43, 1807]));
        assert_eq!(sylvester(1).unwrap(), big(&[2]));
        assert!(sylvester(9).is_err());
        let s = sylvester(8).unwrap();
        let mut sum = BigRational::zero();
        let mut prod = BigInt::one();
        for (i, b) in s.iter().enumerate() {
            if i > 0 {
                let prev = &s[i - 1];
                assert_eq!(b, &(prev * prev - prev + 1));
                assert_eq!(b, &(&prod + 1));
            }
            sum += BigRational::new(BigInt::one(), b.clone());
            prod *= b;
            assert_eq!(&sum + BigRational::new(BigInt::one(), prod.clone()), BigRational::one());
        }
    }

    #[test]
    fn u_examples() {
        let nat = generate(&SequenceSpec::Naturals, 8).unwrap();
        let want = big(&[1, 2, 3, 2, 5, 1, 7, 2]);
        assert_eq!(extract_u(&nat, UMethod::Moebius).unwrap().u, want);
        assert_eq!(extract_u(&nat, UMethod::Nowicki).unwrap().u, want);
        let fib = generate(&lucas(1, -1), 6).unwrap();
        assert_eq!(extract_u(&fib, UMethod::Nowicki).unwrap().u, big(&[1, 1, 2, 3, 5, 4]));
        assert_eq!(u_by_prime_divisors(&fib).unwrap(), big(&[1, 1, 2, 3, 5, 4]));
        let q2 = generate(&SequenceSpec::QPower { q: 2 }, 4).unwrap();
        assert_eq!(extract_u(&q2, UMethod::Moebius).unwrap().u, big(&[1, 3, 7, 5]));
        let bad = big(&[2, 4, 8, 16]);
        assert!(extract_u(&bad, UMethod::Nowicki).is_err());
        assert!(matches!(
            extract_u(&big(&[2, 3]), UMethod::Moebius),
            Err(Error::NotStrongDivisibility(_))
        ));
    }

    #[test]
    fn strong_divisibility_examples() {
        let r = is_strong_divisibility(&big(&[2, 4, 8, 16])).unwrap();
        assert_eq!(r, StrongDivisibility { holds: false, witness: Some((2, 3)) });
        let fib = generate(&lucas(1, -1), 20).unwrap();
        assert!(is_strong_divisibility(&fib).unwrap().holds);
        for k in 1..=6 {
            assert!(is_strong_divisibility(&fib[..k]).unwrap().holds);
        }
    }

    #[test]
    fn champion_examples() {
        let nat = generate(&SequenceSpec::Naturals, 10).unwrap();
        assert_eq!(champions(&nat, 2).unwrap(), vec![2, 4, 8]);
        assert_eq!(champions(&nat, 13).unwrap(), Vec::<usize>::new());
        let fib = generate(&lucas(1, -1), 12).unwrap();
        assert_eq!(champions(&fib, 2).unwrap(), vec![3, 6, 12]);
        assert_eq!(champions(&big(&[6, 6]), 3).unwrap(), vec![1]);
    }

    #[test]
    fn lcm_via_u_examples() {
        assert_eq!(lcm_via_u(&generate(&SequenceSpec::Naturals, 6).unwrap()).unwrap(), BigInt::from(60));
        assert_eq!(lcm_via_u(&generate(&lucas(1, -1), 6).unwrap()).unwrap(), BigInt::from(120));
        assert_eq!(lcm_via_u(&big(&[17])).unwrap(), BigInt::from(17));
    }

    #[test]
    fn myerson_examples() {
        let b = sylvester(5).unwrap();
        let nat = generate(&SequenceSpec::Naturals, 10).unwrap();
        assert_eq!(myerson_divisor(&nat, &b, 6).unwrap(), BigRational::from_integer(60.into()));
        let q10 = myerson_divisor(&nat, &b, 10).unwrap();
        // 10!/(5!·3!·1!) = 5040, a multiple of lcm(1..10) = 2520
        assert_eq!(q10, BigRational::from_integer(5040.into()));
        let fib = generate(&lucas(1, -1), 8).unwrap();
        let q = myerson_divisor(&fib, &b, 8).unwrap();
        assert!(q.is_integer());
        assert!((q.to_integer() % BigInt::from(840)).is_zero());
        assert!(matches!(
            myerson_divisor(&nat, &big(&[2, 2, 3]), 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn moebius_values() {
        let want = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (i, &w) in want.iter().enumerate() {
            assert_eq!(moebius(i as u64 + 1), w);
        }
    }

    #[test]
    fn strong_divisibility_families_agree_on_all_routes() {
        let specs = [
            SequenceSpec::Naturals,
            lucas(1, -1),
            lucas(3, 2),
            SequenceSpec::QPower { q: 2 },
            SequenceSpec::QPower { q: 3 },
        ];
        for spec in &specs {
            let a = positive_terms(spec, 80).unwrap();
            let m = extract_u(&a, UMethod::Moebius).unwrap().u;
            let w = extract_u(&a, UMethod::Nowicki).unwrap().u;
            assert_eq!(m, w, "{spec}");
            assert_eq!(u_by_prime_divisors(&a).unwrap(), w);
            assert_eq!(lcm_via_u(&a).unwrap(), lcm_bigints(&a).unwrap());
            for p in [2, 3, 5, 7, 11] {
                let ch = champions(&a, p).unwrap();
                let pos: Vec<usize> = (1..=a.len()).filter(|&i| valuation(&w[i - 1], p) > 0).collect();
                assert_eq!(ch, pos, "{spec} p={p}");
                for pair in ch.windows(2) {
                    assert_eq!(pair[1] % pair[0], 0);
                }
            }
        }
    }

    fn build_from_u(u: &[u64]) -> Vec<BigInt> {
        (1..=u.len())
            .map(|n| (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(u[d - 1])).product())
            .collect()
    }

    proptest! {
        #[test]
        fn u_criterion_equivalence(u in proptest::collection::vec(1u64..=20, 1..=6)) {
            let a = build_from_u(&u);
            let direct = direct_strong_divisibility(&a).is_none();
            let mut coprime = true;
            for i in 1..=u.len() {
                for j in i + 1..=u.len() {
                    if j % i != 0 && num_integer::gcd(u[i - 1], u[j - 1]) != 1 {
                        coprime = false;
                    }
                }
            }
            prop_assert_eq!(direct, coprime);
            prop_assert_eq!(is_strong_divisibility(&a).unwrap().holds, coprime);
        }
    }
}
