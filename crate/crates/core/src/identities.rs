//! Generalized binomial coefficients over strong divisibility sequences and
//! the exact lcm identities built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{domain, Error, Result};
use crate::exact_arith::{lcm_bigints, product_tree, CoprimeBasis, FactoredInteger};
use crate::prime_toolkit::{legendre, PrimeTable};
use crate::report::{params, short_int, BoundReport};
use crate::sequences::{extract_u, positive_terms, sylvester, SequenceSpec, UMethod, SYLVESTER_CAP};

pub const BINOMIAL_ROW_LCM: &str = "binomial_row_lcm";
pub const LCM_ROW_IDENTITY: &str = "lcm_row_identity";
pub const LCM_WEIGHTED_ROW: &str = "lcm_weighted_row";
pub const LCM_GCD_ROW: &str = "lcm_gcd_row";
pub const HANSON_C: &str = "hanson_C";
pub const NAIR_DIVISOR: &str = "nair_divisor";

/// Row `C_a(n,0) … C_a(n,n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ABinomialRow {
    pub spec: SequenceSpec,
    pub n: usize,
    pub coeffs: Vec<BigInt>,
}

fn one_based_terms(spec: &SequenceSpec, n: usize) -> Result<Vec<BigInt>> {
    if spec.zero_based() {
        return domain(format!("{spec} is indexed from 0; a-binomials need a_1, a_2, …"));
    }
    positive_terms(spec, n.max(1))
}

fn prefix_products(terms: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(terms.len() + 1);
    out.push(BigInt::one());
    for a in terms {
        let next = out.last().unwrap() * a;
        out.push(next);
    }
    out
}

fn exact_quotient(num: &BigInt, den: &BigInt, what: impl FnOnce() -> String) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::NotStrongDivisibility(format!("{} is not an integer", what())))
    }
}

/// `d` contributes `u_d` to `C_a(n,k)` exactly when
/// `⌊k/d⌋ + ⌊(n−k)/d⌋ < ⌊n/d⌋`.
pub fn carries_at(n: usize, k: usize, d: usize) -> bool {
    k / d + (n - k) / d < n / d
}

/// `C_a(n,k)` by the factorial ratio and by the product of `u_d`; both must agree.
pub fn a_binomial(spec: &SequenceSpec, n: usize, k: usize) -> Result<BigInt> {
    if k > n {
        return domain(format!("k = {k} exceeds n = {n}"));
    }
    let terms = one_based_terms(spec, n)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let f = prefix_products(&terms);
    let ratio = exact_quotient(&f[n], &(&f[k] * &f[n - k]), || format!("C_a({n},{k})"))?;
    let u = extract_u(&terms, UMethod::Nowicki)?.u;
    let factors: Vec<BigInt> = (1..=n)
        .filter(|&d| carries_at(n, k, d))
        .map(|d| u[d - 1].clone())
        .collect();
    let product = product_tree(&factors);
    if product != ratio {
        return Err(Error::Invariant(format!(
            "C_a({n},{k}): factorial ratio {ratio} differs from u-product {product}"
        )));
    }
    Ok(ratio)
}

fn row_from_prefix(f: &[BigInt], n: usize) -> Result<Vec<BigInt>> {
    (0..=n)
        .map(|k| exact_quotient(&f[n], &(&f[k] * &f[n - k]), || format!("C_a({n},{k})")))
        .collect()
}

pub fn a_binomial_row(spec: &SequenceSpec, n: usize) -> Result<ABinomialRow> {
    let terms = one_based_terms(spec, n)?;
    let f = prefix_products(&terms[..n]);
    Ok(ABinomialRow {
        spec: spec.clone(),
        n,
        coeffs: row_from_prefix(&f, n)?,
    })
}

fn equality_report(
    id: &str,
    p: std::collections::BTreeMap<String, String>,
    lhs: &BigInt,
    rhs: &BigInt,
) -> BoundReport {
    let detail = if lhs == rhs {
        format!("both sides {}", short_int(lhs))
    } else {
        format!("lhs {} != rhs {}", short_int(lhs), short_int(rhs))
    };
    BoundReport::exact(id, p, lhs == rhs, detail)
}

/// `lcm{C(n,0), …, C(n,n)} = lcm(1, …, n+1)/(n+1)`.
pub fn binomial_row_lcm_check(n: usize) -> Result<BoundReport> {
    let mut row = vec![BigInt::one()];
    for k in 1..=n {
        let next = row[k - 1].clone() * (n + 1 - k) / k;
        row.push(next);
    }
    let lhs = lcm_bigints(&row)?;
    let nat: Vec<BigInt> = (1..=n as u64 + 1).map(BigInt::from).collect();
    let rhs = lcm_bigints(&nat)? / (n + 1);
    Ok(equality_report(BINOMIAL_ROW_LCM, params(&[("n", n)]), &lhs, &rhs))
}

/// `lcm{C_a(n,k)} = lcm(a_1, …, a_{n+1})/a_{n+1}`.
pub fn lcm_row_identity_check(spec: &SequenceSpec, n: usize) -> Result<BoundReport> {
    let terms = one_based_terms(spec, n + 1)?;
    let f = prefix_products(&terms[..n]);
    let lhs = lcm_bigints(&row_from_prefix(&f, n)?)?;
    let rhs = lcm_bigints(&terms)? / &terms[n];
    Ok(equality_report(LCM_ROW_IDENTITY, spec_params(spec, n), &lhs, &rhs))
}

/// `lcm(a_1, …, a_n) = lcm{a_k·C_a(n,k) : 1 <= k <= n}`.
pub fn lcm_weighted_row_check(spec: &SequenceSpec, n: usize) -> Result<BoundReport> {
    if n == 0 {
        return domain("n must be positive");
    }
    let terms = one_based_terms(spec, n)?;
    let f = prefix_products(&terms);
    let row = row_from_prefix(&f, n)?;
    let weighted: Vec<BigInt> = (1..=n).map(|k| &terms[k - 1] * &row[k]).collect();
    let lhs = lcm_bigints(&terms)?;
    let rhs = lcm_bigints(&weighted)?;
    Ok(equality_report(LCM_WEIGHTED_ROW, spec_params(spec, n), &lhs, &rhs))
}

/// `lcm(a_1, …, a_n) = gcd{C_a(n,k)·lcm(a_1, …, a_k) : ⌈n/2⌉ <= k <= n}`.
pub fn lcm_gcd_row_check(spec: &SequenceSpec, n: usize) -> Result<BoundReport> {
    if n == 0 {
        return domain("n must be positive");
    }
    let terms = one_based_terms(spec, n)?;
    let f = prefix_products(&terms);
    let row = row_from_prefix(&f, n)?;
    let mut running = Vec::with_capacity(n);
    let mut acc = BigInt::one();
    for a in &terms {
        acc = crate::exact_arith::lcm_step(&acc, a);
        running.push(acc.clone());
    }
    let rhs = (n.div_ceil(2)..=n)
        .map(|k| &row[k] * &running[k - 1])
        .reduce(|g, x| g.gcd(&x))
        .unwrap();
    Ok(equality_report(LCM_GCD_ROW, spec_params(spec, n), &running[n - 1], &rhs))
}

fn spec_params(spec: &SequenceSpec, n: usize) -> std::collections::BTreeMap<String, String> {
    params(&[("spec", spec.to_string()), ("n", n.to_string())])
}

/// Exponent-vector form of a family's first terms over a coprime basis,
/// used to evaluate whole ranges of the row identities quickly.
pub struct RowScanner {
    spec: SequenceSpec,
    basis: CoprimeBasis,
    /// `e[k]`: exponents of `a_k`, `k >= 1`; `e[0]` is zero.
    e: Vec<Vec<i64>>,
    /// `f[k]`: exponents of `a_1⋯a_k`.
    f: Vec<Vec<i64>>,
    /// `m[k]`: exponents of `lcm(a_1, …, a_k)`.
    m: Vec<Vec<i64>>,
}

impl RowScanner {
    /// Prepares identities up to `n_max` (terms up to `a_{n_max+1}`).
    pub fn new(spec: &SequenceSpec, n_max: usize) -> Result<RowScanner> {
        let terms = one_based_terms(spec, n_max + 1)?;
        let basis = CoprimeBasis::from_values(&terms)?;
        let width = basis.len();
        let mut e = vec![vec![0i64; width]];
        for a in &terms {
            e.push(basis.exponents(a)?.into_iter().map(i64::from).collect());
        }
        let mut f = vec![vec![0i64; width]];
        let mut m = vec![vec![0i64; width]];
        for ek in &e[1..] {
            f.push(f.last().unwrap().iter().zip(ek).map(|(x, y)| x + y).collect());
            m.push(m.last().unwrap().iter().zip(ek).map(|(x, y)| *x.max(y)).collect());
        }
        Ok(RowScanner {
            spec: spec.clone(),
            basis,
            e,
            f,
            m,
        })
    }

    pub fn n_max(&self) -> usize {
        self.e.len() - 2
    }

    fn binom(&self, n: usize, k: usize) -> Result<Vec<i64>> {
        let v: Vec<i64> = (0..self.basis.len())
            .map(|i| self.f[n][i] - self.f[k][i] - self.f[n - k][i])
            .collect();
        if v.iter().any(|&x| x < 0) {
            return Err(Error::NotStrongDivisibility(format!("C_a({n},{k}) is not an integer")));
        }
        Ok(v)
    }

    fn value(&self, v: &[i64]) -> BigInt {
        let e: Vec<u64> = v.iter().map(|&x| x as u64).collect();
        self.basis.value(&e)
    }

    fn in_range(&self, n: usize) -> Result<()> {
        if n > self.n_max() {
            return Err(Error::Range(format!("scanner prepared up to n = {}", self.n_max())));
        }
        Ok(())
    }

    fn report(&self, id: &str, n: usize, lhs: &[i64], rhs: &[i64]) -> BoundReport {
        let p = match id {
            BINOMIAL_ROW_LCM => params(&[("n", n)]),
            _ => spec_params(&self.spec, n),
        };
        equality_report(id, p, &self.value(lhs), &self.value(rhs))
    }

    fn max_into(acc: &mut [i64], v: &[i64]) {
        for (a, b) in acc.iter_mut().zip(v) {
            *a = (*a).max(*b);
        }
    }

    /// Same verdict and detail as [`lcm_row_identity_check`] (or
    /// [`binomial_row_lcm_check`] for the naturals when `id` asks for it).
    pub fn row_identity(&self, n: usize, id: &str) -> Result<BoundReport> {
        self.in_range(n)?;
        let mut lhs = vec![0i64; self.basis.len()];
        for k in 0..=n {
            Self::max_into(&mut lhs, &self.binom(n, k)?);
        }
        let rhs: Vec<i64> = self.m[n + 1]
            .iter()
            .zip(&self.e[n + 1])
            .map(|(a, b)| a - b)
            .collect();
        Ok(self.report(id, n, &lhs, &rhs))
    }

    pub fn weighted_row(&self, n: usize) -> Result<BoundReport> {
        self.in_range(n)?;
        if n == 0 {
            return domain("n must be positive");
        }
        let mut rhs = vec![0i64; self.basis.len()];
        for k in 1..=n {
            let v: Vec<i64> = self.binom(n, k)?.iter().zip(&self.e[k]).map(|(a, b)| a + b).collect();
            Self::max_into(&mut rhs, &v);
        }
        Ok(self.report(LCM_WEIGHTED_ROW, n, &self.m[n], &rhs))
    }

    pub fn gcd_row(&self, n: usize) -> Result<BoundReport> {
        self.in_range(n)?;
        if n == 0 {
            return domain("n must be positive");
        }
        let mut rhs = vec![i64::MAX; self.basis.len()];
        for k in n.div_ceil(2)..=n {
            let v: Vec<i64> = self.binom(n, k)?.iter().zip(&self.m[k]).map(|(a, b)| a + b).collect();
            for (a, b) in rhs.iter_mut().zip(&v) {
                *a = (*a).min(*b);
            }
        }
        Ok(self.report(LCM_GCD_ROW, n, &self.m[n], &rhs))
    }
}

/// `C(n) = n!/(⌊n/2⌋!⌊n/3⌋!⌊n/7⌋!⌊n/43⌋!⋯)` with its divisibility flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HansonC {
    pub value: BigRational,
    pub integral: bool,
    pub lcm_divides: bool,
    pub at_most_3n: bool,
}

pub fn hanson_c(n: u64) -> Result<HansonC> {
    if n == 0 {
        return domain("n must be positive");
    }
    let b = sylvester(SYLVESTER_CAP)?;
    let table = PrimeTable::new(n.max(2));
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut lcm_divides = true;
    for &p in table.primes_up_to(n) {
        let mut e = legendre(p, n) as i64;
        for bj in &b {
            let q: u64 = (BigInt::from(n) / bj).try_into().unwrap_or(0);
            e -= legendre(p, q) as i64;
        }
        let top = crate::prime_toolkit::prime_power_count(p, n) as i64;
        lcm_divides &= e >= top;
        if e > 0 {
            num.push((p, e as u32));
        } else if e < 0 {
            den.push((p, (-e) as u32));
        }
    }
    let integral = den.is_empty();
    let value = BigRational::new(
        FactoredInteger::from_pairs(num).to_bigint(),
        FactoredInteger::from_pairs(den).to_bigint(),
    );
    let at_most_3n = value <= BigRational::from_integer(BigInt::from(3).pow(n as u32));
    Ok(HansonC {
        value,
        integral,
        lcm_divides: integral && lcm_divides,
        at_most_3n,
    })
}

pub fn hanson_c_check(n: u64) -> Result<BoundReport> {
    let h = hanson_c(n)?;
    let ok = h.integral && h.lcm_divides && h.at_most_3n;
    let detail = format!(
        "C(n) = {}, integral {}, lcm divides {}, at most 3^n {}",
        short_int(&h.value),
        h.integral,
        h.lcm_divides,
        h.at_most_3n
    );
    Ok(BoundReport::exact(HANSON_C, params(&[("n", n)]), ok, detail))
}

/// `l·C(k,l)` divides `lcm(1, …, k)`.
pub fn nair_divisor_check(k: u64, l: u64) -> Result<BoundReport> {
    if l == 0 || l > k {
        return domain(format!("need 1 <= l <= k, got k={k}, l={l}"));
    }
    let table = PrimeTable::new(k.max(2));
    let mut ok = true;
    for &p in table.primes_up_to(k) {
        let mut lp = 0i64;
        let mut x = l;
        while x.is_multiple_of(p) {
            x /= p;
            lp += 1;
        }
        let e = lp + legendre(p, k) as i64 - legendre(p, l) as i64 - legendre(p, k - l) as i64;
        ok &= e <= crate::prime_toolkit::prime_power_count(p, k) as i64;
    }
    let value = BigInt::from(l) * binomial(k, l);
    Ok(BoundReport::exact(
        NAIR_DIVISOR,
        params(&[("k", k), ("l", l)]),
        ok,
        format!("l·C(k,l) = {}", short_int(&value)),
    ))
}

/// Ordinary binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
