//! Least common multiples of consecutive values `k² + c`: the ring
//! `Z[√−c]`, the Bézout coefficients of `P_k` and its conjugate, the rational
//! divisor of `L_{c,m,n}` and the resulting lower bounds.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::exact_arith::{
    certify_le, is_multiple_of_rational, lcm_bigints, lcm_step, ln_int, ln_u64, pi, quad_product,
    BoundVerdict, FactoredInteger, Interval, QuadraticInteger, Verdict,
};
use crate::identities::binomial;
use crate::prime_toolkit::{PrimeLogs, PrimeTable};
use crate::report::{params, short_int, BoundReport};

pub const HC_MULTIPLE: &str = "hc_multiple";
pub const QUADRATIC_DIVISOR: &str = "quadratic_divisor";
pub const QUADRATIC_LOWER: &str = "quadratic_lower";
pub const QUADRATIC_STIRLING: &str = "quadratic_stirling";
pub const QUADRATIC_FAR: &str = "quadratic_far";
pub const QUADRATIC_NEAR: &str = "quadratic_near";
pub const OON_2N: &str = "oon_2n";
pub const QUADRATIC_BINOMIAL: &str = "quadratic_binomial";

/// Every check over `(c, m, n)` instances, in report order.
pub const QUADRATIC_CHECKS: [&str; 8] = [
    HC_MULTIPLE,
    QUADRATIC_DIVISOR,
    QUADRATIC_LOWER,
    QUADRATIC_STIRLING,
    QUADRATIC_FAR,
    QUADRATIC_NEAR,
    OON_2N,
    QUADRATIC_BINOMIAL,
];

pub const BEZOUT_CAP: usize = 64;

/// `L_{c,m,n} = lcm(m² + c, …, n² + c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticLcmInstance {
    pub c: u64,
    pub m: u64,
    pub n: u64,
}

impl QuadraticLcmInstance {
    pub fn new(c: u64, m: u64, n: u64) -> Result<QuadraticLcmInstance> {
        if c == 0 || m == 0 || m > n {
            return domain(format!("need c >= 1 and 1 <= m <= n, got c={c}, m={m}, n={n}"));
        }
        Ok(QuadraticLcmInstance { c, m, n })
    }

    fn params(&self) -> std::collections::BTreeMap<String, String> {
        params(&[("c", self.c), ("m", self.m), ("n", self.n)])
    }

    fn term(&self, k: u64) -> BigInt {
        BigInt::from(k) * k + self.c
    }
}

pub fn l_quadratic_big(inst: &QuadraticLcmInstance) -> BigInt {
    let terms: Vec<BigInt> = (inst.m..=inst.n).map(|k| inst.term(k)).collect();
    lcm_bigints(&terms).expect("terms are positive")
}

pub fn l_quadratic(table: &PrimeTable, inst: &QuadraticLcmInstance) -> Result<FactoredInteger> {
    let mut acc = FactoredInteger::one();
    for k in inst.m..=inst.n {
        acc = acc.lcm(&table.factor(k * k + inst.c)?);
    }
    Ok(acc)
}

/// `gcd(|re|, |im|)` of a non-zero element of `Z[√−c]`.
pub fn h_c(z: &QuadraticInteger) -> Result<BigInt> {
    if z.is_zero() {
        return domain("h_c is undefined at zero");
    }
    Ok(z.re.gcd(&z.im))
}

/// True when `n` is a multiple of `z` in `Z[√−c]`.
pub fn ring_divides(z: &QuadraticInteger, n: &BigInt) -> Result<bool> {
    if z.is_zero() {
        return domain("division by zero");
    }
    let norm = z.norm();
    Ok((n * &z.re).is_multiple_of(&norm) && (n * &z.im).is_multiple_of(&norm))
}

/// `∏_{ℓ=m}^{n} (ℓ + √−c)`.
pub fn shifted_product(c: u64, m: u64, n: u64) -> QuadraticInteger {
    let zs: Vec<QuadraticInteger> = (m..=n).map(|l| QuadraticInteger::new(c, l, 1)).collect();
    quad_product(c, &zs).expect("common ring parameter")
}

/// `c·∏_{ℓ=1}^{k} (ℓ² + 4c)`.
pub fn hc_modulus(c: u64, k: u64) -> BigInt {
    (1..=k).fold(BigInt::from(c), |acc, l| acc * (BigInt::from(l) * l + 4 * c))
}

fn hc_report(inst: &QuadraticLcmInstance, h: &BigInt, d: &BigInt) -> BoundReport {
    BoundReport::exact(
        HC_MULTIPLE,
        inst.params(),
        d.is_multiple_of(h),
        format!("h = {}, d = {}", short_int(h), short_int(d)),
    )
}

/// `h_c(∏_{ℓ=m}^{n} (ℓ + √−c))` divides `c·∏_{ℓ=1}^{n−m} (ℓ² + 4c)`.
pub fn hc_multiple_check(inst: &QuadraticLcmInstance) -> Result<BoundReport> {
    let h = h_c(&shifted_product(inst.c, inst.m, inst.n))?;
    Ok(hc_report(inst, &h, &hc_modulus(inst.c, inst.n - inst.m)))
}

fn divisor_denominator(c: u64, k: u64) -> BigInt {
    let fact: BigInt = (1..=k).map(BigInt::from).product();
    hc_modulus(c, k) * fact
}

/// `∏_{k=m}^{n} (k² + c) / (c·(n−m)!·∏_{k=1}^{n−m} (k² + 4c))`.
pub fn quadratic_divisor(inst: &QuadraticLcmInstance) -> BigRational {
    let num: BigInt = (inst.m..=inst.n).map(|k| inst.term(k)).product();
    BigRational::new(num, divisor_denominator(inst.c, inst.n - inst.m))
}

fn divisor_report(inst: &QuadraticLcmInstance, l: &BigInt, d: &BigRational) -> BoundReport {
    let ok = is_multiple_of_rational(l, d).expect("divisor is non-zero");
    let shown = if d.is_integer() {
        short_int(d.numer())
    } else {
        format!("{}/{}", short_int(d.numer()), short_int(d.denom()))
    };
    BoundReport::exact(QUADRATIC_DIVISOR, inst.params(), ok, format!("D = {shown}"))
}

/// `L_{c,m,n}` is a multiple of [`quadratic_divisor`].
pub fn quadratic_divisor_check(inst: &QuadraticLcmInstance) -> Result<BoundReport> {
    Ok(divisor_report(inst, &l_quadratic_big(inst), &quadratic_divisor(inst)))
}

/// An element `x + y√−c` of `Q(√−c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRational {
    pub c: u64,
    pub x: BigRational,
    pub y: BigRational,
}

impl QuadRational {
    pub fn new(c: u64, x: BigRational, y: BigRational) -> QuadRational {
        QuadRational { c, x, y }
    }

    pub fn from_int(c: u64, a: i64) -> QuadRational {
        QuadRational::new(c, BigRational::from_integer(a.into()), BigRational::zero())
    }

    /// `a + b√−c`.
    pub fn from_parts(c: u64, a: i64, b: i64) -> QuadRational {
        QuadRational::new(
            c,
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn add(&self, o: &QuadRational) -> QuadRational {
        QuadRational::new(self.c, &self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &QuadRational) -> QuadRational {
        QuadRational::new(self.c, &self.x - &o.x, &self.y - &o.y)
    }

    pub fn mul(&self, o: &QuadRational) -> QuadRational {
        let c = BigRational::from_integer(self.c.into());
        QuadRational::new(
            self.c,
            &self.x * &o.x - c * &self.y * &o.y,
            &self.x * &o.y + &self.y * &o.x,
        )
    }

    pub fn scale(&self, q: &BigRational) -> QuadRational {
        QuadRational::new(self.c, &self.x * q, &self.y * q)
    }

    pub fn norm(&self) -> BigRational {
        &self.x * &self.x + BigRational::from_integer(self.c.into()) * &self.y * &self.y
    }

    pub fn inv(&self) -> Result<QuadRational> {
        if self.is_zero() {
            return domain("inverse of zero");
        }
        let n = self.norm();
        Ok(QuadRational::new(self.c, &self.x / &n, -&self.y / &n))
    }

    pub fn div(&self, o: &QuadRational) -> Result<QuadRational> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: u32) -> QuadRational {
        (0..e).fold(QuadRational::from_int(self.c, 1), |acc, _| acc.mul(self))
    }
}

/// Falling power `z(z−1)⋯(z−k+1)`.
pub fn falling(z: &QuadRational, k: u64) -> QuadRational {
    (0..k).fold(QuadRational::from_int(z.c, 1), |acc, i| {
        acc.mul(&z.sub(&QuadRational::from_int(z.c, i as i64)))
    })
}

/// `P_k(X) = ∏_{i=0}^{k} (X − i + √−c)` at `X = x`.
pub fn p_k_at(c: u64, k: u64, x: &QuadRational) -> QuadRational {
    let root = QuadRational::from_parts(c, 0, 1);
    (0..=k).fold(QuadRational::from_int(c, 1), |acc, i| {
        acc.mul(&x.add(&root).sub(&QuadRational::from_int(c, i as i64)))
    })
}

/// The Newton coefficients `Θ_{k,ℓ}` of `σ_k(X) = Σ Θ_{k,ℓ}(X − √−c)^{ℓ̲}` (falling
/// powers), the unique
/// polynomial of degree `<= k` with `σ_k P_k + conj(σ_k) conj(P_k) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutCoefficients {
    pub c: u64,
    pub k: u64,
    pub theta: Vec<QuadRational>,
}

fn small_factorial(n: u64) -> BigRational {
    BigRational::from_integer((1..=n).map(BigInt::from).product())
}

/// `Θ_{k,ℓ}` as finite differences of `1/P_k(j + √−c)`.
pub fn theta_by_differences(c: u64, k: u64) -> Result<Vec<QuadRational>> {
    let inv: Vec<QuadRational> = (0..=k)
        .map(|j| p_k_at(c, k, &QuadRational::from_parts(c, j as i64, 1)).inv())
        .collect::<Result<_>>()?;
    Ok((0..=k)
        .map(|l| {
            let mut acc = QuadRational::from_int(c, 0);
            for j in 0..=l {
                let w = BigRational::from_integer(binomial(l, j));
                let term = inv[j as usize].scale(&w);
                acc = if (l - j) % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc.scale(&small_factorial(l).recip())
        })
        .collect())
}

/// `Θ_{k,ℓ} = (−1)^{k+ℓ} C(k+ℓ, ℓ) / (2√−c·(k − 2√−c)^{k̲}·(ℓ + 2√−c)^{ℓ̲})`.
pub fn theta_closed_form(c: u64, k: u64) -> Result<Vec<QuadRational>> {
    let w = QuadRational::from_parts(c, 0, 2);
    let base = w.mul(&falling(&QuadRational::from_int(c, k as i64).sub(&w), k));
    (0..=k)
        .map(|l| {
            let den = base.mul(&falling(&QuadRational::from_int(c, l as i64).add(&w), l));
            let mut num = BigRational::from_integer(binomial(k + l, l));
            if (k + l) % 2 == 1 {
                num = -num;
            }
            den.inv().map(|d| d.scale(&num))
        })
        .collect()
}

pub fn bezout_coefficients(c: u64, k: u64) -> Result<BezoutCoefficients> {
    bezout_coefficients_capped(c, k, BEZOUT_CAP)
}

/// Computes `Θ` by both formulas and fails unless they agree exactly.
pub fn bezout_coefficients_capped(c: u64, k: u64, cap: usize) -> Result<BezoutCoefficients> {
    if c == 0 {
        return domain("c must be positive");
    }
    if k as usize > cap {
        return Err(Error::Range(format!("k = {k} exceeds the cap {cap}")));
    }
    let sum = theta_by_differences(c, k)?;
    let closed = theta_closed_form(c, k)?;
    if sum != closed {
        return Err(Error::Invariant(format!(
            "difference and closed forms of Θ disagree at c={c}, k={k}"
        )));
    }
    Ok(BezoutCoefficients { c, k, theta: sum })
}

impl BezoutCoefficients {
    /// `σ_k(s + √−c) = Σ Θ_{k,ℓ} s(s−1)⋯(s−ℓ+1)`.
    pub fn sigma_at_shift(&self, s: i64) -> QuadRational {
        let mut acc = QuadRational::from_int(self.c, 0);
        let mut fall = BigRational::one();
        for (l, t) in self.theta.iter().enumerate() {
            acc = acc.add(&t.scale(&fall));
            fall *= BigRational::from_integer((s - l as i64).into());
        }
        acc
    }

    /// `σ_k(s + √−c)·P_k(s + √−c) = 1` for `s = 0..=k`.
    pub fn residual_holds(&self) -> bool {
        let one = QuadRational::from_int(self.c, 1);
        (0..=self.k as i64).all(|s| {
            let x = QuadRational::from_parts(self.c, s, 1);
            self.sigma_at_shift(s).mul(&p_k_at(self.c, self.k, &x)) == one
        })
    }

    /// Coefficients of `σ_k` in powers of `X`.
    pub fn sigma_poly(&self) -> Vec<QuadRational> {
        let c = self.c;
        let mut power = vec![QuadRational::from_int(c, 1)];
        let mut out = vec![QuadRational::from_int(c, 0); self.theta.len()];
        for (l, t) in self.theta.iter().enumerate() {
            if l > 0 {
                // times (X − √−c − (l − 1))
                let shift = QuadRational::from_parts(c, 1 - l as i64, -1);
                let mut next = vec![QuadRational::from_int(c, 0); power.len() + 1];
                for (i, a) in power.iter().enumerate() {
                    next[i + 1] = next[i + 1].add(a);
                    next[i] = next[i].add(&a.mul(&shift));
                }
                power = next;
            }
            for (i, a) in power.iter().enumerate() {
                out[i] = out[i].add(&a.mul(t));
            }
        }
        out
    }

    /// `d = c·∏_{ℓ=1}^{k} (ℓ² + 4c)`.
    pub fn d(&self) -> BigInt {
        hc_modulus(self.c, self.k)
    }

    /// Integer polynomials `r_k, s_k` with `2d·σ_k = r_k + s_k√−c`.
    pub fn cleared(&self) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
        let two_d = BigRational::from_integer(self.d() * 2);
        let mut r = Vec::new();
        let mut s = Vec::new();
        for a in self.sigma_poly() {
            let v = a.scale(&two_d);
            if !v.is_integral() {
                return Err(Error::Invariant(format!(
                    "2d·σ_k has a non-integral coefficient at c={}, k={}",
                    self.c, self.k
                )));
            }
            r.push(v.x.to_integer());
            s.push(v.y.to_integer());
        }
        Ok((r, s))
    }

    /// `r_k(n)A_k(n) − c·s_k(n)B_k(n) = d` with `P_k(n) = A_k(n) + B_k(n)√−c`.
    pub fn bezout_identity_at(&self, n: i64) -> Result<bool> {
        let (r, s) = self.cleared()?;
        let eval = |p: &[BigInt]| p.iter().rev().fold(BigInt::zero(), |acc, a| acc * n + a);
        let zs: Vec<QuadraticInteger> = (0..=self.k as i64)
            .map(|i| QuadraticInteger::new(self.c, n - i, 1))
            .collect();
        let pk = quad_product(self.c, &zs)?;
        Ok(eval(&r) * &pk.re - eval(&s) * &pk.im * self.c == self.d())
    }
}

/// Certified constants and log tables for the lower bounds at one `(c, prec)`.
pub struct LowerBoundTables {
    c: u64,
    prec: u32,
    log_lambda1: Interval,
    log_lambda2: Interval,
    log_lambda3: Interval,
    log_int: Vec<Interval>,
    log_fact: Vec<Interval>,
    /// `log(n − ½n^{2/3}) + ⌊½n^{2/3}⌋·log(2e³)`
    far_tail: Vec<Interval>,
}

impl LowerBoundTables {
    pub fn new(c: u64, n_max: u64, prec: u32) -> Result<LowerBoundTables> {
        let p = pi(prec);
        let ln2 = ln_u64(2, prec)?;
        let ln_pi = p.ln()?;
        let log_c = ln_u64(c, prec)?;
        let base = -(&p * &p).mul_rational(&BigRational::new((2 * c).into(), 3.into()));
        let five_twelfths = Interval::from_rational(&BigRational::new(5.into(), 12.into()), prec);
        let three_halves = BigRational::new(3.into(), 2.into());
        let log_lambda1 = &base - &log_c;
        let log_lambda2 =
            &(&(&base - &five_twelfths) - &(&ln2 + &ln_pi).mul_rational(&three_halves)) - &log_c;
        let log_lambda3 =
            &(&(&base - &five_twelfths) - &ln_pi.mul_rational(&three_halves)) - &log_c;
        let mut log_int = vec![Interval::zero(prec)];
        let mut log_fact = vec![Interval::zero(prec)];
        let mut far_tail = vec![Interval::zero(prec)];
        let mut fact = BigInt::one();
        let half = BigRational::new(1.into(), 2.into());
        let step = &ln2 + &Interval::from_i64(3, prec);
        for k in 1..=n_max {
            log_int.push(ln_u64(k, prec)?);
            fact *= k;
            log_fact.push(ln_int(&fact, prec)?);
            let half_pow = Interval::cbrt_int(&(BigInt::from(k) * k), prec)?.mul_rational(&half);
            let t = &Interval::from_i64(k as i64, prec) - &half_pow;
            far_tail.push(&t.ln()? + &step.mul_i64(half_pow_floor(k) as i64));
        }
        Ok(LowerBoundTables {
            c,
            prec,
            log_lambda1,
            log_lambda2,
            log_lambda3,
            log_int,
            log_fact,
            far_tail,
        })
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// `log λ₁(c)`, `log λ₂(c)`, `log λ₃(c)`.
    pub fn log_lambdas(&self) -> [&Interval; 3] {
        [&self.log_lambda1, &self.log_lambda2, &self.log_lambda3]
    }

    /// Log of the lower bound named `id` at `(m, n)`, or `None` outside its window.
    pub fn bound_log(&self, id: &str, m: u64, n: u64) -> Result<Option<Interval>> {
        let prec = self.prec;
        let li = |k: u64| &self.log_int[k as usize];
        let lf = |k: u64| &self.log_fact[k as usize];
        let k = n - m;
        let v = match id {
            QUADRATIC_LOWER => Some(
                &(&(&self.log_lambda1 + &li(m).mul_i64(2)) + &(lf(n) - lf(m)).mul_i64(2))
                    - &lf(k).mul_i64(3),
            ),
            QUADRATIC_STIRLING if m < n => {
                let three_halves = BigRational::new(3.into(), 2.into());
                let growth = &(&li(m).mul_i64(2) - &li(k).mul_i64(3)) + &Interval::from_i64(3, prec);
                Some(
                    &(&(&(&self.log_lambda2 + li(n)) + li(m)) - &li(k).mul_rational(&three_halves))
                        + &growth.mul_i64(k as i64),
                )
            }
            QUADRATIC_FAR if far_window(m, n) => Some(&self.log_lambda3 + &self.far_tail[n as usize]),
            QUADRATIC_NEAR if near_window(m, n) => Some(
                &(&self.log_lambda2 + li(n)) + &Interval::from_i64(3 * k as i64, prec),
            ),
            QUADRATIC_STIRLING | QUADRATIC_FAR | QUADRATIC_NEAR => None,
            _ => return Err(unknown_check(id)),
        };
        Ok(v)
    }

    pub fn c(&self) -> u64 {
        self.c
    }
}

fn unknown_check(id: &str) -> Error {
    Error::Unknown {
        name: id.to_string(),
        valid: QUADRATIC_CHECKS.join(", "),
    }
}

/// `m <= n − ½n^{2/3}`.
pub fn far_window(m: u64, n: u64) -> bool {
    let k = (n - m) as u128;
    8 * k * k * k >= (n as u128) * (n as u128)
}

/// `n − ½n^{2/3} <= m <= n`.
pub fn near_window(m: u64, n: u64) -> bool {
    let k = (n - m) as u128;
    8 * k * k * k <= (n as u128) * (n as u128)
}

/// `⌊½n^{2/3}⌋`, the largest `j` with `8j³ <= n²`.
pub fn half_pow_floor(n: u64) -> u64 {
    let n2 = (n as u128) * (n as u128);
    let mut j = ((n2 as f64 / 8.0).cbrt()) as u128;
    while 8 * j * j * j > n2 {
        j -= 1;
    }
    while 8 * (j + 1) * (j + 1) * (j + 1) <= n2 {
        j += 1;
    }
    j as u64
}

fn window_reason(id: &str) -> &'static str {
    match id {
        QUADRATIC_STIRLING => "needs m < n",
        QUADRATIC_FAR => "needs m <= n - n^(2/3)/2",
        QUADRATIC_NEAR => "needs m >= n - n^(2/3)/2",
        OON_2N => "needs m <= ceil(n/2)",
        _ => "outside the window",
    }
}

fn is_log_bound(id: &str) -> bool {
    matches!(id, QUADRATIC_LOWER | QUADRATIC_STIRLING | QUADRATIC_FAR | QUADRATIC_NEAR)
}

fn oon_report(inst: &QuadraticLcmInstance, l: &BigInt) -> BoundReport {
    if inst.m > inst.n.div_ceil(2) {
        return BoundReport::skipped(OON_2N, inst.params(), window_reason(OON_2N));
    }
    let bound = BigInt::one() << inst.n;
    BoundReport::exact(OON_2N, inst.params(), l >= &bound, format!("L = {}", short_int(l)))
}

fn binomial_bound_report(inst: &QuadraticLcmInstance, l: &BigInt, mc: &BigInt) -> BoundReport {
    BoundReport::exact(
        QUADRATIC_BINOMIAL,
        inst.params(),
        l >= mc,
        format!("L = {}, m·C(n,m) = {}", short_int(l), short_int(mc)),
    )
}

/// One check at one instance.
pub fn quadratic_check(
    id: &str,
    table: &PrimeTable,
    inst: &QuadraticLcmInstance,
    prec: u32,
) -> Result<BoundReport> {
    match id {
        HC_MULTIPLE => hc_multiple_check(inst),
        QUADRATIC_DIVISOR => quadratic_divisor_check(inst),
        OON_2N => Ok(oon_report(inst, &l_quadratic_big(inst))),
        QUADRATIC_BINOMIAL => {
            let mc = binomial(inst.n, inst.m) * inst.m;
            Ok(binomial_bound_report(inst, &l_quadratic_big(inst), &mc))
        }
        _ if is_log_bound(id) => {
            let l = l_quadratic(table, inst)?;
            let first = LowerBoundTables::new(inst.c, inst.n, prec)?;
            if first.bound_log(id, inst.m, inst.n)?.is_none() {
                return Ok(BoundReport::skipped(id, inst.params(), window_reason(id)));
            }
            let sides = |p: u32| -> Result<(Interval, Interval)> {
                let t = LowerBoundTables::new(inst.c, inst.n, p)?;
                let b = t.bound_log(id, inst.m, inst.n)?.expect("inside the window");
                Ok((b, PrimeLogs::new(p).ln_factored(&l)))
            };
            let v = certify_le(prec, sides)?;
            let (lhs, rhs) = sides(v.precision_bits)?;
            Ok(BoundReport::logged(id, inst.params(), &lhs, &rhs, &v))
        }
        _ => Err(unknown_check(id)),
    }
}

/// All lower bounds (log-domain and exact) at one instance, skipped where
/// the window excludes it.
pub fn quadratic_lower_bounds(
    table: &PrimeTable,
    inst: &QuadraticLcmInstance,
    prec: u32,
) -> Result<Vec<BoundReport>> {
    QUADRATIC_CHECKS[2..]
        .iter()
        .map(|id| quadratic_check(id, table, inst, prec))
        .collect()
}

/// Incremental state for fixed `(c, m)` while `n` grows.
struct Walker<'a> {
    c: u64,
    m: u64,
    n: u64,
    table: &'a PrimeTable,
    l: BigInt,
    exps: HashMap<u64, u32>,
    log_l: Interval,
    prod: QuadraticInteger,
    num: BigInt,
    binom: BigInt,
}

impl<'a> Walker<'a> {
    fn new(table: &'a PrimeTable, c: u64, m: u64, prec: u32) -> Walker<'a> {
        Walker {
            c,
            m,
            n: m - 1,
            table,
            l: BigInt::one(),
            exps: HashMap::new(),
            log_l: Interval::zero(prec),
            prod: QuadraticInteger::one(c),
            num: BigInt::one(),
            binom: BigInt::zero(),
        }
    }

    fn step(&mut self, id: &str, logs: &mut PrimeLogs) -> Result<()> {
        self.n += 1;
        let n = self.n;
        let t = n * n + self.c;
        match id {
            HC_MULTIPLE => {
                self.prod = self.prod.mul(&QuadraticInteger::new(self.c, n, 1))?;
            }
            QUADRATIC_DIVISOR => {
                self.l = lcm_step(&self.l, &BigInt::from(t));
                self.num *= t;
            }
            OON_2N | QUADRATIC_BINOMIAL => {
                self.l = lcm_step(&self.l, &BigInt::from(t));
                // C(n, m) from C(n−1, m)
                self.binom = if n == self.m {
                    BigInt::one()
                } else {
                    &self.binom * n / (n - self.m)
                };
            }
            _ => {
                for (p, e) in self.table.factor(t)?.iter() {
                    let cur = self.exps.entry(p).or_insert(0);
                    if e > *cur {
                        let add = logs.get(p).mul_i64((e - *cur) as i64);
                        self.log_l = &self.log_l + &add;
                        *cur = e;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Reports for `id` over `c ∈ cs`, `m ∈ ms`, `n ∈ ns` with `m <= n`, ordered
/// by `(c, m, n)`; pairs with `m > n` are not instances and are omitted.
///
/// Each report equals the pointwise [`quadratic_check`] result.
pub fn quadratic_scan(
    id: &str,
    table: &PrimeTable,
    cs: &[u64],
    ms: &[u64],
    ns: &[u64],
    prec: u32,
) -> Result<Vec<BoundReport>> {
    if !QUADRATIC_CHECKS.contains(&id) {
        return Err(unknown_check(id));
    }
    let mut ns: Vec<u64> = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let n_max = match ns.last() {
        Some(&n) => n,
        None => return Ok(Vec::new()),
    };
    let mut cells: Vec<(u64, u64)> = Vec::new();
    for &c in cs {
        if c == 0 {
            return domain("c must be positive");
        }
        for &m in ms {
            if m == 0 {
                return domain("m must be positive");
            }
            cells.push((c, m));
        }
    }
    cells.sort_unstable();
    cells.dedup();
    let per_c: HashMap<u64, LowerBoundTables> = if is_log_bound(id) {
        cs.iter()
            .map(|&c| Ok((c, LowerBoundTables::new(c, n_max, prec)?)))
            .collect::<Result<_>>()?
    } else {
        HashMap::new()
    };
    let chunks: Vec<Result<Vec<BoundReport>>> = cells
        .par_iter()
        .map(|&(c, m)| {
            let wanted: Vec<u64> = ns.iter().copied().filter(|&n| n >= m).collect();
            let mut out = Vec::with_capacity(wanted.len());
            if wanted.is_empty() {
                return Ok(out);
            }
            let mut logs = PrimeLogs::new(prec);
            let mut w = Walker::new(table, c, m, prec);
            let mut next = 0;
            let mut fact = BigInt::one();
            let mut d = BigInt::from(c);
            while next < wanted.len() {
                w.step(id, &mut logs)?;
                let n = w.n;
                let k = n - m;
                if k > 0 {
                    fact *= k;
                    d *= BigInt::from(k) * k + 4 * c;
                }
                if n != wanted[next] {
                    continue;
                }
                next += 1;
                let inst = QuadraticLcmInstance { c, m, n };
                let r = match id {
                    HC_MULTIPLE => hc_report(&inst, &h_c(&w.prod)?, &d),
                    QUADRATIC_DIVISOR => {
                        let q = BigRational::new(w.num.clone(), &d * &fact);
                        divisor_report(&inst, &w.l, &q)
                    }
                    OON_2N => oon_report(&inst, &w.l),
                    QUADRATIC_BINOMIAL => binomial_bound_report(&inst, &w.l, &(&w.binom * m)),
                    _ => {
                        let t = &per_c[&c];
                        match t.bound_log(id, m, n)? {
                            None => BoundReport::skipped(id, inst.params(), window_reason(id)),
                            Some(b) => {
                                let v = if b.certainly_le(&w.log_l) {
                                    Verdict::Holds
                                } else if b.certainly_gt(&w.log_l) {
                                    Verdict::Fails
                                } else {
                                    Verdict::Inconclusive
                                };
                                if v == Verdict::Inconclusive {
                                    quadratic_check(id, table, &inst, prec)?
                                } else {
                                    let bv = BoundVerdict {
                                        verdict: v,
                                        margin: Some(&w.log_l - &b),
                                        precision_bits: prec,
                                    };
                                    BoundReport::logged(id, inst.params(), &b, &w.log_l, &bv)
                                }
                            }
                        }
                    }
                };
                out.push(r);
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for chunk in chunks {
        all.extend(chunk?);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(c: u64, m: u64, n: u64) -> QuadraticLcmInstance {
        QuadraticLcmInstance::new(c, m, n).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn l_examples() {
        let t = PrimeTable::new(1000);
        assert_eq!(l_quadratic(&t, &inst(1, 1, 3)).unwrap().to_bigint(), BigInt::from(10));
        assert_eq!(l_quadratic(&t, &inst(1, 2, 4)).unwrap().to_bigint(), BigInt::from(170));
        assert_eq!(l_quadratic(&t, &inst(5, 1, 1)).unwrap().to_bigint(), BigInt::from(6));
        assert_eq!(l_quadratic_big(&inst(1, 2, 4)), BigInt::from(170));
        assert!(QuadraticLcmInstance::new(1, 3, 2).is_err());
        assert!(QuadraticLcmInstance::new(0, 1, 2).is_err());
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_c(&QuadraticInteger::new(1, 2, 2)).unwrap(), BigInt::from(2));
        assert_eq!(h_c(&QuadraticInteger::new(1, 0, 10)).unwrap(), BigInt::from(10));
        assert_eq!(h_c(&shifted_product(1, 1, 3)).unwrap(), BigInt::from(10));
        assert_eq!(h_c(&QuadraticInteger::new(3, 7, 0)).unwrap(), BigInt::from(7));
        assert!(h_c(&QuadraticInteger::new(3, 0, 0)).is_err());
    }

    #[test]
    fn hc_multiple_examples() {
        let r = hc_multiple_check(&inst(1, 1, 3)).unwrap();
        assert!(r.holds());
        assert_eq!(r.detail.as_deref(), Some("h = 10, d = 40"));
        let r = hc_multiple_check(&inst(1, 1, 2)).unwrap();
        assert_eq!(r.detail.as_deref(), Some("h = 1, d = 5"));
        for c in 1..=5 {
            for m in 1..=5 {
                let r = hc_multiple_check(&inst(c, m, m)).unwrap();
                assert!(r.holds());
                assert_eq!(r.detail.unwrap(), format!("h = 1, d = {c}"));
            }
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(quadratic_divisor(&inst(1, 1, 3)), q(5, 4));
        assert_eq!(quadratic_divisor(&inst(1, 1, 1)), q(2, 1));
        // 3·6 / (2·1!·(1 + 8))
        assert_eq!(quadratic_divisor(&inst(2, 1, 2)), q(1, 1));
        for i in [inst(1, 1, 3), inst(1, 1, 1), inst(2, 1, 2)] {
            assert!(quadratic_divisor_check(&i).unwrap().holds());
        }
        assert_eq!(
            quadratic_divisor_check(&inst(1, 1, 3)).unwrap().detail.as_deref(),
            Some("D = 5/4")
        );
    }

    #[test]
    fn bezout_examples() {
        let b = bezout_coefficients(1, 0).unwrap();
        assert_eq!(b.theta, vec![QuadRational::new(1, q(0, 1), q(-1, 2))]);
        assert!(b.residual_holds());
        let b = bezout_coefficients(1, 1).unwrap();
        // P_1(j + i) = (j + 2i)(j − 1 + 2i)
        let p0 = QuadRational::from_parts(1, 0, 2).mul(&QuadRational::from_parts(1, -1, 2));
        let p1 = QuadRational::from_parts(1, 1, 2).mul(&QuadRational::from_parts(1, 0, 2));
        assert_eq!(b.theta[0], p0.inv().unwrap());
        assert_eq!(b.theta[1], p1.inv().unwrap().sub(&p0.inv().unwrap()));
        for c in 1..=7 {
            assert!(bezout_coefficients(c, 0).unwrap().residual_holds());
        }
        assert!(matches!(bezout_coefficients(1, 65), Err(Error::Range(_))));
        assert!(bezout_coefficients_capped(1, 5, 4).is_err());
    }

    #[test]
    fn bezout_structure() {
        for c in 1..=5 {
            for k in 0..=10 {
                let b = bezout_coefficients(c, k).unwrap();
                assert!(b.residual_holds(), "c={c} k={k}");
                b.cleared().unwrap();
                for n in [k as i64, k as i64 + 1, 17, 40] {
                    assert!(b.bezout_identity_at(n).unwrap(), "c={c} k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn sigma_poly_matches_shift_evaluation() {
        let b = bezout_coefficients(3, 6).unwrap();
        let poly = b.sigma_poly();
        for s in 0..=6i64 {
            let x = QuadRational::from_parts(3, s, 1);
            let mut acc = QuadRational::from_int(3, 0);
            for a in poly.iter().rev() {
                acc = acc.mul(&x).add(a);
            }
            assert_eq!(acc, b.sigma_at_shift(s));
        }
    }

    #[test]
    fn windows() {
        assert_eq!(half_pow_floor(1), 0);
        assert_eq!(half_pow_floor(8), 2);
        assert_eq!(half_pow_floor(1000), 50);
        assert_eq!(half_pow_floor(999), 49);
        for n in 1..=3000u64 {
            let j = half_pow_floor(n);
            let exact = 0.5 * (n as f64).powf(2.0 / 3.0);
            assert!((j as f64 - exact.floor()).abs() <= 1.0);
            assert!(near_window(n - j, n) && far_window(n - j, n) == (8 * j * j * j == n * n));
            if j < n {
                assert!(far_window(n - j - 1, n) && !near_window(n - j - 1, n));
            }
        }
        assert!(far_window(1, 8) && !near_window(1, 8));
        assert!(near_window(6, 8) && far_window(6, 8));
        assert!(!far_window(7, 8));
    }

    #[test]
    fn lower_bound_examples() {
        let t = PrimeTable::new(10_000);
        let r = quadratic_check(QUADRATIC_BINOMIAL, &t, &inst(1, 2, 4), 128).unwrap();
        assert!(r.holds());
        assert_eq!(r.detail.as_deref(), Some("L = 170, m·C(n,m) = 12"));
        let r = quadratic_check(OON_2N, &t, &inst(1, 5, 10), 128).unwrap();
        assert!(r.holds());
        assert_eq!(quadratic_check(OON_2N, &t, &inst(1, 6, 10), 128).unwrap().verdict, Verdict::Skipped);
        for c in 1..=4 {
            for n in 1..=30 {
                let r = quadratic_check(QUADRATIC_NEAR, &t, &inst(c, n, n), 128).unwrap();
                assert!(r.holds(), "{r}");
            }
        }
        let all = quadratic_lower_bounds(&t, &inst(1, 1, 3), 128).unwrap();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|r| r.verdict != Verdict::Fails && r.verdict != Verdict::Inconclusive));
        assert_eq!(all[2].check_id, QUADRATIC_FAR);
        assert!(quadratic_check("nope", &t, &inst(1, 1, 3), 128).is_err());
    }

    #[test]
    fn lambda_values() {
        let t = LowerBoundTables::new(1, 1, 128).unwrap();
        let [l1, l2, l3] = t.log_lambdas();
        assert!((l1.mid_f64() - (-2.0 * std::f64::consts::PI.powi(2) / 3.0)).abs() < 1e-12);
        let pi = std::f64::consts::PI;
        let lam2 = l2.mid_f64().exp();
        let direct = (-2.0 * pi * pi / 3.0 - 5.0 / 12.0).exp() / (2.0 * pi).powf(1.5);
        assert!((lam2 / direct - 1.0).abs() < 1e-12, "{lam2}");
        let lam3 = l3.mid_f64().exp();
        assert!((lam3 / lam2 - 2f64.powf(1.5)).abs() < 1e-9);
    }

    #[test]
    fn scans_equal_pointwise_checks() {
        let t = PrimeTable::new(10_000);
        let ns: Vec<u64> = (1..=25).collect();
        let ms: Vec<u64> = (1..=25).collect();
        for id in QUADRATIC_CHECKS {
            let scan = quadratic_scan(id, &t, &[1, 2, 3], &ms, &ns, 128).unwrap();
            let mut point = Vec::new();
            for c in [1, 2, 3] {
                for m in 1..=25 {
                    for n in m..=25 {
                        point.push(quadratic_check(id, &t, &inst(c, m, n), 128).unwrap());
                    }
                }
            }
            assert_eq!(scan, point, "{id}");
        }
        assert!(quadratic_scan("nope", &t, &[1], &[1], &[1], 128).is_err());
        let sparse = quadratic_scan(HC_MULTIPLE, &t, &[2], &[3], &[10, 4, 2], 128).unwrap();
        assert_eq!(sparse.len(), 2);
        assert_eq!(sparse[0].params["n"], "4");
    }

    #[test]
    fn lcm_shrinks_as_m_grows() {
        for c in 1..=10 {
            for n in 1..=60 {
                for m in 2..=n {
                    let a = l_quadratic_big(&inst(c, m, n));
                    let b = l_quadratic_big(&inst(c, m - 1, n));
                    assert!((&b % &a).is_zero() && a <= b);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn ring_multiples_match_norm_criterion(
            a in -40i64..=40, b in -40i64..=40, c in 1u64..=12, n in -3000i64..=3000
        ) {
            prop_assume!(a != 0 || b != 0);
            let z = QuadraticInteger::new(c, a, b);
            let g = num_integer::gcd(a, b).abs();
            let crit = (BigInt::from(n) * g).is_multiple_of(&z.norm());
            prop_assert_eq!(ring_divides(&z, &BigInt::from(n)).unwrap(), crit);
        }

        #[test]
        fn quad_rational_field_axioms(a in -50i64..50, b in -50i64..50, x in -50i64..50, y in -50i64..50, c in 1u64..9) {
            let u = QuadRational::from_parts(c, a, b);
            let v = QuadRational::from_parts(c, x, y);
            prop_assert_eq!(u.mul(&v).norm(), u.norm() * v.norm());
            if !v.is_zero() {
                prop_assert_eq!(u.mul(&v).div(&v).unwrap(), u);
            }
        }
    }
}
