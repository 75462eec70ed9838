//! Prime sieve, Chebyshev and prime-counting functions, factorial
//! valuations and binomial valuations via digit borrows.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{domain, Error, Result};
use crate::exact_arith::{ln_u64, FactoredInteger, Interval};

pub const DEFAULT_SIEVE_LIMIT: u64 = 2_000_000;

/// Primes up to a fixed limit with a smallest-prime-factor table.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    spf: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chebyshev {
    Theta,
    Psi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProgressionFn {
    Theta,
    Pi,
}

impl PrimeTable {
    pub fn new(limit: u64) -> PrimeTable {
        assert!(limit <= u32::MAX as u64, "sieve limit too large");
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            let si = spf[i];
            for &p in &primes {
                let j = i * p as usize;
                if p as u32 > si || j > n {
                    break;
                }
                spf[j] = p as u32;
            }
        }
        PrimeTable { limit, primes, spf }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= x`.
    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        let k = self.primes.partition_point(|&p| p <= x);
        &self.primes[..k]
    }

    pub fn smallest_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        if n <= self.limit {
            return Ok(n >= 2 && self.spf[n as usize] as u64 == n);
        }
        if n / self.limit > self.limit {
            return Err(Error::Range(format!("{n} exceeds the square of the sieve limit")));
        }
        Ok(self.primes.iter().take_while(|&&p| p * p <= n).all(|&p| !n.is_multiple_of(p)))
    }

    /// π(x) for integer `x <= limit`.
    pub fn pi(&self, x: u64) -> Result<u64> {
        self.check_range(x)?;
        Ok(self.primes_up_to(x).len() as u64)
    }

    fn check_range(&self, x: u64) -> Result<()> {
        if x > self.limit {
            return Err(Error::Range(format!("{x} exceeds the sieve limit {}", self.limit)));
        }
        Ok(())
    }

    fn floor_arg(&self, x: f64) -> Result<u64> {
        if !x.is_finite() || x < 0.0 {
            return domain(format!("argument {x} must be a finite non-negative real"));
        }
        if x > self.limit as f64 {
            return Err(Error::Range(format!("{x} exceeds the sieve limit {}", self.limit)));
        }
        Ok(x.floor() as u64)
    }

    /// Factorization of `1 <= n <= limit²`.
    pub fn factor(&self, n: u64) -> Result<FactoredInteger> {
        if n == 0 {
            return domain("zero has no factorization");
        }
        let mut pairs = Vec::new();
        let mut m = n;
        if m > self.limit {
            for &p in &self.primes {
                if p * p > m || m <= self.limit {
                    break;
                }
                let mut e = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                if e > 0 {
                    pairs.push((p, e));
                }
            }
            if m > self.limit {
                if m / self.limit > self.limit {
                    return Err(Error::Range(format!(
                        "{n} cannot be factored over primes up to {}",
                        self.limit
                    )));
                }
                pairs.push((m, 1));
                m = 1;
            }
        }
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            pairs.push((p, e));
        }
        Ok(FactoredInteger::from_pairs(pairs))
    }

    pub fn factor_big(&self, n: &BigInt) -> Result<FactoredInteger> {
        let v: u64 = n
            .try_into()
            .map_err(|_| Error::Range(format!("{n} is outside the factorable range")))?;
        self.factor(v)
    }

    /// θ(x) or ψ(x) as a certified enclosure.
    pub fn chebyshev(&self, which: Chebyshev, x: f64, prec: u32) -> Result<Interval> {
        let n = self.floor_arg(x)?;
        let mut acc = Interval::zero(prec);
        for &p in self.primes_up_to(n) {
            let mult = match which {
                Chebyshev::Theta => 1,
                Chebyshev::Psi => prime_power_count(p, n),
            };
            acc = acc + ln_u64(p, prec)?.mul_i64(mult as i64);
        }
        Ok(acc)
    }

    /// θ(x; m, k) or π(x; m, k): restricted to primes `p ≡ m (mod k)`.
    pub fn chebyshev_progression(
        &self,
        which: ProgressionFn,
        x: f64,
        m: u64,
        k: u64,
        prec: u32,
    ) -> Result<Interval> {
        if k == 0 || m == 0 || m > k {
            return domain(format!("progression needs 1 <= m <= k, got m={m}, k={k}"));
        }
        let n = self.floor_arg(x)?;
        let sel = self.primes_up_to(n).iter().filter(|&&p| p % k == m % k);
        match which {
            ProgressionFn::Pi => Ok(Interval::from_i64(sel.count() as i64, prec)),
            ProgressionFn::Theta => {
                let mut acc = Interval::zero(prec);
                for &p in sel {
                    acc = acc + ln_u64(p, prec)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Memoized certified `log p` values at one precision.
#[derive(Clone, Debug)]
pub struct PrimeLogs {
    prec: u32,
    cache: HashMap<u64, Interval>,
}

impl PrimeLogs {
    pub fn new(prec: u32) -> PrimeLogs {
        PrimeLogs {
            prec,
            cache: HashMap::new(),
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn get(&mut self, p: u64) -> &Interval {
        let prec = self.prec;
        self.cache
            .entry(p)
            .or_insert_with(|| ln_u64(p, prec).expect("positive argument"))
    }

    /// `Σ e·log p` over a factorization.
    pub fn ln_factored(&mut self, f: &FactoredInteger) -> Interval {
        let mut acc = Interval::zero(self.prec);
        for (p, e) in f.iter() {
            acc = acc + self.get(p).mul_i64(e as i64);
        }
        acc
    }
}

/// Number of powers `p^ν <= n` with `ν >= 1`.
pub fn prime_power_count(p: u64, n: u64) -> u32 {
    let mut c = 0;
    let mut q = p;
    while q <= n {
        c += 1;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    c
}

fn is_prime_small(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime_small(p) {
        Ok(())
    } else {
        domain(format!("{p} is not prime"))
    }
}

/// ϑ_p(n!) by Legendre's formula.
pub fn factorial_valuation(p: u64, n: u64) -> Result<u64> {
    require_prime(p)?;
    Ok(legendre(p, n))
}

pub(crate) fn legendre(p: u64, n: u64) -> u64 {
    let mut s = 0;
    let mut m = n;
    while m >= p {
        m /= p;
        s += m;
    }
    s
}

/// Little-endian base-`p` digits; empty for zero.
pub fn digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}

/// Number of borrows when subtracting `k` from `n` in base `p`.
pub fn kummer_borrows(n: u64, k: u64, p: u64) -> Result<u64> {
    if k > n {
        return domain(format!("k = {k} exceeds n = {n}"));
    }
    require_prime(p)?;
    let a = digits(n, p);
    let b = digits(k, p);
    let mut borrow = 0i64;
    let mut count = 0;
    for (i, &ai) in a.iter().enumerate() {
        let bi = b.get(i).copied().unwrap_or(0) as i64;
        borrow = i64::from(ai as i64 - bi - borrow < 0);
        count += borrow as u64;
    }
    Ok(count)
}

/// `(max_k ϑ_p(C(n,k)), p^N − 1)` where `N + 1` is the number of base-`p`
/// digits of `n`.
pub fn max_binomial_valuation(n: u64, p: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return domain("n must be positive");
    }
    require_prime(p)?;
    let c = digits(n, p);
    let top = (c.len() - 1) as u64;
    let witness = p.pow(top as u32) - 1;
    let value = match c.iter().position(|&d| d != p - 1) {
        None => 0,
        Some(i) => top - i as u64,
    };
    Ok((value, witness))
}
