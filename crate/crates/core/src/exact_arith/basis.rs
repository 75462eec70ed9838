use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};

/// A set of pairwise coprime integers `> 1` such that every inserted value
/// factors completely over it.
///
/// Serves as a factorization substitute for terms that are too large to
/// factor over a prime sieve: exponent vectors over the basis behave like
/// prime exponent vectors for lcm, gcd and divisibility.
#[derive(Clone, Debug, Default)]
pub struct CoprimeBasis {
    elems: Vec<BigInt>,
}

impl CoprimeBasis {
    pub fn new() -> CoprimeBasis {
        CoprimeBasis::default()
    }

    pub fn from_values(values: &[BigInt]) -> Result<CoprimeBasis> {
        let mut b = CoprimeBasis::new();
        for v in values {
            b.insert(v)?;
        }
        b.elems.sort();
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[BigInt] {
        &self.elems
    }

    /// Refines the basis so that `value` factors over it.
    pub fn insert(&mut self, value: &BigInt) -> Result<()> {
        if value.is_zero() {
            return domain("zero cannot be factored over a coprime basis");
        }
        let mut stack = vec![value.abs()];
        while let Some(y) = stack.pop() {
            if y.is_one() {
                continue;
            }
            let hit = self.elems.iter().enumerate().find_map(|(i, b)| {
                let g = b.gcd(&y);
                (!g.is_one()).then_some((i, g))
            });
            match hit {
                None => self.elems.push(y),
                Some((i, g)) => {
                    let b = self.elems.swap_remove(i);
                    if b == y {
                        self.elems.push(b);
                        continue;
                    }
                    stack.push(&b / &g);
                    stack.push(&y / &g);
                    stack.push(g);
                }
            }
        }
        Ok(())
    }

    /// Exponent vector of `value` over the basis, aligned with [`Self::elements`].
    pub fn exponents(&self, value: &BigInt) -> Result<Vec<u32>> {
        if value.is_zero() {
            return domain("zero has no exponent vector");
        }
        let mut rest = value.abs();
        let mut out = vec![0u32; self.elems.len()];
        for (slot, b) in out.iter_mut().zip(&self.elems) {
            if rest.is_one() {
                break;
            }
            loop {
                let (q, r) = rest.div_rem(b);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                *slot += 1;
            }
        }
        if !rest.is_one() {
            return Err(Error::Invariant(format!(
                "value does not factor over the basis (cofactor {rest})"
            )));
        }
        Ok(out)
    }

    /// Reassembles an integer from an exponent vector.
    pub fn value(&self, exps: &[u64]) -> BigInt {
        let mut acc = BigInt::one();
        for (b, &e) in self.elems.iter().zip(exps) {
            if e > 0 {
                acc *= b.pow(e as u32);
            }
        }
        acc
    }
}
