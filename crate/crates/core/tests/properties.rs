use std::sync::LazyLock;

use lcm_core::bounds_catalog::{Catalog, Grid};
use lcm_core::exact_arith::{lcm_bigints, ln_u64, valuation, FactoredInteger, Interval};
use lcm_core::identities::{a_binomial_row, binomial};
use lcm_core::prime_toolkit::{factorial_valuation, kummer_borrows, PrimeTable};
use lcm_core::sequences::{extract_u, lcm_via_u, positive_terms, SequenceSpec, UMethod};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

static CATALOG: LazyLock<Catalog> = LazyLock::new(|| Catalog::new(PrimeTable::new(200_000), 128));

fn grid(pairs: &[(&str, Vec<String>)]) -> Grid {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn strs(v: &[u64]) -> Vec<String> {
    v.iter().map(u64::to_string).collect()
}

fn rational(n: i64, d: u32) -> BigRational {
    BigRational::new(n.into(), (i64::from(d) + 1).into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scan_equals_pointwise(
        id in prop::sample::select(vec!["hanson_3n", "nair_4n", "chebyshev_psi", "n2plus1_sandwich", "M_sandwich", "fib_sandwich"]),
        mut xs in prop::collection::vec(1u64..1200, 1..10),
    ) {
        let cat = &*CATALOG;
        let key = lcm_core::bounds_catalog::check_info(id).unwrap().sweep;
        xs.sort_unstable();
        xs.dedup();
        let out = cat.scan(id, &grid(&[(key, strs(&xs))])).unwrap();
        prop_assert_eq!(out.len(), xs.len());
        for r in &out {
            prop_assert_eq!(&cat.check(id, &r.params).unwrap(), r);
        }
    }

    #[test]
    fn interval_ops_contain_exact_results(a in -10_000i64..10_000, da in 0u32..500, b in 1i64..10_000, db in 0u32..500) {
        let (qa, qb) = (rational(a, da), rational(b, db));
        let (ia, ib) = (Interval::from_rational(&qa, 96), Interval::from_rational(&qb, 96));
        prop_assert!((&ia + &ib).contains(&(&qa + &qb)));
        prop_assert!((&ia - &ib).contains(&(&qa - &qb)));
        prop_assert!((&ia * &ib).contains(&(&qa * &qb)));
        prop_assert!(ia.div(&ib).unwrap().contains(&(&qa / &qb)));
        prop_assert!(ib.mul_rational(&qa).contains(&(&qb * &qa)));
    }

    #[test]
    fn log_is_additive(m in 1u64..1_000_000, n in 1u64..1_000_000) {
        let lhs = ln_u64(m * n, 128).unwrap();
        let rhs = &ln_u64(m, 128).unwrap() + &ln_u64(n, 128).unwrap();
        // the true value lies in both
        prop_assert!(!lhs.certainly_gt(&rhs) && !rhs.certainly_gt(&lhs));
    }

    #[test]
    fn factored_lcm_and_gcd_match_bigint(xs in prop::collection::vec(1u64..100_000, 1..8)) {
        let t = PrimeTable::new(1000);
        let fs: Vec<FactoredInteger> = xs.iter().map(|&x| t.factor(x).unwrap()).collect();
        let bigs: Vec<BigInt> = xs.iter().map(|&x| BigInt::from(x)).collect();
        let l = fs.iter().skip(1).fold(fs[0].clone(), |a, f| a.lcm(f));
        let g = fs.iter().skip(1).fold(fs[0].clone(), |a, f| a.gcd(f));
        prop_assert_eq!(l.to_bigint(), lcm_bigints(&bigs).unwrap());
        prop_assert_eq!(g.to_bigint(), bigs.iter().skip(1).fold(bigs[0].clone(), |a, b| a.gcd(b)));
        for (f, b) in fs.iter().zip(&bigs) {
            prop_assert!(f.divides(&l));
            for (p, e) in f.iter() {
                prop_assert_eq!(e, valuation(b, p));
            }
        }
    }

    #[test]
    fn kummer_matches_legendre(n in 0u64..5000, k_frac in 0.0f64..=1.0, p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 97])) {
        let k = ((n as f64) * k_frac) as u64;
        let legendre = factorial_valuation(p, n).unwrap() - factorial_valuation(p, k).unwrap() - factorial_valuation(p, n - k).unwrap();
        prop_assert_eq!(kummer_borrows(n, k, p).unwrap(), legendre);
        if n < 300 {
            prop_assert_eq!(u64::from(valuation(&binomial(n, k), p)), legendre);
        }
    }

    #[test]
    fn u_decomposition_of_lucas_sequences(p in 1i64..7, q in -6i64..7, n in 1usize..60) {
        prop_assume!(q != 0 && p.gcd(&q) == 1 && p * p > 4 * q);
        let spec = SequenceSpec::Lucas { p, q };
        prop_assume!(spec.is_strong_divisibility_family());
        let terms = positive_terms(&spec, n).unwrap();
        let a = extract_u(&terms, UMethod::Moebius).unwrap();
        let b = extract_u(&terms, UMethod::Nowicki).unwrap();
        prop_assert_eq!(&a.u, &b.u);
        prop_assert_eq!(lcm_via_u(&terms).unwrap(), lcm_bigints(&terms).unwrap());
    }

    #[test]
    fn generalized_binomial_rows_are_symmetric_integers(
        spec in prop::sample::select(vec!["nat", "fib", "lucas:3,2", "qpow:2", "qpow:3"]),
        n in 0usize..40,
    ) {
        let row = a_binomial_row(&spec.parse().unwrap(), n).unwrap();
        let c = &row.coeffs;
        prop_assert_eq!(c.len(), n + 1);
        prop_assert_eq!(&c[0], &BigInt::from(1));
        for k in 0..=n {
            prop_assert_eq!(&c[k], &c[n - k]);
        }
        if spec == "nat" {
            for (k, v) in c.iter().enumerate() {
                prop_assert_eq!(v, &binomial(n as u64, k as u64));
            }
        }
    }
}
