//! Asymptotic convergence probes: a ratio series against its limit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::{progressions::m_of, Catalog, LogLcm, Params};
use crate::error::{domain, Error, Result};
use crate::exact_arith::{ln_int, ln_u64, pi, Interval};
use crate::prime_toolkit::PrimeLogs;
use crate::sequences::{generate, moebius, SequenceSpec};

/// Public description of a probe.
#[derive(Clone, Copy, Debug)]
pub struct ProbeInfo {
    pub id: &'static str,
    /// Parameter names with their default values.
    pub params: &'static [(&'static str, &'static str)],
    pub ratio: &'static str,
    pub target: &'static str,
}

pub const PROBES: &[ProbeInfo] = &[
    ProbeInfo {
        id: "pnt",
        params: &[],
        ratio: "log lcm(1, ..., n) / n",
        target: "1",
    },
    ProbeInfo {
        id: "bateman",
        params: &[("a", "1"), ("b", "3")],
        ratio: "log lcm(a+b, a+2b, ..., a+nb) / n",
        target: "(b/phi(b)) sum_{m <= b, gcd(m,b) = 1} 1/m",
    },
    ProbeInfo {
        id: "matiyasevich",
        params: &[],
        ratio: "log lcm(F_1, ..., F_n) / (n^2 log phi)",
        target: "3/pi^2",
    },
    ProbeInfo {
        id: "cilleruelo_leading",
        params: &[("f", "poly:1,0,1")],
        ratio: "log lcm(f(1), ..., f(n)) / (n log n), f irreducible quadratic",
        target: "1",
    },
    ProbeInfo {
        id: "m_trend",
        params: &[],
        ratio: "r M(r) / log r",
        target: "1",
    },
];

#[derive(Clone, Debug, PartialEq)]
pub struct ProbePoint {
    pub n: u64,
    pub ratio: Interval,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeSeries {
    pub probe_id: String,
    pub params: Params,
    pub target: Interval,
    pub points: Vec<ProbePoint>,
}

impl ProbeSeries {
    /// `|ratio − target|` at each point, as `f64`.
    pub fn distances(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| (&p.ratio - &self.target).abs().mid_f64())
            .collect()
    }
}

fn resolve(info: &ProbeInfo, args: &Params) -> Result<Params> {
    for key in args.keys() {
        if !info.params.iter().any(|(k, _)| k == key) {
            return Err(Error::Parse(format!("probe `{}` takes no parameter `{key}`", info.id)));
        }
    }
    Ok(info
        .params
        .iter()
        .map(|(k, d)| {
            let v = args.get(*k).cloned().unwrap_or_else(|| d.to_string());
            (k.to_string(), v)
        })
        .collect())
}

fn arg_u64(params: &Params, key: &str) -> Result<u64> {
    let v = &params[key];
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("parameter `{key}` = `{v}` is not a non-negative integer")))
}

pub(super) fn probe(cat: &Catalog, id: &str, args: &Params, points: &[u64]) -> Result<ProbeSeries> {
    let info = PROBES.iter().find(|p| p.id == id).ok_or_else(|| Error::Unknown {
        name: id.to_string(),
        valid: PROBES.iter().map(|p| p.id).collect::<Vec<_>>().join(", "),
    })?;
    let params = resolve(info, args)?;
    let mut ns = points.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return domain("a probe needs at least one point");
    }
    if ns[0] == 0 {
        return domain("probe points must be positive");
    }
    let prec = cat.prec();
    let (target, ratios) = match info.id {
        "pnt" => (Interval::from_i64(1, prec), lcm_ratios(cat, &ns, Ok, |n| Ok(Interval::from_i64(n as i64, prec)))?),
        "bateman" => bateman(cat, &params, &ns)?,
        "matiyasevich" => matiyasevich(&ns, prec)?,
        "cilleruelo_leading" => cilleruelo(cat, &params, &ns)?,
        "m_trend" => m_trend(&ns, prec)?,
        _ => return Err(Error::Invariant(format!("probe `{id}` has no evaluator"))),
    };
    Ok(ProbeSeries {
        probe_id: info.id.to_string(),
        params,
        target,
        points: ns.into_iter().zip(ratios).map(|(n, ratio)| ProbePoint { n, ratio }).collect(),
    })
}

/// `log lcm(term(1..n)) / denom(n)` at each ascending `n`.
fn lcm_ratios(
    cat: &Catalog,
    ns: &[u64],
    term: impl Fn(u64) -> Result<u64>,
    denom: impl Fn(u64) -> Result<Interval>,
) -> Result<Vec<Interval>> {
    let table = cat.table();
    let mut logs = PrimeLogs::new(cat.prec());
    let mut l = LogLcm::new(cat.prec());
    let mut k = 0;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        while k < n {
            k += 1;
            l.absorb(&table.factor(term(k)?)?, &mut logs);
        }
        out.push(l.log().div(&denom(n)?)?);
    }
    Ok(out)
}

fn bateman(cat: &Catalog, params: &Params, ns: &[u64]) -> Result<(Interval, Vec<Interval>)> {
    let a = arg_u64(params, "a")?;
    let b = arg_u64(params, "b")?;
    if b == 0 || a.gcd(&b) != 1 {
        return domain("bateman needs b >= 1 and gcd(a, b) = 1");
    }
    let prec = cat.prec();
    let mut sum = BigRational::zero();
    let mut phi = 0i64;
    for m in (1..=b).filter(|m| m.gcd(&b) == 1) {
        sum += BigRational::new(1.into(), m.into());
        phi += 1;
    }
    let target = Interval::from_rational(&(sum * BigRational::new(b.into(), phi.into())), prec);
    let ratios = lcm_ratios(
        cat,
        ns,
        |k| {
            k.checked_mul(b)
                .and_then(|v| v.checked_add(a))
                .ok_or_else(|| Error::Range("a + kb overflows".into()))
        },
        |n| Ok(Interval::from_i64(n as i64, prec)),
    )?;
    Ok((target, ratios))
}

fn cilleruelo(cat: &Catalog, params: &Params, ns: &[u64]) -> Result<(Interval, Vec<Interval>)> {
    let spec: SequenceSpec = params["f"].parse()?;
    match &spec {
        SequenceSpec::Polynomial { coeffs } if coeffs.len() == 3 && coeffs[2] != 0 => {}
        _ => return domain("cilleruelo_leading needs a quadratic polynomial poly:c0,c1,c2"),
    }
    if ns[0] < 2 {
        return domain("cilleruelo_leading needs n >= 2");
    }
    let prec = cat.prec();
    let last = *ns.last().expect("non-empty");
    let terms = generate(&spec, last as usize)?;
    if terms.iter().any(Zero::is_zero) {
        return domain("f has a zero value");
    }
    let table = cat.table();
    let mut logs = PrimeLogs::new(prec);
    let mut l = LogLcm::new(prec);
    let mut k = 0;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        while k < n {
            l.absorb(&table.factor_big(&terms[k as usize])?, &mut logs);
            k += 1;
        }
        let denom = ln_u64(n, prec)?.mul_i64(n as i64);
        out.push(l.log().div(&denom)?);
    }
    Ok((Interval::from_i64(1, prec), out))
}

/// `log lcm(F_1..F_n) = Σ_{e<=n} log F_e · Mertens(n/e)`.
fn matiyasevich(ns: &[u64], prec: u32) -> Result<(Interval, Vec<Interval>)> {
    let last = *ns.last().expect("non-empty") as usize;
    let fib = generate(&SequenceSpec::fibonacci(), last)?;
    let ln_fib: Vec<Interval> = fib.iter().map(|f| ln_int(f, prec)).collect::<Result<_>>()?;
    let mut mertens = vec![0i64; last + 1];
    for j in 1..=last {
        mertens[j] = mertens[j - 1] + i64::from(moebius(j as u64));
    }
    let sqrt5 = Interval::from_i64(5, prec).sqrt()?;
    let ln_phi = (&Interval::from_i64(1, prec) + &sqrt5)
        .mul_rational(&BigRational::new(1.into(), 2.into()))
        .ln()?;
    let pi2 = &pi(prec) * &pi(prec);
    let target = Interval::from_i64(3, prec).div(&pi2)?;
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut acc = Interval::zero(prec);
        for e in 1..=n as usize {
            let m = mertens[n as usize / e];
            if m != 0 {
                acc = &acc + &ln_fib[e - 1].mul_i64(m);
            }
        }
        let nn = BigInt::from(n);
        out.push(acc.div(&ln_phi.mul_int(&(&nn * &nn)))?);
    }
    Ok((target, out))
}

fn m_trend(ns: &[u64], prec: u32) -> Result<(Interval, Vec<Interval>)> {
    if ns[0] < 2 {
        return domain("m_trend needs r >= 2");
    }
    let out = ns
        .iter()
        .map(|&r| {
            let rm = Interval::from_rational(&(m_of(r)? * BigInt::from(r)), prec);
            rm.div(&ln_u64(r, prec)?)
        })
        .collect::<Result<_>>()?;
    Ok((Interval::from_i64(1, prec), out))
}

#[cfg(test)]
mod tests {
    use super::super::test_support::small;
    use super::*;
    use crate::report::params;

    fn ratio_f64(s: &ProbeSeries) -> Vec<f64> {
        s.points.iter().map(|p| p.ratio.mid_f64()).collect()
    }

    #[test]
    fn pnt_matches_psi() {
        let cat = small();
        let s = cat.probe("pnt", &Params::new(), &[10, 1]).unwrap();
        assert_eq!(s.points.iter().map(|p| p.n).collect::<Vec<_>>(), [1, 10]);
        assert!((ratio_f64(&s)[1] - 2520f64.ln() / 10.0).abs() < 1e-12);
        let s = cat.probe("pnt", &Params::new(), &[100_000]).unwrap();
        assert!((ratio_f64(&s)[0] - 1.0).abs() < 0.03);
    }

    #[test]
    fn bateman_target() {
        let cat = small();
        let s = cat.probe("bateman", &Params::new(), &[1000]).unwrap();
        assert!((s.target.mid_f64() - 2.25).abs() < 1e-15);
        let s = cat.probe("bateman", &params(&[("a", 1), ("b", 4)]), &[10]).unwrap();
        assert!((s.target.mid_f64() - 8.0 / 3.0).abs() < 1e-15);
        // lcm(5, 9, 13, ..., 41) = 5·9·13·17·7·5·29·11·37·41
        let l: f64 = [5f64, 9., 13., 17., 7., 5., 29., 11., 37., 41.].iter().map(|v| v.ln()).sum();
        assert!((ratio_f64(&s)[0] - l / 10.0).abs() < 1e-12);
    }

    #[test]
    fn matiyasevich_small() {
        let cat = small();
        let s = cat.probe("matiyasevich", &Params::new(), &[6, 300]).unwrap();
        assert!((s.target.mid_f64() - 0.303963550927).abs() < 1e-11);
        // lcm(1, 1, 2, 3, 5, 8) = 120
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((ratio_f64(&s)[0] - 120f64.ln() / (36.0 * phi.ln())).abs() < 1e-12);
        let r = ratio_f64(&s)[1];
        assert!(r > 0.25 && r < 0.34, "{r}");
    }

    #[test]
    fn other_probes() {
        let cat = small();
        let s = cat.probe("cilleruelo_leading", &Params::new(), &[2, 3]).unwrap();
        // lcm(2, 5) and lcm(2, 5, 10)
        assert!((ratio_f64(&s)[0] - 10f64.ln() / (2.0 * 2f64.ln())).abs() < 1e-12);
        assert!((ratio_f64(&s)[1] - 10f64.ln() / (3.0 * 3f64.ln())).abs() < 1e-12);
        let s = cat.probe("m_trend", &Params::new(), &[3]).unwrap();
        assert!((ratio_f64(&s)[0] - 2.25 / 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        let cat = small();
        assert!(matches!(cat.probe("zeta", &Params::new(), &[1]), Err(Error::Unknown { .. })));
        assert!(cat.probe("pnt", &Params::new(), &[]).is_err());
        assert!(cat.probe("pnt", &Params::new(), &[0, 4]).is_err());
        assert!(matches!(cat.probe("pnt", &params(&[("a", 1)]), &[4]), Err(Error::Parse(_))));
        assert!(cat.probe("bateman", &params(&[("a", 2), ("b", 4)]), &[4]).is_err());
        assert!(cat.probe("cilleruelo_leading", &params(&[("f", "poly:1,1")]), &[4]).is_err());
    }
}
