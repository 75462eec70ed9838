//! Registry of effective bounds and divisibility lemmas, addressable by a
//! stable check identifier, plus asymptotic probes.
//!
//! Every check is a sweep over one integer parameter (its *sweep key*) with
//! the remaining parameters fixed. A pointwise [`Catalog::check`] is a sweep
//! over a single value, and sweeps only keep exact running state, so the
//! report at a point does not depend on the rest of the grid.

mod classical;
mod lucas_rows;
mod progressions;
mod squares_plus_one;
pub mod constants;
mod probes;

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_arith::{
    ln_u64, BoundVerdict, FactoredInteger, Interval, Verdict, DEFAULT_PRECISION, MAX_PRECISION,
};
use crate::prime_toolkit::{PrimeLogs, PrimeTable, DEFAULT_SIEVE_LIMIT};
use crate::quadratic_lcm::{self, QUADRATIC_CHECKS};
use crate::report::{BoundReport, LOG_DIGITS};
use crate::sequences::SequenceSpec;

pub use progressions::m_of;
pub use probes::{ProbeInfo, ProbePoint, ProbeSeries, PROBES};

/// Parameter record of a single check evaluation.
pub type Params = BTreeMap<String, String>;

/// Parameter ranges of a scan: every key maps to its list of values.
pub type Grid = BTreeMap<String, Vec<String>>;

/// Sweep values handled by one task of a scan.
const CHUNK: usize = 2048;

/// Primes per block of the shared prime-log table.
const LN_BLOCK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    /// Decimal integer; ranges and lists are allowed on the command line.
    Int,
    /// A sequence family such as `lucas:3,2` or `poly:1,0,1`.
    Spec,
}

#[derive(Clone, Copy, Debug)]
pub struct ParamInfo {
    pub name: &'static str,
    pub kind: ParamKind,
}

pub(crate) const fn int(name: &'static str) -> ParamInfo {
    ParamInfo {
        name,
        kind: ParamKind::Int,
    }
}

pub(crate) const fn spec(name: &'static str) -> ParamInfo {
    ParamInfo {
        name,
        kind: ParamKind::Spec,
    }
}

/// Public description of a check.
#[derive(Clone, Copy, Debug)]
pub struct CheckInfo {
    pub id: &'static str,
    pub params: &'static [ParamInfo],
    /// Integer parameter that sweeps share state along.
    pub sweep: &'static str,
    /// Exact integer or divisibility test (never inconclusive).
    pub exact: bool,
    pub summary: &'static str,
}

type SweepFn = fn(&Catalog, &Group, &[u64]) -> Result<Vec<BoundReport>>;

pub(crate) struct Entry {
    pub info: CheckInfo,
    pub run: SweepFn,
}

const QUADRATIC_PARAMS: &[ParamInfo] = &[int("c"), int("m"), int("n")];

const QUADRATIC_ENTRIES: &[Entry] = &[
    Entry {
        info: CheckInfo {
            id: quadratic_lcm::HC_MULTIPLE,
            params: QUADRATIC_PARAMS,
            sweep: "n",
            exact: true,
            summary: "h_c(prod (l + sqrt(-c)), l = m..n) divides c * prod (l^2 + 4c), l = 1..n-m",
        },
        run: run_quadratic,
    },
    Entry {
        info: CheckInfo {
            id: quadratic_lcm::QUADRATIC_DIVISOR,
            params: QUADRATIC_PARAMS,
            sweep: "n",
            exact: true,
            summary: "lcm(m^2+c, ..., n^2+c) is a multiple of the rational divisor built from the Bezout layer",
        },
        run: run_quadratic,
    },
    Entry {
        info: CheckInfo {
            id: quadratic_lcm::QUADRATIC_LOWER,
            params: QUADRATIC_PARAMS,
            sweep: "n",
            exact: false,
            summary: "log lcm(m^2+c, ..., n^2+c) >= the general lower bound",
        },
        run: run_quadratic,
    },
    Entry {
        info: CheckInfo {
            id: quadratic_lcm::QUADRATIC_STIRLING,
            params: QUADRATIC_PARAMS,
            sweep: "n",
            exact: false,
            summary: "Stirling form of the lower bound, m < n",
        },
        run: run_quadratic,
    },
    Entry {
        info: CheckInfo {
            id: quadratic_lcm::QUADRATIC_FAR,
            params: QUADRATIC_PARAMS,
            sweep: "n",
            exact: false,
            summary: "lower bound for m <= n - n^(2/3)/2",
        },
        run: run_quadratic,
    },
    Entry {
        info: CheckInfo {
            id: quadratic_lcm::QUADRATIC_NEAR,
            params: QUADRATIC_PARAMS,
            sweep: "n",
            exact: false,
            summary: "lower bound for m >= n - n^(2/3)/2",
        },
        run: run_quadratic,
    },
    Entry {
        info: CheckInfo {
            id: quadratic_lcm::OON_2N,
            params: QUADRATIC_PARAMS,
            sweep: "n",
            exact: true,
            summary: "lcm(m^2+c, ..., n^2+c) >= 2^n for m <= ceil(n/2)",
        },
        run: run_quadratic,
    },
    Entry {
        info: CheckInfo {
            id: quadratic_lcm::QUADRATIC_BINOMIAL,
            params: QUADRATIC_PARAMS,
            sweep: "n",
            exact: true,
            summary: "lcm(m^2+c, ..., n^2+c) >= m * C(n, m)",
        },
        run: run_quadratic,
    },
];

fn groups() -> [&'static [Entry]; 5] {
    [
        classical::ENTRIES,
        QUADRATIC_ENTRIES,
        lucas_rows::ENTRIES,
        progressions::ENTRIES,
        squares_plus_one::ENTRIES,
    ]
}

fn entries() -> impl Iterator<Item = &'static Entry> {
    groups().into_iter().flatten()
}

/// All checks in registry order.
pub fn checks() -> Vec<CheckInfo> {
    entries().map(|e| e.info).collect()
}

pub fn check_ids() -> Vec<&'static str> {
    entries().map(|e| e.info.id).collect()
}

fn entry(id: &str) -> Result<&'static Entry> {
    entries().find(|e| e.info.id == id).ok_or_else(|| Error::Unknown {
        name: id.to_string(),
        valid: check_ids().join(", "),
    })
}

pub fn check_info(id: &str) -> Result<CheckInfo> {
    entry(id).map(|e| e.info)
}

/// Fixed parameters of one sweep.
#[derive(Clone, Debug)]
pub struct Group {
    id: &'static str,
    sweep: &'static str,
    fixed: Params,
}

impl Group {
    pub fn id(&self) -> &'static str {
        self.id
    }

    /// The fixed (non-sweep) parameters.
    pub fn params(&self) -> &Params {
        &self.fixed
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.fixed
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::Parse(format!("missing parameter `{key}`")))
    }

    pub(crate) fn u64(&self, key: &str) -> Result<u64> {
        parse_u64(key, self.raw(key)?)
    }

    pub(crate) fn i64(&self, key: &str) -> Result<i64> {
        let v = self.raw(key)?;
        v.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("parameter `{key}` = `{v}` is not an integer")))
    }

    pub(crate) fn spec(&self, key: &str) -> Result<SequenceSpec> {
        self.raw(key)?.parse()
    }

    /// Full parameter record at sweep value `v`.
    pub(crate) fn at(&self, v: u64) -> Params {
        let mut p = self.fixed.clone();
        p.insert(self.sweep.to_string(), v.to_string());
        p
    }

    pub(crate) fn skipped(&self, v: u64, reason: &str) -> BoundReport {
        BoundReport::skipped(self.id, self.at(v), reason)
    }

    pub(crate) fn exact(&self, v: u64, holds: bool, detail: impl Into<String>) -> BoundReport {
        BoundReport::exact(self.id, self.at(v), holds, detail)
    }

    /// Every value skipped for the same reason.
    pub(crate) fn skip_all(&self, values: &[u64], reason: &str) -> Vec<BoundReport> {
        values.iter().map(|&v| self.skipped(v, reason)).collect()
    }
}

fn parse_u64(key: &str, v: &str) -> Result<u64> {
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("parameter `{key}` = `{v}` is not a non-negative integer")))
}

/// One unit of work of a scan: a group and an ascending run of sweep values.
#[derive(Clone, Debug)]
pub struct Task {
    pub group: Group,
    pub values: Vec<u64>,
}

/// Certified sides of a log-domain or real-valued comparison.
///
/// `claims` are the inequalities `lhs <= rhs` that must all hold; `shown`
/// is the pair reported as `lhs_log`, `rhs_log`.
pub(crate) struct Sides {
    pub shown: (Interval, Interval),
    pub claims: Vec<(Interval, Interval)>,
    pub detail: Option<String>,
}

impl Sides {
    pub fn single(lhs: Interval, rhs: Interval) -> Sides {
        Sides {
            shown: (lhs.clone(), rhs.clone()),
            claims: vec![(lhs, rhs)],
            detail: None,
        }
    }

    /// `lower <= value <= upper`, shown as the two bounds.
    pub fn sandwich(lower: Interval, value: Interval, upper: Interval) -> Sides {
        let detail = format!("value = {}", value.to_decimal(LOG_DIGITS));
        Sides {
            shown: (lower.clone(), upper.clone()),
            claims: vec![(lower, value.clone()), (value, upper)],
            detail: Some(detail),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Sides {
        self.detail = Some(detail.into());
        self
    }

    fn judge(&self, prec: u32) -> BoundVerdict {
        let mut verdict = Verdict::Holds;
        let mut margin: Option<Interval> = None;
        for (l, r) in &self.claims {
            let v = if l.certainly_le(r) {
                Verdict::Holds
            } else if l.certainly_gt(r) {
                Verdict::Fails
            } else {
                Verdict::Inconclusive
            };
            verdict = match (verdict, v) {
                (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
                (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
                _ => Verdict::Holds,
            };
            let m = r - l;
            if margin.as_ref().is_none_or(|cur| m.mid_f64() < cur.mid_f64()) {
                margin = Some(m);
            }
        }
        BoundVerdict {
            verdict,
            margin,
            precision_bits: prec,
        }
    }
}

/// Report for `sides` computed at `prec`; inconclusive comparisons are
/// recomputed from scratch by `redo` at doubled precision.
pub(crate) fn certified<F>(
    id: &str,
    params: Params,
    prec: u32,
    first: Sides,
    redo: F,
) -> Result<BoundReport>
where
    F: Fn(u32) -> Result<Sides>,
{
    let mut prec = prec;
    let mut sides = first;
    loop {
        let v = sides.judge(prec);
        if v.verdict != Verdict::Inconclusive || prec >= MAX_PRECISION {
            let r = BoundReport::logged(id, params, &sides.shown.0, &sides.shown.1, &v);
            return Ok(match sides.detail {
                Some(d) => r.with_detail(d),
                None => r,
            });
        }
        prec = (prec * 2).min(MAX_PRECISION);
        sides = redo(prec)?;
    }
}

/// Running `log lcm` of absorbed factorizations.
pub(crate) struct LogLcm {
    exps: HashMap<u64, u32>,
    log: Interval,
}

impl LogLcm {
    pub fn new(prec: u32) -> LogLcm {
        LogLcm {
            exps: HashMap::new(),
            log: Interval::zero(prec),
        }
    }

    pub fn absorb(&mut self, f: &FactoredInteger, logs: &mut PrimeLogs) {
        for (p, e) in f.iter() {
            let cur = self.exps.entry(p).or_insert(0);
            if e > *cur {
                self.log = &self.log + &logs.get(p).mul_i64(i64::from(e - *cur));
                *cur = e;
            }
        }
    }

    pub fn log(&self) -> &Interval {
        &self.log
    }
}

/// `log x` for `1 <= x <= limit²` as the sum of its prime logs.
pub(crate) fn ln_small(table: &PrimeTable, logs: &mut PrimeLogs, x: u64) -> Result<Interval> {
    Ok(logs.ln_factored(&table.factor(x)?))
}

/// Evaluates the catalog against one prime table at a base precision.
pub struct Catalog {
    table: PrimeTable,
    prec: u32,
    prime_lns: Vec<OnceLock<Vec<Interval>>>,
}

impl Default for Catalog {
    fn default() -> Catalog {
        Catalog::new(PrimeTable::new(DEFAULT_SIEVE_LIMIT), DEFAULT_PRECISION)
    }
}

impl Catalog {
    pub fn new(table: PrimeTable, prec: u32) -> Catalog {
        Catalog {
            prime_lns: (0..table.primes().len().div_ceil(LN_BLOCK)).map(|_| OnceLock::new()).collect(),
            table,
            prec: prec.max(16),
        }
    }

    pub fn table(&self) -> &PrimeTable {
        &self.table
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// `log p` of the `i`-th sieved prime at the base precision; computed in
    /// blocks on first use and shared by all tasks.
    pub(crate) fn prime_ln(&self, i: usize) -> &Interval {
        let block = &self.prime_lns[i / LN_BLOCK];
        let lns = block.get_or_init(|| {
            let primes = self.table.primes();
            let lo = i / LN_BLOCK * LN_BLOCK;
            primes[lo..(lo + LN_BLOCK).min(primes.len())]
                .iter()
                .map(|&p| ln_u64(p, self.prec).expect("primes are positive"))
                .collect()
        });
        &lns[i % LN_BLOCK]
    }

    /// One check at one parameter point.
    pub fn check(&self, id: &str, params: &Params) -> Result<BoundReport> {
        let grid: Grid = params
            .iter()
            .map(|(k, v)| (k.clone(), vec![v.clone()]))
            .collect();
        let mut out = self.scan(id, &grid)?;
        out.pop()
            .ok_or_else(|| Error::Invariant("pointwise check produced no report".into()))
    }

    /// Splits a scan into tasks; concatenating the task outputs in order gives
    /// the scan result.
    ///
    /// Groups follow the cartesian product of the fixed parameters in key
    /// order, values in the order given; sweep values ascend.
    pub fn plan(&self, id: &str, grid: &Grid) -> Result<Vec<Task>> {
        let e = entry(id)?;
        let info = e.info;
        for key in grid.keys() {
            if !info.params.iter().any(|p| p.name == key) {
                return Err(Error::Parse(format!(
                    "`{id}` takes no parameter `{key}`; expected {}",
                    param_names(&info)
                )));
            }
        }
        for p in info.params {
            match grid.get(p.name) {
                Some(v) if !v.is_empty() => {}
                _ => {
                    return Err(Error::Parse(format!(
                        "`{id}` needs a value for `{}`; expected {}",
                        p.name,
                        param_names(&info)
                    )))
                }
            }
        }
        let mut values: Vec<u64> = grid[info.sweep]
            .iter()
            .map(|v| parse_u64(info.sweep, v))
            .collect::<Result<_>>()?;
        values.sort_unstable();
        values.dedup();
        let mut fixed: Vec<Params> = vec![Params::new()];
        for (key, vals) in grid.iter().filter(|(k, _)| k.as_str() != info.sweep) {
            fixed = fixed
                .into_iter()
                .flat_map(|base| {
                    vals.iter().map(move |v| {
                        let mut p = base.clone();
                        p.insert(key.clone(), v.trim().to_string());
                        p
                    })
                })
                .collect();
        }
        let mut tasks = Vec::new();
        for f in fixed {
            for chunk in values.chunks(CHUNK) {
                tasks.push(Task {
                    group: Group {
                        id: info.id,
                        sweep: info.sweep,
                        fixed: f.clone(),
                    },
                    values: chunk.to_vec(),
                });
            }
        }
        Ok(tasks)
    }

    /// Reports of one task, in ascending sweep order.
    pub fn run(&self, task: &Task) -> Result<Vec<BoundReport>> {
        let e = entry(task.group.id)?;
        let out = (e.run)(self, &task.group, &task.values)?;
        if out.len() != task.values.len() {
            return Err(Error::Invariant(format!(
                "`{}` produced {} reports for {} points",
                task.group.id,
                out.len(),
                task.values.len()
            )));
        }
        Ok(out)
    }

    /// One report per grid point, in deterministic order.
    pub fn scan(&self, id: &str, grid: &Grid) -> Result<Vec<BoundReport>> {
        let tasks = self.plan(id, grid)?;
        let parts: Vec<Result<Vec<BoundReport>>> = tasks.par_iter().map(|t| self.run(t)).collect();
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }

    /// Convergence series of a probe at the given points.
    pub fn probe(&self, id: &str, args: &Params, points: &[u64]) -> Result<ProbeSeries> {
        probes::probe(self, id, args, points)
    }
}

fn param_names(info: &CheckInfo) -> String {
    info.params.iter().map(|p| p.name).collect::<Vec<_>>().join(", ")
}

fn run_quadratic(cat: &Catalog, g: &Group, values: &[u64]) -> Result<Vec<BoundReport>> {
    let c = g.u64("c")?;
    let m = g.u64("m")?;
    if c == 0 {
        return Ok(g.skip_all(values, "needs c >= 1"));
    }
    if m == 0 {
        return Ok(g.skip_all(values, "needs m >= 1"));
    }
    let (below, rest): (Vec<u64>, Vec<u64>) = values.iter().partition(|&&n| n < m);
    let mut out = g.skip_all(&below, "needs m <= n");
    debug_assert!(QUADRATIC_CHECKS.contains(&g.id));
    out.extend(quadratic_lcm::quadratic_scan(g.id, &cat.table, &[c], &[m], &rest, cat.prec)?);
    Ok(out)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    pub fn small() -> Catalog {
        Catalog::new(PrimeTable::new(100_000), DEFAULT_PRECISION)
    }

    pub fn grid(pairs: &[(&str, Vec<u64>)]) -> Grid {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.iter().map(|x| x.to_string()).collect()))
            .collect()
    }

    /// Scan output equals pointwise checks at every grid point.
    pub fn assert_scan_is_pointwise(cat: &Catalog, id: &str, g: &Grid) -> Vec<BoundReport> {
        let out = cat.scan(id, g).unwrap();
        for r in &out {
            assert_eq!(&cat.check(id, &r.params).unwrap(), r, "{id} at {}", r.params_text());
        }
        out
    }

    pub fn verdicts(out: &[BoundReport], v: Verdict) -> usize {
        out.iter().filter(|r| r.verdict == v).count()
    }
}
