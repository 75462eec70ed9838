//! Command-line parameter grammar: `--n 1..5000`, `--c 1,2,5`, `--f poly:1,0,1`.

use std::collections::BTreeMap;

use lcm_core::bounds_catalog::{CheckInfo, Grid, ParamKind, Params};
use lcm_core::{Error, Result};

/// Splits `--key value` / `--key=value` pairs.
pub fn pairs(args: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let key = a
            .strip_prefix("--")
            .filter(|k| !k.is_empty())
            .ok_or_else(|| Error::Parse(format!("expected `--name value`, got `{a}`")))?;
        let (key, value) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Parse(format!("`--{key}` needs a value")))?;
                (key.to_string(), v.clone())
            }
        };
        if out.iter().any(|(k, _)| *k == key) {
            return Err(Error::Parse(format!("`--{key}` given twice")));
        }
        out.push((key, value));
    }
    Ok(out)
}

/// Inclusive ranges `a..b` and comma lists, in the order written.
pub fn int_values(key: &str, text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse(format!("`--{key} {text}` is not a range `a..b` or a list `a,b,c`"));
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        match item.split_once("..") {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

/// Scan grid of a check from its command-line flags.
pub fn check_grid(info: &CheckInfo, args: &[String]) -> Result<Grid> {
    let mut grid = BTreeMap::new();
    for (key, value) in pairs(args)? {
        let kind = info
            .params
            .iter()
            .find(|p| p.name == key)
            .map(|p| p.kind)
            .ok_or_else(|| {
                let names: Vec<_> = info.params.iter().map(|p| p.name).collect();
                Error::Parse(format!(
                    "`{}` takes no parameter `--{key}`; expected {}",
                    info.id,
                    names.join(", ")
                ))
            })?;
        let values = match kind {
            ParamKind::Int => int_values(&key, &value)?.iter().map(u64::to_string).collect(),
            ParamKind::Spec => vec![value],
        };
        grid.insert(key, values);
    }
    Ok(grid)
}

/// Probe points and the remaining probe arguments.
pub fn probe_args(args: &[String]) -> Result<(Vec<u64>, Params)> {
    let mut points = None;
    let mut rest = Params::new();
    for (k, v) in pairs(args)? {
        if k == "points" {
            points = Some(int_values(&k, &v)?);
        } else {
            rest.insert(k, v);
        }
    }
    let points = points.ok_or_else(|| Error::Parse("probe needs `--points`".into()))?;
    Ok((points, rest))
}
