//! `compute`: exact values of the underlying objects.

use lcm_core::bounds_catalog::m_of;
use lcm_core::exact_arith::lcm_bigints;
use lcm_core::identities::a_binomial_row;
use lcm_core::quadratic_lcm::{bezout_coefficients, QuadRational};
use lcm_core::sequences::{
    extract_u, myerson_divisor, positive_terms, sylvester, SequenceSpec, UMethod, SYLVESTER_CAP,
};
use lcm_core::{Error, Result};

pub const OBJECTS: &str = "lcm, u-decomp, row, bezout, divisor, M";

fn arity(object: &str, args: &[String], names: &[&str]) -> Result<()> {
    if args.len() != names.len() {
        return Err(Error::Parse(format!(
            "`compute {object}` takes {}",
            names.iter().map(|n| format!("<{n}>")).collect::<Vec<_>>().join(" ")
        )));
    }
    Ok(())
}

fn int(name: &str, v: &str) -> Result<u64> {
    v.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("<{name}> = `{v}` is not a non-negative integer")))
}

fn spec(v: &str) -> Result<SequenceSpec> {
    v.parse()
}

fn big(v: &impl std::fmt::Display) -> Vec<String> {
    let s = v.to_string();
    let digits = s.trim_start_matches('-').len();
    vec![s, format!("({digits} digits)")]
}

fn quad(q: &QuadRational, c: u64) -> String {
    format!("{} + ({})*sqrt(-{c})", q.x, q.y)
}

/// Output lines of `compute <object> <args…>`.
pub fn compute(object: &str, args: &[String]) -> Result<Vec<String>> {
    match object {
        "lcm" => {
            arity(object, args, &["spec", "m", "n"])?;
            let s = spec(&args[0])?;
            let (m, n) = (int("m", &args[1])?, int("n", &args[2])?);
            let first = if s.zero_based() { 0 } else { 1 };
            if m < first || m > n {
                return Err(Error::Domain(format!("needs {first} <= m <= n")));
            }
            let terms = positive_terms(&s, n as usize)?;
            Ok(big(&lcm_bigints(&terms[(m - first) as usize..])?))
        }
        "u-decomp" => {
            arity(object, args, &["spec", "n"])?;
            let s = spec(&args[0])?;
            if s.zero_based() {
                return Err(Error::Domain(format!("{s} is indexed from 0")));
            }
            let terms = positive_terms(&s, int("n", &args[1])? as usize)?;
            let a = extract_u(&terms, UMethod::Moebius)?;
            let b = extract_u(&terms, UMethod::Nowicki)?;
            if a.u != b.u {
                return Err(Error::Invariant("Moebius and lcm-ratio u-decompositions differ".into()));
            }
            Ok(a.u.iter().enumerate().map(|(i, u)| format!("u_{} = {u}", i + 1)).collect())
        }
        "row" => {
            arity(object, args, &["spec", "n"])?;
            let row = a_binomial_row(&spec(&args[0])?, int("n", &args[1])? as usize)?;
            Ok(vec![join(&row.coeffs)])
        }
        "bezout" => {
            arity(object, args, &["c", "k"])?;
            let (c, k) = (int("c", &args[0])?, int("k", &args[1])?);
            let b = bezout_coefficients(c, k)?;
            if !b.residual_holds() {
                return Err(Error::Invariant(format!("sigma_k P_k != 1 at c={c}, k={k}")));
            }
            let (r, s) = b.cleared()?;
            let mut out: Vec<String> = b
                .theta
                .iter()
                .enumerate()
                .map(|(l, t)| format!("theta_{k},{l} = {}", quad(t, c)))
                .collect();
            out.push(format!("d = {}", b.d()));
            out.push(format!("r_k = {}", join(&r)));
            out.push(format!("s_k = {}", join(&s)));
            Ok(out)
        }
        "divisor" => {
            arity(object, args, &["spec", "n"])?;
            let s = spec(&args[0])?;
            let n = int("n", &args[1])? as usize;
            let terms = positive_terms(&s, n)?;
            let q = myerson_divisor(&terms, &sylvester(SYLVESTER_CAP)?, n)?;
            let l = lcm_bigints(&terms)?;
            let divides = q.is_integer() && (q.to_integer() % &l) == 0.into();
            let mut out = big(&q);
            out.push(format!("integral: {}", yes(q.is_integer())));
            out.push(format!("multiple of lcm: {}", yes(divides)));
            Ok(out)
        }
        "M" => {
            arity(object, args, &["r"])?;
            Ok(vec![m_of(int("r", &args[0])?)?.to_string()])
        }
        _ => Err(Error::Unknown {
            name: object.to_string(),
            valid: OBJECTS.to_string(),
        }),
    }
}

fn join<T: std::fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
