//! Report and probe rendering.

use std::io::Write;

use clap::ValueEnum;
use lcm_core::bounds_catalog::{CheckInfo, ProbeInfo, ProbeSeries};
use lcm_core::report::{BoundReport, LOG_DIGITS};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub const CSV_HEADER: [&str; 6] = ["check_id", "params", "lhs_log", "rhs_log", "verdict", "elapsed_ms"];

/// Streaming report writer; JSON output is one object per line.
pub struct ReportSink<W: Write> {
    format: Format,
    out: W,
    started: bool,
}

impl<W: Write> ReportSink<W> {
    pub fn new(format: Format, out: W) -> ReportSink<W> {
        ReportSink {
            format,
            out,
            started: false,
        }
    }

    pub fn write(&mut self, r: &BoundReport) -> std::io::Result<()> {
        match self.format {
            Format::Text => writeln!(self.out, "{r}"),
            Format::Json => {
                serde_json::to_writer(&mut self.out, r)?;
                writeln!(self.out)
            }
            Format::Csv => {
                if !self.started {
                    self.started = true;
                    csv_row(&mut self.out, &CSV_HEADER)?;
                }
                let elapsed = r.elapsed_ms.map(|v| v.to_string()).unwrap_or_default();
                csv_row(
                    &mut self.out,
                    &[
                        &r.check_id,
                        &r.params_text(),
                        r.lhs_log.as_deref().unwrap_or(""),
                        r.rhs_log.as_deref().unwrap_or(""),
                        r.verdict.as_str(),
                        &elapsed,
                    ],
                )
            }
        }
    }

    pub fn flush(&mut self) -> std::io::Result<()> {
        self.out.flush()
    }
}

fn csv_row<W: Write>(out: &mut W, fields: &[&str]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(fields)?;
    w.flush()
}

fn dec(i: &lcm_core::exact_arith::Interval) -> String {
    i.to_decimal(LOG_DIGITS)
}

pub fn probe<W: Write>(format: Format, s: &ProbeSeries, out: &mut W) -> std::io::Result<()> {
    let target = dec(&s.target);
    let rows: Vec<(u64, String, String)> = s
        .points
        .iter()
        .zip(s.distances())
        .map(|(p, d)| (p.n, dec(&p.ratio), format!("{d:.6e}")))
        .collect();
    match format {
        Format::Text => {
            let params: Vec<String> = s.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(out, "# {} [{}] target = {target}", s.probe_id, params.join(";"))?;
            writeln!(out, "{:>12}  {:>26}  {:>26}  {:>12}", "n", "ratio", "target", "distance")?;
            for (n, r, d) in rows {
                writeln!(out, "{n:>12}  {r:>26}  {target:>26}  {d:>12}")?;
            }
            Ok(())
        }
        Format::Csv => {
            csv_row(out, &["n", "ratio", "target", "distance"])?;
            for (n, r, d) in rows {
                csv_row(out, &[&n.to_string(), &r, &target, &d])?;
            }
            Ok(())
        }
        Format::Json => {
            let points: Vec<_> = rows
                .into_iter()
                .map(|(n, r, d)| json!({"n": n, "ratio": r, "target": target, "distance": d}))
                .collect();
            let v = json!({
                "probe_id": s.probe_id,
                "params": s.params,
                "target": target,
                "points": points,
            });
            serde_json::to_writer(&mut *out, &v)?;
            writeln!(out)
        }
    }
}

pub fn checks<W: Write>(format: Format, infos: &[CheckInfo], out: &mut W) -> std::io::Result<()> {
    let params = |i: &CheckInfo| i.params.iter().map(|p| p.name).collect::<Vec<_>>().join(",");
    match format {
        Format::Text => {
            for i in infos {
                writeln!(out, "{:<24} {:<12} {}", i.id, params(i), i.summary)?;
            }
            Ok(())
        }
        Format::Csv => {
            csv_row(out, &["check_id", "params", "sweep", "exact", "summary"])?;
            for i in infos {
                csv_row(out, &[i.id, &params(i), i.sweep, &i.exact.to_string(), i.summary])?;
            }
            Ok(())
        }
        Format::Json => {
            let v: Vec<_> = infos
                .iter()
                .map(|i| {
                    json!({
                        "check_id": i.id,
                        "params": i.params.iter().map(|p| p.name).collect::<Vec<_>>(),
                        "sweep": i.sweep,
                        "exact": i.exact,
                        "summary": i.summary,
                    })
                })
                .collect();
            serde_json::to_writer(&mut *out, &v)?;
            writeln!(out)
        }
    }
}

pub fn probes<W: Write>(format: Format, infos: &[ProbeInfo], out: &mut W) -> std::io::Result<()> {
    let params = |i: &ProbeInfo| {
        i.params
            .iter()
            .map(|(k, d)| format!("{k}={d}"))
            .collect::<Vec<_>>()
            .join(";")
    };
    match format {
        Format::Text => {
            for i in infos {
                writeln!(out, "{:<20} {:<16} {} -> {}", i.id, params(i), i.ratio, i.target)?;
            }
            Ok(())
        }
        Format::Csv => {
            csv_row(out, &["probe_id", "params", "ratio", "target"])?;
            for i in infos {
                csv_row(out, &[i.id, &params(i), i.ratio, i.target])?;
            }
            Ok(())
        }
        Format::Json => {
            let v: Vec<_> = infos
                .iter()
                .map(|i| json!({"probe_id": i.id, "defaults": params(i), "ratio": i.ratio, "target": i.target}))
                .collect();
            serde_json::to_writer(&mut *out, &v)?;
            writeln!(out)
        }
    }
}
