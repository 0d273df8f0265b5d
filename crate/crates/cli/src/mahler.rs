use std::fs::File;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use polyball::arith::{decimal_string, rational_string};
use polyball::volume::{mahler_sweep, MahlerReport};
use serde::{Deserialize, Serialize};
use serde_json::json;

/// CSV row; every exact value is a canonical rational string.
#[derive(Debug, Serialize, Deserialize)]
struct Row {
    d: usize,
    k: usize,
    mahler: String,
    bound: String,
    ratio: String,
    satisfied: bool,
}

fn rows(report: &MahlerReport) -> Vec<Row> {
    report
        .rows
        .iter()
        .map(|r| Row {
            d: r.d,
            k: r.k,
            mahler: rational_string(&r.mahler),
            bound: rational_string(&r.bound),
            ratio: decimal_string(&r.ratio(), 12),
            satisfied: r.satisfied,
        })
        .collect()
}

fn to_csv(report: &MahlerReport) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows(report) {
        w.serialize(row)?;
    }
    w.into_inner().context("flushing CSV")
}

fn to_json(report: &MahlerReport) -> String {
    let pairs = |v: &[(usize, usize)]| v.iter().map(|&(d, k)| json!([d, k])).collect::<Vec<_>>();
    let value = json!({
        "d_max": report.d_max,
        "rows": rows(report),
        "violations": pairs(&report.violations),
        "equalities": pairs(&report.equalities),
        "minimizers": pairs(&report.minimizers),
    });
    let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
    s.push('\n');
    s
}

fn summary(report: &MahlerReport) -> String {
    format!(
        "{} rows, {} violations{}; equality only at k = 1 and k = d: {}",
        report.rows.len(),
        report.violations.len(),
        if report.violations.is_empty() {
            String::new()
        } else {
            format!(" at {:?}", report.violations)
        },
        if report.equality_only_at_endpoints() {
            "yes"
        } else {
            "no"
        }
    )
}

pub fn cmd_mahler(
    out: &mut impl Write,
    dmax: usize,
    json: bool,
    path: Option<&Path>,
) -> anyhow::Result<u8> {
    let report = mahler_sweep(dmax).map_err(crate::usage)?;
    let bytes = if json {
        to_json(&report).into_bytes()
    } else {
        to_csv(&report)?
    };
    match path {
        Some(path) => {
            let mut f =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            f.write_all(&bytes)
                .with_context(|| format!("writing {}", path.display()))?;
            writeln!(out, "{}", summary(&report))?;
        }
        None => {
            out.write_all(&bytes)?;
            eprintln!("{}", summary(&report));
        }
    }
    Ok(if report.violations.is_empty() { 0 } else { 1 })
}
