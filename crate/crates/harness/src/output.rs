//! CSV and JSON writers. CSV files open with `# meta` and optional `# fits`
//! comment lines holding one-line JSON, followed by a header row.

use crate::decay::DecayFit;
use crate::error::Result;
use crate::knapp::KnappScan;
use crate::scan::ScanResult;
use latdisp::AdmissiblePair;
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;

pub const SCHEMA_VERSION: u32 = 1;

/// Metadata block shared by every output.
pub fn metadata(command: &str, config: Value) -> Value {
    json!({
        "tool": "latdisp",
        "version": env!("CARGO_PKG_VERSION"),
        "schema": SCHEMA_VERSION,
        "command": command,
        "config": config,
    })
}

/// Shortest round-trip decimal; "inf"/"-inf"/"NaN" for non-finite values.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn exponent(x: f64) -> Value {
    if x.is_infinite() {
        Value::String("inf".into())
    } else {
        json!(x)
    }
}

/// serde `serialize_with` for exponents that may be infinite.
pub fn ser_exponent<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*x)
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub comments: Vec<(&'static str, Value)>,
}

pub fn write_csv<W: Write>(mut w: W, meta: &Value, table: &Table) -> Result<()> {
    writeln!(w, "# meta {}", serde_json::to_string(meta)?)?;
    for (key, value) in &table.comments {
        writeln!(w, "# {key} {}", serde_json::to_string(value)?)?;
    }
    let mut csv = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    csv.write_record(&table.header)?;
    for row in &table.rows {
        csv.write_record(row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize>(mut w: W, meta: &Value, result: &T) -> Result<()> {
    let doc = json!({ "meta": meta, "result": serde_json::to_value(result)? });
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    Ok(())
}

pub const SCAN_COLUMNS: [&str; 10] = [
    "experiment",
    "h",
    "m",
    "label",
    "bound",
    "member",
    "param",
    "lhs",
    "rhs",
    "ratio",
];

pub fn scan_table(scan: &ScanResult) -> Table {
    let opt = |x: Option<String>| x.unwrap_or_default();
    let rows = scan
        .cells
        .iter()
        .map(|c| {
            vec![
                scan.metadata.experiment.clone(),
                num(c.h),
                c.m.to_string(),
                c.label.clone(),
                c.bound.name().into(),
                opt(c.member.map(|j| j.to_string())),
                opt(c.param.map(num)),
                num(c.lhs),
                num(c.rhs),
                num(c.ratio),
            ]
        })
        .collect();
    Table {
        header: SCAN_COLUMNS.to_vec(),
        rows,
        comments: vec![
            ("scan", serde_json::to_value(&scan.metadata).expect("plain data")),
            ("fits", serde_json::to_value(&scan.fits).expect("plain data")),
        ],
    }
}

pub const DECAY_COLUMNS: [&str; 12] = [
    "kind",
    "d",
    "h",
    "m",
    "band",
    "t_min",
    "t_max",
    "points",
    "slope",
    "intercept",
    "r_squared",
    "max_boundary_fraction",
];

pub fn decay_table(fit: &DecayFit) -> Table {
    let bmax = fit.boundary_fractions.iter().copied().fold(0.0, f64::max);
    Table {
        header: DECAY_COLUMNS.to_vec(),
        rows: vec![vec![
            fit.kind.into(),
            fit.d.to_string(),
            num(fit.h),
            fit.m.to_string(),
            fit.band.label(),
            num(fit.times[0]),
            num(*fit.times.last().expect("at least two times")),
            fit.times.len().to_string(),
            num(fit.slope),
            num(fit.intercept),
            num(fit.r_squared),
            num(bmax),
        ]],
        comments: vec![("samples", json!({ "t": fit.times, "sup_norm": fit.sup_norms }))],
    }
}

pub const KNAPP_COLUMNS: [&str; 14] = [
    "d",
    "h",
    "epsilon",
    "s",
    "q",
    "r",
    "left_norm",
    "right_norm",
    "ratio",
    "predicted_left",
    "predicted_right",
    "block_points",
    "right_truncated",
    "eps_over_h2",
];

pub fn knapp_table(scan: &KnappScan) -> Table {
    let rows = scan
        .reports
        .iter()
        .map(|r| {
            vec![
                r.d.to_string(),
                num(r.h),
                num(r.epsilon),
                num(r.s),
                num(r.q),
                num(r.r),
                num(r.left_norm),
                num(r.right_norm),
                num(r.ratio),
                num(r.predicted_left_scaling),
                num(r.predicted_right_scaling),
                r.block_points.to_string(),
                r.right_truncated.to_string(),
                num(r.epsilon / (r.h * r.h)),
            ]
        })
        .collect();
    let fits = json!({
        "left_eps_exponent": scan.left_eps_fit.map(|f| f.slope),
        "right_eps_exponent": scan.right_eps_fit.map(|f| f.slope),
        "predicted_left_eps_exponent": scan.predicted_left_eps_exponent,
        "predicted_right_eps_exponent": scan.predicted_right_eps_exponent,
        "ratio_h_exponent": scan.ratio_h_fit.map(|f| f.slope),
    });
    Table {
        header: KNAPP_COLUMNS.to_vec(),
        rows,
        comments: vec![("fits", fits)],
    }
}

pub const PAIR_COLUMNS: [&str; 4] = ["d", "q", "r", "defect"];

pub fn pairs_table(pairs: &[AdmissiblePair]) -> Table {
    Table {
        header: PAIR_COLUMNS.to_vec(),
        rows: pairs
            .iter()
            .map(|p| vec![p.d.to_string(), num(p.q), num(p.r), num(p.defect())])
            .collect(),
        comments: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let pairs = latdisp::admissible_pairs(1, 3).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &metadata("pairs", json!({"d": 1})), &pairs_table(&pairs)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# meta {"));
        assert_eq!(lines[1], "d,q,r,defect");
        assert_eq!(lines.len(), 5);
        assert!(text.contains(",inf,") || text.contains("6,inf"));
    }

    #[test]
    fn infinite_exponents_are_tokens() {
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(exponent(f64::INFINITY), json!("inf"));
        assert_eq!(exponent(4.0), json!(4.0));
    }
}
